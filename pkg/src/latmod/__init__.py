"""latmod: finite-lattice toolkit around balanced-triple closures.

Submodules:
    core        lattice representation, validation, structural queries
    catalog     named lattices, grid decorations, small-lattice enumeration
    rank        step maps, closure iteration, modularity rank
    construct   balanced-triple/quadruple lattices over a base
    congruence  congruence lattices and extension verification
    tensor      bi-ideals, tensor products, hom representation
    symbolic    infinite-lattice oracles and divergence demos
    cli         command-line front end
"""

from .core import CoverList, FiniteLattice, from_covers, lattice_from_leq, parse, serialize
from .errors import LatticeError

__all__ = [
    "CoverList",
    "FiniteLattice",
    "LatticeError",
    "from_covers",
    "lattice_from_leq",
    "parse",
    "serialize",
]

__version__ = "0.1.0"
