"""Named constructors for the lattices the toolkit works with, the
grid-decoration machinery, and the small-lattice enumerator."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from random import Random
from typing import Iterator, Literal, Optional

import numpy as np

from . import core
from .core import CoverList, FiniteLattice, from_covers, direct_product, lattice_from_leq
from .errors import (
    ArgumentOutOfRange,
    DecorationConflict,
    ReconstructionInvalid,
    SizeLimitExceeded,
)

SUBSPACE_CAP = 4096


def chain(n: int) -> FiniteLattice:
    """The n-element chain C_n."""
    if n < 1:
        raise ArgumentOutOfRange("chain needs n >= 1")
    covers = tuple((i, i + 1) for i in range(n - 1))
    return from_covers(CoverList(n, covers), name=f"C{n}")


def boolean(n: int) -> FiniteLattice:
    """The Boolean lattice B_n with 2^n elements; boolean(0) is C_1."""
    if n < 0:
        raise ArgumentOutOfRange("boolean needs n >= 0")
    size = 1 << n
    covers = tuple((s, s | (1 << b)) for s in range(size) for b in range(n)
                   if not s & (1 << b))
    names = tuple("{" + ",".join(str(b) for b in range(n) if s & (1 << b)) + "}"
                  for s in range(size))
    return from_covers(CoverList(size, covers, names), name=f"B{n}")


def m_k(k: int) -> FiniteLattice:
    """M_k: the height-2 lattice with k atoms (M_3, M_4, ...)."""
    if k < 3:
        raise ArgumentOutOfRange("m_k needs k >= 3")
    top = k + 1
    covers = tuple((0, a) for a in range(1, k + 1)) + tuple((a, top) for a in range(1, k + 1))
    atom_names = "abcdefghij"
    names = ("0",) + tuple(atom_names[i] if i < len(atom_names) else f"a{i}"
                           for i in range(k)) + ("1",)
    return from_covers(CoverList(k + 2, covers, names), name=f"M{k}")


def n5() -> FiniteLattice:
    """The pentagon: zero o, unit i, chain o < b < a < i, and side element c."""
    covers = ((0, 1), (1, 2), (0, 3), (2, 4), (3, 4))
    return from_covers(CoverList(5, covers, ("o", "b", "a", "c", "i")), name="N5")


def c2sq() -> FiniteLattice:
    """The four-element square C_2^2."""
    lat = direct_product(chain(2), chain(2), name="C2xC2")
    return lat


_FANO_LINES = ("124", "235", "346", "457", "561", "672", "713")


def fano() -> FiniteLattice:
    """The 16-element subspace lattice of the Fano plane.

    Points are named 1..7; the seven lines are 124, 235, 346, 457, 561,
    672, 713; the whole plane is PL.
    """
    names = ("0",) + tuple(str(p) for p in range(1, 8)) + _FANO_LINES + ("PL",)
    covers = []
    for p in range(1, 8):
        covers.append((0, p))
    for li, line in enumerate(_FANO_LINES):
        for ch in line:
            covers.append((int(ch), 8 + li))
        covers.append((8 + li, 15))
    return from_covers(CoverList(16, tuple(covers), names), name="F7")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


def subspace_lattice(q: int, d: int, cap: int = SUBSPACE_CAP) -> FiniteLattice:
    """All subspaces of the d-dimensional vector space over the q-element
    field (prime q), ordered by inclusion."""
    if not _is_prime(q):
        raise ArgumentOutOfRange(f"q={q} not in the supported set (primes)")
    if d < 1:
        raise ArgumentOutOfRange("d >= 1 required")
    if q ** d > cap:
        raise SizeLimitExceeded(f"q^d = {q ** d} exceeds cap {cap}")
    zero = (0,) * d

    def extend(space: frozenset, v: tuple) -> frozenset:
        return frozenset(tuple((s[i] + c * v[i]) % q for i in range(d))
                         for s in space for c in range(q))

    vectors = [tuple(vec) for vec in np.ndindex(*([q] * d))]
    found = {frozenset([zero])}
    queue = [frozenset([zero])]
    while queue:
        space = queue.pop()
        for v in vectors:
            if v not in space:
                bigger = extend(space, v)
                if bigger not in found:
                    found.add(bigger)
                    queue.append(bigger)
    subspaces = sorted(found, key=lambda s: (len(s), sorted(s)))
    m = len(subspaces)
    leq = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for k in range(m):
            leq[i, k] = subspaces[i] <= subspaces[k]
    names = [f"S{i}d{round(np.log(len(s)) / np.log(q))}" for i, s in enumerate(subspaces)]
    return lattice_from_leq(leq, names=names, name=f"Sub({q},{d})")


# -- grid decorations (doubling elements over a chain-product grid) ------

@dataclass(frozen=True)
class GridDecoration:
    """A chain-product grid C_p x C_q plus doubling elements.

    Each addition is ("n", a, b) on a prime interval [a, b] of the grid
    (making it a 3-chain) or ("m", a, b) on a prime square (making it an
    M_3).  a and b are (row, col) grid coordinates.
    """

    rows: int
    cols: int
    added: tuple[tuple[str, tuple[int, int], tuple[int, int]], ...] = ()

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ArgumentOutOfRange("grid chains need at least one element")


def _grid_index(cols: int, coord: tuple[int, int]) -> int:
    return coord[0] * cols + coord[1]


def decorate_grid(dec: GridDecoration) -> FiniteLattice:
    """Build the decorated lattice and verify the structural conditions.

    Raises DecorationConflict naming the violated clause (C2/C3/C4).
    """
    rows, cols = dec.rows, dec.cols
    grid = direct_product(chain(rows), chain(cols), name="grid")
    lowers, uppers, intervals = set(), set(), set()
    for kind, a, b in dec.added:
        for coord in (a, b):
            if not (0 <= coord[0] < rows and 0 <= coord[1] < cols):
                raise DecorationConflict("C4", f"coordinate {coord} outside grid")
        da = (b[0] - a[0], b[1] - a[1])
        if kind == "n":
            if sorted(da) != [0, 1]:
                raise DecorationConflict("C4", f"[{a},{b}] is not a prime interval")
        elif kind == "m":
            if da != (1, 1):
                raise DecorationConflict("C4", f"[{a},{b}] is not a prime square")
        else:
            raise DecorationConflict("C4", f"unknown decoration kind {kind!r}")
        if (a, b) in intervals:
            raise DecorationConflict("C2", f"two elements on interval [{a},{b}]")
        if a in lowers:
            raise DecorationConflict("C3", f"two added elements share lower bound {a}")
        if b in uppers:
            raise DecorationConflict("C3", f"two added elements share upper bound {b}")
        intervals.add((a, b))
        lowers.add(a)
        uppers.add(b)

    ng = grid.n
    h = len(dec.added)
    n = ng + h
    leq = np.zeros((n, n), dtype=bool)
    leq[:ng, :ng] = grid.leq
    names = list(grid.names)
    bounds = []
    for i, (kind, a, b) in enumerate(dec.added):
        e = ng + i
        ia, ib = _grid_index(cols, a), _grid_index(cols, b)
        bounds.append((ia, ib))
        leq[e, e] = True
        leq[:ng, e] = grid.leq[:, ia]   # x <= e iff x <= a
        leq[e, :ng] = grid.leq[ib, :]   # e <= y iff b <= y
        names.append(f"{kind}({a[0]},{a[1]})")
    for i, (_, ib1) in enumerate(bounds):
        for k, (ia2, _) in enumerate(bounds):
            if i != k and grid.leq[ib1, ia2]:
                leq[ng + i, ng + k] = True  # e_i <= b_i <= a_k <= e_k
    lat = lattice_from_leq(leq, names=names,
                           name=f"grid{rows}x{cols}+{h}")
    return lat


def witness7() -> FiniteLattice:
    """The 7-element exactly-3-modular lattice: the C_3 x C_2 grid plus the
    doubling element on the prime interval [(1,0), (1,1)]."""
    return decorate_grid(GridDecoration(3, 2, (("n", (1, 0), (1, 1)),)))


def check_c1_c4(lat: FiniteLattice, grid_elements: list[int]) -> tuple[bool, str]:
    """Verify clauses (C1)-(C7) for the given grid designation.

    Returns (ok, diagnostic); the diagnostic names the first violated
    clause and its witnesses.
    """
    g = sorted(set(grid_elements))
    gset = set(g)
    # (C1): {0,1}-sublattice of the form C x D
    if lat.bottom not in gset or lat.top not in gset:
        return False, "C1: grid misses a bound"
    for a in g:
        for b in g:
            if lat.meet(a, b) not in gset or lat.join(a, b) not in gset:
                return False, f"C1: grid not a sublattice at ({a},{b})"
    sub = core.interval(lat, lat.bottom, lat.top)  # whole lattice; use restriction
    remap = {e: i for i, e in enumerate(g)}
    gleq = lat.leq[np.ix_(g, g)]
    try:
        gl = lattice_from_leq(gleq.copy(), names=[lat.names[e] for e in g])
    except Exception:
        return False, "C1: grid is not a lattice"
    factored = None
    m = len(g)
    for p in range(1, m + 1):
        if m % p:
            continue
        q = m // p
        iso = core.find_isomorphism(gl, direct_product(chain(p), chain(q)))
        if iso is not None:
            factored = (p, q, iso)
            break
    if factored is None:
        return False, "C1: grid is not a product of two chains"
    p, q, iso = factored
    coord = {}  # lattice element -> (row, col) in C_p x C_q
    for i, e in enumerate(g):
        k = iso[i]
        coord[e] = (k // q, k % q)

    h = [e for e in lat.elements() if e not in gset]
    # (C2): doubly irreducible
    for x in h:
        if len(lat.lower_covers(x)) != 1 or len(lat.upper_covers(x)) != 1:
            return False, f"C2: element {lat.names[x]} not doubly irreducible"

    def under(x):  # largest grid element below x
        cands = [e for e in g if lat.le(e, x)]
        best = cands[0]
        for e in cands[1:]:
            best = e if lat.le(best, e) else best
        for e in cands:
            if not lat.le(e, best):
                return None
        return best

    def over(x):  # smallest grid element above x
        cands = [e for e in g if lat.le(x, e)]
        best = cands[0]
        for e in cands[1:]:
            best = e if lat.le(e, best) else best
        for e in cands:
            if not lat.le(best, e):
                return None
        return best

    un = {x: under(x) for x in h}
    ov = {x: over(x) for x in h}
    if any(v is None for v in un.values()) or any(v is None for v in ov.values()):
        return False, "C1: some element lacks grid bounds"
    # (C3): equal lower bounds force equality, and dually
    for x in h:
        for y in h:
            if x < y and un[x] == un[y]:
                return False, f"C3: {lat.names[x]} and {lat.names[y]} share lower bound"
            if x < y and ov[x] == ov[y]:
                return False, f"C3: {lat.names[x]} and {lat.names[y]} share upper bound"
    # (C4): interval shapes
    for x in h:
        a, b = un[x], ov[x]
        ra, ca = coord[a]
        rb, cb = coord[b]
        gint = [e for e in g if lat.le(a, e) and lat.le(e, b)]
        lint = [e for e in lat.elements() if lat.le(a, e) and lat.le(e, b)]
        if (rb - ra, cb - ca) in ((0, 1), (1, 0)):
            if len(gint) != 2 or len(lint) != 3:
                return False, f"C4: [{lat.names[a]},{lat.names[b]}] is not a 3-chain"
        elif (rb - ra, cb - ca) == (1, 1):
            if len(gint) != 4 or len(lint) != 5:
                return False, f"C4: [{lat.names[a]},{lat.names[b]}] is not an M_3"
            sub_leq = lat.leq[np.ix_(lint, lint)]
            if core.find_isomorphism(lattice_from_leq(sub_leq.copy()), m_k(3)) is None:
                return False, f"C4: [{lat.names[a]},{lat.names[b]}] is not an M_3"
        else:
            return False, f"C4: [{lat.names[a]},{lat.names[b]}] is neither prime"
    # consequences (C5)-(C7)
    for x in lat.elements():
        for y in lat.elements():
            if y <= x or lat.le(x, y) or lat.le(y, x):
                continue
            mv, jv = lat.meet(x, y), lat.join(x, y)
            if mv not in gset or jv not in gset:
                return False, f"C5: bounds of ({lat.names[x]},{lat.names[y]}) not in grid"
            ux = x if x in gset else un[x]
            uy = y if y in gset else un[y]
            ox = x if x in gset else ov[x]
            oy = y if y in gset else ov[y]
            if lat.meet(ux, uy) != mv or lat.join(ox, oy) != jv:
                return False, f"C6: fails at ({lat.names[x]},{lat.names[y]})"
            rm, cm = coord[mv]
            if coord[ux][0] != rm and coord[ux][1] != cm:
                return False, f"C7: fails at ({lat.names[x]},{lat.names[y]})"
    return True, "ok"


def random_c1c4(seed: int, rows: int = 3, cols: int = 3,
                density: float = 0.5) -> FiniteLattice:
    """Deterministic-in-seed random decorated grid satisfying (C1)-(C4)."""
    rng = Random(seed)
    candidates: list[tuple[str, tuple[int, int], tuple[int, int]]] = []
    for r in range(rows):
        for c in range(cols):
            if r + 1 < rows:
                candidates.append(("n", (r, c), (r + 1, c)))
            if c + 1 < cols:
                candidates.append(("n", (r, c), (r, c + 1)))
            if r + 1 < rows and c + 1 < cols:
                candidates.append(("m", (r, c), (r + 1, c + 1)))
    rng.shuffle(candidates)
    target = round(density * len(candidates))
    chosen, lowers, uppers = [], set(), set()
    for cand in candidates:
        if len(chosen) >= target:
            break
        _, a, b = cand
        if a in lowers or b in uppers:
            continue
        chosen.append(cand)
        lowers.add(a)
        uppers.add(b)
    return decorate_grid(GridDecoration(rows, cols, tuple(chosen)))


# -- the ascending-ladder family (one exactly (n+1)-modular lattice per n) --

def _ladder_extend(copy_leq: np.ndarray, copy_names: list[str],
                   xi: int, zi: int, level: int):
    """Glue a 5-element bottom gadget under `copy`, producing a lattice whose
    step-map trace climbs one rung further than the copy's.

    New elements: bottom, two incomparable seeds (one under the new x and the
    old x-ladder foot, one under the new z and the old z-ladder foot).
    """
    m = copy_leq.shape[0]
    n = m + 5
    BOT, A, B, X, Z = m, m + 1, m + 2, m + 3, m + 4
    leq = np.zeros((n, n), dtype=bool)
    leq[:m, :m] = copy_leq
    for e in (BOT, A, B, X, Z):
        leq[e, e] = True
    leq[BOT, :] = True
    leq[A, :m] = True          # a below every copy element (copy has a bottom)
    leq[B, :m] = True
    leq[A, X] = True
    leq[B, Z] = True
    leq[X, :m] = copy_leq[xi, :]   # x below exactly what the old ladder foot is below
    leq[Z, :m] = copy_leq[zi, :]
    names = list(copy_names) + [f"bot{level}", f"a{level}", f"b{level}",
                                f"x{level}", f"z{level}"]
    return leq, names, X, Z


def l_family(n: int, validate: bool = True, _cap: int = 16) -> FiniteLattice:
    """A bounded lattice of modularity rank exactly n+1, with a designated
    triple (x0, y0, z0) whose trace climbs the ladder x0 < x1 < ... < xn < 1.

    The diagram is a reconstruction constrained by the required algebra; the
    constructor verifies the rank and raises ReconstructionInvalid otherwise.
    """
    if not (1 <= n <= _cap):
        raise ArgumentOutOfRange(f"l_family supports 1 <= n <= {_cap}")
    base = boolean(3)
    # designated coatoms of the core block: x climbs to {1,2}v, z to {0,1}v
    xi = base.index_of("{1,2}")
    yi = base.index_of("{0,2}")
    zi = base.index_of("{0,1}")
    leq = base.leq.copy()
    names = [f"x{n}" if i == xi else f"y0" if i == yi else f"z{n}" if i == zi
             else f"core:{s}" for i, s in enumerate(base.names)]
    for level in range(n - 1, -1, -1):
        leq, names, xi, zi = _ladder_extend(leq, names, xi, zi, level)
    lat = lattice_from_leq(leq, names=names, name=f"L{n}")
    if validate:
        from . import rank
        r = rank.modularity_rank(lat)
        if r != n + 1:
            raise ReconstructionInvalid(
                f"ladder lattice for n={n} has rank {r}, expected {n + 1}")
    return lat


# -- exhaustive enumeration of small lattices -----------------------------

def enumerate_lattices(n: int) -> Iterator[FiniteLattice]:
    """All lattices with n elements, one per natural labeling.

    Elements are produced in a linear extension with 0 the bottom and n-1
    the top; every isomorphism class appears (possibly more than once).
    """
    if n < 1:
        raise ArgumentOutOfRange("n >= 1 required")
    if n == 1:
        yield chain(1)
        return
    if n == 2:
        yield chain(2)
        return

    full = (1 << n) - 1

    def emit(downs: list[int]) -> FiniteLattice:
        leq = np.zeros((n, n), dtype=bool)
        for e, d in enumerate(downs):
            for j in range(n):
                leq[j, e] = bool(d >> j & 1)
        return lattice_from_leq(leq)

    def rec(downs: list[int], down_set_cache: set[int]):
        k = len(downs)
        if k == n - 1:
            yield emit(downs + [full])
            return
        # candidate down-sets for element k: down-closed, contain the bottom,
        # and meet-compatible with every existing element
        prev = range(k)
        for s in range(1, 1 << k, 2):  # bit 0 (the bottom) always present
            ok = True
            for j in prev:
                if s >> j & 1 and downs[j] & ~s & ((1 << k) - 1):
                    ok = False  # not down-closed
                    break
            if not ok:
                continue
            d = s | (1 << k)
            for j in prev:
                if (downs[j] & s) not in down_set_cache:
                    ok = False  # meet with element j would not exist
                    break
            if not ok:
                continue
            downs.append(d)
            down_set_cache.add(d)
            yield from rec(downs, down_set_cache)
            downs.pop()
            down_set_cache.discard(d)

    yield from rec([1], {1})


# -- name registry ---------------------------------------------------------

def by_name(spec: str) -> FiniteLattice:
    """Resolve a lattice spec: m3, m4, ..., n5, c2sq, b<n>, c<n>, fano,
    witness7, l:<n>, subspace:<q>,<d>, file:<path>."""
    s = spec.strip().lower()
    if s.startswith("file:"):
        with open(spec[len("file:"):], "r", encoding="utf-8") as fh:
            return core.parse(fh.read())
    if s.startswith("l:"):
        return l_family(int(s[2:]))
    if s.startswith("subspace:"):
        q, d = s[len("subspace:"):].split(",")
        return subspace_lattice(int(q), int(d))
    if s == "n5":
        return n5()
    if s == "c2sq":
        return c2sq()
    if s == "fano":
        return fano()
    if s == "witness7":
        return witness7()
    if s.startswith("m") and s[1:].isdigit():
        return m_k(int(s[1:]))
    if s.startswith("b") and s[1:].isdigit():
        return boolean(int(s[1:]))
    if s.startswith("c") and s[1:].isdigit():
        return chain(int(s[1:]))
    raise ArgumentOutOfRange(f"unknown lattice spec: {spec!r}")
