"""Finite lattice representation and structural queries.

A lattice is stored densely: an n x n boolean order table plus full
n x n meet and join tables, so that every downstream scan is a table
lookup.  Construction validates the lattice axioms once; everything
else assumes total tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    EnumerationLimitExceeded,
    NotALattice,
    NotComparable,
    ParseError,
    SizeLimitExceeded,
)

ISO_SIZE_CAP = 5000


@dataclass(frozen=True)
class CoverList:
    """Hasse-diagram input encoding: element count plus (lower, upper) pairs."""

    size: int
    covers: tuple[tuple[int, int], ...]
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ParseError("a lattice needs at least one element")
        for lo, hi in self.covers:
            if not (0 <= lo < self.size and 0 <= hi < self.size):
                raise ParseError(f"cover ({lo},{hi}) out of range for size {self.size}")
            if lo == hi:
                raise ParseError(f"cover ({lo},{hi}) is reflexive")
        if self.names is not None and len(self.names) != self.size:
            raise ParseError("names length does not match element count")


class FiniteLattice:
    """Dense-indexed finite lattice with precomputed order/meet/join tables.

    Instances are immutable after construction and safe for concurrent reads.
    """

    __slots__ = ("n", "leq", "meet_table", "join_table", "names", "name", "_covers")

    def __init__(self, leq: np.ndarray, meet_table: np.ndarray, join_table: np.ndarray,
                 names: Optional[Sequence[str]] = None, name: str = ""):
        n = leq.shape[0]
        self.n = n
        self.leq = leq
        self.meet_table = meet_table
        self.join_table = join_table
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        self.name = name
        self._covers = None
        for arr in (self.leq, self.meet_table, self.join_table):
            arr.setflags(write=False)

    # -- basic queries -------------------------------------------------

    def __len__(self):
        return self.n

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    @property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def elements(self) -> range:
        return range(self.n)

    def name_of(self, a: int) -> str:
        return self.names[a]

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs (lower, upper), lexicographically ordered."""
        if self._covers is None:
            lt = self.leq & ~np.eye(self.n, dtype=bool)
            # (a,b) is a cover iff a < b and there is no c with a < c < b
            strict2 = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
            cov = lt & ~strict2
            self._covers = sorted((int(a), int(b)) for a, b in zip(*np.nonzero(cov)))
        return self._covers

    def lower_covers(self, a: int) -> list[int]:
        return [lo for lo, hi in self.covers() if hi == a]

    def upper_covers(self, a: int) -> list[int]:
        return [hi for lo, hi in self.covers() if lo == a]

    def height(self) -> int:
        """Length of a longest chain (number of covers on it)."""
        order = np.argsort(self.leq.sum(axis=0))  # linear extension
        h = np.zeros(self.n, dtype=int)
        for v in order:
            for lo in self.lower_covers(int(v)):
                h[v] = max(h[v], h[lo] + 1)
        return int(h.max())

    def validate(self):
        """Exhaustively re-check the lattice axioms; raises on failure."""
        n, leq = self.n, self.leq
        if not np.diag(leq).all():
            raise NotALattice(-1, -1, "reflexivity")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise NotALattice(-1, -1, "antisymmetry")
        closure = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
        if (closure & ~leq).any():
            raise NotALattice(-1, -1, "transitivity")
        cols = np.arange(n)
        for a in range(n):
            m = self.meet_table[a]
            if not (leq[m, a].all() and leq[m, cols].all()):
                raise NotALattice(a, -1, "meet is not a lower bound")
            common = leq[:, [a]] & leq  # common[c, b] = (c <= a) and (c <= b)
            if (common & ~leq[:, m]).any():
                bad = int(np.nonzero((common & ~leq[:, m]).any(axis=0))[0][0])
                raise NotALattice(a, bad, "meet")
            j = self.join_table[a]
            if not (leq[a, j].all() and leq[cols, j].all()):
                raise NotALattice(a, -1, "join is not an upper bound")
            ub = leq[a, :][None, :] & leq  # ub[b, c] = (a <= c) and (b <= c)
            if (ub & ~leq[j, :]).any():
                bad = int(np.nonzero((ub & ~leq[j, :]).any(axis=1))[0][0])
                raise NotALattice(a, bad, "join")

    def __repr__(self):
        label = self.name or "lattice"
        return f"<FiniteLattice {label} n={self.n}>"

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice) and self.n == other.n
                and np.array_equal(self.leq, other.leq)
                and np.array_equal(self.meet_table, other.meet_table)
                and np.array_equal(self.join_table, other.join_table))

    def __hash__(self):
        return hash((self.n, self.leq.tobytes()))


# -- construction -------------------------------------------------------

def _tables_from_leq(leq: np.ndarray):
    """Compute meet/join tables from an order matrix, verifying uniqueness.

    Raises NotALattice naming an offending pair when a glb/lub is missing.
    """
    n = leq.shape[0]
    dtype = np.int32
    meet = np.empty((n, n), dtype=dtype)
    join = np.empty((n, n), dtype=dtype)
    # the glb, if it exists, is the common lower bound with the largest down-set
    down_count = leq.sum(axis=0)  # down-set of a = {c : leq[c, a]}
    up_count = leq.sum(axis=1)
    for a in range(n):
        common = leq[:, [a]] & leq          # common[c, b]: c <= a and c <= b
        weights = np.where(common, down_count[:, None], -1)
        cand = np.argmax(weights, axis=0).astype(dtype)
        ok = ~(common & ~leq[:, cand]).any(axis=0)
        if not ok.all():
            b = int(np.flatnonzero(~ok)[0])
            raise NotALattice(a, b, "meet")
        meet[a] = cand

        ub = leq[a, :][None, :] & leq       # ub[b, c]: a <= c and b <= c
        weightsu = np.where(ub, up_count[None, :], -1)
        candu = np.argmax(weightsu, axis=1).astype(dtype)
        oku = ~(ub & ~leq[candu, :]).any(axis=1)
        if not oku.all():
            b = int(np.flatnonzero(~oku)[0])
            raise NotALattice(a, b, "join")
        join[a] = candu
    return meet, join


def lattice_from_leq(leq: np.ndarray, names: Optional[Sequence[str]] = None,
                     name: str = "") -> FiniteLattice:
    """Build a FiniteLattice from a partial-order matrix (leq[a,b] = a<=b)."""
    leq = np.asarray(leq, dtype=bool).copy()
    n = leq.shape[0]
    if not np.diag(leq).all():
        raise NotALattice(-1, -1, "reflexivity")
    if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
        raise NotALattice(-1, -1, "antisymmetry")
    if ((leq.astype(np.uint8) @ leq.astype(np.uint8) > 0) & ~leq).any():
        raise NotALattice(-1, -1, "transitivity")
    meet, join = _tables_from_leq(leq)
    lat = FiniteLattice(leq, meet, join, names=names, name=name)
    # bounded check: unique bottom and top
    if not leq.all(axis=1).any():
        raise NotALattice(-1, -1, "no bottom")
    if not leq.all(axis=0).any():
        raise NotALattice(-1, -1, "no top")
    return lat


def from_covers(c: CoverList, name: str = "") -> FiniteLattice:
    """Build the lattice whose order is the reflexive-transitive closure
    of the given covers; fails with CycleDetected or NotALattice."""
    n = c.size
    # topological sort over the cover digraph
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for lo, hi in c.covers:
        succ[lo].append(hi)
        indeg[hi] += 1
    queue = [v for v in range(n) if indeg[v] == 0]
    topo = []
    indeg = indeg[:]
    while queue:
        v = queue.pop()
        topo.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(topo) != n:
        raise CycleDetected("cover relation contains a cycle")
    leq = np.eye(n, dtype=bool)
    for v in reversed(topo):
        for w in succ[v]:
            leq[v] |= leq[w]
    return lattice_from_leq(leq, names=c.names, name=name)


# -- structural operations ----------------------------------------------

def direct_product(a: FiniteLattice, b: FiniteLattice, name: str = "") -> FiniteLattice:
    """Componentwise product; element (i, j) gets index i*|B|+j."""
    na, nb = a.n, b.n
    leq = (a.leq[:, None, :, None] & b.leq[None, :, None, :]).reshape(na * nb, na * nb)
    meet = (a.meet_table[:, None, :, None].astype(np.int64) * nb
            + b.meet_table[None, :, None, :]).reshape(na * nb, na * nb).astype(np.int32)
    join = (a.join_table[:, None, :, None].astype(np.int64) * nb
            + b.join_table[None, :, None, :]).reshape(na * nb, na * nb).astype(np.int32)
    names = [f"({a.names[i]},{b.names[j]})" for i in range(na) for j in range(nb)]
    return FiniteLattice(leq, meet, join, names=names,
                         name=name or f"{a.name or 'A'}x{b.name or 'B'}")


def dual(a: FiniteLattice) -> FiniteLattice:
    """Order reversed, meet and join swapped.  An involution on tables."""
    return FiniteLattice(a.leq.T.copy(), a.join_table.copy(), a.meet_table.copy(),
                         names=list(a.names), name=f"dual({a.name})" if a.name else "")


def interval(lat: FiniteLattice, a: int, b: int) -> FiniteLattice:
    """The sublattice {x : a <= x <= b} with induced operations."""
    if not lat.le(a, b):
        raise NotComparable(f"{a} is not below {b}")
    keep = np.flatnonzero(lat.leq[a, :] & lat.leq[:, b])
    remap = {int(e): i for i, e in enumerate(keep)}
    leq = lat.leq[np.ix_(keep, keep)].copy()
    meet = np.array([[remap[int(lat.meet_table[x, y])] for y in keep] for x in keep],
                    dtype=np.int32)
    join = np.array([[remap[int(lat.join_table[x, y])] for y in keep] for x in keep],
                    dtype=np.int32)
    return FiniteLattice(leq, meet, join, names=[lat.names[int(e)] for e in keep])


def join_irreducibles(lat: FiniteLattice) -> list[int]:
    """Elements with exactly one lower cover (excludes the bottom)."""
    counts = {}
    for lo, hi in lat.covers():
        counts[hi] = counts.get(hi, 0) + 1
    return sorted(e for e, c in counts.items() if c == 1)


def is_distributive(lat: FiniteLattice) -> bool:
    """Exhaustive check of x ^ (y v z) == (x ^ y) v (x ^ z)."""
    m, j = lat.meet_table, lat.join_table
    for x in range(lat.n):
        lhs = m[x, j]                       # lhs[y, z]
        rhs = j[np.ix_(m[x], m[x])]         # rhs[y, z]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_modular(lat: FiniteLattice) -> bool:
    """Exhaustive check of the modular law: x <= z implies x v (y ^ z) == (x v y) ^ z."""
    m, j, leq = lat.meet_table, lat.join_table, lat.leq
    for x in range(lat.n):
        zs = np.flatnonzero(leq[x])
        if zs.size == 0:
            continue
        lhs = j[x, m[:, zs]]                # lhs[y, k]
        rhs = m[j[x, :][:, None], zs[None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def antichains3(lat: FiniteLattice) -> Iterator[tuple[int, int, int]]:
    """All 3-element antichains {x,y,z}, yielded once each as x<y<z."""
    incomp = ~lat.leq & ~lat.leq.T
    n = lat.n
    for x in range(n):
        row_x = incomp[x]
        for y in range(x + 1, n):
            if not row_x[y]:
                continue
            mask = row_x & incomp[y]
            for z in np.flatnonzero(mask):
                if z > y:
                    yield (x, y, int(z))


def _refine_colors(lat: FiniteLattice) -> np.ndarray:
    """Iterated invariant refinement; isomorphism-invariant color per element."""
    n = lat.n
    down = lat.leq.sum(axis=0)
    up = lat.leq.sum(axis=1)
    colors = np.unique(np.stack([down, up]), axis=1, return_inverse=True)[1]
    for _ in range(n):
        sigs = []
        for e in range(n):
            below = tuple(sorted(colors[np.flatnonzero(lat.leq[:, e])].tolist()))
            above = tuple(sorted(colors[np.flatnonzero(lat.leq[e, :])].tolist()))
            sigs.append((int(colors[e]), below, above))
        uniq = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = np.array([uniq[s] for s in sigs])
        if np.array_equal(new, colors):
            break
        colors = new
    return colors


def find_isomorphism(a: FiniteLattice, b: FiniteLattice) -> Optional[list[int]]:
    """An order-isomorphism a -> b as an index list, or None.

    Invariant pre-partitioning followed by backtracking; no canonical-form
    guarantee, only existence/absence.
    """
    if a.n != b.n:
        return None
    if a.n > ISO_SIZE_CAP:
        raise SizeLimitExceeded(f"isomorphism search capped at {ISO_SIZE_CAP} elements")
    ca, cb = _refine_colors(a), _refine_colors(b)
    if sorted(ca.tolist()) != sorted(cb.tolist()):
        return None
    n = a.n
    # most-constrained-first assignment order
    order = sorted(range(n), key=lambda e: (np.count_nonzero(cb == ca[e]), e))
    image = [-1] * n
    used = [False] * n
    cand_cache = {e: np.flatnonzero(cb == ca[e]).tolist() for e in order}

    def bt(k: int) -> bool:
        if k == n:
            return True
        e = order[k]
        for f in cand_cache[e]:
            if used[f]:
                continue
            ok = True
            for e2 in order[:k]:
                f2 = image[e2]
                if a.leq[e, e2] != b.leq[f, f2] or a.leq[e2, e] != b.leq[f2, f]:
                    ok = False
                    break
            if ok:
                image[e] = f
                used[f] = True
                if bt(k + 1):
                    return True
                image[e] = -1
                used[f] = False
        return False

    if not bt(0):
        return None
    # a lattice order-isomorphism preserves meet and join; verify post hoc
    img = np.array(image)
    assert np.array_equal(img[a.meet_table], b.meet_table[np.ix_(img, img)])
    assert np.array_equal(img[a.join_table], b.join_table[np.ix_(img, img)])
    return image


@dataclass(frozen=True)
class IsotoneMap:
    """Order-preserving map from a poset (leq matrix) into a lattice."""

    source_leq: tuple            # immutable key for the source order
    values: tuple[int, ...]

    def __call__(self, p: int) -> int:
        return self.values[p]


def isotone_maps(poset_leq: np.ndarray, target: FiniteLattice,
                 cap: int = 10_000_000) -> list[IsotoneMap]:
    """All order-preserving maps from the poset into the target lattice."""
    p = poset_leq.shape[0]
    if target.n ** max(p, 1) > cap:
        raise EnumerationLimitExceeded(f"{target.n}^{p} maps exceed cap {cap}")
    # assign in a linear extension so constraints refer to assigned values
    order = sorted(range(p), key=lambda e: int(poset_leq[:, e].sum()))
    key = tuple(map(tuple, poset_leq.tolist()))
    out: list[IsotoneMap] = []
    values = [0] * p

    def bt(k: int):
        if k == p:
            out.append(IsotoneMap(key, tuple(values)))
            return
        e = order[k]
        for v in range(target.n):
            ok = True
            for e2 in order[:k]:
                if poset_leq[e2, e] and not target.leq[values[e2], v]:
                    ok = False
                    break
                if poset_leq[e, e2] and not target.leq[v, values[e2]]:
                    ok = False
                    break
            if ok:
                values[e] = v
                bt(k + 1)

    bt(0)
    return out


def ideal_lattice(lat: FiniteLattice) -> FiniteLattice:
    """The lattice of all ideals (nonempty join-closed down-sets) under inclusion.

    In a finite lattice every ideal is principal, so the result is isomorphic
    to the input; it is still constructed from the ideals themselves.
    """
    ideals = [frozenset(int(x) for x in np.flatnonzero(lat.leq[:, e]))
              for e in range(lat.n)]
    n = len(ideals)
    leq = np.zeros((n, n), dtype=bool)
    for i, I in enumerate(ideals):
        for k, K in enumerate(ideals):
            leq[i, k] = I <= K
    return lattice_from_leq(leq, names=["I(" + lat.names[i] + ")" for i in range(n)],
                            name=f"Id({lat.name})" if lat.name else "")


# -- serialization -------------------------------------------------------

def serialize(lat: FiniteLattice) -> str:
    """Lattice JSON: {"name", "elements", "covers"}; covers lexicographic."""
    doc = {
        "name": lat.name,
        "elements": list(lat.names),
        "covers": [[lo, hi] for lo, hi in lat.covers()],
    }
    return json.dumps(doc, indent=2)


def parse(text: str) -> FiniteLattice:
    """Inverse of serialize; raises ParseError/CycleDetected/NotALattice."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    for key in ("elements", "covers"):
        if key not in doc:
            raise ParseError(f"missing field: {key}")
    elements = doc["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise ParseError("'elements' must be a list of strings")
    covers = []
    for i, pair in enumerate(doc["covers"]):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, int) for v in pair)):
            raise ParseError(f"covers[{i}] must be a pair of integers")
        covers.append((pair[0], pair[1]))
    cl = CoverList(size=len(elements), covers=tuple(covers), names=tuple(elements))
    return from_covers(cl, name=str(doc.get("name", "")))
