"""Lattices of balanced triples and quadruples over a base lattice,
their canonical embeddings, and the isotone-map power construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    FiniteLattice,
    find_isomorphism,
    is_distributive,
    isotone_maps,
    join_irreducibles,
    lattice_from_leq,
)
from .errors import NotDistributive

EAGER_TABLE_CAP = 2000


def _encode(n: int, cols) -> np.ndarray:
    """Pack coordinate columns into one int64 key, lexicographic order."""
    key = np.zeros(cols[0].shape, dtype=np.int64)
    for c in cols:
        key = key * n + c
    return key


class TupleLattice:
    """A lattice whose elements are tuples over a base lattice, with
    componentwise meets and closure-iterated joins.

    Element ids follow the lexicographic order of the tuples.  Full meet
    and join tables are materialized up to EAGER_TABLE_CAP elements; above
    that, joins are computed on demand and memoized (`lattice` is then
    unavailable).
    """

    def __init__(self, base: FiniteLattice, tuples: list[tuple],
                 lattice: Optional[FiniteLattice], max_closure_index: int,
                 arity: int, name: str):
        self.base = base
        self.tuples = tuples
        self.index = {t: i for i, t in enumerate(tuples)}
        self.lattice = lattice
        self.max_closure_index = max_closure_index
        self.arity = arity
        self.name = name
        self._join_memo: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.tuples)

    def tuple_name(self, i: int) -> str:
        return "<" + ",".join(self.base.names[c] for c in self.tuples[i]) + ">"

    @property
    def bottom(self) -> int:
        return self.index[(self.base.bottom,) * self.arity]

    @property
    def top(self) -> int:
        return self.index[(self.base.top,) * self.arity]

    def meet(self, i: int, k: int) -> int:
        if self.lattice is not None:
            return self.lattice.meet(i, k)
        m = self.base.meet_table
        return self.index[tuple(int(m[a, b])
                                for a, b in zip(self.tuples[i], self.tuples[k]))]

    def join(self, i: int, k: int) -> int:
        if self.lattice is not None:
            return self.lattice.join(i, k)
        key = (min(i, k), max(i, k))
        got = self._join_memo.get(key)
        if got is None:
            j = self.base.join_table
            t = tuple(int(j[a, b]) for a, b in zip(self.tuples[i], self.tuples[k]))
            t = _closure_tuple(self.base, t)
            got = self.index[t]
            self._join_memo[key] = got
        return got


def _closure_tuple(base: FiniteLattice, t: tuple) -> tuple:
    m, j = base.meet_table, base.join_table
    cur = t
    while True:
        if len(cur) == 3:
            x, y, z = cur
            nxt = (int(j[x, m[y, z]]), int(j[y, m[x, z]]), int(j[z, m[x, y]]))
        else:
            nxt = tuple(int(_adjust4(m, j, cur, i)) for i in range(4))
        if nxt == cur:
            return cur
        cur = nxt


def _adjust4(m, j, q, i):
    rest = [q[k] for k in range(4) if k != i]
    v = q[i]
    for a in range(3):
        for b in range(a + 1, 3):
            v = j[v, m[rest[a], rest[b]]]
    return v


def _balanced_triples(base: FiniteLattice) -> tuple:
    n = base.n
    x, y, z = (g.ravel().astype(np.int32) for g in
               np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    m = base.meet_table
    mask = (m[x, y] == m[x, z]) & (m[x, y] == m[y, z])
    return x[mask], y[mask], z[mask]


def _balanced_quadruples(base: FiniteLattice) -> tuple:
    n = base.n
    grids = np.meshgrid(*([np.arange(n)] * 4), indexing="ij")
    cols = [g.ravel().astype(np.int32) for g in grids]
    m = base.meet_table
    ref = m[cols[0], cols[1]]
    mask = np.ones(ref.shape, dtype=bool)
    for i in range(4):
        for k in range(i + 1, 4):
            mask &= m[cols[i], cols[k]] == ref
    return tuple(c[mask] for c in cols)


def _build(base: FiniteLattice, cols, arity: int, name: str) -> TupleLattice:
    n = base.n
    count = cols[0].size
    tuples = [tuple(int(c[i]) for c in cols) for i in range(count)]
    names = ["<" + ",".join(base.names[v] for v in t) + ">" for t in tuples]

    # componentwise order
    leq = np.ones((count, count), dtype=bool)
    for c in cols:
        leq &= base.leq[c[:, None], c[None, :]]

    keys = _encode(n, cols)  # ascending: tuples are lexicographic

    def locate(component_cols) -> np.ndarray:
        return np.searchsorted(keys, _encode(n, component_cols)).astype(np.int32)

    max_closure = 0
    if count <= EAGER_TABLE_CAP:
        m, j = base.meet_table, base.join_table
        meet = locate([m[c[:, None], c[None, :]].ravel() for c in cols]
                      ).reshape(count, count)
        # joins: iterate the step map on the componentwise joins of all pairs
        cur = [j[c[:, None], c[None, :]].ravel() for c in cols]
        k = 0
        pos = np.arange(count * count)
        out = np.empty(count * count, dtype=np.int32)
        while pos.size:
            if arity == 3:
                x, y, z = cur
                nxt = [j[x, m[y, z]], j[y, m[x, z]], j[z, m[x, y]]]
            else:
                nxt = [_adjust4(m, j, cur, i) for i in range(4)]
            same = np.ones(pos.shape, dtype=bool)
            for a, b in zip(cur, nxt):
                same &= a == b
            done = pos[same]
            out[done] = locate([c[same] for c in cur])
            max_closure = max(max_closure, k) if done.size else max_closure
            keep = ~same
            pos = pos[keep]
            cur = [c[keep] for c in nxt]
            k += 1
        join = out.reshape(count, count)
        lat = FiniteLattice(leq, meet, join, names=names, name=name)
    else:
        lat = None
        # the closure depth is still reported, batch-scanned without tables
        from .rank import _stab_indices  # noqa: PLC0415
        if arity == 3:
            j = base.join_table
            x = j[cols[0][:, None], cols[0][None, :]].ravel()
            y = j[cols[1][:, None], cols[1][None, :]].ravel()
            z = j[cols[2][:, None], cols[2][None, :]].ravel()
            max_closure = int(_stab_indices(base.meet_table, j, x, y, z,
                                            3 * base.height() + 1).max())
    return TupleLattice(base, tuples, lat, int(max_closure), arity, name)


def m3_of(base: FiniteLattice) -> TupleLattice:
    """The lattice of all balanced triples of the base: meets
    componentwise, join of a pair the closure of its componentwise join."""
    cols = _balanced_triples(base)
    return _build(base, list(cols), 3, f"M3[{base.name or '?'}]")


def m4_of(base: FiniteLattice) -> TupleLattice:
    """The lattice of quadruples whose pairwise meets all coincide."""
    cols = _balanced_quadruples(base)
    return _build(base, list(cols), 4, f"M4[{base.name or '?'}]")


def spanning_m3(k: TupleLattice) -> list[int]:
    """The five elements <0,0,0>, <1,0,0>, <0,1,0>, <0,0,1>, <1,1,1>;
    verified to form a sublattice isomorphic to M_3 spanning k's bounds."""
    o, i = k.base.bottom, k.base.top
    ids = [k.index[t] for t in
           [(o, o, o), (i, o, o), (o, i, o), (o, o, i), (i, i, i)]]
    bot, a, b, c, top = ids
    assert bot == k.bottom and top == k.top
    for u, v in ((a, b), (a, c), (b, c)):
        assert k.meet(u, v) == bot and k.join(u, v) == top
    return ids


def embed_atom(k: TupleLattice) -> list[int]:
    """The embedding x -> <x,0,0,...> of the base into k; returns the image
    ids indexed by base element, verified meet- and join-preserving."""
    o = k.base.bottom
    pad = (o,) * (k.arity - 1)
    image = [k.index[(x,) + pad] for x in k.base.elements()]
    _check_embedding(k, image)
    return image


def embed_diag(k: TupleLattice) -> list[int]:
    """The diagonal embedding x -> <x,x,...,x>."""
    image = [k.index[(x,) * k.arity] for x in k.base.elements()]
    _check_embedding(k, image)
    return image


def _check_embedding(k: TupleLattice, image: list[int]):
    base = k.base
    assert len(set(image)) == base.n
    for a in base.elements():
        for b in base.elements():
            assert k.meet(image[a], image[b]) == image[base.meet(a, b)]
            assert k.join(image[a], image[b]) == image[base.join(a, b)]


def m3_power_poset(d: FiniteLattice) -> FiniteLattice:
    """The lattice of isotone maps from the join-irreducibles of a
    distributive lattice into M_3, ordered pointwise."""
    if not is_distributive(d):
        raise NotDistributive("the base of the power construction must be distributive")
    from .catalog import m_k  # noqa: PLC0415
    ji = join_irreducibles(d)
    poset_leq = d.leq[np.ix_(ji, ji)]
    m3 = m_k(3)
    maps = isotone_maps(poset_leq, m3)
    count = len(maps)
    leq = np.ones((count, count), dtype=bool)
    vals = np.array([mp.values for mp in maps], dtype=np.int32)
    for p in range(len(ji)):
        leq &= m3.leq[vals[:, p][:, None], vals[:, p][None, :]]
    if len(ji) == 0:
        leq = np.ones((1, 1), dtype=bool)
    names = ["[" + ",".join(m3.names[v] for v in mp.values) + "]" for mp in maps]
    return lattice_from_leq(leq, names=names, name=f"M3^J({d.name or '?'})")


def m4_sublattice_in_m3m3() -> tuple[TupleLattice, list[int]]:
    """Four elements of the balanced-triple lattice over M_3 — <1,0,0>,
    <0,a,b>, <0,b,c>, <0,c,a> — with all pairwise meets <0,0,0> and joins
    <1,1,1>, generating a bounded sublattice isomorphic to M_4."""
    from .catalog import m_k  # noqa: PLC0415
    base = m_k(3)
    k = m3_of(base)
    o, i = base.bottom, base.top
    a, b, c = base.index_of("a"), base.index_of("b"), base.index_of("c")
    named = [(i, o, o), (o, a, b), (o, b, c), (o, c, a)]
    ids = [k.index[t] for t in named]
    for s in range(4):
        for t in range(s + 1, 4):
            assert k.meet(ids[s], ids[t]) == k.bottom
            assert k.join(ids[s], ids[t]) == k.top
    six = sorted([k.bottom, k.top] + ids)
    sub_leq = k.lattice.leq[np.ix_(six, six)]
    assert find_isomorphism(lattice_from_leq(sub_leq.copy()), m_k(4)) is not None
    return k, ids
