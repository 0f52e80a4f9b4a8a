"""Semilattice tensor products via bi-ideals: the bi-ideal calculus, the
join-homomorphism representation, and the bridge to the balanced-triple
construction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import FiniteLattice, join_irreducibles, lattice_from_leq
from .construct import m3_of
from .errors import EnumerationLimitExceeded, SizeLimitExceeded

TENSOR_CAP = 400
HOM_ENUM_CAP = 5_000_000


@dataclass(frozen=True)
class BiIdeal:
    """A subset of A x B: rows[a] is the bitmask of members ⟨a, ·⟩.

    Invariants (checked by is_valid): downward closed componentwise,
    contains all ⟨a,0⟩ and ⟨0,b⟩, and closed under joins in either
    coordinate with the other fixed.
    """

    na: int
    nb: int
    rows: tuple

    def contains(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.na) for b in range(self.nb)
                if self.contains(a, b)]

    def size(self) -> int:
        return sum(int(r).bit_count() for r in self.rows)

    def subset_of(self, other: "BiIdeal") -> bool:
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))


def _down_masks(lat: FiniteLattice) -> list[int]:
    out = []
    for e in range(lat.n):
        mask = 0
        for lo in np.flatnonzero(lat.leq[:, e]):
            mask |= 1 << int(lo)
        out.append(mask)
    return out


def nabla(a: FiniteLattice, b: FiniteLattice) -> BiIdeal:
    """The least bi-ideal: everything with a zero coordinate."""
    full = (1 << b.n) - 1
    zb = 1 << b.bottom
    rows = tuple(full if x == a.bottom else zb for x in range(a.n))
    return BiIdeal(a.n, b.n, rows)


def is_valid_bi_ideal(a: FiniteLattice, b: FiniteLattice, i: BiIdeal) -> bool:
    """Exhaustive check of the four defining conditions."""
    if not nabla(a, b).subset_of(i):
        return False
    downs_b = _down_masks(b)
    for x in range(a.n):
        row = i.rows[x]
        # hereditary in B, and in A
        for y in range(b.n):
            if row >> y & 1 and downs_b[y] & ~row:
                return False
        for x2 in np.flatnonzero(a.leq[:, x]):
            if row & ~i.rows[int(x2)]:
                return False
        # join closure in the B coordinate
        members = [y for y in range(b.n) if row >> y & 1]
        for y0 in members:
            for y1 in members:
                if not row >> b.join(y0, y1) & 1:
                    return False
    # join closure in the A coordinate
    for x0 in range(a.n):
        for x1 in range(a.n):
            common = i.rows[x0] & i.rows[x1]
            if common & ~i.rows[a.join(x0, x1)]:
                return False
    return True


def bi_ideal_closure(a: FiniteLattice, b: FiniteLattice, pairs) -> BiIdeal:
    """Least bi-ideal containing the given pairs: alternate hereditary
    closure with both join-closure rules to a fixpoint."""
    rows = list(nabla(a, b).rows)
    downs_b = _down_masks(b)
    for x, y in pairs:
        rows[x] |= 1 << y
    changed = True
    while changed:
        changed = False
        # hereditary: push each row down both orders
        for x in range(a.n):
            row, ext = rows[x], 0
            m = row
            while m:
                y = (m & -m).bit_length() - 1
                ext |= downs_b[y]
                m &= m - 1
            if ext & ~row:
                rows[x] |= ext
                changed = True
        for x in range(a.n):
            for x2 in np.flatnonzero(a.leq[:, x]):
                if rows[x] & ~rows[int(x2)]:
                    rows[int(x2)] |= rows[x]
                    changed = True
        # join closures
        for x in range(a.n):
            row = rows[x]
            members = [y for y in range(b.n) if row >> y & 1]
            for i0, y0 in enumerate(members):
                for y1 in members[i0:]:
                    j = b.join(y0, y1)
                    if not row >> j & 1:
                        row |= 1 << j
                        changed = True
            rows[x] = row
        for x0 in range(a.n):
            for x1 in range(x0, a.n):
                common = rows[x0] & rows[x1]
                xj = a.join(x0, x1)
                if common & ~rows[xj]:
                    rows[xj] |= common
                    changed = True
    return BiIdeal(a.n, b.n, tuple(rows))


def pure_tensor(a: FiniteLattice, b: FiniteLattice, x: int, y: int) -> BiIdeal:
    """nabla plus the rectangle below ⟨x, y⟩."""
    base = list(nabla(a, b).rows)
    down_y = _down_masks(b)[y]
    for x2 in np.flatnonzero(a.leq[:, x]):
        base[int(x2)] |= down_y
    out = BiIdeal(a.n, b.n, tuple(base))
    assert is_valid_bi_ideal(a, b, out)
    return out


def cap_of(a: FiniteLattice, b: FiniteLattice, i: BiIdeal) -> list[tuple[int, int]]:
    """The maximal member pairs outside nabla; re-closing them with nabla
    reproduces the bi-ideal."""
    nb = nabla(a, b)
    members = [(x, y) for x, y in i.pairs() if not nb.contains(x, y)]
    maximal = [(x, y) for x, y in members
               if not any((x2, y2) != (x, y) and a.le(x, x2) and b.le(y, y2)
                          for x2, y2 in members)]
    return maximal


@dataclass(frozen=True)
class JoinHom:
    """A map from the nonzero part of A to B turning joins into meets,
    stored as a value per A element; the slot at A's zero is fixed to B's
    top (the value forced by the bi-ideal picture)."""

    values: tuple

    def __call__(self, x: int) -> int:
        return self.values[x]


def phi_of(a: FiniteLattice, b: FiniteLattice, i: BiIdeal) -> JoinHom:
    """For each x, the largest y with ⟨x,y⟩ in the bi-ideal."""
    values = []
    for x in range(a.n):
        ys = [y for y in range(b.n) if i.contains(x, y)]
        top = ys[0]
        for y in ys[1:]:
            top = y if b.le(top, y) else top
        assert all(b.le(y, top) for y in ys), "row has no largest member"
        values.append(top)
    return JoinHom(tuple(values))


def hom_of(a: FiniteLattice, b: FiniteLattice, h: JoinHom) -> BiIdeal:
    """The bi-ideal {⟨x,y⟩ : y <= h(x)} induced by a join-hom."""
    downs_b = _down_masks(b)
    rows = tuple(downs_b[h(x)] for x in range(a.n))
    return BiIdeal(a.n, b.n, rows)


def all_join_homs(a: FiniteLattice, b: FiniteLattice,
                  cap: int = HOM_ENUM_CAP) -> list[JoinHom]:
    """Enumerate join-to-meet homs by assigning values on the
    join-irreducibles of A and propagating h(x) = meet over irreducibles
    below x, keeping only consistent assignments."""
    ji = join_irreducibles(a)
    if b.n ** max(len(ji), 1) > cap:
        raise EnumerationLimitExceeded(f"{b.n}^{len(ji)} assignments exceed cap")
    below = [np.flatnonzero(a.leq[np.ix_(ji, [x])].ravel()).tolist()
             for x in range(a.n)]
    out = []
    for assign in product(range(b.n), repeat=len(ji)):
        values = []
        for x in range(a.n):
            v = b.top
            for k in below[x]:
                v = b.meet(v, assign[k])
            values.append(v)
        ok = all(values[a.join(x0, x1)] == b.meet(values[x0], values[x1])
                 for x0 in range(a.n) for x1 in range(a.n)
                 if x0 != a.bottom and x1 != a.bottom)
        if ok:
            out.append(JoinHom(tuple(values)))
    return sorted(set(out), key=lambda h: h.values)


def _lattice_of(a, b, ideals, name) -> tuple:
    ideals = sorted(set(ideals), key=lambda i: i.rows)
    k = len(ideals)
    leq = np.zeros((k, k), dtype=bool)
    for i, ii in enumerate(ideals):
        for j, ij in enumerate(ideals):
            leq[i, j] = ii.subset_of(ij)
    names = [f"I{i}#{ii.size()}" for i, ii in enumerate(ideals)]
    return tuple(ideals), lattice_from_leq(leq, names=names, name=name)


def enumerate_bi_ideals(a: FiniteLattice, b: FiniteLattice,
                        cap: int = TENSOR_CAP) -> list[BiIdeal]:
    """All bi-ideals, by closure-system search: repeatedly close the union
    of a known bi-ideal with one extra pair.  This is the independent
    oracle route, not the hom-based default."""
    if a.n * b.n > cap:
        raise SizeLimitExceeded(f"|A|*|B| = {a.n * b.n} above cap {cap}")
    start = nabla(a, b)
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for x in range(a.n):
            for y in range(b.n):
                if not cur.contains(x, y):
                    nxt = bi_ideal_closure(
                        a, b, [p for p in cur.pairs()] + [(x, y)])
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
    return sorted(seen, key=lambda i: i.rows)


@dataclass(frozen=True)
class TensorLattice:
    left: FiniteLattice
    right: FiniteLattice
    bi_ideals: tuple
    lattice: FiniteLattice

    def __len__(self):
        return len(self.bi_ideals)


def tensor_product(a: FiniteLattice, b: FiniteLattice,
                   cap: int = TENSOR_CAP, oracle: bool = False) -> TensorLattice:
    """The lattice of all bi-ideals of A x B under inclusion.

    Default route: enumerate join-homs and map each to its bi-ideal.  With
    oracle=True the bi-ideals are found by closure-system search instead.
    """
    if a.n * b.n > cap:
        raise SizeLimitExceeded(f"|A|*|B| = {a.n * b.n} above cap {cap}")
    if oracle:
        ideals = enumerate_bi_ideals(a, b, cap=cap)
    else:
        ideals = [hom_of(a, b, h) for h in all_join_homs(a, b)]
    ideals, lat = _lattice_of(a, b, ideals, f"{a.name or 'A'}(x){b.name or 'B'}")
    return TensorLattice(a, b, ideals, lat)


@dataclass(frozen=True)
class ReprReport:
    hom_count: int
    ideal_count: int
    bijective: bool
    order_iso: bool
    routes_agree: bool

    @property
    def passed(self) -> bool:
        return self.bijective and self.order_iso and self.routes_agree


def hom_lattice(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    """All join-to-meet homs under the componentwise order of the target."""
    homs = all_join_homs(a, b)
    k = len(homs)
    leq = np.zeros((k, k), dtype=bool)
    nonzero = [x for x in range(a.n) if x != a.bottom]
    for i, hi in enumerate(homs):
        for j, hj in enumerate(homs):
            leq[i, j] = all(b.le(hi(x), hj(x)) for x in nonzero)
    names = ["[" + ",".join(b.names[hi(x)] for x in nonzero) + "]" for hi in homs]
    return lattice_from_leq(leq, names=names,
                            name=f"Hom({a.name or 'A'},{b.name or 'B'}d)")


def verify_repr_iso(a: FiniteLattice, b: FiniteLattice) -> ReprReport:
    """Check that I -> phi_I is an order-isomorphism from the bi-ideal
    lattice onto the hom lattice, and that the two enumeration routes
    produce the same bi-ideals."""
    tp = tensor_product(a, b)
    oracle_ideals = enumerate_bi_ideals(a, b)
    routes_agree = list(tp.bi_ideals) == oracle_ideals
    homs = all_join_homs(a, b)
    images = [phi_of(a, b, i) for i in tp.bi_ideals]
    bijective = (sorted(set(images), key=lambda h: h.values) == homs
                 and len(set(images)) == len(images)
                 and all(hom_of(a, b, phi_of(a, b, i)) == i for i in tp.bi_ideals))
    nonzero = [x for x in range(a.n) if x != a.bottom]
    order_iso = all(
        ii.subset_of(ij) == all(b.le(images[i](x), images[j](x)) for x in nonzero)
        for i, ii in enumerate(tp.bi_ideals)
        for j, ij in enumerate(tp.bi_ideals))
    return ReprReport(len(homs), len(tp.bi_ideals), bijective, order_iso,
                      routes_agree)


@dataclass(frozen=True)
class M3TensorReport:
    tensor_size: int
    triple_lattice_size: int
    images_balanced: bool
    explicit_iso: bool

    @property
    def passed(self) -> bool:
        return (self.tensor_size == self.triple_lattice_size
                and self.images_balanced and self.explicit_iso)


def verify_m3_tensor_iso(l: FiniteLattice) -> M3TensorReport:
    """Check M_3 (x) L against the balanced-triple lattice over L via the
    explicit map sending a hom to its values on the three atoms."""
    from .catalog import m_k  # noqa: PLC0415
    m3 = m_k(3)
    tp = tensor_product(m3, l)
    k = m3_of(l)
    atoms = [m3.index_of(s) for s in "abc"]
    triples = [tuple(phi_of(m3, l, i)(x) for x in atoms) for i in tp.bi_ideals]
    balanced = all(t in k.index for t in triples)
    explicit = False
    if balanced and len(set(triples)) == len(triples) == len(k):
        ids = [k.index[t] for t in triples]
        explicit = all(
            ii.subset_of(ij) == bool(k.lattice.leq[ids[i], ids[j]])
            for i, ii in enumerate(tp.bi_ideals)
            for j, ij in enumerate(tp.bi_ideals))
    return M3TensorReport(len(tp), len(k), balanced, explicit)
