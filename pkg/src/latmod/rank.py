"""Balanced-triple and balanced-quadruple step maps, closure iteration,
and the modularity-rank engine.

The step map sends <x,y,z> to <x v (y^z), y v (x^z), z v (x^y)>; its
fixed points are exactly the balanced triples (all pairwise meets equal),
and iterating it computes the least balanced triple above the input.  A
lattice satisfies the n-th modularity identity exactly when every
triple's iteration stabilizes by index n; the modularity rank is the
least such n.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import FiniteLattice
from .errors import RankExceedsCap

_BLOCK_ENTRIES = 2_000_000


class Triple(NamedTuple):
    x: object
    y: object
    z: object


class Quadruple(NamedTuple):
    x0: object
    x1: object
    x2: object
    x3: object


@dataclass(frozen=True)
class ClosureTrace:
    """The iteration record of a step map from one starting tuple.

    iterates[0] is the input; iterates[k] its k-th image.  If two
    consecutive iterates agree, stabilization_index is the first k with
    iterates[k] == iterates[k+1]; otherwise it is None and the trace was
    cut off at `cap` steps.
    """

    initial: tuple
    iterates: tuple
    stabilization_index: Optional[int]
    cap: int

    @property
    def stabilized(self) -> bool:
        return self.stabilization_index is not None

    @property
    def final(self) -> tuple:
        return self.iterates[-1]


def is_balanced3(lat, t) -> bool:
    """True iff the three pairwise meets of t coincide."""
    x, y, z = t
    return lat.meet(x, y) == lat.meet(x, z) == lat.meet(y, z)


def step3(lat, t) -> Triple:
    """One application of the adjustment map; extensive and isotone."""
    x, y, z = t
    return Triple(lat.join(x, lat.meet(y, z)),
                  lat.join(y, lat.meet(x, z)),
                  lat.join(z, lat.meet(x, y)))


def is_balanced4(lat, q) -> bool:
    """True iff all six pairwise meets of the quadruple coincide."""
    base = lat.meet(q[0], q[1])
    return all(lat.meet(q[i], q[k]) == base
               for i in range(4) for k in range(i + 1, 4))


def step4(lat, q) -> Quadruple:
    """Each coordinate joins with all pairwise meets of the other three."""
    out = []
    for i in range(4):
        rest = [q[k] for k in range(4) if k != i]
        v = q[i]
        for a in range(3):
            for b in range(a + 1, 3):
                v = lat.join(v, lat.meet(rest[a], rest[b]))
        out.append(v)
    return Quadruple(*out)


def _default_cap(lat) -> int:
    if isinstance(lat, FiniteLattice):
        return 3 * lat.height() + 1
    raise ValueError("a cap is required for non-finite lattices")


def _closure(lat, start, step, cap) -> ClosureTrace:
    iterates = [tuple(start)]
    for k in range(cap + 1):
        nxt = tuple(step(lat, iterates[-1]))
        iterates.append(nxt)
        if nxt == iterates[-2]:
            return ClosureTrace(tuple(start), tuple(iterates), k, cap)
    return ClosureTrace(tuple(start), tuple(iterates[:cap + 1]), None, cap)


def closure3(lat, t, cap: Optional[int] = None) -> ClosureTrace:
    """Iterate step3 until fixpoint or cap.  On stabilization the final
    triple is balanced and is the least balanced triple above t."""
    return _closure(lat, t, step3, cap if cap is not None else _default_cap(lat))


def closure4(lat, q, cap: Optional[int] = None) -> ClosureTrace:
    return _closure(lat, q, step4, cap if cap is not None else _default_cap(lat))


# -- vectorized triple scans ----------------------------------------------

def _stab_indices(meet: np.ndarray, join: np.ndarray,
                  x: np.ndarray, y: np.ndarray, z: np.ndarray,
                  cap: int) -> np.ndarray:
    """Stabilization index of every triple in the batch, in batch order."""
    stab = np.zeros(x.size, dtype=np.int32)
    pos = np.arange(x.size)
    k = 0
    while pos.size:
        if k > cap:
            raise RankExceedsCap(f"triples still moving after {cap} steps")
        x1 = join[x, meet[y, z]]
        y1 = join[y, meet[x, z]]
        z1 = join[z, meet[x, y]]
        same = (x1 == x) & (y1 == y) & (z1 == z)
        stab[pos[same]] = k
        keep = ~same
        pos = pos[keep]
        x, y, z = x1[keep], y1[keep], z1[keep]
        k += 1
    return stab


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a triple scan: how many triples were examined, how many
    stabilized at each index, and the lexicographically first triple
    attaining the maximum index."""

    triple_count: int
    histogram: dict            # stabilization index -> count
    max_index: int
    witness: Optional[Triple]

    def failing(self, n: int) -> int:
        """Number of scanned triples whose iteration is still moving at
        index n (i.e. that refute the n-th identity)."""
        return sum(c for i, c in self.histogram.items() if i > n)


def _merge_blocks(parts) -> ScanResult:
    hist: dict[int, int] = {}
    total = 0
    max_index = 0
    witness = None
    for bh, bmax, bwit, bcount in parts:
        total += bcount
        for i, c in bh.items():
            hist[i] = hist.get(i, 0) + c
        if bwit is not None and bmax > max_index:
            max_index, witness = bmax, bwit
        if witness is None and bwit is not None:
            max_index, witness = bmax, bwit
    return ScanResult(total, hist, max_index, witness)


def _scan_batch(lat, x, y, z, cap):
    if x.size == 0:
        return {}, 0, None, 0
    stab = _stab_indices(lat.meet_table, lat.join_table, x, y, z, cap)
    counts = np.bincount(stab)
    hist = {int(i): int(c) for i, c in enumerate(counts) if c}
    bmax = int(stab.max())
    first = int(np.flatnonzero(stab == bmax)[0])
    witness = Triple(int(x[first]), int(y[first]), int(z[first]))
    return hist, bmax, witness, int(stab.size)


def full_triple_scan(lat: FiniteLattice, cap: Optional[int] = None) -> ScanResult:
    """Stabilization indices of all |L|^3 triples, in lexicographic blocks."""
    if cap is None:
        cap = _default_cap(lat)
    n = lat.n
    rows = max(1, _BLOCK_ENTRIES // max(1, n * n))
    ys = np.repeat(np.arange(n, dtype=np.int32), n)
    zs = np.tile(np.arange(n, dtype=np.int32), n)
    parts = []
    for x0 in range(0, n, rows):
        xs = np.arange(x0, min(x0 + rows, n), dtype=np.int32)
        x = np.repeat(xs, n * n)
        y = np.tile(ys, xs.size)
        z = np.tile(zs, xs.size)
        parts.append(_scan_batch(lat, x, y, z, cap))
    return _merge_blocks(parts)


def _antichain_batches(lat: FiniteLattice, lo: int, hi: int, batch: int):
    """Antichain triples x<y<z with lo <= x < hi, in lexicographic batches."""
    incomp = ~lat.leq & ~lat.leq.T
    n = lat.n
    idx = np.arange(n)
    bx, by, bz = [], [], []
    size = 0
    for x in range(lo, hi):
        row_x = incomp[x]
        for y in np.flatnonzero(row_x & (idx > x)):
            zs = np.flatnonzero(row_x & incomp[y] & (idx > y))
            if zs.size:
                bx.append(np.full(zs.size, x, dtype=np.int32))
                by.append(np.full(zs.size, y, dtype=np.int32))
                bz.append(zs.astype(np.int32))
                size += zs.size
        if size >= batch:
            yield np.concatenate(bx), np.concatenate(by), np.concatenate(bz)
            bx, by, bz, size = [], [], [], 0
    if size:
        yield np.concatenate(bx), np.concatenate(by), np.concatenate(bz)


def antichain_rank_scan(lat: FiniteLattice, cap: Optional[int] = None,
                        jobs: int = 1, batch: int = 500_000) -> ScanResult:
    """Scan every 3-element antichain {x,y,z} (as x<y<z) and record its
    stabilization index.  Deterministic for any job count."""
    if cap is None:
        cap = _default_cap(lat)

    def scan_range(lo: int, hi: int):
        return _merge_blocks(_scan_batch(lat, x, y, z, cap)
                             for x, y, z in _antichain_batches(lat, lo, hi, batch))

    if jobs <= 1 or lat.n < 2 * jobs:
        res = scan_range(0, lat.n)
    else:
        bounds = np.linspace(0, lat.n, jobs + 1).astype(int)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(scan_range, int(bounds[i]), int(bounds[i + 1]))
                    for i in range(jobs)]
            res = _merge_blocks((f.result().histogram, f.result().max_index,
                                 f.result().witness, f.result().triple_count)
                                for f in futs)
    return res


# -- the identity checker and the rank ------------------------------------

def satisfies_gamma(lat: FiniteLattice, n: int,
                    cap: Optional[int] = None) -> tuple[bool, Optional[Triple]]:
    """Does every triple stabilize by index n?  Returns (verdict, witness);
    the witness is the lexicographically first slowest triple on failure."""
    if n < 1:
        raise ValueError("n >= 1 required")
    res = full_triple_scan(lat, cap=cap)
    if res.max_index <= n:
        return True, None
    return False, res.witness


@dataclass(frozen=True)
class RankReport:
    rank: int
    witness: Optional[Triple]       # a slowest triple (None only on C_1)
    witness_names: Optional[tuple]
    histogram: dict
    triple_count: int


def rank_report(lat: FiniteLattice, cap: Optional[int] = None,
                antichains_only: bool = False, jobs: int = 1) -> RankReport:
    """Modularity rank with diagnostics.

    The fast path scans only antichains; that decides the rank whenever it
    is at least 3 (triples with two comparable entries stabilize by index
    2), and otherwise falls back to a full scan to separate rank 1 from 2.
    """
    if antichains_only:
        res = antichain_rank_scan(lat, cap=cap, jobs=jobs)
        if res.max_index < 3:
            res = full_triple_scan(lat, cap=cap)
    else:
        res = full_triple_scan(lat, cap=cap)
    rank = max(1, res.max_index)
    wit = res.witness
    names = tuple(lat.names[e] for e in wit) if wit is not None else None
    return RankReport(rank, wit, names, res.histogram, res.triple_count)


def modularity_rank(lat: FiniteLattice, cap: Optional[int] = None,
                    antichains_only: bool = False) -> int:
    """Least n such that every triple's iteration stabilizes by index n."""
    return rank_report(lat, cap=cap, antichains_only=antichains_only).rank
