import itertools

import pytest

from latmod import catalog, congruence, construct
from latmod.congruence import Congruence, all_congruences, principal_congruence
from latmod.errors import SizeLimitExceeded


def brute_force_congruences(lat):
    """Oracle: every partition with the substitution property, found by
    filtering all partitions of the element set."""
    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    found = set()
    for part in partitions(list(lat.elements())):
        ids = [0] * lat.n
        for label, block in enumerate(part):
            for e in block:
                ids[e] = label
        cand = Congruence.from_ids(ids)
        if congruence.has_substitution_property(lat, cand):
            found.add(cand.ids)
    return found


def test_all_congruences_against_partition_oracle(lattices):
    for name in ("C2", "C3", "C4", "C2sq", "N5", "M3", "witness7"):
        lat = lattices[name]
        con = all_congruences(lat)
        assert {c.ids for c in con.congruences} == brute_force_congruences(lat)


def test_chain_congruence_counts():
    # a chain with n-1 covers has one congruence per subset of its covers
    for n in range(1, 7):
        con = all_congruences(catalog.chain(n))
        assert len(con) == 2 ** max(n - 1, 0)


def test_known_congruence_counts(lattices):
    sizes = {name: len(all_congruences(lat)) for name, lat in lattices.items()
             if lat.n <= 9}
    assert sizes["M3"] == 2 and sizes["M4"] == 2  # simple lattices
    assert sizes["N5"] == 5
    assert sizes["witness7"] == 5
    assert sizes["C2sq"] == 4
    assert sizes["B3"] == 8


def test_principal_congruence_examples():
    n5 = catalog.n5()
    o, b, a, c, i = (n5.index_of(s) for s in "obaci")
    theta = principal_congruence(n5, b, a)
    assert theta.same(b, a) and not theta.same(o, c)
    assert theta.blocks() == [[o], [b, a], [c], [i]]
    collapse = principal_congruence(n5, a, i)
    # collapsing the top cover propagates down the other side and back up
    assert collapse.same(o, c) and not collapse.is_all()
    assert collapse.blocks() == [[o, c], [b, a, i]]


def test_cover_pair_generation_agrees_with_all_pairs(lattices):
    for name in ("N5", "M4", "witness7", "B3"):
        lat = lattices[name]
        fast = {c.ids for c in all_congruences(lat).congruences}
        slow = {c.ids for c in
                all_congruences(lat, exhaustive_pairs=True).congruences}
        assert fast == slow


def test_join_and_meet_of_congruences():
    n5 = catalog.n5()
    o, b, a, c, i = (n5.index_of(s) for s in "obaci")
    t1 = principal_congruence(n5, b, a)
    t2 = principal_congruence(n5, a, i)
    joined = congruence.join_congruences(t1, t2)
    assert joined.same(b, i) and joined.same(o, c) and not joined.same(o, b)
    met = congruence.meet_congruences(joined, t1)
    assert met.ids == t1.ids
    assert t1.refines(joined) and not joined.refines(t1)


def test_congruence_lattice_is_distributive(lattices):
    import numpy as np

    from latmod import core
    for name in ("C4", "N5", "witness7", "B3", "C2sq"):
        lat = lattices[name]
        cons = all_congruences(lat).congruences
        n = len(cons)
        leq = np.zeros((n, n), dtype=bool)
        for x in range(n):
            for y in range(n):
                leq[x, y] = cons[x].refines(cons[y])
        assert core.is_distributive(core.lattice_from_leq(leq))


def test_extend_then_restrict_is_identity():
    base = catalog.n5()
    k = construct.m3_of(base)
    image = construct.embed_atom(k)
    for a in base.elements():
        for b in base.elements():
            theta = principal_congruence(base, a, b)
            phi = congruence.extend_congruence(k, theta)
            back = congruence.restrict_congruence(phi, image)
            assert back.ids == theta.ids


def test_extension_preserves_whole_congruence_lattice(lattices):
    for name in ("C2", "C3", "C2sq", "N5", "M3", "M4", "witness7"):
        for emb in ("atom", "diag"):
            rep = congruence.verify_cpe(lattices[name], emb)
            assert rep.passed, (name, emb, rep)


def test_congruence_size_cap():
    with pytest.raises(SizeLimitExceeded):
        all_congruences(catalog.chain(120), cap=100)


def test_congruence_value_object():
    c = Congruence.from_ids(["x", "x", "y", 7, 7])
    assert c.block_count == 3
    assert c.same(0, 1) and c.same(3, 4) and not c.same(1, 2)
    assert Congruence.from_ids([0, 0, 1, 2, 2]).ids == c.ids
