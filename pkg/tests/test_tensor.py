import random

import pytest

from latmod import catalog, core, tensor
from latmod.errors import SizeLimitExceeded
from latmod.tensor import bi_ideal_closure, nabla, pure_tensor


def test_nabla_shape():
    for a, b in ((catalog.chain(3), catalog.n5()),
                 (catalog.m_k(3), catalog.c2sq())):
        nb = nabla(a, b)
        assert nb.size() == a.n + b.n - 1
        assert tensor.is_valid_bi_ideal(a, b, nb)
        assert all(nb.contains(x, b.bottom) for x in range(a.n))
        assert all(nb.contains(a.bottom, y) for y in range(b.n))


def test_pure_tensors():
    a, b = catalog.m_k(3), catalog.n5()
    for x in range(a.n):
        for y in range(b.n):
            pt = pure_tensor(a, b, x, y)
            assert pt.contains(x, y)
            assert pt == bi_ideal_closure(a, b, [(x, y)])
    assert pure_tensor(a, b, a.bottom, b.top) == nabla(a, b)
    assert pure_tensor(a, b, a.top, b.top).size() == a.n * b.n


def test_closure_operator_laws():
    rng = random.Random(5)
    a, b = catalog.m_k(3), catalog.n5()
    for _ in range(60):
        pairs = [(rng.randrange(a.n), rng.randrange(b.n))
                 for _ in range(rng.randrange(4))]
        more = pairs + [(rng.randrange(a.n), rng.randrange(b.n))]
        small, big = bi_ideal_closure(a, b, pairs), bi_ideal_closure(a, b, more)
        assert tensor.is_valid_bi_ideal(a, b, small)
        assert all(small.contains(x, y) for x, y in pairs)      # extensive
        assert small.subset_of(big)                             # monotone
        assert bi_ideal_closure(a, b, small.pairs()) == small   # idempotent


def test_cap_reconstruction():
    rng = random.Random(11)
    a, b = catalog.m_k(3), catalog.n5()
    for _ in range(100):
        pairs = [(rng.randrange(a.n), rng.randrange(b.n))
                 for _ in range(rng.randrange(5))]
        ideal = bi_ideal_closure(a, b, pairs)
        assert bi_ideal_closure(a, b, tensor.cap_of(a, b, ideal)) == ideal


def test_hom_representation(lattices):
    pool = [lattices[s] for s in ("C2", "C3", "C2sq", "M3", "N5")]
    for a in pool:
        for b in pool:
            rep = tensor.verify_repr_iso(a, b)
            assert rep.passed, (a.name, b.name, rep)
            assert rep.hom_count == rep.ideal_count


def test_phi_and_hom_inverse_each_other():
    a, b = catalog.n5(), catalog.m_k(3)
    for ideal in tensor.enumerate_bi_ideals(a, b):
        h = tensor.phi_of(a, b, ideal)
        assert tensor.hom_of(a, b, h) == ideal
        assert h(a.bottom) == b.top


def test_two_chain_unit_law(lattices):
    c2 = lattices["C2"]
    for name in ("C2", "C3", "C2sq", "M3", "M4", "N5", "witness7"):
        lat = lattices[name]
        tp = tensor.tensor_product(c2, lat)
        assert core.find_isomorphism(tp.lattice, lat) is not None
        assert core.find_isomorphism(tensor.hom_lattice(c2, lat), lat) is not None


def test_small_tensor_examples(lattices):
    tp = tensor.tensor_product(lattices["M3"], lattices["C2"])
    assert core.find_isomorphism(tp.lattice, lattices["M3"]) is not None
    sq = tensor.tensor_product(lattices["C3"], lattices["C3"])
    # distributive factors: the tensor is the poset of antitone-style
    # assignments; for two 3-chains this has 6 elements
    assert len(sq) == 6
    assert core.is_distributive(sq.lattice)


def test_tensor_symmetry(lattices):
    pairs = [("C3", "N5"), ("M3", "C2sq"), ("C2sq", "N5")]
    for sa, sb in pairs:
        ab = tensor.tensor_product(lattices[sa], lattices[sb]).lattice
        ba = tensor.tensor_product(lattices[sb], lattices[sa]).lattice
        assert core.find_isomorphism(ab, ba) is not None


def test_all_outputs_are_valid_bi_ideals():
    a, b = catalog.n5(), catalog.c2sq()
    tp = tensor.tensor_product(a, b)
    for ideal in tp.bi_ideals:
        assert tensor.is_valid_bi_ideal(a, b, ideal)


def test_m3_tensor_matches_balanced_triples(lattices):
    for name in ("C2", "C3", "C2sq", "N5", "M4"):
        rep = tensor.verify_m3_tensor_iso(lattices[name])
        assert rep.passed, (name, rep)
        assert rep.tensor_size == len(
            tensor.tensor_product(catalog.m_k(3), lattices[name]))


def test_tensor_size_cap():
    with pytest.raises(SizeLimitExceeded):
        tensor.tensor_product(catalog.boolean(3), catalog.boolean(6))
