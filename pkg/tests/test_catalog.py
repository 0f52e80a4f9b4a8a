import pytest

from latmod import catalog, core, rank
from latmod.catalog import GridDecoration
from latmod.errors import (
    ArgumentOutOfRange,
    DecorationConflict,
    SizeLimitExceeded,
)


def test_standard_lattices():
    assert catalog.chain(4).n == 4
    assert catalog.boolean(0).n == 1
    assert catalog.boolean(3).n == 8
    assert catalog.m_k(3).n == 5
    assert catalog.m_k(4).n == 6
    assert catalog.n5().n == 5
    assert core.find_isomorphism(catalog.c2sq(),
                                 catalog.boolean(2)) is not None
    for bad in (lambda: catalog.chain(0), lambda: catalog.boolean(-1),
                lambda: catalog.m_k(2)):
        with pytest.raises(ArgumentOutOfRange):
            bad()


def test_every_catalog_lattice_validates(lattices):
    for lat in lattices.values():
        lat.validate()


def test_fano_structure():
    f = catalog.fano()
    assert f.n == 16
    assert f.names[f.join(f.index_of("1"), f.index_of("2"))] == "124"
    assert f.names[f.meet(f.index_of("124"), f.index_of("235"))] == "2"
    # any two points span a line; any two lines meet in a point
    for p in "1234567":
        for q in "1234567":
            if p != q:
                line = f.names[f.join(f.index_of(p), f.index_of(q))]
                assert len(line) == 3 and p in line and q in line
    assert core.is_modular(f) and not core.is_distributive(f)


def test_subspace_lattices():
    assert core.find_isomorphism(catalog.subspace_lattice(2, 3),
                                 catalog.fano()) is not None
    assert core.find_isomorphism(catalog.subspace_lattice(2, 2),
                                 catalog.m_k(3)) is not None
    assert core.find_isomorphism(catalog.subspace_lattice(3, 2),
                                 catalog.m_k(4)) is not None
    assert core.find_isomorphism(catalog.subspace_lattice(5, 2),
                                 catalog.m_k(6)) is not None
    with pytest.raises(ArgumentOutOfRange):
        catalog.subspace_lattice(6, 2)
    with pytest.raises(SizeLimitExceeded):
        catalog.subspace_lattice(2, 13)


def test_decorate_grid_basics():
    assert core.find_isomorphism(
        catalog.decorate_grid(GridDecoration(2, 2, (("m", (0, 0), (1, 1)),))),
        catalog.m_k(3)) is not None
    w7 = catalog.witness7()
    assert w7.n == 7
    assert core.find_isomorphism(
        catalog.decorate_grid(GridDecoration(3, 2, (("n", (1, 0), (1, 1)),))),
        w7) is not None


def test_decoration_conflicts():
    with pytest.raises(DecorationConflict) as err:
        catalog.decorate_grid(GridDecoration(
            3, 3, (("n", (0, 0), (0, 1)), ("n", (0, 0), (1, 0)))))
    assert err.value.condition == "C3"
    with pytest.raises(DecorationConflict) as err:
        catalog.decorate_grid(GridDecoration(3, 3, (("n", (0, 0), (1, 1)),)))
    assert err.value.condition == "C4"
    with pytest.raises(DecorationConflict) as err:
        catalog.decorate_grid(GridDecoration(3, 3, (("m", (0, 0), (0, 1)),)))
    assert err.value.condition == "C4"
    with pytest.raises(DecorationConflict) as err:
        catalog.decorate_grid(GridDecoration(
            3, 3, (("n", (0, 1), (1, 1)), ("m", (0, 0), (1, 1)))))
    assert err.value.condition == "C3"


def test_check_c1_c4_positive_and_negative():
    w7 = catalog.witness7()
    grid = [e for e, nm in enumerate(w7.names) if nm.startswith("(")]
    ok, diag = catalog.check_c1_c4(w7, grid)
    assert ok, diag
    # a chain is not a valid grid designation for the pentagon
    n5 = catalog.n5()
    ok, diag = catalog.check_c1_c4(n5, [0, 1, 2, 4])
    assert not ok
    # dropping a grid element breaks sublattice closure or the bounds
    ok, diag = catalog.check_c1_c4(w7, grid[1:])
    assert not ok


def test_random_c1c4_deterministic_and_valid():
    a = catalog.random_c1c4(7)
    b = catalog.random_c1c4(7)
    assert a == b and a.names == b.names
    for seed in range(40):
        lat = catalog.random_c1c4(seed, rows=4, cols=3, density=0.7)
        grid = [e for e, nm in enumerate(lat.names) if nm.startswith("(")]
        ok, diag = catalog.check_c1_c4(lat, grid)
        assert ok, (seed, diag)
    plain = catalog.random_c1c4(0, density=0.0)
    assert plain.n == 9 and rank.modularity_rank(plain) == 1


def test_ladder_family_structure():
    for n in (1, 2, 3):
        lat = catalog.l_family(n)
        assert lat.n == 8 + 5 * n
        x0, y0, z0 = (lat.index_of(s) for s in ("x0", "y0", "z0"))
        trace = rank.closure3(lat, rank.Triple(x0, y0, z0))
        firsts = [lat.names[t[0]] for t in trace.iterates]
        assert firsts[: n + 1] == [f"x{k}" for k in range(n + 1)]
        assert trace.iterates[n + 1][0] == lat.top
        if n >= 2:
            inner = core.interval(lat, lat.meet(lat.index_of("x1"),
                                                lat.index_of("z1")), lat.top)
            assert core.find_isomorphism(inner, catalog.l_family(n - 1)) is not None
    with pytest.raises(ArgumentOutOfRange):
        catalog.l_family(0)


def test_enumerate_lattices_counts():
    counts = [sum(1 for _ in catalog.enumerate_lattices(n)) for n in range(1, 7)]
    assert counts == [1, 1, 1, 2, 7, 39]
    for lat in catalog.enumerate_lattices(5):
        lat.validate()


def test_by_name_registry(tmp_path):
    assert catalog.by_name("m3").n == 5
    assert catalog.by_name("witness7").n == 7
    assert catalog.by_name("b3").n == 8
    assert catalog.by_name("c4").n == 4
    assert catalog.by_name("l:2").n == 18
    assert catalog.by_name("subspace:2,2").n == 5
    path = tmp_path / "saved.json"
    path.write_text(core.serialize(catalog.n5()))
    assert catalog.by_name(f"file:{path}") == catalog.n5()
    with pytest.raises(ArgumentOutOfRange):
        catalog.by_name("mystery")
