import pytest

from corpus import DIM2_HODGE, DIM2_WEIGHT, dim2_mhs, mhs_corpus
from hodgesigma.errors import InvalidMHS, NotDirectSum, NotReal, NotRealWeight, NotValidated
from hodgesigma.gaussian import LatticeIndex
from hodgesigma.generate import GenProfile, random_mhs, random_split_bigrading
from hodgesigma.hodge import (
    BiGrading,
    HodgeFiltration,
    MixedHodgeStructure,
    WeightFiltration,
    bigrading_to_filtrations,
    deligne_splitting,
    hodge_numbers,
    real_basis_of_weight,
    validate_mhs,
    verify_splitting,
)
from hodgesigma.linalg import Matrix, Subspace, conj_subspace, intersect_subspaces


def one_dim(weight_steps, hodge_steps):
    full = Subspace.full(1)
    w = WeightFiltration(1, tuple((n, full if s else Subspace.zero(1)) for n, s in weight_steps))
    f = HodgeFiltration(1, tuple((p, full if s else Subspace.zero(1)) for p, s in hodge_steps))
    return w, f


def test_filtration_lookup_between_steps():
    assert DIM2_WEIGHT[1] == DIM2_WEIGHT[0]
    assert DIM2_WEIGHT[-1].is_zero()
    assert DIM2_WEIGHT[7].is_full()
    assert DIM2_HODGE[-3].is_full()
    assert DIM2_HODGE[5].is_zero()


def test_running_example_is_valid():
    report = validate_mhs(DIM2_WEIGHT, DIM2_HODGE)
    assert report.ok, report.failures()


def test_pure_weight_zero_line():
    w, f = one_dim([(0, True)], [(0, True), (1, False)])
    assert validate_mhs(w, f).ok


def test_type_one_minus_one_alone_is_rejected():
    w, f = one_dim([(0, True)], [(1, True), (2, False)])
    report = validate_mhs(w, f)
    assert not report.ok
    assert any(name.startswith("pure[n=0") for name in report.failures())
    with pytest.raises(InvalidMHS):
        MixedHodgeStructure.checked(w, f)


def test_complex_weight_filtration_is_rejected():
    w = WeightFiltration(2, ((0, Subspace([(1, 1j)], 2)), (1, Subspace.full(2))))
    f = HodgeFiltration(2, ((0, Subspace.full(2)),))
    report = validate_mhs(w, f)
    assert "weight.real[0]" in report.failures()


def test_splitting_of_running_example():
    bg = deligne_splitting(dim2_mhs())
    assert bg.pieces == {(0, 0): Subspace([(1, 0)], 2), (1, 1): Subspace([(1j, 1)], 2)}
    assert verify_splitting(bg, dim2_mhs()).ok
    assert hodge_numbers(bg) == {(0, 0): 1, (1, 1): 1}


def test_splitting_needs_validation():
    with pytest.raises(NotValidated):
        deligne_splitting(MixedHodgeStructure(DIM2_WEIGHT, DIM2_HODGE))


def test_zero_dimensional_structure():
    mhs = MixedHodgeStructure.checked(WeightFiltration(0, ()), HodgeFiltration(0, ()))
    bg = deligne_splitting(mhs)
    assert bg.pieces == {}
    assert verify_splitting(bg, mhs).ok
    assert hodge_numbers(bg) == {}


def test_wrong_piece_breaks_hodge_condition():
    bg = BiGrading(2, {(0, 0): Subspace([(1, 0)], 2), (1, 1): Subspace([(0, 1)], 2)})
    report = verify_splitting(bg, dim2_mhs())
    assert "hodge[1]" in report.failures()


def test_pure_structure_splits_as_hodge_decomposition():
    for seed in range(5):
        mhs = random_mhs(GenProfile({(2, 0): 1, (1, 1): 2, (0, 2): 1}, seed=seed))
        bg = deligne_splitting(mhs)
        f = mhs.hodge
        for (p, q), piece in bg.pieces.items():
            assert piece == intersect_subspaces(f[p], conj_subspace(f[q]))
        assert bg.is_split()


def test_bigrading_to_filtrations_examples():
    w, f = bigrading_to_filtrations(deligne_splitting(dim2_mhs()))
    assert w.same_as(DIM2_WEIGHT) and f.same_as(DIM2_HODGE)

    w, f = bigrading_to_filtrations(BiGrading(1, {(0, 0): Subspace.full(1)}))
    assert w[0].is_full() and f[0].is_full() and f[1].is_zero()

    with pytest.raises(NotDirectSum):
        bigrading_to_filtrations(BiGrading(2, {(1, 0): Subspace([(1, 1j)], 2)}))
    with pytest.raises(NotRealWeight):
        bigrading_to_filtrations(BiGrading(2, {(0, 0): Subspace([(1, 1j)], 2), (1, 1): Subspace([(1, -1j)], 2)}))


def test_hodge_numbers_of_curve():
    bg = random_split_bigrading(GenProfile({(1, 0): 1, (0, 1): 1}))
    assert hodge_numbers(bg) == {(1, 0): 1, (0, 1): 1}


def test_real_basis_of_weight():
    with pytest.raises(NotReal):
        real_basis_of_weight(WeightFiltration(2, ((0, Subspace([(1, 1j)], 2)),)), 0)
    basis = real_basis_of_weight(WeightFiltration(2, ((0, Subspace([(1j, 0)], 2)),)), 0)
    assert basis == Matrix([[1], [0]])
    basis = real_basis_of_weight(WeightFiltration(2, ((0, Subspace([(1, 1j), (1, -1j)], 2)),)), 0)
    assert basis.is_real() and Subspace.from_matrix_columns(basis).is_full()


def test_splitting_reproduces_filtrations_on_corpus():
    for mhs in mhs_corpus()[::7]:
        bg = deligne_splitting(mhs)
        w, f = bigrading_to_filtrations(bg)
        assert w.same_as(mhs.weight) and f.same_as(mhs.hodge)
        numbers = hodge_numbers(bg)
        assert all(numbers.get(LatticeIndex(q, p)) == d for (p, q), d in numbers.items())


def test_every_other_bigrading_fails_verification():
    # uniqueness: moving one basis vector of a piece towards another piece
    # gives a different bigrading, which must fail some check
    for mhs in mhs_corpus()[::15]:
        bg = deligne_splitting(mhs)
        keys = sorted(bg.pieces)
        for a in keys:
            for b in keys:
                if a == b:
                    continue
                vs = [list(v) for v in bg.pieces[a].vectors]
                vs[0] = [x + y for x, y in zip(vs[0], bg.pieces[b].vectors[0])]
                pieces = dict(bg.pieces)
                pieces[a] = Subspace(vs, bg.ambient_dim)
                other = BiGrading(bg.ambient_dim, pieces)
                assert other != bg
                assert not verify_splitting(other, mhs).ok, (a, b)


def test_filtration_steps_must_be_distinct():
    with pytest.raises(ValueError):
        WeightFiltration(1, ((0, Subspace.full(1)), (0, Subspace.full(1))))
