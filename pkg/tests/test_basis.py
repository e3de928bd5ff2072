import numpy as np
import pytest

from rotcool import EXCITED, UNCOUPLED, SystemSpec, build_basis, ladder_ops, sigma_ops


def test_dimension_small():
    basis = build_basis(SystemSpec(j_max=1, n_max=2))
    assert basis.dim == 12  # (1+3)(2+1)


def test_dimension_paper_scale():
    basis = build_basis(SystemSpec(j_max=5, n_max=6))
    assert basis.dim == 56  # (5+3)(6+1)


def test_index_label_roundtrip():
    basis = build_basis(SystemSpec(j_max=3, n_max=4))
    seen = set()
    for i in range(basis.dim):
        label, n = basis.label(i)
        assert basis.index(label, n) == i
        seen.add((label, n))
    assert len(seen) == basis.dim


def test_excited_and_uncoupled_distinct():
    basis = build_basis(SystemSpec(j_max=1, n_max=3))
    i_e = basis.index(EXCITED, 0)
    i_u = basis.index(UNCOUPLED, 3)
    assert i_e != i_u
    assert 0 <= i_e < basis.dim
    assert 0 <= i_u < basis.dim


@pytest.mark.parametrize("j_max,n_max", [(0, 2), (1, 0), (-1, 3)])
def test_rejects_bad_cutoffs(j_max, n_max):
    with pytest.raises(ValueError):
        SystemSpec(j_max=j_max, n_max=n_max)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SystemSpec(j_max=1, n_max=2, eta=0.0)
    with pytest.raises(ValueError):
        SystemSpec(j_max=1, n_max=2, gamma_j=-0.1)
    with pytest.raises(ValueError):
        SystemSpec(j_max=1, n_max=2, beta_b=0.0)


def test_default_chain_is_ladder():
    spec = SystemSpec(j_max=3, n_max=1)
    assert spec.chain == ((3, 2), (2, 1), (1, 0))


def test_rejects_bad_chain():
    with pytest.raises(ValueError):
        SystemSpec(j_max=2, n_max=1, chain=((1, 1),))
    with pytest.raises(ValueError):
        SystemSpec(j_max=2, n_max=1, chain=((3, 2),))


def test_ladder_matrix_elements():
    basis = build_basis(SystemSpec(j_max=1, n_max=3))
    a, ad = ladder_ops(basis)
    assert a[basis.index(0, 0), basis.index(0, 1)] == pytest.approx(1.0)
    assert ad[basis.index(1, 3), basis.index(1, 2)] == pytest.approx(np.sqrt(3.0))
    # vacuum annihilates, truncation has no image out of the space
    vac = np.zeros(basis.dim)
    vac[basis.index(0, 0)] = 1.0
    assert np.all(a @ vac == 0)
    assert np.allclose(ad, a.conj().T)


def test_number_operator_diagonal():
    basis = build_basis(SystemSpec(j_max=2, n_max=4))
    a, ad = ladder_ops(basis)
    num = ad @ a
    expect = np.array([basis.label(i)[1] for i in range(basis.dim)], dtype=float)
    assert np.allclose(num, np.diag(expect))


def test_sigma_ops_motional_diagonal():
    basis = build_basis(SystemSpec(j_max=1, n_max=3))
    raise_op, lower_op = sigma_ops(basis, 1)
    assert raise_op[basis.index(EXCITED, 2), basis.index(1, 2)] == pytest.approx(1.0)
    assert raise_op[basis.index(EXCITED, 2), basis.index(1, 3)] == 0.0
    assert np.allclose(lower_op, raise_op.conj().T)


def test_sigma_ops_uncoupled():
    basis = build_basis(SystemSpec(j_max=1, n_max=3))
    _, lower_u = sigma_ops(basis, UNCOUPLED)
    for n in range(basis.n_max + 1):
        assert lower_u[basis.index(UNCOUPLED, n), basis.index(EXCITED, n)] == 1.0
    assert np.count_nonzero(lower_u) == basis.n_max + 1


def test_sigma_ops_rejects_unknown_label():
    basis = build_basis(SystemSpec(j_max=1, n_max=2))
    with pytest.raises(ValueError):
        sigma_ops(basis, 5)
    with pytest.raises(ValueError):
        sigma_ops(basis, EXCITED)


def test_distinct_labels_disjoint_patterns():
    basis = build_basis(SystemSpec(j_max=2, n_max=2))
    patterns = []
    for label in (0, 1, 2, UNCOUPLED):
        raise_op, _ = sigma_ops(basis, label)
        patterns.append(set(zip(*np.nonzero(raise_op))))
    for i in range(len(patterns)):
        for j in range(i + 1, len(patterns)):
            assert not (patterns[i] & patterns[j])
