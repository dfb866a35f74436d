import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pqseries import DomainError, NumericalError, ShapeError, pq_number
from pqseries import oscillator as osc
from pqseries.identities import fibonacci_sequence


def test_layout_matches_ladder_convention():
    real = osc.build_fock(1, 0.5, 3)
    # a|n> = sqrt([n]) |n-1>: column n, row n-1
    assert real.a[0, 1] == 1 and np.isclose(real.a[1, 2], np.sqrt(1.5))
    assert np.count_nonzero(np.tril(real.a)) == 0
    np.testing.assert_array_equal(real.a_dag, real.a.T)
    np.testing.assert_array_equal(np.diag(real.n_op), [0, 1, 2])


def test_number_diagonal_example():
    real = osc.build_fock(1, 0.5, 3)
    np.testing.assert_allclose(np.diag(real.a_dag @ real.a), [0, 1, 1.5], rtol=1e-15)


def test_classical_limit_entries():
    real = osc.build_fock(1, 1, 6)
    np.testing.assert_allclose(np.diag(real.a, 1), np.sqrt(np.arange(1, 6)), rtol=1e-15)


def test_single_level():
    real = osc.build_fock(0.8, 0.9, 1)
    assert real.a.shape == (1, 1) and not real.a.any() and not real.a_dag.any() and not real.n_op.any()
    res = osc.verify_oscillator(real)
    assert res.subspace_dim == 0 and all(v == 0 for v in res.residuals.values())


def test_build_errors():
    with pytest.raises(DomainError):
        osc.build_fock(0, 0.5, 3)
    with pytest.raises(ValueError):
        osc.build_fock(1, 0.5, 0)
    # p = 0.5, q = -3 gives [2] = 1/p + q = -1
    with pytest.raises(NumericalError):
        osc.build_fock(0.5, -3, 4, real=True)
    assert osc.build_fock(0.5, -3, 4).a[1, 2] == pytest.approx(1j)


@given(st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.integers(2, 40))
def test_number_diagonal_property(p, q, dim):
    real = osc.build_fock(p, q, dim)
    diag = np.diag(real.a_dag @ real.a)
    expected = real.numbers
    scale = np.maximum(np.abs(expected), 1.0)
    assert np.max(np.abs(diag - expected) / scale) < 1e-13


def test_classical_boson_relation():
    res = osc.verify_oscillator(osc.build_fock(1, 1, 10))
    assert res.residuals[osc.OSCILLATOR_RELATION] < 1e-13


def test_deformed_relations_example():
    res = osc.verify_oscillator(osc.build_fock(0.8, 0.9, 25))
    assert res.subspace_dim == 24
    assert max(res.residuals.values()) < 1e-12


def test_two_level_truncation():
    res = osc.verify_oscillator(osc.build_fock(0.8, 0.9, 2))
    assert res.subspace_dim == 1
    assert res.residuals[osc.OSCILLATOR_RELATION] < 1e-14


@given(st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.integers(2, 40))
def test_relations_property(p, q, dim):
    assume(abs(1 / p - q) > 1e-3)
    res = osc.verify_oscillator(osc.build_fock(p, q, dim))
    assert set(res.residuals) == {osc.OSCILLATOR_RELATION, osc.N_A_RELATION, osc.N_ADAG_RELATION}
    assert max(res.relative().values()) < 1e-11


def test_degenerate_base_uses_limit():
    p = 1 / 0.9
    real = osc.build_fock(p, 0.9, 6)
    np.testing.assert_allclose(real.numbers, [n * 0.9 ** (n - 1) for n in range(6)], rtol=1e-14)
    assert max(osc.verify_oscillator(real).relative().values()) < 1e-13


@given(st.floats(0.5, 1.5), st.floats(0.5, 1.5))
def test_numbers_match_fibonacci(p, q):
    seq = fibonacci_sequence((1 / p, q), 29)
    nums = osc.build_fock(p, q, 30).numbers
    assert max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(seq[1:], nums[1:])) < 1e-12


@given(st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.integers(2, 30))
def test_hermitian_when_real_positive(p, q, dim):
    real = osc.build_fock(p, q, dim, real=True)
    assert np.max(np.abs(real.a_dag - real.a.conj().T)) <= 1e-15


# -- angular momentum checker ------------------------------------------------------

SPIN_HALF = np.diag([0.5, -0.5])
JP = np.array([[0, 1], [0, 0]], dtype=complex)
JM = JP.T.copy()


def test_angular_zero_ladders_report_rhs():
    res = osc.verify_angular_momentum(SPIN_HALF, np.zeros((2, 2)), np.zeros((2, 2)), 0.7, 0.6)
    assert res.residuals[osc.J0_JP_RELATION] == 0 and res.residuals[osc.J0_JM_RELATION] == 0
    rhs = max(abs(pq_number(2 * w, (1 / 0.7, 0.6))) for w in (0.5, -0.5))
    assert res.residuals[osc.JP_JM_RELATION] == pytest.approx(rhs, rel=1e-15)


def test_angular_classical_spin_half():
    res = osc.verify_angular_momentum(SPIN_HALF, JP, JM, 1, 1)
    assert max(res.residuals.values()) < 1e-13


@pytest.mark.parametrize("q", [0.3, 0.8, 1.7])
def test_angular_q_deformed_spin_half(q):
    res = osc.verify_angular_momentum(SPIN_HALF, JP, JM, 1, q)
    assert res.residuals[osc.JP_JM_RELATION] < 1e-13


def test_angular_errors():
    with pytest.raises(ShapeError):
        osc.verify_angular_momentum(SPIN_HALF, np.zeros((3, 3)), JM, 1, 1)
    with pytest.raises(ShapeError):
        osc.verify_angular_momentum(np.zeros(2), JP, JM, 1, 1)
    with pytest.raises(DomainError):
        osc.verify_angular_momentum(np.ones((2, 2)), JP, JM, 1, 1)
    with pytest.raises(DomainError):
        osc.verify_angular_momentum(SPIN_HALF, JP, JM, 0, 1)
