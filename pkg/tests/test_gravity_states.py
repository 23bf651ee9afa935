import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgrav.gravity_states import (
    BellDiagonalParams,
    BellEigenvalues,
    GravityStateParams,
    bell_diagonal_build,
    bell_diagonal_marginal,
    bell_diagonal_matrix,
    bell_diagonal_pauli_expansion,
    bell_eigenvalues,
    control_state,
    correlations_from_eigenvalues,
    gravity_tripartite,
    omega_from_eigenvalues,
    parallel_mixture,
)
from qgrav.qmat import InvalidStateError, hermitian_eigenvalues, ket, partial_trace, projector
from qgrav.rand import rand_bell_params

omegas = st.floats(min_value=0.0, max_value=1.0)


def test_control_states():
    assert np.abs(control_state("fixed").matrix - np.eye(2) / 2).max() < 1e-15
    assert np.abs(control_state("superposed").matrix - 0.5).max() < 1e-15
    for mode in ("fixed", "superposed"):
        assert abs(np.trace(control_state(mode).matrix) - 1) < 1e-15
    with pytest.raises(ValueError):
        control_state("chaotic")


def test_params_validation():
    assert GravityStateParams(0.2).in_regime
    assert not GravityStateParams(0.5).in_regime
    for bad in (-0.1, 1.2, float("nan")):
        with pytest.raises(ValueError):
            GravityStateParams(bad)


def test_tripartite_at_one_third():
    rho = gravity_tripartite(1 / 3)
    m = rho.matrix
    nonzero_diag = [m[i, i].real for i in range(8) if abs(m[i, i]) > 0]
    assert len(nonzero_diag) == 6
    assert np.abs(np.array(nonzero_diag) - 1 / 6).max() < 1e-15
    assert abs(m[0, 6] - 1 / 6) < 1e-15 and abs(m[6, 0] - 1 / 6) < 1e-15
    assert abs(np.trace(m) - 1) < 1e-15
    assert abs(rho.min_eigenvalue) < 1e-12


def test_tripartite_at_one():
    expected = 0.5 * (projector(ket("000")) + projector(ket("110")))
    assert np.abs(gravity_tripartite(1.0).matrix - expected).max() < 1e-15


def test_tripartite_at_point_two_is_not_positive():
    assert abs(gravity_tripartite(0.2).min_eigenvalue + 0.1) < 1e-12


@given(omegas)
@settings(max_examples=50, deadline=None)
def test_tripartite_min_eigenvalue_closed_form(w):
    assert abs(gravity_tripartite(w).min_eigenvalue - min(0.0, (3 * w - 1) / 4)) < 1e-12


def test_marginal_at_one_third():
    expected = np.array([[1 / 3, 0, 0, 1 / 6], [0, 1 / 6, 0, 0], [0, 0, 1 / 6, 0], [1 / 6, 0, 0, 1 / 3]])
    assert np.abs(bell_diagonal_marginal(1 / 3).matrix - expected).max() < 1e-15


def test_marginal_endpoints():
    assert np.abs(bell_diagonal_marginal(1.0).matrix - np.diag([0.5, 0, 0, 0.5])).max() < 1e-15
    assert np.abs(bell_diagonal_marginal(0.0).eigenvalues - [0, 0.25, 0.25, 0.5]).max() < 1e-12


@given(omegas)
@settings(max_examples=50, deadline=None)
def test_marginal_is_trace_of_tripartite(w):
    reduced = partial_trace(gravity_tripartite(w), ["B2"])
    assert np.abs(reduced.matrix - bell_diagonal_marginal(w).matrix).max() < 1e-12


def test_parallel_mixture_matches_tripartite_in_role_order():
    for w in (0.0, 0.2, 1 / 3, 0.9):
        mix = parallel_mixture(w)
        assert np.abs(mix.matrix - gravity_tripartite(w).matrix).max() < 1e-15
        assert abs(np.trace(mix.matrix) - 1) < 1e-15
        assert np.abs(mix.matrix - mix.matrix.conj().T).max() == 0


def test_bell_diagonal_corner_cases():
    phi = (ket("00") + ket("11")) / np.sqrt(2)
    assert np.abs(bell_diagonal_matrix(BellDiagonalParams(0, 0, 1, -1, 1)) - projector(phi)).max() < 1e-15
    assert np.abs(bell_diagonal_matrix(BellDiagonalParams(0, 0, 0, 0, 0)) - np.eye(4) / 4).max() < 1e-15


def test_bell_diagonal_reproduces_marginal():
    p = BellDiagonalParams.from_omega(0.25)
    assert np.abs(bell_diagonal_build(p).matrix - bell_diagonal_marginal(0.25).matrix).max() < 1e-15


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_matrix_form_agrees_with_pauli_expansion(seed):
    p = rand_bell_params(seed, local=True)
    assert np.abs(bell_diagonal_matrix(p) - bell_diagonal_pauli_expansion(p)).max() < 1e-15


def test_build_rejects_non_positive_parameters():
    with pytest.raises(InvalidStateError):
        bell_diagonal_build(BellDiagonalParams(0, 0, 1, 1, 1))
    with pytest.raises(ValueError):
        BellDiagonalParams(0, 0, 1.5, 0, 0)


def test_bell_eigenvalues_examples():
    e = bell_eigenvalues(BellDiagonalParams(0, 0, 0, 0, 0))
    assert np.abs(e.as_array() - 0.25).max() < 1e-15
    e = bell_eigenvalues(BellDiagonalParams.from_omega(1 / 3))
    assert np.abs(e.as_array() - [0.5, 1 / 6, 1 / 6, 1 / 6]).max() < 1e-15
    assert e.within_half


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_bell_eigenvalues_match_eigensolver(seed):
    p = rand_bell_params(seed, local=True)
    dense = hermitian_eigenvalues(bell_diagonal_matrix(p))
    assert np.abs(np.sort(bell_eigenvalues(p).as_array()) - dense).max() < 1e-10


def test_omega_round_trip_examples():
    for w, expected in ((1 / 3, 1 / 3), (0.0, 0.0), (1.0, 1.0)):
        e = bell_eigenvalues(BellDiagonalParams.from_omega(w))
        assert abs(omega_from_eigenvalues(e) - expected) < 1e-12
    e = bell_eigenvalues(BellDiagonalParams.from_omega(0.0))
    assert abs(e.u_plus - e.u_minus - 0.5) < 1e-15


@given(omegas)
@settings(max_examples=50, deadline=None)
def test_omega_and_correlations_round_trip(w):
    p = BellDiagonalParams.from_omega(w)
    e = bell_eigenvalues(p)
    assert abs(omega_from_eigenvalues(e) - w) < 1e-12
    assert np.abs(np.array(correlations_from_eigenvalues(e)) - p.correlations).max() < 1e-12


def test_v_pair_form_would_not_round_trip():
    # on this family v+ == v-, so an omega built from the v-pair is stuck at 1
    e = bell_eigenvalues(BellDiagonalParams.from_omega(0.2))
    assert abs(e.v_plus - e.v_minus) < 1e-15
    assert isinstance(e, BellEigenvalues)
