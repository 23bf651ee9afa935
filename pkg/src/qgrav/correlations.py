"""Entropic correlation measures for two-qubit states of Bell-diagonal type.

Mutual information, classical correlation (closed form over three
measurement axes, plus a brute-force projective-measurement oracle),
quantum discord, coherent information, one-shot capacity evaluations over
the omega family and the omega sweep.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .gravity_states import (
    OMEGA_REGIME_MAX,
    BellDiagonalParams,
    bell_diagonal_marginal,
    bell_eigenvalues,
)
from .qmat import EIG_TOL, DensityOperator, InvalidStateError, partial_trace, von_neumann_entropy


def _xlog2x(x: float) -> float:
    if x < -1e-12:
        raise ValueError(f"logarithm of negative argument {x!r}; parameters are not a valid state")
    return 0.0 if x <= 0.0 else x * np.log2(x)


def _binary_bloch_entropy(x: float) -> float:
    """Entropy of a qubit with Bloch length ``x``: 1 - sum (1 -+ x)/2 log2(1 -+ x)."""
    return 1.0 - 0.5 * _xlog2x(1.0 - x) - 0.5 * _xlog2x(1.0 + x)


def _two_qubit(rho: DensityOperator) -> tuple[str, str]:
    if rho.n_qubits != 2:
        raise ValueError("expected a two-qubit state")
    rho.require_valid()
    return rho.slots


def mutual_information(rho: DensityOperator) -> float:
    a, b = _two_qubit(rho)
    return (
        von_neumann_entropy(partial_trace(rho, [b]))
        + von_neumann_entropy(partial_trace(rho, [a]))
        - von_neumann_entropy(rho)
    )


def mutual_information_from_params(p: BellDiagonalParams) -> float:
    """Eigenvalue form: S(A) + S(B) + sum over u+-, v+- of lambda log2 lambda."""
    e = bell_eigenvalues(p)
    return (
        _binary_bloch_entropy(abs(p.r))
        + _binary_bloch_entropy(abs(p.s))
        + sum(_xlog2x(x) for x in e.as_array())
    )


@dataclass(frozen=True)
class ClassicalCorrelation:
    value: float
    f1: float
    f2: float
    f3: float


def classical_correlation_closed(p: BellDiagonalParams) -> ClassicalCorrelation:
    """``S(rho_A) - min(f1, f2, f3)`` with the second qubit measured along z, x or y.

    ``f1`` uses the outcome probabilities ``(1 +- s)/2`` as normalisers, and
    ``f2``/``f3`` the conditional Bloch length ``sqrt(r**2 + c**2)``. For
    ``r = s = 0`` this is exact; otherwise it is an upper bound on the
    minimal conditional entropy (so a lower bound on the correlation).
    """
    lam = bell_eigenvalues(p).as_array().min()
    if lam < -EIG_TOL:
        raise InvalidStateError(f"parameters give a non-positive matrix (eigenvalue {lam:.6g})")
    r, s, c1, c2, c3 = p.r, p.s, p.c1, p.c2, p.c3
    f1 = 0.0
    for num, outcome_weight in (
        (1 + r + s + c3, 1 + s),
        (1 - r + s - c3, 1 + s),
        (1 + r - s - c3, 1 - s),
        (1 - r - s + c3, 1 - s),
    ):
        if num <= 0.0:
            _xlog2x(num)
            continue
        f1 -= 0.25 * num * np.log2(num / (2.0 * outcome_weight))
    f2 = _binary_bloch_entropy(np.sqrt(r * r + c1 * c1))
    f3 = _binary_bloch_entropy(np.sqrt(r * r + c2 * c2))
    return ClassicalCorrelation(_binary_bloch_entropy(abs(r)) - min(f1, f2, f3), f1, f2, f3)


def _measurement_vectors(theta, phi):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    k0 = np.stack([c + 0j * phi, e * s], axis=-1)
    k1 = np.stack([-s + 0j * phi, e * c], axis=-1)
    return k0, k1


def _qubit_entropy_batch(m: np.ndarray) -> np.ndarray:
    """Entropy of (unnormalised) 2x2 Hermitian blocks ``m[..., 2, 2]`` after normalisation."""
    tr = np.real(m[..., 0, 0] + m[..., 1, 1])
    det = np.real(m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0])
    safe = np.where(tr > 1e-300, tr, 1.0)
    disc = np.sqrt(np.clip((tr / safe) ** 2 - 4 * det / safe**2, 0.0, None))
    out = 0.0
    for lam in (0.5 * (1 + disc), 0.5 * (1 - disc)):
        lam = np.clip(lam, 0.0, 1.0)
        out = out - np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
    return np.where(tr > 1e-300, out, 0.0), tr


def _conditional_entropy(rho4: np.ndarray, measured: int, theta, phi):
    """Average entropy of the unmeasured qubit after a projective measurement."""
    t = rho4.reshape(2, 2, 2, 2)
    if measured == 0:
        blocks = t.transpose(0, 2, 1, 3)  # [a, a', b, b']
    else:
        blocks = t.transpose(1, 3, 0, 2)  # [b, b', a, a']
    total = 0.0
    for k in _measurement_vectors(np.asarray(theta), np.asarray(phi)):
        sigma = np.einsum("...i,ijkl,...j->...kl", k.conj(), blocks, k)
        h, prob = _qubit_entropy_batch(sigma)
        total = total + prob * h
    return total


def classical_correlation_bruteforce(
    rho: DensityOperator,
    grid: tuple[int, int] = (61, 121),
    measured_slot: str | None = None,
) -> float:
    """``S(unmeasured) - min_k sum_k p_k S(sigma_k)`` over rank-one projective
    measurements on ``measured_slot`` (default: the first slot).

    The minimum is located on a (theta, phi) grid over the Bloch sphere and
    then polished with Nelder-Mead.
    """
    a, _ = _two_qubit(rho)
    measured = 0 if measured_slot in (None, a) else rho.index(measured_slot)
    m = np.asarray(rho.matrix)
    thetas = np.linspace(0.0, np.pi, grid[0])
    phis = np.linspace(0.0, 2 * np.pi, grid[1])
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(m, measured, tt, pp)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    res = minimize(
        lambda x: float(_conditional_entropy(m, measured, x[0], x[1])),
        x0=[thetas[i], phis[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
    )
    best = min(float(values[i, j]), float(res.fun))
    s_unmeasured = von_neumann_entropy(partial_trace(rho, [rho.slots[measured]]))
    return s_unmeasured - best


def quantum_discord(rho: DensityOperator, params: BellDiagonalParams) -> float:
    return mutual_information(rho) - classical_correlation_closed(params).value


def coherent_information(rho: DensityOperator) -> float:
    """``S(A) + S(B) - S(AB) - 1``, i.e. mutual information less one bit (signed)."""
    return mutual_information(rho) - 1.0


@dataclass(frozen=True)
class CorrelationReport:
    omega: float
    mutual_info: float
    classical_corr: float
    discord: float
    coherent_info: float
    coherent_info_abs: float
    f1: float
    f2: float
    f3: float
    one_shot_q: float

    def to_dict(self) -> dict:
        return asdict(self)


def correlation_report(omega: float) -> CorrelationReport:
    rho = bell_diagonal_marginal(omega)
    params = BellDiagonalParams.from_omega(omega)
    mi = mutual_information(rho)
    cc = classical_correlation_closed(params)
    ic = coherent_information(rho)
    return CorrelationReport(
        omega=float(omega),
        mutual_info=mi,
        classical_corr=cc.value,
        discord=mi - cc.value,
        coherent_info=ic,
        coherent_info_abs=abs(ic),
        f1=cc.f1,
        f2=cc.f2,
        f3=cc.f3,
        one_shot_q=1.0 - von_neumann_entropy(rho),
    )


@dataclass(frozen=True)
class OneShotCapacities:
    classical: float
    quantum: float
    argmax_classical: float
    argmax_quantum: float
    regularized: bool = False  # the n -> infinity limit is never evaluated


def one_shot_capacities(omega_grid: Sequence[float]) -> OneShotCapacities:
    """Single-letter maxima over the omega family: ``max I`` and ``max (1 - S(AB))``."""
    grid = [float(w) for w in omega_grid]
    if not grid:
        raise ValueError("omega grid is empty")
    if min(grid) < 0.0 or max(grid) > OMEGA_REGIME_MAX + 1e-12:
        raise ValueError("omega grid must lie within [0, 1/3]")
    mi = np.array([mutual_information(bell_diagonal_marginal(w)) for w in grid])
    q = np.array([1.0 - von_neumann_entropy(bell_diagonal_marginal(w)) for w in grid])
    ic, iq = int(np.argmax(mi)), int(np.argmax(q))
    return OneShotCapacities(float(mi[ic]), float(q[iq]), grid[ic], grid[iq])


def omega_sweep(omega_min: float, omega_max: float, steps: int) -> list[CorrelationReport]:
    """Correlation reports on an evenly spaced omega grid, ascending."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not (0.0 < omega_min < omega_max <= OMEGA_REGIME_MAX + 1e-12):
        raise ValueError("need 0 < omega_min < omega_max <= 1/3")
    return [correlation_report(float(w)) for w in np.linspace(omega_min, omega_max, steps)]


figure4_sweep = omega_sweep  # name kept for interface compatibility
