"""Explicit states: control qubits, the tripartite gravity-environment state,
its Bell-diagonal two-qubit marginal, and the Bell-diagonal parameter algebra.

Slot order of the tripartite state is ``("GE", "E1", "B2")``: gravity
environment, local environment, remote output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .qmat import (
    EIG_TOL,
    PAULIS,
    DensityOperator,
    InvalidStateError,
    hermitian_eigenvalues,
    kron,
)

TRIPARTITE_SLOTS = ("GE", "E1", "B2")
MARGINAL_SLOTS = ("GE", "E1")
OMEGA_REGIME_MAX = 1.0 / 3.0


@dataclass(frozen=True)
class GravityStateParams:
    omega: float

    def __post_init__(self):
        if not (0.0 <= self.omega <= 1.0):
            raise ValueError(f"omega must lie in [0, 1], got {self.omega!r}")

    @property
    def in_regime(self) -> bool:
        """True when omega <= 1/3, the regime in which the family is studied."""
        return self.omega <= OMEGA_REGIME_MAX + 1e-15


def _params(p) -> GravityStateParams:
    return p if isinstance(p, GravityStateParams) else GravityStateParams(float(p))


def control_state(mode: Literal["fixed", "superposed"]) -> DensityOperator:
    """Control qubit: classical coin (fixed order) or |+><+| (superposed order)."""
    if mode == "fixed":
        m = 0.5 * np.eye(2)
    elif mode == "superposed":
        m = 0.5 * np.ones((2, 2))
    else:
        raise ValueError(f"unknown control mode {mode!r}")
    return DensityOperator(m, ("C",))


def gravity_tripartite(p: GravityStateParams | float) -> DensityOperator:
    """The 8x8 tripartite state on (GE, E1, B2).

    Nonzero entries: diagonal ``(w, a, 0, a, 0, a, w, a) / 2`` with
    ``w = omega`` and ``a = (1 - omega) / 2``, plus the coherence ``a / 2``
    between |000> and |110>.

    The result is Hermitian with unit trace for every omega in [0, 1] but is
    positive only for omega >= 1/3; its lowest eigenvalue is
    ``min(0, (3*omega - 1) / 4)``. Inspect ``.validity()`` before treating it
    as a physical state.
    """
    w = _params(p).omega
    a = 0.5 - 0.5 * w
    m = np.zeros((8, 8))
    m[np.arange(8), np.arange(8)] = [w, a, 0.0, a, 0.0, a, w, a]
    m[0, 6] = m[6, 0] = a
    return DensityOperator(0.5 * m, TRIPARTITE_SLOTS)


def bell_diagonal_marginal(p: GravityStateParams | float) -> DensityOperator:
    """Two-qubit (GE, E1) marginal; spectrum {1/2, w/2, (1-w)/4, (1-w)/4}."""
    w = _params(p).omega
    a = 0.5 - 0.5 * w
    b = 0.5 + 0.5 * w
    m = np.diag([b, a, a, b])
    m[0, 3] = m[3, 0] = a
    return DensityOperator(0.5 * m, MARGINAL_SLOTS)


def parallel_mixture(omega: float) -> DensityOperator:
    """Equal mixture of the two role-exchanged tripartite states.

    The second term lives on (GE, E2, B1); both terms are aligned to the
    common role order (gravity env, local env, remote output) before mixing.
    """
    p = _params(omega)
    first = gravity_tripartite(p)
    second = gravity_tripartite(p).relabel(("GE", "E2", "B1"))
    roles = ("GE", "E_local", "B_remote")
    aligned = [first.relabel(roles), second.relabel(roles)]
    return DensityOperator(0.5 * aligned[0].matrix + 0.5 * aligned[1].matrix, roles)


@dataclass(frozen=True)
class BellDiagonalParams:
    """Local Bloch z-components ``r``, ``s`` and correlation coefficients ``c1..c3``."""

    r: float
    s: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("r", "s", "c1", "c2", "c3"):
            if abs(getattr(self, name)) > 1.0 + 1e-12:
                raise ValueError(f"|{name}| must be <= 1, got {getattr(self, name)!r}")

    @classmethod
    def from_omega(cls, omega: float) -> "BellDiagonalParams":
        w = _params(omega).omega
        c1 = 0.5 * (1.0 - w)
        return cls(0.0, 0.0, c1, -c1, w)

    @property
    def correlations(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    @property
    def in_tetrahedron(self) -> bool:
        return abs(self.c1) + abs(self.c2) + abs(self.c3) <= 1.0 + 1e-12


@dataclass(frozen=True)
class BellEigenvalues:
    u_plus: float
    u_minus: float
    v_plus: float
    v_minus: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u_plus, self.u_minus, self.v_plus, self.v_minus])

    @property
    def within_half(self) -> bool:
        return bool(self.as_array().max() <= 0.5 + 1e-12)


def bell_diagonal_matrix(p: BellDiagonalParams) -> np.ndarray:
    r, s, c1, c2, c3 = p.r, p.s, p.c1, p.c2, p.c3
    return 0.25 * np.array(
        [
            [1 + r + s + c3, 0, 0, c1 - c2],
            [0, 1 + r - s - c3, c1 + c2, 0],
            [0, c1 + c2, 1 - r + s - c3, 0],
            [c1 - c2, 0, 0, 1 - r - s + c3],
        ],
        dtype=complex,
    )


def bell_diagonal_pauli_expansion(p: BellDiagonalParams) -> np.ndarray:
    """Same operator assembled from the Pauli expansion; used as a cross-check."""
    I, X, Y, Z = PAULIS
    m = kron(I, I) + p.r * kron(Z, I) + p.s * kron(I, Z)
    for c, sigma in zip(p.correlations, (X, Y, Z)):
        m = m + c * kron(sigma, sigma)
    return 0.25 * m


def bell_diagonal_build(p: BellDiagonalParams) -> DensityOperator:
    m = bell_diagonal_matrix(p)
    lam = hermitian_eigenvalues(m)[0]
    if lam < -EIG_TOL:
        raise InvalidStateError(f"parameters give a non-positive matrix (eigenvalue {lam:.6g})")
    return DensityOperator(m, MARGINAL_SLOTS)


def bell_eigenvalues(p: BellDiagonalParams) -> BellEigenvalues:
    rv = np.hypot(p.r - p.s, p.c1 + p.c2)
    ru = np.hypot(p.r + p.s, p.c1 - p.c2)
    return BellEigenvalues(
        u_plus=0.25 * (1 + p.c3 + ru),
        u_minus=0.25 * (1 + p.c3 - ru),
        v_plus=0.25 * (1 - p.c3 + rv),
        v_minus=0.25 * (1 - p.c3 - rv),
    )


def omega_from_eigenvalues(e: BellEigenvalues) -> float:
    """Recover omega for a member of the marginal family.

    Uses the u-pair: ``omega = 1 - 2 (u+ - u-)``. On this family v+ == v-,
    so the same expression in the v-pair would return 1 for every member;
    the u-form is the one consistent with ``c1 = u+ - u-``, ``c2 = -c1``,
    ``c3 = 1 + 2 c2 = omega``.
    """
    return 1.0 - 2.0 * (e.u_plus - e.u_minus)


def correlations_from_eigenvalues(e: BellEigenvalues) -> tuple[float, float, float]:
    """(c1, c2, c3) of the marginal family from its u-pair eigenvalues."""
    c1 = e.u_plus - e.u_minus
    c2 = -c1
    return c1, c2, 1.0 + 2.0 * c2
