"""Dense qubit linear algebra: density operators over labelled slots.

Bit convention: for slots ``(s0, s1, ..., s_{n-1})`` the basis ket
``|b0 b1 ... b_{n-1}>`` has index ``sum(b_k * 2**(n-1-k))``, i.e. slot 0 is
the most significant bit, exactly as ``np.kron`` orders factors.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-12
EIG_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)


def default_tol() -> float:
    """Identity-check tolerance; ``QGRAV_TOL`` in the environment overrides it."""
    raw = os.environ.get("QGRAV_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = float(raw)
    if not value >= 0.0:
        raise ValueError(f"QGRAV_TOL must be a non-negative number, got {raw!r}")
    return value


class InvalidStateError(ValueError):
    """Matrix is not a valid density operator (or lacks a required property)."""


class UnknownSlotError(ValueError):
    pass


class DimensionError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """An internal numerical identity failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class ValidityReport:
    hermitian: bool
    unit_trace: bool
    min_eigenvalue: float
    psd: bool

    @property
    def valid(self) -> bool:
        return self.hermitian and self.unit_trace and self.psd


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian unit-trace operator on ``len(slots)`` qubits.

    Hermiticity and unit trace are enforced at construction. Positivity is
    *reported* rather than enforced (see :meth:`validity`), because some
    published matrices handled by this package are not positive for every
    parameter value and must still be analysable. Operations that need a
    genuine state call :meth:`require_valid`.
    """

    matrix: np.ndarray
    slots: tuple[str, ...]
    tol: float = field(default_factory=default_tol)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        slots = tuple(self.slots)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density operator must be square, got shape {m.shape}")
        if m.shape[0] != 2 ** len(slots):
            raise DimensionError(
                f"matrix dimension {m.shape[0]} does not match {len(slots)} qubit slots"
            )
        if len(set(slots)) != len(slots):
            raise UnknownSlotError(f"duplicate slot labels in {slots}")
        if self.tol < 0:
            raise ValueError("tolerance must be non-negative")
        if not is_hermitian(m, self.tol):
            raise InvalidStateError("matrix is not Hermitian within tolerance")
        if abs(np.trace(m) - 1.0) > max(self.tol, 1e-12) * m.shape[0]:
            raise InvalidStateError(f"trace is {np.trace(m).real!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "slots", slots)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return len(self.slots)

    def index(self, slot: str) -> int:
        try:
            return self.slots.index(slot)
        except ValueError:
            raise UnknownSlotError(f"unknown slot {slot!r}; have {self.slots}") from None

    @property
    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix, self.tol)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def validity(self) -> ValidityReport:
        lam = self.min_eigenvalue
        return ValidityReport(
            hermitian=True,
            unit_trace=True,
            min_eigenvalue=lam,
            psd=lam >= -max(self.tol, EIG_TOL),
        )

    @property
    def is_valid(self) -> bool:
        return self.validity().valid

    def require_valid(self) -> "DensityOperator":
        report = self.validity()
        if not report.psd:
            raise InvalidStateError(
                f"operator is not positive semidefinite (min eigenvalue {report.min_eigenvalue:.3e})"
            )
        return self

    def relabel(self, slots: Sequence[str]) -> "DensityOperator":
        return DensityOperator(self.matrix, tuple(slots), self.tol)

    def allclose(self, other: "DensityOperator | np.ndarray", atol: float | None = None) -> bool:
        atol = self.tol if atol is None else atol
        o = other.matrix if isinstance(other, DensityOperator) else np.asarray(other)
        return o.shape == self.matrix.shape and bool(np.abs(self.matrix - o).max() <= atol)

    def __repr__(self):
        return f"DensityOperator(slots={self.slots}, dim={self.dim})"


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.abs(m - m.conj().T).max(initial=0.0) <= tol)


def ket(bits: str | Sequence[int]) -> np.ndarray:
    """Computational basis ket, e.g. ``ket("010")``."""
    bits = [int(b) for b in bits]
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2) if bits else 0] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def pure_state(psi: np.ndarray, slots: Sequence[str]) -> DensityOperator:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidStateError("zero vector")
    return DensityOperator(projector(psi / norm), tuple(slots))


def kron(*ms) -> np.ndarray:
    return reduce(np.kron, ms)


def tensor_product(a, b):
    """Kronecker product; for two density operators the slot lists concatenate."""
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        if set(a.slots) & set(b.slots):
            raise UnknownSlotError(f"slot clash between {a.slots} and {b.slots}")
        return DensityOperator(np.kron(a.matrix, b.matrix), a.slots + b.slots, min(a.tol, b.tol))
    a = a.matrix if isinstance(a, DensityOperator) else np.asarray(a)
    b = b.matrix if isinstance(b, DensityOperator) else np.asarray(b)
    return np.kron(a, b)


def trace_out(m: np.ndarray, n_qubits: int, remove: Iterable[int]) -> np.ndarray:
    """Partial trace of a ``2**n`` square array over the given qubit positions."""
    remove = sorted(set(remove), reverse=True)
    t = np.asarray(m).reshape([2] * (2 * n_qubits))
    n = n_qubits
    for q in remove:
        t = np.trace(t, axis1=q, axis2=q + n)
        n -= 1
    d = 2**n
    return t.reshape(d, d)


def transpose_qubits(m: np.ndarray, n_qubits: int, positions: Iterable[int]) -> np.ndarray:
    """Transpose the row/column indices of the given qubit positions only."""
    t = np.asarray(m).reshape([2] * (2 * n_qubits))
    axes = list(range(2 * n_qubits))
    for q in positions:
        axes[q], axes[q + n_qubits] = axes[q + n_qubits], axes[q]
    d = 2**n_qubits
    return t.transpose(axes).reshape(d, d)


def embed(op: np.ndarray, position: int, n_qubits: int) -> np.ndarray:
    """Lift an operator on one qubit (or a contiguous block) to ``n_qubits``."""
    op = np.asarray(op)
    k = int(round(np.log2(op.shape[1])))
    return kron(np.eye(2**position), op, np.eye(2 ** (n_qubits - position - k)))


def partial_trace(rho: DensityOperator, slots_to_remove: Iterable[str]) -> DensityOperator:
    remove = {rho.index(s) for s in slots_to_remove}
    keep = tuple(s for i, s in enumerate(rho.slots) if i not in remove)
    return DensityOperator(trace_out(rho.matrix, rho.n_qubits, remove), keep, rho.tol)


def partial_transpose(rho: DensityOperator, slot: str) -> np.ndarray:
    return transpose_qubits(rho.matrix, rho.n_qubits, [rho.index(slot)])


def hermitian_eigenvalues(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if not is_hermitian(m, max(tol, 1e-12) * scale):
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def shannon_bits(p: Iterable[float]) -> float:
    """-sum p log2 p with 0 log 0 = 0; tiny negative round-off is clipped."""
    p = np.asarray(list(p), dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho: DensityOperator) -> float:
    if not isinstance(rho, DensityOperator):
        raise TypeError("von_neumann_entropy expects a DensityOperator")
    rho.require_valid()
    lam = np.clip(rho.eigenvalues, 0.0, None)
    return max(0.0, shannon_bits(lam))


def fidelity_pure(rho: DensityOperator, psi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != rho.dim:
        raise DimensionError(f"state vector has length {psi.shape[0]}, operator has dim {rho.dim}")
    return float(np.real(psi.conj() @ rho.matrix @ psi))
