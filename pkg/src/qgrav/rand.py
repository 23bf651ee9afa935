"""Seeded random states, unitaries, channels and instruments."""

from __future__ import annotations

import numpy as np

from .gravity_states import BellDiagonalParams, bell_diagonal_matrix
from .qmat import hermitian_eigenvalues


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def rand_unitary(d: int, seed=None) -> np.ndarray:
    """Haar unitary via QR with phase fix."""
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_ket(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def rand_density(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    rng = _rng(seed)
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def rand_isometry(d_out: int, d_in: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))
    q, _ = np.linalg.qr(z)
    return q


def rand_kraus(n_kraus: int, d_in: int = 2, d_out: int = 2, seed=None) -> list[np.ndarray]:
    v = rand_isometry(n_kraus * d_out, d_in, seed)
    return [v[k * d_out : (k + 1) * d_out] for k in range(n_kraus)]


def rand_instrument_kraus(n_outcomes: int = 2, kraus_per_outcome: int = 2, d: int = 2, seed=None):
    """Kraus lists, one per outcome, jointly forming a CPTP map on a qubit."""
    ops = rand_kraus(n_outcomes * kraus_per_outcome, d, d, seed)
    return [ops[i * kraus_per_outcome : (i + 1) * kraus_per_outcome] for i in range(n_outcomes)]


def rand_bell_params(seed=None, local: bool = False) -> BellDiagonalParams:
    """Rejection-sample parameters giving a positive matrix.

    ``local=False`` keeps r = s = 0 (genuinely Bell-diagonal).
    """
    rng = _rng(seed)
    while True:
        c = rng.uniform(-1.0, 1.0, 3)
        r, s = rng.uniform(-0.6, 0.6, 2) if local else (0.0, 0.0)
        p = BellDiagonalParams(float(r), float(s), *map(float, c))
        if hermitian_eigenvalues(bell_diagonal_matrix(p))[0] >= 1e-9:
            return p
