"""Two-party process matrices and the causal guessing game.

Slot layout of every process matrix is ``(A_in, A_out, B_in, B_out)``.
Local operations enter through the transposed Choi operator
``M = [sum_ij |i><j| (x) M(|i><j|)]^T`` on (in, out), and outcome
probabilities are ``Tr[W (M_A (x) M_B)]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qmat import I2, InvalidStateError, X, Z, hermitian_eigenvalues, is_hermitian, ket, kron, projector

PROCESS_SLOTS = ("A_in", "A_out", "B_in", "B_out")
OCB_VALUE = (2.0 + np.sqrt(2.0)) / 4.0
PROB_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    matrix: np.ndarray
    tol: float = PROB_TOL

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (16, 16):
            raise InvalidStateError(f"process matrix must be 16x16, got {m.shape}")
        if not is_hermitian(m, self.tol):
            raise InvalidStateError("process matrix is not Hermitian")
        if abs(np.trace(m) - 4.0) > self.tol:
            raise InvalidStateError(f"process matrix trace is {np.trace(m).real!r}, expected 4")
        lam = hermitian_eigenvalues(m, self.tol)[0]
        if lam < -self.tol:
            raise InvalidStateError(f"process matrix is not positive (min eigenvalue {lam:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def min_eigenvalue(self) -> float:
        return float(hermitian_eigenvalues(self.matrix, self.tol)[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def build_ocb_process(coefficient: float = 1.0 / np.sqrt(2.0)) -> ProcessMatrix:
    """``W = [1 + c (Z_Aout Z_Bin + Z_Ain X_Bin Z_Bout)] / 4`` with ``c = 1/sqrt(2)`` by default."""
    w = np.eye(16) + coefficient * (kron(I2, Z, Z, I2) + kron(Z, I2, X, Z))
    return ProcessMatrix(0.25 * w)


def product_process() -> ProcessMatrix:
    return ProcessMatrix(0.25 * np.eye(16))


def causally_ordered_process() -> ProcessMatrix:
    """Alice's input maximally mixed, her output wired to Bob's input by the
    identity channel, Bob's output discarded (Bob acts last)."""
    phi = np.zeros(4)
    phi[[0, 3]] = 1.0
    return ProcessMatrix(kron(0.5 * I2, np.outer(phi, phi), I2))


@dataclass(frozen=True, eq=False)
class LocalInstrument:
    """One Kraus list per outcome; together they form a CPTP map on a qubit."""

    outcome_ops: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        outs = tuple(tuple(np.array(k, dtype=complex) for k in ops) for ops in self.outcome_ops)
        object.__setattr__(self, "outcome_ops", outs)
        d_in = outs[0][0].shape[1]
        total = sum(k.conj().T @ k for ops in outs for k in ops)
        if np.abs(total - np.eye(d_in)).max() > PROB_TOL:
            raise ValueError("instrument outcomes do not sum to a trace-preserving map")

    def __len__(self):
        return len(self.outcome_ops)


def choi_of_map(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    d_in = kraus_ops[0].shape[1]
    d_out = kraus_ops[0].shape[0]
    c = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.zeros((d_in, d_in))
            unit[i, j] = 1.0
            c += np.kron(unit, sum(k @ unit @ k.conj().T for k in kraus_ops))
    return c.T


def choi_of_instrument(instr: LocalInstrument) -> list[np.ndarray]:
    chois = [choi_of_map(ops) for ops in instr.outcome_ops]
    for c in chois:
        if hermitian_eigenvalues(c, PROB_TOL)[0] < -PROB_TOL:
            raise ValueError("outcome map is not completely positive")
    return chois


def probability(w: ProcessMatrix, a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != (4, 4) or b.shape != (4, 4):
        raise ValueError("local Choi operators must be 4x4 (qubit in, qubit out)")
    val = np.trace(w.matrix @ np.kron(a, b))
    if abs(val.imag) > 1e-12:
        raise ValueError(f"probability has imaginary part {val.imag:.3e}")
    return float(val.real)


def joint_distribution(w: ProcessMatrix, alice: LocalInstrument, bob: LocalInstrument) -> np.ndarray:
    ca, cb = choi_of_instrument(alice), choi_of_instrument(bob)
    return np.array([[probability(w, a, b) for b in cb] for a in ca])


# -- the game strategies ----------------------------------------------------

_Z_BASIS = (ket("0"), ket("1"))
_X_BASIS = ((ket("0") + ket("1")) / np.sqrt(2), (ket("0") - ket("1")) / np.sqrt(2))
_Y_BASIS = ((ket("0") + 1j * ket("1")) / np.sqrt(2), (ket("0") - 1j * ket("1")) / np.sqrt(2))
BASES = {"Z": _Z_BASIS, "X": _X_BASIS, "Y": _Y_BASIS}


def measure_and_prepare_instrument(meas_basis: str, prep) -> LocalInstrument:
    """Outcome ``k``: project onto basis vector ``k`` and output ``prep(k)``.

    ``prep`` is a callable from outcome to a 2x2 density matrix.
    """
    ops = []
    for k, e in enumerate(BASES[meas_basis]):
        sigma = prep(k)
        w, v = np.linalg.eigh(sigma)
        ops.append(tuple(np.sqrt(wi) * np.outer(v[:, i], e.conj()) for i, wi in enumerate(w) if wi > 1e-15))
    return LocalInstrument(tuple(ops))


def alice_instrument(a: int) -> LocalInstrument:
    """Measure Z (outcome = guess of b), re-prepare |a>."""
    return measure_and_prepare_instrument("Z", lambda _: projector(_Z_BASIS[a]))


def bob_instrument(b: int, b_prime: int) -> LocalInstrument:
    if b_prime == 1:
        # outcome is the guess of a; output carries nothing
        return measure_and_prepare_instrument("Z", lambda _: 0.5 * np.eye(2))
    return measure_and_prepare_instrument("X", lambda m: projector(_Z_BASIS[b ^ m]))


def ocb_game_value(w: ProcessMatrix) -> float:
    """Average success of ``[P(Bob guesses a | b'=1) + P(Alice guesses b | b'=0)] / 2``
    with uniform a, b, b' and the fixed optimal local strategies."""
    success = {0: 0.0, 1: 0.0}
    for a, b, bp in itertools.product((0, 1), repeat=3):
        p = joint_distribution(w, alice_instrument(a), bob_instrument(b, bp))
        if bp == 1:
            success[1] += p[:, a].sum() / 4.0
        else:
            success[0] += p[b, :].sum() / 4.0
    return 0.5 * (success[0] + success[1])


def _elementary_table(w: ProcessMatrix, meas_bases: Sequence[str], prep_bases: Sequence[str]) -> np.ndarray:
    """``P[ma, qa, x, alpha, mb, qb, y, beta]`` for measure-in-basis / prepare-eigenstate events."""
    chois = np.empty((len(meas_bases), len(prep_bases), 2, 2, 4, 4), dtype=complex)
    for i, m in enumerate(meas_bases):
        for j, q in enumerate(prep_bases):
            for x in (0, 1):
                for alpha in (0, 1):
                    chois[i, j, x, alpha] = choi_of_map([np.outer(BASES[q][alpha], BASES[m][x].conj())])
    flat = chois.reshape(-1, 4, 4)
    n = flat.shape[0]
    table = np.empty((n, n))
    for ia in range(n):
        for ib in range(n):
            table[ia, ib] = np.trace(w.matrix @ np.kron(flat[ia], flat[ib])).real
    shape = (len(meas_bases), len(prep_bases), 2, 2)
    return table.reshape(shape + shape)


def _best_deterministic_value(table: np.ndarray) -> float:
    """Exact maximum of the game value over deterministic local strategies.

    Alice fixes a measurement basis, a preparation basis and two functions
    of (a, outcome): her guess of b and the bit she prepares. Bob does the
    same with functions of (b, b', outcome). Because Bob's choices for
    different (b, b') enter disjoint terms of the objective, his best
    response is found per (b, b'), which makes the search exhaustive.
    """
    n_ma, n_qa = table.shape[0], table.shape[1]
    n_mb, n_qb = table.shape[4], table.shape[5]
    bob_bits = list(itertools.product((0, 1), repeat=4))  # h[0], h[1], k[0], k[1]
    best = -np.inf
    for ma, qa in itertools.product(range(n_ma), range(n_qa)):
        sub = table[ma, qa]  # [x, alpha, mb, qb, y, beta]
        for f_bits in itertools.product((0, 1), repeat=4):
            f = np.array(f_bits).reshape(2, 2)  # f[a, x]
            for g_bits in itertools.product((0, 1), repeat=4):
                g = np.array(g_bits).reshape(2, 2)
                # q[a, x, mb, qb, y, beta]
                q = np.stack([np.stack([sub[x, g[a, x]] for x in (0, 1)]) for a in (0, 1)])
                total = 0.0
                for b, bp in itertools.product((0, 1), repeat=2):
                    best_bob = -np.inf
                    for h0, h1, k0, k1 in bob_bits:
                        h, k = (h0, h1), (k0, k1)
                        val = np.zeros((n_mb, n_qb))
                        for a in (0, 1):
                            for x in (0, 1):
                                for y in (0, 1):
                                    correct = (h[y] == a) if bp == 1 else (f[a, x] == b)
                                    if correct:
                                        val = val + q[a, x, :, :, y, k[y]]
                        best_bob = max(best_bob, float(val.max()))
                    total += best_bob
                best = max(best, total / 8.0)
    return best


def deterministic_strategy_bound(w: ProcessMatrix) -> float:
    """Best value over classical (Z-basis) deterministic local strategies."""
    return _best_deterministic_value(_elementary_table(w, ["Z"], ["Z"]))


def pauli_strategy_search(w: ProcessMatrix) -> float:
    """Best value over deterministic strategies that measure and prepare in
    any Pauli eigenbasis (X, Y or Z) on each side."""
    bases = ["X", "Y", "Z"]
    return _best_deterministic_value(_elementary_table(w, bases, bases))


def normalization_max_error(w: ProcessMatrix, instrument_pairs) -> float:
    """Largest deviation from 1 of the total outcome probability."""
    worst = 0.0
    for alice, bob in instrument_pairs:
        worst = max(worst, abs(joint_distribution(w, alice, bob).sum() - 1.0))
    return worst


def random_instrument_pairs(n: int, seed: int = 2024) -> list[tuple[LocalInstrument, LocalInstrument]]:
    from .rand import rand_instrument_kraus

    rng = np.random.default_rng(seed)
    return [
        (
            LocalInstrument(tuple(tuple(o) for o in rand_instrument_kraus(2, 2, seed=rng))),
            LocalInstrument(tuple(tuple(o) for o in rand_instrument_kraus(2, 2, seed=rng))),
        )
        for _ in range(n)
    ]
