"""Kraus-form CPTP maps and the channel constructions built from them:
complementary channels, controlled assignment of two local channels,
measure-and-prepare maps, the probabilistic remote-simulation mixer, the
two-Kraus anti-degradable qubit family and flagged super-channels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .qmat import (
    DEFAULT_TOL,
    PAULIS,
    DensityOperator,
    DimensionError,
    is_hermitian,
    ket,
    projector,
)

REMOTE_SUCCESS_PROBABILITY = (2.0 + np.sqrt(2.0)) / 4.0
COIN_TOSS_PROBABILITY = 0.5


class CompletenessError(ValueError):
    """Kraus operators do not satisfy sum_k K_k^dagger K_k = I."""


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_k K_k rho K_k^dagger``.

    Every Kraus operator has shape ``(d_out, d_in)``; the environment
    dimension of the canonical Stinespring dilation is ``len(kraus_ops)``.
    """

    kraus_ops: tuple[np.ndarray, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must be equal-shaped matrices")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)
        err = self.completeness_error()
        if err > self.tol:
            raise CompletenessError(f"sum K^dagger K deviates from identity by {err:.3e}")

    @property
    def d_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    @property
    def d_env(self) -> int:
        return len(self.kraus_ops)

    def completeness_error(self) -> float:
        s = sum(k.conj().T @ k for k in self.kraus_ops)
        return float(np.abs(s - np.eye(self.d_in)).max())

    def __call__(self, m: np.ndarray) -> np.ndarray:
        return apply_to_matrix(self, m)

    def superoperator(self) -> np.ndarray:
        """Matrix of the map on row-major vectorised operators."""
        return sum(np.kron(k, k.conj()) for k in self.kraus_ops)

    def choi(self) -> np.ndarray:
        """``sum_ij |i><j| (x) N(|i><j|)`` on (in, out), unnormalised."""
        d = self.d_in
        c = np.zeros((d * self.d_out, d * self.d_out), dtype=complex)
        for i in range(d):
            for j in range(d):
                unit = np.zeros((d, d), dtype=complex)
                unit[i, j] = 1.0
                c += np.kron(unit, self(unit))
        return c

    def to_dict(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in k] for k in self.kraus_ops],
        }

    @classmethod
    def from_dict(cls, record: dict) -> "KrausChannel":
        ops = [np.array([[complex(re, im) for re, im in row] for row in k]) for k in record["kraus"]]
        ch = cls(tuple(ops))
        if (ch.d_in, ch.d_out) != (record["d_in"], record["d_out"]):
            raise DimensionError("recorded dimensions disagree with the Kraus operators")
        return ch


def apply_to_matrix(ch: KrausChannel, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (ch.d_in, ch.d_in):
        raise DimensionError(f"channel expects {ch.d_in}x{ch.d_in} input, got {m.shape}")
    return sum(k @ m @ k.conj().T for k in ch.kraus_ops)


def _default_out_slots(n_out: int, in_slots: tuple[str, ...]) -> tuple[str, ...]:
    if n_out == len(in_slots):
        return in_slots
    return tuple(f"out{i}" for i in range(n_out))


def apply(
    ch: KrausChannel,
    rho: DensityOperator,
    slot: str | None = None,
    out_slots: Sequence[str] | None = None,
) -> DensityOperator:
    """Apply ``ch`` to the whole of ``rho`` or, with ``slot``, to one qubit of it."""
    if slot is not None:
        if ch.d_in != 2 or ch.d_out != 2:
            raise DimensionError("single-slot application needs a qubit-to-qubit channel")
        pos = rho.index(slot)
        left, right = 2**pos, 2 ** (rho.n_qubits - pos - 1)
        lifted = KrausChannel(tuple(np.kron(np.kron(np.eye(left), k), np.eye(right)) for k in ch.kraus_ops))
        out = apply_to_matrix(lifted, rho.matrix)
        return DensityOperator(out, tuple(out_slots) if out_slots else rho.slots, rho.tol)
    if ch.d_in != rho.dim:
        raise DimensionError(f"channel input dimension {ch.d_in} does not match state dimension {rho.dim}")
    n_out = int(round(np.log2(ch.d_out)))
    if 2**n_out != ch.d_out:
        raise DimensionError(f"output dimension {ch.d_out} is not a qubit register; use apply_to_matrix")
    slots = tuple(out_slots) if out_slots else _default_out_slots(n_out, rho.slots)
    return DensityOperator(apply_to_matrix(ch, rho.matrix), slots, rho.tol)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((np.asarray(u),))


def compose(first: KrausChannel, second: KrausChannel) -> KrausChannel:
    """The map ``rho -> second(first(rho))``."""
    if first.d_out != second.d_in:
        raise DimensionError(f"cannot feed dimension {first.d_out} into {second.d_in}")
    return KrausChannel(tuple(b @ a for a in first.kraus_ops for b in second.kraus_ops))


def convex_mixture(weights: Sequence[float], channels: Sequence[KrausChannel]) -> KrausChannel:
    if abs(sum(weights) - 1.0) > 1e-12 or min(weights) < 0:
        raise ValueError("mixture weights must form a probability distribution")
    return KrausChannel(tuple(np.sqrt(w) * k for w, ch in zip(weights, channels) if w > 0 for k in ch.kraus_ops))


def complementary(ch: KrausChannel) -> KrausChannel:
    """Channel to the environment of ``V|psi> = sum_k K_k|psi> (x) |k>_E``.

    Row ``k`` of the ``j``-th complementary Kraus operator is row ``j`` of
    ``K_k``; the output dimension is the number of Kraus operators.
    """
    stacked = np.stack(ch.kraus_ops)  # (n_kraus, d_out, d_in)
    return KrausChannel(tuple(stacked[:, j, :] for j in range(ch.d_out)))


def max_action_deviation(a: KrausChannel, b: KrausChannel) -> float:
    """Largest entrywise difference of the two maps over all matrix units."""
    if (a.d_in, a.d_out) != (b.d_in, b.d_out):
        raise DimensionError("channels act between different spaces")
    worst = 0.0
    for i in range(a.d_in):
        for j in range(a.d_in):
            unit = np.zeros((a.d_in, a.d_in), dtype=complex)
            unit[i, j] = 1.0
            worst = max(worst, float(np.abs(a(unit) - b(unit)).max()))
    return worst


def controlled_assignment(
    ctrl: DensityOperator | None, ch_a: KrausChannel, ch_b: KrausChannel
) -> KrausChannel:
    """Parallel realisation of two qubit channels steered by a control qubit.

    With ``ctrl=None`` the returned channel acts on (control, slot1, slot2)
    with Kraus operators
    ``|0><0| (x) A_i (x) B_j + |1><1| (x) B_j (x) A_i``.

    With a control state given, the control is fed in as ``ctrl`` and
    discarded, leaving a channel on (slot1, slot2). The block-diagonal
    structure makes only the control populations matter: the result is
    ``p0 (A (x) B) + p1 (B (x) A)``.
    """
    for ch in (ch_a, ch_b):
        if ch.d_in != 2 or ch.d_out != 2:
            raise DimensionError("controlled assignment is defined for qubit channels")
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    if ctrl is None:
        ops = tuple(
            np.kron(p0, np.kron(a, b)) + np.kron(p1, np.kron(b, a))
            for a in ch_a.kraus_ops
            for b in ch_b.kraus_ops
        )
        return KrausChannel(ops)
    if ctrl.dim != 2:
        raise DimensionError("control must be a single qubit")
    w0, w1 = float(ctrl.matrix[0, 0].real), float(ctrl.matrix[1, 1].real)
    ops = []
    for a in ch_a.kraus_ops:
        for b in ch_b.kraus_ops:
            if w0 > 0:
                ops.append(np.sqrt(w0) * np.kron(a, b))
            if w1 > 0:
                ops.append(np.sqrt(w1) * np.kron(b, a))
    return KrausChannel(tuple(ops))


# -- measure-and-prepare ---------------------------------------------------

_ZERO, _ONE = ket("0"), ket("1")
_PLUS, _MINUS = (_ZERO + _ONE) / np.sqrt(2), (_ZERO - _ONE) / np.sqrt(2)


def z_basis_povm() -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Z-basis projectors and their eigenstates as re-preparations."""
    return [projector(_ZERO), projector(_ONE)], [projector(_ZERO), projector(_ONE)]


def x_basis_povm() -> tuple[list[np.ndarray], list[np.ndarray]]:
    return [projector(_PLUS), projector(_MINUS)], [projector(_PLUS), projector(_MINUS)]


def mixed_xz_povm() -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Equal-weight X/Z measurement as one four-outcome POVM with eigenstate re-preparation."""
    effects = [0.5 * projector(v) for v in (_PLUS, _MINUS, _ZERO, _ONE)]
    preps = [projector(v) for v in (_PLUS, _MINUS, _ZERO, _ONE)]
    return effects, preps


def _rank_one_factors(m: np.ndarray, cutoff: float = 1e-15) -> list[np.ndarray]:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return [np.sqrt(wk) * v[:, k] for k, wk in enumerate(w) if wk > cutoff]


def measure_prepare(effects: Sequence[np.ndarray], preps: Sequence) -> KrausChannel:
    """``rho -> sum_x Tr(E_x rho) sigma_x`` with unit-rank Kraus operators.

    Each effect and each preparation is split into rank-one pieces and every
    pair contributes ``|psi_n><e_m|``.
    """
    if len(effects) != len(preps):
        raise ValueError("need exactly one preparation per effect")
    effects = [np.asarray(e, dtype=complex) for e in effects]
    preps = [p.matrix if isinstance(p, DensityOperator) else np.asarray(p, dtype=complex) for p in preps]
    d_in, d_out = effects[0].shape[0], preps[0].shape[0]
    for e in effects:
        if not is_hermitian(e, 1e-12) or np.linalg.eigvalsh(e)[0] < -1e-12:
            raise ValueError("every effect must be positive semidefinite")
    if np.abs(sum(effects) - np.eye(d_in)).max() > 1e-12:
        raise ValueError("effects do not resolve the identity")
    ops = []
    for e, sigma in zip(effects, preps):
        for e_vec in _rank_one_factors(e):
            for p_vec in _rank_one_factors(sigma):
                ops.append(np.outer(p_vec, e_vec.conj()))
    if not ops:
        ops.append(np.zeros((d_out, d_in)))
    return KrausChannel(tuple(ops))


def conditional_state_preparation(
    pre: KrausChannel, effects: Sequence[np.ndarray], preps: Sequence, post: KrausChannel
) -> KrausChannel:
    """``pre``, then measure-and-prepare, then ``post``, as one channel."""
    return compose(compose(pre, measure_prepare(effects, preps)), post)


def degrading_map() -> KrausChannel:
    """Z measurement with eigenstate re-preparation on the local environment."""
    return measure_prepare(*z_basis_povm())


# -- remote simulation -----------------------------------------------------


def mixing_channel(p: float, d: KrausChannel) -> KrausChannel:
    """``p D + (1 - p) id`` as a Kraus channel."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return convex_mixture([p, 1.0 - p], [d, identity_channel(d.d_in)])


def remote_sim_mix(p: float, d: KrausChannel, e_state: DensityOperator) -> DensityOperator:
    """``p D(E) + (1 - p) E``: the degraded local environment."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    simulated = apply_to_matrix(d, e_state.matrix)
    return DensityOperator(p * simulated + (1.0 - p) * e_state.matrix, e_state.slots, e_state.tol)


@dataclass(frozen=True)
class RemoteSimulation:
    branch: str
    simulating_party: str
    source: str
    target: str
    probability: float
    output: DensityOperator


_BRANCHES = {
    "X": ("Bob", "E2", "B1"),
    "Z": ("Alice", "E1", "B2"),
}


def remote_simulation(
    branch: Literal["X", "Z"],
    e_state: DensityOperator,
    p: float = REMOTE_SUCCESS_PROBABILITY,
    d: KrausChannel | None = None,
) -> RemoteSimulation:
    """Which party simulates which remote output, selected by the outcome
    branch of Alice's mixed X/Z measurement, together with the mixed output."""
    try:
        party, source, target = _BRANCHES[branch]
    except KeyError:
        raise ValueError(f"branch must be 'X' or 'Z', got {branch!r}") from None
    out = remote_sim_mix(p, d or degrading_map(), e_state)
    return RemoteSimulation(branch, party, source, target, p, out.relabel((target,)) if out.n_qubits == 1 else out)


# -- anti-degradable qubit family -----------------------------------------


@dataclass(frozen=True)
class AntiDegradableParams:
    u: float
    v: float

    @property
    def lambda1(self) -> float:
        return float(np.cos(self.u))

    @property
    def lambda2(self) -> float:
        return float(np.cos(self.v))

    @property
    def lambda3(self) -> float:
        return self.lambda1 * self.lambda2

    @property
    def t3(self) -> float:
        return float(np.sin(self.u) * np.sin(self.v))

    @property
    def anti_degradable(self) -> bool:
        """Analytic flag ``sin u > cos v``."""
        return bool(np.sin(self.u) > np.cos(self.v))

    @property
    def alt_condition(self) -> bool:
        """The companion condition ``|sin v| >= |cos u|``, reported separately."""
        return bool(abs(np.sin(self.v)) >= abs(np.cos(self.u)))

    def expected_transfer_matrix(self) -> np.ndarray:
        t = np.diag([1.0, self.lambda1, self.lambda2, self.lambda3])
        t[3, 0] = self.t3
        return t

    def identity_residuals(self) -> dict[str, float]:
        """Residuals of the Choi-rank-two constraints (all zero on this family)."""
        l1, l2, l3, t3 = self.lambda1, self.lambda2, self.lambda3, self.t3
        return {
            "sum_square": abs((l1 + l2) ** 2 - ((1 + l3) ** 2 - t3**2)),
            "diff_square": abs((l1 - l2) ** 2 - ((1 - l3) ** 2 - t3**2)),
            "lambda3_product": abs(l3 - l1 * l2),
            "t3_square": abs(t3**2 - (1 - l1**2) * (1 - l2**2)),
        }


def anti_degradable_channel(p: AntiDegradableParams) -> KrausChannel:
    """Two-Kraus qubit channel with transfer matrix diag(1, cos u, cos v, cos u cos v)
    and translation sin u sin v along z.

    ``A+ = diag(cos((v-u)/2), cos((u+v)/2))`` and
    ``A- = [[0, sin((u+v)/2)], [sin((v-u)/2), 0]]``. At ``u = v = pi/2`` this
    is the reset channel onto |0>.
    """
    hu, hv = 0.5 * p.u, 0.5 * p.v
    a_plus = np.diag([np.cos(hv - hu), np.cos(hu + hv)])
    a_minus = np.array([[0.0, np.sin(hu + hv)], [np.sin(hv - hu), 0.0]])
    return KrausChannel((a_plus, a_minus))


def transfer_matrix(ch: KrausChannel) -> np.ndarray:
    """Affine Bloch action ``T[k, l] = Tr(sigma_k N(sigma_l)) / 2``; column 0 holds the translation."""
    if ch.d_in != 2 or ch.d_out != 2:
        raise DimensionError("transfer matrix is defined for qubit channels")
    return np.array([[0.5 * np.trace(sk @ ch(sl)).real for sl in PAULIS] for sk in PAULIS])


# -- flagged super-channels ------------------------------------------------


@dataclass(frozen=True, eq=False)
class SuperChannel:
    """``rho -> 1/2 branch0(rho) (x) |0><0|_flag + 1/2 branch1(rho) (x) |1><1|_flag``."""

    branch0: KrausChannel
    branch1: KrausChannel
    flag_slot: str = "F"

    def __post_init__(self):
        if (self.branch0.d_in, self.branch0.d_out) != (self.branch1.d_in, self.branch1.d_out):
            raise DimensionError("both branches must act between the same spaces")

    def as_channel(self) -> KrausChannel:
        """Kraus form with output ordered (system, flag)."""
        k0, k1 = ket("0")[:, None], ket("1")[:, None]
        ops = [np.sqrt(0.5) * np.kron(k, k0) for k in self.branch0.kraus_ops]
        ops += [np.sqrt(0.5) * np.kron(k, k1) for k in self.branch1.kraus_ops]
        return KrausChannel(tuple(ops))

    def trace_flag(self) -> KrausChannel:
        return convex_mixture([0.5, 0.5], [self.branch0, self.branch1])


def flag_controlled(d0: KrausChannel, d1: KrausChannel) -> KrausChannel:
    """Apply ``d0`` or ``d1`` to the system depending on the flag qubit (system, flag order)."""
    if (d0.d_in, d0.d_out) != (d1.d_in, d1.d_out):
        raise DimensionError("both maps must act between the same spaces")
    n = max(d0.d_env, d1.d_env)
    zero = np.zeros((d0.d_out, d0.d_in))
    k0 = list(d0.kraus_ops) + [zero] * (n - d0.d_env)
    k1 = list(d1.kraus_ops) + [zero] * (n - d1.d_env)
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    return KrausChannel(tuple(np.kron(a, p0) + np.kron(b, p1) for a, b in zip(k0, k1)))


def super_channel_compose(s_c: SuperChannel, d1: KrausChannel, d2: KrausChannel, flag_slot: str = "F") -> SuperChannel:
    """Follow each branch of ``s_c`` with its own degrading map."""
    return SuperChannel(compose(s_c.branch0, d1), compose(s_c.branch1, d2), flag_slot)
