"""Toffoli-NOR gate, its elementary decomposition, and the SR latch built
from two cross-coupled copies of it.

The latch is simulated as a reversible circuit on eleven qubits::

    C  S  R  A1 A2  Q1 Qb1  Q2 Qb2  Qo Qbo

``S = NOT C`` and ``R = C`` set the command lines. Two unrolled passes of
the cross-coupled NOR pair settle the outputs, which are copied into
``(Qo, Qbo)``; the work registers are then uncomputed and the control is
absorbed into the output by ``CNOT(Qbo -> C)``. With a coherent control
this leaves ``(Qo, Qbo)`` in a pure entangled state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .channels import KrausChannel, apply, controlled_assignment
from .gravity_states import OMEGA_REGIME_MAX, gravity_tripartite
from .qmat import (
    DensityOperator,
    DimensionError,
    X,
    fidelity_pure,
    ket,
    partial_trace,
    pure_state,
    von_neumann_entropy,
)
from .separability import ppt_check

SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
SQRT_X_DAG = SQRT_X.conj().T
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

LATCH_REGISTERS = ("C", "S", "R", "A1", "A2", "Q1", "Qb1", "Q2", "Qb2", "Qo", "Qbo")
OUTPUT_SLOTS = ("Q", "Qb")
BELL_OUTPUT = (ket("10") + ket("01")) / np.sqrt(2.0)

Control = Literal["fixed0", "fixed1", "plus"]


def toffoli_nor_unitary() -> np.ndarray:
    """``|x, y, z> -> |x, y, z XOR (NOT x AND NOT y)>``: swaps |000> and |001>."""
    u = np.eye(8, dtype=complex)
    u[[0, 1]] = u[[1, 0]]
    return u


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]  # controls first, target last
    matrix: np.ndarray = field(repr=False, compare=False)


def _controlled(u: np.ndarray) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u
    return out


def toffoli_nor_decomposition() -> list[Gate]:
    """NOT on both controls around the standard five-gate Toffoli, on qubits (x=0, y=1, z=2)."""
    cv, cvd = _controlled(SQRT_X), _controlled(SQRT_X_DAG)
    return [
        Gate("NOT", (0,), X),
        Gate("NOT", (1,), X),
        Gate("CSX", (1, 2), cv),
        Gate("CNOT", (0, 1), CNOT),
        Gate("CSXdg", (1, 2), cvd),
        Gate("CNOT", (0, 1), CNOT),
        Gate("CSX", (0, 2), cv),
        Gate("NOT", (0,), X),
        Gate("NOT", (1,), X),
    ]


def _apply_gate(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """Apply ``u`` to the listed qubits of a state tensor of shape (2,)*n."""
    k = len(qubits)
    t = np.tensordot(u.reshape((2,) * (2 * k)), psi, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(t, list(range(k)), list(qubits))


def circuit_unitary(gates: list[Gate], n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    cols = []
    for i in range(d):
        psi = np.zeros(d, dtype=complex)
        psi[i] = 1.0
        t = psi.reshape((2,) * n_qubits)
        for g in gates:
            t = _apply_gate(t, g.matrix, g.qubits)
        cols.append(t.reshape(d))
    return np.stack(cols, axis=1)


def phase_aligned_deviation(u: np.ndarray, v: np.ndarray) -> float:
    """Max entrywise gap between ``u`` and ``v`` after removing a global phase."""
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(u - phase * v).max())


def nor_gate_channel(line: int) -> KrausChannel:
    """Input-to-output channel of a Toffoli-NOR with one control fixed to ``line``.

    The free control ``y`` is traced out after the gate, so the map sends
    ``y`` to ``NOR(line, y)``: a measure-and-flip for ``line = 0`` and a
    reset to |0> for ``line = 1``.
    """
    if line not in (0, 1):
        raise ValueError("line must be 0 or 1")
    u = toffoli_nor_unitary()
    ops = []
    for y_out in (0, 1):
        k = np.zeros((2, 2), dtype=complex)
        for y_in in (0, 1):
            col = u @ ket(f"{line}{y_in}0")
            k[:, y_in] = col.reshape(2, 2, 2)[line, y_out, :]
        ops.append(k)
    return KrausChannel(tuple(ops))


def latch_step(control: DensityOperator | None, map_s: KrausChannel, map_r: KrausChannel) -> KrausChannel:
    """Controlled assignment with ``map_r`` on slot 1 and ``map_s`` on slot 2 when the
    control reads 0, and the two swapped when it reads 1."""
    for ch in (map_s, map_r):
        if (ch.d_in, ch.d_out) != (2, 2):
            raise DimensionError("latch maps must be qubit channels")
    return controlled_assignment(control, map_r, map_s)


@dataclass(frozen=True)
class LatchConfig:
    control: Control
    inputs: tuple[int, int] = (0, 0)
    kappa: float = OMEGA_REGIME_MAX

    def __post_init__(self):
        if self.control not in ("fixed0", "fixed1", "plus"):
            raise ValueError(f"control must be fixed0, fixed1 or plus, got {self.control!r}")
        inputs = tuple(int(b) for b in self.inputs)
        if len(inputs) != 2 or any(b not in (0, 1) for b in inputs):
            raise ValueError(f"inputs must be two bits, got {self.inputs!r}")
        object.__setattr__(self, "inputs", inputs)
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa!r}")


@dataclass(frozen=True, eq=False)
class LatchResult:
    joint_state: DensityOperator
    fidelity_bell: float
    table_row: tuple[int, int, int, int, int] | None
    negativity: float
    marginal_entropy: float
    decohered_state: DensityOperator
    resource_state: DensityOperator = field(repr=False)
    kappa_in_regime: bool = True

    def to_dict(self) -> dict:
        out = {
            "fidelity_bell": self.fidelity_bell,
            "negativity": self.negativity,
            "marginal_entropy": self.marginal_entropy,
            "kappa_in_regime": self.kappa_in_regime,
        }
        if self.table_row is not None:
            out["table_row"] = dict(zip(("C", "S", "R", "Q", "Qb"), self.table_row))
        m = self.joint_state.matrix
        out["joint_state"] = {"real": m.real.tolist(), "imag": m.imag.tolist()}
        return out


_R = {name: i for i, name in enumerate(LATCH_REGISTERS)}
_NOR = toffoli_nor_unitary()


def _compute_gates() -> list[tuple[np.ndarray, tuple[int, ...]]]:
    r = _R
    return [
        (CNOT, (r["C"], r["S"])),
        (X, (r["S"],)),
        (CNOT, (r["C"], r["R"])),
        # first pass, feedback lines still hold the inputs
        (_NOR, (r["R"], r["A2"], r["Q1"])),
        (_NOR, (r["S"], r["A1"], r["Qb1"])),
        # second pass, cross-coupled
        (_NOR, (r["R"], r["Qb1"], r["Q2"])),
        (_NOR, (r["S"], r["Q1"], r["Qb2"])),
    ]


def _run(psi: np.ndarray, gates) -> np.ndarray:
    for u, qs in gates:
        psi = _apply_gate(psi, u, qs)
    return psi


def _initial(control: np.ndarray, inputs: tuple[int, int]) -> np.ndarray:
    rest = np.zeros(2 ** (len(LATCH_REGISTERS) - 1), dtype=complex)
    bits = "00" + f"{inputs[0]}{inputs[1]}" + "0" * 6
    rest[int(bits, 2)] = 1.0
    return np.kron(control, rest).reshape((2,) * len(LATCH_REGISTERS))


def _classical_readout(psi: np.ndarray) -> dict[str, int]:
    flat = psi.reshape(-1)
    idx = int(np.argmax(np.abs(flat)))
    if abs(abs(flat[idx]) - 1.0) > 1e-12:
        raise ValueError("register is not in a computational basis state")
    bits = format(idx, f"0{len(LATCH_REGISTERS)}b")
    return {name: int(b) for name, b in zip(LATCH_REGISTERS, bits)}


def run_latch(cfg: LatchConfig) -> LatchResult:
    c = {"fixed0": ket("0"), "fixed1": ket("1"), "plus": (ket("0") + ket("1")) / np.sqrt(2.0)}[cfg.control]
    compute = _compute_gates()
    psi = _run(_initial(c, cfg.inputs), compute)

    table_row = None
    if cfg.control != "plus":
        reg = _classical_readout(psi)
        table_row = (reg["C"], reg["S"], reg["R"], reg["Q2"], reg["Qb2"])

    psi = _apply_gate(psi, CNOT, (_R["Q2"], _R["Qo"]))
    psi = _apply_gate(psi, CNOT, (_R["Qb2"], _R["Qbo"]))
    psi = _run(psi, [(u.conj().T, qs) for u, qs in reversed(compute)])
    psi = _apply_gate(psi, CNOT, (_R["Qbo"], _R["C"]))

    # everything but the copies is now back in a product basis state
    t = np.moveaxis(psi, [_R["Qo"], _R["Qbo"]], [0, 1]).reshape(4, -1)
    rho = t @ t.conj().T
    joint = DensityOperator(0.5 * (rho + rho.conj().T), OUTPUT_SLOTS)

    ctrl_dm = DensityOperator(np.outer(c, c.conj()), ("C",))
    step = latch_step(ctrl_dm, nor_gate_channel(1), nor_gate_channel(0))
    a_in = pure_state(ket(f"{cfg.inputs[0]}{cfg.inputs[1]}"), OUTPUT_SLOTS)
    decohered = apply(step, a_in, out_slots=OUTPUT_SLOTS)

    resource = gravity_tripartite(cfg.kappa).relabel(("GE", "R", "S"))
    return LatchResult(
        joint_state=joint,
        fidelity_bell=fidelity_pure(joint, BELL_OUTPUT),
        table_row=table_row,
        negativity=ppt_check(joint, "Q").negativity,
        marginal_entropy=von_neumann_entropy(partial_trace(joint, ["Qb"])),
        decohered_state=decohered,
        resource_state=resource,
        kappa_in_regime=cfg.kappa <= OMEGA_REGIME_MAX + 1e-15,
    )


def schmidt_rank(psi: np.ndarray, tol: float = 1e-10) -> int:
    s = np.linalg.svd(np.asarray(psi).reshape(2, 2), compute_uv=False)
    return int((s > tol).sum())

