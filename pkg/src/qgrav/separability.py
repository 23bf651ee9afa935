"""PPT analysis of single-slot cuts, and the bipartition audit of the
tripartite gravity-environment state."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gravity_states import bell_diagonal_marginal, gravity_tripartite
from .qmat import (
    EIG_TOL,
    DensityOperator,
    InvariantViolation,
    hermitian_eigenvalues,
    is_hermitian,
    partial_transpose,
)


class Verdict(str, Enum):
    PPT = "PPT"
    NPT = "NPT"


@dataclass(frozen=True)
class PptReport:
    cut: str
    min_eigenvalue: float
    negativity: float
    verdict: Verdict
    eigenvalues: tuple[float, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "cut": self.cut,
            "min_eigenvalue": self.min_eigenvalue,
            "negativity": self.negativity,
            "verdict": self.verdict.value,
            "eigenvalues": list(self.eigenvalues),
        }


@dataclass(frozen=True)
class PsdReport:
    min_eigenvalue: float
    psd: bool

    def to_dict(self) -> dict:
        return {"min_eigenvalue": self.min_eigenvalue, "psd": self.psd}


def ppt_check(rho: DensityOperator, slot: str, tol: float = EIG_TOL) -> PptReport:
    """Eigen-decompose the partial transpose on ``slot`` and classify the cut.

    Positivity of ``rho`` itself is not required, so the audit can run on
    matrices that fail to be states.
    """
    pt = partial_transpose(rho, slot)
    if not is_hermitian(pt, rho.tol) or abs(np.trace(pt) - 1.0) > max(rho.tol, 1e-12) * rho.dim:
        raise InvariantViolation("partial transpose broke Hermiticity or trace")
    lam = hermitian_eigenvalues(pt, rho.tol)
    negative = lam[lam < -tol]
    verdict = Verdict.NPT if negative.size else Verdict.PPT
    return PptReport(
        cut=slot,
        min_eigenvalue=float(lam[0]),
        negativity=float(-negative.sum()) if negative.size else 0.0,
        verdict=verdict,
        eigenvalues=tuple(float(x) for x in lam),
    )


def claimed_b2_transpose(omega: float) -> np.ndarray:
    """The B2-cut transpose in the form it is usually quoted for this family.

    That form keeps the tripartite diagonal but moves the coherence to the
    (1, 6) / (6, 1) positions. It is kept only so the audit can show that it
    is *not* the partial transpose of the tripartite matrix on any slot.
    """
    a = 0.5 - 0.5 * omega
    m = np.diag([omega, a, 0.0, a, 0.0, a, omega, a]).astype(complex)
    m[1, 6] = m[6, 1] = a
    return 0.5 * m


@dataclass(frozen=True)
class PartitionAudit:
    omega: float
    state_psd: PsdReport
    tripartite: dict[str, PptReport]
    marginal: dict[str, PptReport]
    discrepancies: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "state_psd": self.state_psd.to_dict(),
            "tripartite": {k: v.to_dict() for k, v in self.tripartite.items()},
            "marginal": {k: v.to_dict() for k, v in self.marginal.items()},
            "discrepancies": list(self.discrepancies),
        }


def full_partition_audit(omega: float, tol: float = EIG_TOL) -> PartitionAudit:
    """PPT reports for every single-slot cut of the tripartite state and of
    its (GE, E1) marginal, plus positivity of the tripartite matrix.

    The expected pattern for the family is GE-cut NPT with E1 and B2 cuts
    PPT. The computed spectra are reported as they are; wherever they differ
    from that pattern, a plain-text note is added to ``discrepancies``.
    """
    rho = gravity_tripartite(omega)
    marg = bell_diagonal_marginal(omega)
    lam = rho.min_eigenvalue
    psd = PsdReport(lam, lam >= -tol)
    tri = {s: ppt_check(rho, s, tol) for s in rho.slots}
    mar = {s: ppt_check(marg, s, tol) for s in marg.slots}

    notes = []
    if not psd.psd:
        notes.append(f"tripartite matrix is not positive (min eigenvalue {lam:.6g}); it is a state only for omega >= 1/3")
    if tri["GE"].verdict is not Verdict.NPT:
        notes.append("GE cut is PPT; the entanglement of GE with (E1, B2) is not witnessed here")
    for cut in ("E1", "B2"):
        if tri[cut].verdict is not Verdict.PPT:
            notes.append(f"{cut} cut is NPT (min eigenvalue {tri[cut].min_eigenvalue:.6g}); expected PPT")
    claimed = claimed_b2_transpose(omega)
    if not any(np.allclose(claimed, partial_transpose(rho, s), atol=1e-12) for s in rho.slots) and omega < 1.0:
        notes.append("quoted B2-cut transpose (coherence at (1,6)) is not the partial transpose of the tripartite matrix on any slot")
    for cut, rep in mar.items():
        if rep.verdict is not Verdict.PPT:
            notes.append(f"marginal {cut} cut is NPT; expected separable")
    return PartitionAudit(omega, psd, tri, mar, tuple(notes))
