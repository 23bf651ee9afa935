"""``qgrav`` command-line front end.

Exit codes: 0 on success, 2 on invalid flags, 1 when an internal numerical
identity fails. JSON is written with sorted keys; CSV numbers use 12
significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import channels, correlations, gravity_states, process_game, separability, sr_latch
from .qmat import InvariantViolation, default_tol

SWEEP_COLUMNS = ("omega", "mutual_info", "classical_corr", "discord", "coherent_info", "coherent_info_abs")
GAME_SEED = 2024
GAME_PAIRS = 50


def _matrix_record(m: np.ndarray) -> dict:
    m = np.asarray(m)
    return {"real": m.real.tolist(), "imag": m.imag.tolist()}


def _state_record(rho) -> dict:
    v = rho.validity()
    return {
        "slots": list(rho.slots),
        "matrix": _matrix_record(rho.matrix),
        "eigenvalues": [float(x) for x in rho.eigenvalues],
        "min_eigenvalue": v.min_eigenvalue,
        "hermitian": v.hermitian,
        "unit_trace": v.unit_trace,
        "psd": v.psd,
    }


def cmd_state(args) -> dict:
    return {
        "omega": args.omega,
        "in_regime": gravity_states.GravityStateParams(args.omega).in_regime,
        "tripartite": _state_record(gravity_states.gravity_tripartite(args.omega)),
        "marginal": _state_record(gravity_states.bell_diagonal_marginal(args.omega)),
    }


def cmd_ppt(args) -> dict:
    return separability.full_partition_audit(args.omega).to_dict()


def cmd_sweep(args) -> str:
    rows = correlations.omega_sweep(args.omega_min, args.omega_max, args.steps)
    for r in rows:
        if abs(r.discord + r.classical_corr - r.mutual_info) > 1e-10:
            raise InvariantViolation(f"D + C != I at omega={r.omega}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([format(getattr(r, c), ".12g") for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_game(args) -> dict:
    w = process_game.build_ocb_process()
    pairs = process_game.random_instrument_pairs(GAME_PAIRS, seed=GAME_SEED)
    return {
        "game_value": process_game.ocb_game_value(w),
        "psd_min_eigenvalue": w.min_eigenvalue,
        "trace": w.trace,
        "normalization_max_error": process_game.normalization_max_error(w, pairs),
    }


def cmd_channel(args) -> dict:
    p = channels.AntiDegradableParams(args.u, args.v)
    ch = channels.anti_degradable_channel(p)
    t = channels.transfer_matrix(ch)
    residuals = p.identity_residuals()
    ok = bool(np.abs(t - p.expected_transfer_matrix()).max() <= args.tol and max(residuals.values()) <= args.tol)
    return {
        "transfer_matrix": t.tolist(),
        "lambda": [p.lambda1, p.lambda2, p.lambda3],
        "t3": p.t3,
        "anti_degradable": p.anti_degradable,
        "identities_ok": ok,
    }


def cmd_latch(args) -> dict:
    control = {"0": "fixed0", "1": "fixed1", "plus": "plus"}[args.control]
    res = sr_latch.run_latch(sr_latch.LatchConfig(control, tuple(int(b) for b in args.inputs), args.kappa))
    return res.to_dict()


def _unit_interval(name):
    def parse(text):
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not 0.0 <= x <= 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in [0, 1], got {text}")
        return x

    return parse


def _finite(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return x


def _bits(text):
    if len(text) != 2 or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"inputs must be two bits such as 00, got {text!r}")
    return text


def _positive_tol(text):
    x = _finite(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgrav", description="Gravity-environment state, channel and latch analyses.")
    parser.add_argument("--tol", type=_positive_tol, default=None, help="identity tolerance (default: QGRAV_TOL or 1e-12)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="tripartite state and its two-qubit marginal")
    p.add_argument("--omega", type=_unit_interval("omega"), required=True)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("ppt", help="partial-transpose audit of every cut")
    p.add_argument("--omega", type=_unit_interval("omega"), required=True)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("sweep", help="correlation sweep as CSV")
    p.add_argument("--omega-min", type=_finite, default=0.01)
    p.add_argument("--omega-max", type=_finite, default=1.0 / 3.0)
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("game", help="causal game value of the two-party process")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("channel", help="anti-degradable qubit channel report")
    p.add_argument("--u", type=_finite, required=True)
    p.add_argument("--v", type=_finite, required=True)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("latch", help="SR latch simulation")
    p.add_argument("--control", choices=("0", "1", "plus"), required=True)
    p.add_argument("--inputs", type=_bits, default="00")
    p.add_argument("--kappa", type=_unit_interval("kappa"), default=1.0 / 3.0)
    p.set_defaults(func=cmd_latch)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        if args.steps < 2:
            parser.error("--steps must be at least 2")
        if not 0.0 < args.omega_min < args.omega_max <= 1.0 / 3.0 + 1e-12:
            parser.error("need 0 < --omega-min < --omega-max <= 1/3")
    saved = os.environ.get("QGRAV_TOL")
    if args.tol is None:
        try:
            args.tol = default_tol()
        except ValueError as exc:
            parser.error(str(exc))
    else:
        os.environ["QGRAV_TOL"] = repr(args.tol)

    try:
        out = args.func(args)
    except InvariantViolation as exc:
        print(f"qgrav: internal invariant violated: {exc}", file=sys.stderr)
        return 1
    finally:
        if saved is None:
            os.environ.pop("QGRAV_TOL", None)
        else:
            os.environ["QGRAV_TOL"] = saved
    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
