"""Acceptance criteria, one test per criterion, each at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary.
"""

import json
import subprocess
import sys

import numpy as np

from qgrav.channels import (
    AntiDegradableParams,
    KrausChannel,
    SuperChannel,
    anti_degradable_channel,
    apply,
    complementary,
    compose,
    conditional_state_preparation,
    controlled_assignment,
    degrading_map,
    flag_controlled,
    identity_channel,
    max_action_deviation,
    measure_prepare,
    mixed_xz_povm,
    mixing_channel,
    super_channel_compose,
    transfer_matrix,
    x_basis_povm,
    z_basis_povm,
)
from qgrav.correlations import (
    classical_correlation_bruteforce,
    classical_correlation_closed,
    coherent_information,
    omega_sweep,
    mutual_information,
    quantum_discord,
)
from qgrav.gravity_states import (
    BellDiagonalParams,
    bell_diagonal_build,
    bell_diagonal_marginal,
    bell_diagonal_matrix,
    bell_eigenvalues,
    gravity_tripartite,
    omega_from_eigenvalues,
)
from qgrav.process_game import (
    build_ocb_process,
    causally_ordered_process,
    deterministic_strategy_bound,
    normalization_max_error,
    ocb_game_value,
    random_instrument_pairs,
)
from qgrav.qmat import DensityOperator, hermitian_eigenvalues, ket, partial_trace, partial_transpose, pure_state
from qgrav.rand import rand_bell_params, rand_density, rand_ket, rand_kraus
from qgrav.separability import full_partition_audit, ppt_check
from qgrav.sr_latch import (
    LatchConfig,
    circuit_unitary,
    latch_step,
    nor_gate_channel,
    phase_aligned_deviation,
    run_latch,
    toffoli_nor_decomposition,
    toffoli_nor_unitary,
)


def test_criterion_1_marginal_consistency():
    for w in (0.0, 0.1, 1 / 3, 0.5, 1.0):
        reduced = partial_trace(gravity_tripartite(w), ["B2"])
        assert np.abs(reduced.matrix - bell_diagonal_marginal(w).matrix).max() <= 1e-12


def test_criterion_2_marginal_spectrum():
    for w in np.linspace(0.0, 1.0, 100):
        rho = bell_diagonal_marginal(w)
        expected = np.sort([0.5, w / 2, (1 - w) / 4, (1 - w) / 4])
        assert np.abs(rho.eigenvalues - expected).max() <= 1e-12
        for s in rho.slots:
            assert np.abs(partial_trace(rho, [s]).matrix - np.eye(2) / 2).max() == 0


def test_criterion_3_entanglement_witness():
    for w in np.linspace(0.0, 1.0, 101)[:-1]:
        rep = ppt_check(gravity_tripartite(w), "GE")
        assert abs(rep.min_eigenvalue + (1 - w) / 4) <= 1e-10
    audit = full_partition_audit(1 / 3)
    # recorded, not asserted against the quoted forms
    assert {"E1", "B2"} <= set(audit.tripartite)
    assert len(audit.tripartite["E1"].eigenvalues) == 8 and len(audit.tripartite["B2"].eigenvalues) == 8
    assert audit.discrepancies


def test_criterion_4_bell_diagonal_algebra():
    for seed in range(100):
        p = rand_bell_params(seed, local=seed % 2 == 1)
        dense = hermitian_eigenvalues(bell_diagonal_matrix(p))
        assert np.abs(np.sort(bell_eigenvalues(p).as_array()) - dense).max() <= 1e-10
    for w in np.linspace(0.0, 1.0, 101):
        e = bell_eigenvalues(BellDiagonalParams.from_omega(w))
        assert abs(omega_from_eigenvalues(e) - w) <= 1e-12


def _h2(p):
    return -p * np.log2(p) - (1 - p) * np.log2(1 - p)


def test_criterion_5_correlation_values():
    rho = bell_diagonal_marginal(1 / 3)
    params = BellDiagonalParams.from_omega(1 / 3)
    lam = np.array([0.5, 1 / 6, 1 / 6, 1 / 6])
    i_oracle = 2.0 + float(np.sum(lam * np.log2(lam)))
    c_oracle = classical_correlation_bruteforce(rho)
    i_val = mutual_information(rho)
    c_val = classical_correlation_closed(params).value
    d_val = quantum_discord(rho, params)
    ic_val = coherent_information(rho)
    assert abs(i_val - i_oracle) <= 1e-5 and abs(i_val - 0.207519) <= 1e-5
    assert abs(c_val - c_oracle) <= 1e-5 and abs(c_val - 0.081704) <= 1e-5
    assert abs(d_val - (i_oracle - c_oracle)) <= 1e-5 and abs(d_val - 0.125815) <= 1e-5
    assert abs(abs(ic_val) - (1 - i_oracle)) <= 1e-5 and abs(abs(ic_val) - 0.792481) <= 1e-5
    assert abs(c_oracle - (1 - _h2(2 / 3))) <= 1e-5
    for row in omega_sweep(0.01, 1 / 3, 100):
        assert abs(row.discord + row.classical_corr - row.mutual_info) <= 1e-10
        assert abs(row.coherent_info - (row.mutual_info - 1)) <= 1e-10
    for seed in range(50):
        p = rand_bell_params(1000 + seed)
        brute = classical_correlation_bruteforce(bell_diagonal_build(p))
        assert abs(classical_correlation_closed(p).value - brute) <= 1e-6


def test_criterion_6_coherent_information_trend():
    rows = omega_sweep(0.01, 1 / 3, 100)
    values = [r.coherent_info_abs for r in rows]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_criterion_7_game_value():
    w = build_ocb_process()
    assert abs(ocb_game_value(w) - (2 + np.sqrt(2)) / 4) <= 1e-9
    assert abs(ocb_game_value(w) - 0.8535533906) <= 1e-9
    assert w.min_eigenvalue >= -1e-10
    assert abs(w.trace - 4) <= 1e-10
    assert normalization_max_error(w, random_instrument_pairs(50)) <= 1e-10
    assert deterministic_strategy_bound(causally_ordered_process()) <= 0.75 + 1e-9


def _constructed_channels():
    rng = np.random.default_rng(7)
    chans = [identity_channel(), degrading_map(), measure_prepare(*x_basis_povm()), measure_prepare(*mixed_xz_povm())]
    chans.append(conditional_state_preparation(identity_channel(), *z_basis_povm(), identity_channel()))
    chans.append(mixing_channel((2 + np.sqrt(2)) / 4, degrading_map()))
    for u, v in rng.uniform(-np.pi, np.pi, (5, 2)):
        ch = anti_degradable_channel(AntiDegradableParams(u, v))
        chans += [ch, complementary(ch)]
    a, b = KrausChannel(tuple(rand_kraus(2, seed=rng))), KrausChannel(tuple(rand_kraus(3, seed=rng)))
    chans.append(controlled_assignment(None, a, b))
    chans.append(controlled_assignment(DensityOperator(rand_density(2, seed=rng), ("C",)), a, b))
    chans.append(latch_step(None, nor_gate_channel(1), nor_gate_channel(0)))
    chans.append(SuperChannel(a, b).as_channel())
    chans.append(flag_controlled(a, b))
    return chans


def test_criterion_8_channel_identities():
    for ch in _constructed_channels():
        assert ch.completeness_error() <= 1e-12
    for u in np.linspace(-np.pi, np.pi, 20):
        for v in np.linspace(-np.pi, np.pi, 20):
            p = AntiDegradableParams(u, v)
            assert max(p.identity_residuals().values()) <= 1e-12
            assert np.abs(transfer_matrix(anti_degradable_channel(p)) - p.expected_transfer_matrix()).max() <= 1e-12
    n = measure_prepare(*z_basis_povm())
    s_c = SuperChannel(n, n)
    composed = super_channel_compose(s_c, degrading_map(), degrading_map())
    direct = SuperChannel(compose(n, degrading_map()), compose(n, degrading_map()))
    assert max_action_deviation(composed.as_channel(), direct.as_channel()) <= 1e-12
    assert max_action_deviation(composed.as_channel(), compose(s_c.as_channel(), flag_controlled(degrading_map(), degrading_map()))) <= 1e-12
    rng = np.random.default_rng(11)
    mp = [measure_prepare(*z_basis_povm()), measure_prepare(*x_basis_povm()), measure_prepare(*mixed_xz_povm())]
    for k in range(50):
        rho = pure_state(rand_ket(4, seed=rng), ("A", "B"))
        assert ppt_check(rho, "A").min_eigenvalue < -1e-6  # generic pure states are entangled
        out = apply(mp[k % 3], rho, slot="B")
        assert hermitian_eigenvalues(partial_transpose(out, "A"))[0] >= -1e-10


def test_criterion_9_latch():
    u = toffoli_nor_unitary()
    for (x, y), z in {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 0}.items():
        assert np.abs(u @ ket(f"{x}{y}0") - ket(f"{x}{y}{z}")).max() == 0
    assert phase_aligned_deviation(circuit_unitary(toffoli_nor_decomposition(), 3), u) <= 1e-10
    assert run_latch(LatchConfig("fixed0", (0, 0))).table_row == (0, 1, 0, 1, 0)
    assert run_latch(LatchConfig("fixed1", (0, 0))).table_row == (1, 0, 1, 0, 1)
    res = run_latch(LatchConfig("plus", (0, 0)))
    assert res.fidelity_bell >= 1 - 1e-10
    assert abs(res.marginal_entropy - 1) <= 1e-10
    assert abs(res.negativity - 0.5) <= 1e-10
    assert abs(ppt_check(res.joint_state, "Qb").negativity - 0.5) <= 1e-10


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "qgrav", *args], capture_output=True)


def test_criterion_10_cli_determinism():
    for args in (("sweep", "--steps", "20"), ("game",), ("channel", "--u", "0.4", "--v", "1.3"), ("latch", "--control", "plus")):
        a, b = _cli(*args), _cli(*args)
        assert a.returncode == 0 and a.stdout == b.stdout
    json.loads(_cli("ppt", "--omega", "0.25").stdout)
    for bad in (("state", "--omega", "1.5"), ("sweep", "--steps", "0"), ("latch", "--control", "x")):
        assert _cli(*bad).returncode == 2
