"""Acceptance suite: one test per exit criterion, each at its stated tolerance.

Every test prints a single pass line (visible with ``pytest -s`` or in the
captured output) after its assertions succeed.
"""

import math
import time

import numpy as np

from diracwalk.coins import CoinSpec, coin_matrix
from diracwalk.engine import (
    WalkOperatorSpec,
    apply_coin,
    dense_walk_matrix,
    evolve,
    step,
)
from diracwalk.lattice import (
    WEYL_DIRAC,
    WEYL_MAJORANA,
    InitialStateSpec,
    Lattice,
    WalkerState,
    build_state,
    change_basis,
    dirac_plane_wave,
    inner_product,
    majorana_plane_wave,
)
from diracwalk.momentum import (
    dispersion_omega,
    eigenphases,
    max_group_velocity,
    order_fit,
    walk_block,
)
from diracwalk.observables import alpha_shift, x_moment_form
from diracwalk.circuits import (
    compile_step,
    export_qasm,
    parse_qasm,
    simulate,
    verify,
)

PI = math.pi


def op_for(variant, theta, phi=PI / 2):
    coin = CoinSpec(theta, phi)
    if variant == "sqw":
        return WalkOperatorSpec("sqw", coin1=coin, coin2=coin)
    return WalkOperatorSpec(variant, coin=coin)


ALL_VARIANTS = ("sb", "bs", "bsb", "sbs", "sqw")
SINGLE_COIN_VARIANTS = ("sb", "bs", "bsb", "sbs")


def random_walker(lat, basis_phi, rng, real=False):
    amps = rng.normal(size=(2, lat.n_sites))
    if not real:
        amps = amps + 1j * rng.normal(size=(2, lat.n_sites))
    amps = amps / np.linalg.norm(amps)
    return WalkerState(amps.astype(complex), lat, basis_phi)


def test_criterion_01_plane_wave_stationarity():
    start = time.perf_counter()
    lat = Lattice(3)
    theta = PI / 8
    op = op_for("sb", theta)
    state = dirac_plane_wave(lat, +1)
    previous_phase = 0.0
    for t in range(1, 17):
        state = step(state, op)
        probs = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
        assert np.max(np.abs(probs - 1.0 / 8.0)) < 1e-10
        phase = float(np.angle(inner_product(dirac_plane_wave(lat, +1), state)))
        increment = (phase - previous_phase + PI) % (2 * PI) - PI
        assert abs(increment + theta / 2.0) < 1e-10
        previous_phase = phase
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\n[PASS] criterion 1: plane-wave stationarity, phase -theta/2 per step "
          f"({elapsed:.3f} s)")


def test_criterion_02_majorana_oscillation():
    start = time.perf_counter()
    lat = Lattice(3)
    delta, omega = PI / 4, PI / 16
    record = evolve(majorana_plane_wave(lat, delta), op_for("sb", PI / 8), 64,
                    observe=())
    worst = 0.0
    for t in range(65):
        worst = max(
            worst,
            abs(record.p_left[t] - math.cos(omega * t + delta) ** 2),
            abs(record.p_right[t] - math.sin(omega * t + delta) ** 2),
        )
    assert worst < 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\n[PASS] criterion 2: chirality oscillation, max error {worst:.2e} "
          f"({elapsed:.3f} s)")


def test_criterion_03_dispersion_and_group_velocity():
    start = time.perf_counter()
    worst_phase = 0.0
    for theta in (0.0, PI / 4, PI / 2, PI):
        for j in range(64):
            k = -PI + 2 * PI * (j + 1) / 64
            target = math.cos(theta / 2.0) * math.cos(k)
            for variant in SINGLE_COIN_VARIANTS:
                plus, minus = eigenphases(walk_block(op_for(variant, theta), k))
                worst_phase = max(
                    worst_phase,
                    abs(math.cos(plus) - target),
                    abs(math.cos(minus) - target),
                )
        assert abs(max_group_velocity(theta) - math.cos(theta / 2.0)) < 1e-6
    assert worst_phase < 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\n[PASS] criterion 3: dispersion relation, max deviation {worst_phase:.2e}; "
          f"group velocity cos(theta/2) ({elapsed:.3f} s)")


def test_criterion_04_splitting_order():
    start = time.perf_counter()
    eps = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002]
    slopes = {}
    for variant, expected in [("sb", 2.0), ("bs", 2.0), ("bsb", 3.0), ("sbs", 3.0)]:
        report = order_fit(variant, 1.0, 1.0, PI / 2, eps)
        slopes[variant] = report.fitted_slope
        assert abs(report.fitted_slope - expected) <= 0.1, (variant, report.fitted_slope)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    summary = ", ".join(f"{v}={s:.3f}" for v, s in slopes.items())
    print(f"\n[PASS] criterion 4: splitting order slopes {summary} ({elapsed:.3f} s)")


def test_criterion_05_basis_independence():
    start = time.perf_counter()
    lat = Lattice(6)
    rng = np.random.default_rng(20240)
    worst = 0.0
    for _ in range(20):
        state_wd = random_walker(lat, WEYL_DIRAC, rng)
        state_wm = change_basis(state_wd, PI / 2)
        for variant in ALL_VARIANTS:
            rec_wd = evolve(state_wd, op_for(variant, PI / 2, WEYL_DIRAC), 10, observe=())
            rec_wm = evolve(state_wm, op_for(variant, PI / 2, WEYL_MAJORANA), 10, observe=())
            worst = max(worst, float(np.max(np.abs(rec_wd.probabilities - rec_wm.probabilities))))
    assert worst < 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\n[PASS] criterion 5: basis independence, worst cell {worst:.2e} "
          f"({elapsed:.3f} s)")


def test_criterion_06_reality_transport():
    rng = np.random.default_rng(7)
    lat = Lattice(6)
    worst = 0.0
    for variant in ALL_VARIANTS:
        state = random_walker(lat, WEYL_MAJORANA, rng, real=True)
        op = op_for(variant, 0.9)
        for _ in range(100):
            state = step(state, op)
        worst = max(worst, float(np.max(np.abs(state.amplitudes.imag))))
    assert worst < 1e-12
    print(f"\n[PASS] criterion 6: real states stay real over 100 steps, "
          f"max imaginary part {worst:.2e}")


def test_criterion_07_coin_shift_order_equivalence():
    rng = np.random.default_rng(99)
    lat = Lattice(6)
    coin = CoinSpec(0.9, PI / 2)
    state0 = random_walker(lat, WEYL_MAJORANA, rng)
    bs_state = state0
    sb_state = apply_coin(state0, coin_matrix(CoinSpec(-0.9, PI / 2)))
    coin_mat = coin_matrix(coin)
    worst = 0.0
    for _ in range(30):
        bs_state = step(bs_state, WalkOperatorSpec("bs", coin=coin))
        sb_state = step(sb_state, WalkOperatorSpec("sb", coin=coin))
        p_bs = np.sum(np.abs(bs_state.amplitudes) ** 2, axis=0)
        p_sb = np.sum(np.abs(apply_coin(sb_state, coin_mat).amplitudes) ** 2, axis=0)
        worst = max(worst, float(np.max(np.abs(p_bs - p_sb))))
    assert worst < 1e-12
    print(f"\n[PASS] criterion 7: shift-then-coin matches coin-then-shift with the "
          f"pre-rotated start, worst cell {worst:.2e}")


def test_criterion_08_split_step_degeneracies():
    worst = 0.0
    for k in (1, 2, 3):
        lat = Lattice(k)
        coin = CoinSpec(1.1, PI / 2)
        identity = CoinSpec(0.0, PI / 2)
        dca = dense_walk_matrix(WalkOperatorSpec("sqw", coin1=identity, coin2=coin), lat)
        sbs = dense_walk_matrix(WalkOperatorSpec("sbs", coin=coin), lat)
        worst = max(worst, float(np.max(np.abs(dca - sbs))))
        plain = dense_walk_matrix(WalkOperatorSpec("sqw", coin1=coin, coin2=identity), lat)
        sb = dense_walk_matrix(WalkOperatorSpec("sb", coin=coin), lat)
        worst = max(worst, float(np.max(np.abs(plain - sb))))
    assert worst < 1e-12
    print(f"\n[PASS] criterion 8: split-step degenerations to sbs and sb, "
          f"max entry deviation {worst:.2e}")


def test_criterion_09_self_conjugate_vs_eigenstate_distributions():
    lat = Lattice(6)
    worst = 0.0
    for theta in (PI / 2, PI):
        op = op_for("sbs", theta)
        majorana = build_state(InitialStateSpec(PI / 2, 0.0), lat, WEYL_MAJORANA)
        dirac = build_state(InitialStateSpec(PI / 2, PI / 2), lat, WEYL_MAJORANA)
        rec_m = evolve(majorana, op, 20, observe=())
        rec_d = evolve(dirac, op, 20, observe=())
        worst = max(worst, float(np.max(np.abs(rec_m.probabilities - rec_d.probabilities))))
    assert worst < 1e-12

    op = op_for("sb", PI)
    state = build_state(InitialStateSpec(PI / 2, 0.0), lat, WEYL_MAJORANA)
    revived = step(step(state, op), op)
    assert abs(abs(inner_product(state, revived)) - 1.0) < 1e-12
    record = evolve(state, op, 8, observe=())
    outside = np.delete(record.probabilities, [lat.n_sites - 1, 0, 1], axis=1)
    assert np.max(outside) == 0.0
    print(f"\n[PASS] criterion 9: symmetric-split distributions coincide "
          f"(worst {worst:.2e}); maximum-mass walk confined with period-2 revival")


def test_criterion_10_shift_angle():
    lat_small = Lattice(3)
    for theta in np.linspace(0.05, PI - 0.05, 15):
        assert abs(alpha_shift(op_for("sb", theta), 1, lat_small) - theta) < 1e-10
        assert abs(alpha_shift(op_for("bsb", theta), 1, lat_small) - theta / 2.0) < 1e-10
        assert abs(alpha_shift(op_for("sbs", theta), 1, lat_small)) < 1e-10

    lat = Lattice(4)
    for theta in (PI / 8, PI / 4, PI / 2):
        a_sb = alpha_shift(op_for("sb", theta), 7, lat)
        a_bsb = alpha_shift(op_for("bsb", theta), 7, lat)
        a_sbs = alpha_shift(op_for("sbs", theta), 7, lat)
        assert a_sbs < 1e-6, f"symmetric-split shift angle {a_sbs} at theta={theta}"
        assert a_bsb < a_sb

    worst_by = 0.0
    for variant in SINGLE_COIN_VARIANTS:
        sweep = x_moment_form(op_for(variant, PI / 2), 7, lat)
        worst_by = max(worst_by, abs(sweep.by))
    assert worst_by < 1e-12
    print(f"\n[PASS] criterion 10: shift angle closed forms at T=1, second order "
          f"reduces it (zero for the split-shift form); |b_y| <= {worst_by:.2e}")


def test_criterion_11_entanglement():
    start = time.perf_counter()
    lat = Lattice(8)
    lo, hi = 10, 100
    stats = {}
    for variant in ("sb", "bsb", "sbs"):
        op = op_for(variant, PI / 2)
        for phi0 in (0.0, PI / 4, PI / 2):
            state = build_state(InitialStateSpec(PI / 2, phi0), lat, WEYL_MAJORANA)
            record = evolve(state, op, 100, observe=("entropy",))
            series = record.entropy_bits
            assert series[0] < 1e-12
            assert np.all(series >= -1e-12) and np.all(series <= 1.0 + 1e-12)
            window = series[lo : hi + 1]
            stats[(variant, phi0)] = (float(np.mean(window)), float(np.var(window)))
    assert stats[("bsb", 0.0)][1] < stats[("sb", 0.0)][1]
    assert stats[("sbs", 0.0)][1] < stats[("sb", 0.0)][1]
    for variant in ("bsb", "sbs"):
        assert stats[(variant, 0.0)][0] > stats[(variant, PI / 2)][0]
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"\n[PASS] criterion 11: entropy bounded, second order damps fluctuations "
          f"and strengthens the self-conjugate state's entanglement ({elapsed:.3f} s)")


def test_criterion_12_circuit_equivalence():
    worst_dense = 0.0
    worst_roundtrip = 0.0
    rng = np.random.default_rng(5)
    for k in (1, 2, 3):
        lat = Lattice(k)
        dim = 2 << k
        for variant in ALL_VARIANTS:
            for theta, phi in [(PI / 2, PI / 2), (1.234, 0.8)]:
                op = op_for(variant, theta, phi)
                program = compile_step(op, k)
                worst_dense = max(
                    worst_dense, verify(program, dense_walk_matrix(op, lat))
                )
                parsed = parse_qasm(export_qasm(program))
                vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
                vec /= np.linalg.norm(vec)
                direct = simulate(program, vec)
                padded = np.zeros(1 << parsed.n_qubits, dtype=complex)
                padded[:dim] = vec
                via = simulate(parsed, padded)
                worst_roundtrip = max(
                    worst_roundtrip,
                    float(np.max(np.abs(via[:dim] - direct))),
                    float(np.max(np.abs(via[dim:]))) if via.size > dim else 0.0,
                )
    assert worst_dense < 1e-10
    assert worst_roundtrip < 1e-10

    coin = CoinSpec(1.0, 0.5)
    plain = compile_step(WalkOperatorSpec("sb", coin=coin), 3)
    symmetric = compile_step(WalkOperatorSpec("bsb", coin=coin), 3)
    assert plain.metadata["shift_blocks"] == symmetric.metadata["shift_blocks"]
    assert sum(1 for g in plain.gates if g.kind == "mcx") == sum(
        1 for g in symmetric.gates if g.kind == "mcx"
    )
    print(f"\n[PASS] criterion 12: compiled steps match the dense oracle "
          f"({worst_dense:.2e}), QASM round trip agrees ({worst_roundtrip:.2e}), "
          f"no extra shift blocks for the symmetric coin")
