"""Tests for gate compilation, statevector simulation and QASM round trips."""

import math

import numpy as np
import pytest

from diracwalk.coins import CoinSpec
from diracwalk.engine import WalkOperatorSpec, dense_walk_matrix, evolve, step
from diracwalk.lattice import (
    WEYL_MAJORANA,
    InitialStateSpec,
    Lattice,
    WalkerState,
    build_state,
    dirac_plane_wave,
    inner_product,
)
from diracwalk.circuits import (
    Gate,
    GateProgram,
    compile_decrement,
    compile_increment,
    compile_state_prep,
    compile_step,
    compile_walk_circuit,
    export_qasm,
    gate_count_report,
    grid_to_statevector,
    parse_qasm,
    simulate,
    statevector_to_grid,
    verify,
)

PI = math.pi


def position_basis_vector(k, u, coin=0):
    vec = np.zeros(2 << k, dtype=complex)
    vec[2 * u + coin] = 1.0
    return vec


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("rx", target=0)  # missing angle
    with pytest.raises(ValueError):
        Gate("x", target=0, angle=0.5)
    with pytest.raises(ValueError):
        Gate("mcx", target=0)  # no controls
    with pytest.raises(ValueError):
        Gate("mcx", target=1, controls=(1,), polarities=(1,))  # overlap
    with pytest.raises(ValueError):
        GateProgram(2, [Gate("x", target=5)])


def test_increment_truth_table():
    for k in (1, 2, 3, 4):
        inc = compile_increment(k)
        dec = compile_decrement(k)
        n = 1 << k
        for u in range(n):
            out = simulate(inc, position_basis_vector(k, u))
            assert abs(out[2 * ((u + 1) % n)] - 1.0) < 1e-14
            back = simulate(dec, out)
            assert abs(back[2 * u] - 1.0) < 1e-14


def test_increment_gate_count_and_shapes():
    program = compile_increment(3)
    assert len(program.gates) == 3
    widths = sorted(len(g.controls) for g in program.gates)
    assert widths == [0, 1, 2]
    assert all(len(compile_increment(k).gates) == k for k in (1, 2, 4))


def test_compiled_steps_match_dense_oracle():
    for k in (1, 2, 3):
        lat = Lattice(k)
        for theta in (0.0, PI / 2, 1.234):
            for phi in (0.0, PI / 2, 0.8):
                for variant in ("sb", "bs", "bsb", "sbs"):
                    op = WalkOperatorSpec(variant, coin=CoinSpec(theta, phi))
                    deviation = verify(compile_step(op, k), dense_walk_matrix(op, lat))
                    assert deviation < 1e-10, (variant, k, theta, phi)
                op = WalkOperatorSpec(
                    "sqw", coin1=CoinSpec(theta, phi), coin2=CoinSpec(1.1, phi)
                )
                deviation = verify(compile_step(op, k), dense_walk_matrix(op, lat))
                assert deviation < 1e-10


def test_symmetric_step_costs_no_extra_shift_blocks():
    coin = CoinSpec(1.0, 0.5)
    plain = compile_step(WalkOperatorSpec("sb", coin=coin), 3)
    symmetric = compile_step(WalkOperatorSpec("bsb", coin=coin), 3)
    assert plain.metadata["shift_blocks"] == symmetric.metadata["shift_blocks"]
    count = lambda prog: sum(1 for g in prog.gates if g.kind == "mcx")
    assert count(plain) == count(symmetric)
    assert symmetric.metadata["coin_blocks"] == plain.metadata["coin_blocks"] + 1


def test_massless_step_compiles_to_shift_only():
    program = compile_step(WalkOperatorSpec("sb", coin=CoinSpec(0.0, PI / 2)), 3)
    assert all(gate.kind == "mcx" for gate in program.gates)
    assert program.metadata["coin_blocks"] == 0


def test_state_prep():
    prep = compile_state_prep(PI / 2, 0.0, "point", 2)
    out = simulate(prep)
    expected = np.zeros(8, dtype=complex)
    expected[0] = expected[1] = 1 / math.sqrt(2)
    assert np.max(np.abs(out - expected)) < 1e-12

    prep = compile_state_prep(0.0, 0.0, "uniform", 2)
    out = statevector_to_grid(simulate(prep))
    assert np.max(np.abs(out[0] - 0.5)) < 1e-12
    assert np.max(np.abs(out[1])) < 1e-15

    with pytest.raises(ValueError):
        compile_state_prep(0.0, 0.0, "gaussian", 2)


def test_state_prep_matches_constructors_up_to_phase():
    lat = Lattice(3)
    for theta0, phi0 in [(PI / 2, 0.0), (PI / 2, PI / 2), (0.8, -0.4)]:
        prep = compile_state_prep(theta0, phi0, "point", 3)
        grid = statevector_to_grid(simulate(prep))
        circuit_state = WalkerState(grid, lat, WEYL_MAJORANA)
        direct = build_state(InitialStateSpec(theta0, phi0), lat, WEYL_MAJORANA)
        assert abs(abs(inner_product(circuit_state, direct)) - 1.0) < 1e-10

    prep = compile_state_prep(PI / 2, PI / 2, "uniform", 3)
    grid = statevector_to_grid(simulate(prep))
    circuit_state = WalkerState(grid, lat, WEYL_MAJORANA)
    plane = dirac_plane_wave(lat, +1)
    assert abs(abs(inner_product(circuit_state, plane)) - 1.0) < 1e-10


def test_simulate_basics():
    empty = GateProgram(3, [])
    vec = np.zeros(8, dtype=complex)
    vec[5] = 1.0
    assert np.array_equal(simulate(empty, vec), vec)

    flip = GateProgram(2, [Gate("x", target=0)])
    out = simulate(flip)
    assert abs(out[1] - 1.0) < 1e-15

    with pytest.raises(ValueError):
        simulate(GateProgram(21, []))
    with pytest.raises(ValueError):
        simulate(empty, np.zeros(4))


def test_seven_steps_match_engine_spacetime():
    lat = Lattice(4)
    op = WalkOperatorSpec("sb", coin=CoinSpec(PI / 2, PI / 2))
    state = build_state(InitialStateSpec(PI / 2, 0.0), lat, WEYL_MAJORANA)
    record = evolve(state, op, 7, observe=())
    program_state = grid_to_statevector(state.amplitudes)
    one_step = compile_step(op, 4)
    for t in range(1, 8):
        program_state = simulate(one_step, program_state)
        cells = np.sum(np.abs(statevector_to_grid(program_state)) ** 2, axis=0)
        assert np.max(np.abs(cells - record.probabilities[t])) < 1e-10


def test_export_qasm_text():
    program = GateProgram(2, [Gate("x", target=0)])
    text = export_qasm(program)
    assert 'OPENQASM 2.0;' in text
    assert 'include "qelib1.inc";' in text
    assert "x q[0];" in text

    controlled = GateProgram(
        2, [Gate("mcx", target=1, controls=(0,), polarities=(0,))]
    )
    lines = [l for l in export_qasm(controlled).splitlines() if not l.startswith("//")]
    body = lines[3:]
    assert body == ["x q[0];", "cx q[0],q[1];", "x q[0];"]


def test_qasm_roundtrip_with_work_qubits():
    op = WalkOperatorSpec("bsb", coin=CoinSpec(1.1, 0.7))
    prep = compile_state_prep(0.9, 0.3, "uniform", 4)
    program = compile_walk_circuit(op, 4, 3, prep)
    parsed = parse_qasm(export_qasm(program))
    assert parsed.n_qubits > program.n_qubits  # ancillas appended
    direct = simulate(program)
    via = simulate(parsed)
    head, tail = via[: direct.size], via[direct.size :]
    assert np.max(np.abs(tail)) < 1e-12  # work qubits returned to |0>
    assert np.max(np.abs(head - direct)) < 1e-10


def test_parse_rejects_unknown_lines():
    with pytest.raises(ValueError):
        parse_qasm('OPENQASM 2.0;\nqreg q[2];\nswap q[0],q[1];')
    with pytest.raises(ValueError, match="qreg"):
        parse_qasm("x q[0];")


def test_verify_shift_only_and_detector_sanity():
    k = 3
    lat = Lattice(k)
    op = WalkOperatorSpec("sb", coin=CoinSpec(0.0, 0.0))
    assert verify(compile_step(op, k), dense_walk_matrix(op, lat)) < 1e-12

    full = WalkOperatorSpec("sb", coin=CoinSpec(PI / 2, PI / 2))
    assert verify(compile_step(full, k), dense_walk_matrix(full, lat)) < 1e-10

    corrupted = WalkOperatorSpec("sb", coin=CoinSpec(PI / 2 + 0.01, PI / 2))
    deviation = verify(compile_step(corrupted, k), dense_walk_matrix(full, lat))
    assert deviation > 1e-3

    with pytest.raises(ValueError, match="reference"):
        verify(compile_step(full, k), np.eye(4))


def test_gate_count_report():
    op = WalkOperatorSpec("sb", coin=CoinSpec(PI / 2, PI / 2))
    program = compile_walk_circuit(op, 4, 7)
    report = gate_count_report(program)
    assert report["logical_gates"] == len(program.gates)
    assert report["decomposed_gates"] > report["logical_gates"]  # wide mcx expanded
    assert report["steps"] == 7
    assert report["depth_estimate"] > 0
    assert report["work_qubits"] == 2  # widest gate has 4 controls

    massless = gate_count_report(
        compile_walk_circuit(WalkOperatorSpec("sb", coin=CoinSpec(0.0, 0.0)), 2, 3)
    )
    assert massless["coin_blocks"] == 0
