"""Compilation of walk steps to elementary gate programs, and their simulation.

Register layout: qubit 0 is the coin, qubits 1..k are the position
register, little-endian (qubit 1 is the least significant bit of the
register value u, and u = 0 is |0...0>).  The conditional shift is
compiled as a coin-controlled incrementer cascade plus a coin-controlled
decrementer cascade; the incrementer for k position qubits uses exactly k
multi-controlled X gates.

Controls carry an explicit polarity (1 = control on |1>, 0 = control on
|0>) at the program level; polarity-0 controls are lowered to
X-conjugation only when exporting, which keeps in-memory gate counts
honest.  Exported text is OpenQASM 2.0; multi-controlled X gates with more
than two controls are decomposed into Toffoli cascades over clean work
qubits appended after the position register.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .coins import CoinSpec, SIGMA_X, rx, ry, rz
from .engine import WalkOperatorSpec

_MAX_SIM_QUBITS = 20

_SINGLE_QUBIT_KINDS = ("x", "h", "rx", "ry", "rz")
_ROTATION_KINDS = ("rx", "ry", "rz")

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """One elementary gate.

    ``mcx`` gates flip ``target`` when every control qubit matches its
    polarity; all other kinds are single-qubit, with ``angle`` set for the
    rotations.
    """

    kind: str
    target: int
    angle: float | None = None
    controls: tuple[int, ...] = ()
    polarities: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _SINGLE_QUBIT_KINDS + ("mcx",):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in _ROTATION_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} gate needs a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} gate takes no angle")
        if self.kind == "mcx":
            if not self.controls:
                raise ValueError("mcx needs at least one control")
            if len(self.polarities) != len(self.controls):
                raise ValueError("one polarity per control required")
            if any(p not in (0, 1) for p in self.polarities):
                raise ValueError("polarities must be 0 or 1")
        elif self.controls or self.polarities:
            raise ValueError(f"{self.kind} gate takes no controls")
        touched = (self.target,) + self.controls
        if len(set(touched)) != len(touched) or any(q < 0 for q in touched):
            raise ValueError(f"qubit indices must be distinct and >= 0: {touched}")

    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + self.controls


@dataclass
class GateProgram:
    """Ordered gate list on a coin + position register of ``n_qubits`` qubits."""

    n_qubits: int
    gates: list[Gate]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("a program needs at least one qubit")
        for gate in self.gates:
            if max(gate.qubits()) >= self.n_qubits:
                raise ValueError(
                    f"gate {gate} touches qubits outside the {self.n_qubits}-qubit register"
                )


def _increment_gates(k: int, extra_control: int | None = None, polarity: int = 1) -> list[Gate]:
    """Carry cascade realizing u -> u+1 (mod 2^k) on position qubits 1..k.

    Qubit j flips when position qubits 1..j-1 are all ones, highest target
    first so lower bits still hold their pre-increment values.  An
    ``extra_control`` (the coin) is prepended to every gate when given.
    """
    gates = []
    for j in range(k, 0, -1):
        controls = tuple(range(1, j))
        polarities = (1,) * len(controls)
        if extra_control is not None:
            controls = (extra_control,) + controls
            polarities = (polarity,) + polarities
        if controls:
            gates.append(Gate("mcx", target=j, controls=controls, polarities=polarities))
        else:
            gates.append(Gate("x", target=j))
    return gates


def compile_increment(k: int) -> GateProgram:
    """Program on k+1 qubits adding 1 (mod 2^k) to the position register."""
    if k < 1:
        raise ValueError("need at least one position qubit")
    return GateProgram(k + 1, _increment_gates(k), {"operation": "increment", "k": k})


def compile_decrement(k: int) -> GateProgram:
    """Exact adjoint of the incrementer: same self-inverse gates, reversed."""
    if k < 1:
        raise ValueError("need at least one position qubit")
    gates = list(reversed(_increment_gates(k)))
    return GateProgram(k + 1, gates, {"operation": "decrement", "k": k})


def _coin_gates(spec: CoinSpec) -> list[Gate]:
    """Coin block Rz(phi) Rx(theta) Rz(-phi) on the coin qubit, zero angles elided."""
    if spec.theta == 0.0:
        return []
    gates = []
    if spec.phi != 0.0:
        gates.append(Gate("rz", target=0, angle=-spec.phi))
    gates.append(Gate("rx", target=0, angle=spec.theta))
    if spec.phi != 0.0:
        gates.append(Gate("rz", target=0, angle=spec.phi))
    return gates


def _shift_plus_gates(k: int) -> list[Gate]:
    """Right half-shift: increment controlled on the coin being |1>."""
    return _increment_gates(k, extra_control=0, polarity=1)


def _shift_minus_gates(k: int) -> list[Gate]:
    """Left half-shift: decrement controlled on the coin being |0>."""
    return list(reversed(_increment_gates(k, extra_control=0, polarity=0)))


def compile_step(op: WalkOperatorSpec, k: int) -> GateProgram:
    """Compile one walk step on k position qubits plus the coin.

    The full shift is the controlled increment followed by the controlled
    decrement (the two commute).  The symmetric variants place the coin
    blocks around or between the shift factors; none of them needs more
    controlled-shift cascades than the plain walk.
    """
    if k < 1:
        raise ValueError("need at least one position qubit")
    gates: list[Gate] = []
    coin_blocks = 0

    def add_coin(spec: CoinSpec) -> None:
        nonlocal coin_blocks
        block = _coin_gates(spec)
        if block:
            coin_blocks += 1
        gates.extend(block)

    variant = op.variant
    if variant == "sb":
        add_coin(op.coin)
        gates.extend(_shift_plus_gates(k))
        gates.extend(_shift_minus_gates(k))
    elif variant == "bs":
        gates.extend(_shift_plus_gates(k))
        gates.extend(_shift_minus_gates(k))
        add_coin(op.coin)
    elif variant == "bsb":
        half = op.coin.half_angle()
        add_coin(half)
        gates.extend(_shift_plus_gates(k))
        gates.extend(_shift_minus_gates(k))
        add_coin(half)
    elif variant == "sbs":
        gates.extend(_shift_minus_gates(k))
        add_coin(op.coin)
        gates.extend(_shift_plus_gates(k))
    else:  # sqw
        add_coin(op.coin1)
        gates.extend(_shift_minus_gates(k))
        add_coin(op.coin2)
        gates.extend(_shift_plus_gates(k))

    metadata = {"variant": variant, "k": k, "steps": 1,
                "shift_blocks": 2, "coin_blocks": coin_blocks}
    return GateProgram(k + 1, gates, metadata)


def compile_state_prep(theta0: float, phi0: float, kind: str, k: int) -> GateProgram:
    """Prepare the separable start state: coin angles times point or uniform.

    The coin is prepared as Rz(phi0) Ry(theta0) |0>, equal to the target
    coin state up to a global phase.  ``kind`` is "point" (register left
    at u = 0) or "uniform" (Hadamard on every position qubit).
    """
    if kind not in ("point", "uniform"):
        raise ValueError(f"state prep kind must be 'point' or 'uniform', got {kind!r}")
    gates: list[Gate] = []
    if theta0 != 0.0:
        gates.append(Gate("ry", target=0, angle=theta0))
        if phi0 != 0.0:
            gates.append(Gate("rz", target=0, angle=phi0))
    if kind == "uniform":
        gates.extend(Gate("h", target=j) for j in range(1, k + 1))
    return GateProgram(k + 1, gates, {"operation": f"prep-{kind}", "k": k})


def compile_walk_circuit(
    op: WalkOperatorSpec, k: int, steps: int, prep: GateProgram | None = None
) -> GateProgram:
    """Concatenate an optional state prep with ``steps`` repetitions of one step."""
    if steps < 0:
        raise ValueError("step count must be >= 0")
    one = compile_step(op, k)
    gates: list[Gate] = []
    if prep is not None:
        if prep.n_qubits != k + 1:
            raise ValueError("state prep register size does not match")
        gates.extend(prep.gates)
    for _ in range(steps):
        gates.extend(one.gates)
    metadata = dict(one.metadata)
    metadata["steps"] = steps
    metadata["shift_blocks"] = one.metadata["shift_blocks"] * steps
    metadata["coin_blocks"] = one.metadata["coin_blocks"] * steps
    metadata["with_prep"] = prep is not None
    return GateProgram(k + 1, gates, metadata)


# ---------------------------------------------------------------------------
# statevector simulation


def _single_matrix(gate: Gate) -> np.ndarray:
    if gate.kind == "x":
        return SIGMA_X
    if gate.kind == "h":
        return _HADAMARD
    if gate.kind == "rx":
        return rx(gate.angle)
    if gate.kind == "ry":
        return ry(gate.angle)
    return rz(gate.angle)


def _apply_single(psi: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    block = psi.reshape(1 << (n - qubit - 1), 2, 1 << qubit)
    return np.einsum("ab,xby->xay", matrix, block).reshape(-1)


def _apply_mcx(psi: np.ndarray, gate: Gate) -> np.ndarray:
    idx = np.arange(psi.size)
    mask = np.ones(psi.size, dtype=bool)
    for control, polarity in zip(gate.controls, gate.polarities):
        mask &= ((idx >> control) & 1) == polarity
    mask &= ((idx >> gate.target) & 1) == 0
    lower = idx[mask]
    upper = lower | (1 << gate.target)
    out = psi.copy()
    out[lower] = psi[upper]
    out[upper] = psi[lower]
    return out


def simulate(program: GateProgram, initial: np.ndarray | None = None) -> np.ndarray:
    """Run the program on a statevector; returns the 2^n amplitude vector.

    ``initial`` defaults to |0...0>.  Basis index i encodes qubit q as bit
    q of i, so a coin value c at register position u sits at index 2u + c.
    """
    n = program.n_qubits
    if n > _MAX_SIM_QUBITS:
        raise ValueError(f"statevector simulation limited to {_MAX_SIM_QUBITS} qubits")
    dim = 1 << n
    if initial is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.array(initial, dtype=complex).ravel()
        if psi.size != dim:
            raise ValueError(f"initial vector has {psi.size} amplitudes, expected {dim}")
    for gate in program.gates:
        if gate.kind == "mcx":
            psi = _apply_mcx(psi, gate)
        else:
            psi = _apply_single(psi, _single_matrix(gate), gate.target, n)
    return psi


def statevector_to_grid(vector: np.ndarray) -> np.ndarray:
    """Reshape a coin+position statevector to the (2, N) chirality-major grid."""
    vector = np.asarray(vector)
    n_sites = vector.size // 2
    return vector.reshape(n_sites, 2).T.copy()


def grid_to_statevector(grid: np.ndarray) -> np.ndarray:
    """Inverse of :func:`statevector_to_grid`."""
    return np.asarray(grid).T.reshape(-1).copy()


# ---------------------------------------------------------------------------
# lowering, export, parsing, verification


def _lower_program(program: GateProgram) -> tuple[list[tuple], int]:
    """Expand polarity conjugation and wide mcx gates into primitives.

    Returns (primitive list, total qubit count including work qubits).
    Primitives are tuples (name, angle_or_None, qubit_tuple) with names in
    {x, h, rx, ry, rz, cx, ccx}.  A gate with m > 2 controls uses m - 2
    clean work qubits in the standard Toffoli cascade (compute the AND
    tree, hit the target, uncompute), so work qubits end in |0>.
    """
    widths = [len(g.controls) for g in program.gates if g.kind == "mcx"]
    work = max(0, max(widths, default=0) - 2)
    total = program.n_qubits + work
    work_qubits = list(range(program.n_qubits, total))

    lowered: list[tuple] = []
    for gate in program.gates:
        if gate.kind != "mcx":
            angle = gate.angle if gate.kind in _ROTATION_KINDS else None
            lowered.append((gate.kind, angle, (gate.target,)))
            continue
        conjugated = [c for c, p in zip(gate.controls, gate.polarities) if p == 0]
        for qubit in conjugated:
            lowered.append(("x", None, (qubit,)))
        controls = gate.controls
        m = len(controls)
        if m == 1:
            lowered.append(("cx", None, (controls[0], gate.target)))
        elif m == 2:
            lowered.append(("ccx", None, (controls[0], controls[1], gate.target)))
        else:
            compute = [("ccx", None, (controls[0], controls[1], work_qubits[0]))]
            for i in range(2, m - 1):
                compute.append(
                    ("ccx", None, (controls[i], work_qubits[i - 2], work_qubits[i - 1]))
                )
            lowered.extend(compute)
            lowered.append(("ccx", None, (controls[m - 1], work_qubits[m - 3], gate.target)))
            lowered.extend(reversed(compute))
        for qubit in conjugated:
            lowered.append(("x", None, (qubit,)))
    return lowered, total


def gate_count_report(program: GateProgram) -> dict:
    """Logical and decomposed gate counts plus a greedy depth estimate."""
    lowered, total = _lower_program(program)
    times = [0] * total
    depth = 0
    for _, _, qubits in lowered:
        t = 1 + max(times[q] for q in qubits)
        for q in qubits:
            times[q] = t
        depth = max(depth, t)
    report = {
        "logical_gates": len(program.gates),
        "decomposed_gates": len(lowered),
        "depth_estimate": depth,
        "qubits": program.n_qubits,
        "work_qubits": total - program.n_qubits,
    }
    for key in ("steps", "shift_blocks", "coin_blocks", "variant"):
        if key in program.metadata:
            report[key] = program.metadata[key]
    return report


def export_qasm(program: GateProgram) -> str:
    """Emit the program as OpenQASM 2.0 text.

    The header comment documents the register convention.  Work qubits for
    wide multi-controlled X gates are appended after the position register
    and always return to |0>.
    """
    lowered, total = _lower_program(program)
    k = program.n_qubits - 1
    lines = [
        "// coin qubit: q[0]; position register: q[1..%d], little-endian" % k,
        "// (q[1] is the least significant position bit; u = 0 is |0...0>)",
    ]
    if total > program.n_qubits:
        lines.append(
            "// clean work qubits q[%d..%d] for multi-controlled X decomposition"
            % (program.n_qubits, total - 1)
        )
    lines += ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{total}];"]
    for name, angle, qubits in lowered:
        args = ",".join(f"q[{q}]" for q in qubits)
        if angle is None:
            lines.append(f"{name} {args};")
        else:
            lines.append(f"{name}({angle!r}) {args};")
    return "\n".join(lines) + "\n"


_QASM_GATE_RE = re.compile(
    r"^(?P<name>x|h|rx|ry|rz|cx|ccx)\s*(?:\((?P<angle>[^)]+)\))?\s+(?P<args>[^;]+);$"
)


def parse_qasm(text: str) -> GateProgram:
    """Parse the OpenQASM 2.0 subset produced by :func:`export_qasm`."""
    n_qubits = None
    gates: list[Gate] = []
    for raw in text.splitlines():
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith(("OPENQASM", "include")):
            continue
        match = re.fullmatch(r"qreg\s+(\w+)\[(\d+)\];", line)
        if match:
            n_qubits = int(match.group(2))
            continue
        match = _QASM_GATE_RE.fullmatch(line)
        if not match:
            raise ValueError(f"cannot parse QASM line: {raw!r}")
        name = match.group("name")
        qubits = [int(q) for q in re.findall(r"q\[(\d+)\]", match.group("args"))]
        angle = float(match.group("angle")) if match.group("angle") else None
        if name in ("x", "h"):
            gates.append(Gate(name, target=qubits[0]))
        elif name in _ROTATION_KINDS:
            gates.append(Gate(name, target=qubits[0], angle=angle))
        elif name == "cx":
            gates.append(Gate("mcx", target=qubits[1], controls=(qubits[0],), polarities=(1,)))
        else:  # ccx
            gates.append(
                Gate("mcx", target=qubits[2], controls=(qubits[0], qubits[1]), polarities=(1, 1))
            )
    if n_qubits is None:
        raise ValueError("no qreg declaration found")
    return GateProgram(n_qubits, gates, {"parsed": True})


def verify(program: GateProgram, reference_matrix: np.ndarray) -> float:
    """Max basis-input deviation between the program and a reference unitary.

    The reference is in chirality-major ordering (index c * N + u), as
    produced by the dense walk-matrix oracle.  One global phase is aligned
    before measuring; the result is the worst 2-norm distance over all
    computational-basis inputs.
    """
    dim = 1 << program.n_qubits
    reference = np.asarray(reference_matrix, dtype=complex)
    if reference.shape != (dim, dim):
        raise ValueError(
            f"reference is {reference.shape}, program acts on dimension {dim}"
        )
    if dim > 128:
        raise ValueError("dense verification limited to 64 sites (128 amplitudes)")
    matrix = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[col] = 1.0
        matrix[:, col] = simulate(program, basis)
    half = dim // 2
    perm = np.array([2 * u + c for c in (0, 1) for u in range(half)])
    matrix = matrix[np.ix_(perm, perm)]
    overlap = np.trace(reference.conj().T @ matrix)
    if abs(overlap) > 1e-12:
        matrix = matrix * (abs(overlap) / overlap)
    return float(np.max(np.linalg.norm(matrix - reference, axis=0)))
