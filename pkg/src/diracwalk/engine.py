"""Walk operators: conditional shifts, coins, stepping and evolution.

Five one-step rules are supported, named by the order in which the coin
(B) and the conditional shift (S, or its half-shift factors S-, S+) hit
the state:

* ``sb``   coin then shift (the plain walk);
* ``bs``   shift then coin;
* ``bsb``  half-angle coin, shift, half-angle coin (symmetric splitting);
* ``sbs``  left half-shift, coin, right half-shift (symmetric splitting);
* ``sqw``  split-step walk: coin1, left half-shift, coin2, right half-shift.

The shift moves the left-handed component one site down-ring and the
right-handed component one site up-ring, both cyclically.  Each step is
applied as a coin pass over all sites followed by cyclic rotations of the
two chirality slices, O(N) per step.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .coins import CoinSpec, coin_matrix
from .lattice import Lattice, WalkerState, signed_coordinates
from . import observables

VARIANTS = ("sb", "bs", "bsb", "sbs", "sqw")

_BASIS_MATCH_TOL = 1e-9
_DENSE_MAX_SITES = 64


@dataclass(frozen=True)
class WalkOperatorSpec:
    """Selects the one-step rule and its coin(s).

    ``sqw`` carries two coins; every other variant exactly one.
    """

    variant: str
    coin: CoinSpec | None = None
    coin1: CoinSpec | None = None
    coin2: CoinSpec | None = None

    def __post_init__(self) -> None:
        variant = self.variant.lower()
        if variant not in VARIANTS:
            raise ValueError(f"unknown walk variant {self.variant!r}; one of {VARIANTS}")
        object.__setattr__(self, "variant", variant)
        if variant == "sqw":
            if self.coin1 is None or self.coin2 is None or self.coin is not None:
                raise ValueError("sqw takes coin1 and coin2 (and no single coin)")
        else:
            if self.coin is None or self.coin1 is not None or self.coin2 is not None:
                raise ValueError(f"{variant} takes a single coin")

    def coins(self) -> tuple[CoinSpec, ...]:
        if self.variant == "sqw":
            return (self.coin1, self.coin2)
        return (self.coin,)


def op_basis_phi(op: WalkOperatorSpec) -> float:
    """Basis angle the operator's coins are expressed in.

    Identity coins carry no basis information, so the first
    non-identity coin decides; an all-identity operator defaults to 0.
    """
    for spec in op.coins():
        if not spec.is_identity():
            return spec.phi
    return 0.0


def _require_same_basis(coin: CoinSpec, s: WalkerState) -> None:
    if coin.is_identity():
        return  # a zero rotation is basis-free
    diff = (coin.phi - s.basis_phi) % (2.0 * math.pi)
    if min(diff, 2.0 * math.pi - diff) > _BASIS_MATCH_TOL:
        raise ValueError(
            f"coin basis phi={coin.phi:.12g} does not match state basis "
            f"phi={s.basis_phi:.12g}"
        )


def apply_coin(s: WalkerState, coin: np.ndarray) -> WalkerState:
    """Apply a 2x2 unitary to the chirality pair at every site."""
    return WalkerState(coin @ s.amplitudes, s.lattice, s.basis_phi)


def apply_shift(s: WalkerState) -> WalkerState:
    """Conditional shift: left-handed slice to u-1, right-handed to u+1 (mod N)."""
    amps = np.empty_like(s.amplitudes)
    amps[0] = np.roll(s.amplitudes[0], -1)
    amps[1] = np.roll(s.amplitudes[1], 1)
    return WalkerState(amps, s.lattice, s.basis_phi)


def apply_half_shift(s: WalkerState, side: str) -> WalkerState:
    """One factor of the shift: ``minus`` moves only the left-handed slice
    to u-1, ``plus`` only the right-handed slice to u+1.  The two factors
    commute and compose to the full shift."""
    amps = s.amplitudes.copy()
    if side == "minus":
        amps[0] = np.roll(amps[0], -1)
    elif side == "plus":
        amps[1] = np.roll(amps[1], 1)
    else:
        raise ValueError(f"half-shift side must be 'minus' or 'plus', got {side!r}")
    return WalkerState(amps, s.lattice, s.basis_phi)


def step(s: WalkerState, op: WalkOperatorSpec) -> WalkerState:
    """Advance the walker by one time step of ``op``."""
    for spec in op.coins():
        _require_same_basis(spec, s)
    if op.variant == "sb":
        return apply_shift(apply_coin(s, coin_matrix(op.coin)))
    if op.variant == "bs":
        return apply_coin(apply_shift(s), coin_matrix(op.coin))
    if op.variant == "bsb":
        half = coin_matrix(op.coin.half_angle())
        return apply_coin(apply_shift(apply_coin(s, half)), half)
    if op.variant == "sbs":
        full = coin_matrix(op.coin)
        return apply_half_shift(apply_coin(apply_half_shift(s, "minus"), full), "plus")
    # sqw
    out = apply_coin(s, coin_matrix(op.coin1))
    out = apply_half_shift(out, "minus")
    out = apply_coin(out, coin_matrix(op.coin2))
    return apply_half_shift(out, "plus")


@dataclass
class SpacetimeRecord:
    """Per-step observables of an evolution, rows t = 0 .. steps.

    ``probabilities`` has shape (steps + 1, N) in register order.  Entropy
    and mean_x are None when not observed; mean_x is also None when the
    evolution ran long enough to wrap the ring (steps >= N/2), since the
    signed coordinate is then ambiguous.
    """

    steps: int
    probabilities: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    entropy_bits: np.ndarray | None
    mean_x: np.ndarray | None
    final_state: WalkerState
    metadata: dict = field(default_factory=dict)


def _op_metadata(op: WalkOperatorSpec) -> dict:
    meta = {"variant": op.variant}
    if op.variant == "sqw":
        meta["theta1"], meta["phi1"] = op.coin1.theta, op.coin1.phi
        meta["theta2"], meta["phi2"] = op.coin2.theta, op.coin2.phi
    else:
        meta["theta"], meta["phi"] = op.coin.theta, op.coin.phi
    return meta


def evolve(
    s0: WalkerState,
    op: WalkOperatorSpec,
    T: int,
    observe: tuple[str, ...] = ("entropy", "mean_x"),
) -> SpacetimeRecord:
    """Evolve ``s0`` for ``T`` steps, recording observables at every step.

    Row t of the record describes the state after t steps (row 0 is the
    initial state).  ``observe`` selects the optional series: "entropy"
    and/or "mean_x".  Position and chirality probabilities are always
    recorded.  T >= N/2 is allowed but flags ``wraparound`` in the
    metadata and suppresses the signed-position series.
    """
    if T < 0:
        raise ValueError(f"step count must be >= 0, got {T}")
    unknown = set(observe) - {"entropy", "mean_x"}
    if unknown:
        raise ValueError(f"unknown observe flags {sorted(unknown)}")
    n = s0.lattice.n_sites
    wraparound = T >= n // 2
    want_entropy = "entropy" in observe
    want_mean = "mean_x" in observe and not wraparound

    probs = np.empty((T + 1, n))
    p_left = np.empty(T + 1)
    p_right = np.empty(T + 1)
    entropy = np.empty(T + 1) if want_entropy else None
    mean_x = np.empty(T + 1) if want_mean else None

    state = s0
    for t in range(T + 1):
        if t > 0:
            state = step(state, op)
        probs[t] = observables.position_distribution(state)
        p_left[t], p_right[t] = observables.chirality_probabilities(state)
        if want_entropy:
            entropy[t] = observables.entanglement_entropy(state)
        if want_mean:
            mean_x[t] = observables.expectation_x(state)

    metadata = {
        "operator": _op_metadata(op),
        "k": s0.lattice.k,
        "n_sites": n,
        "basis_phi": s0.basis_phi,
        "steps": T,
        "wraparound": wraparound,
        "observe": list(observe),
    }
    return SpacetimeRecord(
        steps=T,
        probabilities=probs,
        p_left=p_left,
        p_right=p_right,
        entropy_bits=entropy,
        mean_x=mean_x,
        final_state=state,
        metadata=metadata,
    )


def dense_walk_matrix(op: WalkOperatorSpec, lat: Lattice) -> np.ndarray:
    """The one-step operator as a dense 2N x 2N unitary.

    Vectorization is chirality-major: basis index c * N + u.  Intended as
    an oracle for small lattices; rejects N > 64.
    """
    n = lat.n_sites
    if n > _DENSE_MAX_SITES:
        raise ValueError(f"dense matrix limited to {_DENSE_MAX_SITES} sites, got {n}")
    basis_phi = op_basis_phi(op)
    matrix = np.empty((2 * n, 2 * n), dtype=complex)
    for col in range(2 * n):
        amps = np.zeros((2, n), dtype=complex)
        amps[col // n, col % n] = 1.0
        out = step(WalkerState(amps, lat, basis_phi), op)
        matrix[:, col] = out.amplitudes.reshape(-1)
    return matrix


def write_spacetime_csv(record: SpacetimeRecord, path) -> None:
    """Write the position distribution as rows ``t,x,P``, x sorted ascending."""
    lat = record.final_state.lattice
    xs = signed_coordinates(lat)
    order = np.argsort(xs)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "x", "P"])
        for t in range(record.steps + 1):
            row = record.probabilities[t]
            for u in order:
                writer.writerow([t, int(xs[u]), repr(float(row[u]))])


def write_spacetime_sidecar(record: SpacetimeRecord, path) -> None:
    """Write metadata and the per-step series (pL, pR, entropy, mean_x) as JSON."""
    payload = {
        "metadata": record.metadata,
        "p_left": record.p_left.tolist(),
        "p_right": record.p_right.tolist(),
        "entropy_bits": None if record.entropy_bits is None else record.entropy_bits.tolist(),
        "mean_x": None if record.mean_x is None else record.mean_x.tolist(),
    }
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
