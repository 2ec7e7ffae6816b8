"""Momentum-space analysis of the walk operators.

On the ring every walk operator block-diagonalizes over plane waves into
2x2 unitaries, one per lattice momentum.  This module builds those blocks,
the analytic continuum single-step propagator that serves as the accuracy
oracle, the dispersion relation, and the log-log error fits that certify
first- versus second-order splitting accuracy.

Sign convention: the left-handed (coin 0) slice picks up e^{+ik} under the
shift, matching the real-space shift direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coins import CoinSpec, IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, coin_matrix, is_unitary

_SPLIT_VARIANTS = ("sb", "bs", "bsb", "sbs")

EXPECTED_LOCAL_ORDER = {"sb": 2.0, "bs": 2.0, "bsb": 3.0, "sbs": 3.0}


@dataclass(frozen=True)
class MomentumBlock:
    """2x2 unitary acting on the chirality pair at lattice momentum ``k``."""

    k: float
    matrix: np.ndarray


@dataclass(frozen=True)
class ScalingReport:
    """Per-step error against the analytic propagator over a range of step sizes."""

    variant: str
    epsilons: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_slope: float


def _shift_phases(k: float) -> tuple[complex, complex]:
    return np.exp(1j * k), np.exp(-1j * k)


def walk_block(op, k: float) -> MomentumBlock:
    """Momentum-space 2x2 block of a walk operator at momentum ``k``.

    ``op`` is a ``WalkOperatorSpec``.  The blocks are, with
    D = diag(e^{ik}, e^{-ik}) and the half-shift factors
    D- = diag(e^{ik}, 1), D+ = diag(1, e^{-ik}):

    sb: D B ; bs: B D ; bsb: B_half D B_half ; sbs: D+ B D- ;
    sqw: D+ B2 D- B1.
    """
    up, down = _shift_phases(k)
    full = np.diag([up, down])
    minus = np.diag([up, 1.0 + 0.0j])
    plus = np.diag([1.0 + 0.0j, down])
    variant = op.variant
    if variant == "sb":
        matrix = full @ coin_matrix(op.coin)
    elif variant == "bs":
        matrix = coin_matrix(op.coin) @ full
    elif variant == "bsb":
        half = coin_matrix(op.coin.half_angle())
        matrix = half @ full @ half
    elif variant == "sbs":
        matrix = plus @ coin_matrix(op.coin) @ minus
    elif variant == "sqw":
        matrix = plus @ coin_matrix(op.coin2) @ minus @ coin_matrix(op.coin1)
    else:  # pragma: no cover - WalkOperatorSpec already validates
        raise ValueError(f"unknown variant {variant!r}")
    return MomentumBlock(k=k, matrix=matrix)


def exact_step_block(kappa: float, m: float, phi: float, eps: float) -> np.ndarray:
    """Analytic one-step continuum propagator exp(-i eps H(kappa)).

    H(kappa) = -kappa sigma_z + m (cos phi sigma_x + sin phi sigma_y).
    Evaluated in closed form: with v = (eps m cos phi, eps m sin phi,
    -eps kappa) and a = |v|, the result is cos(a) I - i sin(a) (v/a . sigma);
    the zero vector gives the identity.
    """
    if eps <= 0:
        raise ValueError(f"step size must be positive, got {eps}")
    v = np.array([eps * m * math.cos(phi), eps * m * math.sin(phi), -eps * kappa])
    a = float(np.linalg.norm(v))
    if a == 0.0:
        return IDENTITY2.copy()
    axis = v / a
    pauli_dot = axis[0] * SIGMA_X + axis[1] * SIGMA_Y + axis[2] * SIGMA_Z
    return math.cos(a) * IDENTITY2 - 1j * math.sin(a) * pauli_dot


def dispersion_omega(theta: float, k: float) -> float:
    """Frequency of the walk at mass angle ``theta`` and momentum ``k``.

    omega = arccos(cos(theta/2) cos k), in [0, pi].  The maximum group
    velocity d omega / d k over momenta is cos(theta/2).
    """
    return math.acos(max(-1.0, min(1.0, math.cos(theta / 2.0) * math.cos(k))))


def eigenphases(block: MomentumBlock) -> tuple[float, float]:
    """Eigenvalue phases (larger, smaller) of a unitary block, in (-pi, pi]."""
    matrix = np.asarray(block.matrix, dtype=complex)
    if not is_unitary(matrix, tol=1e-10):
        raise ValueError("momentum block is not unitary")
    phases = np.angle(np.linalg.eigvals(matrix))
    lo, hi = float(np.min(phases)), float(np.max(phases))
    return hi, lo


def max_group_velocity(theta: float, n_grid: int = 4096) -> float:
    """Max |d omega / d k| measured by central differences on a fine grid."""
    ks = np.linspace(-math.pi, math.pi, n_grid + 1)
    omegas = np.array([dispersion_omega(theta, k) for k in ks])
    derivative = (omegas[2:] - omegas[:-2]) / (ks[2:] - ks[:-2])
    return float(np.max(np.abs(derivative)))


def _aligned_distance(candidate: np.ndarray, reference: np.ndarray) -> float:
    """Spectral-norm distance minimized over a global phase.

    The phase is taken from the trace of reference^dag candidate, which
    removes the identity component of the mismatch; relative phases, the
    physical content, survive.
    """
    overlap = np.trace(reference.conj().T @ candidate)
    phase = 1.0 if abs(overlap) < 1e-15 else overlap / abs(overlap)
    return float(np.linalg.norm(candidate - phase * reference, ord=2))


def step_error(op_variant: str, kappa: float, m: float, phi: float, eps: float) -> float:
    """Per-step error of a walk variant against the analytic propagator.

    The lattice is refined by scaling both the momentum (k = eps * kappa)
    and the coin angle (theta = 2 eps m), keeping the physical (kappa, m)
    fixed.  Global phase is removed before taking the spectral norm.
    """
    from .engine import WalkOperatorSpec

    variant = op_variant.lower()
    if variant not in _SPLIT_VARIANTS:
        raise ValueError(
            f"splitting error is defined for {_SPLIT_VARIANTS}, got {op_variant!r}"
        )
    k = eps * kappa
    if not (-math.pi < k <= math.pi):
        raise ValueError(f"lattice momentum eps*kappa={k:.6g} outside (-pi, pi]")
    op = WalkOperatorSpec(variant, coin=CoinSpec(2.0 * eps * m, phi))
    approx = walk_block(op, k).matrix
    exact = exact_step_block(kappa, m, phi, eps)
    return _aligned_distance(approx, exact)


def order_fit(
    op_variant: str,
    kappa: float,
    m: float,
    phi: float,
    eps_list,
) -> ScalingReport:
    """Least-squares slope of log(error) vs log(eps) for a walk variant.

    First-order variants (sb, bs) fit a per-step slope of 2, the symmetric
    ones (bsb, sbs) a slope of 3.  Degenerate parameters (m = 0 or
    kappa = 0) make the error vanish identically and are rejected.
    """
    if m == 0.0 or kappa == 0.0:
        raise ValueError(
            "order fit undefined: with m=0 or kappa=0 the splitting is exact "
            "and the error is identically ~0"
        )
    eps_values = tuple(sorted(float(e) for e in eps_list))
    if len(eps_values) < 4:
        raise ValueError(f"need at least 4 step sizes for a fit, got {len(eps_values)}")
    if eps_values[-1] / eps_values[0] < 10.0:
        raise ValueError("step sizes must span at least a factor of 10")
    errors = tuple(step_error(op_variant, kappa, m, phi, eps) for eps in eps_values)
    slope = float(np.polyfit(np.log(eps_values), np.log(errors), 1)[0])
    return ScalingReport(
        variant=op_variant.lower(),
        epsilons=eps_values,
        errors=errors,
        fitted_slope=slope,
    )
