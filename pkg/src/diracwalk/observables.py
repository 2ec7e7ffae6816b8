"""Measurable quantities of a walker state.

Per-state reductions (position distribution, chirality probabilities,
reduced coin density matrix, entanglement entropy, signed position
expectation) plus the swept observables built on top of the walk engine:
the Hermitian moment form that maps an initial coin state to its position
expectation after T steps, the mass-induced shift angle derived from it,
and the full Bloch-sphere sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Lattice, InitialStateSpec, WalkerState, build_state, signed_coordinates

_EIG_CLAMP = 1e-12
_SWEEP_CROSSCHECK_TOL = 1e-10


def position_distribution(s: WalkerState) -> np.ndarray:
    """P(u) = |left(u)|^2 + |right(u)|^2, in register order; sums to 1."""
    return np.sum(np.abs(s.amplitudes) ** 2, axis=0)


def expectation_x(s: WalkerState) -> float:
    """Signed position expectation sum_x x P(x)."""
    return float(np.dot(signed_coordinates(s.lattice), position_distribution(s)))


def chirality_probabilities(s: WalkerState) -> tuple[float, float]:
    """Total weight (pL, pR) of the left- and right-handed components."""
    p = np.sum(np.abs(s.amplitudes) ** 2, axis=1)
    return float(p[0]), float(p[1])


def reduced_coin_density(s: WalkerState) -> np.ndarray:
    """2x2 reduced density matrix of the coin, tracing out position.

    rho[c, c'] = sum_u amp(c, u) conj(amp(c', u)); Hermitian with trace 1.
    """
    return s.amplitudes @ s.amplitudes.conj().T


def entanglement_entropy(s: WalkerState) -> float:
    """Coin-position entanglement in bits: von Neumann entropy of the coin.

    Eigenvalues are clamped to [0, 1] before the log to absorb rounding;
    the result lies in [0, 1] because the coin is a single qubit.
    """
    rho = reduced_coin_density(s)
    evals = np.linalg.eigvalsh(rho)
    evals = np.clip(evals, 0.0, 1.0)
    entropy = 0.0
    for lam in evals:
        if lam > _EIG_CLAMP:
            entropy -= lam * math.log2(lam)
    return float(entropy)


@dataclass
class BlochSweepResult:
    """Map from initial coin state to position expectation after T steps.

    ``moment_form`` is the 2x2 Hermitian matrix M with <x> = psi^dag M psi
    for a point-source start with coin state psi.  The Bloch decomposition
    M = b0 I + bx sx + by sy + bz sz gives <x> = b0 + b . n for the coin
    Bloch vector n.  Grid fields are filled by :func:`bloch_sweep` and are
    None when only the moment form was computed.
    """

    moment_form: np.ndarray
    b0: float
    bx: float
    by: float
    bz: float
    theta0_grid: np.ndarray | None = None
    phi0_grid: np.ndarray | None = None
    mean_x_grid: np.ndarray | None = None

    def predicted_mean_x(self, theta0: float, phi0: float) -> float:
        nx = math.sin(theta0) * math.cos(phi0)
        ny = math.sin(theta0) * math.sin(phi0)
        nz = math.cos(theta0)
        return self.b0 + self.bx * nx + self.by * ny + self.bz * nz


def _evolved_basis_states(op, T: int, lat: Lattice):
    from . import engine  # deferred: engine builds on these reductions

    basis_phi = engine.op_basis_phi(op)
    finals = []
    for coin_index in (0, 1):
        amps = np.zeros((2, lat.n_sites), dtype=complex)
        amps[coin_index, 0] = 1.0
        state = WalkerState(amps, lat, basis_phi)
        for _ in range(T):
            state = engine.step(state, op)
        finals.append(state)
    return finals


def x_moment_form(op, T: int, lat: Lattice) -> BlochSweepResult:
    """Hermitian moment form M of the signed position after T steps of ``op``.

    M[i][j] is the matrix element of the signed position operator between
    the evolved point-source states with initial coin |i> and |j>.
    Requires T < N/2 so the signed coordinate is unambiguous.
    """
    if T >= lat.n_sites // 2:
        raise ValueError(
            f"T={T} would wrap the {lat.n_sites}-site ring; signed positions need T < N/2"
        )
    final0, final1 = _evolved_basis_states(op, T, lat)
    xs = signed_coordinates(lat).astype(float)
    finals = (final0.amplitudes, final1.amplitudes)
    form = np.empty((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            form[i, j] = np.einsum("cu,u,cu->", np.conj(finals[i]), xs, finals[j])
    form = 0.5 * (form + form.conj().T)
    b0 = float((form[0, 0] + form[1, 1]).real) / 2.0
    bz = float((form[0, 0] - form[1, 1]).real) / 2.0
    bx = float(form[1, 0].real)
    by = float(form[1, 0].imag)
    return BlochSweepResult(moment_form=form, b0=b0, bx=bx, by=by, bz=bz)


def alpha_shift(op, T: int, lat: Lattice) -> float:
    """Mass-induced rotation angle of the extremal <x> axis about the y axis.

    The massless walk has its Bloch vector b along -z; the shift angle is
    the y-rotation carrying that axis onto the massive walk's, i.e.
    atan2(bx, -bz).  Rejects when |b| carries no positional signal.
    """
    sweep = x_moment_form(op, T, lat)
    magnitude = math.sqrt(sweep.bx**2 + sweep.by**2 + sweep.bz**2)
    if magnitude < 1e-9:
        raise ValueError("no positional signal: Bloch vector of the moment form is ~0")
    return math.atan2(sweep.bx, -sweep.bz)


def bloch_sweep(
    op, T: int, grid_resolution: int, lat: Lattice | None = None
) -> BlochSweepResult:
    """Tabulate <x> after T steps over a (theta0, phi0) grid of coin states.

    Every grid point is simulated in full and cross-checked against the
    moment-form prediction; a disagreement beyond 1e-10 raises, since the
    two routes must agree for a correct engine.
    """
    from . import engine

    if grid_resolution < 8:
        raise ValueError(f"grid resolution must be >= 8 per angle, got {grid_resolution}")
    if lat is None:
        lat = Lattice(max(1, math.ceil(math.log2(2 * T + 2))))
    base = x_moment_form(op, T, lat)
    basis_phi = engine.op_basis_phi(op)
    theta0s = np.linspace(0.0, math.pi, grid_resolution)
    phi0s = np.linspace(0.0, 2.0 * math.pi, grid_resolution, endpoint=False)
    grid = np.empty((grid_resolution, grid_resolution))
    for i, theta0 in enumerate(theta0s):
        for j, phi0 in enumerate(phi0s):
            state = build_state(InitialStateSpec(theta0, phi0), lat, basis_phi)
            for _ in range(T):
                state = engine.step(state, op)
            mean = expectation_x(state)
            predicted = base.predicted_mean_x(theta0, phi0)
            if abs(mean - predicted) > _SWEEP_CROSSCHECK_TOL:
                raise RuntimeError(
                    f"moment form disagrees with direct simulation at "
                    f"theta0={theta0:.6f}, phi0={phi0:.6f}: {predicted} vs {mean}"
                )
            grid[i, j] = mean
    return BlochSweepResult(
        moment_form=base.moment_form,
        b0=base.b0,
        bx=base.bx,
        by=base.by,
        bz=base.bz,
        theta0_grid=theta0s,
        phi0_grid=phi0s,
        mean_x_grid=grid,
    )
