"""Cyclic lattice and the two-component walker state.

A walker lives on a ring of N = 2^k sites (k position qubits) and carries
a two-component internal degree of freedom, the chirality: component 0 is
the left-handed field, component 1 the right-handed field.  States record
``basis_phi``, the axis angle of the spinor basis their components are
expressed in, so that charge conjugation needs no out-of-band convention.

All operations are pure: they return new ``WalkerState`` values and never
mutate their inputs.  Amplitude grids are marked read-only.

Conventions
-----------
* Register positions are u in [0, N); arithmetic is mod N.  The signed
  physical coordinate is x = ((u + N/2) mod N) - N/2 (two's-complement
  style), so x = 0 sits at register 0 and wraps at +/- N/2.
* Charge conjugation in a basis with axis angle phi is
  C = diag(1, e^{2i(phi - pi/2)}) K, with K complex conjugation.  This is
  the z-rotation form fixed so that both special bases come out exactly:
  plain conjugation at phi = pi/2 and sigma_z-conjugation at phi = 0.
  With the matching phase convention in ``change_basis`` the Majorana
  residual is invariant under basis changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coins import TAU

WEYL_DIRAC = 0.0
WEYL_MAJORANA = math.pi / 2.0

NORM_TOL = 1e-10
RENORM_LIMIT = 1e-6

_MAX_QUBITS = 16


@dataclass(frozen=True)
class Lattice:
    """Ring of 2^k sites addressed by k position qubits; boundary is periodic."""

    k: int

    boundary = "periodic"

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or not (1 <= self.k <= _MAX_QUBITS):
            raise ValueError(f"position qubit count must be in [1, {_MAX_QUBITS}], got {self.k!r}")

    @property
    def n_sites(self) -> int:
        return 1 << self.k


def signed_coordinates(lat: Lattice) -> np.ndarray:
    """Signed coordinate x for every register index u, in register order."""
    n = lat.n_sites
    u = np.arange(n)
    return (u + n // 2) % n - n // 2


@dataclass(frozen=True)
class WalkerState:
    """Normalized amplitudes over chirality (2) x position (N).

    ``amplitudes[c, u]`` is the amplitude of chirality c at register site u.
    ``basis_phi`` records the spinor basis angle, reduced mod 2*pi.

    Construction validates the shape and the norm.  A norm deviating from 1
    by less than ``RENORM_LIMIT`` is silently renormalized (absorbing
    float drift); anything larger is rejected so that grossly wrong input
    cannot hide behind normalization.
    """

    amplitudes: np.ndarray
    lattice: Lattice
    basis_phi: float = WEYL_MAJORANA

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2, self.lattice.n_sites):
            raise ValueError(
                f"amplitude grid shape {amps.shape} does not match "
                f"(2, {self.lattice.n_sites})"
            )
        nrm = float(np.linalg.norm(amps))
        dev = abs(nrm - 1.0)
        if dev >= RENORM_LIMIT:
            raise ValueError(f"state norm is {nrm:.12g}, too far from 1 to renormalize")
        if dev > 1e-12:
            amps = amps / nrm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis_phi", float(self.basis_phi) % TAU)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class InitialStateSpec:
    """Separable initial state: coin angles (theta0, phi0) times a position profile.

    The profile is either a point source at register ``u0`` (default 0) or
    an explicit normalized complex array over all sites.  The resulting
    walker amplitudes are cos(theta0/2) * D(u) on the left-handed component
    and e^{i phi0} sin(theta0/2) * D(u) on the right-handed one.
    """

    theta0: float
    phi0: float
    u0: int | None = None
    profile: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta0) and math.isfinite(self.phi0)):
            raise ValueError("coin angles must be finite")
        if self.profile is not None and self.u0 is not None:
            raise ValueError("give either a point source u0 or a profile, not both")
        if self.profile is not None:
            prof = np.array(self.profile, dtype=complex).ravel()
            nrm = float(np.linalg.norm(prof))
            if abs(nrm - 1.0) >= RENORM_LIMIT:
                raise ValueError(f"profile norm is {nrm:.12g}, expected 1")
            if abs(nrm - 1.0) > 1e-12:
                prof = prof / nrm
            prof.setflags(write=False)
            object.__setattr__(self, "profile", prof)
        elif self.u0 is None:
            object.__setattr__(self, "u0", 0)
        if self.u0 is not None and self.u0 < 0:
            raise ValueError(f"point source index must be >= 0, got {self.u0}")


def build_state(
    spec: InitialStateSpec, lat: Lattice, basis_phi: float = WEYL_MAJORANA
) -> WalkerState:
    """Construct the separable walker state described by ``spec`` on ``lat``."""
    n = lat.n_sites
    if spec.profile is not None:
        if spec.profile.size != n:
            raise ValueError(
                f"profile has {spec.profile.size} entries, lattice has {n} sites"
            )
        profile = spec.profile
    else:
        if spec.u0 >= n:
            raise ValueError(f"point source u0={spec.u0} outside lattice of {n} sites")
        profile = np.zeros(n, dtype=complex)
        profile[spec.u0] = 1.0
    amps = np.empty((2, n), dtype=complex)
    amps[0] = math.cos(spec.theta0 / 2.0) * profile
    amps[1] = np.exp(1j * spec.phi0) * math.sin(spec.theta0 / 2.0) * profile
    return WalkerState(amps, lat, basis_phi)


def dirac_plane_wave(lat: Lattice, energy_sign: int) -> WalkerState:
    """Zero-momentum plane-wave energy eigenstate, in the all-real spinor basis.

    ``energy_sign`` +1 gives the spinor (1, i)/sqrt(2) on a uniform
    position superposition; -1 gives its complex conjugate (the
    negative-energy partner).
    """
    if energy_sign not in (1, -1):
        raise ValueError(f"energy_sign must be +1 or -1, got {energy_sign!r}")
    n = lat.n_sites
    spinor = np.array([1.0, 1j * energy_sign]) / math.sqrt(2.0)
    amps = np.outer(spinor, np.full(n, 1.0 / math.sqrt(n)))
    return WalkerState(amps, lat, WEYL_MAJORANA)


def majorana_plane_wave(lat: Lattice, delta: float) -> WalkerState:
    """Zero-momentum self-conjugate plane wave: real spinor (cos d, sin d) x uniform."""
    n = lat.n_sites
    spinor = np.array([math.cos(delta), math.sin(delta)], dtype=complex)
    amps = np.outer(spinor, np.full(n, 1.0 / math.sqrt(n)))
    return WalkerState(amps, lat, WEYL_MAJORANA)


def charge_conjugate(s: WalkerState) -> WalkerState:
    """Antiunitary charge conjugation in the state's own recorded basis.

    Applies diag(1, e^{2i(basis_phi - pi/2)}) to the complex-conjugated
    amplitudes: plain conjugation in the all-real basis (phi = pi/2),
    sigma_z times conjugation in the phi = 0 basis.
    """
    lam = s.basis_phi - WEYL_MAJORANA
    amps = np.conj(s.amplitudes)
    amps = amps.copy()
    amps[1] *= np.exp(2j * lam)
    return WalkerState(amps, s.lattice, s.basis_phi)


def majorana_residual(s: WalkerState) -> float:
    """Distance ||s - C(s)||_2 from the self-conjugacy condition; 0 iff satisfied."""
    return float(np.linalg.norm(s.amplitudes - charge_conjugate(s).amplitudes))


def change_basis(s: WalkerState, lam: float) -> WalkerState:
    """Re-express ``s`` in the spinor basis rotated by ``lam`` about z.

    The coin map is diag(1, e^{i lam}), the z-rotation by ``lam`` with its
    global phase fixed so that self-conjugate states stay exactly
    self-conjugate in the new basis.  ``basis_phi`` advances by ``lam``.
    """
    amps = s.amplitudes.copy()
    amps[1] *= np.exp(1j * lam)
    return WalkerState(amps, s.lattice, s.basis_phi + lam)


def inner_product(a: WalkerState, b: WalkerState) -> complex:
    """Hilbert-space inner product <a|b>; states must share a lattice."""
    if a.lattice != b.lattice:
        raise ValueError(
            f"lattice mismatch: {a.lattice.k} vs {b.lattice.k} position qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def state_to_json(s: WalkerState) -> dict:
    """JSON-ready dict {k, basis_phi, amplitudes} with [re, im] pairs.

    Amplitudes are listed chirality-major: all left-handed entries in
    register order, then all right-handed ones.
    """
    flat = s.amplitudes.reshape(-1)
    return {
        "k": s.lattice.k,
        "basis_phi": s.basis_phi,
        "amplitudes": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_from_json(data: dict) -> WalkerState:
    """Inverse of :func:`state_to_json`."""
    lat = Lattice(int(data["k"]))
    n = lat.n_sites
    pairs = data["amplitudes"]
    if len(pairs) != 2 * n:
        raise ValueError(f"expected {2 * n} amplitude pairs, got {len(pairs)}")
    flat = np.array([complex(re, im) for re, im in pairs])
    return WalkerState(flat.reshape(2, n), lat, float(data["basis_phi"]))
