"""Single-qubit coin operators for the lattice Dirac walk.

The coin family implemented here is B(theta, phi) = Rz(phi) Rx(theta)
Rz(phi)^dagger: a rotation by theta about the Bloch-sphere axis
(cos phi, sin phi, 0).  theta encodes the particle mass (m = theta / 2 in
lattice units where the time step is 1) and phi selects the spinor basis.
phi = 0 rotates about x (the Weyl-Dirac basis) and phi = pi/2 rotates
about y (the Weyl-Majorana basis, in which every matrix entry is real).

Restricting the rotation axis to the x-y plane is exactly the condition
under which the coin, combined with the conditional shift, reproduces a
relativistic (Lorentz-covariant) single-particle evolution on the lattice;
``gamma_check`` verifies the underlying Clifford-algebra constraint for
any axis angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAU = 2.0 * math.pi

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

UNITARY_TOL = 1e-12
ANGLE_TOL = 1e-12


def rx(theta: float) -> np.ndarray:
    """Rotation by ``theta`` about the x axis of the coin Bloch sphere."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    """Rotation by ``theta`` about the y axis; real for every ``theta``."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(phi: float) -> np.ndarray:
    """Rotation by ``phi`` about the z axis, exp(-i phi sigma_z / 2)."""
    return np.array(
        [[np.exp(-0.5j * phi), 0.0], [0.0, np.exp(0.5j * phi)]]
    )


@dataclass(frozen=True)
class CoinSpec:
    """Coin parameters: mass angle ``theta`` and basis angle ``phi``.

    Both angles are radians and are reduced mod 2*pi on construction.
    The particle mass in lattice units is ``theta / 2``.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("coin angles must be finite")
        object.__setattr__(self, "theta", self.theta % TAU)
        object.__setattr__(self, "phi", self.phi % TAU)

    @property
    def mass(self) -> float:
        return self.theta / 2.0

    def half_angle(self) -> "CoinSpec":
        """The coin with half the mass angle; its matrix squares to this one's."""
        return CoinSpec(self.theta / 2.0, self.phi)

    def is_identity(self) -> bool:
        """True when the coin matrix does not depend on phi (zero rotation)."""
        return abs(math.sin(self.theta / 2.0)) < ANGLE_TOL


def coin_matrix(spec: CoinSpec) -> np.ndarray:
    """The 2x2 coin unitary for ``spec``.

    Entries are [[cos(t/2), -i e^{-i phi} sin(t/2)],
                 [-i e^{i phi} sin(t/2), cos(t/2)]],
    which equals Rz(phi) Rx(theta) Rz(phi)^dagger and has determinant 1.
    """
    c = math.cos(spec.theta / 2.0)
    s = math.sin(spec.theta / 2.0)
    ph = np.exp(-1j * spec.phi)
    return np.array([[c, -1j * ph * s], [-1j * np.conj(ph) * s, c]])


def conjugate_coin(coin: np.ndarray, lam: float) -> np.ndarray:
    """Rotate the coin's axis by ``lam`` about z: Rz(lam) @ coin @ Rz(lam)^dagger."""
    v = rz(lam)
    return v @ coin @ v.conj().T


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (2, 2):
        return False
    gram_ok = np.allclose(matrix.conj().T @ matrix, IDENTITY2, atol=tol)
    det_ok = abs(abs(np.linalg.det(matrix)) - 1.0) <= tol
    return bool(gram_ok and det_ok)


def gamma_check(phi: float, tol: float = UNITARY_TOL) -> bool:
    """Verify the Clifford-algebra constraint for the axis angle ``phi``.

    Builds g0 = cos(phi) sigma_x + sin(phi) sigma_y, derives g1 from the
    fixed chirality convention g0 g1 = -sigma_z (g0 squares to the
    identity, so g1 = -g0 sigma_z), and checks the anti-commutators
    {g_mu, g_nu} = 2 diag(1, -1)[mu, nu] * I within ``tol``.
    """
    g0 = math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y
    g1 = -g0 @ SIGMA_Z
    metric = ((1.0, 0.0), (0.0, -1.0))
    gammas = (g0, g1)
    for mu in range(2):
        for nu in range(2):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            expected = 2.0 * metric[mu][nu] * IDENTITY2
            if not np.allclose(anti, expected, atol=tol):
                return False
    return True
