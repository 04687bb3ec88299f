"""
Two-level coin operators for discrete-time quantum walks.

All constructors return fresh ``(2, 2)`` complex128 arrays. Angles are in
radians. Two three-angle families are provided:

- ``su2_coin``: the Euler-angle SU(2) element ``B(xi, theta, zeta)``
- ``u2_coin_prime``: the U(2) variant ``B'(xi, theta, zeta) = Z @ B(xi, theta, zeta)``,
  which equals the Hadamard matrix at ``(0, pi/4, 0)``

Both families give identical position statistics (``Z`` commutes with the
conditional shift), so callers may use either.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "CoinParams",
    "GeneralCoinParams",
    "KgParameters",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "IDENTITY",
    "su2_coin",
    "u2_coin_prime",
    "u2_general",
    "hadamard",
    "coin_from_params",
    "coin_variant",
    "phase_shift",
    "reflect_params",
    "kg_parameters",
    "is_unitary",
]

TWO_PI = 2.0 * math.pi
UNITARY_TOL = 1e-12

IDENTITY = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

CoinFamily = Literal["su2", "u2"]


def _normalize(angle: float) -> float:
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod can land exactly on 2*pi after the shift for tiny negative input
    return 0.0 if a >= TWO_PI else a


@dataclass(frozen=True)
class CoinParams:
    """Euler angles ``(xi, theta, zeta)`` of a three-parameter coin, radians in [0, 2pi)."""

    xi: float = 0.0
    theta: float = math.pi / 4
    zeta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", _normalize(float(self.xi)))
        object.__setattr__(self, "theta", _normalize(float(self.theta)))
        object.__setattr__(self, "zeta", _normalize(float(self.zeta)))

    @classmethod
    def from_degrees(cls, xi: float = 0.0, theta: float = 45.0, zeta: float = 0.0) -> "CoinParams":
        return cls(math.radians(xi), math.radians(theta), math.radians(zeta))


@dataclass(frozen=True)
class GeneralCoinParams:
    """Parameters of ``exp(i zeta) exp(i alpha X) exp(i beta Y) exp(i gamma Z)``."""

    zeta: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self) -> None:
        for name in ("zeta", "alpha", "beta", "gamma"):
            object.__setattr__(self, name, _normalize(float(getattr(self, name))))


@dataclass(frozen=True)
class KgParameters:
    """Effective light speed and mass of the Klein-Gordon form of the walk."""

    light_speed_equiv: float
    mass_equiv: float


def su2_coin(p: CoinParams) -> NDArray[np.complex128]:
    """
    Return the SU(2) coin ``B(xi, theta, zeta)``.

    ``[[e^{i xi} cos(theta), e^{i zeta} sin(theta)],
    [-e^{-i zeta} sin(theta), e^{-i xi} cos(theta)]]``
    """
    c, s = math.cos(p.theta), math.sin(p.theta)
    return np.array(
        [
            [np.exp(1j * p.xi) * c, np.exp(1j * p.zeta) * s],
            [-np.exp(-1j * p.zeta) * s, np.exp(-1j * p.xi) * c],
        ],
        dtype=np.complex128,
    )


def u2_coin_prime(p: CoinParams) -> NDArray[np.complex128]:
    """
    Return the U(2) coin ``B'(xi, theta, zeta)``.

    ``[[e^{i xi} cos(theta), e^{i zeta} sin(theta)],
    [e^{-i zeta} sin(theta), -e^{-i xi} cos(theta)]]``

    ``(0, pi/4, 0)`` gives the Hadamard matrix, ``(0, 0, 0)`` Pauli Z and
    ``(0, pi/2, 0)`` Pauli X.
    """
    c, s = math.cos(p.theta), math.sin(p.theta)
    return np.array(
        [
            [np.exp(1j * p.xi) * c, np.exp(1j * p.zeta) * s],
            [np.exp(-1j * p.zeta) * s, -np.exp(-1j * p.xi) * c],
        ],
        dtype=np.complex128,
    )


def _exp_i_pauli(a: float, pauli: NDArray[np.complex128]) -> NDArray[np.complex128]:
    # exp(i a sigma) = cos(a) 1 + i sin(a) sigma for any Pauli matrix
    return math.cos(a) * IDENTITY + 1j * math.sin(a) * pauli


def u2_general(p: GeneralCoinParams) -> NDArray[np.complex128]:
    """Return ``exp(i zeta) exp(i alpha X) exp(i beta Y) exp(i gamma Z)``."""
    m = _exp_i_pauli(p.alpha, PAULI_X) @ _exp_i_pauli(p.beta, PAULI_Y) @ _exp_i_pauli(p.gamma, PAULI_Z)
    return np.exp(1j * p.zeta) * m


def hadamard() -> NDArray[np.complex128]:
    """Return ``(1/sqrt(2)) [[1, 1], [1, -1]]``."""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def coin_from_params(p: CoinParams, family: CoinFamily = "u2") -> NDArray[np.complex128]:
    """Build a coin of the requested family from Euler angles."""
    if family == "su2":
        return su2_coin(p)
    if family == "u2":
        return u2_coin_prime(p)
    raise ValueError(f"unknown coin family {family!r}; expected 'su2' or 'u2'")


def phase_shift(phi: float) -> NDArray[np.complex128]:
    """Return ``diag(1, e^{i phi})``."""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * phi)]], dtype=np.complex128)


def coin_variant(b: NDArray[np.complex128], variant: int, phi: float) -> NDArray[np.complex128]:
    """
    Return the phase-decorated coin ``B^(f)`` for ``f`` in ``{1, 2, 3, 4}``.

    Entry ``(q, r)`` of ``b`` is multiplied by ``e^{i q phi}``, ``e^{i r phi}``,
    ``e^{i (1-q) phi}`` or ``e^{i (1-r) phi}`` respectively.

    Variants 1 and 3 are ``Φ(φ) B`` up to a global phase; since ``Φ``
    commutes with the shift they reproduce the position distribution of ``B``
    from any start. Variants 2 and 4 are ``B Φ(±φ)`` up to a global phase, so
    their walk equals the plain walk started from ``Φ(±φ) ψ0``; the
    distribution is unchanged only for coin-basis starts and their
    incoherent mixtures.

    Raises
    ------
    ValueError
        If ``variant`` is not 1, 2, 3 or 4.
    """
    if variant not in (1, 2, 3, 4):
        raise ValueError(f"coin variant must be 1, 2, 3 or 4 (got {variant!r})")
    q = np.array([[0, 0], [1, 1]])
    r = q.T
    exponent = {1: q, 2: r, 3: 1 - q, 4: 1 - r}[variant]
    return np.asarray(b, dtype=np.complex128) * np.exp(1j * phi * exponent)


def reflect_params(p: CoinParams) -> CoinParams:
    """Angular reflection: ``theta -> pi/2 - theta`` and ``xi <-> -zeta``."""
    return CoinParams(xi=-p.zeta, theta=math.pi / 2 - p.theta, zeta=-p.xi)


def kg_parameters(theta: float) -> KgParameters:
    """
    Effective light speed ``sqrt(cos theta)`` and mass
    ``sqrt(2 (sec theta - 1) / cos theta)`` of the decoupled walk.

    Raises
    ------
    ValueError
        If ``theta`` is outside ``[0, pi/2)``; ``sec`` diverges at ``pi/2``.
    """
    if not (0.0 <= theta < math.pi / 2) or math.isclose(theta, math.pi / 2):
        raise ValueError(f"theta must lie in [0, pi/2), got {theta!r}")
    c = math.cos(theta)
    mass = math.sqrt(max(2.0 * (1.0 / c - 1.0), 0.0) / c)
    return KgParameters(light_speed_equiv=math.sqrt(c), mass_equiv=mass)


def is_unitary(m: NDArray[np.complex128], atol: float = UNITARY_TOL) -> bool:
    """Check ``max |M^dagger M - 1| <= atol``."""
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)
