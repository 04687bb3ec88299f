"""
Continuous-time quantum walk reference.

The generator is the graph Laplacian scaled by the hopping rate ``gamma``:
``H_jj = d_j gamma`` and ``H_jk = -gamma`` for neighbours. States evolve by
``exp(-iHt)``, computed from the eigendecomposition of ``H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .walk import Distribution

__all__ = [
    "Generator",
    "line_generator",
    "cycle_generator",
    "evolve_ct",
    "line_distribution",
]


@dataclass(frozen=True)
class Generator:
    """Real symmetric generator over ``sites`` sites."""

    matrix: NDArray[np.float64]
    gamma: float
    kind: str = "line"

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eig(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return np.linalg.eigh(self.matrix)

    def spectrum(self) -> NDArray[np.float64]:
        return self._eig[0]

    def propagator(self, t: float) -> NDArray[np.complex128]:
        w, v = self._eig
        return (v * np.exp(-1j * w * t)) @ v.T


def _check(sites: int, gamma: float) -> None:
    if int(sites) != sites or sites < 2:
        raise ValueError("need at least 2 sites")
    if not gamma > 0:
        raise ValueError("gamma must be > 0")


def line_generator(sites: int, gamma: float) -> Generator:
    """Tridiagonal ``(-gamma, 2 gamma, -gamma)``; the two end rows have diagonal ``gamma``."""
    _check(sites, gamma)
    h = np.zeros((sites, sites))
    idx = np.arange(sites - 1)
    h[idx, idx + 1] = h[idx + 1, idx] = -gamma
    h[np.diag_indices(sites)] = 2 * gamma
    h[0, 0] = h[-1, -1] = gamma
    return Generator(h, gamma, "line")


def cycle_generator(sites: int, gamma: float) -> Generator:
    """Circulant ``(2 gamma, -gamma, 0, ..., 0, -gamma)``."""
    _check(sites, gamma)
    if sites == 2:
        # both neighbours coincide: a single edge of weight 2
        h = np.array([[2 * gamma, -2 * gamma], [-2 * gamma, 2 * gamma]])
        return Generator(h, gamma, "cycle")
    h = 2 * gamma * np.eye(sites)
    j = np.arange(sites)
    h[j, (j + 1) % sites] = -gamma
    h[j, (j - 1) % sites] = -gamma
    return Generator(h, gamma, "cycle")


def evolve_ct(psi0: NDArray[np.complex128], gen: Generator, t: float) -> NDArray[np.complex128]:
    """
    ``exp(-iHt) psi0``.

    Raises
    ------
    ValueError
        If ``psi0`` has the wrong length or is not normalized.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (gen.size,):
        raise ValueError(f"state length {psi0.shape} does not match generator size {gen.size}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    return gen.propagator(t) @ psi0


def line_distribution(gamma: float, t: float, boundary_tol: float = 1e-8) -> Distribution:
    """
    Distribution of a walker started at site 0 of an effectively infinite line.

    The segment ``[-h, h]`` starts at ``h = ceil(2 gamma t) + 10`` (the front
    moves at speed ``2 gamma``) and doubles until the mass on the outer tenth
    of the segment is below ``boundary_tol``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    half = int(math.ceil(2 * gamma * t)) + 10
    while True:
        n = 2 * half + 1
        psi0 = np.zeros(n, dtype=np.complex128)
        psi0[half] = 1.0
        p = np.abs(evolve_ct(psi0, line_generator(n, gamma), t)) ** 2
        edge = max(1, n // 10)
        if p[:edge].sum() + p[-edge:].sum() < boundary_tol:
            return Distribution(np.arange(-half, half + 1, dtype=np.int64), p)
        half *= 2
