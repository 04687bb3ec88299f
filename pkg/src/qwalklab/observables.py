"""
Observables of walk distributions and states.

Shannon entropy uses natural logarithms (nats); coin-position entanglement
uses base 2 (bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import integrate, stats

from .coins import CoinFamily, CoinParams, coin_from_params
from .walk import (
    Cycle,
    Distribution,
    InitialSpec,
    Line,
    Topology,
    WalkerState,
    evolve,
    init_pure,
    iter_evolve,
    position_distribution,
)

__all__ = [
    "MomentSummary",
    "MixingResult",
    "moments",
    "c_theta",
    "envelope_distribution",
    "envelope_variance",
    "mass_outside",
    "shannon_entropy",
    "recurrence_series",
    "recurrence_probability",
    "polya_number",
    "time_averaged_distribution",
    "max_deviation_from_uniform",
    "total_variation",
    "mixing_time",
    "coin_position_entanglement",
    "classical_walk_reference",
]


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    std: float


@dataclass(frozen=True)
class MixingResult:
    """``steps`` is ``None`` when the cap was reached without mixing."""

    steps: int | None
    cap: int
    distance: float

    @property
    def mixed(self) -> bool:
        return self.steps is not None


def moments(p: Distribution) -> MomentSummary:
    """Mean, variance and standard deviation of the site index."""
    j = p.sites.astype(np.float64)
    w = p.probs / p.probs.sum()
    mean = float(np.dot(w, j))
    var = float(np.dot(w, (j - mean) ** 2))
    var = max(var, 0.0)
    return MomentSummary(mean, var, math.sqrt(var))


def _line_walk(theta: float, t: int, family: CoinFamily, spec: InitialSpec | None = None) -> Distribution:
    coin = coin_from_params(CoinParams(0.0, theta, 0.0), family)
    state = init_pure(spec or InitialSpec.symmetric(), Line())
    return position_distribution(evolve(state, coin, t))


def c_theta(theta: float, t: int, family: CoinFamily = "u2") -> float:
    """``sigma^2 / t^2`` of the ``(0, theta, 0)`` walk from the symmetric start."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return moments(_line_walk(theta, t, family)).variance / t**2


def _envelope_k(theta: float, t: int) -> float:
    c = math.cos(theta)
    return (math.sqrt(t) / 2) * c * (1 + math.cos(2 * theta) ** 2) * (1 + math.sin(theta))


def envelope_distribution(theta: float, t: int) -> Distribution:
    """
    Envelope ``(1 + cos^2 2θ) e^{K (j^2/(t^2 cos^2 θ) - 1)} / sqrt(t)`` on the
    integer sites ``|j| <= t cos θ``, renormalized to sum to one.

    ``K = (sqrt(t)/2) cos θ (1 + cos^2 2θ)(1 + sin θ)``.
    """
    if not 0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    if t < 1:
        raise ValueError("t must be >= 1")
    width = t * math.cos(theta)
    half = int(math.floor(width + 1e-12))
    j = np.arange(-half, half + 1, dtype=np.int64)
    k = _envelope_k(theta, t)
    w = (1 + math.cos(2 * theta) ** 2) * np.exp(k * (j.astype(float) ** 2 / width**2 - 1)) / math.sqrt(t)
    return Distribution(j, w / w.sum())


def envelope_variance(theta: float, t: int, normalized: bool = True) -> float:
    """
    Variance of the continuous envelope on ``[-t cos θ, t cos θ]`` by quadrature.

    With ``normalized=False`` the raw second moment of the unnormalized
    envelope is returned instead.
    """
    width = t * math.cos(theta)
    k = _envelope_k(theta, t)
    pref = (1 + math.cos(2 * theta) ** 2) / math.sqrt(t)

    def f(x: float) -> float:
        return pref * math.exp(k * (x * x / width**2 - 1))

    second = integrate.quad(lambda x: x * x * f(x), -width, width)[0]
    if not normalized:
        return second
    return second / integrate.quad(f, -width, width)[0]


def mass_outside(p: Distribution, half_width: float) -> float:
    """Probability at sites with ``|j| > half_width``."""
    return float(p.probs[np.abs(p.sites) > half_width + 1e-12].sum())


def shannon_entropy(p: Distribution) -> float:
    """``-sum P log P`` in nats, with ``0 log 0 = 0``."""
    q = p.probs[p.probs > 0]
    return float(-np.sum(q * np.log(q)))


def recurrence_series(
    coin: NDArray[np.complex128],
    spec: InitialSpec,
    topo: Topology,
    t_max: int,
) -> NDArray[np.float64]:
    """``P_0(t)`` for ``t = 0 .. t_max`` (probability at the origin)."""
    state = init_pure(spec, topo)
    out = np.empty(t_max + 1)
    out[0] = 1.0
    for t, s in enumerate(iter_evolve(state, coin, t_max), start=1):
        k = s.index_of(spec.origin)
        out[t] = float(np.sum(np.abs(s.amps[:, k]) ** 2))
    return out


def recurrence_probability(
    coin: NDArray[np.complex128], spec: InitialSpec, topo: Topology, t: int
) -> float:
    """``P_0(t) = |psi_L(origin, t)|^2 + |psi_R(origin, t)|^2``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return float(recurrence_series(coin, spec, topo, t)[t])


def polya_number(
    coin: NDArray[np.complex128], spec: InitialSpec, topo: Topology, t_max: int = 500
) -> float:
    """Truncated ``1 - prod_{t=1..t_max} (1 - P_0(t))``."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    p0 = np.clip(recurrence_series(coin, spec, topo, t_max)[1:], 0.0, 1.0)
    return float(1.0 - np.prod(1.0 - p0))


def time_averaged_distribution(
    coin: NDArray[np.complex128], spec: InitialSpec, topo: Cycle, T: int
) -> Distribution:
    """``(1/T) sum_{tau=0}^{T-1} P(j, tau)`` on a cycle."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if not isinstance(topo, Cycle):
        raise ValueError("time averaging is defined on a cycle")
    state = init_pure(spec, topo)
    acc = position_distribution(state).probs.copy()
    for s in iter_evolve(state, coin, T - 1):
        acc += np.sum(np.abs(s.amps) ** 2, axis=0)
    return Distribution(state.sites, acc / T)


def max_deviation_from_uniform(p: Distribution) -> float:
    return float(np.max(np.abs(p.probs - 1.0 / len(p.probs))))


def total_variation(p: NDArray[np.float64], q: NDArray[np.float64]) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def mixing_time(
    coin: NDArray[np.complex128],
    spec: InitialSpec,
    topo: Cycle,
    epsilon: float,
    cap: int | None = None,
) -> MixingResult:
    """
    Smallest ``T`` whose time-averaged distribution is within total variation
    ``epsilon`` of uniform. The default cap is ``ceil(20 n ln n)``.

    Raises
    ------
    ValueError
        If ``epsilon <= 0``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    n = topo.n
    if cap is None:
        cap = int(math.ceil(20 * n * math.log(n)))
    uniform = np.full(n, 1.0 / n)
    state = init_pure(spec, topo)
    acc = position_distribution(state).probs.copy()
    dist = total_variation(acc, uniform)
    if dist <= epsilon:
        return MixingResult(1, cap, dist)
    for T, s in enumerate(iter_evolve(state, coin, cap - 1), start=2):
        acc += np.sum(np.abs(s.amps) ** 2, axis=0)
        dist = total_variation(acc / T, uniform)
        if dist <= epsilon:
            return MixingResult(T, cap, dist)
    return MixingResult(None, cap, dist)


def coin_position_entanglement(state: WalkerState) -> float:
    """Von Neumann entropy (bits) of the coin after tracing out position."""
    a = state.amps
    rho = a @ a.conj().T
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def classical_walk_reference(t: int) -> Distribution:
    """Unbiased classical walk after ``t`` steps on sites ``-t .. t``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    sites = np.arange(-t, t + 1, dtype=np.int64)
    probs = np.zeros(2 * t + 1)
    k = np.arange(t + 1)
    probs[2 * k] = stats.binom.pmf(k, t, 0.5)
    return Distribution(sites, probs)
