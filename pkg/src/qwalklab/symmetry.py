"""
Symmetry operations on the walk and the diagnostics used to test them.

A symmetry operation is a coin-space unitary inserted after each walk step
(``Z``, ``X``, ``Φ(φ)``, ``G(β)``) or, for PRX, the angular reflection of the
coin plus an ``X`` insertion and a parity flip of the reported distribution.
On a line all of them leave ``P(j)`` unchanged, with or without coin noise; on
a cycle ``G(β)`` does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .channels import KrausChannel
from .coins import (
    PAULI_X,
    PAULI_Z,
    CoinFamily,
    CoinParams,
    coin_from_params,
    phase_shift,
    reflect_params,
)
from .walk import (
    Cycle,
    DensityState,
    Distribution,
    InitialSpec,
    Topology,
    init_density,
    position_distribution,
    step_density,
)

__all__ = [
    "SymKind",
    "SymmetryOp",
    "StepPlan",
    "SymmetryReport",
    "TurnPoint",
    "apply_symmetry",
    "kolmogorov_distance",
    "symmetry_report",
    "coherence_function",
    "turn_series",
    "SYMMETRIC_TOL",
]

SYMMETRIC_TOL = 1e-8


class SymKind(str, Enum):
    PAULI_Z = "Z"
    PAULI_X = "X"
    PHASE_SHIFT = "phase"
    PRX = "PRX"
    PHASE_GATE = "G"


@dataclass(frozen=True)
class SymmetryOp:
    """
    A per-step symmetry operation.

    ``angle`` is the ``φ`` of ``Φ(φ)`` or the ``β`` of ``G(β)`` in radians;
    both are the matrix ``diag(1, e^{i angle})``.
    """

    kind: SymKind
    angle: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SymKind(self.kind))
        if not math.isfinite(self.angle):
            raise ValueError("symmetry angle must be finite")

    @classmethod
    def parse(cls, name: str, angle: float = 0.0) -> "SymmetryOp":
        """Build from a name such as ``"Z"``, ``"PRX"``, ``"G"`` or ``"phase"``."""
        key = name.strip()
        aliases = {"z": "Z", "x": "X", "prx": "PRX", "g": "G", "phase": "phase", "phi": "phase"}
        if key.lower() not in aliases:
            raise ValueError(f"unknown symmetry operation {name!r}")
        return cls(SymKind(aliases[key.lower()]), angle)

    def matrix(self) -> NDArray[np.complex128]:
        """Coin-space unitary inserted after each step."""
        if self.kind is SymKind.PAULI_Z:
            return PAULI_Z.copy()
        if self.kind in (SymKind.PAULI_X, SymKind.PRX):
            return PAULI_X.copy()
        return phase_shift(self.angle)


@dataclass(frozen=True)
class StepPlan:
    """Coin, post-shift insertion and report-time parity flag for one walk."""

    coin: NDArray[np.complex128]
    post: NDArray[np.complex128] | None
    reverse: bool = False


@dataclass(frozen=True)
class SymmetryReport:
    baseline: Distribution
    augmented: Distribution
    kolmogorov: float
    symmetric: bool


@dataclass(frozen=True)
class TurnPoint:
    """One row of a cycle turn series."""

    tau: int
    steps: int
    d_noisy: float
    d_noiseless: float
    d_ratio: float
    coherence_ratio: float


def apply_symmetry(
    coin: CoinParams | NDArray[np.complex128],
    op: SymmetryOp,
    family: CoinFamily = "u2",
) -> StepPlan:
    """
    Return the step plan of the ``op``-augmented walk.

    PRX needs the Euler angles, since it maps ``(xi, theta, zeta)`` to
    ``(-zeta, pi/2 - theta, -xi)``; other operations accept a raw matrix.
    """
    if isinstance(coin, CoinParams):
        base = coin_from_params(coin, family)
    else:
        base = np.asarray(coin, dtype=np.complex128)
    if op.kind is SymKind.PRX:
        if not isinstance(coin, CoinParams):
            raise ValueError("PRX needs CoinParams, not a bare matrix")
        return StepPlan(coin_from_params(reflect_params(coin), family), op.matrix(), True)
    return StepPlan(base, op.matrix(), False)


def kolmogorov_distance(p: Distribution, q: Distribution) -> float:
    """
    ``(1/2) sum_j |P(j) - Q(j)|``.

    Raises
    ------
    ValueError
        If the two distributions are not over the same sites.
    """
    if p.sites.shape != q.sites.shape or not np.array_equal(p.sites, q.sites):
        raise ValueError("distributions are over different site sets")
    return float(0.5 * np.sum(np.abs(p.probs - q.probs)))


def _report_distribution(rho: DensityState, plan: StepPlan, origin: int) -> Distribution:
    d = position_distribution(rho)
    if not plan.reverse:
        return d
    n = rho.topology.n if isinstance(rho.topology, Cycle) else None
    return d.reflected(origin, n)


def symmetry_report(
    coin: CoinParams | NDArray[np.complex128],
    op: SymmetryOp,
    topo: Topology,
    steps: int,
    channel: KrausChannel | None = None,
    spec: InitialSpec | None = None,
    family: CoinFamily = "u2",
) -> SymmetryReport:
    """
    Run the plain and ``op``-augmented walks and compare their distributions.

    Both runs use density evolution so that noisy and noiseless cases share
    one code path.
    """
    if spec is None:
        spec = InitialSpec.symmetric()
    base_coin = coin_from_params(coin, family) if isinstance(coin, CoinParams) else np.asarray(coin)
    plan = apply_symmetry(coin, op, family)
    rho_a = init_density(spec, topo)
    rho_b = rho_a
    for _ in range(steps):
        rho_a = step_density(rho_a, base_coin, channel)
        rho_b = step_density(rho_b, plan.coin, channel, plan.post)
    base = position_distribution(rho_a)
    aug = _report_distribution(rho_b, plan, spec.origin)
    d = kolmogorov_distance(base, aug)
    return SymmetryReport(base, aug, d, d <= SYMMETRIC_TOL)


def _separations(topo: Topology, n_sites: int) -> tuple[NDArray[np.int64], int]:
    j = np.arange(n_sites)
    sep = np.abs(j[:, None] - j[None, :])
    if isinstance(topo, Cycle):
        sep = np.minimum(sep, topo.n - sep)
        return sep, (topo.n - 1) // 2 if topo.n > 2 else 1
    return sep, max(n_sites - 1, 1)


def coherence_function(rho: DensityState, bins: int) -> tuple[NDArray[np.float64], float]:
    """
    Off-diagonal mass ``sum |rho_{aj,bk}|`` binned by position separation.

    Separations ``0 .. s`` (``s = (n-1)/2`` on a cycle, the window width on a
    line) are split into ``bins`` intervals of width ``s / bins``; the coin
    coherences at equal position land in bin 0.

    Returns
    -------
    per_bin : ndarray, shape (bins,)
    total : float

    Raises
    ------
    ValueError
        If ``bins < 1`` or ``bins`` exceeds the number of sites.
    """
    L = rho.n_sites
    if bins < 1 or bins > L:
        raise ValueError(f"bins must lie in [1, {L}], got {bins}")
    mag = np.abs(rho.tensor())
    # sum over coin indices, then drop the true diagonal
    pos = mag.sum(axis=(0, 2))
    pos[np.diag_indices(L)] -= np.einsum("ajaj->j", mag)
    sep, s = _separations(rho.topology, L)
    idx = np.minimum((sep * bins) // s, bins - 1)
    per_bin = np.bincount(idx.ravel(), weights=pos.ravel(), minlength=bins)[:bins]
    return per_bin, float(per_bin.sum())


def turn_series(
    coin: CoinParams | NDArray[np.complex128],
    op: SymmetryOp,
    n: int,
    tau_max: int,
    channel: KrausChannel | None = None,
    spec: InitialSpec | None = None,
    family: CoinFamily = "u2",
) -> list[TurnPoint]:
    """
    Kolmogorov distance and coherence after ``tau = 1 .. tau_max`` turns on ``Cycle(n)``.

    A turn is ``s = (n - 1) / 2`` steps. ``d_ratio`` is the noisy distance over
    the noiseless one and ``coherence_ratio`` the noisy total coherence over
    the noiseless one, both at the same ``tau`` (``nan`` when the denominator
    vanishes).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("turn series expects an odd cycle size n = 2s + 1 >= 3")
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    s = (n - 1) // 2
    topo = Cycle(n)
    if spec is None:
        spec = InitialSpec.symmetric()
    base_coin = coin_from_params(coin, family) if isinstance(coin, CoinParams) else np.asarray(coin)
    plan = apply_symmetry(coin, op, family)
    start = init_density(spec, topo)
    runs = {
        ("plain", False): start,
        ("aug", False): start,
        ("plain", True): start,
        ("aug", True): start,
    }
    out: list[TurnPoint] = []
    for t in range(1, tau_max * s + 1):
        for (which, noisy), rho in runs.items():
            ch = channel if noisy else None
            if which == "plain":
                runs[(which, noisy)] = step_density(rho, base_coin, ch)
            else:
                runs[(which, noisy)] = step_density(rho, plan.coin, ch, plan.post)
        if t % s:
            continue
        d = {}
        for noisy in (False, True):
            base = position_distribution(runs[("plain", noisy)])
            aug = _report_distribution(runs[("aug", noisy)], plan, spec.origin)
            d[noisy] = kolmogorov_distance(base, aug)
        c0 = coherence_function(runs[("plain", False)], 1)[1]
        c1 = coherence_function(runs[("plain", True)], 1)[1]
        out.append(
            TurnPoint(
                tau=t // s,
                steps=t,
                d_noisy=d[True],
                d_noiseless=d[False],
                d_ratio=d[True] / d[False] if d[False] > 1e-12 else float("nan"),
                coherence_ratio=c1 / c0 if c0 > 1e-12 else float("nan"),
            )
        )
    return out
