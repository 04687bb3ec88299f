"""
Coined discrete-time quantum walk on a line or an n-cycle.

One step is ``W = S (B ⊗ 1)``: the coin ``B`` acts on every site, then the
conditional shift moves the coin ``|0⟩`` component to ``j - 1`` and the ``|1⟩``
component to ``j + 1`` (modulo ``n`` on a cycle). Optional per-step coin-space
unitaries (symmetry insertions) act after the shift.

Pure states are stored as a ``(2, L)`` amplitude array, density states as a
``(2L, 2L)`` matrix in (coin ⊗ position) order. On a line the site window
starts at the origin and grows by one site on each side per step, so after
``t`` steps it is exactly ``[origin - t, origin + t]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .coins import CoinParams, coin_from_params, CoinFamily

__all__ = [
    "Line",
    "Cycle",
    "Topology",
    "InitialSpec",
    "WalkerState",
    "DensityState",
    "Distribution",
    "init_pure",
    "init_density",
    "step",
    "evolve",
    "iter_evolve",
    "position_distribution",
    "step_density",
    "evolve_density",
    "randomized_evolve",
    "apply_kraus",
]

NORM_TOL = 1e-10

NoiseStage = Literal["after_shift", "before_shift"]


@dataclass(frozen=True)
class Line:
    """Unbounded line; the stored window grows with the step count."""

    kind: str = field(default="line", init=False)


@dataclass(frozen=True)
class Cycle:
    """Closed ring of ``n`` sites labelled ``0 .. n-1``."""

    n: int
    kind: str = field(default="cycle", init=False)

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"cycle size must be an integer >= 2, got {self.n!r}")


Topology = Union[Line, Cycle]


@dataclass(frozen=True)
class InitialSpec:
    """Localized start ``cos(delta)|0⟩ + e^{i eta} sin(delta)|1⟩`` at ``origin``."""

    delta: float = math.pi / 4
    eta: float = math.pi / 2
    origin: int = 0

    @classmethod
    def symmetric(cls, origin: int = 0) -> "InitialSpec":
        """The left-right symmetric start ``(|0⟩ + i|1⟩)/sqrt(2)``."""
        return cls(math.pi / 4, math.pi / 2, origin)

    def coin_vector(self) -> NDArray[np.complex128]:
        return np.array(
            [math.cos(self.delta), np.exp(1j * self.eta) * math.sin(self.delta)],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class Distribution:
    """Position distribution ``P(j)`` over integer ``sites`` (ascending)."""

    sites: NDArray[np.int64]
    probs: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.sites.shape != self.probs.shape:
            raise ValueError("sites and probs must have equal shape")

    def total(self) -> float:
        return float(self.probs.sum())

    def as_dict(self) -> dict[int, float]:
        return {int(s): float(p) for s, p in zip(self.sites, self.probs)}

    def at(self, site: int) -> float:
        idx = np.searchsorted(self.sites, site)
        if idx < len(self.sites) and self.sites[idx] == site:
            return float(self.probs[idx])
        return 0.0

    def reflected(self, center: int = 0, n: int | None = None) -> "Distribution":
        """
        Spatial inversion ``j -> 2*center - j`` (taken mod ``n`` on a cycle).
        """
        new_sites = 2 * center - self.sites
        if n is not None:
            new_sites = np.mod(new_sites, n)
        order = np.argsort(new_sites, kind="stable")
        return Distribution(new_sites[order].astype(np.int64), self.probs[order].copy())


@dataclass(frozen=True)
class WalkerState:
    """
    Pure walker state.

    Attributes
    ----------
    topology : Line or Cycle
    offset : int
        Site label of column 0 of ``amps`` (always 0 on a cycle).
    amps : ndarray, shape (2, L)
        Row 0 holds ``psi_L`` (coin ``|0⟩``), row 1 holds ``psi_R`` (coin ``|1⟩``).
    step_count : int
    """

    topology: Topology
    offset: int
    amps: NDArray[np.complex128]
    step_count: int = 0

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(self.offset, self.offset + self.amps.shape[1], dtype=np.int64)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def index_of(self, site: int) -> int:
        if isinstance(self.topology, Cycle):
            return int(site) % self.topology.n
        idx = int(site) - self.offset
        if not 0 <= idx < self.amps.shape[1]:
            raise IndexError(f"site {site} is outside the stored window")
        return idx

    def vector(self) -> NDArray[np.complex128]:
        """Flattened state in (coin ⊗ position) order."""
        return self.amps.reshape(-1)


@dataclass(frozen=True)
class DensityState:
    """Density matrix over (coin ⊗ position), dimension ``2L``."""

    topology: Topology
    offset: int
    matrix: NDArray[np.complex128]
    step_count: int = 0

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(self.offset, self.offset + self.n_sites, dtype=np.int64)

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def tensor(self) -> NDArray[np.complex128]:
        """View as a ``(2, L, 2, L)`` array indexed ``[a, j, b, k]``."""
        L = self.n_sites
        return self.matrix.reshape(2, L, 2, L)

    def coin_reduced(self) -> NDArray[np.complex128]:
        """Partial trace over position."""
        return np.einsum("ajbj->ab", self.tensor())


def _check_origin(spec: InitialSpec, topo: Topology) -> None:
    if isinstance(topo, Cycle) and not 0 <= spec.origin < topo.n:
        raise ValueError(f"origin {spec.origin} outside cycle of size {topo.n}")


def init_pure(spec: InitialSpec, topo: Topology) -> WalkerState:
    """
    Localized initial state.

    Raises
    ------
    ValueError
        If the origin is not a site of the cycle.
    """
    _check_origin(spec, topo)
    if isinstance(topo, Cycle):
        amps = np.zeros((2, topo.n), dtype=np.complex128)
        amps[:, spec.origin] = spec.coin_vector()
        return WalkerState(topo, 0, amps, 0)
    amps = spec.coin_vector().reshape(2, 1).copy()
    return WalkerState(topo, int(spec.origin), amps, 0)


def init_density(spec: InitialSpec, topo: Topology) -> DensityState:
    """Rank-one density matrix ``|psi⟩⟨psi|`` of the localized start."""
    psi = init_pure(spec, topo)
    v = psi.vector()
    return DensityState(topo, psi.offset, np.outer(v, v.conj()), 0)


def _as_matrix(m: NDArray[np.complex128] | None) -> NDArray[np.complex128] | None:
    if m is None:
        return None
    a = np.asarray(m, dtype=np.complex128)
    if a.shape != (2, 2):
        raise ValueError(f"coin-space operator must be 2x2, got shape {a.shape}")
    return a


def _shift_pure(b: NDArray[np.complex128], topo: Topology, offset: int) -> tuple[NDArray[np.complex128], int]:
    if isinstance(topo, Cycle):
        out = np.empty_like(b)
        out[0] = np.roll(b[0], -1)
        out[1] = np.roll(b[1], 1)
        return out, 0
    L = b.shape[1]
    out = np.zeros((2, L + 2), dtype=np.complex128)
    out[0, 0:L] = b[0]
    out[1, 2 : L + 2] = b[1]
    return out, offset - 1


def step(
    state: WalkerState,
    coin: NDArray[np.complex128],
    post: NDArray[np.complex128] | None = None,
) -> WalkerState:
    """
    One walk step: coin on every site, conditional shift, then ``post``.

    Parameters
    ----------
    state : WalkerState
    coin : (2, 2) array
    post : (2, 2) array, optional
        Coin-space unitary applied after the shift (a symmetry insertion).
    """
    coin = _as_matrix(coin)
    amps, offset = _shift_pure(coin @ state.amps, state.topology, state.offset)
    post = _as_matrix(post)
    if post is not None:
        amps = post @ amps
    return WalkerState(state.topology, offset, amps, state.step_count + 1)


def iter_evolve(
    state: WalkerState,
    coin: NDArray[np.complex128],
    steps: int,
    per_step: Sequence[NDArray[np.complex128]] | None = None,
) -> Iterable[WalkerState]:
    """Yield the state after each of ``steps`` steps (the start is not yielded)."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    post = _compose(per_step)
    for _ in range(steps):
        state = step(state, coin, post)
        yield state


def _compose(per_step: Sequence[NDArray[np.complex128]] | None) -> NDArray[np.complex128] | None:
    # first listed operator acts first
    if not per_step:
        return None
    m = np.eye(2, dtype=np.complex128)
    for op in per_step:
        m = _as_matrix(op) @ m
    return m


def evolve(
    state: WalkerState,
    coin: NDArray[np.complex128],
    steps: int,
    per_step: Sequence[NDArray[np.complex128]] | None = None,
) -> WalkerState:
    """Apply ``steps`` walk steps, each followed by the ``per_step`` operators in order."""
    for state in iter_evolve(state, coin, steps, per_step):
        pass
    return state


def position_distribution(state: WalkerState | DensityState) -> Distribution:
    """``P(j)`` summed over the coin."""
    if isinstance(state, DensityState):
        d = np.real(np.diagonal(state.matrix)).reshape(2, -1).sum(axis=0)
    else:
        d = np.sum(np.abs(state.amps) ** 2, axis=0)
    return Distribution(state.sites, np.clip(d, 0.0, None))


def apply_kraus(
    t: NDArray[np.complex128], operators: Sequence[NDArray[np.complex128]]
) -> NDArray[np.complex128]:
    """``sum_x (E_x ⊗ 1) rho (E_x ⊗ 1)^dagger`` on a ``(2, L, 2, L)`` tensor."""
    out = np.zeros_like(t)
    for e in operators:
        out += np.einsum("ab,bjcl,dc->ajdl", e, t, e.conj(), optimize=True)
    return out


def _conj_coin(t: NDArray[np.complex128], m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    return np.einsum("ab,bjcl,dc->ajdl", m, t, m.conj(), optimize=True)


def _shift_density(t: NDArray[np.complex128], topo: Topology) -> NDArray[np.complex128]:
    if isinstance(topo, Cycle):
        out = np.empty_like(t)
        shifts = (-1, 1)
        for a in range(2):
            for b in range(2):
                out[a, :, b, :] = np.roll(t[a, :, b, :], (shifts[a], shifts[b]), axis=(0, 1))
        return out
    L = t.shape[1]
    out = np.zeros((2, L + 2, 2, L + 2), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            out[a, 2 * a : 2 * a + L, b, 2 * b : 2 * b + L] = t[a, :, b, :]
    return out


def step_density(
    rho: DensityState,
    coin: NDArray[np.complex128],
    channel: "object | None" = None,
    sym: NDArray[np.complex128] | None = None,
    sym_first: bool = True,
    noise_stage: NoiseStage = "after_shift",
) -> DensityState:
    """
    One noisy step: ``W rho W^dagger``, the coin-space ``sym`` conjugation and
    the Kraus sum on the coin.

    ``channel`` is any object with an ``operators`` sequence of 2x2 matrices
    (a :class:`~qwalklab.channels.KrausChannel`). With ``sym_first`` (default)
    the step is ``E_x sym S B``; this is the order under which the PRX
    symmetry survives non-unital damping. ``sym_first=False`` applies ``sym``
    after the channel.

    ``noise_stage="before_shift"`` moves the channel and ``sym`` between the
    coin and the shift, giving ``S E_x sym B``. This is the ordering of the
    shift-then-coin convention ``W = (B ⊗ 1) S`` read from the second step
    on, and it is the one under which a per-step flip reverses the drift of
    amplitude damping.

    Raises
    ------
    ValueError
        If the channel operators violate completeness.
    """
    if noise_stage not in ("after_shift", "before_shift"):
        raise ValueError(f"unknown noise stage {noise_stage!r}")
    coin = _as_matrix(coin)
    t = _conj_coin(rho.tensor(), coin)
    if noise_stage == "after_shift":
        t = _shift_density(t, rho.topology)
    sym = _as_matrix(sym)
    if sym is not None and sym_first:
        t = _conj_coin(t, sym)
    if channel is not None:
        ops = [np.asarray(e, dtype=np.complex128) for e in channel.operators]
        s = sum(e.conj().T @ e for e in ops)
        if np.max(np.abs(s - np.eye(2))) > 1e-12:
            raise ValueError("Kraus operators do not satisfy completeness")
        t = apply_kraus(t, ops)
    if sym is not None and not sym_first:
        t = _conj_coin(t, sym)
    if noise_stage == "before_shift":
        t = _shift_density(t, rho.topology)
    L = t.shape[1]
    offset = rho.offset - 1 if isinstance(rho.topology, Line) else 0
    return DensityState(rho.topology, offset, t.reshape(2 * L, 2 * L), rho.step_count + 1)


def evolve_density(
    rho: DensityState,
    coin: NDArray[np.complex128],
    steps: int,
    channel: "object | None" = None,
    sym: NDArray[np.complex128] | None = None,
    sym_first: bool = True,
    noise_stage: NoiseStage = "after_shift",
) -> DensityState:
    """Repeat :func:`step_density` ``steps`` times."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    for _ in range(steps):
        rho = step_density(rho, coin, channel, sym, sym_first, noise_stage)
    return rho


def randomized_evolve(
    spec: InitialSpec,
    steps: int,
    seed: int,
    xi_range: tuple[float, float],
    theta_range: tuple[float, float],
    zeta_range: tuple[float, float],
    topo: Topology | None = None,
    family: CoinFamily = "u2",
) -> WalkerState:
    """
    Walk whose coin angles are redrawn uniformly at every step.

    Angles for step ``k`` are drawn in the order ``xi, theta, zeta`` from a
    ``numpy.random.default_rng(seed)`` stream, so a seed fixes the run.

    Raises
    ------
    ValueError
        If any range has ``low > high`` or non-finite ends.
    """
    ranges = (xi_range, theta_range, zeta_range)
    for lo, hi in ranges:
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ValueError(f"empty or invalid angle range [{lo}, {hi}]")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = np.random.default_rng(seed)
    state = init_pure(spec, topo if topo is not None else Line())
    for _ in range(steps):
        xi, th, ze = (rng.uniform(lo, hi) for lo, hi in ranges)
        state = step(state, coin_from_params(CoinParams(xi, th, ze), family))
    return state

