"""
Many distinguishable, non-interacting walkers on an open or closed chain.

Each particle walks independently, so the ensemble is a list of
single-particle distributions ``a_j^(i)``. Particles whose initial states are
translates of each other share one evolution, shifted afterwards.

Initial-state conventions:

- Mott insulator (MI): one particle per site on ``M`` contiguous sites,
  ``-M//2 .. -M//2 + M - 1`` (``-M/2 .. M/2 - 1`` for even ``M``,
  ``-(M-1)/2 .. (M-1)/2`` for odd ``M``), coin ``(|0⟩ + i|1⟩)/sqrt(2)``.
- Superfluid (SF): every particle is in the same uniform superposition over
  those ``M`` sites, with coin ``(|0⟩ + i|1⟩)/sqrt(2)`` on each site.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .channels import KrausChannel
from .coins import CoinFamily, CoinParams, coin_from_params
from .walk import (
    Cycle,
    DensityState,
    InitialSpec,
    Line,
    NoiseStage,
    Topology,
    WalkerState,
    evolve,
    evolve_density,
)

__all__ = [
    "InitialKind",
    "ParticleInit",
    "EnsembleSpec",
    "LatticeProfile",
    "EntanglementResult",
    "mi_sites",
    "mi_initial",
    "sf_initial",
    "evolve_ensemble",
    "density_profile",
    "support_half_width",
    "tail_half_width",
    "meyer_wallach_spatial",
    "meyer_wallach_bruteforce",
    "closed_chain_entanglement",
    "open_chain_entanglement",
    "quantum_steps_to_reach",
    "classical_steps_to_reach",
    "growth_exponent",
    "MAX_PARTICLES_MW",
]

MAX_PARTICLES_MW = 30
SYMMETRIC_COIN = np.array([1.0, 1j], dtype=np.complex128) / math.sqrt(2.0)


class InitialKind(str, Enum):
    MOTT_INSULATOR = "mi"
    SUPERFLUID = "sf"


@dataclass(frozen=True)
class ParticleInit:
    """
    Initial single-particle state on contiguous sites ``offset .. offset + k - 1``.

    ``amps`` has shape ``(2, k)`` and unit norm.
    """

    offset: int
    amps: NDArray[np.complex128]

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != 2 or a.shape[1] < 1:
            raise ValueError("amps must have shape (2, k) with k >= 1")
        if abs(np.linalg.norm(a) - 1.0) > 1e-10:
            raise ValueError("particle state must be normalized")
        object.__setattr__(self, "amps", a)

    @classmethod
    def localized(cls, spec: InitialSpec) -> "ParticleInit":
        return cls(int(spec.origin), spec.coin_vector().reshape(2, 1))

    def key(self) -> bytes:
        # translation-invariant cache key
        return self.amps.tobytes()


@dataclass(frozen=True)
class EnsembleSpec:
    """
    Ensemble of ``particle_count`` walkers.

    ``initial`` is ``"mi"``, ``"sf"`` or an explicit list of
    :class:`ParticleInit`. ``noise`` is applied once per step after the walk
    coin, before the shift (``noise_stage="before_shift"``, the default) or
    after it. Compose channels with :func:`~qwalklab.channels.compose_channels`.
    """

    particle_count: int
    initial: InitialKind | str | Sequence[ParticleInit] = InitialKind.MOTT_INSULATOR
    topology: Topology = Line()
    coin: CoinParams = CoinParams()
    noise: KrausChannel | None = None
    steps: int = 0
    family: CoinFamily = "u2"
    noise_stage: NoiseStage = "before_shift"

    def __post_init__(self) -> None:
        if self.particle_count < 1:
            raise ValueError("particle_count must be >= 1")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if isinstance(self.topology, Cycle) and self.topology.n < self.particle_count:
            raise ValueError("cycle has fewer sites than particles")

    def particles(self) -> list[ParticleInit]:
        init = self.initial
        if isinstance(init, (str, InitialKind)):
            kind = InitialKind(init)
            if kind is InitialKind.MOTT_INSULATOR:
                specs = mi_initial(self.particle_count)
                out = [ParticleInit.localized(s) for s in specs]
            else:
                out = sf_initial(self.particle_count)
        else:
            out = list(init)
            if len(out) != self.particle_count:
                raise ValueError("number of particle states differs from particle_count")
        if isinstance(self.topology, Cycle):
            n = self.topology.n
            out = [ParticleInit(p.offset % n, p.amps) for p in out]
        return out


@dataclass(frozen=True)
class LatticeProfile:
    """
    Per-particle occupations ``a[i, k]`` on ``sites[k]``.

    Attributes
    ----------
    sites : ndarray of int, shape (L,)
    occupation : ndarray, shape (M, L)
    topology : Line or Cycle
    steps : int
    """

    sites: NDArray[np.int64]
    occupation: NDArray[np.float64]
    topology: Topology
    steps: int = 0

    @property
    def particle_count(self) -> int:
        return self.occupation.shape[0]

    @property
    def site_count(self) -> int:
        return self.occupation.shape[1]

    def density(self) -> NDArray[np.float64]:
        return self.occupation.sum(axis=0)


@dataclass(frozen=True)
class EntanglementResult:
    value: float
    site_count: int
    dimension_exponent: int


def mi_sites(m: int) -> list[int]:
    """Sites ``-(m // 2) .. -(m // 2) + m - 1``."""
    if m < 1:
        raise ValueError("M must be >= 1")
    lo = -(m // 2)
    return list(range(lo, lo + m))


def mi_initial(m: int) -> list[InitialSpec]:
    """One symmetric-coin particle per site of :func:`mi_sites`."""
    return [InitialSpec.symmetric(j) for j in mi_sites(m)]


def sf_initial(m: int) -> list[ParticleInit]:
    """Each particle uniform over the ``m`` MI sites with the symmetric coin on each."""
    sites = mi_sites(m)
    amps = np.tile(SYMMETRIC_COIN.reshape(2, 1), (1, m)) / math.sqrt(m)
    return [ParticleInit(sites[0], amps) for _ in range(m)]


def _initial_state(p: ParticleInit, topo: Topology) -> WalkerState:
    k = p.amps.shape[1]
    if isinstance(topo, Cycle):
        amps = np.zeros((2, topo.n), dtype=np.complex128)
        idx = (p.offset + np.arange(k)) % topo.n
        np.add.at(amps, (slice(None), idx), p.amps)
        return WalkerState(topo, 0, amps, 0)
    return WalkerState(topo, p.offset, p.amps.copy(), 0)


def _single(
    p: ParticleInit,
    topo: Topology,
    coin: NDArray[np.complex128],
    steps: int,
    noise: KrausChannel | None,
    projection: int | None,
    noise_stage: NoiseStage = "before_shift",
) -> tuple[int, NDArray[np.float64]]:
    """Evolve one particle; return ``(offset, a_j)`` on its window."""
    psi = _initial_state(p, topo)
    if noise is None:
        s = evolve(psi, coin, steps)
        if projection is None:
            w = np.sum(np.abs(s.amps) ** 2, axis=0)
        else:
            w = np.abs(s.amps[projection]) ** 2
        offset = s.offset
    else:
        v = psi.vector()
        rho = DensityState(topo, psi.offset, np.outer(v, v.conj()), 0)
        rho = evolve_density(rho, coin, steps, noise, noise_stage=noise_stage)
        diag = np.real(np.diagonal(rho.matrix)).reshape(2, -1)
        w = diag.sum(axis=0) if projection is None else diag[projection]
        offset = rho.offset
    total = w.sum()
    if projection is not None:
        if total < 1e-14:
            raise ValueError("coin projection has zero norm")
        w = w / total
    return offset, np.clip(w, 0.0, None)


def evolve_ensemble(
    spec: EnsembleSpec,
    seed: int | None = None,
    projection: int | None = None,
) -> LatticeProfile:
    """
    Evolve every particle for ``spec.steps`` steps and collect ``a_j^(i)``.

    Parameters
    ----------
    spec : EnsembleSpec
    seed : int, optional
        Accepted for interface uniformity; the evolution is deterministic.
    projection : {None, 0, 1}
        If set, ``a_j^(i)`` is the probability of site ``j`` after projecting
        the particle onto that coin state and renormalizing; otherwise the
        plain position probability.
    """
    del seed
    if projection not in (None, 0, 1):
        raise ValueError("projection must be None, 0 or 1")
    coin = coin_from_params(spec.coin, spec.family)
    parts = spec.particles()
    topo = spec.topology
    cache: dict[bytes, tuple[int, NDArray[np.float64]]] = {}
    results: list[tuple[int, NDArray[np.float64]]] = []
    for p in parts:
        key = p.key()
        if key not in cache:
            off, w = _single(
                ParticleInit(0, p.amps), topo, coin, spec.steps, spec.noise, projection, spec.noise_stage
            )
            cache[key] = (off, w)
        off0, w = cache[key]
        results.append((off0 + p.offset, w))
    if isinstance(topo, Cycle):
        n = topo.n
        occ = np.zeros((len(parts), n))
        for i, (off, w) in enumerate(results):
            # reference run started at 0; translate by the particle offset
            occ[i] = np.roll(w, off)
        sites = np.arange(n, dtype=np.int64)
    else:
        lo = min(off for off, _ in results)
        hi = max(off + len(w) for off, w in results)
        occ = np.zeros((len(parts), hi - lo))
        for i, (off, w) in enumerate(results):
            occ[i, off - lo : off - lo + len(w)] = w
        sites = np.arange(lo, hi, dtype=np.int64)
    return LatticeProfile(sites, occ, topo, spec.steps)


def density_profile(profile: LatticeProfile) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    """``(sites, n_j)`` with ``n_j = sum_i a_j^(i)``."""
    return profile.sites, profile.density()


def support_half_width(profile: LatticeProfile, threshold: float = 0.01) -> float:
    """
    Half the extent of the sites where ``n_j >= threshold`` (atoms per site).

    Returns ``(j_max - j_min) / 2`` over those sites, or 0 if none qualify.
    """
    n = profile.density()
    occupied = profile.sites[n >= threshold]
    if occupied.size == 0:
        return 0.0
    return float(occupied.max() - occupied.min()) / 2.0


def tail_half_width(profile: LatticeProfile, tail: float = 0.01) -> int:
    """
    Smallest ``h`` such that at most ``tail * M`` of the density lies at
    ``|j| > h``.
    """
    n = profile.density()
    a = np.abs(profile.sites)
    budget = tail * profile.particle_count
    for h in range(int(a.max()) + 1):
        if n[a > h].sum() <= budget:
            return h
    return int(a.max())


def _mw_prefactor(m: int) -> float:
    # 2^M / (2^M - 1) = 1 / (1 - 2^-M)
    return -1.0 / math.expm1(-m * math.log(2.0))


def meyer_wallach_spatial(profile: LatticeProfile, site_count: int | None = None) -> EntanglementResult:
    """
    Meyer-Wallach measure from per-site occupations:
    ``E = 2^M/(2^M - 1) (1 - (1/L) sum_j prod_i [a^2 + (1 - a)^2])``.

    ``L`` defaults to ``2t + M + 1`` on a line and ``n`` on a cycle; sites of
    ``L`` not present in the profile are empty and have unit purity.

    Raises
    ------
    ValueError
        If ``M > 30`` or the profile has more sites than ``L``.
    """
    m = profile.particle_count
    if m > MAX_PARTICLES_MW:
        raise ValueError(f"at most {MAX_PARTICLES_MW} particles are supported")
    if site_count is None:
        if isinstance(profile.topology, Cycle):
            site_count = profile.topology.n
        else:
            site_count = 2 * profile.steps + m + 1
    if profile.site_count > site_count:
        raise ValueError(f"profile has {profile.site_count} sites, more than L={site_count}")
    a = profile.occupation
    purity = np.prod(a**2 + (1.0 - a) ** 2, axis=0)
    total = purity.sum() + (site_count - profile.site_count)
    e = _mw_prefactor(m) * (1.0 - total / site_count)
    return EntanglementResult(float(np.clip(e, 0.0, 1.0)), site_count, m)


def meyer_wallach_bruteforce(
    particles: Sequence[NDArray[np.complex128]],
    site_count: int | None = None,
) -> float:
    """
    Meyer-Wallach measure of the product lattice state built from explicit
    single-particle position amplitudes.

    Each entry of ``particles`` is a complex vector over the same ``L`` sites
    (already coin-projected). Vectors are renormalized. Site reduced density
    matrices live in the ``2^M`` occupation space of that site and are built
    from all ``L^M`` position tuples.

    Raises
    ------
    ValueError
        If more than 3 particles are given or a vector has zero norm.
    """
    m = len(particles)
    if not 1 <= m <= 3:
        raise ValueError("brute force supports 1 to 3 particles")
    vecs = []
    for v in particles:
        v = np.asarray(v, dtype=np.complex128)
        nrm = np.linalg.norm(v)
        if nrm < 1e-14:
            raise ValueError("coin projection has zero norm")
        vecs.append(v / nrm)
    L = len(vecs[0])
    if any(len(v) != L for v in vecs):
        raise ValueError("particle vectors must share one site set")
    if site_count is None:
        site_count = L
    purity_sum = float(site_count - L)
    dim = 2**m
    for j in range(L):
        # rest-of-lattice configuration -> amplitude vector over site-j occupations
        groups: dict[tuple, NDArray[np.complex128]] = {}
        for pos in itertools.product(range(L), repeat=m):
            amp = np.prod([vecs[i][pos[i]] for i in range(m)])
            if amp == 0:
                continue
            bits = sum(1 << i for i in range(m) if pos[i] == j)
            rest = tuple(p if p != j else -1 for p in pos)
            g = groups.setdefault(rest, np.zeros(dim, dtype=np.complex128))
            g[bits] += amp
        rho = np.zeros((dim, dim), dtype=np.complex128)
        for g in groups.values():
            rho += np.outer(g, g.conj())
        purity_sum += float(np.real(np.trace(rho @ rho)))
    return float(_mw_prefactor(m) * (1.0 - purity_sum / site_count))


def closed_chain_entanglement(
    m: int,
    coin: CoinParams,
    steps: int,
    family: CoinFamily = "u2",
    projection: int | None = None,
) -> NDArray[np.float64]:
    """``E(t)`` for ``t = 0 .. steps`` with one particle per site of ``Cycle(m)``."""
    parts = [ParticleInit(j, SYMMETRIC_COIN.reshape(2, 1)) for j in range(m)]
    out = np.empty(steps + 1)
    for t in range(steps + 1):
        spec = EnsembleSpec(m, parts, Cycle(m), coin, None, t, family)
        out[t] = meyer_wallach_spatial(evolve_ensemble(spec, projection=projection)).value
    return out


def open_chain_entanglement(
    m: int,
    coin: CoinParams,
    steps: int,
    family: CoinFamily = "u2",
    projection: int | None = None,
) -> float:
    """``E`` after ``steps`` steps for an MI start on an open chain."""
    spec = EnsembleSpec(m, InitialKind.MOTT_INSULATOR, Line(), coin, None, steps, family)
    return meyer_wallach_spatial(evolve_ensemble(spec, projection=projection)).value


def quantum_steps_to_reach(target: float, theta: float, family: CoinFamily = "u2", tail: float = 0.01) -> int:
    """Smallest ``t`` whose single-particle support half-width reaches ``target``."""
    coin = coin_from_params(CoinParams(0.0, theta, 0.0), family)
    state = WalkerState(Line(), 0, SYMMETRIC_COIN.reshape(2, 1).copy(), 0)
    t = 0
    while True:
        prof = LatticeProfile(state.sites, np.sum(np.abs(state.amps) ** 2, axis=0)[None, :], Line(), t)
        if tail_half_width(prof, tail) >= target:
            return t
        state = evolve(state, coin, 1)
        t += 1


def classical_steps_to_reach(target: float) -> int:
    """Smallest ``t`` with classical spread ``sqrt(t) >= target``."""
    return int(math.ceil(target**2))


def growth_exponent(sizes: Sequence[float], steps: Sequence[float]) -> float:
    """Least-squares slope of ``log(steps)`` against ``log(sizes)``."""
    return float(np.polyfit(np.log(sizes), np.log(steps), 1)[0])
