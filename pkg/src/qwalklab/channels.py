"""
Coin-space noise channels and quantum-trajectory unravelling.

Every channel is a finite Kraus set of ``2 x 2`` matrices acting on the coin
only; on the full walker it acts as ``E_x ⊗ 1``. The channel is applied once
per step, after the unitary walk step.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np
from numpy.typing import NDArray

from .coins import IDENTITY, PAULI_X, PAULI_Z
from .walk import DensityState, WalkerState, step

__all__ = [
    "KrausChannel",
    "GadParams",
    "bit_flip",
    "phase_flip",
    "amplitude_damping",
    "generalized_amplitude_damping",
    "identity_channel",
    "unitary_channel",
    "compose_channels",
    "apply_channel",
    "closed_form_gad_state",
    "bloch_components",
    "state_from_bloch",
    "sample_trajectory",
    "enumerate_trajectories",
    "density_from_trajectories",
    "thermal_occupation",
]

COMPLETENESS_TOL = 1e-12
BRANCH_NORM_FLOOR = 1e-14


@dataclass(frozen=True)
class KrausChannel:
    """
    Kraus set ``{E_x}`` with ``sum E_x^dagger E_x = 1``.

    Raises
    ------
    ValueError
        On construction, if an operator is not ``2 x 2`` or completeness fails.
    """

    operators: tuple[NDArray[np.complex128], ...]
    label: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ops = tuple(np.array(e, dtype=np.complex128) for e in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got {e.shape}")
            e.setflags(write=False)
        s = sum(e.conj().T @ e for e in ops)
        err = float(np.max(np.abs(s - IDENTITY)))
        if err > COMPLETENESS_TOL:
            raise ValueError(f"Kraus completeness violated by {err:.3e}")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "params", dict(self.params))

    def completeness_error(self) -> float:
        s = sum(e.conj().T @ e for e in self.operators)
        return float(np.max(np.abs(s - IDENTITY)))

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class GadParams:
    """
    Generalized amplitude damping parameters.

    Attributes
    ----------
    gamma0 : float
        Coupling rate, ``>= 0``.
    temperature_T : float
        Bath temperature in units with ``hbar = k_B = omega = 1``; ``0`` means
        ``N_th = 0``.
    delta_t : float
        Interaction time per walk step, ``> 0``.
    """

    gamma0: float
    temperature_T: float = 0.0
    delta_t: float = 1.0

    def __post_init__(self) -> None:
        for name in ("gamma0", "temperature_T", "delta_t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be >= 0")
        if self.temperature_T < 0:
            raise ValueError("temperature_T must be >= 0")
        if self.delta_t <= 0:
            raise ValueError("delta_t must be > 0")

    @property
    def n_th(self) -> float:
        return thermal_occupation(self.temperature_T)

    @property
    def chi(self) -> float:
        return 0.5 * (1.0 + 1.0 / (2.0 * self.n_th + 1.0))

    def p_of(self, time: float) -> float:
        """Damping probability ``1 - exp(-gamma0 (2 N_th + 1) time)``."""
        return -math.expm1(-self.gamma0 * (2.0 * self.n_th + 1.0) * time)

    @property
    def p(self) -> float:
        return self.p_of(self.delta_t)


def thermal_occupation(temperature: float) -> float:
    """Bose occupation ``1 / (e^{1/T} - 1)`` with ``omega = 1``; zero at ``T = 0``."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    x = 1.0 / temperature
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def _check_prob(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return p


def identity_channel() -> KrausChannel:
    return KrausChannel((IDENTITY,), "identity", {})


def unitary_channel(u: NDArray[np.complex128], label: str = "unitary") -> KrausChannel:
    """Single-operator channel ``rho -> U rho U^dagger``."""
    return KrausChannel((np.asarray(u, dtype=np.complex128),), label, {})


def compose_channels(*channels: KrausChannel) -> KrausChannel:
    """
    Sequential composition; the first argument acts first.

    The Kraus set is all products ``F_y E_x``; exact zero products are dropped.
    """
    if not channels:
        return identity_channel()
    ops = list(channels[0].operators)
    for ch in channels[1:]:
        ops = [f @ e for e in ops for f in ch.operators]
    kept = tuple(o for o in ops if np.any(o != 0)) or (ops[0],)
    label = "+".join(ch.label for ch in channels)
    params = {f"{i}.{k}": v for i, ch in enumerate(channels) for k, v in ch.params.items()}
    return KrausChannel(kept, label, params)


def bit_flip(p: float) -> KrausChannel:
    """``{sqrt(1-p) 1, sqrt(p) X}``."""
    p = _check_prob(p)
    return KrausChannel((math.sqrt(1 - p) * IDENTITY, math.sqrt(p) * PAULI_X), "bit_flip", {"p": p})


def phase_flip(p: float) -> KrausChannel:
    """``{sqrt(1-p) 1, sqrt(p) Z}``."""
    p = _check_prob(p)
    return KrausChannel((math.sqrt(1 - p) * IDENTITY, math.sqrt(p) * PAULI_Z), "phase_flip", {"p": p})


def amplitude_damping(p: float) -> KrausChannel:
    """``{[[1,0],[0,sqrt(1-p)]], [[0,sqrt(p)],[0,0]]}``: decay ``|1⟩ -> |0⟩``."""
    p = _check_prob(p)
    e0 = np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128)
    e1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=np.complex128)
    return KrausChannel((e0, e1), "amplitude_damping", {"p": p})


def generalized_amplitude_damping(g: GadParams) -> KrausChannel:
    """
    Four-operator finite-temperature damping channel for one step ``delta_t``.

    With ``p = 1 - exp(-gamma0 (2 N_th + 1) delta_t)`` and
    ``chi = (1 + 1/(2 N_th + 1)) / 2``::

        E0 = sqrt(chi)   [[1, 0], [0, sqrt(1-p)]]
        E1 = sqrt(chi)   [[0, sqrt(p)], [0, 0]]
        E2 = sqrt(1-chi) [[sqrt(1-p), 0], [0, 1]]
        E3 = sqrt(1-chi) [[0, 0], [sqrt(p), 0]]

    At ``T = 0`` (``chi = 1``) the last two vanish, leaving amplitude damping.
    """
    p, chi = g.p, g.chi
    a, b = math.sqrt(chi), math.sqrt(1.0 - chi)
    sq, sp = math.sqrt(1.0 - p), math.sqrt(p)
    ops = (
        a * np.array([[1, 0], [0, sq]], dtype=np.complex128),
        a * np.array([[0, sp], [0, 0]], dtype=np.complex128),
        b * np.array([[sq, 0], [0, 1]], dtype=np.complex128),
        b * np.array([[0, 0], [sp, 0]], dtype=np.complex128),
    )
    params = {"gamma0": g.gamma0, "temperature_T": g.temperature_T, "delta_t": g.delta_t,
              "n_th": g.n_th, "chi": chi, "p": p}
    return KrausChannel(ops, "generalized_amplitude_damping", params)


def apply_channel(rho: NDArray[np.complex128], channel: KrausChannel) -> NDArray[np.complex128]:
    """``sum_x E_x rho E_x^dagger`` for a ``2 x 2`` coin density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    return sum(e @ rho @ e.conj().T for e in channel.operators)


def bloch_components(rho: NDArray[np.complex128]) -> tuple[float, complex]:
    """Return ``(<sigma_z>, <sigma_->)`` with ``sigma_- = |1⟩⟨0|``, i.e. ``(rho00 - rho11, rho01)``."""
    rho = np.asarray(rho)
    return float(np.real(rho[0, 0] - rho[1, 1])), complex(rho[0, 1])


def state_from_bloch(sz: float, sm: complex) -> NDArray[np.complex128]:
    """Inverse of :func:`bloch_components`."""
    return np.array([[(1 + sz) / 2, sm], [np.conj(sm), (1 - sz) / 2]], dtype=np.complex128)


def closed_form_gad_state(sz0: float, sm0: complex, g: GadParams, time: float) -> NDArray[np.complex128]:
    """
    Analytic coin state after damping for ``time`` under ``g`` (``g.delta_t`` unused).

    The textbook solution is written for an atom whose excited level is
    ``|0⟩`` of the coin; here the channel damps coin ``|1⟩ -> |0⟩``. The two
    bases differ by ``X``, so the inputs are flipped, the solution

        A1(t) = e^{-Gt} <sigma_z(0)> - (1 - e^{-Gt}) / (2 N_th + 1)
        A2(t) = e^{-Gt/2} <sigma_-(0)>,   G = gamma0 (2 N_th + 1)

    is evaluated, and the result is flipped back.

    Parameters
    ----------
    sz0, sm0 : initial ``(<sigma_z>, <sigma_->)`` in the walker basis, see
        :func:`bloch_components`.
    """
    if time < 0:
        raise ValueError("time must be >= 0")
    if abs(sz0) ** 2 + 4 * abs(sm0) ** 2 > 1 + 1e-12:
        raise ValueError("Bloch vector longer than 1")
    big_g = g.gamma0 * (2 * g.n_th + 1) * time
    # walker-basis sigma_z flips sign under X; sigma_- goes to its conjugate
    a1 = math.exp(-big_g) * (-sz0) + math.expm1(-big_g) / (2 * g.n_th + 1)
    a2 = math.exp(-big_g / 2) * np.conj(sm0)
    flipped = state_from_bloch(a1, a2)
    return PAULI_X @ flipped @ PAULI_X


def _branch(state: WalkerState, e: NDArray[np.complex128]) -> WalkerState:
    return WalkerState(state.topology, state.offset, e @ state.amps, state.step_count)


def sample_trajectory(
    state: WalkerState,
    coin: NDArray[np.complex128],
    channel: KrausChannel,
    steps: int,
    seed: int | np.random.Generator,
    post: NDArray[np.complex128] | None = None,
) -> WalkerState:
    """
    One quantum trajectory: after each unitary step pick ``E_x`` with
    probability ``||E_x psi||^2`` and renormalize.

    Branches with norm below ``1e-14`` are treated as having probability 0.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(steps):
        state = step(state, coin, post)
        branches = [e @ state.amps for e in channel.operators]
        weights = np.array([np.sum(np.abs(b) ** 2) for b in branches])
        weights[weights < BRANCH_NORM_FLOOR] = 0.0
        weights /= weights.sum()
        k = int(rng.choice(len(branches), p=weights))
        amps = branches[k] / math.sqrt(np.sum(np.abs(branches[k]) ** 2))
        state = WalkerState(state.topology, state.offset, amps, state.step_count)
    return state


def enumerate_trajectories(
    state: WalkerState,
    coin: NDArray[np.complex128],
    channel: KrausChannel,
    steps: int,
    post: NDArray[np.complex128] | None = None,
) -> Iterator[tuple[tuple[int, ...], float, WalkerState]]:
    """
    Yield every unravelling ``(kraus indices, probability, normalized state)``.

    There are ``len(channel) ** steps`` branches; zero-weight branches are
    skipped.
    """
    n = len(channel)
    for path in itertools.product(range(n), repeat=steps):
        s = state
        for k in path:
            s = _branch(step(s, coin, post), channel.operators[k])
        w = float(np.sum(np.abs(s.amps) ** 2))
        if w < BRANCH_NORM_FLOOR:
            continue
        yield path, w, WalkerState(s.topology, s.offset, s.amps / math.sqrt(w), s.step_count)


def density_from_trajectories(
    branches: Iterator[tuple[tuple[int, ...], float, WalkerState]],
) -> DensityState:
    """Probability-weighted mixture of branch states."""
    acc = None
    ref = None
    for _, w, s in branches:
        v = s.vector()
        term = w * np.outer(v, v.conj())
        acc = term if acc is None else acc + term
        ref = s
    if ref is None:
        raise ValueError("no branches with nonzero weight")
    return DensityState(ref.topology, ref.offset, acc, ref.step_count)
