"""
Experiment catalog behind the command-line runner.

Each experiment declares a parameter schema and a function that turns a
validated parameter dict into a :class:`Table`. Angles are in degrees at this
layer and converted to radians before calling the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from . import channels as chn
from . import ctqw, many_body, observables, symmetry
from .coins import PAULI_X, CoinParams, coin_from_params, coin_variant
from .walk import (
    Cycle,
    InitialSpec,
    Line,
    evolve,
    evolve_density,
    init_density,
    init_pure,
    iter_evolve,
    position_distribution,
    randomized_evolve,
)

__all__ = [
    "Param",
    "Experiment",
    "Table",
    "CATALOG",
    "get_experiment",
    "json_schema",
    "catalog_schema",
    "default_parameters",
    "DENSITY_STEP_CAP",
]

DENSITY_STEP_CAP = 300


@dataclass(frozen=True)
class Param:
    name: str
    type: str  # number | integer | string | boolean | number-list
    default: Any
    help: str
    choices: tuple[str, ...] | None = None
    minimum: float | None = None


@dataclass
class Table:
    """Tabular result: first column is the index (site, t, theta, ...)."""

    columns: list[str]
    rows: list[list[Any]]
    summary: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    params: tuple[Param, ...]
    run: Callable[[dict[str, Any], int], Table]

    def param(self, name: str) -> Param:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)


# shared parameter groups

COIN_PARAMS = (
    Param("theta", "number", 45.0, "coin angle theta in degrees"),
    Param("xi", "number", 0.0, "coin angle xi in degrees"),
    Param("zeta", "number", 0.0, "coin angle zeta in degrees"),
    Param("family", "string", "u2", "coin family: u2 (B', Hadamard at 45) or su2 (B)", ("u2", "su2")),
)
INIT_PARAMS = (
    Param("init", "string", "symmetric", "initial coin state", ("symmetric", "zero", "one", "custom")),
    Param("delta", "number", 45.0, "custom start: delta in degrees"),
    Param("eta", "number", 90.0, "custom start: eta in degrees"),
)
CHANNEL_PARAMS = (
    Param(
        "channel",
        "string",
        "none",
        "coin noise per step",
        ("none", "bit-flip", "phase-flip", "amplitude-damping", "gad"),
    ),
    Param("p", "number", 0.0, "flip or damping probability per step", minimum=0.0),
    Param("gamma0", "number", 1.0, "GAD coupling rate", minimum=0.0),
    Param("temperature", "number", 0.0, "GAD bath temperature (hbar = k_B = omega = 1)", minimum=0.0),
    Param("delta_t", "number", 0.05, "GAD interaction time per step", minimum=0.0),
    Param("flip", "boolean", False, "apply a Pauli X after the channel each step"),
)


def _coin_params(p: dict[str, Any]) -> CoinParams:
    return CoinParams.from_degrees(p["xi"], p["theta"], p["zeta"])


def _coin(p: dict[str, Any]) -> np.ndarray:
    return coin_from_params(_coin_params(p), p["family"])


def _init(p: dict[str, Any], origin: int = 0) -> InitialSpec:
    kind = p["init"]
    if kind == "symmetric":
        return InitialSpec.symmetric(origin)
    if kind == "zero":
        return InitialSpec(0.0, 0.0, origin)
    if kind == "one":
        return InitialSpec(math.pi / 2, 0.0, origin)
    return InitialSpec(math.radians(p["delta"]), math.radians(p["eta"]), origin)


def _channel(p: dict[str, Any]) -> chn.KrausChannel | None:
    name = p["channel"]
    if name == "none":
        ch = None
    elif name == "bit-flip":
        ch = chn.bit_flip(p["p"])
    elif name == "phase-flip":
        ch = chn.phase_flip(p["p"])
    elif name == "amplitude-damping":
        ch = chn.amplitude_damping(p["p"])
    else:
        ch = chn.generalized_amplitude_damping(chn.GadParams(p["gamma0"], p["temperature"], p["delta_t"]))
    if p.get("flip"):
        x = chn.unitary_channel(PAULI_X, "x")
        ch = x if ch is None else chn.compose_channels(ch, x)
    return ch


def _check_density_cap(steps: int, p: dict[str, Any]) -> None:
    cap = p.get("max_density_steps", DENSITY_STEP_CAP)
    if steps > cap:
        raise ValueError(
            f"density runs are capped at {cap} steps; use trajectories > 0 or raise max_density_steps"
        )


def _dist_rows(d) -> list[list[Any]]:
    return [[int(s), float(q)] for s, q in zip(d.sites, d.probs)]


def _moment_summary(d) -> dict[str, Any]:
    m = observables.moments(d)
    return {"mean": m.mean, "variance": m.variance, "std": m.std, "total": d.total()}


def _noisy_distribution(p: dict[str, Any], topo, seed: int):
    coin = _coin(p)
    ch = _channel(p)
    spec = _init(p)
    steps = p["steps"]
    if ch is None:
        return position_distribution(evolve(init_pure(spec, topo), coin, steps))
    k = p.get("trajectories", 0)
    if k and k > 0:
        rng = np.random.default_rng(seed)
        acc = None
        for _ in range(k):
            s = chn.sample_trajectory(init_pure(spec, topo), coin, ch, steps, rng)
            d = position_distribution(s)
            acc = d.probs.copy() if acc is None else acc + d.probs
        return type(d)(d.sites, acc / k)
    _check_density_cap(steps, p)
    return position_distribution(evolve_density(init_density(spec, topo), coin, steps, ch))


# experiments


def _walk_line(p: dict[str, Any], seed: int) -> Table:
    d = _noisy_distribution(p, Line(), seed)
    summary = _moment_summary(d)
    summary["shannon_entropy_nats"] = observables.shannon_entropy(d)
    return Table(["site", "probability"], _dist_rows(d), summary)


def _walk_cycle(p: dict[str, Any], seed: int) -> Table:
    n = p["n"]
    if p["origin"] >= n or p["origin"] < 0:
        raise ValueError("origin must lie in [0, n)")
    topo = Cycle(n)
    coin = _coin(p)
    spec = _init(p, p["origin"])
    ch = _channel(p)
    beta = p["beta"]
    post = symmetry.SymmetryOp(symmetry.SymKind.PHASE_GATE, math.radians(beta)).matrix() if beta else None
    if ch is None:
        d = position_distribution(evolve(init_pure(spec, topo), coin, p["steps"], [post] if post is not None else None))
    else:
        d = position_distribution(evolve_density(init_density(spec, topo), coin, p["steps"], ch, post))
    summary = {"max_deviation_from_uniform": observables.max_deviation_from_uniform(d), "total": d.total()}
    return Table(["site", "probability"], _dist_rows(d), summary)


def _walk_random(p: dict[str, Any], seed: int) -> Table:
    def rng_of(lo: str, hi: str) -> tuple[float, float]:
        return math.radians(p[lo]), math.radians(p[hi])

    s = randomized_evolve(
        _init(p),
        p["steps"],
        seed,
        rng_of("xi_min", "xi_max"),
        rng_of("theta_min", "theta_max"),
        rng_of("zeta_min", "zeta_max"),
        family=p["family"],
    )
    d = position_distribution(s)
    return Table(["site", "probability"], _dist_rows(d), _moment_summary(d))


def _theta_sweep(p: dict[str, Any], seed: int) -> Table:
    rows = []
    t = p["steps"]
    for th in p["thetas"]:
        r = math.radians(th)
        coin = coin_from_params(CoinParams(0.0, r, 0.0), p["family"])
        d = position_distribution(evolve(init_pure(_init(p), Line()), coin, t))
        m = observables.moments(d)
        rows.append(
            [
                float(th),
                m.variance / t**2,
                1.0 - math.sin(r),
                observables.mass_outside(d, t * math.cos(r)),
                observables.shannon_entropy(d),
            ]
        )
    c = [r[1] for r in rows]
    summary = {
        "max_abs_deviation": max(abs(r[1] - r[2]) for r in rows),
        "monotone_nonincreasing": all(c[i + 1] <= c[i] + 1e-12 for i in range(len(c) - 1)),
        "max_mass_outside": max(r[3] for r in rows),
    }
    return Table(["theta_deg", "c_theta", "one_minus_sin", "mass_outside", "entropy_nats"], rows, summary)


def _ctqw(p: dict[str, Any], seed: int) -> Table:
    gamma, time = p["gamma"], p["time"]
    if p["topology"] == "cycle":
        n = p["n"]
        gen = ctqw.cycle_generator(n, gamma)
        psi0 = np.zeros(n, dtype=np.complex128)
        psi0[0] = 1.0
        prob = np.abs(ctqw.evolve_ct(psi0, gen, time)) ** 2
        rows = [[j, float(q)] for j, q in enumerate(prob)]
        return Table(["site", "probability"], rows, {"total": float(prob.sum())})
    d = ctqw.line_distribution(gamma, time)
    return Table(["site", "probability"], _dist_rows(d), _moment_summary(d))


def _noise_sweep(p: dict[str, Any], seed: int) -> Table:
    t = p["steps"]
    _check_density_cap(t, p)
    coin = _coin(p)
    ref = observables.classical_walk_reference(t)
    rows = []
    for prob in p["ps"]:
        q = dict(p, p=prob)
        ch = _channel(q)
        d = position_distribution(evolve_density(init_density(_init(p), Line()), coin, t, ch))
        m = observables.moments(d)
        rows.append(
            [
                float(prob),
                m.mean,
                m.variance,
                m.std,
                observables.total_variation(d.probs, ref.probs),
                observables.shannon_entropy(d),
            ]
        )
    return Table(["p", "mean", "variance", "std", "tv_to_classical", "entropy_nats"], rows, {"steps": t})


def _symmetry(p: dict[str, Any], seed: int) -> Table:
    op = symmetry.SymmetryOp.parse(p["op"], math.radians(p["angle"]))
    topo = Cycle(p["n"]) if p["topology"] == "cycle" else Line()
    if isinstance(topo, Line):
        _check_density_cap(p["steps"], p)
    rep = symmetry.symmetry_report(_coin_params(p), op, topo, p["steps"], _channel(p), _init(p), p["family"])
    rows = [
        [int(s), float(a), float(b)]
        for s, a, b in zip(rep.baseline.sites, rep.baseline.probs, rep.augmented.probs)
    ]
    return Table(
        ["site", "baseline", "augmented"],
        rows,
        {"kolmogorov": rep.kolmogorov, "symmetric": rep.symmetric, "op": op.kind.value},
    )


def _symmetry_matrix(p: dict[str, Any], seed: int) -> Table:
    t = p["steps"]
    _check_density_cap(t, p)
    chans = {
        "none": None,
        "bit-flip": chn.bit_flip(p["p"]),
        "phase-flip": chn.phase_flip(p["p"]),
        "gad-T0": chn.generalized_amplitude_damping(chn.GadParams(p["gamma0"], 0.0, p["delta_t"])),
        f"gad-T{p['temperature']:g}": chn.generalized_amplitude_damping(
            chn.GadParams(p["gamma0"], p["temperature"], p["delta_t"])
        ),
    }
    rows = []
    for name, ch in chans.items():
        for opname in ("Z", "PRX"):
            rep = symmetry.symmetry_report(
                _coin_params(p), symmetry.SymmetryOp.parse(opname), Line(), t, ch, _init(p), p["family"]
            )
            rows.append([name, opname, rep.kolmogorov, rep.symmetric])
    return Table(
        ["channel", "op", "kolmogorov", "symmetric"],
        rows,
        {"max_kolmogorov": max(r[2] for r in rows)},
    )


def _coin_variants(p: dict[str, Any], seed: int) -> Table:
    coin = _coin(p)
    phi = math.radians(p["phi"])
    spec = _init(p)
    base = position_distribution(evolve(init_pure(spec, Line()), coin, p["steps"]))
    rows = []
    for f in (1, 2, 3, 4):
        d = position_distribution(evolve(init_pure(spec, Line()), coin_variant(coin, f, phi), p["steps"]))
        rows.append([f, symmetry.kolmogorov_distance(base, d), float(np.max(np.abs(base.probs - d.probs)))])
    return Table(["variant", "kolmogorov", "max_abs_diff"], rows, {"max_abs_diff": max(r[2] for r in rows)})


def _cycle_turns(p: dict[str, Any], seed: int) -> Table:
    op = symmetry.SymmetryOp.parse(p["op"], math.radians(p["beta"]))
    pts = symmetry.turn_series(_coin_params(p), op, p["n"], p["tau_max"], _channel(p), _init(p), p["family"])
    rows = [[q.tau, q.steps, q.d_noisy, q.d_noiseless, q.d_ratio, q.coherence_ratio] for q in pts]
    return Table(["tau", "steps", "d_noisy", "d_noiseless", "D", "c"], rows, {"n": p["n"]})


def _recurrence(p: dict[str, Any], seed: int) -> Table:
    topo = Cycle(p["n"]) if p["topology"] == "cycle" else Line()
    spec = _init(p, 0)
    series = observables.recurrence_series(_coin(p), spec, topo, p["t_max"])
    rows = []
    survive = 1.0
    for t, p0 in enumerate(series):
        if t > 0:
            survive *= 1.0 - min(max(p0, 0.0), 1.0)
        rows.append([t, float(p0), 1.0 - survive])
    return Table(["t", "p0", "polya"], rows, {"polya_number": 1.0 - survive})


def _mixing(p: dict[str, Any], seed: int) -> Table:
    n = p["n"]
    topo = Cycle(n)
    coin = _coin(p)
    spec = _init(p, 0)
    T = p["T"] if p["T"] > 0 else int(math.ceil(n * math.log(n)))
    d = observables.time_averaged_distribution(coin, spec, topo, T)
    res = observables.mixing_time(coin, spec, topo, p["epsilon"])
    summary = {
        "T": T,
        "max_deviation_from_uniform": observables.max_deviation_from_uniform(d),
        "mixing_time": res.steps,
        "mixing_cap": res.cap,
    }
    return Table(["site", "probability"], _dist_rows(d), summary)


def _manybody(p: dict[str, Any], seed: int) -> Table:
    topo = Cycle(p["n"]) if p["topology"] == "cycle" else Line()
    spec = many_body.EnsembleSpec(
        p["particles"], p["init"], topo, _coin_params(p), _channel(p), p["steps"], p["family"]
    )
    if spec.noise is not None:
        _check_density_cap(p["steps"], p)
    prof = many_body.evolve_ensemble(spec, seed)
    sites, n = many_body.density_profile(prof)
    mean = float(np.dot(sites, n) / n.sum())
    summary = {
        "total": float(n.sum()),
        "mean_site": mean,
        "support_half_width": many_body.support_half_width(prof),
        "tail_half_width": many_body.tail_half_width(prof),
    }
    return Table(["site", "n_j"], [[int(s), float(v)] for s, v in zip(sites, n)], summary)


def _projection(p: dict[str, Any]) -> int | None:
    return {"none": None, "0": 0, "1": 1}[p["projection"]]


def _entanglement(p: dict[str, Any], seed: int) -> Table:
    m = p["particles"]
    mode = p["mode"]
    proj = _projection(p)
    if mode == "closed":
        series = many_body.closed_chain_entanglement(m, _coin_params(p), p["steps"], p["family"], proj)
        return Table(["t", "E"], [[t, float(e)] for t, e in enumerate(series)], {"final": float(series[-1])})
    if mode == "open":
        rows = []
        for t in range(p["steps"] + 1):
            rows.append([t, many_body.open_chain_entanglement(m, _coin_params(p), t, p["family"], proj)])
        return Table(["t", "E"], rows, {"final": rows[-1][1]})
    rows = []
    for th in p["thetas"]:
        c = CoinParams.from_degrees(p["xi"], th, p["zeta"])
        rows.append([float(th), many_body.open_chain_entanglement(m, c, p["steps"], p["family"], proj)])
    return Table(["theta_deg", "E"], rows, {"steps": p["steps"]})


def _trajectory_check(p: dict[str, Any], seed: int) -> Table:
    coin = _coin(p)
    ch = _channel(p)
    if ch is None:
        raise ValueError("trajectory-check needs a channel")
    t = p["steps"]
    if len(ch) ** t > 2**16:
        raise ValueError("too many branches for exhaustive enumeration")
    spec = _init(p)
    mix = chn.density_from_trajectories(chn.enumerate_trajectories(init_pure(spec, Line()), coin, ch, t))
    rho = evolve_density(init_density(spec, Line()), coin, t, ch)
    diff = float(np.max(np.abs(mix.matrix - rho.matrix)))
    dm, dr = position_distribution(mix), position_distribution(rho)
    rows = [[int(s), float(a), float(b)] for s, a, b in zip(dm.sites, dm.probs, dr.probs)]
    return Table(["site", "enumerated", "density"], rows, {"max_abs_matrix_diff": diff, "branches": len(ch) ** t})


def _gad_check(p: dict[str, Any], seed: int) -> Table:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    rho0 = np.outer(v, v.conj())
    sz, sm = chn.bloch_components(rho0)
    rows = []
    for temp in p["temperatures"]:
        for gt in p["gamma_t"]:
            k = p["slices"]
            g = chn.GadParams(p["gamma0"], temp, gt / p["gamma0"] / k)
            ch = chn.generalized_amplitude_damping(g)
            r = rho0
            for _ in range(k):
                r = chn.apply_channel(r, ch)
            ref = chn.closed_form_gad_state(sz, sm, g, gt / p["gamma0"])
            rows.append([float(temp), g.n_th, float(gt), float(np.max(np.abs(r - ref)))])
    return Table(["temperature", "n_th", "gamma_t", "max_abs_diff"], rows, {"max_abs_diff": max(r[3] for r in rows)})


def _decoupling_check(p: dict[str, Any], seed: int) -> Table:
    from .coins import su2_coin

    t_max = p["steps"]
    th, xi = math.radians(p["theta"]), math.radians(p["xi"])
    spec = _init(p)
    rng = np.random.default_rng(seed)

    def history(coin):
        s = init_pure(spec, Line())
        width = 2 * t_max + 3
        a = np.zeros((t_max + 1, 2, width), dtype=np.complex128)
        a[0, :, t_max + 1] = s.amps[:, 0]
        for t, s in enumerate(iter_evolve(s, coin, t_max), start=1):
            a[t, :, t_max + 1 - t : t_max + 2 + t] = s.amps
        return a

    kg = history(su2_coin(CoinParams(0.0, th, -math.pi / 2)))[:, 1]
    rec = history(su2_coin(CoinParams(xi, th, 0.0)))
    samples = p["samples"]
    width = kg.shape[1]
    ts = rng.integers(2, t_max, size=samples)
    js = rng.integers(1, width - 1, size=samples)
    e_kg = e_rec = 0.0
    c = math.cos(th)
    for t, j in zip(ts, js):
        e_kg = max(e_kg, abs(kg[t + 1, j] + kg[t - 1, j] - c * (kg[t, j + 1] + kg[t, j - 1])))
        for comp in (0, 1):
            a = rec[:, comp]
            pred = c * (np.exp(1j * xi) * a[t - 1, j + 1] + np.exp(-1j * xi) * a[t - 1, j - 1]) - a[t - 2, j]
            e_rec = max(e_rec, abs(a[t, j] - pred))
    rows = [["klein_gordon", e_kg], ["recursion", e_rec]]
    return Table(["identity", "max_abs_residual"], rows, {"samples": samples, "klein_gordon": e_kg, "recursion": e_rec})


def _steps(default: int, help_: str = "number of walk steps") -> Param:
    return Param("steps", "integer", default, help_, minimum=0)


CAP = Param("max_density_steps", "integer", DENSITY_STEP_CAP, "step cap for density-matrix runs", minimum=1)

CATALOG: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment(
            "walk-line",
            "position distribution of a coined walk on a line",
            (_steps(100),) + COIN_PARAMS + INIT_PARAMS + CHANNEL_PARAMS
            + (Param("trajectories", "integer", 0, "sample this many trajectories instead of density evolution", minimum=0), CAP),
            _walk_line,
        ),
        Experiment(
            "walk-cycle",
            "position distribution on an n-cycle, optionally with a phase gate G(beta) each step",
            (_steps(50), Param("n", "integer", 51, "cycle size", minimum=2), Param("origin", "integer", 0, "start site"),
             Param("beta", "number", 0.0, "phase gate angle in degrees (0 = none)"))
            + COIN_PARAMS + INIT_PARAMS + CHANNEL_PARAMS,
            _walk_cycle,
        ),
        Experiment(
            "walk-random",
            "walk with coin angles redrawn uniformly each step (seeded)",
            (_steps(200),)
            + tuple(
                Param(f"{a}_{b}", "number", d, f"{a} range {b} in degrees")
                for a, (lo, hi) in {"xi": (0.0, 90.0), "theta": (0.0, 45.0), "zeta": (0.0, 90.0)}.items()
                for b, d in (("min", lo), ("max", hi))
            )
            + (COIN_PARAMS[3],) + INIT_PARAMS,
            _walk_random,
        ),
        Experiment(
            "theta-sweep",
            "variance law sigma^2/t^2 against 1 - sin(theta), mass outside t cos(theta), entropy",
            (_steps(100), Param("thetas", "number-list", [15.0, 30.0, 45.0, 60.0, 75.0], "coin angles in degrees"),
             COIN_PARAMS[3]) + INIT_PARAMS,
            _theta_sweep,
        ),
        Experiment(
            "ctqw",
            "continuous-time walk from a single site",
            (Param("gamma", "number", 1.0, "hopping rate", minimum=0.0), Param("time", "number", 10.0, "evolution time", minimum=0.0),
             Param("topology", "string", "line", "line or cycle", ("line", "cycle")), Param("n", "integer", 51, "cycle size", minimum=2)),
            _ctqw,
        ),
        Experiment(
            "noise-sweep",
            "moments and distance to the classical walk across noise levels",
            (_steps(100), Param("ps", "number-list", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], "noise levels"))
            + COIN_PARAMS + INIT_PARAMS + CHANNEL_PARAMS + (CAP,),
            _noise_sweep,
        ),
        Experiment(
            "symmetry",
            "plain versus symmetry-augmented walk and their Kolmogorov distance",
            (_steps(50), Param("op", "string", "Z", "symmetry operation", ("Z", "X", "PRX", "G", "phase")),
             Param("angle", "number", 0.0, "angle of G or phase in degrees"),
             Param("topology", "string", "line", "line or cycle", ("line", "cycle")), Param("n", "integer", 51, "cycle size", minimum=2))
            + COIN_PARAMS + INIT_PARAMS + CHANNEL_PARAMS + (CAP,),
            _symmetry,
        ),
        Experiment(
            "symmetry-matrix",
            "Z and PRX distances on a line for no noise, bit flip, phase flip and GAD at T=0 and T",
            (_steps(50), Param("p", "number", 0.1, "bit and phase flip probability", minimum=0.0),
             Param("gamma0", "number", 1.0, "GAD coupling rate", minimum=0.0),
             Param("temperature", "number", 3.5, "GAD temperature", minimum=0.0),
             Param("delta_t", "number", 0.05, "GAD time per step", minimum=0.0))
            + COIN_PARAMS + INIT_PARAMS + (CAP,),
            _symmetry_matrix,
        ),
        Experiment(
            "coin-variants",
            "phase-decorated coins B^(1..4) against the plain coin on a line",
            (_steps(50), Param("phi", "number", math.degrees(0.7), "variant phase in degrees")) + COIN_PARAMS + INIT_PARAMS,
            _coin_variants,
        ),
        Experiment(
            "cycle-turns",
            "Kolmogorov distance and coherence over turns on an n-cycle",
            (Param("n", "integer", 51, "odd cycle size", minimum=3), Param("tau_max", "integer", 10, "number of turns", minimum=1),
             Param("op", "string", "G", "symmetry operation", ("Z", "X", "PRX", "G", "phase")),
             Param("beta", "number", 40.0, "gate angle in degrees"))
            + COIN_PARAMS + INIT_PARAMS + CHANNEL_PARAMS,
            _cycle_turns,
        ),
        Experiment(
            "recurrence",
            "return probability P0(t) and the running Polya number",
            (Param("t_max", "integer", 200, "last step", minimum=1), Param("topology", "string", "line", "line or cycle", ("line", "cycle")),
             Param("n", "integer", 51, "cycle size", minimum=2)) + COIN_PARAMS + INIT_PARAMS,
            _recurrence,
        ),
        Experiment(
            "mixing",
            "time-averaged distribution on an n-cycle and the mixing time",
            (Param("n", "integer", 101, "cycle size", minimum=2), Param("T", "integer", 0, "averaging window (0 = ceil(n ln n))", minimum=0),
             Param("epsilon", "number", 0.05, "total-variation threshold for the mixing time", minimum=0.0))
            + COIN_PARAMS + INIT_PARAMS,
            _mixing,
        ),
        Experiment(
            "manybody",
            "density profile n_j of M independent walkers from MI or SF starts",
            (Param("particles", "integer", 40, "number of particles M", minimum=1), Param("init", "string", "mi", "initial profile", ("mi", "sf")),
             _steps(40), Param("topology", "string", "line", "line or cycle", ("line", "cycle")), Param("n", "integer", 40, "cycle size", minimum=2))
            + COIN_PARAMS + CHANNEL_PARAMS + (CAP,),
            _manybody,
        ),
        Experiment(
            "entanglement",
            "Meyer-Wallach spatial entanglement: open or closed chain series, or a theta scan",
            (Param("particles", "integer", 20, "number of particles M", minimum=1), _steps(20),
             Param("mode", "string", "open", "open, closed or theta-scan", ("open", "closed", "theta-scan")),
             Param("thetas", "number-list", [5.0, 15.0, 25.0, 35.0, 45.0, 55.0, 65.0, 75.0, 85.0], "theta grid in degrees"),
             Param("projection", "string", "none", "coin projection before taking occupations", ("none", "0", "1")))
            + COIN_PARAMS,
            _entanglement,
        ),
        Experiment(
            "trajectory-check",
            "exhaustive unravelling versus Kraus density evolution",
            (_steps(6),) + COIN_PARAMS + INIT_PARAMS
            + (replace(CHANNEL_PARAMS[0], default="bit-flip"), replace(CHANNEL_PARAMS[1], default=0.3))
            + CHANNEL_PARAMS[2:],
            _trajectory_check,
        ),
        Experiment(
            "gad-check",
            "iterated GAD Kraus map against the closed-form damped state",
            (Param("gamma0", "number", 1.0, "coupling rate", minimum=0.0),
             Param("temperatures", "number-list", [0.0, 1.0 / math.log(3.0)], "bath temperatures (N_th = 0 and 0.5)"),
             Param("gamma_t", "number-list", [0.1, 0.5], "values of gamma0 * t"),
             Param("slices", "integer", 10, "Kraus applications per run", minimum=1)),
            _gad_check,
        ),
        Experiment(
            "decoupling-check",
            "Klein-Gordon identity and the decoupled amplitude recursion on sampled (j, t)",
            (_steps(50), Param("samples", "integer", 200, "random (j, t) samples", minimum=1),
             Param("theta", "number", 40.0, "coin angle in degrees"), Param("xi", "number", 25.0, "coin angle xi in degrees"))
            + INIT_PARAMS,
            _decoupling_check,
        ),
    ]
}


def get_experiment(name: str) -> Experiment:
    """
    Raises
    ------
    KeyError
        If no experiment has this name.
    """
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown experiment {name!r}; known: {', '.join(sorted(CATALOG))}") from None


def _param_schema(p: Param) -> dict[str, Any]:
    if p.type == "number-list":
        s: dict[str, Any] = {"type": "array", "items": {"type": "number"}, "minItems": 1}
    else:
        s = {"type": p.type}
    if p.choices:
        s["enum"] = list(p.choices)
    if p.minimum is not None:
        s["minimum"] = p.minimum
    s["default"] = p.default
    s["description"] = p.help
    return s


def json_schema(name: str) -> dict[str, Any]:
    """JSON Schema for a run config of experiment ``name``."""
    e = get_experiment(name)
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": e.name,
        "description": e.description,
        "type": "object",
        "properties": {
            "experiment": {"const": e.name},
            "seed": {"type": "integer", "default": 0},
            "format": {"enum": ["csv", "json"], "default": "csv"},
            "output_path": {"type": "string"},
            "parameters": {
                "type": "object",
                "properties": {p.name: _param_schema(p) for p in e.params},
                "additionalProperties": False,
            },
        },
        "required": ["experiment"],
        "additionalProperties": False,
    }


def catalog_schema() -> dict[str, Any]:
    return {name: json_schema(name) for name in sorted(CATALOG)}


def default_parameters(name: str) -> dict[str, Any]:
    return {p.name: p.default for p in get_experiment(name).params}
