"""
The fifteen numbered acceptance criteria at their stated tolerances.

Parts that cannot be met are strict xfails; the reasons are analyzed in the
decision ledger. The terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import math
import time
from pathlib import Path

import numpy as np
import pytest

from qwalklab import channels as chn
from qwalklab import many_body as mb
from qwalklab import observables as ob
from qwalklab import symmetry as sy
from qwalklab.cli import main
from qwalklab.coins import PAULI_X, CoinParams, coin_from_params, coin_variant, hadamard, su2_coin
from qwalklab.walk import (
    Cycle,
    DensityState,
    InitialSpec,
    Line,
    evolve,
    evolve_density,
    init_density,
    init_pure,
    iter_evolve,
    position_distribution,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
H = hadamard()
SYM = InitialSpec.symmetric()


def line_dist(coin, t, spec=SYM):
    return position_distribution(evolve(init_pure(spec, Line()), coin, t))


def coin_deg(theta, family="u2"):
    return coin_from_params(CoinParams.from_degrees(0.0, theta, 0.0), family)


# 1


@pytest.mark.criterion(1)
def test_c01_hadamard_variance():
    t0 = time.perf_counter()
    c = ob.c_theta(math.pi / 4, 100)
    elapsed = time.perf_counter() - t0
    assert abs(c - (1 - 1 / math.sqrt(2))) <= 0.03
    assert elapsed < 1.0


# 2


@pytest.mark.criterion(2)
def test_c02_c_theta_law():
    t0 = time.perf_counter()
    thetas = [15, 30, 45, 60, 75]
    cs = [ob.c_theta(math.radians(th), 100) for th in thetas]
    elapsed = time.perf_counter() - t0
    for th, c in zip(thetas, cs):
        assert abs(c - (1 - math.sin(math.radians(th)))) <= 0.05
    assert all(b <= a for a, b in zip(cs, cs[1:]))
    assert elapsed < 5.0


# 3


@pytest.mark.criterion(3)
@pytest.mark.xfail(strict=True, reason="2-4% of the mass lies outside t cos(theta) at t=100")
@pytest.mark.parametrize("theta", [30, 45, 60])
def test_c03_support_confinement(theta):
    d = line_dist(coin_deg(theta), 100)
    assert ob.mass_outside(d, 100 * math.cos(math.radians(theta))) <= 0.01


# 4

NOISES = {
    "none": None,
    "bit_flip": chn.bit_flip(0.1),
    "phase_flip": chn.phase_flip(0.1),
    "gad_T0": chn.generalized_amplitude_damping(chn.GadParams(1.0, 0.0, 0.05)),
    "gad_T3.5": chn.generalized_amplitude_damping(chn.GadParams(1.0, 3.5, 0.05)),
}


@pytest.mark.criterion(4)
def test_c04_line_symmetries_under_noise():
    t0 = time.perf_counter()
    worst = {}
    for name, ch in NOISES.items():
        for op in ("Z", "PRX"):
            rep = sy.symmetry_report(CoinParams.from_degrees(0, 45, 0), sy.SymmetryOp.parse(op), Line(), 50, ch)
            worst[(name, op)] = rep.kolmogorov
    elapsed = time.perf_counter() - t0
    assert max(worst.values()) <= 1e-8, worst
    assert elapsed < 30.0


# 5


@pytest.mark.criterion(5)
@pytest.mark.parametrize("start", ["zero", "one", "mixed"])
@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_c05_coin_variants_basis_starts(variant, start):
    b = H
    bf = coin_variant(b, variant, 0.7)
    if start == "mixed":
        up, down = (init_density(InitialSpec(d, 0.0), Line()) for d in (0.0, math.pi / 2))
        r0 = DensityState(Line(), 0, 0.5 * (up.matrix + down.matrix))
        p = position_distribution(evolve_density(r0, b, 50)).probs
        q = position_distribution(evolve_density(r0, bf, 50)).probs
    else:
        spec = InitialSpec(0.0 if start == "zero" else math.pi / 2, 0.0)
        p, q = line_dist(b, 50, spec).probs, line_dist(bf, 50, spec).probs
    assert np.max(np.abs(p - q)) <= 1e-10


@pytest.mark.criterion(5)
@pytest.mark.parametrize("variant", [1, 3])
def test_c05_coin_variants_row_phase_any_start(variant):
    p = line_dist(H, 50).probs
    q = line_dist(coin_variant(H, variant, 0.7), 50).probs
    assert np.max(np.abs(p - q)) <= 1e-10


@pytest.mark.criterion(5)
@pytest.mark.xfail(strict=True, reason="column-phase variants act as a phase on the initial coin state")
@pytest.mark.parametrize("variant", [2, 4])
def test_c05_coin_variants_column_phase_superposition_start(variant):
    p = line_dist(H, 50).probs
    q = line_dist(coin_variant(H, variant, 0.7), 50).probs
    assert np.max(np.abs(p - q)) <= 1e-10


# 6


@pytest.fixture(scope="module")
def turns():
    t0 = time.perf_counter()
    pts = sy.turn_series(
        CoinParams.from_degrees(0, 45, 0), sy.SymmetryOp.parse("G", math.radians(40)), 51, 2, chn.phase_flip(0.05)
    )
    return pts, time.perf_counter() - t0


@pytest.mark.criterion(6)
@pytest.mark.xfail(strict=True, reason="on an odd cycle d is exactly 0 until t >= n, i.e. tau >= 3")
def test_c06_breakdown_at_two_turns(turns):
    pts, elapsed = turns
    assert elapsed < 20.0
    p2 = pts[1]
    assert p2.tau == 2
    assert p2.d_noiseless > 0.01
    assert p2.d_noisy < p2.d_noiseless


# 7


@pytest.mark.criterion(7)
@pytest.mark.parametrize("theta", [30, 60])
def test_c07_classical_limit(theta):
    rho = evolve_density(init_density(SYM, Line()), coin_deg(theta), 100, chn.bit_flip(0.5))
    d = position_distribution(rho)
    ref = ob.classical_walk_reference(100)
    assert ob.total_variation(d.probs, ref.probs) <= 0.05
    assert abs(ob.moments(d).std - 10.0) <= 1.0


# 8


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n", [2, 3, 4, 7, 10, 51])
def test_c08_cycle_theta_half_pi_returns_at_even_times(n):
    p0 = ob.recurrence_series(coin_deg(90), SYM, Cycle(n), 60)
    assert np.all(np.abs(p0[::2] - 1.0) <= 1e-12)


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n", [2, 3, 5, 8, 13, 51])
def test_c08_cycle_theta_zero_returns_at_n(n):
    assert abs(ob.recurrence_probability(coin_deg(0), SYM, Cycle(n), n) - 1.0) <= 1e-12


@pytest.mark.criterion(8)
def test_c08_line_hadamard_never_returns_fully():
    p0 = ob.recurrence_series(H, SYM, Line(), 500)
    assert np.all(p0[1:] < 1.0)


@pytest.mark.criterion(8)
def test_c08_polya_increases_with_theta():
    ps = [ob.polya_number(coin_deg(th), SYM, Line(), 200) for th in (15, 45, 75)]
    assert ps[0] < ps[1] < ps[2]


# 9


@pytest.mark.criterion(9)
def test_c09_trajectory_enumeration_equals_density():
    ch = chn.bit_flip(0.3)
    branches = list(chn.enumerate_trajectories(init_pure(SYM, Line()), H, ch, 6))
    assert len(branches) == 2**6
    mix = chn.density_from_trajectories(iter(branches))
    rho = evolve_density(init_density(SYM, Line()), H, 6, ch)
    assert np.max(np.abs(mix.matrix - rho.matrix)) <= 1e-10


# 10


@pytest.mark.criterion(10)
@pytest.mark.parametrize("n_th", [0.0, 0.5])
@pytest.mark.parametrize("gt", [0.1, 0.5])
def test_c10_gad_closed_form(n_th, gt):
    temp = 0.0 if n_th == 0 else 1.0 / math.log(1.0 + 1.0 / n_th)
    rng = np.random.default_rng(10)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    rho0 = np.outer(v, v.conj())
    k = 20
    g = chn.GadParams(1.0, temp, gt / k)
    assert abs(g.n_th - n_th) < 1e-12
    ch = chn.generalized_amplitude_damping(g)
    r = rho0
    for _ in range(k):
        r = chn.apply_channel(r, ch)
    sz, sm = chn.bloch_components(rho0)
    assert np.max(np.abs(r - chn.closed_form_gad_state(sz, sm, g, gt))) <= 1e-8


# 11


def _history(coin, t_max, spec):
    width = 2 * t_max + 3
    a = np.zeros((t_max + 1, 2, width), dtype=np.complex128)
    s = init_pure(spec, Line())
    a[0, :, t_max + 1] = s.amps[:, 0]
    for t, s in enumerate(iter_evolve(s, coin, t_max), start=1):
        a[t, :, t_max + 1 - t : t_max + 2 + t] = s.amps
    return a


@pytest.mark.criterion(11)
def test_c11_klein_gordon_identity():
    th = 0.7
    psi_r = _history(su2_coin(CoinParams(0.0, th, -math.pi / 2)), 50, SYM)[:, 1]
    rng = np.random.default_rng(11)
    for t, j in zip(rng.integers(1, 50, 300), rng.integers(1, psi_r.shape[1] - 1, 300)):
        lhs = psi_r[t + 1, j] + psi_r[t - 1, j]
        rhs = math.cos(th) * (psi_r[t, j + 1] + psi_r[t, j - 1])
        assert abs(lhs - rhs) <= 1e-10


@pytest.mark.criterion(11)
@pytest.mark.parametrize("comp", [0, 1])
def test_c11_decoupled_recursion(comp):
    xi, th = 0.4, 0.9
    a = _history(su2_coin(CoinParams(xi, th, 0.0)), 50, SYM)[:, comp]
    rng = np.random.default_rng(12)
    for t, m in zip(rng.integers(2, 51, 300), rng.integers(1, a.shape[1] - 1, 300)):
        pred = math.cos(th) * (np.exp(1j * xi) * a[t - 1, m + 1] + np.exp(-1j * xi) * a[t - 1, m - 1]) - a[t - 2, m]
        assert abs(a[t, m] - pred) <= 1e-10


# 12


@pytest.mark.criterion(12)
def test_c12_mixing_ordering():
    t0 = time.perf_counter()
    n = 101
    T = math.ceil(n * math.log(n))
    dev = {}
    for th in (15, 75):
        d = ob.time_averaged_distribution(coin_deg(th), InitialSpec.symmetric(0), Cycle(n), T)
        dev[th] = ob.max_deviation_from_uniform(d)
    assert dev[15] < dev[75]
    assert time.perf_counter() - t0 < 30.0


# 13

HADAMARD_PARAMS = CoinParams.from_degrees(0, 45, 0)


@pytest.mark.criterion(13)
def test_c13_mi_support_half_width():
    prof = mb.evolve_ensemble(mb.EnsembleSpec(40, "mi", Line(), HADAMARD_PARAMS, steps=40))
    target = 20 + 40 * math.cos(math.pi / 4)
    assert abs(mb.support_half_width(prof) - target) <= 2.0


def _mean_site(prof):
    sites, n = mb.density_profile(prof)
    return float(np.dot(sites, n) / n.sum())


@pytest.mark.criterion(13)
def test_c13_damping_with_flip_skews_right():
    damp = chn.amplitude_damping(0.2)
    flip = chn.compose_channels(damp, chn.unitary_channel(PAULI_X, "x"))
    plain = mb.evolve_ensemble(mb.EnsembleSpec(40, "mi", Line(), HADAMARD_PARAMS, damp, 40))
    flipped = mb.evolve_ensemble(mb.EnsembleSpec(40, "mi", Line(), HADAMARD_PARAMS, flip, 40))
    centre = _mean_site(mb.evolve_ensemble(mb.EnsembleSpec(40, "mi", Line(), HADAMARD_PARAMS, steps=40)))
    # documented sign: the flip turns the leftward damping drift into a rightward one
    assert _mean_site(flipped) - centre > 1.0
    assert _mean_site(plain) - centre < -1.0


@pytest.mark.criterion(13)
def test_c13_sf_start_reported_deviation():
    prof = mb.evolve_ensemble(mb.EnsembleSpec(40, "sf", Line(), HADAMARD_PARAMS, steps=25))
    sites, n = mb.density_profile(prof)
    window = n[np.abs(sites) <= 20]
    rel = float(np.max(np.abs(window - window.mean())) / window.mean())
    print(f"SF t=25: mean n_j on |j|<=20 = {window.mean():.4f}, max relative deviation = {rel:.3f}")
    assert rel == pytest.approx(0.596, abs=0.01)
    assert n.sum() == pytest.approx(40.0, abs=1e-9)


# 14


@pytest.mark.criterion(14)
def test_c14_product_configuration_has_zero_entanglement():
    occ = np.zeros((4, 10))
    for i, j in enumerate([0, 2, 5, 9]):
        occ[i, j] = 1.0
    prof = mb.LatticeProfile(np.arange(10), occ, Line(), 0)
    assert mb.meyer_wallach_spatial(prof, 10).value == 0.0


def _projected_vectors(m, coin, t, proj):
    vecs = []
    for spec in mb.mi_initial(m):
        s = evolve(init_pure(spec, Line()), coin, t)
        vecs.append((s.offset, s.amps[proj]))
    lo = min(o for o, _ in vecs)
    hi = max(o + len(v) for o, v in vecs)
    out = []
    for o, v in vecs:
        full = np.zeros(hi - lo, dtype=np.complex128)
        full[o - lo : o - lo + len(v)] = v
        out.append(full)
    return out, hi - lo


@pytest.mark.criterion(14)
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_c14_product_formula_equals_bruteforce(m, t):
    coin = CoinParams.from_degrees(0, 45, 0)
    for proj in (0, 1):
        vecs, L = _projected_vectors(m, coin_from_params(coin), t, proj)
        prof = mb.evolve_ensemble(mb.EnsembleSpec(m, "mi", Line(), coin, steps=t), projection=proj)
        assert prof.site_count == L
        e_prod = mb.meyer_wallach_spatial(prof, L).value
        e_bf = mb.meyer_wallach_bruteforce(vecs, L)
        assert abs(e_prod - e_bf) <= 1e-10


@pytest.mark.criterion(14)
@pytest.mark.parametrize("projection", [None, 0])
def test_c14_closed_chain_theta_half_pi_even_steps(projection):
    e = mb.closed_chain_entanglement(6, CoinParams.from_degrees(0, 90, 0), 12, projection=projection)
    assert np.all(np.abs(e[::2]) <= 1e-10)


@pytest.mark.criterion(14)
@pytest.mark.parametrize("projection", [None, 0])
def test_c14_closed_chain_theta_zero_at_m(projection):
    e = mb.closed_chain_entanglement(6, CoinParams.from_degrees(0, 0, 0), 6, projection=projection)
    assert abs(e[6]) <= 1e-10


@pytest.mark.criterion(14)
@pytest.mark.xfail(strict=True, reason="E(theta) at M=t=20 has no interior minimum at 45 degrees")
@pytest.mark.parametrize("projection", [None, 0])
def test_c14_open_chain_minimum_at_45(projection):
    grid = [5, 15, 25, 35, 45, 55, 65, 75, 85]
    e = [mb.open_chain_entanglement(20, CoinParams.from_degrees(0, th, 0), 20, projection=projection) for th in grid]
    k = grid.index(45)
    assert e[k] < e[k - 1] and e[k] < e[k + 1]


# 15


@pytest.mark.criterion(15)
@pytest.mark.parametrize("config", ["c15_reproducibility.yaml", "c09_trajectories.yaml"])
def test_c15_byte_identical_reruns(tmp_path, config):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        assert main(["run", str(CONFIGS / config), "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0]) > 0


@pytest.mark.criterion(15)
def test_c15_seeded_trajectory_sampling(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"traj{k}.json"
        argv = ["walk-line", "--steps", "30", "--channel", "phase-flip", "--p", "0.2", "--trajectories", "25",
                "--seed", "5", "--format", "json", "--output", str(path)]
        assert main(argv) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
