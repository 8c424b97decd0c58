"""Acceptance suite: one test per release criterion, at the stated tolerances.

Randomized criteria run at a pinned seed so the whole suite is deterministic;
the statistical tolerances for the concentration experiment were frozen from
a calibration run at that seed (hit fraction 1.0, mean ratio within 2e-5 of
the limit, far inside the asserted bounds).
"""

import math
import time

import numpy as np

from amgm import (
    CONVEX_FUNCTIONS,
    ConjugatePair,
    DataVector,
    DiscreteMeasure,
    GeometryConstants,
    SeededStream,
    WeightVector,
    amgm_gap,
    ball_volume_mc_check,
    equality_diagnosis,
    gap_comparison,
    gm_am_ratio,
    holder_multi,
    holder_refinement,
    jensen_gap_comparison,
    ratio_bounds,
    sampler_equivalence_check,
    variance_lower_bound,
    weighted_arithmetic_mean,
    weighted_geometric_mean,
    young_refinement,
)
from amgm.cli import main
from amgm.experiments import ExperimentConfig, ratio_concentration_experiment
from amgm.sampling import EXP_NEG_EULER_GAMMA

ACCEPT_SEED = 20250809


def report(number: int, label: str, detail: str) -> None:
    print(f"ACCEPTANCE {number:2d} PASS  {label}: {detail}")


def random_weights(rng, n, scheme_roll):
    """Weights drawn from one of the four supported schemes."""
    if scheme_roll < 0.25:
        return WeightVector.uniform(n)
    if scheme_roll < 0.5:
        rho = (0.5, 0.9, 0.99)[int(rng.integers(0, 3))]
        w = rho ** np.arange(1, n + 1)
        return WeightVector(w / w.sum(), renormalize=True)
    if scheme_roll < 0.75:
        while True:
            w = rng.dirichlet(np.ones(n))
            if np.all(w > 0.0):
                return WeightVector(w, renormalize=True)
    # file-style weights: decimal-rounded, repaired by renormalization
    while True:
        w = np.round(rng.dirichlet(np.ones(n)), 9)
        if np.all(w > 0.0) and abs(w.sum() - 1.0) <= 1e-6:
            return WeightVector(w, renormalize=True)


def random_data(rng, n):
    x = 10.0 ** rng.uniform(-8.0, 8.0, n)
    roll = rng.random()
    if roll < 0.05:
        x[:] = x[0]
    elif roll < 0.2:
        k = int(rng.integers(1, n))
        x[rng.choice(n, size=k, replace=False)] = 0.0
    return DataVector(x)


def test_criterion_01_gap_sandwich():
    """Two-sided gap envelope on 1e5 stress instances, slack 1e-10, <30 s."""
    rng = np.random.default_rng(ACCEPT_SEED)
    start = time.perf_counter()
    worst = -math.inf
    for _ in range(100_000):
        n = int(rng.integers(2, 65))
        alpha = random_weights(rng, n, rng.random())
        beta = random_weights(rng, n, rng.random())
        x = random_data(rng, n)
        comp = gap_comparison(alpha, beta, x)
        scale = max(
            1.0,
            weighted_arithmetic_mean(alpha, x),
            comp.profile.max_quotient * weighted_arithmetic_mean(beta, x),
        )
        slack = max(comp.lower - comp.gap_alpha, comp.gap_alpha - comp.upper) / scale
        worst = max(worst, slack)
        assert slack <= 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(1, "gap sandwich", f"1e5 instances, worst slack {worst:.2e}, {elapsed:.1f}s")


def test_criterion_02_example_fixture():
    """alpha=(2/3,1/6,1/6) against uniform on x=(1,2,1/2): left equality at 1/12."""
    alpha = WeightVector([2 / 3, 1 / 6, 1 / 6])
    beta = WeightVector.uniform(3)
    x = DataVector([1.0, 2.0, 0.5])
    comp = gap_comparison(alpha, beta, x)
    assert abs(comp.gap_alpha - 1.0 / 12.0) <= 1e-12
    assert abs(comp.gap_alpha - 0.5 * comp.gap_beta) <= 1e-12
    assert comp.gap_alpha < comp.upper - 1e-3  # right side strictly slack
    diag = equality_diagnosis(alpha, beta, x)
    assert diag.left_equal is True
    assert diag.right_equal is False
    report(2, "worked example", f"gap_alpha={comp.gap_alpha:.15f} = gap_beta/2, "
           f"left equal, right strict")


def test_criterion_03_variance_lower_bound():
    """sqrt-variance stays below the gap on 1e5 instances, slack 1e-10."""
    rng = np.random.default_rng(ACCEPT_SEED + 1)
    worst = -math.inf
    for _ in range(100_000):
        n = int(rng.integers(2, 33))
        w = random_weights(rng, n, rng.random())
        x = random_data(rng, n)
        gap = amgm_gap(w, x)
        var = variance_lower_bound(w, x)
        slack = (var - gap) / max(1.0, weighted_arithmetic_mean(w, x))
        worst = max(worst, slack)
        assert slack <= 1e-10
    report(3, "variance bound", f"1e5 instances, worst slack {worst:.2e}")


def test_criterion_04_young_holder_envelopes():
    """Envelope ordering on 1e5 instances; collapse and the 2-function match."""
    rng = np.random.default_rng(ACCEPT_SEED + 2)
    worst = -math.inf
    for _ in range(100_000):
        m = int(rng.integers(1, 17))
        masses = rng.uniform(0.0, 1.0, m)
        if not masses.sum() > 0.0:
            masses[0] = 1.0
        mu = DiscreteMeasure(masses)
        f = rng.uniform(0.0, 1e3, m)
        g = rng.uniform(0.0, 1e3, m)
        keep = masses > 0.0
        if not (np.any(keep & (f > 0.0)) and np.any(keep & (g > 0.0))):
            f[np.argmax(masses)] = 1.0
            g[np.argmax(masses)] = 1.0
        p = float(rng.uniform(1.0 + 1e-6, 10.0))
        pq = ConjugatePair.from_p(p)
        beta = float(rng.uniform(0.01, 0.99))
        env = holder_refinement(DataVector(f), DataVector(g), mu, pq, beta)
        scale = max(1.0, env.classical)
        slack = max(env.lower - env.inner, env.inner - env.upper,
                    env.upper - env.classical) / scale
        if p >= 1.01:  # q <= 101 keeps 1e3**q inside the double range
            u, v = float(f[0]), float(g[0])
            ylo, ymid, yhi = young_refinement(u, v, pq, beta)
            yscale = max(1.0, u**pq.p + v**pq.q)
            slack = max(slack, (ylo - ymid) / yscale, (ymid - yhi) / yscale)
        worst = max(worst, slack)
        assert slack <= 1e-10
    # collapse at beta = 1/p
    rng2 = np.random.default_rng(ACCEPT_SEED + 3)
    for _ in range(1000):
        m = int(rng2.integers(1, 17))
        mu = DiscreteMeasure(rng2.uniform(0.05, 1.0, m))
        f = DataVector(rng2.uniform(0.1, 1e3, m))
        g = DataVector(rng2.uniform(0.1, 1e3, m))
        p = float(rng2.uniform(1.1, 10.0))
        env = holder_refinement(f, g, mu, ConjugatePair.from_p(p), 1.0 / p)
        scale = max(1.0, env.classical)
        assert abs(env.lower - env.inner) <= 1e-12 * scale
        assert abs(env.upper - env.inner) <= 1e-12 * scale
        # two-function case is the k=2 multi-function case at beta = 1/2
        pq = ConjugatePair.from_p(p)
        multi = holder_multi([f, g], [pq.p, pq.q], mu)
        half = holder_refinement(f, g, mu, pq, 0.5)
        assert abs(multi.lower - half.lower) <= 1e-12 * scale
        assert abs(multi.upper - half.upper) <= 1e-12 * scale
        assert abs(multi.inner - half.inner) <= 1e-12 * scale
        assert abs(multi.classical - half.classical) <= 1e-12 * scale
    report(4, "Young/Holder envelopes", "1e5 orderings, collapses at 1e-12")


def test_criterion_05_jensen_consistency():
    """exp-Jensen on logged data reproduces the AM-GM comparison, 1e4 runs."""
    rng = np.random.default_rng(ACCEPT_SEED + 4)
    exp_f = CONVEX_FUNCTIONS["exp"]
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(2, 33))
        alpha = random_weights(rng, n, rng.random())
        beta = random_weights(rng, n, rng.random())
        x = DataVector(10.0 ** rng.uniform(0.0, 8.0, n))
        logs = DataVector(np.log(x.values))
        jc = jensen_gap_comparison(alpha, beta, logs, exp_f, probe=False)
        gc = gap_comparison(alpha, beta, x)
        scale = max(
            1.0,
            weighted_arithmetic_mean(alpha, x),
            gc.profile.max_quotient * weighted_arithmetic_mean(beta, x),
        )
        diff = max(
            abs(jc.gap_alpha - gc.gap_alpha),
            abs(jc.gap_beta - gc.gap_beta),
            abs(jc.lower - gc.lower),
            abs(jc.upper - gc.upper),
        ) / scale
        worst = max(worst, diff)
        assert diff <= 1e-10
    report(5, "Jensen consistency", f"1e4 instances, worst deviation {worst:.2e}")


def test_criterion_06_concentration_at_limit():
    """n=1e4, 200 trials, eps=0.05: hits >= 0.99 and mean within 0.01, <60 s."""
    start = time.perf_counter()
    cfg = ExperimentConfig(
        n_values=(10_000,), trials=200, epsilon=0.05, lam=1.0, base_seed=ACCEPT_SEED
    )
    (res,) = ratio_concentration_experiment(cfg)
    elapsed = time.perf_counter() - start
    assert res.hit_fraction >= 0.99
    assert abs(res.mean_ratio - 0.56145948) <= 0.01
    assert elapsed < 60.0
    report(6, "ratio concentration", f"hit={res.hit_fraction:.3f} "
           f"mean={res.mean_ratio:.6f} (limit {EXP_NEG_EULER_GAMMA:.6f}), {elapsed:.1f}s")


def test_criterion_07_rate_and_scale_invariance():
    """Coupled rates give identical hits; the ratio ignores rescaling."""
    base = dict(n_values=(10_000,), trials=200, epsilon=0.05, base_seed=ACCEPT_SEED)
    slow = ratio_concentration_experiment(ExperimentConfig(lam=0.5, **base))[0]
    fast = ratio_concentration_experiment(ExperimentConfig(lam=2.0, **base))[0]
    assert slow.hit_fraction == fast.hit_fraction
    rng = np.random.default_rng(ACCEPT_SEED + 5)
    for _ in range(500):
        n = int(rng.integers(2, 100))
        x = 10.0 ** rng.uniform(-4, 4, n)
        r = gm_am_ratio(DataVector(x))
        for t in (1e-6, 1e6):
            rt = gm_am_ratio(DataVector(t * x))
            assert abs(rt - r) <= 1e-12 * r
    report(7, "rate/scale invariance", f"hit({0.5})=hit({2.0})={slow.hit_fraction}, "
           "ratio invariant to 1e-12 under 1e+/-6 rescaling")


def test_criterion_08_sampler_equivalence():
    """P(ratio > u) matches between exponential and sphere sampling, 4 SE."""
    details = []
    for k, u in enumerate((0.4, 0.5615, 0.7)):
        p_exp, p_sph = sampler_equivalence_check(
            50, 100_000, u, SeededStream(ACCEPT_SEED, k)
        )
        pooled = 0.5 * (p_exp + p_sph)
        four_se = 4.0 * math.sqrt(pooled * (1.0 - pooled) * 2.0 / 100_000)
        assert abs(p_exp - p_sph) <= four_se
        details.append(f"u={u}: |{p_exp:.4f}-{p_sph:.4f}|<={four_se:.4f}")
    report(8, "sampler equivalence", "; ".join(details))


def test_criterion_09_geometry_constants():
    """Cube-sampling volume estimates hit 1/n!; closed-form identity to 1e-12."""
    details = []
    for k, n in enumerate(range(2, 7)):
        est = ball_volume_mc_check(n, 100_000, SeededStream(ACCEPT_SEED, 100 + k))
        target = 1.0 / math.factorial(n)
        three_se = 3.0 * math.sqrt(target * (1.0 - target) / 100_000)
        assert abs(est - target) <= three_se
        details.append(f"n={n}: |{est:.5f}-{target:.5f}|<={three_se:.5f}")
    for n in range(2, 21):
        g = GeometryConstants.for_dimension(n)
        identity = n * math.sqrt(n) * g.ball_volume
        assert abs(g.sphere_area - identity) <= 1e-12 * identity
    report(9, "geometry constants", "; ".join(details[:3]) + "; identity<=1e-12 for n<=20")


def test_criterion_10_ratio_sandwich():
    """Equal-weights-ratio powers bracket the weighted ratio: 1e5 trials clean."""
    rng = np.random.default_rng(ACCEPT_SEED + 6)
    violations = 0
    worst = -math.inf
    for _ in range(100_000):
        n = int(rng.integers(2, 33))
        alpha = random_weights(rng, n, rng.random())
        x = 10.0 ** rng.uniform(-8.0, 8.0, n)
        if rng.random() < 0.1:
            x[int(rng.integers(0, n))] = 0.0
        xv = DataVector(x)
        low, high = ratio_bounds(alpha, xv)
        ratio = weighted_geometric_mean(alpha, xv) / weighted_arithmetic_mean(alpha, xv)
        slack = max(low - ratio, ratio - high)
        worst = max(worst, slack)
        if slack > 1e-12:  # float-equality band; quantities all lie in [0, 1]
            violations += 1
    assert violations == 0
    report(10, "GM/AM ratio sandwich", f"1e5 trials, zero violations, "
           f"worst margin {worst:.2e}")


def test_criterion_11_byte_identical_reruns(tmp_path):
    """Identical configs reproduce byte-identical experiment CSV, all kinds."""
    for kind, scheme in (
        ("ratio", "uniform"),
        ("gap", "geometric_decay(0.99)"),
        ("wratio", "dirichlet_random"),
    ):
        first = tmp_path / f"{kind}_a.csv"
        second = tmp_path / f"{kind}_b.csv"
        argv = ["experiment", kind, "--n", "500,1000", "--trials", "100",
                "--epsilon", "0.05", "--seed", str(ACCEPT_SEED),
                "--scheme", scheme]
        assert main(argv + ["--out", str(first)]) == 0
        assert main(argv + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().startswith("n,trials,epsilon,lambda,scheme,")
    report(11, "deterministic reruns", "ratio/gap/wratio CSVs byte-identical")
