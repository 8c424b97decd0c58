"""Seeded Monte Carlo experiments and the randomized inequality suite.

The experiments sample iid exponential coordinate vectors, one substream per
trial (trial t of the block for the i-th requested dimension reads stream
``i * trials + t``), and report how often a per-trial statistic falls
strictly inside a two-sided interval:

* ``ratio``  - the equal-weights GM/AM ratio against
  ``((1-eps)*L, (1+eps)*L)`` with L = exp(-gamma) = 0.5614594...
* ``gap``    - the weighted AM-GM gap divided by the l1 norm against
  ``((1-(1+eps)*L)*min(w), (1-(1-eps)*L)*max(w))``
* ``wratio`` - the weighted GM/AM ratio against
  ``((1-eps)*exp(-n*max(w)*gamma), (1+eps)*exp(-n*min(w)*gamma))``,
  each trial additionally checked against the equal-weights-ratio sandwich
  ``r**(n*max(w)) <= ratio <= r**(n*min(w))``.

Rather than promising a dimension threshold for a target exceedance rate,
results carry the empirical exceedance and the implied exponent
``-ln(1 - hit_fraction)/ln(n)``.

Reruns with an identical config are byte-identical: all randomness flows
from the documented stream derivation and CSV floats print with 17
significant digits.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DataVector,
    DomainError,
    GAP_CLAMP_RTOL,
    WeightVector,
    amgm_gap,
    gap_comparison,
    ratio_bounds,
    variance_lower_bound,
    weighted_arithmetic_mean,
    weighted_geometric_mean,
)
from .holder import (
    ConjugatePair,
    DiscreteMeasure,
    holder_multi,
    holder_refinement,
    young_refinement,
)
from .jensen import CONVEX_FUNCTIONS, jensen_gap_comparison
from .sampling import EXP_NEG_EULER_GAMMA, SeededStream, _ratio_rows

EULER_GAMMA = float(np.euler_gamma)

#: Stream indices at and above this value are reserved for weight draws so
#: they never collide with per-trial sample streams.
WEIGHT_STREAM_BASE = 1 << 48

#: Default relative slack (at scale max(1, magnitude)) for suite checks.
SUITE_REL_SLACK = 1e-10

CSV_HEADER = (
    "n,trials,epsilon,lambda,scheme,hit_fraction,mean_ratio,"
    "q01,q50,q99,bound_left,bound_right,base_seed"
)


@dataclass(frozen=True)
class WeightScheme:
    """How the per-dimension weight vector is produced.

    The explicit scheme takes the weights either from a file (one per line)
    or inline; inline wins when both are set.
    """

    kind: str  # uniform | dirichlet_random | geometric_decay | explicit
    rho: float | None = None
    path: str | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "dirichlet_random", "geometric_decay", "explicit"):
            raise DomainError(f"unknown weight scheme {self.kind!r}")
        if self.kind == "geometric_decay":
            if self.rho is None or not 0.0 < self.rho <= 1.0:
                raise DomainError("geometric_decay needs a decay rate in (0, 1]")
        if self.kind == "explicit" and not self.path and self.values is None:
            raise DomainError("explicit scheme needs a weights file or inline weights")

    @property
    def label(self) -> str:
        if self.kind == "geometric_decay":
            return f"geometric_decay({self.rho:g})"
        return self.kind

    def build(self, n: int, base_seed: int, block: int) -> WeightVector:
        """Weight vector for dimension n (block = index of n in the config)."""
        if self.kind == "uniform":
            return WeightVector.uniform(n)
        if self.kind == "dirichlet_random":
            gen = SeededStream(base_seed, WEIGHT_STREAM_BASE + block).generator()
            while True:
                e = -np.log1p(-gen.random(n))
                if np.all(e > 0.0):
                    return WeightVector(e / e.sum(), renormalize=True)
        if self.kind == "geometric_decay":
            logs = np.arange(1, n + 1) * math.log(self.rho)
            logs -= logs.max()
            w = np.exp(logs)
            return WeightVector(w / w.sum(), renormalize=True)
        if self.values is not None:
            w = np.asarray(self.values, dtype=float)
            if w.size != n:
                raise DomainError(f"explicit weights have length {w.size}, need {n}")
            return WeightVector(w, renormalize=True)
        return WeightVector(load_weights_file(self.path, expected_n=n), renormalize=True)


def load_weights_file(path: str, expected_n: int | None = None) -> np.ndarray:
    """Read one weight per line; blank lines and '#' comments are skipped."""
    weights: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                weights.append(float(text))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: not a number: {text!r}") from exc
    if expected_n is not None and len(weights) != expected_n:
        raise DomainError(
            f"{path}: has {len(weights)} weights but the experiment needs {expected_n}"
        )
    return np.asarray(weights, dtype=float)


def parse_weight_scheme(text: str, weights_file: str | None = None) -> WeightScheme:
    """Parse 'uniform', 'dirichlet_random', 'geometric_decay(rho)' or 'explicit'."""
    text = text.strip()
    if text in ("uniform", "dirichlet_random"):
        return WeightScheme(text)
    m = re.fullmatch(r"geometric_decay\(([^)]+)\)", text)
    if m:
        return WeightScheme("geometric_decay", rho=float(m.group(1)))
    m = re.fullmatch(r"explicit(?:\(([^)]+)\))?", text)
    if m:
        return WeightScheme("explicit", path=m.group(1) or weights_file)
    raise DomainError(f"cannot parse weight scheme {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    trials: int
    epsilon: float
    lam: float = 1.0
    base_seed: int = 0
    scheme: WeightScheme = WeightScheme("uniform")
    output_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise DomainError("every dimension must be an integer >= 2")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError("epsilon must lie in [0, 1)")
        if self.epsilon == 0.0:
            warnings.warn(
                "epsilon = 0 leaves a degenerate open interval; the hit fraction "
                "only measures strict inequality",
                RuntimeWarning,
                stacklevel=2,
            )
        if not self.lam > 0.0:
            raise DomainError("lambda must be positive")
        SeededStream(self.base_seed)  # validates the seed range


@dataclass(frozen=True)
class ExperimentResult:
    """Per-dimension statistics of one experiment, with seed provenance."""

    n: int
    trials: int
    epsilon: float
    lam: float
    scheme: str
    hit_fraction: float
    mean_ratio: float
    q01: float
    q50: float
    q99: float
    bound_left: float
    bound_right: float
    base_seed: int
    stream_start: int
    stream_stop: int
    boundary_hits: int
    diagnostics: dict[str, float] = field(default_factory=dict)

    @property
    def implied_exponent(self) -> float:
        """-ln(1 - hit_fraction)/ln(n), the empirical exceedance exponent."""
        if self.hit_fraction >= 1.0:
            return math.inf
        return -math.log(1.0 - self.hit_fraction) / math.log(self.n)


def _trial_uniforms(cfg: ExperimentConfig, n: int, block: int) -> np.ndarray:
    """(trials, n) matrix of U[0,1) draws, one stream per trial row."""
    start = block * cfg.trials
    rows = np.empty((cfg.trials, n))
    for t in range(cfg.trials):
        rows[t] = SeededStream(cfg.base_seed, start + t).generator().random(n)
    return rows


def _summarize(
    cfg: ExperimentConfig,
    n: int,
    block: int,
    stats: np.ndarray,
    left: float,
    right: float,
    diagnostics: dict[str, float],
) -> ExperimentResult:
    hits = (stats > left) & (stats < right)
    boundary = int(np.count_nonzero((stats == left) | (stats == right)))
    q01, q50, q99 = np.quantile(stats, [0.01, 0.5, 0.99])
    return ExperimentResult(
        n=n,
        trials=cfg.trials,
        epsilon=cfg.epsilon,
        lam=cfg.lam,
        scheme=cfg.scheme.label,
        hit_fraction=float(hits.mean()),
        mean_ratio=float(stats.mean()),
        q01=float(q01),
        q50=float(q50),
        q99=float(q99),
        bound_left=left,
        bound_right=right,
        base_seed=cfg.base_seed,
        stream_start=block * cfg.trials,
        stream_stop=(block + 1) * cfg.trials,
        boundary_hits=boundary,
        diagnostics=diagnostics,
    )


def ratio_concentration_experiment(cfg: ExperimentConfig) -> list[ExperimentResult]:
    """Fraction of trials with the equal-weights GM/AM ratio inside
    ((1-eps)*L, (1+eps)*L), L = exp(-gamma)."""
    left = (1.0 - cfg.epsilon) * EXP_NEG_EULER_GAMMA
    right = (1.0 + cfg.epsilon) * EXP_NEG_EULER_GAMMA
    results = []
    for block, n in enumerate(cfg.n_values):
        x = -np.log1p(-_trial_uniforms(cfg, n, block)) / cfg.lam
        stats = _ratio_rows(x)
        results.append(_summarize(cfg, n, block, stats, left, right, {}))
    return results


def _weighted_rows(x: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(AM, GM) of each row under weights w, zero-aware log-domain GM."""
    am = np.sum(x * w, axis=1)
    has_zero = (x == 0.0).any(axis=1)
    gm = np.exp(np.sum(np.log(np.where(x > 0.0, x, 1.0)) * w, axis=1))
    return am, np.where(has_zero, 0.0, gm)


def weighted_gap_experiment(cfg: ExperimentConfig) -> list[ExperimentResult]:
    """Fraction of trials with gap(w, x)/norm1(x) strictly inside
    ((1-(1+eps)*L)*min(w), (1-(1-eps)*L)*max(w)).

    With uniform weights the event coincides with the ratio-concentration
    event; the diagnostics record the unweighted event on the same draws and
    how often the implication from it failed (never, up to rounding).
    """
    c = EXP_NEG_EULER_GAMMA
    results = []
    for block, n in enumerate(cfg.n_values):
        w = cfg.scheme.build(n, cfg.base_seed, block)
        x = -np.log1p(-_trial_uniforms(cfg, n, block)) / cfg.lam
        am, gm = _weighted_rows(x, w.weights)
        gap = am - gm
        gap = np.where((gap < 0.0) & (gap >= -GAP_CLAMP_RTOL * am), 0.0, gap)
        stats = gap / x.sum(axis=1)
        left = (1.0 - (1.0 + cfg.epsilon) * c) * w.min
        right = (1.0 - (1.0 - cfg.epsilon) * c) * w.max
        r = _ratio_rows(x)
        r_hit = ((1.0 - cfg.epsilon) * c < r) & (r < (1.0 + cfg.epsilon) * c)
        g_hit = (stats > left) & (stats < right)
        diagnostics = {
            "unweighted_hit_fraction": float(r_hit.mean()),
            "implication_failures": float(np.count_nonzero(r_hit & ~g_hit)),
        }
        results.append(_summarize(cfg, n, block, stats, left, right, diagnostics))
    return results


def weighted_ratio_experiment(cfg: ExperimentConfig) -> list[ExperimentResult]:
    """Fraction of trials with the weighted GM/AM ratio strictly inside
    ((1-eps)*exp(-n*max(w)*gamma), (1+eps)*exp(-n*min(w)*gamma)).

    Every trial is also checked against the equal-weights sandwich
    r**(n*max(w)) <= ratio <= r**(n*min(w)); a breach beyond 1e-12 aborts,
    since it would mean a computation bug rather than randomness.
    """
    results = []
    for block, n in enumerate(cfg.n_values):
        w = cfg.scheme.build(n, cfg.base_seed, block)
        x = -np.log1p(-_trial_uniforms(cfg, n, block)) / cfg.lam
        am, gm = _weighted_rows(x, w.weights)
        with np.errstate(invalid="ignore", divide="ignore"):
            stats = np.where(am > 0.0, gm / np.where(am > 0.0, am, 1.0), 0.0)
        n_wmax = n * w.max
        n_wmin = n * w.min
        r = _ratio_rows(x)
        low, high = r**n_wmax, r**n_wmin
        if np.any(low - stats > 1e-12) or np.any(stats - high > 1e-12):
            raise RuntimeError("weighted ratio escaped the equal-weights-ratio sandwich")
        left = (1.0 - cfg.epsilon) * math.exp(-n_wmax * EULER_GAMMA)
        right = (1.0 + cfg.epsilon) * math.exp(-n_wmin * EULER_GAMMA)
        diagnostics = {"sandwich_violations": 0.0}
        results.append(_summarize(cfg, n, block, stats, left, right, diagnostics))
    return results


EXPERIMENTS = {
    "ratio": ratio_concentration_experiment,
    "gap": weighted_gap_experiment,
    "wratio": weighted_ratio_experiment,
}


def run_experiment(kind: str, cfg: ExperimentConfig) -> list[ExperimentResult]:
    try:
        fn = EXPERIMENTS[kind]
    except KeyError:
        raise DomainError(f"unknown experiment {kind!r}") from None
    return fn(cfg)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def results_to_csv(results: list[ExperimentResult]) -> str:
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    str(r.trials),
                    _fmt(r.epsilon),
                    _fmt(r.lam),
                    r.scheme,
                    _fmt(r.hit_fraction),
                    _fmt(r.mean_ratio),
                    _fmt(r.q01),
                    _fmt(r.q50),
                    _fmt(r.q99),
                    _fmt(r.bound_left),
                    _fmt(r.bound_right),
                    str(r.base_seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def result_to_dict(r: ExperimentResult) -> dict:
    return {
        "n": r.n,
        "trials": r.trials,
        "epsilon": r.epsilon,
        "lambda": r.lam,
        "scheme": r.scheme,
        "hit_fraction": r.hit_fraction,
        "mean_ratio": r.mean_ratio,
        "q01": r.q01,
        "q50": r.q50,
        "q99": r.q99,
        "bound_left": r.bound_left,
        "bound_right": r.bound_right,
        "base_seed": r.base_seed,
        "stream_start": r.stream_start,
        "stream_stop": r.stream_stop,
        "boundary_hits": r.boundary_hits,
        # infinity (every trial hit) is not valid strict JSON
        "implied_exponent": r.implied_exponent if math.isfinite(r.implied_exponent) else None,
        "diagnostics": r.diagnostics,
    }


# --------------------------------------------------------------------------
# Randomized inequality suite
# --------------------------------------------------------------------------


@dataclass
class SuiteCheck:
    name: str
    evaluations: int = 0
    violations: int = 0
    worst_slack: float = -math.inf

    def record(self, slack: float) -> None:
        self.evaluations += 1
        if slack > self.worst_slack:
            self.worst_slack = slack
        if slack > SUITE_REL_SLACK:
            self.violations += 1


@dataclass(frozen=True)
class SuiteReport:
    trials: int
    checks: tuple[SuiteCheck, ...]

    @property
    def total_violations(self) -> int:
        return sum(c.violations for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "total_violations": self.total_violations,
            "checks": [
                {
                    "name": c.name,
                    "evaluations": c.evaluations,
                    "violations": c.violations,
                    "worst_slack": None if c.worst_slack == -math.inf else c.worst_slack,
                }
                for c in self.checks
            ],
        }


def _suite_weights(gen: np.random.Generator, n: int, spiky: bool) -> WeightVector:
    if spiky:
        w = np.exp(gen.normal(0.0, 8.0, n))
    else:
        while True:
            w = -np.log1p(-gen.random(n))
            if np.all(w > 0.0):
                break
    return WeightVector(w / w.sum(), renormalize=True)


def _suite_data(gen: np.random.Generator, n: int) -> DataVector:
    roll = gen.random()
    if roll < 0.03:
        return DataVector(np.zeros(n))
    if roll < 0.08:
        return DataVector(np.full(n, float(10.0 ** gen.uniform(-8, 8))))
    x = 10.0 ** gen.uniform(-8.0, 8.0, n)
    if roll < 0.23:
        k = int(gen.integers(1, n))
        x[gen.choice(n, size=k, replace=False)] = 0.0
    return DataVector(x)


def inequality_suite(
    trials: int, stream: SeededStream, inject_bug: bool = False
) -> SuiteReport:
    """Assert the package's inequalities on random stress instances.

    Each trial draws weights (occasionally nearly degenerate), data spanning
    fourteen orders of magnitude with zeros and constants mixed in, and
    checks the variance bound, the gap sandwich and the GM/AM-ratio sandwich;
    Young/Holder/multi-Holder/Jensen instances rotate across trials.  A
    violation is any breach beyond 1e-10 relative at scale max(1, magnitude).
    ``inject_bug`` flips the min/max quotient constants in the sandwich check
    to demonstrate the harness notices.
    """
    if trials < 0:
        raise DomainError("trials must be nonnegative")
    checks = {
        name: SuiteCheck(name)
        for name in (
            "variance_vs_gap",
            "gap_sandwich",
            "ratio_sandwich",
            "young_envelope",
            "holder_envelope",
            "holder_multi_envelope",
            "jensen_envelope",
        )
    }
    gen = stream.generator()
    fn_names = list(CONVEX_FUNCTIONS)
    for t in range(trials):
        n = 64 if gen.random() < 0.03 else int(gen.integers(2, 13))
        alpha = _suite_weights(gen, n, spiky=gen.random() < 0.2)
        beta = _suite_weights(gen, n, spiky=gen.random() < 0.2)
        x = _suite_data(gen, n)

        am_a = weighted_arithmetic_mean(alpha, x)
        gap_a = amgm_gap(alpha, x)
        checks["variance_vs_gap"].record(
            (variance_lower_bound(alpha, x) - gap_a) / max(1.0, am_a)
        )

        comp = gap_comparison(alpha, beta, x)
        lower, upper = comp.lower, comp.upper
        if inject_bug:
            lower = comp.profile.max_quotient * comp.gap_beta
            upper = comp.profile.min_quotient * comp.gap_beta
        # cancellation error lives at the scale of the means, amplified by the
        # largest quotient, so that is the scale violations are measured at
        am_b = weighted_arithmetic_mean(beta, x)
        scale = max(1.0, am_a, comp.profile.max_quotient * am_b)
        checks["gap_sandwich"].record(
            max(lower - comp.gap_alpha, comp.gap_alpha - upper) / scale
        )

        if np.any(x.values > 0.0):
            bl, bu = ratio_bounds(alpha, x)
            ratio = weighted_geometric_mean(alpha, x) / weighted_arithmetic_mean(alpha, x)
            checks["ratio_sandwich"].record(max(bl - ratio, ratio - bu))

        extra = t % 4
        if extra == 0:
            p = float(gen.uniform(1.05, 10.0))
            pq = ConjugatePair.from_p(p)
            betay = float(gen.uniform(0.01, 0.99))
            u = 0.0 if gen.random() < 0.1 else float(10.0 ** gen.uniform(-4, 3))
            v = 0.0 if gen.random() < 0.1 else float(10.0 ** gen.uniform(-4, 3))
            lo, mid, hi = young_refinement(u, v, pq, betay)
            yscale = max(1.0, u**pq.p + v**pq.q)
            checks["young_envelope"].record(max(lo - mid, mid - hi) / yscale)
        elif extra == 1:
            env = _random_holder_instance(gen)
            if env is not None:
                hs = max(1.0, env.classical)
                checks["holder_envelope"].record(
                    max(env.lower - env.inner, env.inner - env.upper, env.upper - env.classical)
                    / hs
                )
        elif extra == 2:
            env = _random_multi_instance(gen)
            if env is not None:
                hs = max(1.0, env.classical)
                checks["holder_multi_envelope"].record(
                    max(env.lower - env.inner, env.inner - env.upper, env.upper - env.classical)
                    / hs
                )
        else:
            name = fn_names[int(gen.integers(0, len(fn_names)))]
            if name == "neg-log" and np.any(x.values == 0.0):
                name = "square"
            xs = x.values
            if name == "exp":
                xs = np.minimum(xs, 50.0)
            jx = DataVector(xs)
            f = CONVEX_FUNCTIONS[name]
            jc = jensen_gap_comparison(alpha, beta, jx, f, probe=False)
            fx = np.abs(f(jx.values))
            mf_a = float(np.sum(alpha.weights * fx))
            mf_b = float(np.sum(beta.weights * fx))
            jscale = max(1.0, mf_a, jc.profile.max_quotient * mf_b)
            checks["jensen_envelope"].record(
                max(jc.lower - jc.gap_alpha, jc.gap_alpha - jc.upper) / jscale
            )
    return SuiteReport(trials=trials, checks=tuple(checks.values()))


def _random_holder_instance(gen: np.random.Generator):
    m = int(gen.integers(1, 17))
    masses = gen.random(m)
    if m > 1 and gen.random() < 0.2:
        masses[gen.integers(0, m)] = 0.0
    if not masses.sum() > 0.0:
        masses[0] = 1.0
    f = 10.0 ** gen.uniform(-2.0, 3.0, m)
    g = 10.0 ** gen.uniform(-2.0, 3.0, m)
    if m > 1 and gen.random() < 0.2:
        f[gen.integers(0, m)] = 0.0
    mu = DiscreteMeasure(masses)
    pq = ConjugatePair.from_p(float(gen.uniform(1.05, 10.0)))
    beta = float(gen.uniform(0.01, 0.99))
    keep = (masses > 0.0)
    if not (np.any(keep & (f > 0.0)) and np.any(keep & (g > 0.0))):
        return None
    return holder_refinement(DataVector(f), DataVector(g), mu, pq, beta)


def _random_multi_instance(gen: np.random.Generator):
    k = int(gen.integers(2, 5))
    m = int(gen.integers(1, 17))
    masses = gen.random(m) + 0.01
    inv = gen.random(k) + 0.05
    inv = inv / inv.sum()
    ps = [float(1.0 / s) for s in inv]
    fs = [DataVector(10.0 ** gen.uniform(-2.0, 3.0, m)) for _ in range(k)]
    return holder_multi(fs, ps, DiscreteMeasure(masses))
