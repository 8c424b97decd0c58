"""Two-sided comparison of Jensen gaps under different weight vectors.

For a convex ``f`` the Jensen gap ``sum(w_i f(x_i)) - f(sum(w_i x_i))`` obeys
the same two-sided envelope as the AM-GM gap, with the same extremal
weight-quotient constants; with ``f = exp`` on logged data it reduces exactly
to the AM-GM comparison.  Equality on either side forces the off-set data to
equal the weighted mean; that condition does not involve ``f`` at all, so the
diagnosis here never calls the evaluator (for a function that is convex but
not strictly so it is sufficient rather than necessary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DataVector,
    DomainError,
    EqualityDiagnosis,
    EQUALITY_DEFAULT_TOL,
    GAP_CLAMP_RTOL,
    GapComparison,
    WeightVector,
    _check_lengths,
    quotient_profile,
    weighted_arithmetic_mean,
)

# Midpoint-convexity probe: triples per call and additive slack at unit scale.
PROBE_TRIPLES = 64
PROBE_SLACK = 1e-12


@dataclass(frozen=True)
class ConvexFunction:
    """A scalar convex function given by a vectorized evaluator on [lo, hi].

    Convexity cannot be verified from an evaluator; it is probed on random
    midpoint triples when jensen operations run in probe mode (the default
    under ``__debug__``).  ``strictly_convex`` records the caller's claim.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    lo: float = -math.inf
    hi: float = math.inf
    strictly_convex: bool = True
    name: str = ""

    def __call__(self, t: np.ndarray) -> np.ndarray:
        # out-of-range evaluations surface as non-finite values and are turned
        # into DomainError by check_domain, so numpy need not warn here
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=float)

    def check_domain(self, x: DataVector) -> np.ndarray:
        """Return f(x), raising if any point or value falls outside [lo, hi]
        or evaluates non-finite."""
        xs = x.values
        if np.any(xs < self.lo) or np.any(xs > self.hi):
            raise DomainError(f"data outside the domain [{self.lo}, {self.hi}]")
        fx = self(xs)
        if not np.all(np.isfinite(fx)):
            raise DomainError("evaluator returned a non-finite value on the data")
        return fx

    def probe_midpoint_convexity(self, lo: float, hi: float) -> None:
        """Spot-check f((a+b)/2) <= (f(a)+f(b))/2 on random triples in [lo, hi]."""
        if not lo < hi:
            return
        rng = np.random.default_rng(0x9E3779B9)
        a = rng.uniform(lo, hi, PROBE_TRIPLES)
        b = rng.uniform(lo, hi, PROBE_TRIPLES)
        fa, fb, fm = self(a), self(b), self((a + b) / 2.0)
        ok = np.isfinite(fa) & np.isfinite(fb) & np.isfinite(fm)
        scale = np.maximum(1.0, np.maximum(np.abs(fa), np.abs(fb)))
        if np.any(fm[ok] > ((fa + fb) / 2.0 + PROBE_SLACK * scale)[ok]):
            raise DomainError(
                f"evaluator {self.name or self.evaluator!r} failed a midpoint-convexity probe"
            )


def _xlogx(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.where(t > 0.0, t * np.log(np.where(t > 0.0, t, 1.0)), 0.0)


#: Named convex functions selectable from the CLI and the service.
CONVEX_FUNCTIONS: dict[str, ConvexFunction] = {
    "exp": ConvexFunction(np.exp, name="exp"),
    "square": ConvexFunction(np.square, name="square"),
    "quartic": ConvexFunction(lambda t: t**4, name="quartic"),
    "neg-log": ConvexFunction(lambda t: -np.log(t), lo=0.0, name="neg-log"),
    "xlogx": ConvexFunction(_xlogx, lo=0.0, name="xlogx"),
}


def jensen_gap(
    w: WeightVector,
    x: DataVector,
    f: ConvexFunction,
    probe: bool | None = None,
) -> float:
    """sum(w_i f(x_i)) - f(sum(w_i x_i)), clamped like the AM-GM gap."""
    _check_lengths(w, x)
    if __debug__ if probe is None else probe:
        f.probe_midpoint_convexity(float(x.values.min()), float(x.values.max()))
    fx = f.check_domain(x)
    mean_f = float(np.sum(w.weights * fx))
    mean_f = min(max(mean_f, float(fx.min())), float(fx.max()))
    f_mean = float(f(np.array([weighted_arithmetic_mean(w, x)]))[0])
    if not math.isfinite(f_mean):
        raise DomainError("evaluator non-finite at the weighted mean")
    gap = mean_f - f_mean
    if gap < 0.0 and gap >= -GAP_CLAMP_RTOL * max(abs(mean_f), abs(f_mean)):
        return 0.0
    return gap


def jensen_gap_comparison(
    alpha: WeightVector,
    beta: WeightVector,
    x: DataVector,
    f: ConvexFunction,
    probe: bool | None = None,
) -> GapComparison:
    """Envelope min(q)*gap_beta <= gap_alpha <= max(q)*gap_beta for Jensen gaps."""
    _check_lengths(alpha, beta, x)
    profile = quotient_profile(alpha, beta)
    gap_a = jensen_gap(alpha, x, f, probe=probe)
    gap_b = jensen_gap(beta, x, f, probe=False)
    return GapComparison(
        gap_alpha=gap_a,
        gap_beta=gap_b,
        lower=profile.min_quotient * gap_b,
        upper=profile.max_quotient * gap_b,
        profile=profile,
    )


def jensen_equality_diagnosis(
    alpha: WeightVector,
    beta: WeightVector,
    x: DataVector,
    tol: float = EQUALITY_DEFAULT_TOL,
) -> EqualityDiagnosis:
    """Equality conditions for the Jensen-gap envelope (strictly convex f).

    The lower bound is attained iff every x_j off the minimal-quotient set
    equals the alpha-weighted mean; the upper bound likewise with the
    maximal-quotient set.  Comparisons are relative to the spread of the
    data, which makes the flags invariant under x -> a*x + b with a > 0.
    """
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    _check_lengths(alpha, beta, x)
    profile = quotient_profile(alpha, beta)
    xs = x.values
    spread = float(xs.max() - xs.min())
    am = weighted_arithmetic_mean(alpha, x)
    n = xs.size
    off_a = np.setdiff1d(np.arange(n), np.asarray(profile.argmin_set, dtype=int))
    off_b = np.setdiff1d(np.arange(n), np.asarray(profile.argmax_set, dtype=int))
    if spread == 0.0:
        left = right = True
    else:
        left = bool(np.all(np.abs(xs[off_a] - am) <= tol * spread))
        right = bool(np.all(np.abs(xs[off_b] - am) <= tol * spread))
    return EqualityDiagnosis(
        left_equal=left,
        right_equal=right,
        forced_value_left=am if left else None,
        forced_value_right=am if right else None,
    )
