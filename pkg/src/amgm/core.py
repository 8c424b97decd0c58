"""Weighted arithmetic/geometric means and two-sided bounds between AM-GM gaps.

The central object is the gap ``sum(w_i * x_i) - prod(x_i ** w_i)`` of a
weight vector ``w`` over nonnegative data ``x``.  Gaps taken with respect to
two different weight vectors ``alpha`` and ``beta`` are comparable: with
``q_i = alpha_i / beta_i``,

    min(q) * gap(beta, x)  <=  gap(alpha, x)  <=  max(q) * gap(beta, x),

and equality on either side is characterised by the data being constant off
the set of indices attaining the extremal quotient.  This module computes the
means, the gaps, the quotient profile with its extremal index sets, the
two-sided envelope, the equality diagnosis, and the companion bounds
``r^(n*max(alpha)) <= GM/AM <= r^(n*min(alpha))`` where ``r`` is the
equal-weights GM/AM ratio.

All operations are pure functions of immutable inputs and safe for concurrent
use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Absolute tolerance on |sum(w) - 1| accepted without renormalization.
WEIGHT_SUM_TOL = 1e-12
# Largest |sum(w) - 1| that renormalize=True will silently repair.
WEIGHT_SUM_RENORM_TOL = 1e-6
# Relative tie tolerance for membership in the extremal-quotient index sets.
QUOTIENT_TIE_RTOL = 1e-12
# Default relative tolerance for equality diagnosis.
EQUALITY_DEFAULT_TOL = 1e-9
# Gaps more negative than -GAP_CLAMP_RTOL * AM are reported as-is (a bug);
# anything closer to zero is rounding and gets clamped to 0.
GAP_CLAMP_RTOL = 1e-15


class DimensionError(ValueError):
    """Operands have incompatible lengths."""


class DomainError(ValueError):
    """A value lies outside the domain an operation requires."""


class DegenerateInputError(ValueError):
    """Input is degenerate for the requested quantity (e.g. all-zero data)."""


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive weights of length >= 2 summing to one.

    ``renormalize=True`` repairs float-rounded user input: a sum within
    1e-6 of 1 is divided through, anything farther off is rejected.  Without
    the flag the sum must already be within 1e-12 of 1.
    """

    weights: np.ndarray
    renormalize: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise DimensionError("weights must be one-dimensional")
        if w.size < 2:
            raise DimensionError("need at least 2 weights")
        if not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite")
        if not np.all(w > 0.0):
            raise DomainError("weights must be strictly positive")
        drift = abs(float(w.sum()) - 1.0)
        if drift > WEIGHT_SUM_RENORM_TOL:
            raise DomainError(f"weights sum to 1 {drift:.3e} away from 1")
        if drift > WEIGHT_SUM_TOL:
            if not self.renormalize:
                raise DomainError(
                    f"weight sum off by {drift:.3e}; pass renormalize=True to repair"
                )
            w = w / w.sum()
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        if n < 2:
            raise DimensionError("need at least 2 weights")
        return cls(np.full(n, 1.0 / n), renormalize=True)

    def __len__(self) -> int:
        return self.weights.size

    @property
    def min(self) -> float:
        return float(self.weights.min())

    @property
    def max(self) -> float:
        return float(self.weights.max())


@dataclass(frozen=True)
class DataVector:
    """Finite nonnegative sample values.

    Length 1 is admitted only so single-atom measure spaces work; every
    mean/gap/ratio operation pairs the data with a WeightVector and therefore
    still rejects n < 2.
    """

    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.values, dtype=float)
        if x.ndim != 1:
            raise DimensionError("values must be one-dimensional")
        if x.size < 1:
            raise DimensionError("values must be nonempty")
        if not np.all(np.isfinite(x)):
            raise DomainError("values must be finite")
        if np.any(x < 0.0):
            raise DomainError("values must be nonnegative")
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "values", x)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class QuotientProfile:
    """Pointwise weight quotients q_i = alpha_i/beta_i and their extremes.

    ``argmin_set``/``argmax_set`` hold the 0-based indices attaining the
    minimal/maximal quotient, with ties resolved at relative tolerance 1e-12.
    """

    quotients: np.ndarray
    min_quotient: float
    max_quotient: float
    argmin_set: tuple[int, ...]
    argmax_set: tuple[int, ...]


@dataclass(frozen=True)
class GapComparison:
    """Two-sided envelope min(q)*gap_beta <= gap_alpha <= max(q)*gap_beta."""

    gap_alpha: float
    gap_beta: float
    lower: float
    upper: float
    profile: QuotientProfile


@dataclass(frozen=True)
class EqualityDiagnosis:
    """Whether the lower/upper envelope bound is attained, and the value the
    off-set data is forced to when it is."""

    left_equal: bool
    right_equal: bool
    forced_value_left: float | None
    forced_value_right: float | None


def _check_lengths(*sized) -> int:
    n = len(sized[0])
    for s in sized[1:]:
        if len(s) != n:
            raise DimensionError(f"length mismatch: {[len(s) for s in sized]}")
    return n


def weighted_arithmetic_mean(w: WeightVector, x: DataVector) -> float:
    """sum(w_i * x_i), clipped into [min(x), max(x)] to kill rounding drift."""
    _check_lengths(w, x)
    xs = x.values
    am = float(np.sum(w.weights * xs))
    return min(max(am, float(xs.min())), float(xs.max()))


def weighted_geometric_mean(w: WeightVector, x: DataVector) -> float:
    """prod(x_i ** w_i), evaluated as exp(sum(w_i * log x_i)).

    Exactly 0 when any coordinate is 0; the log-domain form avoids underflow
    of long products.
    """
    _check_lengths(w, x)
    xs = x.values
    lo = float(xs.min())
    if lo == float(xs.max()):
        return lo  # constant data: skip the exp/log round trip
    if lo == 0.0:
        return 0.0
    return float(np.exp(np.sum(w.weights * np.log(xs))))


def amgm_gap(w: WeightVector, x: DataVector) -> float:
    """AM - GM; nonnegative, with sub-1e-15*AM rounding noise clamped to 0."""
    am = weighted_arithmetic_mean(w, x)
    gap = am - weighted_geometric_mean(w, x)
    if gap < 0.0 and gap >= -GAP_CLAMP_RTOL * am:
        return 0.0
    return gap


def variance_lower_bound(w: WeightVector, x: DataVector) -> float:
    """Variance of sqrt(x) under the weights; a lower bound for the gap."""
    _check_lengths(w, x)
    s = np.sqrt(x.values)
    m = min(max(float(np.sum(w.weights * s)), float(s.min())), float(s.max()))
    return float(np.sum(w.weights * (s - m) ** 2))


def quotient_profile(alpha: WeightVector, beta: WeightVector) -> QuotientProfile:
    """Quotients alpha_i/beta_i with extremal values and index sets."""
    _check_lengths(alpha, beta)
    q = alpha.weights / beta.weights
    qmin = float(q.min())
    qmax = float(q.max())
    argmin = tuple(int(i) for i in np.nonzero(q <= qmin * (1.0 + QUOTIENT_TIE_RTOL))[0])
    argmax = tuple(int(i) for i in np.nonzero(q >= qmax * (1.0 - QUOTIENT_TIE_RTOL))[0])
    q = q.copy()
    q.flags.writeable = False
    return QuotientProfile(q, qmin, qmax, argmin, argmax)


def gap_comparison(alpha: WeightVector, beta: WeightVector, x: DataVector) -> GapComparison:
    """Both gaps plus the envelope with the extremal-quotient constants."""
    _check_lengths(alpha, beta, x)
    profile = quotient_profile(alpha, beta)
    gap_a = amgm_gap(alpha, x)
    gap_b = amgm_gap(beta, x)
    return GapComparison(
        gap_alpha=gap_a,
        gap_beta=gap_b,
        lower=profile.min_quotient * gap_b,
        upper=profile.max_quotient * gap_b,
        profile=profile,
    )


def equal_weight_bounds(alpha: WeightVector, x: DataVector) -> GapComparison:
    """Envelope against the uniform weights; constants n*min(alpha), n*max(alpha)."""
    return gap_comparison(alpha, WeightVector.uniform(len(alpha)), x)


def _all_close_to(values: np.ndarray, target: float, tol: float) -> bool:
    if values.size == 0:
        return True
    scale = np.maximum(np.abs(values), abs(target))
    return bool(np.all(np.abs(values - target) <= tol * scale))


def equality_diagnosis(
    alpha: WeightVector,
    beta: WeightVector,
    x: DataVector,
    tol: float = EQUALITY_DEFAULT_TOL,
) -> EqualityDiagnosis:
    """Check whether either side of the gap envelope is an equality.

    The lower bound is attained iff every x_j off the minimal-quotient set
    equals the alpha-geometric mean (and then also the beta one); likewise
    for the upper bound with the maximal-quotient set.  Comparisons are
    relative at ``tol`` so the flags are invariant under rescaling the data.
    """
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    _check_lengths(alpha, beta, x)
    profile = quotient_profile(alpha, beta)
    gm = weighted_geometric_mean(alpha, x)
    n = len(x)
    off_a = np.setdiff1d(np.arange(n), np.asarray(profile.argmin_set, dtype=int))
    off_b = np.setdiff1d(np.arange(n), np.asarray(profile.argmax_set, dtype=int))
    left = _all_close_to(x.values[off_a], gm, tol)
    right = _all_close_to(x.values[off_b], gm, tol)
    return EqualityDiagnosis(
        left_equal=left,
        right_equal=right,
        forced_value_left=gm if left else None,
        forced_value_right=gm if right else None,
    )


def ratio_bounds(alpha: WeightVector, x: DataVector) -> tuple[float, float]:
    """(r**(n*max(alpha)), r**(n*min(alpha))) sandwiching GM_alpha/AM_alpha,
    where r is the equal-weights GM/AM ratio of x."""
    n = _check_lengths(alpha, x)
    if not np.any(x.values > 0.0):
        raise DegenerateInputError("GM/AM ratio undefined for all-zero data")
    uni = WeightVector.uniform(n)
    r = weighted_geometric_mean(uni, x) / weighted_arithmetic_mean(uni, x)
    r = min(r, 1.0)
    return r ** (n * alpha.max), r ** (n * alpha.min)
