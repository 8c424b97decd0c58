"""Refined two-sided Young and Holder inequalities over finite discrete measures.

Every integral here is a weighted sum over a finite list of atoms, so the
classical L^p statements become exact float computations.  The refinement
brackets ``integral(f*g)`` between corrections of the classical bound
``norm_p(f) * norm_q(g)``, the correction being a multiple of
``1 - coupling`` where the coupling is the normalized cross integral

    integral(f^(beta*p) * g^((1-beta)*q))
    ------------------------------------------------ .
    (integral f^p)^beta * (integral g^q)^(1-beta)

Powers and integrals run in the log domain with an exact-zero short-circuit,
matching the geometric-mean convention used elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DataVector, DegenerateInputError, DimensionError, DomainError

CONJUGATE_TOL = 1e-12


@dataclass(frozen=True)
class ConjugatePair:
    """Exponents p, q > 1 with 1/p + 1/q = 1 (within 1e-12)."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 1.0 and self.q > 1.0):
            raise DomainError("conjugate exponents must both exceed 1")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > CONJUGATE_TOL:
            raise DomainError("1/p + 1/q must equal 1")

    @classmethod
    def from_p(cls, p: float) -> "ConjugatePair":
        if not p > 1.0:
            raise DomainError("p must exceed 1")
        return cls(p, p / (p - 1.0))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Nonnegative atom masses, at least one of them positive."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if m.ndim != 1 or m.size < 1:
            raise DimensionError("masses must be a nonempty one-dimensional sequence")
        if not np.all(np.isfinite(m)) or np.any(m < 0.0):
            raise DomainError("masses must be finite and nonnegative")
        if not m.sum() > 0.0:
            raise DegenerateInputError("measure must not be identically zero")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "masses", m)

    def __len__(self) -> int:
        return self.masses.size


@dataclass(frozen=True)
class HolderEnvelope:
    """lower <= inner <= upper <= classical, with the coupling in [0, 1]."""

    classical: float
    lower: float
    upper: float
    inner: float
    coupling: float


def _log_integral(mu: DiscreteMeasure, factors: list[tuple[np.ndarray, float]]) -> float:
    """log of sum_i mass_i * prod_k f_k[i]**e_k, or -inf if every term is 0.

    Atoms where any factor with positive exponent vanishes contribute exactly
    zero and are skipped before taking logs.
    """
    mask = mu.masses > 0.0
    for values, _ in factors:
        mask &= values > 0.0
    if not np.any(mask):
        return -math.inf
    logs = np.log(mu.masses[mask])
    for values, expo in factors:
        logs = logs + expo * np.log(values[mask])
    peak = float(logs.max())
    return peak + math.log(float(np.sum(np.exp(logs - peak))))


def _check_atoms(mu: DiscreteMeasure, *fs: DataVector) -> None:
    for f in fs:
        if len(f) != len(mu):
            raise DimensionError("function values and measure atoms differ in length")


def young_refinement(
    u: float, v: float, pq: ConjugatePair, beta: float
) -> tuple[float, float, float]:
    """Two-sided refinement of u**p/p + v**q/q - u*v for u, v >= 0.

    Returns (lower, mid, upper) where mid is the Young defect and the outer
    values are min/max{1/(beta*p), 1/((1-beta)*q)} times
    beta*u**p + (1-beta)*v**q - u**(beta*p) * v**((1-beta)*q).
    With beta = 1/p all three coincide.
    """
    if not (0.0 < beta < 1.0):
        raise DomainError("beta must lie strictly inside (0, 1)")
    if not (u >= 0.0 and v >= 0.0 and math.isfinite(u) and math.isfinite(v)):
        raise DomainError("u and v must be finite and nonnegative")
    p, q = pq.p, pq.q
    try:
        mid = u**p / p + v**q / q - u * v
        bracket = (
            beta * u**p + (1.0 - beta) * v**q - u ** (beta * p) * v ** ((1.0 - beta) * q)
        )
    except OverflowError:
        raise DomainError("u**p or v**q exceeds the double-precision range") from None
    c1 = 1.0 / (beta * p)
    c2 = 1.0 / ((1.0 - beta) * q)
    return min(c1, c2) * bracket, mid, max(c1, c2) * bracket


def holder_refinement(
    f: DataVector,
    g: DataVector,
    mu: DiscreteMeasure,
    pq: ConjugatePair,
    beta: float,
) -> HolderEnvelope:
    """Envelope around integral(f*g) for nonnegative f in L^p, g in L^q.

    Both norms must be positive.  With beta = 1/p the bounds collapse onto
    the inner integral.
    """
    if not (0.0 < beta < 1.0):
        raise DomainError("beta must lie strictly inside (0, 1)")
    _check_atoms(mu, f, g)
    p, q = pq.p, pq.q
    log_fp = _log_integral(mu, [(f.values, p)])
    log_gq = _log_integral(mu, [(g.values, q)])
    if log_fp == -math.inf or log_gq == -math.inf:
        raise DegenerateInputError("both norms must be positive")
    classical = math.exp(log_fp / p + log_gq / q)
    log_inner = _log_integral(mu, [(f.values, 1.0), (g.values, 1.0)])
    inner = 0.0 if log_inner == -math.inf else math.exp(log_inner)
    log_cross = _log_integral(mu, [(f.values, beta * p), (g.values, (1.0 - beta) * q)])
    if log_cross == -math.inf:
        coupling = 0.0
    else:
        coupling = min(math.exp(log_cross - beta * log_fp - (1.0 - beta) * log_gq), 1.0)
    c1 = 1.0 / (beta * p)
    c2 = 1.0 / ((1.0 - beta) * q)
    defect = 1.0 - coupling
    return HolderEnvelope(
        classical=classical,
        lower=classical * (1.0 - max(c1, c2) * defect),
        upper=classical * (1.0 - min(c1, c2) * defect),
        inner=inner,
        coupling=coupling,
    )


def angular_distance(
    f: DataVector, g: DataVector, mu: DiscreteMeasure, pq: ConjugatePair
) -> float:
    """L2 distance between the unit vectors f**(p/2)/norm and g**(q/2)/norm.

    Squares to 2*(1 - coupling) at beta = 1/2; ranges over [0, sqrt(2)] for
    nonnegative functions.
    """
    _check_atoms(mu, f, g)
    p, q = pq.p, pq.q
    log_fp = _log_integral(mu, [(f.values, p)])
    log_gq = _log_integral(mu, [(g.values, q)])
    if log_fp == -math.inf or log_gq == -math.inf:
        raise DegenerateInputError("both norms must be positive")
    fn = f.values ** (p / 2.0) / math.exp(log_fp / 2.0)
    gn = g.values ** (q / 2.0) / math.exp(log_gq / 2.0)
    return float(math.sqrt(np.sum(mu.masses * (fn - gn) ** 2)))


def holder_multi(
    fs: list[DataVector], ps: list[float], mu: DiscreteMeasure
) -> HolderEnvelope:
    """Envelope around integral(prod f_i) for exponents with sum(1/p_i) = 1.

    The constants are n*max(1/p_i) and n*min(1/p_i) and the coupling is the
    normalized integral of prod f_i**(p_i/n).  With two functions this
    reproduces the two-function refinement at beta = 1/2.
    """
    if len(fs) != len(ps):
        raise DimensionError("one exponent per function is required")
    if len(fs) < 2:
        raise DimensionError("need at least two functions")
    inv = np.asarray([1.0 / p for p in ps], dtype=float)
    if any(not p > 1.0 for p in ps):
        raise DomainError("every exponent must exceed 1")
    if abs(float(inv.sum()) - 1.0) > CONJUGATE_TOL:
        raise DomainError("reciprocal exponents must sum to 1")
    _check_atoms(mu, *fs)
    n = len(fs)
    log_pows = [_log_integral(mu, [(f.values, p)]) for f, p in zip(fs, ps)]
    if any(lp == -math.inf for lp in log_pows):
        raise DegenerateInputError("every norm must be positive")
    classical = math.exp(sum(lp / p for lp, p in zip(log_pows, ps)))
    log_inner = _log_integral(mu, [(f.values, 1.0) for f in fs])
    inner = 0.0 if log_inner == -math.inf else math.exp(log_inner)
    log_cross = _log_integral(mu, [(f.values, p / n) for f, p in zip(fs, ps)])
    if log_cross == -math.inf:
        coupling = 0.0
    else:
        coupling = min(math.exp(log_cross - sum(log_pows) / n), 1.0)
    defect = 1.0 - coupling
    return HolderEnvelope(
        classical=classical,
        lower=classical * (1.0 - n * float(inv.max()) * defect),
        upper=classical * (1.0 - n * float(inv.min()) * defect),
        inner=inner,
        coupling=coupling,
    )
