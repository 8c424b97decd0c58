"""Seeded samplers, the equal-weights GM/AM ratio, and cross-polytope geometry.

Reproducibility contract: every random quantity is a pure function of a
``SeededStream``.  The stream (base_seed, stream_index) seeds a counter-based
Philox generator through

    SeedSequence(entropy=base_seed, spawn_key=(stream_index,))

so identical streams give bit-identical draws on every run and machine, and
distinct stream indices give statistically independent streams that can be
consumed in parallel in any order.

Exponential variates use the inverse transform x = -log1p(-U)/lambda.  That
choice makes coupled streams exactly comparable across rates: the lambda=2
draw is the lambda=1 draw halved, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DataVector, DegenerateInputError, DimensionError, DomainError

#: Limit of the equal-weights GM/AM ratio of iid exponential coordinates
#: (exp(-gamma) with gamma the Euler-Mascheroni constant).
EXP_NEG_EULER_GAMMA = 0.5614594835668851

#: Largest dimension the cube-sampling volume check accepts; beyond this the
#: hit rate 1/n! is too small for sensible Monte Carlo estimates.
BALL_CHECK_MAX_N = 8


@dataclass(frozen=True)
class SeededStream:
    """Addressable randomness: one of 2**64 indexed substreams of a base seed."""

    base_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.base_seed) < 2**64:
            raise DomainError("base_seed must fit in an unsigned 64-bit integer")
        if self.stream_index < 0:
            raise DomainError("stream_index must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(self._bits((self.stream_index,)))

    def substream_generator(self, k: int) -> np.random.Generator:
        """Generator for child k of this stream (spawn_key extended by k)."""
        return np.random.Generator(self._bits((self.stream_index, k)))

    def _bits(self, spawn_key: tuple[int, ...]) -> np.random.Philox:
        seq = np.random.SeedSequence(entropy=self.base_seed, spawn_key=spawn_key)
        return np.random.Philox(seq)


@dataclass(frozen=True)
class GeometryConstants:
    """Closed-form volume of the unit l1 ball and area of the unit l1 sphere."""

    n: int
    ball_volume: float
    sphere_area: float

    @classmethod
    def for_dimension(cls, n: int) -> "GeometryConstants":
        if n < 2:
            raise DomainError("dimension must be at least 2")
        if n <= 20:
            vol = 2.0**n / math.factorial(n)
            area = 2.0**n * math.sqrt(n) / math.factorial(n - 1)
        else:
            # log-gamma keeps the factorials from overflowing for large n
            vol = math.exp(n * math.log(2.0) - math.lgamma(n + 1))
            area = math.exp(n * math.log(2.0) + 0.5 * math.log(n) - math.lgamma(n))
        return cls(n=n, ball_volume=vol, sphere_area=area)


def sample_exponential(n: int, lam: float, stream: SeededStream) -> DataVector:
    """n iid exponential(lambda) draws from the stream, inverse-transform."""
    if n < 2:
        raise DimensionError("need n >= 2 coordinates")
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    u = stream.generator().random(n)
    return DataVector(-np.log1p(-u) / lam)


def sample_l1_sphere_positive(n: int, stream: SeededStream) -> DataVector:
    """Uniform draw from the positive face of the unit l1 sphere.

    Exponential draws divided by their sum (the Dirichlet(1,...,1)
    construction); an all-zero draw, a probability-zero event, is redrawn.
    """
    if n < 2:
        raise DimensionError("need n >= 2 coordinates")
    gen = stream.generator()
    while True:
        e = -np.log1p(-gen.random(n))
        s = e.sum()
        if s > 0.0:
            return DataVector(e / s)


def _ratio_rows(x: np.ndarray) -> np.ndarray:
    """Equal-weights GM/AM ratio of each row of a nonnegative matrix."""
    am = x.mean(axis=1)
    has_zero = (x == 0.0).any(axis=1)
    gm = np.exp(np.log(np.where(x > 0.0, x, 1.0)).mean(axis=1))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(has_zero, 0.0, gm / np.where(am > 0.0, am, 1.0))
    return np.minimum(r, 1.0)


def gm_am_ratio(x: DataVector) -> float:
    """prod(x_i)**(1/n) / mean(x): zero-homogeneous, in [0, 1], 0 if any
    coordinate vanishes."""
    if len(x) < 2:
        raise DimensionError("need n >= 2 coordinates")
    if not np.any(x.values > 0.0):
        raise DegenerateInputError("ratio undefined for all-zero data")
    return float(_ratio_rows(x.values[None, :])[0])


def sampler_equivalence_check(
    n: int, trials: int, u: float, stream: SeededStream
) -> tuple[float, float]:
    """Empirical P(ratio > u) under exponential vs l1-sphere sampling.

    The two sampling laws induce the same ratio distribution, so the
    estimates (computed from independent substreams of ``stream``) agree up
    to binomial noise.
    """
    if not 0.0 <= u <= 1.0:
        raise DomainError("threshold u must lie in [0, 1]")
    if trials < 1000:
        raise DomainError("need at least 1000 trials")
    if n < 2:
        raise DimensionError("need n >= 2 coordinates")
    gen_exp = stream.substream_generator(0)
    gen_sph = stream.substream_generator(1)
    x_exp = -np.log1p(-gen_exp.random((trials, n)))
    x_sph = -np.log1p(-gen_sph.random((trials, n)))
    x_sph = x_sph / x_sph.sum(axis=1, keepdims=True)
    p_exp = float(np.mean(_ratio_rows(x_exp) > u))
    p_sph = float(np.mean(_ratio_rows(x_sph) > u))
    return p_exp, p_sph


def ball_volume_mc_check(n: int, trials: int, stream: SeededStream) -> float:
    """Hit-ratio estimate of vol(unit l1 ball)/2**n via uniform cube sampling.

    The estimate targets 1/n!; dimensions above 8 are rejected because the
    hit rate collapses.
    """
    if n < 2 or n > BALL_CHECK_MAX_N:
        raise DomainError(f"dimension must be in [2, {BALL_CHECK_MAX_N}]")
    if trials < 10_000:
        raise DomainError("need at least 10000 trials")
    gen = stream.generator()
    pts = gen.uniform(-1.0, 1.0, size=(trials, n))
    hits = np.abs(pts).sum(axis=1) <= 1.0
    return float(hits.mean())
