"""Pydantic request/response models for the service endpoints."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class QuotientProfileModel(BaseModel):
    quotients: list[float]
    min_quotient: float
    max_quotient: float
    argmin_set: list[int]
    argmax_set: list[int]


class GapRequest(BaseModel):
    alpha: list[float]
    beta: list[float] | None = None  # omitted -> uniform weights
    x: list[float]
    renormalize: bool = False


class GapResponse(BaseModel):
    n: int
    am_alpha: float
    gm_alpha: float
    gap_alpha: float
    variance_lower_bound: float
    am_beta: float
    gm_beta: float
    gap_beta: float
    lower: float
    upper: float
    profile: QuotientProfileModel


class EqualityRequest(BaseModel):
    alpha: list[float]
    beta: list[float] | None = None
    x: list[float]
    tol: float = 1e-9
    kind: Literal["amgm", "jensen"] = "amgm"
    renormalize: bool = False


class EqualityResponse(BaseModel):
    kind: str
    left_equal: bool
    right_equal: bool
    forced_value_left: float | None
    forced_value_right: float | None
    argmin_set: list[int]
    argmax_set: list[int]


class RatioBoundsRequest(BaseModel):
    alpha: list[float]
    x: list[float]
    renormalize: bool = False


class RatioBoundsResponse(BaseModel):
    lower: float
    upper: float
    ratio: float
    equal_weights_ratio: float
    exponent_max: float
    exponent_min: float


class JensenRequest(BaseModel):
    alpha: list[float]
    beta: list[float] | None = None
    x: list[float]
    function: str = "exp"
    tol: float = 1e-9
    renormalize: bool = False


class JensenResponse(BaseModel):
    function: str
    gap_alpha: float
    gap_beta: float
    lower: float
    upper: float
    profile: QuotientProfileModel
    equality: EqualityResponse


class YoungRequest(BaseModel):
    u: float
    v: float
    p: float
    beta: float = 0.5


class YoungResponse(BaseModel):
    p: float
    q: float
    beta: float
    lower: float
    mid: float
    upper: float


class HolderRequest(BaseModel):
    masses: list[float]
    f: list[float]
    g: list[float]
    p: float
    beta: float = 0.5
    include_angular: bool = True


class HolderResponse(BaseModel):
    p: float
    q: float
    beta: float
    classical: float
    lower: float
    upper: float
    inner: float
    coupling: float
    angular_distance: float | None = None


class HolderMultiRequest(BaseModel):
    masses: list[float]
    fs: list[list[float]]
    ps: list[float]


class HolderMultiResponse(BaseModel):
    ps: list[float]
    classical: float
    lower: float
    upper: float
    inner: float
    coupling: float


class SampleRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    kind: Literal["exponential", "sphere"] = "exponential"
    n: int
    draws: int = 1
    lam: float = Field(1.0, alias="lambda")
    seed: int = 0
    stream_index: int = 0


class SampleResponse(BaseModel):
    kind: str
    n: int
    seed: int
    stream_indices: list[int]
    draws: list[list[float]]


class ExperimentRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    n: list[int]
    trials: int
    epsilon: float
    lam: float = Field(1.0, alias="lambda")
    seed: int = 0
    scheme: str = "uniform"
    weights: list[float] | None = None  # inline weights for the explicit scheme


class ExperimentResultModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    n: int
    trials: int
    epsilon: float
    lam: float = Field(alias="lambda")
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
    implied_exponent: float | None  # None when every trial hit
    diagnostics: dict[str, float]


class ExperimentResponse(BaseModel):
    kind: str
    results: list[ExperimentResultModel]
    csv: str


class SuiteRequest(BaseModel):
    trials: int
    seed: int = 0
    stream_index: int = 0
    inject_bug: bool = False


class SuiteCheckModel(BaseModel):
    name: str
    evaluations: int
    violations: int
    worst_slack: float | None


class SuiteResponse(BaseModel):
    trials: int
    total_violations: int
    checks: list[SuiteCheckModel]


class SelfcheckRequest(BaseModel):
    n: int = 50
    trials: int = 100_000
    seed: int = 0
    u_values: list[float] = [0.4, 0.5614594835668851, 0.7]
    ball_dims: list[int] = [2, 3, 4, 5, 6]
    ball_trials: int = 100_000
    geometry_max_n: int = 20


class EquivalenceEntry(BaseModel):
    u: float
    p_exponential: float
    p_sphere: float
    difference: float
    four_se: float
    ok: bool


class BallVolumeEntry(BaseModel):
    n: int
    estimate: float
    expected: float
    three_se: float
    ok: bool


class GeometryEntry(BaseModel):
    n: int
    ball_volume: float
    sphere_area: float
    identity_error: float
    ok: bool


class SelfcheckResponse(BaseModel):
    passed: bool
    equivalence: list[EquivalenceEntry]
    ball_volume: list[BallVolumeEntry]
    geometry: list[GeometryEntry]
