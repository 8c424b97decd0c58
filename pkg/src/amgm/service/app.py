"""FastAPI service exposing the mean-gap comparisons and experiments.

Run standalone with ``uvicorn amgm.service.app:app`` or ``amgm serve``.
Every endpoint is stateless: identical requests give identical responses,
including the experiment endpoints, whose randomness is fully determined by
the seed in the request.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import core, holder, jensen, sampling
from ..experiments import (
    ExperimentConfig,
    SuiteReport,
    WeightScheme,
    inequality_suite,
    parse_weight_scheme,
    result_to_dict,
    results_to_csv,
    run_experiment,
)
from . import schemas


def _weight_pair(
    alpha: list[float], beta: list[float] | None, renormalize: bool
) -> tuple[core.WeightVector, core.WeightVector]:
    a = core.WeightVector(alpha, renormalize=renormalize)
    if beta is None:
        return a, core.WeightVector.uniform(len(a))
    return a, core.WeightVector(beta, renormalize=renormalize)


def _profile_model(p: core.QuotientProfile) -> schemas.QuotientProfileModel:
    return schemas.QuotientProfileModel(
        quotients=[float(q) for q in p.quotients],
        min_quotient=p.min_quotient,
        max_quotient=p.max_quotient,
        argmin_set=list(p.argmin_set),
        argmax_set=list(p.argmax_set),
    )


def _equality_model(
    kind: str, diag: core.EqualityDiagnosis, profile: core.QuotientProfile
) -> schemas.EqualityResponse:
    return schemas.EqualityResponse(
        kind=kind,
        left_equal=diag.left_equal,
        right_equal=diag.right_equal,
        forced_value_left=diag.forced_value_left,
        forced_value_right=diag.forced_value_right,
        argmin_set=list(profile.argmin_set),
        argmax_set=list(profile.argmax_set),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="amgm",
        description="Weighted AM-GM gap comparisons, refined Young/Holder/Jensen "
        "bounds, and seeded concentration experiments.",
        version="0.1.0",
    )

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/functions")
    def functions() -> dict:
        return {"functions": sorted(jensen.CONVEX_FUNCTIONS)}

    @app.post("/gap", response_model=schemas.GapResponse)
    def gap(req: schemas.GapRequest) -> schemas.GapResponse:
        a, b = _weight_pair(req.alpha, req.beta, req.renormalize)
        x = core.DataVector(req.x)
        comp = core.gap_comparison(a, b, x)
        return schemas.GapResponse(
            n=len(x),
            am_alpha=core.weighted_arithmetic_mean(a, x),
            gm_alpha=core.weighted_geometric_mean(a, x),
            gap_alpha=comp.gap_alpha,
            variance_lower_bound=core.variance_lower_bound(a, x),
            am_beta=core.weighted_arithmetic_mean(b, x),
            gm_beta=core.weighted_geometric_mean(b, x),
            gap_beta=comp.gap_beta,
            lower=comp.lower,
            upper=comp.upper,
            profile=_profile_model(comp.profile),
        )

    @app.post("/gap/equality", response_model=schemas.EqualityResponse)
    def gap_equality(req: schemas.EqualityRequest) -> schemas.EqualityResponse:
        a, b = _weight_pair(req.alpha, req.beta, req.renormalize)
        x = core.DataVector(req.x)
        profile = core.quotient_profile(a, b)
        if req.kind == "jensen":
            diag = jensen.jensen_equality_diagnosis(a, b, x, tol=req.tol)
        else:
            diag = core.equality_diagnosis(a, b, x, tol=req.tol)
        return _equality_model(req.kind, diag, profile)

    @app.post("/ratio-bounds", response_model=schemas.RatioBoundsResponse)
    def ratio_bounds(req: schemas.RatioBoundsRequest) -> schemas.RatioBoundsResponse:
        a = core.WeightVector(req.alpha, renormalize=req.renormalize)
        x = core.DataVector(req.x)
        low, high = core.ratio_bounds(a, x)
        ratio = core.weighted_geometric_mean(a, x) / core.weighted_arithmetic_mean(a, x)
        return schemas.RatioBoundsResponse(
            lower=low,
            upper=high,
            ratio=ratio,
            equal_weights_ratio=sampling.gm_am_ratio(x),
            exponent_max=len(a) * a.max,
            exponent_min=len(a) * a.min,
        )

    @app.post("/jensen", response_model=schemas.JensenResponse)
    def jensen_comparison(req: schemas.JensenRequest) -> schemas.JensenResponse:
        try:
            f = jensen.CONVEX_FUNCTIONS[req.function]
        except KeyError:
            raise core.DomainError(
                f"unknown function {req.function!r}; choose from "
                f"{sorted(jensen.CONVEX_FUNCTIONS)}"
            ) from None
        a, b = _weight_pair(req.alpha, req.beta, req.renormalize)
        x = core.DataVector(req.x)
        comp = jensen.jensen_gap_comparison(a, b, x, f)
        diag = jensen.jensen_equality_diagnosis(a, b, x, tol=req.tol)
        return schemas.JensenResponse(
            function=req.function,
            gap_alpha=comp.gap_alpha,
            gap_beta=comp.gap_beta,
            lower=comp.lower,
            upper=comp.upper,
            profile=_profile_model(comp.profile),
            equality=_equality_model("jensen", diag, comp.profile),
        )

    @app.post("/young", response_model=schemas.YoungResponse)
    def young(req: schemas.YoungRequest) -> schemas.YoungResponse:
        pq = holder.ConjugatePair.from_p(req.p)
        low, mid, high = holder.young_refinement(req.u, req.v, pq, req.beta)
        return schemas.YoungResponse(
            p=pq.p, q=pq.q, beta=req.beta, lower=low, mid=mid, upper=high
        )

    @app.post("/holder", response_model=schemas.HolderResponse)
    def holder_two(req: schemas.HolderRequest) -> schemas.HolderResponse:
        pq = holder.ConjugatePair.from_p(req.p)
        mu = holder.DiscreteMeasure(req.masses)
        f = core.DataVector(req.f)
        g = core.DataVector(req.g)
        env = holder.holder_refinement(f, g, mu, pq, req.beta)
        angular = (
            holder.angular_distance(f, g, mu, pq) if req.include_angular else None
        )
        return schemas.HolderResponse(
            p=pq.p,
            q=pq.q,
            beta=req.beta,
            classical=env.classical,
            lower=env.lower,
            upper=env.upper,
            inner=env.inner,
            coupling=env.coupling,
            angular_distance=angular,
        )

    @app.post("/holder/multi", response_model=schemas.HolderMultiResponse)
    def holder_many(req: schemas.HolderMultiRequest) -> schemas.HolderMultiResponse:
        mu = holder.DiscreteMeasure(req.masses)
        fs = [core.DataVector(values) for values in req.fs]
        env = holder.holder_multi(fs, req.ps, mu)
        return schemas.HolderMultiResponse(
            ps=req.ps,
            classical=env.classical,
            lower=env.lower,
            upper=env.upper,
            inner=env.inner,
            coupling=env.coupling,
        )

    @app.post("/sample", response_model=schemas.SampleResponse)
    def sample(req: schemas.SampleRequest) -> schemas.SampleResponse:
        if req.draws < 1:
            raise core.DomainError("draws must be >= 1")
        indices = list(range(req.stream_index, req.stream_index + req.draws))
        draws = []
        for idx in indices:
            stream = sampling.SeededStream(req.seed, idx)
            if req.kind == "exponential":
                vec = sampling.sample_exponential(req.n, req.lam, stream)
            else:
                vec = sampling.sample_l1_sphere_positive(req.n, stream)
            draws.append([float(v) for v in vec.values])
        return schemas.SampleResponse(
            kind=req.kind, n=req.n, seed=req.seed, stream_indices=indices, draws=draws
        )

    @app.post("/experiment/{kind}", response_model=schemas.ExperimentResponse)
    def experiment(kind: str, req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
        if req.scheme.strip().startswith("explicit") and req.weights is not None:
            scheme = WeightScheme("explicit", values=tuple(req.weights))
        else:
            scheme = parse_weight_scheme(req.scheme)
            if req.weights is not None:
                raise core.DomainError("inline weights require the explicit scheme")
        cfg = ExperimentConfig(
            n_values=tuple(req.n),
            trials=req.trials,
            epsilon=req.epsilon,
            lam=req.lam,
            base_seed=req.seed,
            scheme=scheme,
        )
        results = run_experiment(kind, cfg)
        models = [schemas.ExperimentResultModel(**result_to_dict(r)) for r in results]
        return schemas.ExperimentResponse(
            kind=kind, results=models, csv=results_to_csv(results)
        )

    @app.post("/suite", response_model=schemas.SuiteResponse)
    def suite(req: schemas.SuiteRequest) -> schemas.SuiteResponse:
        stream = sampling.SeededStream(req.seed, req.stream_index)
        report: SuiteReport = inequality_suite(req.trials, stream, inject_bug=req.inject_bug)
        return schemas.SuiteResponse(**report.to_dict())

    @app.post("/selfcheck", response_model=schemas.SelfcheckResponse)
    def selfcheck(req: schemas.SelfcheckRequest) -> schemas.SelfcheckResponse:
        equivalence = []
        for k, u in enumerate(req.u_values):
            stream = sampling.SeededStream(req.seed, k)
            p_exp, p_sph = sampling.sampler_equivalence_check(
                req.n, req.trials, u, stream
            )
            pooled = 0.5 * (p_exp + p_sph)
            four_se = 4.0 * math.sqrt(max(pooled * (1.0 - pooled), 0.0) * 2.0 / req.trials)
            diff = abs(p_exp - p_sph)
            equivalence.append(
                schemas.EquivalenceEntry(
                    u=u,
                    p_exponential=p_exp,
                    p_sphere=p_sph,
                    difference=diff,
                    four_se=four_se,
                    ok=diff <= max(four_se, 2.0 / req.trials),
                )
            )
        ball = []
        for k, n in enumerate(req.ball_dims):
            stream = sampling.SeededStream(req.seed, 1000 + k)
            est = sampling.ball_volume_mc_check(n, req.ball_trials, stream)
            expected = 1.0 / math.factorial(n)
            three_se = 3.0 * math.sqrt(expected * (1.0 - expected) / req.ball_trials)
            ball.append(
                schemas.BallVolumeEntry(
                    n=n,
                    estimate=est,
                    expected=expected,
                    three_se=three_se,
                    ok=abs(est - expected) <= three_se,
                )
            )
        geometry = []
        for n in range(2, req.geometry_max_n + 1):
            gc = sampling.GeometryConstants.for_dimension(n)
            err = abs(gc.sphere_area - n * math.sqrt(n) * gc.ball_volume) / gc.sphere_area
            geometry.append(
                schemas.GeometryEntry(
                    n=n,
                    ball_volume=gc.ball_volume,
                    sphere_area=gc.sphere_area,
                    identity_error=err,
                    ok=err <= 1e-12,
                )
            )
        passed = (
            all(e.ok for e in equivalence)
            and all(b.ok for b in ball)
            and all(g.ok for g in geometry)
        )
        return schemas.SelfcheckResponse(
            passed=passed, equivalence=equivalence, ball_volume=ball, geometry=geometry
        )

    return app


app = create_app()
