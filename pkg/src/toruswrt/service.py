"""Service layer: request/response documents and the HTTP app.

The handlers are plain functions over pydantic models so the CLI can call
them in-process; the FastAPI app is a thin wrapper exposing them over HTTP.

Document invariants:

* every numeric field is finite (non-finite values raise before a document
  leaves a handler);
* identical request + explicit seed produce a byte-identical document apart
  from the ``timings`` sub-object, which is the only place wall-clock
  numbers live.
"""

from __future__ import annotations

import math
import time

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, field_validator

from . import __version__
from .bench import run_bench, rows_to_csv
from .checks import check_names, run_checks
from .counting import (
    BRUTE_FORCE_MAX_M,
    ColinearInstance,
    brute_force_count,
    decision_positive,
    dp_count_mod,
    estimate_coefficient,
    safe_modulus,
    signed_to_subset,
)
from .dp import wrt_trace
from .sim import SamplingPlan, hadamard_test_trace
from .sl2 import decompose, det, evaluate, max_entry

CROSS_CHECK_TOL = 1e-6

WRT_METHODS = ("dp", "sim-exact", "sim-sample")
COEFF_METHODS = ("exact", "mod", "estimate")


class UsageError(ValueError):
    """Invalid request content (maps to CLI exit 2 / HTTP 422)."""


def _require_finite(obj, path: str = "document") -> None:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise RuntimeError(f"non-finite value at {path}: {obj!r}")
    if isinstance(obj, dict):
        for key, value in obj.items():
            _require_finite(value, f"{path}.{key}")
    elif isinstance(obj, (list, tuple)):
        for i, value in enumerate(obj):
            _require_finite(value, f"{path}[{i}]")


def _finalize(document: BaseModel) -> None:
    _require_finite(document.model_dump())


# -- wrt ----------------------------------------------------------------------


class WrtRequest(BaseModel):
    level: int
    monodromy: tuple[int, int, int, int] = (1, 0, 0, 1)
    insertions: list[tuple[int, int]] = Field(default_factory=list)
    method: str = "dp"
    epsilon: float = 0.05
    delta: float = 0.01
    seed: int | None = None

    @field_validator("method")
    @classmethod
    def _method_known(cls, value: str) -> str:
        if value not in WRT_METHODS + ("all",):
            raise ValueError(f"method must be one of {WRT_METHODS + ('all',)}")
        return value


class WrtMethodResult(BaseModel):
    z_re: float
    z_im: float
    z_normalized_re: float
    z_normalized_im: float
    shots: int
    op_count: int
    interval_radius_normalized: float | None = None


class CrossCheck(BaseModel):
    compared: tuple[str, str]
    max_delta: float
    tolerance: float
    ok: bool


class WrtResponse(BaseModel):
    level: int
    monodromy: tuple[int, int, int, int]
    insertions: list[tuple[int, int]]
    insertion_count: int
    word: list[str]
    word_length: int
    method: str
    z_re: float
    z_im: float
    z_abs: float
    z_normalized_re: float
    z_normalized_im: float
    methods: dict[str, WrtMethodResult]
    cross_check: CrossCheck | None
    epsilon: float
    delta: float
    seed: int | None
    logical_qubits: int
    timings: dict[str, float]


def handle_wrt(req: WrtRequest) -> WrtResponse:
    if req.level < 3 or req.level % 2 == 0:
        raise UsageError(f"level must be odd and >= 3, got {req.level}")
    g = tuple(req.monodromy)
    if det(g) != 1:
        raise UsageError(f"monodromy must have determinant 1, got {det(g)}")
    n = req.level
    ins = [tuple(v) for v in req.insertions]
    m = len(ins)
    word = decompose(g)
    wanted = list(WRT_METHODS) if req.method == "all" else [req.method]
    scale = float(2**m) * n * n  # observable -> unnormalized Z
    methods: dict[str, WrtMethodResult] = {}
    timings: dict[str, float] = {}
    seed_used = req.seed
    logical_qubits = 2 * math.ceil(math.log2(n)) + m + 1
    for name in wanted:
        if name == "dp":
            begin = time.perf_counter()
            z = wrt_trace(g, ins, n)
            timings["dp"] = time.perf_counter() - begin
            methods["dp"] = WrtMethodResult(
                z_re=float(z.real),
                z_im=float(z.imag),
                z_normalized_re=float(z.real) / n**2,
                z_normalized_im=float(z.imag) / n**2,
                shots=0,
                op_count=m,
            )
        else:
            mode = "exact" if name == "sim-exact" else "sample"
            plan = SamplingPlan(epsilon=req.epsilon, delta=req.delta, seed=req.seed)
            report = hadamard_test_trace(g, ins, n, plan=plan, mode=mode)
            timings[name] = report.elapsed
            if mode == "sample":
                seed_used = report.seed
            est = complex(report.estimate_re, report.estimate_im)
            methods[name] = WrtMethodResult(
                z_re=(est * scale).real,
                z_im=(est * scale).imag,
                z_normalized_re=(est * scale).real / n**2,
                z_normalized_im=(est * scale).imag / n**2,
                shots=report.shots_used,
                op_count=report.op_count,
                interval_radius_normalized=(req.epsilon * 2**m if mode == "sample" else None),
            )
    cross: CrossCheck | None = None
    if req.method == "all":
        dp_z = complex(methods["dp"].z_re, methods["dp"].z_im)
        sim_z = complex(methods["sim-exact"].z_re, methods["sim-exact"].z_im)
        delta_abs = abs(dp_z - sim_z)
        cross = CrossCheck(
            compared=("dp", "sim-exact"),
            max_delta=float(delta_abs),
            tolerance=CROSS_CHECK_TOL,
            ok=bool(delta_abs <= CROSS_CHECK_TOL),
        )
    for preferred in ("dp", "sim-exact", "sim-sample"):
        if preferred in methods:
            head = methods[preferred]
            break
    response = WrtResponse(
        level=n,
        monodromy=g,
        insertions=ins,
        insertion_count=m,
        word=word,
        word_length=len(word),
        method=req.method,
        z_re=head.z_re,
        z_im=head.z_im,
        z_abs=float(abs(complex(head.z_re, head.z_im))),
        z_normalized_re=head.z_normalized_re,
        z_normalized_im=head.z_normalized_im,
        methods=methods,
        cross_check=cross,
        epsilon=req.epsilon,
        delta=req.delta,
        seed=seed_used,
        logical_qubits=logical_qubits,
        timings=timings,
    )
    _finalize(response)
    return response


# -- coeff --------------------------------------------------------------------


class CoeffRequest(BaseModel):
    a: list[int]
    z: int = 0
    modulus: int | None = None
    method: str = "all"
    estimate_mode: str = "exact"
    epsilon: float = 0.05
    delta: float = 0.01
    seed: int | None = None

    @field_validator("method")
    @classmethod
    def _method_known(cls, value: str) -> str:
        if value not in COEFF_METHODS + ("all",):
            raise ValueError(f"method must be one of {COEFF_METHODS + ('all',)}")
        return value

    @field_validator("estimate_mode")
    @classmethod
    def _mode_known(cls, value: str) -> str:
        if value not in ("exact", "sample"):
            raise ValueError("estimate_mode must be 'exact' or 'sample'")
        return value


class CoeffEstimateBlock(BaseModel):
    mode: str
    level: int
    alpha: float
    alpha_interval: tuple[float, float]
    count_estimate: float
    count_interval: tuple[float, float]
    count_rounded: int | None
    uninformative: bool
    aliasing_free: bool
    shots: int
    op_count: int
    seed: int | None


class CoeffResponse(BaseModel):
    a: list[int]
    z: int
    m: int
    method: str
    modulus: int
    abs_sum: int
    wrap_bound: int
    aliasing_free: bool
    subset_target: int | None
    count_exact: int | None
    count_mod: int | None
    count_positive: bool
    estimate: CoeffEstimateBlock | None
    cross_check: CrossCheck | None
    timings: dict[str, float]


def handle_coeff(req: CoeffRequest) -> CoeffResponse:
    if not req.a:
        raise UsageError("a must contain at least one weight")
    inst = ColinearInstance(req.a, req.z)
    modulus = req.modulus if req.modulus is not None else safe_modulus(inst)
    if modulus < 1:
        raise UsageError(f"modulus must be >= 1, got {modulus}")
    wanted = list(COEFF_METHODS) if req.method == "all" else [req.method]
    timings: dict[str, float] = {}
    count_exact: int | None = None
    count_mod: int | None = None
    estimate_block: CoeffEstimateBlock | None = None
    if "exact" in wanted:
        begin = time.perf_counter()
        count_exact = brute_force_count(inst) if inst.m <= BRUTE_FORCE_MAX_M else None
        timings["exact"] = time.perf_counter() - begin
    if "mod" in wanted:
        begin = time.perf_counter()
        count_mod = dp_count_mod(inst, modulus)
        timings["mod"] = time.perf_counter() - begin
    if "estimate" in wanted:
        if modulus < 3 or modulus % 2 == 0:
            raise UsageError(
                f"the estimator requires an odd level >= 3, got modulus {modulus}"
            )
        plan = SamplingPlan(epsilon=req.epsilon, delta=req.delta, seed=req.seed)
        result = estimate_coefficient(inst, level=modulus, plan=plan, mode=req.estimate_mode)
        timings["estimate"] = result.report.elapsed
        estimate_block = CoeffEstimateBlock(
            mode=req.estimate_mode,
            level=result.level,
            alpha=result.alpha,
            alpha_interval=result.alpha_interval,
            count_estimate=result.count_estimate,
            count_interval=result.count_interval,
            count_rounded=result.count_rounded,
            uninformative=result.uninformative,
            aliasing_free=result.aliasing_free,
            shots=result.report.shots_used,
            op_count=result.report.op_count,
            seed=result.report.seed,
        )
    aliasing_free = modulus > inst.wrap_bound
    cross: CrossCheck | None = None
    if req.method == "all" and count_exact is not None and count_mod is not None and aliasing_free:
        delta_abs = float(abs(count_exact - count_mod))
        cross = CrossCheck(
            compared=("exact", "mod"),
            max_delta=delta_abs,
            tolerance=0.0,
            ok=bool(delta_abs == 0.0),
        )
    response = CoeffResponse(
        a=list(inst.a),
        z=inst.z,
        m=inst.m,
        method=req.method,
        modulus=modulus,
        abs_sum=inst.abs_sum,
        wrap_bound=inst.wrap_bound,
        aliasing_free=aliasing_free,
        subset_target=signed_to_subset(inst),
        count_exact=count_exact,
        count_mod=count_mod,
        count_positive=decision_positive(inst),
        estimate=estimate_block,
        cross_check=cross,
        timings=timings,
    )
    _finalize(response)
    return response


# -- decompose ----------------------------------------------------------------


class DecomposeRequest(BaseModel):
    matrix: tuple[int, int, int, int]


class DecomposeResponse(BaseModel):
    matrix: tuple[int, int, int, int]
    word: list[str]
    word_length: int
    round_trip_ok: bool
    max_entry: int


def handle_decompose(req: DecomposeRequest) -> DecomposeResponse:
    g = tuple(req.matrix)
    if det(g) != 1:
        raise UsageError(f"matrix must have determinant 1, got {det(g)}")
    word = decompose(g)
    response = DecomposeResponse(
        matrix=g,
        word=word,
        word_length=len(word),
        round_trip_ok=evaluate(word) == g,
        max_entry=max_entry(g),
    )
    _finalize(response)
    return response


# -- verify -------------------------------------------------------------------


class VerifyRequest(BaseModel):
    names: list[str] | None = None
    threads: int | None = None


class VerifyCheck(BaseModel):
    name: str
    passed: bool
    detail: str
    elapsed: float


class VerifyResponse(BaseModel):
    all_passed: bool
    passed_count: int
    total: int
    checks: list[VerifyCheck]


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    try:
        results = run_checks(names=req.names, threads=req.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    checks = [
        VerifyCheck(name=r.name, passed=r.passed, detail=r.detail, elapsed=r.elapsed)
        for r in results
    ]
    response = VerifyResponse(
        all_passed=all(c.passed for c in checks),
        passed_count=sum(c.passed for c in checks),
        total=len(checks),
        checks=checks,
    )
    _finalize(response)
    return response


# -- bench --------------------------------------------------------------------


class BenchRequest(BaseModel):
    include_sim: bool = True
    repeats: int = 3
    seed: int = 0


class BenchResponse(BaseModel):
    csv: str
    rows: list[dict[str, str]]


def handle_bench(req: BenchRequest) -> BenchResponse:
    rows = run_bench(include_sim=req.include_sim, repeats=req.repeats, seed=req.seed)
    return BenchResponse(csv=rows_to_csv(rows), rows=[r.as_record() for r in rows])


# -- app ----------------------------------------------------------------------


def create_app() -> FastAPI:
    app = FastAPI(title="toruswrt", version=__version__)

    def guarded(handler, request):
        try:
            return handler(request)
        except UsageError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__, "checks": len(check_names())}

    @app.post("/wrt", response_model=WrtResponse)
    def wrt(request: WrtRequest) -> WrtResponse:
        return guarded(handle_wrt, request)

    @app.post("/coeff", response_model=CoeffResponse)
    def coeff(request: CoeffRequest) -> CoeffResponse:
        return guarded(handle_coeff, request)

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose_route(request: DecomposeRequest) -> DecomposeResponse:
        return guarded(handle_decompose, request)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        return guarded(handle_verify, request)

    @app.post("/bench", response_model=BenchResponse)
    def bench(request: BenchRequest) -> BenchResponse:
        return guarded(handle_bench, request)

    return app
