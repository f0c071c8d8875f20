"""HTTP API exposing R0 evaluation, grades, sweeps and the comparison table.

The app loads a calibrated baseline once at startup and treats it as
immutable for the process lifetime, so every endpoint is stateless and safe
under concurrent requests.  Sweep responses are memoized in a small LRU
keyed by (cohort sets, resolution) plus a baseline fingerprint; interactive
sliders tend to re-request the same neighborhoods.

Status codes: 400 for a malformed body, 422 for an invariant violation,
500 for a numerical failure.  The OpenAPI document is served at /api/spec.
"""

from __future__ import annotations

import os
import threading
from collections import OrderedDict

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .comparison import (build_comparison_table, build_gradation, r0_at,
                         sweep_grid)
from .errors import CalibrationError, ConvergenceError, DomainError
from .params import calibrate_baseline, load_params, load_params_file
from .r0 import compute_R0
from .strategies import CohortPartition, Substrategy, apply_scale, load_catalog

ANCHOR_R0 = 2.854
GRADE_AS = (0.2, 0.5, 0.8)
SWEEP_CACHE_SIZE = 64
MAX_SWEEP_RES = 256


class R0Request(BaseModel):
    w_beta: list = Field(default_factory=list)
    w_gamma: list = Field(default_factory=list)
    a: float = 1.0
    b: float = 1.0


class SweepRequest(BaseModel):
    w_beta: list = Field(default_factory=list)
    w_gamma: list = Field(default_factory=list)
    res: int = 64


class _Session:
    """Baseline, catalog and caches shared by all requests."""

    def __init__(self, params_path=None):
        raw = load_params_file(params_path) if params_path else load_params()
        self.baseline = calibrate_baseline(raw, ANCHOR_R0)
        self.partition = CohortPartition()
        self.catalog = load_catalog()
        self.grades = build_gradation(GRADE_AS, self.baseline)
        self.fingerprint = self.baseline.fingerprint()
        self._sweep_cache = OrderedDict()
        self._table_json = None
        self._lock = threading.Lock()

    def cohort_subset(self, values, field):
        try:
            subset = frozenset(int(v) for v in values)
        except (TypeError, ValueError):
            raise HTTPException(422, f"{field} must be a list of cohort indices")
        if not subset <= self.partition.all_cohorts:
            raise HTTPException(
                422, f"{field} must be a subset of 1..{self.partition.n}")
        return subset

    def sweep(self, w_beta, w_gamma, res):
        key = (tuple(sorted(w_beta)), tuple(sorted(w_gamma)), res, self.fingerprint)
        with self._lock:
            if key in self._sweep_cache:
                self._sweep_cache.move_to_end(key)
                return self._sweep_cache[key]
        sub = Substrategy(w_beta, w_gamma, name="api")
        grid = sweep_grid(sub, self.baseline, res, res).to_json(ndigits=6)
        with self._lock:
            self._sweep_cache[key] = grid
            while len(self._sweep_cache) > SWEEP_CACHE_SIZE:
                self._sweep_cache.popitem(last=False)
        return grid

    def table_json(self):
        with self._lock:
            cached = self._table_json
        if cached is not None:
            return cached
        table = build_comparison_table(self.catalog, self.grades, self.baseline,
                                       self.partition)
        doc = table.to_json(ndigits=6)
        with self._lock:
            self._table_json = doc
        return doc


def create_app(params_path=None, ui_dist=None) -> FastAPI:
    app = FastAPI(title="strata explorer API", version="0.1.0",
                  openapi_url="/api/spec")
    session = _Session(params_path)
    app.state.session = session

    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        # malformed JSON cannot be parsed at all -> 400; a parsed body that
        # violates field types or invariants -> 422
        malformed = any(err.get("type") == "json_invalid" for err in exc.errors())
        return JSONResponse(status_code=400 if malformed else 422,
                            content={"detail": exc.errors()})

    @app.post("/api/r0")
    def api_r0(body: R0Request):
        w_beta = session.cohort_subset(body.w_beta, "w_beta")
        w_gamma = session.cohort_subset(body.w_gamma, "w_gamma")
        if not 0.0 <= body.a <= 1.0:
            raise HTTPException(422, "a must lie in [0, 1]")
        if not 0.0 < body.b <= 1.0:
            raise HTTPException(422, "b must lie in (0, 1]")
        try:
            scale = Substrategy(w_beta, w_gamma).scale_at(body.a, body.b)
            applied = apply_scale(scale, session.baseline, session.partition).applied
            breakdown = compute_R0(applied)
        except DomainError as exc:
            raise HTTPException(422, str(exc))
        except (ConvergenceError, CalibrationError, AssertionError) as exc:
            raise HTTPException(500, f"numerical failure: {exc}")
        return {
            "r0": breakdown.r0,
            "r_a": breakdown.r_a,
            "r_i": breakdown.r_i,
            "prefactor": breakdown.prefactor,
            "grade_comparison": [
                {"name": g.name, "r0": g.r0_value, "below": breakdown.r0 <= g.r0_value}
                for g in session.grades
            ],
        }

    @app.get("/api/grades")
    def api_grades():
        return [{"name": g.name, "r0": g.r0_value, "provenance_a": g.provenance_a}
                for g in session.grades]

    @app.get("/api/table")
    def api_table():
        try:
            return session.table_json()
        except (ConvergenceError, AssertionError) as exc:
            raise HTTPException(500, f"numerical failure: {exc}")

    @app.post("/api/sweep")
    def api_sweep(body: SweepRequest):
        if not 2 <= body.res <= MAX_SWEEP_RES:
            raise HTTPException(422, f"res must lie in 2..{MAX_SWEEP_RES}")
        w_beta = session.cohort_subset(body.w_beta, "w_beta")
        w_gamma = session.cohort_subset(body.w_gamma, "w_gamma")
        try:
            return session.sweep(w_beta, w_gamma, body.res)
        except DomainError as exc:
            raise HTTPException(422, str(exc))
        except (ConvergenceError, AssertionError) as exc:
            raise HTTPException(500, f"numerical failure: {exc}")

    @app.get("/api/baseline")
    def api_baseline():
        breakdown = compute_R0(session.baseline)
        return {"r0": breakdown.r0, "r_a": breakdown.r_a, "r_i": breakdown.r_i,
                "prefactor": breakdown.prefactor,
                "cohorts": [
                    {"index": j + 1, "label": session.partition.labels[j],
                     "from_years": session.partition.boundaries[j],
                     "to_years": session.partition.boundaries[j + 1]}
                    for j in range(session.partition.n)
                ],
                "detection_period_days": 14.0,
                "fingerprint": session.fingerprint}

    dist = ui_dist or os.environ.get("STRATA_UI_DIST") or os.path.join(
        os.getcwd(), "frontend", "dist")
    if os.path.isdir(dist):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=dist, html=True), name="ui")

    return app
