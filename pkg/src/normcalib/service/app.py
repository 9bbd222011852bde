"""FastAPI service exposing the scenario pipelines.

One POST endpoint per scenario; requests validate through the pydantic
models, malformed geometry maps to HTTP 400, and a finished run returns
status "ok" or "violation" with the witness-bearing report either way.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .runner import (
    ScenarioInputError,
    run_calibrate,
    run_density,
    run_kdim_search,
    run_lp_search,
    run_prop_check,
    run_section,
    run_semi_elliptic,
)
from .schemas import (
    CalibrateRequest,
    DensityRequest,
    KdimSearchRequest,
    LpSearchRequest,
    PropCheckRequest,
    ScenarioResponse,
    SectionRequest,
    SemiEllipticRequest,
)

app = FastAPI(
    title="normcalib",
    description=(
        "Exact-arithmetic area densities, calibrating 2-forms and "
        "flat-minimality experiments for polyhedral normed spaces."
    ),
    version="0.1.0",
)


def _run(fn, req):
    try:
        return fn(req)
    except ScenarioInputError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/v1/health")
def health() -> dict:
    return {"status": "up"}


@app.post("/v1/section", response_model=ScenarioResponse)
def section_endpoint(req: SectionRequest) -> ScenarioResponse:
    return _run(run_section, req)


@app.post("/v1/density", response_model=ScenarioResponse)
def density_endpoint(req: DensityRequest) -> ScenarioResponse:
    return _run(run_density, req)


@app.post("/v1/calibrate", response_model=ScenarioResponse)
def calibrate_endpoint(req: CalibrateRequest) -> ScenarioResponse:
    return _run(run_calibrate, req)


@app.post("/v1/prop-check", response_model=ScenarioResponse)
def prop_check_endpoint(req: PropCheckRequest) -> ScenarioResponse:
    return _run(run_prop_check, req)


@app.post("/v1/semi-elliptic", response_model=ScenarioResponse)
def semi_elliptic_endpoint(req: SemiEllipticRequest) -> ScenarioResponse:
    return _run(run_semi_elliptic, req)


@app.post("/v1/lp-search", response_model=ScenarioResponse)
def lp_search_endpoint(req: LpSearchRequest) -> ScenarioResponse:
    return _run(run_lp_search, req)


@app.post("/v1/kdim-search", response_model=ScenarioResponse)
def kdim_search_endpoint(req: KdimSearchRequest) -> ScenarioResponse:
    return _run(run_kdim_search, req)
