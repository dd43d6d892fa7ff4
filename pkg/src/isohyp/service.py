"""HTTP service exposing the laboratory studies.

Each study endpoint takes a JSON request, runs the computation in
process, and returns the full machine-readable result.  Validation
problems map to 422, numerical failures to 500; the CLI client turns
those into its exit codes.

Run with:  uvicorn isohyp.service:app
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__, studies
from .geometry import DomainError

app = FastAPI(title="isohyp", version=__version__,
              description="Numerical laboratory for weighted isoperimetry "
                          "in hyperbolic space")

DensitySpec = Union[str, dict]


class ProfileRequest(BaseModel):
    n: int = 3
    density: DensitySpec = "cosh:1"
    v_start: float = Field(gt=0.0)
    v_stop: float
    v_count: int = Field(ge=2, le=100000)


class ProfileResponse(BaseModel):
    columns: List[str]
    rows: List[dict]
    n: int
    density: str


class ShootRequest(BaseModel):
    n: int = 3
    density: DensitySpec = "cosh:1"
    tau_star: float = Field(gt=0.0)
    lambda_rel: float = 1.0
    lambda_abs: Optional[float] = None
    step_tol: float = Field(default=1e-10, gt=0.0)
    max_arclength: float = Field(default=50.0, gt=0.0)
    classify_tol: float = Field(default=1e-6, gt=0.0)


class ShootResponse(BaseModel):
    n: int
    density: str
    tau_star: float
    lam: float = Field(alias="lambda")
    classification: str
    termination: str
    closure: dict
    rho_deviation: float
    monotonicity_violation_u: Optional[float]
    hf_drift: float
    events: List[dict]
    columns: List[str]
    states: List[List[float]]

    model_config = {"populate_by_name": True}


class VerifyRequest(BaseModel):
    suite: str = "all"
    seed: int = 7
    count: int = Field(default=200, ge=1, le=100000)
    jobs: int = Field(default=1, ge=1, le=256)


class MinimizeRequest(BaseModel):
    n: int = 3
    density: DensitySpec = "cosh:1"
    target_volume: Optional[float] = None
    target_ball_tau: Optional[float] = None
    modes: int = Field(default=16, ge=1, le=128)
    seed: int = 0
    amplitude: float = Field(default=0.1, ge=0.0, le=0.5)
    max_iters: int = Field(default=400, ge=1, le=100000)
    grad_tol: float = Field(default=1e-6, gt=0.0)
    init_coeffs: Optional[List[float]] = None


class HopfRequest(BaseModel):
    spaces: List[Union[str, Tuple[str, int]]] = ["C:2", "C:3", "H:2", "O:2"]
    taus: List[float] = [0.5, 1.0, 2.0]


class HopfResponse(BaseModel):
    columns: List[str]
    rows: List[dict]


def _run(fn, /, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (DomainError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except (ArithmeticError, RuntimeError) as exc:
        raise HTTPException(status_code=500,
                            detail=f"numerical failure: {exc}")


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/profile", response_model=ProfileResponse)
def profile(req: ProfileRequest):
    return _run(studies.profile_study, req.n, req.density,
                req.v_start, req.v_stop, req.v_count)


@app.post("/shoot", response_model=ShootResponse)
def shoot(req: ShootRequest):
    return _run(studies.shoot_study, req.n, req.density, req.tau_star,
                req.lambda_rel, req.lambda_abs, req.step_tol,
                req.max_arclength, req.classify_tol)


@app.post("/verify")
def verify(req: VerifyRequest) -> dict:
    return _run(studies.verify_study, req.suite, req.seed, req.count,
                req.jobs)


@app.post("/minimize")
def minimize(req: MinimizeRequest) -> dict:
    return _run(studies.minimize_study, req.n, req.density,
                req.target_volume, req.target_ball_tau, req.modes,
                req.seed, req.amplitude, req.max_iters, req.grad_tol,
                req.init_coeffs)


@app.post("/hopf", response_model=HopfResponse)
def hopf(req: HopfRequest):
    spaces: Sequence = req.spaces
    return _run(studies.hopf_study, spaces, req.taus)
