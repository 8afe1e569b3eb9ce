"""FastAPI service exposing the metric library.

Endpoints:
  GET  /health    liveness probe
  POST /compute   metric between a truth and an estimate document
  POST /simulate  one synthetic run (optionally with its metric report)
  POST /curves    aggregate reports into the plot-ready CSV

Domain errors map to 422 with a field-path style detail list; exact-solver
capacity overruns map to 409 with kind "capacity".
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .basemetric import BaseMetricKind
from .curves import curves_csv
from .documents import (
    InputDocument,
    MetricName,
    ParamsDocument,
    ReportDocument,
    ScenarioDocument,
    StepReportDocument,
    document_from_sequence_set,
    mixture_from_document,
    report_document,
    scenario_config_from_document,
    sequence_set_from_document,
)
from .errors import CapacityError, DomainError, SolverError
from .gospa import MultiBernoulli, StateSet, gospa, pgospa
from .ptgospa import ptgospa
from .scenario import generate_estimates, generate_truth
from .types import DiracDensity, MetricParams, SequenceSet

app = FastAPI(title="trajmetric", version=__version__)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ComputeRequest(_Strict):
    truth: InputDocument
    estimate: InputDocument
    params: ParamsDocument = Field(default_factory=ParamsDocument)
    metric: MetricName = "ptgospa"
    solver: Literal["exact", "lp"] = "lp"
    base: Literal["wasserstein2", "euclidean_means"] = "wasserstein2"
    emit_weights: bool = False


class SimulateRequest(_Strict):
    config: ScenarioDocument
    compute_report: bool = False
    params: ParamsDocument = Field(default_factory=ParamsDocument)
    metric: MetricName = "ptgospa"
    solver: Literal["exact", "lp"] = "lp"
    base: Literal["wasserstein2", "euclidean_means"] = "wasserstein2"


class SimulateResponse(BaseModel):
    seed: int
    truth: InputDocument
    estimate: InputDocument
    report: ReportDocument | None = None


class CurvesRequest(_Strict):
    reports: list[ReportDocument]


class CurvesResponse(BaseModel):
    csv: str


@app.exception_handler(DomainError)
async def _on_domain_error(request: Request, exc: DomainError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"detail": [{"loc": [], "msg": str(exc), "type": "domain_error"}]},
    )


@app.exception_handler(CapacityError)
async def _on_capacity_error(request: Request, exc: CapacityError) -> JSONResponse:
    return JSONResponse(status_code=409, content={"detail": str(exc), "kind": "capacity"})


@app.exception_handler(SolverError)
async def _on_solver_error(request: Request, exc: SolverError) -> JSONResponse:
    return JSONResponse(status_code=500, content={"detail": str(exc), "kind": "solver"})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _point_trajectories(doc: InputDocument, what: str):
    """Strict extraction for TGOSPA: unit existence, Dirac steps only."""
    trajectories = []
    for idx, sd in enumerate(doc.sequences):
        for step in sd.steps:
            if step.covariance is not None or step.existence != 1.0:
                raise DomainError(
                    f"{what} sequence {idx}: tgospa requires unit existence and point "
                    "(covariance-free) states; use ptgospa for general inputs"
                )
        trajectories.append((sd.start_time, [step.mean for step in sd.steps]))
    return trajectories


def _per_step_report(
    truth: SequenceSet,
    estimate: SequenceSet,
    params: MetricParams,
    kind: BaseMetricKind,
    metric: MetricName,
) -> tuple[float, list[StepReportDocument]]:
    """Step-wise GOSPA/PGOSPA over the window; no switch component."""
    inv = 1.0 / params.p
    rows = []
    total_p = 0.0
    for k in range(1, truth.window_length + 1):
        bx = truth.densities_at(k)
        by = estimate.densities_at(k)
        if metric == "gospa":
            rep = gospa(
                StateSet(tuple(np.asarray(b.density.mean) for b in bx)),
                StateSet(tuple(np.asarray(b.density.mean) for b in by)),
                params,
                kind,
            )
            loc, mismatch, missed, false = rep.localization, 0.0, rep.missed, rep.false_det
        else:
            rep = pgospa(MultiBernoulli(tuple(bx)), MultiBernoulli(tuple(by)), params, kind)
            loc, mismatch = rep.expected_localization, rep.existence_mismatch
            missed, false = rep.expected_missed, rep.expected_false
        step_p = loc + mismatch + missed + false
        total_p += step_p
        rows.append(
            StepReportDocument(
                time_step=k,
                localization=loc,
                existence_mismatch=mismatch,
                missed=missed,
                false=false,
                switch=0.0,
                step_error=step_p**inv,
            )
        )
    return total_p ** (1.0 / params.p), rows


def evaluate(req: ComputeRequest) -> ReportDocument:
    params = req.params.to_params()
    kind = BaseMetricKind.from_string(req.base)
    if req.truth.hypotheses is not None:
        raise DomainError("truth document must not carry hypotheses")
    if req.truth.window_length != req.estimate.window_length:
        raise DomainError(
            f"window mismatch: truth has K={req.truth.window_length}, "
            f"estimate has K={req.estimate.window_length}"
        )
    truth = sequence_set_from_document(req.truth)

    if req.estimate.hypotheses is not None:
        if req.metric != "ptgospa":
            raise DomainError("hypothesis mixtures are supported for the ptgospa metric only")
        mixture = mixture_from_document(req.estimate)
        sub = [
            (w, ptgospa(truth, est, params, kind=kind, solver=req.solver))
            for w, est in mixture.hypotheses
        ]
        total = float(sum(w * r.total for w, r in sub))
        inv = 1.0 / params.p
        rows = []
        for k in range(truth.window_length):
            comp = {
                "localization": sum(w * r.per_step[k].expected_localization for w, r in sub),
                "existence_mismatch": sum(w * r.per_step[k].existence_mismatch for w, r in sub),
                "missed": sum(w * r.per_step[k].expected_missed for w, r in sub),
                "false": sum(w * r.per_step[k].expected_false for w, r in sub),
                "switch": sum(w * (r.per_step[k].switch_to_next or 0.0) for w, r in sub),
            }
            rows.append(
                StepReportDocument(
                    time_step=k + 1,
                    step_error=sum(comp.values()) ** inv,
                    **comp,
                )
            )
        return ReportDocument(
            metric="ptgospa",
            solver=req.solver,
            base=req.base,
            params=req.params,
            window_length=truth.window_length,
            total=total,
            per_step=rows,
            hypothesis_totals=[r.total for _, r in sub],
        )

    if req.metric == "ptgospa":
        estimate = sequence_set_from_document(req.estimate)
        report = ptgospa(truth, estimate, params, kind=kind, solver=req.solver)
    elif req.metric == "tgospa":
        from .ptgospa import tgospa

        report = tgospa(
            _point_trajectories(req.truth, "truth"),
            _point_trajectories(req.estimate, "estimate"),
            req.truth.window_length,
            params,
            kind=kind,
            solver=req.solver,
        )
    else:
        estimate = sequence_set_from_document(req.estimate)
        total, rows = _per_step_report(truth, estimate, params, kind, req.metric)
        return ReportDocument(
            metric=req.metric,
            solver=req.solver,
            base=req.base,
            params=req.params,
            window_length=truth.window_length,
            total=total,
            per_step=rows,
        )
    return report_document(
        report,
        metric=req.metric,
        base=kind,
        params=params,
        window_length=req.truth.window_length,
        emit_weights=req.emit_weights,
    )


@app.post("/compute", response_model=ReportDocument, response_model_exclude_none=True)
def compute(req: ComputeRequest) -> ReportDocument:
    return evaluate(req)


@app.post("/simulate", response_model=SimulateResponse, response_model_exclude_none=True)
def simulate(req: SimulateRequest) -> SimulateResponse:
    config = scenario_config_from_document(req.config)
    truth = generate_truth(config)
    estimate = generate_estimates(truth, config)
    truth_doc = document_from_sequence_set(truth, state_dimension=config.state_dim)
    est_doc = document_from_sequence_set(estimate, state_dimension=config.state_dim)
    report = None
    if req.compute_report:
        report = evaluate(
            ComputeRequest(
                truth=truth_doc,
                estimate=est_doc,
                params=req.params,
                metric=req.metric,
                solver=req.solver,
                base=req.base,
            )
        )
    return SimulateResponse(seed=config.seed, truth=truth_doc, estimate=est_doc, report=report)


@app.post("/curves", response_model=CurvesResponse)
def curves(req: CurvesRequest) -> CurvesResponse:
    return CurvesResponse(csv=curves_csv(req.reports))
