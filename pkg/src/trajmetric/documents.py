"""Wire and file schemas (pydantic models) plus converters to core types.

``InputDocument`` is the single JSON format for truth and estimate files:
a window length, a state dimension, and sequences of steps where an
omitted covariance means a Dirac density and an omitted existence means
1.0.  Estimate files may instead carry weighted ``hypotheses``.

``ReportDocument`` echoes the request parameters and stores the per-step
decomposition as p-th-power costs along with ``step_error``, the 1/p power
of their per-step sum.  Numeric fields round-trip losslessly through JSON.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .basemetric import BaseMetricKind
from .errors import DomainError
from .ptgospa import HypothesisMixture, MetricReport
from .scenario import (
    DecayAfterDeath,
    ExistenceModel,
    HoldHigh,
    ScenarioConfig,
)
from .types import (
    BernoulliDensity,
    BernoulliSequence,
    DiracDensity,
    GaussianDensity,
    MetricParams,
    SequenceSet,
)

__all__ = [
    "StepDocument",
    "SequenceDocument",
    "HypothesisDocument",
    "InputDocument",
    "ParamsDocument",
    "StepReportDocument",
    "ReportDocument",
    "ExistenceModelDocument",
    "SwapDocument",
    "ScenarioDocument",
    "sequence_set_from_document",
    "mixture_from_document",
    "document_from_sequence_set",
    "report_document",
    "scenario_config_from_document",
    "document_from_scenario_config",
]

MetricName = Literal["ptgospa", "tgospa", "gospa", "pgospa"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StepDocument(_Strict):
    existence: float = Field(default=1.0, gt=0.0, le=1.0)
    mean: list[float] = Field(min_length=1)
    covariance: list[list[float]] | None = None


class SequenceDocument(_Strict):
    start_time: int = Field(ge=1)
    steps: list[StepDocument] = Field(min_length=1)


class HypothesisDocument(_Strict):
    weight: float = Field(gt=0.0)
    sequences: list[SequenceDocument] = Field(default_factory=list)


class InputDocument(_Strict):
    window_length: int = Field(ge=1)
    state_dimension: int = Field(ge=1)
    sequences: list[SequenceDocument] = Field(default_factory=list)
    hypotheses: list[HypothesisDocument] | None = None

    @model_validator(mode="after")
    def _single_representation(self) -> "InputDocument":
        if self.hypotheses is not None and self.sequences:
            raise ValueError("provide either sequences or hypotheses, not both")
        return self


class ParamsDocument(_Strict):
    c: float = Field(default=10.0, gt=0.0)
    p: float = Field(default=2.0, ge=1.0)
    gamma: float = Field(default=2.0, gt=0.0)

    def to_params(self) -> MetricParams:
        return MetricParams(c=self.c, p=self.p, gamma=self.gamma)


class StepReportDocument(_Strict):
    time_step: int
    localization: float
    existence_mismatch: float
    missed: float
    false: float
    switch: float
    step_error: float


class ReportDocument(_Strict):
    metric: MetricName
    solver: Literal["exact", "lp"]
    base: Literal["wasserstein2", "euclidean_means"]
    params: ParamsDocument
    window_length: int
    total: float
    per_step: list[StepReportDocument]
    hypothesis_totals: list[float] | None = None
    weights: list[list[list[float]]] | None = None


class ExistenceModelDocument(_Strict):
    kind: Literal["hold_high", "decay_after_death"]
    level: float = Field(default=1.0, gt=0.0, le=1.0)
    rate: float | None = Field(default=None, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _rate_required_for_decay(self) -> "ExistenceModelDocument":
        if self.kind == "decay_after_death" and self.rate is None:
            raise ValueError("decay_after_death requires a rate")
        return self


class SwapDocument(_Strict):
    time: int = Field(ge=1)
    objects: tuple[int, int]


class ScenarioDocument(_Strict):
    window_length: int = Field(ge=1)
    birth_times: list[int]
    death_times: list[int]
    initial_states: list[list[float]]
    process_noise_std: float = Field(default=0.3, ge=0.0)
    detection_prob: float = Field(default=0.7, ge=0.0, le=1.0)
    existence_model: ExistenceModelDocument = Field(
        default_factory=lambda: ExistenceModelDocument(kind="hold_high")
    )
    perturbation_std: float = Field(default=1.0, ge=0.0)
    swap_injections: list[SwapDocument] = Field(default_factory=list)
    seed: int = 0


def _density_from_step(step: StepDocument, dim: int):
    if len(step.mean) != dim:
        raise DomainError(
            f"step mean has dimension {len(step.mean)}, document declares {dim}"
        )
    if step.covariance is None:
        return DiracDensity(step.mean)
    cov = np.asarray(step.covariance, dtype=float)
    if cov.shape != (dim, dim):
        raise DomainError(
            f"step covariance has shape {cov.shape}, expected ({dim}, {dim})"
        )
    return GaussianDensity(step.mean, cov)


def _sequences_from(docs: list[SequenceDocument], dim: int) -> tuple[BernoulliSequence, ...]:
    out = []
    for sd in docs:
        densities = tuple(
            BernoulliDensity(step.existence, _density_from_step(step, dim)) for step in sd.steps
        )
        out.append(BernoulliSequence(sd.start_time, densities))
    return tuple(out)


def sequence_set_from_document(doc: InputDocument) -> SequenceSet:
    if doc.hypotheses is not None:
        raise DomainError("document carries hypotheses; use mixture_from_document")
    return SequenceSet(doc.window_length, _sequences_from(doc.sequences, doc.state_dimension))


def mixture_from_document(doc: InputDocument) -> HypothesisMixture:
    if doc.hypotheses is None:
        raise DomainError("document does not carry hypotheses")
    return HypothesisMixture(
        tuple(
            (
                h.weight,
                SequenceSet(doc.window_length, _sequences_from(h.sequences, doc.state_dimension)),
            )
            for h in doc.hypotheses
        )
    )


def document_from_sequence_set(ss: SequenceSet, state_dimension: int | None = None) -> InputDocument:
    dim = ss.dim if ss.dim is not None else state_dimension
    if dim is None:
        raise DomainError("state_dimension is required for an empty sequence set")
    seq_docs = []
    for s in ss.sequences:
        steps = []
        for b in s.densities:
            if isinstance(b.density, DiracDensity):
                steps.append(StepDocument(existence=b.existence, mean=b.density.point.tolist()))
            else:
                steps.append(
                    StepDocument(
                        existence=b.existence,
                        mean=b.density.mean.tolist(),
                        covariance=b.density.covariance.tolist(),
                    )
                )
        seq_docs.append(SequenceDocument(start_time=s.start_time, steps=steps))
    return InputDocument(window_length=ss.window_length, state_dimension=int(dim), sequences=seq_docs)


def report_document(
    report: MetricReport,
    metric: MetricName,
    base: BaseMetricKind,
    params: MetricParams,
    window_length: int,
    emit_weights: bool = False,
    hypothesis_totals: list[float] | None = None,
) -> ReportDocument:
    inv = 1.0 / params.p
    per_step = [
        StepReportDocument(
            time_step=k + 1,
            localization=s.expected_localization,
            existence_mismatch=s.existence_mismatch,
            missed=s.expected_missed,
            false=s.expected_false,
            switch=s.switch_to_next if s.switch_to_next is not None else 0.0,
            step_error=s.step_cost**inv,
        )
        for k, s in enumerate(report.per_step)
    ]
    weights = None
    if emit_weights:
        weights = [w.tolist() for w in report.weights]
    return ReportDocument(
        metric=metric,
        solver=report.solver_kind,  # type: ignore[arg-type]
        base=base.value,  # type: ignore[arg-type]
        params=ParamsDocument(c=params.c, p=params.p, gamma=params.gamma),
        window_length=window_length,
        total=report.total,
        per_step=per_step,
        hypothesis_totals=hypothesis_totals,
        weights=weights,
    )


def export_json_schemas(directory) -> dict[str, str]:
    """Write the JSON schemas of the three file formats; returns name -> path."""
    import json
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = {}
    for name, model in (
        ("input_document", InputDocument),
        ("report_document", ReportDocument),
        ("scenario_document", ScenarioDocument),
    ):
        path = directory / f"{name}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n")
        out[name] = str(path)
    return out


def scenario_config_from_document(doc: ScenarioDocument) -> ScenarioConfig:
    em_doc = doc.existence_model
    model: ExistenceModel
    if em_doc.kind == "hold_high":
        model = HoldHigh(level=em_doc.level)
    else:
        model = DecayAfterDeath(rate=float(em_doc.rate))
    return ScenarioConfig(
        window_length=doc.window_length,
        birth_times=tuple(doc.birth_times),
        death_times=tuple(doc.death_times),
        initial_states=tuple(np.asarray(s, dtype=float) for s in doc.initial_states),
        process_noise_std=doc.process_noise_std,
        detection_prob=doc.detection_prob,
        existence_model=model,
        perturbation_std=doc.perturbation_std,
        swap_injections=tuple((s.time, (s.objects[0], s.objects[1])) for s in doc.swap_injections),
        seed=doc.seed,
    )


def document_from_scenario_config(config: ScenarioConfig) -> ScenarioDocument:
    if isinstance(config.existence_model, HoldHigh):
        em = ExistenceModelDocument(kind="hold_high", level=config.existence_model.level)
    else:
        em = ExistenceModelDocument(kind="decay_after_death", rate=config.existence_model.rate)
    return ScenarioDocument(
        window_length=config.window_length,
        birth_times=list(config.birth_times),
        death_times=list(config.death_times),
        initial_states=[s.tolist() for s in config.initial_states],
        process_noise_std=config.process_noise_std,
        detection_prob=config.detection_prob,
        existence_model=em,
        perturbation_std=config.perturbation_std,
        swap_injections=[SwapDocument(time=t, objects=(a, b)) for t, (a, b) in config.swap_injections],
        seed=config.seed,
    )
