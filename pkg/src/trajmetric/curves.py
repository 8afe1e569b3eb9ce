"""Plot-ready CSV output for per-step error decompositions.

One row per time step with the exact header below; values are per-step
errors in distance units (the 1/p power of the p-th-power costs), RMS
aggregated across runs when several reports are given.  The final row's
switch cell is 0 because switch costs live between consecutive steps.
Output is UTF-8 with LF line endings, '.' decimal separator and 17
significant digits.
"""

from __future__ import annotations

import numpy as np

from .documents import ReportDocument
from .errors import DomainError
from .scenario import AggregateSeries, RunSeries, aggregate_rms

__all__ = ["CSV_HEADER", "series_from_report_document", "curves_csv", "render_csv"]

CSV_HEADER = "time_step,total,localization,existence_mismatch,missed,false,switch"


def series_from_report_document(doc: ReportDocument) -> RunSeries:
    if len(doc.per_step) != doc.window_length:
        raise DomainError(
            f"report has {len(doc.per_step)} per-step rows for window length {doc.window_length}"
        )
    inv = 1.0 / doc.params.p
    steps = doc.per_step
    return RunSeries(
        window_length=doc.window_length,
        p=doc.params.p,
        total=np.array([s.step_error for s in steps]),
        localization=np.array([s.localization**inv for s in steps]),
        existence_mismatch=np.array([s.existence_mismatch**inv for s in steps]),
        missed=np.array([s.missed**inv for s in steps]),
        false_det=np.array([s.false**inv for s in steps]),
        switch=np.array([s.switch**inv for s in steps[:-1]]),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def render_csv(agg: AggregateSeries) -> str:
    lines = [CSV_HEADER]
    for k in range(agg.window_length):
        switch = agg.switch[k] if k < agg.window_length - 1 else 0.0
        lines.append(
            ",".join(
                [str(k + 1)]
                + [
                    _fmt(v)
                    for v in (
                        agg.total[k],
                        agg.localization[k],
                        agg.existence_mismatch[k],
                        agg.missed[k],
                        agg.false_det[k],
                        switch,
                    )
                ]
            )
        )
    return "\n".join(lines) + "\n"


def curves_csv(reports: list[ReportDocument]) -> str:
    """Aggregate one or more report documents into the curves CSV."""
    if not reports:
        raise DomainError("at least one report is required")
    return render_csv(aggregate_rms([series_from_report_document(d) for d in reports]))
