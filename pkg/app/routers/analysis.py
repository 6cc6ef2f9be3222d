"""
Analysis router: failure-probability bound and core-SVP estimates.
Both are pure functions of the preset; results are cached in-process.
"""

import math
from typing import Literal, Optional

from fastapi import APIRouter, HTTPException, Query

from app.core.config import settings
from app.core.errors import E8KemError
from app.core.params import get_preset
from app.schemas.analysis import AttackRow, ClassTerm, PeReport, SecurityReport
from app.services import analysis, estimator
from app.utils.response import success_response

router = APIRouter(prefix="/api/analysis", tags=["Analysis"])


def _finite(value: float) -> Optional[float]:
    # JSON has no infinity; a zero tail probability is reported as null
    return value if math.isfinite(value) else None


@router.get("/pe")
def failure_probability(
    preset: str = Query(settings.DEFAULT_PRESET),
    mode: Optional[Literal["float", "exact"]] = Query(None),
    union: Literal["types", "classes"] = Query("types"),
):
    mode = mode or settings.ANALYSIS_MODE
    try:
        params = get_preset(preset)
        breakdown = analysis.pe_breakdown(params, mode, union=union)
        classes = [
            ClassTerm(
                type_tag=spec.type_tag,
                representative=list(spec.representative),
                threshold=spec.threshold,
                multiplicity=spec.multiplicity,
                log2_prob=_finite(analysis.log2_prob(p)),
            )
            for spec, p in breakdown
        ]
        total = sum(spec.multiplicity * p for spec, p in breakdown)
        report = PeReport(preset=params.name, mode=mode, union=union,
                          log2_pe=analysis.log2_prob(params.L * total), classes=classes)
    except E8KemError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return success_response(data=report)


@router.get("/security")
def security(preset: str = Query(settings.DEFAULT_PRESET)):
    try:
        params = get_preset(preset)
        primal = estimator.primal_cost(params)
        dual = estimator.dual_cost(params)
    except E8KemError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    report = SecurityReport(
        preset=params.name,
        primal=AttackRow(**primal.__dict__),
        dual=AttackRow(**dual.__dict__),
    )
    return success_response(data=report)
