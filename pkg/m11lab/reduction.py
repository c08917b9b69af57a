from fractions import Fraction

from fastapi import APIRouter, Depends, HTTPException, Query, status
from sqlalchemy.orm import Session

from . import models, reduction_lab, ring_f0, schemas
from .count_cache import CountCache
from .database import get_db

router = APIRouter()


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"{text!r} is not a rational number")


@router.get('/count', response_model=schemas.CountRecord)
def get_count(t: str, q: int = Query(..., ge=2, le=1 << 24)):
    t_value = _rational(t)
    return schemas.CountRecord(t=str(t_value), q=q, count=reduction_lab.count_points(t_value, q))


@router.get('/lpoly', response_model=schemas.LPolyRecord)
def get_lpoly(
    t: str,
    p: int = Query(..., ge=3, le=256),
    method: str = Query("auto", pattern="^(auto|counts|characters)$"),
    db: Session = Depends(get_db),
):
    t_value = _rational(t)
    cache = CountCache(db)
    L = reduction_lab.l_polynomial(t_value, p, method=method, counts=cache.get(t_value, p))
    cache.put(t_value, p, [L.count(k) for k in range(1, 5)])
    return schemas.LPolyRecord.from_lpoly(t_value, L)


@router.get('/newton', response_model=schemas.NewtonRecord)
def get_newton(t: str, p: int = Query(..., ge=3, le=256), db: Session = Depends(get_db)):
    t_value = _rational(t)
    cache = CountCache(db)
    L = reduction_lab.l_polynomial(t_value, p, counts=cache.get(t_value, p))
    polygon = reduction_lab.newton_polygon(L)
    return schemas.NewtonRecord.from_polygon(t_value, polygon, reduction_lab.classify_np(polygon))


@router.get('/scan', response_model=schemas.ScanReportRecord)
def get_scan(t: str, p_bound: int = Query(60, ge=3, le=100), db: Session = Depends(get_db)):
    """Newton-polygon classification of C_t at the primes below p_bound"""
    report = reduction_lab.scan_basic(_rational(t), p_bound, cache=CountCache(db))
    return schemas.ScanReportRecord.from_report(report)


@router.get('/hypotheses', response_model=schemas.HypothesesRecord)
def get_hypotheses(J: str):
    try:
        J_value = Fraction(J)
    except (ValueError, ZeroDivisionError):
        J_value = ring_f0.parse(J)
    return schemas.HypothesesRecord.from_hypotheses(J_value, reduction_lab.theorem_hypotheses(J_value))


@router.get('/cache', response_model=schemas.PointCountListResponse)
def get_cached_counts(
    db: Session = Depends(get_db),
    limit: int = Query(50, ge=1, le=500),
    page: int = Query(1, ge=1),
    p: int = Query(None, ge=2, description="Only counts at this prime"),
):
    skip = (page - 1) * limit
    query = db.query(models.PointCount)
    if p is not None:
        query = query.filter(models.PointCount.p == p)
    rows = (
        query.order_by(models.PointCount.p, models.PointCount.t_num, models.PointCount.k)
        .offset(skip)
        .limit(limit)
        .all()
    )
    counts = [schemas.PointCountResponse.model_validate(r) for r in rows]
    return schemas.PointCountListResponse(status="success", results=len(counts), counts=counts)
