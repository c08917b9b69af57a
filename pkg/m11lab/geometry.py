from typing import List

from fastapi import APIRouter, Query

from . import cm_points, ring_f0, schemas, triangle_group
from .config import settings

router = APIRouter()


@router.get('/relations', response_model=schemas.RelationsResponse)
def get_relations():
    """Exact check of A^10 = B^3 = C^2 = ABC = Id for the three generators"""
    relations = triangle_group.certify_relations()
    certified = all(relations.values())
    return schemas.RelationsResponse(
        status="success" if certified else "failed",
        relations=relations,
        certified=certified,
    )


@router.get('/fixed-points', response_model=schemas.PointListResponse)
def get_fixed_points():
    fixed = triangle_group.special_fixed_points()
    points = [schemas.PointRecord.from_point(name, z) for name, z in fixed.items()]
    return schemas.PointListResponse(status="success", results=len(points), points=points)


@router.get('/geodesic-points', response_model=schemas.PointListResponse)
def get_geodesic_points():
    """Marked points P~, M, R~1, Q~1, P~1 on G_QP"""
    points = [schemas.PointRecord.from_point(name, z) for name, _, z in triangle_group.geodesic_points()]
    return schemas.PointListResponse(status="success", results=len(points), points=points)


@router.get('/forms', response_model=schemas.FormListResponse)
def get_forms():
    forms = [schemas.FormRecord.from_form(f) for f in cm_points.FORMS.values()]
    return schemas.FormListResponse(status="success", forms=forms)


@router.get('/cm-points', response_model=List[schemas.CMPointRecord])
def get_cm_points(
    lam: str = Query(..., description="lambda as 'a+b*u'"),
    box: int = Query(None, ge=1, le=500),
):
    lam_value = ring_f0.parse(lam)
    points = cm_points.locate_cm_points(lam_value, box or settings.M11_BOX)
    return [schemas.CMPointRecord.from_point(lam_value, cm) for cm in points]


@router.get('/lambdas', response_model=List[schemas.LambdaRecord])
def get_lambdas(
    norm_bound: int = Query(500, ge=1, le=5000),
    box: int = Query(None, ge=1, le=500),
):
    """Admissible CM discriminants below a norm bound"""
    found = cm_points.lambda_search(norm_bound, box=box or settings.M11_BOX)
    return [schemas.LambdaRecord.from_candidate(c) for c in found]
