from fractions import Fraction
from typing import Dict, List, Optional

import mpmath
from pydantic import BaseModel

from .cm_points import SCHEMA_VERSION, CMPoint, LambdaCandidate, QuadForm
from .reduction_lab import (
    Census,
    Hypotheses,
    LPolynomial,
    NewtonPolygon,
    ScanReport,
    ScanRow,
    lehr_criterion,
    val5,
    j_normalized,
)


def format_number(z, digits: int = 20) -> str:
    return mpmath.nstr(z, digits)


class ErrorResponse(BaseModel):
    error: str
    detail: str
    command: Optional[str] = None


# Geometry schemas
class RelationsResponse(BaseModel):
    status: str
    relations: Dict[str, bool]
    certified: bool


class PointRecord(BaseModel):
    name: str
    re: str
    im: str

    @classmethod
    def from_point(cls, name: str, z) -> "PointRecord":
        return cls(name=name, re=format_number(mpmath.re(z)), im=format_number(mpmath.im(z)))


class PointListResponse(BaseModel):
    status: str
    results: int
    points: List[PointRecord]


class FormRecord(BaseModel):
    name: str
    a: str
    b: str
    c: str
    discriminant: str
    primitive: bool

    @classmethod
    def from_form(cls, form: QuadForm) -> "FormRecord":
        return cls(
            name=form.name,
            a=str(form.a),
            b=str(form.b),
            c=str(form.c),
            discriminant=str(form.discriminant),
            primitive=form.is_primitive,
        )


class FormListResponse(BaseModel):
    status: str
    forms: List[FormRecord]


class LambdaRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    lam: str
    norm: int
    inert_in_F: bool
    not_self_conjugate: bool
    minus_one_mod_4: bool
    representable_both: bool
    s_split: Dict[str, bool] = {}
    passes: bool
    solutions: List[str] = []

    @classmethod
    def from_candidate(cls, c: LambdaCandidate) -> "LambdaRecord":
        return cls(
            lam=str(c.lam),
            norm=c.norm,
            inert_in_F=c.inert_in_F,
            not_self_conjugate=c.not_self_conjugate,
            minus_one_mod_4=c.minus_one_mod_4,
            representable_both=c.representable_both,
            s_split={str(s): ok for s, ok in c.s_split},
            passes=c.passes,
            solutions=[str(s) for s in c.solutions],
        )


class CMPointRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    lam: str
    x1: str
    d1: str
    order: Optional[str]
    parameter: str
    arch: str
    re: str
    im: str

    @classmethod
    def from_point(cls, lam, cm: CMPoint) -> "CMPointRecord":
        return cls(
            lam=str(lam),
            x1=str(cm.solution.x1),
            d1=str(cm.solution.d1),
            order=cm.order_tag.value if cm.order_tag else None,
            parameter=str(cm.parameter),
            arch=str(cm.arch),
            re=format_number(mpmath.re(cm.point)),
            im=format_number(mpmath.im(cm.point)),
        )


class DensityRecord(BaseModel):
    edges: List[float]
    counts: List[int]
    left_of_midpoint: int
    right_of_midpoint: int
    both_sides: bool


# Reduction schemas
class CountRecord(BaseModel):
    t: str
    q: int
    count: int


class LPolyRecord(BaseModel):
    t: str
    p: int
    coefficients: List[int]
    method: str
    counts: List[int]

    @classmethod
    def from_lpoly(cls, t: Fraction, L: LPolynomial) -> "LPolyRecord":
        return cls(
            t=str(t),
            p=L.p,
            coefficients=list(L.coefficients),
            method=L.method,
            counts=[L.count(k) for k in range(1, 5)],
        )


class NewtonRecord(BaseModel):
    t: str
    p: int
    slopes: List[str]
    label: str

    @classmethod
    def from_polygon(cls, t: Fraction, polygon: NewtonPolygon, label) -> "NewtonRecord":
        return cls(t=str(t), p=polygon.p, slopes=[str(s) for s in polygon.slopes], label=label.value)


class ScanRowRecord(BaseModel):
    p: int
    label: Optional[str] = None
    coefficients: Optional[List[int]] = None
    slopes: Optional[List[str]] = None
    method: Optional[str] = None
    reason: Optional[str] = None

    @classmethod
    def from_row(cls, row: ScanRow) -> "ScanRowRecord":
        return cls(
            p=row.p,
            label=row.label.value if row.label else None,
            coefficients=list(row.coefficients) if row.coefficients else None,
            slopes=[str(s) for s in row.slopes] if row.slopes else None,
            method=row.method,
            reason=row.reason,
        )


class ScanReportRecord(BaseModel):
    schema_version: int
    t: str
    J: str
    p_bound: int
    rows: List[ScanRowRecord]
    skipped: List[ScanRowRecord]
    summary: Dict[str, int]
    basic_primes: List[int]

    @classmethod
    def from_report(cls, report: ScanReport) -> "ScanReportRecord":
        return cls(
            schema_version=report.schema_version,
            t=str(report.t),
            J=str(report.J),
            p_bound=report.p_bound,
            rows=[ScanRowRecord.from_row(r) for r in report.rows if not r.skipped],
            skipped=[ScanRowRecord.from_row(r) for r in report.skipped],
            summary=report.summary,
            basic_primes=report.basic_primes,
        )


class HypothesesRecord(BaseModel):
    J: str
    j: str
    val5_j: Optional[int]
    h1: bool
    h2: bool
    h3: bool
    literal_h2: bool
    all: bool
    lehr: str

    @classmethod
    def from_hypotheses(cls, J, h: Hypotheses) -> "HypothesesRecord":
        v = val5(j_normalized(J))
        return cls(
            J=str(J),
            j=str(j_normalized(J)),
            val5_j=None if v == float("inf") else int(v),
            h1=h.h1,
            h2=h.h2,
            h3=h.h3,
            literal_h2=h.literal_h2,
            all=h.all,
            lehr=lehr_criterion(J).value,
        )


class PointCountResponse(BaseModel):
    j_num: str
    j_den: str
    t_num: str
    t_den: str
    p: int
    k: int
    count: int

    class Config:
        from_attributes = True


class PointCountListResponse(BaseModel):
    status: str
    results: int
    counts: List[PointCountResponse]


class CensusRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    p_bound: int
    basic_primes: Dict[str, List[int]]
    by_residue: Dict[str, Dict[str, int]]

    @classmethod
    def from_census(cls, census: Census) -> "CensusRecord":
        return cls(
            p_bound=census.p_bound,
            basic_primes={str(t): primes for t, primes in census.basic_primes.items()},
            by_residue={f"{r} mod 5": counts for r, counts in census.by_residue.items()},
        )
