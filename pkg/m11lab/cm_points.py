"""Quadratic forms attached to pairs of special points, their integral values, and CM points on G_QP."""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .cyclotomic import FElem
from .errors import BoundaryError, DomainError, InvariantViolation, SearchExhausted
from .quartic_field import ETA, FOURTH_ROOT_5, LElem, representable_both, solve_norm
from .ring_f0 import (
    F0Elem,
    SQRT5,
    U,
    U_SQRT5,
    U_TAU,
    enumerate_admissible,
    is_associate,
    is_inert_in_F,
    is_minus_one_mod_4,
    lambda_admissible,
    mod_reduce,
    residues,
    splits_in_sqrt,
)
from .triangle_group import (
    GAMMA_P,
    GAMMA_Q,
    GAMMA_R,
    Mat2Std,
    eta_inverse_on_param,
    eta_on_param,
    geodesic_point,
    in_geodesic_range,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class QuadForm:
    """a x^2 + 2b xy + c y^2 = det(x gamma_1 + y gamma_2)"""

    name: str
    a: F0Elem
    b: F0Elem
    c: F0Elem
    gamma1: Mat2Std = field(repr=False, compare=False)
    gamma2: Mat2Std = field(repr=False, compare=False)

    @property
    def discriminant(self) -> F0Elem:
        return 4 * (self.b * self.b - self.a * self.c)

    def __call__(self, x: F0Elem | int, y: F0Elem | int) -> F0Elem:
        x, y = F0Elem.coerce(x), F0Elem.coerce(y)
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def tau(self) -> QuadForm:
        return QuadForm(
            self.name + "^tau", self.a.tau(), self.b.tau(), self.c.tau(), self.gamma1, self.gamma2
        )

    def matrix(self, x: F0Elem | int, y: F0Elem | int) -> Mat2Std:
        return self.gamma1.scale(FElem.from_f0(F0Elem.coerce(x))) + self.gamma2.scale(
            FElem.from_f0(F0Elem.coerce(y))
        )

    def by_determinant(self, x: F0Elem | int, y: F0Elem | int) -> F0Elem:
        return self.matrix(x, y).det.to_f0()

    @property
    def is_primitive(self) -> bool:
        """False when sqrt5*u divides all three coefficients"""
        return not all((coef / U_SQRT5).is_integral for coef in (self.a, self.b, self.c))


FORMS: Dict[str, QuadForm] = {
    "QR": QuadForm("QR", F0Elem(3), -U_SQRT5, U_SQRT5, GAMMA_Q, GAMMA_R),
    "QP": QuadForm("QP", F0Elem(3), U_SQRT5 * U, U_SQRT5, GAMMA_Q, GAMMA_P),
    "PR": QuadForm("PR", U_SQRT5, -U_SQRT5 * U, U_SQRT5, GAMMA_P, GAMMA_R),
}


def q_eval(form: str, x: F0Elem | int, y: F0Elem | int) -> F0Elem:
    try:
        return FORMS[form](x, y)
    except KeyError:
        raise DomainError(f"unknown form {form!r}") from None


def q_value_tau(form: str, x: F0Elem | int, y: F0Elem | int) -> F0Elem:
    if form not in FORMS:
        raise DomainError(f"unknown form {form!r}")
    return FORMS[form].tau()(x, y)


# (x1, d1) = (2x, y + u x) diagonalizes q_QP as -u (x1^2 - sqrt5 d1^2)


def to_chart(x: F0Elem, y: F0Elem) -> Tuple[F0Elem, F0Elem]:
    return 2 * x, y + U * x


def from_chart(x1: F0Elem, d1: F0Elem) -> Tuple[F0Elem, F0Elem]:
    x = x1 / 2
    return x, d1 - U * x


def q_chart(x1: F0Elem | int, d1: F0Elem | int) -> F0Elem:
    x1, d1 = F0Elem.coerce(x1), F0Elem.coerce(d1)
    return -U * (x1 * x1 - SQRT5 * d1 * d1)


def integrality_check(
    x: F0Elem | int, y: F0Elem | int, pair: str = "QP"
) -> Tuple[bool, Optional[Tuple[F0Elem, F0Elem]]]:
    """Whether x gamma_1 + y gamma_2 has entries in Z[zeta_5]; for QP also the chart (x1, d1)"""
    if pair not in ("QP", "QR"):
        raise DomainError(f"integrality is only defined for QP and QR, not {pair!r}")
    x, y = F0Elem.coerce(x), F0Elem.coerce(y)
    M = FORMS[pair].matrix(x, y)
    integral = all(
        c.denominator == 1 for entry in (M.a, M.b, M.c, M.d) for c in entry.coefficients
    )
    if pair == "QR":
        return integral, None
    x1, d1 = to_chart(x, y)
    if integral != (x1.is_integral and d1.is_integral):
        raise InvariantViolation(f"matrix and chart integrality disagree at ({x}, {y})")
    return integral, (x1, d1)


class OrderTag(str, enum.Enum):
    MAXIMAL = "MaximalOE"
    NON_MAXIMAL = "NonMaximal"


_MAXIMAL_CLASS = (F0Elem(0), U)
_NON_MAXIMAL_CLASS = (mod_reduce(U * U, 2), F0Elem(1))


def residue_classes_minus_one() -> List[Tuple[F0Elem, F0Elem]]:
    """Pairs (x1, d1) mod 2 whose q_QP value is -1 mod 4"""
    hits = []
    for x1 in residues(2):
        for d1 in residues(2):
            if is_minus_one_mod_4(q_chart(x1, d1)):
                hits.append((x1, d1))
    return hits


@dataclass(frozen=True)
class FormSolution:
    x1: F0Elem
    d1: F0Elem
    value: F0Elem
    order_tag: Optional[OrderTag] = None

    @classmethod
    def from_chart(cls, x1: F0Elem, d1: F0Elem) -> FormSolution:
        if not (x1.is_integral and d1.is_integral):
            raise DomainError(f"({x1}, {d1}) is not integral")
        value = q_chart(x1, d1)
        tag = classify_residues(x1, d1) if is_minus_one_mod_4(value) else None
        return cls(x1, d1, value, tag)

    @classmethod
    def from_norm_solution(cls, sol: LElem) -> FormSolution:
        return cls.from_chart(sol.A, sol.B)

    @property
    def parameter(self) -> F0Elem:
        if not self.d1:
            raise DomainError("d1 = 0 has no geodesic parameter")
        return self.x1 / self.d1


def classify_residues(x1: F0Elem, d1: F0Elem) -> OrderTag:
    pair = (mod_reduce(x1, 2), mod_reduce(d1, 2))
    if pair == _MAXIMAL_CLASS:
        return OrderTag.MAXIMAL
    if pair == _NON_MAXIMAL_CLASS:
        return OrderTag.NON_MAXIMAL
    raise InvariantViolation(f"({x1}, {d1}) lies in residue class {pair} mod 2")


def classify_order(sol: FormSolution) -> OrderTag:
    if not is_minus_one_mod_4(sol.value):
        raise DomainError(f"value {sol.value} is not -1 mod 4")
    return classify_residues(sol.x1, sol.d1)


def transport(sol: FormSolution) -> FormSolution:
    """Multiplication of x1 + s d1 by eta"""
    moved = LElem(sol.x1, sol.d1) * ETA
    out = FormSolution.from_chart(moved.A, moved.B)
    if out.value != sol.value:
        raise InvariantViolation(f"transport changed the value {sol.value} -> {out.value}")
    return out


R1 = 3 - U


def arch_parameter(t: F0Elem) -> F0Elem:
    """Representative of t in [0, 3-u] under the reflections at t = 0 and t = 3-u"""
    if not in_geodesic_range(t):
        raise BoundaryError(f"t = {t} is not inside (-5^(1/4), 5^(1/4))")
    for _ in range(10_000):
        if t < 0:
            t = -t
        elif t > R1:
            t = eta_on_param(-eta_inverse_on_param(t))
        else:
            return t
    raise InvariantViolation(f"arch reduction of {t} did not settle")


@dataclass
class CMPoint:
    solution: FormSolution
    parameter: F0Elem
    arch: F0Elem
    point: mpmath.mpc

    @property
    def order_tag(self) -> Optional[OrderTag]:
        return self.solution.order_tag


def _require_cm_lambda(lam: F0Elem) -> None:
    if not lambda_admissible(lam):
        raise DomainError(f"{lam} is not admissible")
    if not is_minus_one_mod_4(lam):
        raise DomainError(f"{lam} is not -1 mod 4")


def locate_cm_points(lam: F0Elem, box: int) -> List[CMPoint]:
    """The two CM points on G_QP attached to lam, one per order"""
    _require_cm_lambda(lam)
    sols = solve_norm(U_TAU * lam, box)
    if not sols:
        raise SearchExhausted(f"no solution of q_QP = {lam} within box {box}")
    first = FormSolution.from_norm_solution(sols[0])
    pair = [first, transport(first)]
    tags = {classify_order(s) for s in pair}
    if tags != {OrderTag.MAXIMAL, OrderTag.NON_MAXIMAL}:
        raise InvariantViolation(f"located points for {lam} carry tags {tags}")
    points = []
    for sol in pair:
        t = sol.parameter
        points.append(CMPoint(sol, t, arch_parameter(t), geodesic_point(t)))
    return points


@dataclass
class LambdaCandidate:
    lam: F0Elem
    norm: int
    admissible: bool
    inert_in_F: bool
    not_self_conjugate: bool
    minus_one_mod_4: bool
    representable_both: bool
    s_split: List[Tuple[F0Elem, bool]]
    solutions: List[LElem] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return (
            self.admissible
            and self.inert_in_F
            and self.not_self_conjugate
            and self.minus_one_mod_4
            and self.representable_both
            and all(ok for _, ok in self.s_split)
        )


def _validate_S(S: Sequence[F0Elem]) -> None:
    for s in S:
        if is_associate(s, U_SQRT5):
            raise DomainError("u*sqrt5 may not be in S")
        if not any(is_associate(s.tau(), other) for other in S):
            raise DomainError(f"S is not stable under conjugation: {s.tau()} missing")


def minus_one_associate(lam: F0Elem) -> F0Elem:
    """The associate lam * u^(2k), k in {-1, 0, 1}, that is -1 mod 4"""
    u2 = U * U
    for k in (0, 1, -1):
        cand = lam * u2 ** k
        if is_minus_one_mod_4(cand):
            return cand
    raise InvariantViolation(f"no associate of {lam} is -1 mod 4")


def certify_candidate(lam: F0Elem, S: Sequence[F0Elem], box: int) -> LambdaCandidate:
    admissible = lambda_admissible(lam)
    inert = admissible and is_inert_in_F(lam)
    not_self = not is_associate(lam, lam.tau())
    minus_one = is_minus_one_mod_4(lam)
    sols = solve_norm(U_TAU * lam, box) if admissible else []
    both = bool(sols) and representable_both(lam, box)
    split = [(s, admissible and splits_in_sqrt(-lam, s)) for s in S]
    return LambdaCandidate(
        lam=lam,
        norm=int(lam.norm),
        admissible=admissible,
        inert_in_F=inert,
        not_self_conjugate=not_self,
        minus_one_mod_4=minus_one,
        representable_both=both,
        s_split=split,
        solutions=sols,
    )


def _certify_job(args: Tuple[F0Elem, Tuple[F0Elem, ...], int]) -> LambdaCandidate:
    return certify_candidate(*args)


def lambda_search(
    norm_bound: int, S: Sequence[F0Elem] = (), box: int = 60, workers: int = 1
) -> List[LambdaCandidate]:
    _validate_S(S)
    pool_input = []
    for lam0 in enumerate_admissible(norm_bound):
        if int(lam0.norm) % 5 != 4:
            continue
        lam = minus_one_associate(lam0)
        if is_associate(lam, lam.tau()):
            continue
        pool_input.append((lam, tuple(S), box))
    logger.info("lambda_search: %d candidates below norm %d", len(pool_input), norm_bound)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            certified = list(executor.map(_certify_job, pool_input, chunksize=8))
    else:
        certified = [_certify_job(job) for job in pool_input]
    found = [c for c in certified if c.passes]
    found.sort(key=lambda c: (c.norm, c.lam.a, c.lam.b))
    logger.info("lambda_search: %d admissible discriminants found", len(found))
    return found


def _parameters(item: Union[LambdaCandidate, F0Elem, float], box: int) -> List[float]:
    if isinstance(item, LambdaCandidate):
        return [float(p.parameter) for p in locate_cm_points(item.lam, box)]
    return [float(item)]


def density_diagnostic(
    candidates: Iterable[Union[LambdaCandidate, F0Elem, float]], bins: int = 10, box: int = 60
) -> Dict[str, object]:
    """Histogram of geodesic parameters over (-5^(1/4), 5^(1/4))"""
    items = list(candidates)
    if not items:
        raise DomainError("density_diagnostic needs at least one candidate")
    params = [t for item in items for t in _parameters(item, box)]
    counts, edges = np.histogram(params, bins=bins, range=(-FOURTH_ROOT_5, FOURTH_ROOT_5))
    left = sum(1 for t in params if t < 1)
    right = sum(1 for t in params if t > 1)
    return {
        "edges": [float(e) for e in edges],
        "counts": [int(c) for c in counts],
        "left_of_midpoint": left,
        "right_of_midpoint": right,
        "both_sides": left > 0 and right > 0,
    }
