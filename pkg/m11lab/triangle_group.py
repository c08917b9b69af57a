"""The (2, 3, 10) triangle group acting on the upper half-plane.

Generators live exactly in GL2(Q(zeta_5)); the isotropic-basis versions are
evaluated with mpmath at the configured precision and act by Mobius maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import mpmath

from .config import settings
from .cyclotomic import ALPHA, BETA0, EPS, OMEGA2, ZETA, ZETA_INV, FElem
from .errors import BoundaryError, DomainError, NotEllipticError, PoleError
from .ring_f0 import F0Elem, SQRT5, U

logger = logging.getLogger(__name__)

Param = Union[F0Elem, float, mpmath.mpf]


@dataclass(frozen=True)
class Mat2Std:
    a: FElem
    b: FElem
    c: FElem
    d: FElem

    @classmethod
    def of(cls, a, b, c, d) -> Mat2Std:
        return cls(*(FElem.coerce(x) for x in (a, b, c, d)))

    @classmethod
    def identity(cls) -> Mat2Std:
        return cls.of(1, 0, 0, 1)

    def __matmul__(self, o: Mat2Std) -> Mat2Std:
        return Mat2Std(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: Mat2Std) -> Mat2Std:
        return Mat2Std(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def scale(self, x) -> Mat2Std:
        x = FElem.coerce(x)
        return Mat2Std(x * self.a, x * self.b, x * self.c, x * self.d)

    def __pow__(self, n: int) -> Mat2Std:
        result, base = Mat2Std.identity(), self
        while n > 0:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    @property
    def det(self) -> FElem:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> FElem:
        return self.a + self.d

    def is_identity(self) -> bool:
        return self == Mat2Std.identity()

    def order(self, limit: int = 60) -> int:
        power = self
        for k in range(1, limit + 1):
            if power.is_identity():
                return k
            power = power @ self
        raise DomainError(f"matrix has order larger than {limit}")


@dataclass(frozen=True)
class Mat2Iso:
    x11: mpmath.mpc
    x12: mpmath.mpc
    x21: mpmath.mpc
    x22: mpmath.mpc

    @property
    def trace(self) -> mpmath.mpc:
        return self.x11 + self.x22

    @property
    def det(self) -> mpmath.mpc:
        return self.x11 * self.x22 - self.x12 * self.x21

    def __matmul__(self, o: Mat2Iso) -> Mat2Iso:
        return Mat2Iso(
            self.x11 * o.x11 + self.x12 * o.x21,
            self.x11 * o.x12 + self.x12 * o.x22,
            self.x21 * o.x11 + self.x22 * o.x21,
            self.x21 * o.x12 + self.x22 * o.x22,
        )


@dataclass(frozen=True)
class HPoint:
    re: float
    im: float

    def __post_init__(self) -> None:
        if not self.im > 0:
            raise DomainError(f"{self.re}+{self.im}i is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z) -> HPoint:
        return cls(float(mpmath.re(z)), float(mpmath.im(z)))


def tolerance() -> float:
    return settings.M11_TOLERANCE


S_CIRC = ALPHA * FElem.from_f0(U)  # alpha / eps

A_P = Mat2Std.of(-ZETA_INV, 0, 0, ZETA)
A_Q = Mat2Std.of(-ZETA / EPS, 1, FElem.from_f0(1 / EPS), -ZETA_INV / EPS)
A_R = Mat2Std.of(FElem.from_f0(1 / EPS), -ZETA_INV, ZETA / EPS, FElem.from_f0(-1 / EPS))

GAMMA_P = Mat2Std.of(-ALPHA, 0, 0, ALPHA)
GAMMA_Q = Mat2Std.of(-S_CIRC, 2, FElem.from_f0(2 / EPS), S_CIRC)
GAMMA_R = Mat2Std.of(S_CIRC, -ZETA_INV * ALPHA, ZETA * ALPHA / EPS, -S_CIRC)


def generators() -> Tuple[Mat2Std, ...]:
    return A_P, A_Q, A_R, GAMMA_P, GAMMA_Q, GAMMA_R


def certify_relations() -> Dict[str, bool]:
    """The four exact relations of the triangle group"""
    ident = Mat2Std.identity()
    return {
        "A_P^10 = Id": A_P ** 10 == ident,
        "A_Q^3 = Id": A_Q ** 3 == ident,
        "A_R^2 = Id": A_R ** 2 == ident,
        "A_P A_Q A_R = Id": A_P @ A_Q @ A_R == ident,
    }


def _omega() -> mpmath.mpf:
    return mpmath.sqrt(OMEGA2.embed(1))


def isotropic_invariants(M: Mat2Std) -> Tuple[FElem, FElem, FElem, FElem]:
    """(r, s, j, k) = (a+d, d-a, w^2 c + b, w^2 c - b), exact"""
    w2 = FElem.from_f0(OMEGA2)
    return M.a + M.d, M.d - M.a, w2 * M.c + M.b, w2 * M.c - M.b


def to_isotropic(M: Mat2Std) -> Mat2Iso:
    with mpmath.workdps(settings.M11_PRECISION):
        r, s, j, k = (x.embed(1) for x in isotropic_invariants(M))
        w = _omega()
        beta0 = BETA0.embed(1)
        scale = 1 / (2 * w)
        return Mat2Iso(
            scale * (w * r + j),
            scale * beta0 * (w * s - k),
            scale * (w * s + k) / beta0,
            scale * (w * r - j),
        )


def isotropic_det_exact(M: Mat2Std) -> FElem:
    """(w^2 r^2 - j^2 - w^2 s^2 + k^2) / (4 w^2) computed in Q(zeta_5)"""
    r, s, j, k = isotropic_invariants(M)
    w2 = FElem.from_f0(OMEGA2)
    return (w2 * r * r - j * j - w2 * s * s + k * k) / (4 * w2)


def mobius(X: Mat2Iso, z) -> mpmath.mpc:
    with mpmath.workdps(settings.M11_PRECISION):
        den = X.x21 * z + X.x22
        if abs(den) < mpmath.mpf(10) ** (-settings.M11_PRECISION + 5):
            raise PoleError(f"{z} is sent to infinity")
        return (X.x11 * z + X.x12) / den


def fixed_point(X: Mat2Iso) -> mpmath.mpc:
    """Root of x21 t^2 + (x22 - x11) t - x12 = 0 in the upper half-plane"""
    tol = tolerance()
    with mpmath.workdps(settings.M11_PRECISION):
        det = X.det
        if abs(det) < tol or abs(X.x21) < tol:
            raise NotEllipticError("matrix is singular or fixes infinity")
        shape = X.trace ** 2 / det
        if abs(mpmath.im(shape)) > tol or mpmath.re(shape) >= 4 - tol:
            raise NotEllipticError(f"tr^2/det = {mpmath.nstr(shape, 8)} is not elliptic")
        b = X.x22 - X.x11
        disc = mpmath.sqrt(b * b + 4 * X.x21 * X.x12)
        roots = [(-b + disc) / (2 * X.x21), (-b - disc) / (2 * X.x21)]
        return max(roots, key=lambda z: mpmath.im(z))


def special_fixed_points() -> Dict[str, mpmath.mpc]:
    return {name: fixed_point(to_isotropic(M)) for name, M in (("P", A_P), ("Q", A_Q), ("R", A_R))}


def _tau1(t: Param) -> mpmath.mpf:
    if isinstance(t, F0Elem):
        return t.embed(1)
    return mpmath.mpf(t)


def in_geodesic_range(t: Param) -> bool:
    if isinstance(t, F0Elem):
        return (SQRT5 - t * t).sign1 > 0
    with mpmath.workdps(settings.M11_PRECISION):
        return mpmath.mpf(t) ** 2 < mpmath.sqrt(5)


def geodesic_point(t: Param) -> mpmath.mpc:
    """Fixed point of x gamma_Q + y gamma_P with t = x1/d1, on the half circle |z| = |beta0|"""
    if not in_geodesic_range(t):
        raise BoundaryError(f"t = {t} is not inside (-5^(1/4), 5^(1/4))")
    with mpmath.workdps(settings.M11_PRECISION):
        tv = _tau1(t)
        factor = BETA0.embed(1) / (_omega() * ALPHA.embed(1))
        root = mpmath.sqrt(mpmath.mpc(tv * tv - mpmath.sqrt(5)))
        if mpmath.im(factor * root) < 0:
            root = -root
        return factor * (tv + root)


def hyp_distance(z1, z2) -> mpmath.mpf:
    with mpmath.workdps(settings.M11_PRECISION):
        y1, y2 = mpmath.im(z1), mpmath.im(z2)
        if y1 <= 0 or y2 <= 0:
            raise DomainError("points must lie in the upper half-plane")
        return mpmath.acosh(1 + abs(z1 - z2) ** 2 / (2 * y1 * y2))


def hyp_midpoint(z1, z2) -> mpmath.mpc:
    with mpmath.workdps(settings.M11_PRECISION):
        x1, x2 = mpmath.re(z1), mpmath.re(z2)
        if abs(x1 - x2) < mpmath.mpf(10) ** (-settings.M11_PRECISION + 5):
            return mpmath.mpc(x1, mpmath.sqrt(mpmath.im(z1) * mpmath.im(z2)))
        center = (abs(z1) ** 2 - abs(z2) ** 2) / (2 * (x1 - x2))
        radius = abs(z1 - center)
        # tan(theta/2) is multiplicative along the half circle
        h1 = mpmath.tan(mpmath.arg(z1 - center) / 2)
        h2 = mpmath.tan(mpmath.arg(z2 - center) / 2)
        theta = 2 * mpmath.atan(mpmath.sqrt(h1 * h2))
        return center + radius * mpmath.expj(theta)


def eta_on_param(t: Param) -> Param:
    """(u t + sqrt5) / (t + u)"""
    if isinstance(t, F0Elem):
        if t == -U:
            raise PoleError("eta has a pole at t = -u")
        return (U * t + SQRT5) / (t + U)
    with mpmath.workdps(settings.M11_PRECISION):
        phi = (1 + mpmath.sqrt(5)) / 2
        den = mpmath.mpf(t) + phi
        if abs(den) < mpmath.mpf(10) ** (-settings.M11_PRECISION + 5):
            raise PoleError("eta has a pole at t = -u")
        return (phi * t + mpmath.sqrt(5)) / den


def eta_inverse_on_param(t: Param) -> Param:
    """(u t - sqrt5) / (u - t)"""
    if isinstance(t, F0Elem):
        if t == U:
            raise PoleError("eta^-1 has a pole at t = u")
        return (U * t - SQRT5) / (U - t)
    with mpmath.workdps(settings.M11_PRECISION):
        phi = (1 + mpmath.sqrt(5)) / 2
        return (phi * t - mpmath.sqrt(5)) / (phi - t)


def vertex_angle(z0, z1, z2) -> mpmath.mpf:
    """Interior angle at z0 of the geodesic triangle z0 z1 z2"""
    with mpmath.workdps(settings.M11_PRECISION):
        x0, y0 = mpmath.re(z0), mpmath.im(z0)

        def to_disk(z):
            w = (z - x0) / y0
            return (w - 1j) / (w + 1j)

        w1, w2 = to_disk(z1), to_disk(z2)
        return abs(mpmath.arg(w2 / w1))


def triangle_area(vertices: Sequence | None = None) -> mpmath.mpf:
    """Area by angle defect; the fundamental triangle when no vertices are given"""
    if vertices is None:
        fixed = special_fixed_points()
        vertices = (fixed["P"], fixed["Q"], fixed["R"])
    p, q, r = vertices
    tol = tolerance()
    if abs(p - q) < tol or abs(q - r) < tol or abs(p - r) < tol:
        return mpmath.mpf(0)
    with mpmath.workdps(settings.M11_PRECISION):
        return mpmath.pi - vertex_angle(p, q, r) - vertex_angle(q, r, p) - vertex_angle(r, p, q)


# Marked parameters on the geodesic through P~ and Q~
GEODESIC_PARAMETERS: Dict[str, F0Elem] = {
    "P": F0Elem(0),
    "M": F0Elem(1),
    "R1": 3 - U,
    "Q1": (2 * U + 4) / 5,
    "P1": (4 * U - 2) / 3,
}


def geodesic_points() -> List[Tuple[str, F0Elem, mpmath.mpc]]:
    return [(name, t, geodesic_point(t)) for name, t in GEODESIC_PARAMETERS.items()]


def adjacent_triangles() -> List[Tuple[str, Tuple[mpmath.mpc, ...]]]:
    """Images of the fundamental triangle under the three vertex rotations"""
    fixed = special_fixed_points()
    tri = (fixed["P"], fixed["Q"], fixed["R"])
    out = []
    for name, M in (("A_P", A_P), ("A_Q", A_Q), ("A_R", A_R)):
        X = to_isotropic(M)
        out.append((name, tuple(mobius(X, z) for z in tri)))
    return out
