"""L1 = F0(s), s^4 = 5, as a quadratic extension of F0, and its relative norm equation.

    N(A + B s) = A^2 - sqrt5 B^2

Solutions are reported up to sign and up to the norm-one unit
eta = u^2 + u s.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from math import isqrt
from typing import List, Optional

from .errors import DomainError
from .ring_f0 import (
    F0Elem,
    SQRT5,
    U,
    U_TAU,
    lambda_admissible,
    residue_field,
)

logger = logging.getLogger(__name__)

# h(L1) = 1, h(L~) = 2, units of L1 generated by -1, u, eta
CLASS_NUMBER_L1 = 1
CLASS_NUMBER_L_TILDE = 2
UNIT_GENERATORS = ("-1", "u", "eta")

FOURTH_ROOT_5 = 5 ** 0.25


@dataclass(frozen=True)
class LElem:
    A: F0Elem
    B: F0Elem

    def __str__(self) -> str:
        return f"({self.A})+({self.B})*s"

    def __add__(self, other: LElem) -> LElem:
        return LElem(self.A + other.A, self.B + other.B)

    def __neg__(self) -> LElem:
        return LElem(-self.A, -self.B)

    def __sub__(self, other: LElem) -> LElem:
        return self + (-other)

    def __mul__(self, other: LElem | F0Elem | int) -> LElem:
        if not isinstance(other, LElem):
            other = LElem(F0Elem.coerce(other), F0Elem(0))
        # s^2 = sqrt5
        return LElem(
            self.A * other.A + SQRT5 * self.B * other.B,
            self.A * other.B + self.B * other.A,
        )

    __rmul__ = __mul__

    def conj(self) -> LElem:
        return LElem(self.A, -self.B)

    def __pow__(self, n: int) -> LElem:
        base = self if n >= 0 else self.conj() * norm_L(self).inverse()
        result = LElem(F0Elem(1), F0Elem(0))
        for _ in range(abs(n)):
            result = result * base
        return result

    @property
    def is_integral(self) -> bool:
        return self.A.is_integral and self.B.is_integral

    def embed_real(self) -> tuple[float, float]:
        """(sigma+, sigma-) = A1 +- B1 * 5^(1/4) in the first embedding of F0"""
        a1, b1 = float(self.A), float(self.B)
        return a1 + b1 * FOURTH_ROOT_5, a1 - b1 * FOURTH_ROOT_5


def norm_L(x: LElem) -> F0Elem:
    return x.A * x.A - SQRT5 * x.B * x.B


ETA = LElem(U * U, U)
ETA_INV = ETA.conj()
S = LElem(F0Elem(0), F0Elem(1))

ETA_PLUS = float(U * U) + float(U) * FOURTH_ROOT_5


def sqrt_integral(x: F0Elem) -> Optional[F0Elem]:
    """An integral square root of x, or None"""
    if not x.is_integral:
        return None
    if not x:
        return F0Elem(0)
    n = int(x.norm)
    if n < 0:
        return None
    r = isqrt(n)
    if r * r != n:
        return None
    for na in (r, -r):
        t2 = int(x.trace) + 2 * na
        if t2 < 0:
            continue
        t = isqrt(t2)
        if t * t != t2:
            continue
        for tr in (t, -t):
            d = tr * tr - 4 * na
            if d < 0 or d % 5:
                continue
            a1 = isqrt(d // 5)
            if a1 * a1 * 5 != d:
                continue
            for b in (a1, -a1):
                if (tr - b) % 2:
                    continue
                cand = F0Elem((tr - b) // 2, b)
                if cand * cand == x:
                    return cand
    return None


def _is_reduced(x: LElem) -> bool:
    # |sigma+ / sigma-| in [1, eta_plus^2): sigma+^2 - sigma-^2 = 4 A1 B1 5^(1/4)
    if x.A.sign1 * x.B.sign1 < 0:
        return False
    y = x * ETA_INV
    return y.A.sign1 * y.B.sign1 < 0


def eta_reduce(x: LElem) -> LElem:
    """The eta-power multiple of x in the fundamental window, with sigma+ > 0"""
    if not x.A and not x.B:
        raise DomainError("cannot reduce zero")
    for _ in range(10_000):
        if x.A.sign1 * x.B.sign1 < 0:
            x = x * ETA
        elif not _is_reduced(x):
            x = x * ETA_INV
        else:
            break
    else:
        raise DomainError(f"eta reduction of {x} did not settle")
    lead = x.A.sign1 if x.A else x.B.sign1
    return -x if lead < 0 else x


def solve_norm(target: F0Elem, box_bound: int) -> List[LElem]:
    """Integral A + B s of norm target, eta-reduced, up to sign.

    B is enumerated inside the window cut out by both real embeddings of F0
    and capped at box_bound per coefficient; an empty list is only a
    negative relative to that box.
    """
    if not target.is_integral:
        raise DomainError(f"target {target} is not integral")
    t1, t2 = float(target), float(target.tau())
    if t2 < 0:
        # second embedding turns the norm into A2^2 + sqrt5 B2^2
        return []
    root1 = math.sqrt(abs(t1))
    b1_max = root1 * (ETA_PLUS + 1) / (2 * FOURTH_ROOT_5) + 1
    b2_max = math.sqrt(t2 / math.sqrt(5)) + 1
    phi, phi_c = (1 + math.sqrt(5)) / 2, (1 - math.sqrt(5)) / 2
    coef_max = int((b1_max + b2_max) / math.sqrt(5)) + 1
    y_max = min(coef_max, box_bound)
    found = set()
    for y in range(-y_max, y_max + 1):
        # b0 + y*phi in [-b1_max, b1_max] and b0 + y*phi_c in [-b2_max, b2_max]
        lo = max(-b1_max - y * phi, -b2_max - y * phi_c)
        hi = min(b1_max - y * phi, b2_max - y * phi_c)
        lo_i = max(int(math.floor(lo)), -box_bound)
        hi_i = min(int(math.ceil(hi)), box_bound)
        for x in range(lo_i, hi_i + 1):
            B = F0Elem(x, y)
            A = sqrt_integral(target + SQRT5 * B * B)
            if A is None:
                continue
            found.add(eta_reduce(LElem(A, B)))
    solutions = sorted(found, key=lambda z: (z.A.a, z.A.b, z.B.a, z.B.b))
    logger.debug("solve_norm(%s, box=%d): %d solutions", target, box_bound, len(solutions))
    return solutions


def representable_both(lam: F0Elem, box_bound: int) -> bool:
    """Whether lam is a value of q_QP and of its conjugate form"""
    if not lambda_admissible(lam):
        return False
    return bool(solve_norm(U_TAU * lam, box_bound)) and bool(
        solve_norm(U_TAU * lam.tau(), box_bound)
    )


def fourth_root_of_5_mod(lam: F0Elem) -> bool:
    """Whether x^4 = 5 has a solution in the residue field of lam"""
    field = residue_field(lam)
    five = field.reduce(F0Elem(5))
    if five == (0, 0):
        return True
    q = field.size
    g = math.gcd(4, q - 1)
    return field.pow(five, (q - 1) // g) == (1, 0)
