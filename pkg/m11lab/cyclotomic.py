"""Exact arithmetic in F = Q(zeta_5), its distinguished constants, and the signature formula."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import mpmath
from sympy import isprime

from .errors import DomainError, PoleError
from .ring_f0 import F0Elem, SQRT5

logger = logging.getLogger(__name__)

M = 5

Scalar = Union[int, Fraction, F0Elem]


def _reduce5(c: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    # coefficients of 1..zeta^4 -> basis 1..zeta^3 via zeta^4 = -1-zeta-zeta^2-zeta^3
    c4 = c[4]
    return tuple(c[k] - c4 for k in range(4))


class FElem:
    """c0 + c1*z + c2*z^2 + c3*z^3 with z a primitive fifth root of unity"""

    def __init__(self, c0: Union[int, Fraction] = 0, c1=0, c2=0, c3=0) -> None:
        self._c: Tuple[Fraction, ...] = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._c

    @classmethod
    def from_f0(cls, x: F0Elem) -> FElem:
        # u = -(z^2 + z^3)
        return cls(x.a, 0, -x.b, -x.b)

    @classmethod
    def coerce(cls, other: object) -> Optional[FElem]:
        if isinstance(other, FElem):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other)
        if isinstance(other, F0Elem):
            return cls.from_f0(other)
        return None

    def __repr__(self) -> str:
        return "FElem({}, {}, {}, {})".format(*self._c)

    def __str__(self) -> str:
        out = str(self._c[0])
        for k, name in ((1, "z"), (2, "z^2"), (3, "z^3")):
            c = self._c[k]
            out += f"-{-c}*{name}" if c < 0 else f"+{c}*{name}"
        return out

    def __hash__(self) -> int:
        return hash(self._c)

    def __eq__(self, other: object) -> bool:
        other = self.coerce(other)
        if other is None:
            return False
        return self._c == other.coefficients

    def __bool__(self) -> bool:
        return any(self._c)

    def __add__(self, other: object) -> FElem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return FElem(*(x + y for x, y in zip(self._c, other.coefficients)))

    __radd__ = __add__

    def __neg__(self) -> FElem:
        return FElem(*(-x for x in self._c))

    def __sub__(self, other: object) -> FElem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> FElem:
        return (-self) + other

    def __mul__(self, other: object) -> FElem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        prod = [Fraction(0)] * 5
        for i, x in enumerate(self._c):
            if not x:
                continue
            for j, y in enumerate(other.coefficients):
                prod[(i + j) % 5] += x * y
        return FElem(*_reduce5(prod))

    __rmul__ = __mul__

    def galois(self, j: int) -> FElem:
        """Image under z -> z^j"""
        if j % 5 == 0:
            raise DomainError("z -> z^0 is not an automorphism")
        out = [Fraction(0)] * 5
        for k, c in enumerate(self._c):
            out[(j * k) % 5] += c
        return FElem(*_reduce5(out))

    def conj(self) -> FElem:
        return self.galois(4)

    @cached_property
    def norm(self) -> Fraction:
        value = self * self.galois(2) * self.galois(3) * self.galois(4)
        return value.coefficients[0]

    def inverse(self) -> FElem:
        n = self.norm
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(zeta_5)")
        rest = self.galois(2) * self.galois(3) * self.galois(4)
        return FElem(*(c / n for c in rest.coefficients))

    def __truediv__(self, other: object) -> FElem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> FElem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> FElem:
        if n < 0:
            return self.inverse() ** -n
        result, base = FElem(1), self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def in_f0(self) -> bool:
        return self.conj() == self

    def to_f0(self) -> F0Elem:
        if not self.in_f0:
            raise DomainError(f"{self} is not in Q(sqrt5)")
        c0, _, c2, _ = self._c
        return F0Elem(c0, -c2)

    def embed(self, j: int = 1) -> mpmath.mpc:
        """sigma_j(z) = exp(2 pi i j / 5) at the current mpmath precision"""
        root = mpmath.expjpi(mpmath.mpf(2 * j) / 5)
        return sum(
            (mpmath.mpf(c.numerator) / c.denominator * root ** k for k, c in enumerate(self._c)),
            mpmath.mpc(0),
        )


ZETA = FElem(0, 1)
ZETA_INV = ZETA.conj()


@dataclass(frozen=True)
class Constants:
    eps: F0Elem
    alpha: FElem
    beta0: FElem
    omega2: F0Elem


EPS = (ZETA + ZETA_INV).to_f0()
ALPHA = ZETA - ZETA_INV
BETA0 = FElem.from_f0(SQRT5) * ALPHA
# omega = sqrt(eps), only its square is exact
OMEGA2 = EPS


def constants() -> Constants:
    return Constants(eps=EPS, alpha=ALPHA, beta0=BETA0, omega2=OMEGA2)


def beta0_from_definition(m: int = M) -> FElem:
    """m / (z^((m+1)/2) - z^((m-1)/2)) for m = 5"""
    if m != M:
        raise DomainError("only m = 5 is supported exactly")
    return FElem(m) / (ZETA ** ((m + 1) // 2) - ZETA ** ((m - 1) // 2))


_FTERM = re.compile(r"([+-]?)([^+-]+)")


def parse(text: str) -> FElem:
    """Read 'c0+c1*z+c2*z^2+c3*z^3'"""
    cleaned = text.replace(" ", "")
    coeffs = [Fraction(0)] * 5
    consumed = 0
    for match in _FTERM.finditer(cleaned):
        sign, body = match.groups()
        consumed += len(match.group(0))
        power = 0
        if "z" in body:
            coef, _, exp = body.partition("z")
            power = int(exp.lstrip("^")) if exp else 1
            coef = coef.rstrip("*")
        else:
            coef = body
        value = Fraction(coef) if coef else Fraction(1)
        coeffs[power % 5] += -value if sign == "-" else value
    if not cleaned or consumed != len(cleaned):
        raise DomainError(f"cannot parse cyclotomic element {text!r}")
    return FElem(*_reduce5(coeffs))


@dataclass(frozen=True)
class Signature:
    m: int
    inertia: Tuple[int, ...]
    f: Tuple[int, ...]


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def signature(m: int, a: Sequence[int]) -> Signature:
    """f_n = -1 + sum_i <-n a_i / m> for n = 1..m-1"""
    if m < 3 or m % 2 == 0 or not isprime(m):
        raise DomainError(f"m = {m} is not an odd prime")
    if len(a) != 4:
        raise DomainError(f"inertia type {tuple(a)} must have four entries")
    if sum(a) % m:
        raise DomainError(f"inertia type {tuple(a)} does not sum to 0 mod {m}")
    if any(ai % m == 0 for ai in a):
        raise DomainError(f"inertia type {tuple(a)} has an entry divisible by {m}")
    f = tuple(
        int(-1 + sum(_frac(Fraction(-n * ai, m)) for ai in a)) for n in range(1, m)
    )
    return Signature(m=m, inertia=tuple(a), f=f)


def klein_J(t: Scalar) -> Scalar:
    """J(t) = (t^2 - t + 1)^3 / (t^2 (t - 1)^2)"""
    if isinstance(t, int):
        t = Fraction(t)
    if t == 0 or t == 1:
        raise PoleError(f"J has a pole at t = {t}")
    return (t * t - t + 1) ** 3 / (t * t * (t - 1) ** 2)


def j_orbit(t: Scalar) -> List[Scalar]:
    """The six images of t under the transformations permuting {0, 1, inf}"""
    if isinstance(t, int):
        t = Fraction(t)
    if t == 0 or t == 1:
        raise PoleError(f"t = {t} is a branch point")
    return [t, 1 - t, 1 / t, 1 / (1 - t), t / (t - 1), (t - 1) / t]


@dataclass(frozen=True)
class SpecialPoint:
    name: str
    t: str
    J: Optional[Fraction]


def special_points() -> List[SpecialPoint]:
    return [
        SpecialPoint("P", "inf", None),
        SpecialPoint("Q", "-zeta_3", Fraction(0)),
        SpecialPoint("R", "-1", Fraction(27, 4)),
    ]
