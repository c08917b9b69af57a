"""Exact arithmetic in F0 = Q(sqrt5) and its ring of integers Z[u], u = (1+sqrt5)/2.

Elements are stored in the basis {1, u} so that integrality is coefficient
integrality. Signs under the two real embeddings are decided with integer
comparisons only.
"""
from __future__ import annotations

import logging
import math
import re
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering
from math import isqrt
from typing import Iterator, List, Optional, Tuple, Union

import mpmath
from sympy import factorint, isprime, sqrt_mod
from sympy.core.intfunc import igcdex

from .errors import DomainError, InvariantViolation

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


def _sign_sqrt5(p: Fraction, q: Fraction) -> int:
    """Sign of p + q*sqrt5 for rational p, q"""
    if p >= 0 and q >= 0:
        return 0 if p == 0 and q == 0 else 1
    if p <= 0 and q <= 0:
        return -1
    d = p * p - 5 * q * q
    if p > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


@total_ordering
class F0Elem:
    """a + b*u with rational a, b. Ordered by the first real embedding."""

    def __init__(self, a: Rational | str = 0, b: Rational | str = 0) -> None:
        self._a: Fraction = Fraction(a)
        self._b: Fraction = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def from_sqrt5(cls, x: Rational, y: Rational) -> F0Elem:
        """x + y*sqrt5, using sqrt5 = 2u - 1"""
        x, y = Fraction(x), Fraction(y)
        return cls(x - y, 2 * y)

    @classmethod
    def coerce(cls, other: object) -> Optional[F0Elem]:
        if isinstance(other, F0Elem):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0)
        return None

    def to_sqrt5(self) -> Tuple[Fraction, Fraction]:
        """Coefficients (x, y) with self = x + y*sqrt5"""
        return self._a + self._b / 2, self._b / 2

    def __repr__(self) -> str:
        return f"F0Elem({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b < 0:
            return f"{self._a}-{-self._b}*u"
        return f"{self._a}+{self._b}*u"

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __eq__(self, other: object) -> bool:
        other = self.coerce(other)
        if other is None:
            return False
        return self._a == other.a and self._b == other.b

    def __lt__(self, other: object) -> bool:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign1 < 0

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __add__(self, other: object) -> F0Elem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return F0Elem(self._a + other.a, self._b + other.b)

    __radd__ = __add__

    def __neg__(self) -> F0Elem:
        return F0Elem(-self._a, -self._b)

    def __sub__(self, other: object) -> F0Elem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return F0Elem(self._a - other.a, self._b - other.b)

    def __rsub__(self, other: object) -> F0Elem:
        return (-self) + other

    def __mul__(self, other: object) -> F0Elem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self._a, self._b, other.a, other.b
        # u^2 = u + 1
        return F0Elem(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def inverse(self) -> F0Elem:
        n = self.norm
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F0")
        conj = self.tau()
        return F0Elem(conj.a / n, conj.b / n)

    def __truediv__(self, other: object) -> F0Elem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> F0Elem:
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> F0Elem:
        if n < 0:
            return self.inverse() ** -n
        result = F0Elem(1)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @cached_property
    def norm(self) -> Fraction:
        a, b = self._a, self._b
        return a * a + a * b - b * b

    @cached_property
    def trace(self) -> Fraction:
        return 2 * self._a + self._b

    def tau(self) -> F0Elem:
        """Galois conjugate, sqrt5 -> -sqrt5"""
        return F0Elem(self._a + self._b, -self._b)

    @cached_property
    def sign1(self) -> int:
        return _sign_sqrt5(2 * self._a + self._b, self._b)

    @cached_property
    def sign2(self) -> int:
        return _sign_sqrt5(2 * self._a + self._b, -self._b)

    @property
    def is_integral(self) -> bool:
        return self._a.denominator == 1 and self._b.denominator == 1

    @property
    def is_unit(self) -> bool:
        return self.is_integral and abs(self.norm) == 1

    @property
    def denominator(self) -> int:
        return math.lcm(self._a.denominator, self._b.denominator)

    def embed(self, j: int = 1) -> mpmath.mpf:
        """Real embedding tau_j at the current mpmath precision"""
        s5 = mpmath.sqrt(5) if j == 1 else -mpmath.sqrt(5)
        return mpmath.mpf(self._a.numerator) / self._a.denominator + (
            mpmath.mpf(self._b.numerator) / self._b.denominator
        ) * (1 + s5) / 2

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * (1 + math.sqrt(5)) / 2


ZERO = F0Elem(0)
ONE = F0Elem(1)
U = F0Elem(0, 1)
SQRT5 = F0Elem(-1, 2)
U_SQRT5 = U * SQRT5  # u + 2, generator of the prime above 5
U_TAU = U.tau()

_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse(text: str) -> F0Elem:
    """Read 'a+b*u' or 'x+y*sqrt5' (rationals written p/q)"""
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise DomainError("empty F0 element")
    total = F0Elem(0)
    consumed = 0
    for match in _TERM.finditer(cleaned):
        sign, body = match.groups()
        consumed += len(match.group(0))
        if body.endswith("sqrt5") or body.endswith("√5"):
            coef = body[: -len("sqrt5")] if body.endswith("sqrt5") else body[:-2]
            unit = SQRT5
        elif body.endswith("u"):
            coef = body[:-1]
            unit = U
        else:
            coef = body
            unit = ONE
        coef = coef.rstrip("*")
        try:
            value = Fraction(coef) if coef else Fraction(1)
        except ValueError as exc:
            raise DomainError(f"cannot parse F0 element {text!r}") from exc
        if sign == "-":
            value = -value
        total = total + unit * value
    if consumed != len(cleaned):
        raise DomainError(f"cannot parse F0 element {text!r}")
    return total


def norm_trace(x: F0Elem) -> Tuple[Fraction, Fraction]:
    return x.norm, x.trace


def tau(x: F0Elem) -> F0Elem:
    return x.tau()


def is_totally_positive(x: F0Elem) -> bool:
    return x.sign1 > 0 and x.sign2 > 0


def is_associate(x: F0Elem, y: F0Elem) -> bool:
    if not x or not y:
        return False
    return (x / y).is_unit


def _require_integral(x: F0Elem, what: str = "element") -> None:
    if not x.is_integral:
        raise DomainError(f"{what} {x} is not integral")


def is_irreducible(x: F0Elem) -> bool:
    _require_integral(x)
    n = abs(int(x.norm))
    if n == 0:
        raise DomainError("zero is neither irreducible nor reducible")
    if n == 1:
        raise DomainError(f"{x} is a unit")
    if isprime(n):
        return True
    r = isqrt(n)
    return r * r == n and isprime(r) and r % 5 in (2, 3)


# Z[u]/mZ[u]: Hermite normal form of the lattice spanned by m and m*u


@lru_cache(maxsize=1024)
def _hnf(m: F0Elem) -> Tuple[int, int, int]:
    m0, m1 = int(m.a), int(m.b)
    s, t, g = igcdex(m0, m1)
    s, t, g = int(s), int(t), int(g)
    h22 = abs(int(m.norm)) // g
    h12 = (s * m1 + t * (m0 + m1)) % h22
    return g, h12, h22


def mod_reduce(x: F0Elem, m: F0Elem | int) -> F0Elem:
    m = F0Elem.coerce(m)
    _require_integral(x)
    _require_integral(m, "modulus")
    if not m:
        raise DomainError("reduction modulo zero")
    h11, h12, h22 = _hnf(m)
    a, b = int(x.a), int(x.b)
    q = a // h11
    a -= q * h11
    b = (b - q * h12) % h22
    return F0Elem(a, b)


def residues(m: F0Elem | int) -> List[F0Elem]:
    """Canonical transversal of Z[u]/m, ordered by (a, b)"""
    m = F0Elem.coerce(m)
    h11, _, h22 = _hnf(m)
    return [F0Elem(i, j) for i in range(h11) for j in range(h22)]


MOD4_TRANSVERSAL = residues(4)
# -lambda mod 4 must be one of 1, 1+u, 1+u^tau
ADMISSIBLE_RESIDUES = frozenset(mod_reduce(r, 4) for r in (ONE, ONE + U, ONE + U_TAU))


def is_square_mod(a: F0Elem, m: F0Elem | int) -> bool:
    target = mod_reduce(a, m)
    return any(mod_reduce(r * r, m) == target for r in residues(m))


class ResidueField:
    """Z[u]/(modulus) for an irreducible modulus of odd or even norm.

    Elements are pairs (c0, c1) standing for c0 + c1*u mod p; in degree 1
    the second slot is always 0.
    """

    def __init__(self, modulus: F0Elem) -> None:
        if not is_irreducible(modulus):
            raise DomainError(f"{modulus} is not irreducible")
        n = abs(int(modulus.norm))
        self.modulus = modulus
        if isprime(n):
            self.p = n
            self.degree = 1
            # modulus = a + b u vanishes, so u = -a/b
            self.u_image = (-int(modulus.a) * pow(int(modulus.b), -1, n)) % n
        else:
            self.p = isqrt(n)
            self.degree = 2
            self.u_image = None
        self.size = n

    def __repr__(self) -> str:
        return f"ResidueField({self.modulus}, p={self.p}, degree={self.degree})"

    def _scalar(self, q: Fraction) -> int:
        if q.denominator % self.p == 0:
            raise DomainError(f"denominator of {q} is not invertible mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def reduce(self, x: F0Elem) -> Tuple[int, int]:
        a, b = self._scalar(x.a), self._scalar(x.b)
        if self.degree == 1:
            return (a + b * self.u_image) % self.p, 0
        return a, b

    def mul(self, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        p = self.p
        if self.degree == 1:
            return x[0] * y[0] % p, 0
        a, b = x
        c, d = y
        return (a * c + b * d) % p, (a * d + b * c + b * d) % p

    def pow(self, x: Tuple[int, int], e: int) -> Tuple[int, int]:
        result = (1, 0)
        while e > 0:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def elements(self) -> Iterator[Tuple[int, int]]:
        if self.degree == 1:
            for c in range(self.p):
                yield c, 0
        else:
            for c0 in range(self.p):
                for c1 in range(self.p):
                    yield c0, c1


@lru_cache(maxsize=4096)
def residue_field(modulus: F0Elem) -> ResidueField:
    return ResidueField(modulus)


def legendre(a: F0Elem | int, lam: F0Elem | int) -> int:
    a, lam = F0Elem.coerce(a), F0Elem.coerce(lam)
    field = residue_field(lam)
    if field.size % 2 == 0:
        raise DomainError(f"{lam} has even norm")
    r = field.reduce(a)
    if r == (0, 0):
        return 0
    e = field.pow(r, (field.size - 1) // 2)
    if e == (1, 0):
        return 1
    if e == (field.p - 1, 0):
        return -1
    raise InvariantViolation(f"Euler criterion gave {e} for ({a} / {lam})")


# Principal prime generators and factorization


def _bilinear(v: Tuple[int, int], w: Tuple[int, int]) -> int:
    # polarization of 2a^2 + 2ab + 3b^2 = tau1(x)^2 + tau2(x)^2
    return 2 * v[0] * w[0] + v[0] * w[1] + v[1] * w[0] + 3 * v[1] * w[1]


def _gauss_reduce(v: Tuple[int, int], w: Tuple[int, int]) -> Tuple[int, int]:
    while True:
        if _bilinear(v, v) > _bilinear(w, w):
            v, w = w, v
        mu = round(Fraction(_bilinear(v, w), _bilinear(v, v)))
        if mu == 0:
            return v
        w = (w[0] - mu * v[0], w[1] - mu * v[1])


def balance(x: F0Elem) -> F0Elem:
    """The associate x*u^(2k) whose embedding ratio |tau1/tau2| lies in [u^-2, u^2)"""
    if not x:
        return x
    u2, u2inv = U * U, (U * U).inverse()
    while True:
        ratio = x / x.tau()
        ratio = ratio if ratio.sign1 > 0 else -ratio
        if ratio < u2inv:
            x = x * u2
        elif ratio >= u2:
            x = x * u2inv
        else:
            return x


def _positive(x: F0Elem) -> F0Elem:
    return x if x.sign1 > 0 else -x


@lru_cache(maxsize=2048)
def primes_above(p: int) -> Tuple[F0Elem, ...]:
    """Balanced generators of the primes of Z[u] above the rational prime p"""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if p == 5:
        return (U_SQRT5,)
    if p % 5 in (2, 3):
        return (F0Elem(p),)
    s = sqrt_mod(5, p)
    r = (1 + s) * pow(2, -1, p) % p
    # ideal (p, u - r) is the lattice {a + b u : a + b r = 0 mod p}
    a, b = _gauss_reduce((p, 0), (-r, 1))
    pi = F0Elem(a, b)
    if abs(pi.norm) != p:
        raise InvariantViolation(f"shortest vector {pi} above {p} has norm {pi.norm}")
    first = _positive(balance(pi))
    second = _positive(balance(first.tau()))
    return tuple(sorted((first, second), key=lambda z: (z.a, z.b)))


def prime_above(p: int) -> F0Elem:
    return primes_above(p)[0]


def valuation(x: F0Elem, pi: F0Elem) -> float | int:
    """Valuation of x at the prime generated by pi; +inf for zero"""
    if not x:
        return math.inf
    d = x.denominator
    y = x * d
    v = 0
    while True:
        q = y / pi
        if not q.is_integral:
            break
        y, v = q, v + 1
    dv = 0
    if d > 1:
        dd = F0Elem(d)
        while True:
            q = dd / pi
            if not q.is_integral:
                break
            dd, dv = q, dv + 1
    return v - dv


def val_sqrt5(x: F0Elem | Rational) -> float | int:
    return valuation(F0Elem.coerce(x), U_SQRT5)


def factor(x: F0Elem) -> Tuple[F0Elem, List[Tuple[F0Elem, int]]]:
    """Write an integral x as unit * prod(pi^e) with balanced prime generators"""
    _require_integral(x)
    if not x:
        raise DomainError("cannot factor zero")
    rest = x
    factors: List[Tuple[F0Elem, int]] = []
    for p in sorted(factorint(abs(int(x.norm)))):
        for pi in primes_above(int(p)):
            e = 0
            while True:
                q = rest / pi
                if not q.is_integral:
                    break
                rest, e = q, e + 1
            if e:
                factors.append((pi, e))
    if not rest.is_unit:
        raise InvariantViolation(f"factorization of {x} left non-unit {rest}")
    return rest, factors


def jacobi(a: F0Elem | int, beta: F0Elem | int) -> int:
    """Product of residue symbols over the prime factors of beta"""
    a, beta = F0Elem.coerce(a), F0Elem.coerce(beta)
    if beta.norm % 2 == 0:
        raise DomainError(f"{beta} has even norm")
    _, factors = factor(beta)
    value = 1
    for pi, e in factors:
        value *= legendre(a, pi) ** e
    return value


def lambda_admissible(lam: F0Elem) -> bool:
    if not lam.is_integral or not lam or lam.is_unit:
        return False
    n = int(lam.norm)
    if n % 2 == 0 or n % 5 == 0:
        return False
    if not is_irreducible(lam) or not is_totally_positive(lam):
        return False
    return mod_reduce(-lam, 4) in ADMISSIBLE_RESIDUES


def is_inert_in_F(lam: F0Elem) -> bool:
    if not is_irreducible(lam):
        raise DomainError(f"{lam} is not irreducible")
    n = int(lam.norm)
    if n % 5 == 0:
        raise DomainError(f"{lam} is not coprime to 5")
    return n % 5 == 4


def reciprocity_pair(lam: F0Elem, beta: F0Elem) -> int:
    """(-lam / beta) * (beta / lam), two independent symbol computations.

    For coprime arguments the product equals the real-place factor
    hilbert_symbol_infinite(-lam, beta); a mismatch is logged.
    """
    if not lambda_admissible(lam):
        raise DomainError(f"{lam} is not admissible")
    _require_integral(beta)
    if beta.norm % 2 == 0 or not is_totally_positive(beta):
        raise DomainError(f"{beta} must be totally positive of odd norm")
    value = jacobi(-lam, beta) * legendre(beta, lam)
    if value == 0:
        logger.warning("reciprocity_pair: %s and %s share a factor", lam, beta)
    elif value != hilbert_symbol_infinite(-lam, beta):
        logger.error("reciprocity_pair: (%s, %s) = %d disagrees with the real places", lam, beta, value)
    return value


def is_minus_one_mod_4(lam: F0Elem) -> bool:
    return mod_reduce(lam, 4) == mod_reduce(F0Elem(-1), 4)


def two_is_square_by_table(lam: F0Elem) -> Optional[bool]:
    """Whether 2 is a square mod lam, read off lam mod 8 for lam = -1 mod 4.

    Squares for lam in {-1, 3} mod 8, non-squares for {-1+4u, -1+4u^tau}.
    None outside the -1 mod 4 class.
    """
    if not is_minus_one_mod_4(lam):
        return None
    r = mod_reduce(lam, 8)
    if r in (mod_reduce(F0Elem(-1), 8), mod_reduce(F0Elem(3), 8)):
        return True
    if r in (mod_reduce(-1 + 4 * U, 8), mod_reduce(-1 + 4 * U_TAU, 8)):
        return False
    raise InvariantViolation(f"{lam} = -1 mod 4 but {r} is not a listed class mod 8")


def splits_in_sqrt(d: F0Elem, s: F0Elem) -> bool:
    """Whether the prime s splits in F0(sqrt d)/F0, d a unit at s"""
    if is_associate(s, F0Elem(2)):
        return mod_reduce(d, 2) != ZERO and is_square_mod(d, 8)
    return legendre(d, s) == 1


def hilbert_symbol_infinite(a: F0Elem, b: F0Elem) -> int:
    """Product of the Hilbert symbols (a, b) at both real places"""
    value = 1
    if a.sign1 < 0 and b.sign1 < 0:
        value = -value
    if a.sign2 < 0 and b.sign2 < 0:
        value = -value
    return value


def enumerate_admissible(norm_bound: int) -> List[F0Elem]:
    """Admissible lambda with N(lambda) <= norm_bound, one per totally positive unit orbit"""
    phi = (1 + math.sqrt(5)) / 2
    emax = phi * math.sqrt(norm_bound) + 1
    bmax = int(emax / math.sqrt(5)) + 1
    found = []
    for b in range(-bmax, bmax + 1):
        amin = int(math.floor(-abs(b) * phi)) - 1
        amax = int(math.ceil(emax + abs(b) * phi)) + 1
        for a in range(amin, amax + 1):
            lam = F0Elem(a, b)
            n = lam.norm
            if n <= 1 or n > norm_bound:
                continue
            if not is_totally_positive(lam) or balance(lam) != lam:
                continue
            if lambda_admissible(lam):
                found.append(lam)
    found.sort(key=lambda z: (z.norm, z.a, z.b))
    logger.debug("enumerate_admissible(%d): %d classes", norm_bound, len(found))
    return found
