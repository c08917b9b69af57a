"""Reduction of the family C_t : y^5 = x(x - 1)(x - t) modulo primes.

Point counts over F_{p^k}, L-polynomials, Newton polygons and their
classification, plus the Lehr-type and residue-symbol predictors used to
look for basic reduction.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, multiplicity, primerange, symbols

from .cyclotomic import ZETA, FElem, klein_J
from .errors import BadPrimeError, DomainError, InvariantViolation
from .finite_field import GaloisField, galois_field, prime_power
from .ring_f0 import (
    F0Elem,
    U_SQRT5,
    is_associate,
    is_irreducible,
    is_totally_positive,
    lambda_admissible,
    legendre,
    primes_above,
    splits_in_sqrt,
    val_sqrt5,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

SCHEMA_VERSION = 1
GENUS = 4
MAX_Q = 1 << 32
# p^4 up to this size is counted directly; larger p use character sums
COUNTS_LIMIT = 1 << 22

_CHUNK = 1 << 18
_FIBRE_BLOCK = 1 << 21
_X = symbols("x")

J_R = Fraction(27, 4)


class NPClass(str, enum.Enum):
    MU_ORDINARY = "MuOrdinary"
    BASIC = "Basic"
    OTHER = "Other"


class LehrClass(str, enum.Enum):
    POTENTIALLY_GOOD = "PotentiallyGood"
    DEGENERATES_TO_CP = "DegeneratesToCP"


class STPrediction(str, enum.Enum):
    BASIC = "Basic"
    NO_PREDICTION = "NoPrediction"


# Reduction of t


def reduce_mod_p(t: Rational, p: int) -> int:
    t = Fraction(t)
    if t.denominator % p == 0:
        raise BadPrimeError(f"t = {t} has {p} in its denominator")
    return t.numerator * pow(t.denominator, -1, p) % p


def bad_reason(t: Rational, p: int) -> Optional[str]:
    """Why C_t has bad reduction at p, or None when p is good"""
    if p == 2:
        return "p = 2"
    if p == 5:
        return "p = 5"
    t = Fraction(t)
    if t.denominator % p == 0:
        return "t has p in its denominator"
    r = reduce_mod_p(t, p)
    if r == 0:
        return "t = 0 mod p"
    if r == 1:
        return "t = 1 mod p"
    return None


# Point counting


def _fifth_power_hits(F: GaloisField, t_code: int) -> int:
    """#{x not in {0, 1, t} : x(x - 1)(x - t) is a nonzero fifth power}"""
    hits = 0
    for start in range(0, F.q, _CHUNK):
        x = np.arange(start, min(F.q, start + _CHUNK), dtype=np.int64)
        x1 = F.sub(x, 1)
        xt = F.sub(x, t_code)
        keep = (x != 0) & (x1 != 0) & (xt != 0)
        e = F.log[x[keep]] + F.log[x1[keep]] + F.log[xt[keep]]
        hits += int(np.count_nonzero(e % 5 == 0))
    return hits


def count_points(t: Rational, q: int, *, t_code: Optional[int] = None) -> int:
    """#C_t(F_q) on the smooth projective model.

    t is reduced into the prime field unless t_code, the code of an
    element of F_q, is given.
    """
    if q > MAX_Q:
        raise DomainError(f"q = {q} exceeds 2^32")
    p, k = prime_power(q)
    if p == 5:
        raise BadPrimeError("p = 5")
    code = reduce_mod_p(t, p) if t_code is None else t_code
    if not 0 <= code < q:
        raise DomainError(f"t code {code} is not an element of F_{q}")
    if code in (0, 1):
        raise BadPrimeError(f"t is degenerate in F_{q}")
    if q % 5 != 1:
        # x -> x^5 is a bijection of F_q
        return q + 1
    F = galois_field(p, k)
    # one point over each of 0, 1, t and one at infinity
    return 4 + 5 * _fifth_power_hits(F, code)


# L-polynomials


@dataclass(frozen=True)
class LPolynomial:
    """L(T) = sum a_i T^i with deg 8 and a_8 = p^4"""

    p: int
    coefficients: Tuple[int, ...]
    method: str = field(default="counts", compare=False)

    def __post_init__(self) -> None:
        if len(self.coefficients) != 2 * GENUS + 1 or self.coefficients[0] != 1:
            raise InvariantViolation(f"malformed L-polynomial {self.coefficients}")

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.coefficients)

    @property
    def satisfies_functional_equation(self) -> bool:
        a, p = self.coefficients, self.p
        return all(a[2 * GENUS - i] == p ** (GENUS - i) * a[i] for i in range(GENUS + 1))

    @property
    def within_weil_bounds(self) -> bool:
        # |a_i| <= C(8, i) p^(i/2)
        return all(
            a * a <= math.comb(2 * GENUS, i) ** 2 * self.p ** i
            for i, a in enumerate(self.coefficients)
        )

    def power_sums(self, n: int) -> List[int]:
        """s_k = N_k - p^k - 1 for k = 1..n"""
        a = list(self.coefficients) + [0] * max(0, n - 2 * GENUS)
        s: List[int] = [0]
        for k in range(1, n + 1):
            s.append(k * a[k] - sum(s[i] * a[k - i] for i in range(1, k)))
        return s[1:]

    def count(self, k: int) -> int:
        return self.p ** k + 1 + self.power_sums(k)[-1]


def _from_counts(p: int, counts: Sequence[int], method: str = "counts") -> LPolynomial:
    if len(counts) != GENUS:
        raise DomainError(f"need {GENUS} point counts, got {len(counts)}")
    s = [0] + [counts[k - 1] - p ** k - 1 for k in range(1, GENUS + 1)]
    a = [Fraction(1)]
    for k in range(1, GENUS + 1):
        a.append(sum(s[i] * a[k - i] for i in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in a):
        raise InvariantViolation(f"counts {tuple(counts)} over F_{p}^k give a non-integral L")
    low = [int(x) for x in a]
    high = [p ** (i - GENUS) * low[2 * GENUS - i] for i in range(GENUS + 1, 2 * GENUS + 1)]
    return LPolynomial(p, tuple(low + high), method)


def _zeta_sum(counts: np.ndarray, j: int = 1) -> FElem:
    return sum((int(c) * ZETA ** (j * e % 5) for e, c in enumerate(counts)), FElem(0))


def _polymul(f: Sequence, g: Sequence) -> List:
    out = [0 * f[0]] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def _as_integers(coeffs: Sequence[FElem | F0Elem]) -> Tuple[int, ...]:
    out = []
    for c in coeffs:
        c = FElem.coerce(c)
        c0 = c.coefficients[0]
        if any(c.coefficients[1:]) or c0.denominator != 1:
            raise InvariantViolation(f"character sums gave a non-rational coefficient {c}")
        out.append(int(c0))
    return tuple(out)


def _log_sum_counts(F: GaloisField, t_code: int, multiplier: int = 1) -> np.ndarray:
    """Histogram mod 5 of multiplier * log f(y) over y in F with f(y) != 0"""
    counts = np.zeros(5, dtype=np.int64)
    for start in range(0, F.q, _CHUNK):
        y = np.arange(start, min(F.q, start + _CHUNK), dtype=np.int64)
        y1 = F.sub(y, 1)
        yt = F.sub(y, t_code)
        keep = (y != 0) & (y1 != 0) & (yt != 0)
        e = F.log[y[keep]] + F.log[y1[keep]] + F.log[yt[keep]]
        counts += np.bincount(multiplier * e % 5, minlength=5)
    return counts


def _fibre_counts(F: GaloisField, t_code: int, psi: np.ndarray, weight: Optional[np.ndarray]) -> np.ndarray:
    """Histogram mod 5 of weight(w) + psi(z) + psi(z - w) + psi(z - t w) over z, w != 0.

    F_{p^4} = F(theta) fibres over the coefficient of theta: x = (z + theta) / w.
    """
    p, q = F.p, F.q
    z = np.arange(q, dtype=np.int64)
    zd = F.digits(z)
    block = max(1, _FIBRE_BLOCK // q)
    counts = np.zeros(5, dtype=np.int64)
    for start in range(1, q, block):
        w = np.arange(start, min(q, start + block), dtype=np.int64)
        wd = F.digits(w)
        twd = [d * t_code % p for d in wd]
        e = psi[None, :] + psi[F.shifted(zd, wd)] + psi[F.shifted(zd, twd)]
        if weight is not None:
            e = e + weight[w][:, None]
        counts += np.bincount((e % 5).ravel(), minlength=5)
    return counts


def _lpoly_split(p: int, t_code: int) -> LPolynomial:
    # p = 1 mod 5: the characters of order 5 live on F_p; each eigenspace
    # is 2-dimensional and needs only the sums over F_p and F_{p^2}
    F2 = galois_field(p, 2)
    x = np.arange(p, dtype=np.int64)
    fx = x * (x - 1) % p * ((x - t_code) % p) % p
    logs = F2.log[fx[fx != 0]]
    if (logs % (p + 1)).any():
        raise InvariantViolation(f"F_{p} is not the (p+1)-th powers in F_{p}^2")
    c1 = np.bincount(logs // (p + 1) % 5, minlength=5)
    c2 = _log_sum_counts(F2, t_code)
    L: List[FElem] = [FElem(1)]
    for j in range(1, 5):
        s = -_zeta_sum(c1, j)
        d = (s * s + _zeta_sum(c2, j)) / 2
        L = _polymul(L, [FElem(1), -s, d])
    return LPolynomial(p, _as_integers(L), "characters")


def _lpoly_inert_pair(p: int, t_code: int) -> LPolynomial:
    # p = 4 mod 5: Frobenius swaps chi and chi^-1; on each pair
    # L = 1 - b T^2 + c T^4 with b the trace over F_{p^2}
    F2 = galois_field(p, 2)
    b = -_zeta_sum(_log_sum_counts(F2, t_code))
    if not b.in_f0:
        raise InvariantViolation(f"trace {b} over F_{p}^2 is not real")
    b0 = b.to_f0()
    if b0:
        # self-duality pairs the two eigenvalues, so their product is p^2
        c = FElem(p * p)
    else:
        nu = F2.generator
        z = np.arange(F2.q, dtype=np.int64)
        psi = F2.log[F2.sub(F2.mul(z, z), nu)] % 5
        weight = 4 * F2.log % 5
        s4 = _log_sum_counts(F2, t_code, multiplier=2) + _fibre_counts(F2, t_code, psi, weight)
        c = (b * b + _zeta_sum(s4)) / 2
    pair = _polymul([F0Elem(1), -b0, c.to_f0()], [F0Elem(1), -b0.tau(), c.to_f0()])
    L = [F0Elem(0)] * 9
    for i, x in enumerate(pair):
        L[2 * i] = x
    return LPolynomial(p, _as_integers(L), "characters")


def _norm_one_pow(F: GaloisField, nu: int, A: np.ndarray, B: np.ndarray, e: int):
    RA = np.ones_like(A)
    RB = np.zeros_like(B)
    while e > 0:
        if e & 1:
            RA, RB = (
                F.add(F.mul(RA, A), F.mul(nu, F.mul(RB, B))),
                F.add(F.mul(RA, B), F.mul(RB, A)),
            )
        A, B = F.add(F.mul(A, A), F.mul(nu, F.mul(B, B))), F.scale(F.mul(A, B), 2)
        e >>= 1
    return RA, RB


def _lpoly_cyclic(p: int, t_code: int) -> LPolynomial:
    # p = 2, 3 mod 5: Frobenius cycles the four characters, so
    # L = 1 + a4 T^4 + p^4 T^8 and a4 is one character sum over F_{p^4}.
    # That character is trivial on F_{p^2}^*, so it only sees
    # n(y) = conj(y) / y in the norm-one group of order p^2 + 1.
    F2 = galois_field(p, 2)
    q2, nu = F2.q, F2.generator
    z = np.arange(q2, dtype=np.int64)
    z2 = F2.mul(z, z)
    den = F2.sub(z2, nu)
    A = F2.div(F2.add(z2, nu), den)
    B = F2.div(F2.scale(z, p - 2), den)
    RA, RB = _norm_one_pow(F2, nu, A, B, (q2 + 1) // 5)
    keys = RA * q2 + RB
    one = q2
    distinct = [int(k) for k in np.unique(keys) if k != one]
    if not distinct:
        raise InvariantViolation(f"order-5 character on F_{p}^4 is trivial")
    gA, gB = np.array([distinct[0] // q2]), np.array([distinct[0] % q2])
    lookup = {one: 0}
    for e in range(2, 5):
        PA, PB = _norm_one_pow(F2, nu, gA, gB, e)
        lookup[int(PA[0] * q2 + PB[0])] = e
    lookup[distinct[0]] = 1
    if any(int(k) not in lookup for k in np.unique(keys)):
        raise InvariantViolation(f"norm-one values over F_{p}^4 are not fifth roots of unity")
    psi = np.vectorize(lambda k: lookup[int(k)], otypes=[np.int64])(keys)
    counts = _fibre_counts(F2, t_code, psi, None)
    if len(set(int(c) for c in counts[1:])) != 1:
        raise InvariantViolation(f"character sum over F_{p}^4 is not rational: {counts}")
    a4 = (q2 - 3) + int(counts[0] - counts[1])
    L = [1, 0, 0, 0, a4, 0, 0, 0, p ** 4]
    return LPolynomial(p, tuple(L), "characters")


def l_polynomial(
    t: Rational,
    p: int,
    method: str = "auto",
    counts: Optional[Sequence[int]] = None,
) -> LPolynomial:
    """The L-polynomial of C_t over F_p.

    "counts" reconstructs L from #C_t(F_{p^k}), k = 1..4, via Newton's
    identities; "characters" works eigenspace by eigenspace under the mu_5
    action and never tabulates F_{p^4}. Precomputed counts skip both.
    """
    reason = bad_reason(t, p)
    if reason:
        raise BadPrimeError(f"bad prime {p} for t = {t}: {reason}")
    if p ** 4 > MAX_Q:
        raise DomainError(f"p = {p} is beyond the counting range")
    if counts is not None:
        L = _from_counts(p, counts, "cache")
    else:
        if method == "auto":
            method = "counts" if p ** 4 <= COUNTS_LIMIT else "characters"
        tc = reduce_mod_p(t, p)
        if method == "counts":
            L = _from_counts(p, [count_points(t, p ** k) for k in range(1, GENUS + 1)])
        elif method == "characters":
            r = p % 5
            if r == 1:
                L = _lpoly_split(p, tc)
            elif r == 4:
                L = _lpoly_inert_pair(p, tc)
            else:
                L = _lpoly_cyclic(p, tc)
        else:
            raise DomainError(f"unknown method {method!r}")
    if not L.satisfies_functional_equation:
        raise InvariantViolation(f"L-polynomial of t = {t} at p = {p} fails the functional equation")
    if not L.within_weil_bounds:
        raise InvariantViolation(f"L-polynomial of t = {t} at p = {p} exceeds the Weil bounds")
    logger.debug("L(t=%s, p=%d) = %s [%s]", t, p, L, L.method)
    return L


def frobenius_roots(L: LPolynomial) -> np.ndarray:
    """The eight alpha_i with L(T) = prod(1 - alpha_i T), sorted by argument"""
    _, factors = Poly(list(L.coefficients), _X).sqf_list()
    roots: List[complex] = []
    for f, mult in factors:
        coeffs = np.array([float(c) for c in f.all_coeffs()])
        roots.extend(list(np.roots(coeffs)) * mult)
    out = np.array(roots, dtype=complex)
    return out[np.argsort(np.angle(out), kind="stable")]


# Newton polygons


@dataclass(frozen=True)
class NewtonPolygon:
    p: int
    vertices: Tuple[Tuple[int, int], ...]
    slopes: Tuple[Fraction, ...]

    @property
    def is_symmetric(self) -> bool:
        return sorted(self.slopes) == sorted(1 - s for s in self.slopes)

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.slopes)


def _cross(o: Tuple[int, int], a: Tuple[int, int], b: Tuple[int, int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(L: LPolynomial) -> NewtonPolygon:
    p = L.p
    points = [(i, int(multiplicity(p, abs(a)))) for i, a in enumerate(L.coefficients) if a != 0]
    hull: List[Tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    slopes: List[Fraction] = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y1 - y0, x1 - x0)] * (x1 - x0))
    if len(slopes) != 2 * GENUS:
        raise InvariantViolation(f"Newton polygon of {L} has {len(slopes)} slopes")
    return NewtonPolygon(p, tuple(hull), tuple(slopes))


_H = Fraction(1, 2)
_ORD_SS = (Fraction(0),) * 2 + (_H,) * 4 + (Fraction(1),) * 2
_SS = (_H,) * 8
_EXPECTED: Dict[int, Dict[NPClass, Tuple[Fraction, ...]]] = {
    1: {NPClass.MU_ORDINARY: (Fraction(0),) * 4 + (Fraction(1),) * 4, NPClass.BASIC: _ORD_SS},
    4: {NPClass.MU_ORDINARY: _ORD_SS, NPClass.BASIC: _SS},
    2: {NPClass.MU_ORDINARY: (Fraction(1, 4),) * 4 + (Fraction(3, 4),) * 4, NPClass.BASIC: _SS},
}
_EXPECTED[3] = _EXPECTED[2]


def classify_np(polygon: NewtonPolygon, p: Optional[int] = None) -> NPClass:
    p = polygon.p if p is None else p
    if p % 5 == 0:
        raise DomainError("p = 5 has no classification")
    slopes = tuple(sorted(polygon.slopes))
    for label, expected in _EXPECTED[p % 5].items():
        if slopes == expected:
            return label
    return NPClass.OTHER


# Degeneration and basic-locus predictors


def _as_f0(J: Rational | F0Elem) -> F0Elem:
    return F0Elem.coerce(J if not isinstance(J, int) else Fraction(J))


def j_normalized(J: Rational | F0Elem) -> F0Elem:
    """j = (u sqrt5)^-5 J, with c = j(R) = (u sqrt5)^-5 * 27/4"""
    return _as_f0(J) * U_SQRT5 ** -5


def val5(j: Rational | F0Elem) -> float | int:
    return val_sqrt5(_as_f0(j))


def lehr_criterion(J: Rational | F0Elem) -> LehrClass:
    if val5(j_normalized(J)) >= 0:
        return LehrClass.POTENTIALLY_GOOD
    return LehrClass.DEGENERATES_TO_CP


def st_predict(lam: F0Elem, prime: F0Elem) -> STPrediction:
    """Predicted reduction of the CM point of lam at the prime generated by prime"""
    if not lambda_admissible(lam):
        raise DomainError(f"{lam} is not admissible")
    if not is_irreducible(prime):
        raise DomainError(f"{prime} is not prime")
    if is_associate(prime, lam):
        return STPrediction.BASIC
    if prime.norm % 2 == 0:
        inert = not splits_in_sqrt(-lam, prime)
        return STPrediction.BASIC if inert else STPrediction.NO_PREDICTION
    if legendre(-lam, prime) in (0, -1):
        return STPrediction.BASIC
    return STPrediction.NO_PREDICTION


def st_predict_above(lam: F0Elem, p: int) -> List[Tuple[F0Elem, STPrediction]]:
    return [(pi, st_predict(lam, pi)) for pi in primes_above(p)]


@dataclass(frozen=True)
class Hypotheses:
    h1: bool
    h2: bool
    h3: bool
    literal_h2: bool

    @property
    def all(self) -> bool:
        return self.h1 and self.h2 and self.h3


def _even(v: float | int) -> bool:
    return v != math.inf and int(v) % 2 == 0


def theorem_hypotheses(J: Rational | F0Elem) -> Hypotheses:
    """The basic-reduction hypotheses, stated on J.

    h1: 27/4 - J totally positive; h2: v_sqrt5(J - 27/4) even;
    h3: v_sqrt5(j) < 0. Stated on j instead, the parity in h2 flips
    because j - c = (u sqrt5)^-5 (J - 27/4); that reading is literal_h2.
    """
    J = _as_f0(J)
    gap = J - J_R
    return Hypotheses(
        h1=is_totally_positive(-gap),
        h2=_even(val_sqrt5(gap)),
        h3=val5(j_normalized(J)) < 0,
        literal_h2=_even(val_sqrt5(j_normalized(gap))),
    )


# Scans


class CountStore(Protocol):
    def get(self, t: Fraction, p: int) -> Optional[Tuple[int, ...]]: ...

    def put(self, t: Fraction, p: int, counts: Sequence[int]) -> None: ...


@dataclass(frozen=True)
class ScanRow:
    p: int
    label: Optional[NPClass] = None
    coefficients: Optional[Tuple[int, ...]] = None
    slopes: Optional[Tuple[Fraction, ...]] = None
    method: Optional[str] = None
    reason: Optional[str] = None

    @property
    def skipped(self) -> bool:
        return self.label is None


@dataclass
class ScanReport:
    t: Fraction
    J: Fraction
    p_bound: int
    rows: List[ScanRow]
    schema_version: int = SCHEMA_VERSION

    @property
    def basic_primes(self) -> List[int]:
        return [r.p for r in self.rows if r.label == NPClass.BASIC]

    @property
    def skipped(self) -> List[ScanRow]:
        return [r for r in self.rows if r.skipped]

    @property
    def summary(self) -> Dict[str, int]:
        out = {label.value: 0 for label in NPClass}
        for r in self.rows:
            if r.label is not None:
                out[r.label.value] += 1
        out["skipped"] = len(self.skipped)
        return out


def _scan_job(args: Tuple[Fraction, int, Optional[Tuple[int, ...]], str]) -> Tuple[ScanRow, Tuple[int, ...]]:
    t, p, cached, method = args
    L = l_polynomial(t, p, method=method, counts=cached)
    polygon = newton_polygon(L)
    row = ScanRow(
        p=p,
        label=classify_np(polygon),
        coefficients=L.coefficients,
        slopes=polygon.slopes,
        method=L.method,
    )
    return row, tuple(L.count(k) for k in range(1, GENUS + 1))


def scan_basic(
    t: Rational,
    p_bound: int,
    workers: int = 1,
    cache: Optional[CountStore] = None,
    method: str = "auto",
) -> ScanReport:
    """Classify the reduction of C_t at every prime below p_bound.

    Bad primes and primes beyond the counting range are reported as
    skipped rows with a reason. Workers only compute; counts are written
    to the cache by the calling process.
    """
    t = Fraction(t)
    J = klein_J(t)
    rows: List[ScanRow] = []
    jobs = []
    for p in primerange(2, p_bound):
        p = int(p)
        reason = bad_reason(t, p)
        if reason is None and p ** 4 > MAX_Q:
            reason = "beyond counting range"
        if reason:
            rows.append(ScanRow(p=p, reason=reason))
            continue
        cached = cache.get(t, p) if cache is not None else None
        jobs.append((t, p, cached, method))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_job, jobs))
    else:
        results = [_scan_job(job) for job in jobs]
    for (_, p, cached, _), (row, counts) in zip(jobs, results):
        rows.append(row)
        if cache is not None and cached is None:
            cache.put(t, p, counts)
    rows.sort(key=lambda r: r.p)
    report = ScanReport(t=t, J=J, p_bound=p_bound, rows=rows)
    logger.info("scan t=%s p<%d: %s", t, p_bound, report.summary)
    return report


@dataclass
class Census:
    """Basic primes per t, and label counts per residue of p mod 5 over all t"""

    p_bound: int
    basic_primes: Dict[Fraction, List[int]]
    by_residue: Dict[int, Dict[str, int]]


def basic_prime_census(
    ts: Iterable[Rational],
    p_bound: int,
    workers: int = 1,
    cache: Optional[CountStore] = None,
) -> Census:
    basic: Dict[Fraction, List[int]] = {}
    by_residue = {r: {label.value: 0 for label in NPClass} for r in (1, 2, 3, 4)}
    for t in ts:
        report = scan_basic(t, p_bound, workers=workers, cache=cache)
        basic[report.t] = report.basic_primes
        for row in report.rows:
            if row.label is not None:
                by_residue[row.p % 5][row.label.value] += 1
    return Census(p_bound=p_bound, basic_primes=basic, by_residue=by_residue)
