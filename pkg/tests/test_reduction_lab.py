"""
Point counts, L-polynomials, Newton polygons and basic-locus scans for
the curves y^5 = x(x - 1)(x - t)
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from sympy import primerange

from m11lab.cyclotomic import j_orbit
from m11lab.errors import BadPrimeError, DomainError, InvariantViolation
from m11lab.reduction_lab import (
    LehrClass,
    LPolynomial,
    NPClass,
    STPrediction,
    bad_reason,
    basic_prime_census,
    classify_np,
    count_points,
    frobenius_roots,
    j_normalized,
    l_polynomial,
    lehr_criterion,
    newton_polygon,
    scan_basic,
    st_predict,
    st_predict_above,
    theorem_hypotheses,
    val5,
)
from m11lab.ring_f0 import F0Elem, U, prime_above

# Brute force over F_{p^k}: polynomials in x modulo a monic irreducible


def _poly_rem(a, m, p):
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return (a + [0] * dm)[:dm]


def _monic(p, d):
    for low in itertools.product(range(p), repeat=d):
        yield list(low) + [1]


def _irreducible(p, k):
    for poly in _monic(p, k):
        if poly[0] == 0:
            continue
        if all(any(_poly_rem(poly, d, p)) for deg in range(1, k // 2 + 1) for d in _monic(p, deg)):
            return poly
    raise AssertionError(f"no irreducible of degree {k} over F_{p}")


def _brute_count(t, p, k):
    """1 + #{(x, y) : y^5 = x(x-1)(x-t)}, one point at infinity"""
    m = _irreducible(p, k) if k > 1 else [0, 1]
    elems = list(itertools.product(range(p), repeat=k))

    def mul(a, b):
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        return tuple(_poly_rem(prod, m, p))

    def sub(a, b):
        return tuple((x - y) % p for x, y in zip(a, b))

    def fifth_power(y):
        y2 = mul(y, y)
        return mul(mul(y2, y2), y)

    fifth = Counter(fifth_power(y) for y in elems)
    t = Fraction(t)
    tc = (t.numerator * pow(t.denominator, -1, p) % p,) + (0,) * (k - 1)
    one = (1,) + (0,) * (k - 1)
    return 1 + sum(fifth[mul(mul(x, sub(x, one)), sub(x, tc))] for x in elems)


def _expand(*factors):
    out = [1]
    for f in factors:
        prod = [0] * (len(out) + len(f) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(f):
                prod[i + j] += x * y
        out = prod
    return tuple(out)


@pytest.mark.parametrize("t,q,p,k", [(2, 11, 11, 1), (-1, 81, 3, 4), (3, 121, 11, 2), (2, 31, 31, 1), (2, 7, 7, 1)])
def test_count_points_matches_brute_force(t, q, p, k):
    expected = _brute_count(t, p, k)
    got = count_points(t, q)
    print(f"🔍 #C_{t}(F_{q}) = {got}")
    assert got == expected, f"count for t={t}, q={q}: {got} != {expected}"


def test_trivial_counts_when_q_is_not_1_mod_5():
    rng = random.Random(1234)
    for q, p in ((3, 3), (7, 7), (13, 13), (17, 17), (9, 3), (49, 7), (19, 19), (29, 29), (27, 3), (343, 7)):
        for _ in range(5):
            t = Fraction(rng.randint(2, 500), rng.choice([1, 11, 13]))
            if bad_reason(t, p):
                continue
            assert count_points(t, q) == q + 1, f"t={t}, q={q}"


def test_count_points_errors():
    with pytest.raises(DomainError):
        count_points(2, 1 << 33)
    with pytest.raises(BadPrimeError):
        count_points(2, 25)
    with pytest.raises(BadPrimeError):
        count_points(12, 11)
    with pytest.raises(DomainError):
        count_points(2, 121, t_code=121)
    with pytest.raises(DomainError):
        count_points(2, 12)


def test_bad_reasons():
    assert bad_reason(2, 2) == "p = 2"
    assert bad_reason(2, 5) == "p = 5"
    assert bad_reason(Fraction(1, 7), 7) == "t has p in its denominator"
    assert bad_reason(3, 3) == "t = 0 mod p"
    assert bad_reason(Fraction(5, 2), 3) == "t = 1 mod p"
    assert bad_reason(2, 11) is None


def test_lpoly_at_three_for_minus_one():
    L = l_polynomial(-1, 3)
    assert L.coefficients[1:4] == (0, 0, 0)
    assert L.coefficients[4] == (count_points(-1, 81) - 82) // 4
    assert L.coefficients[8] == 3 ** 4


def test_lpoly_counts_are_consistent():
    for t, p in ((2, 11), (3, 7), (-1, 19)):
        L = l_polynomial(t, p)
        for k in range(1, 5):
            assert L.count(k) == count_points(t, p ** k), f"N_{k} for t={t}, p={p}"


@pytest.mark.parametrize("p", [3, 7, 11, 13, 19, 29, 31])
def test_engines_agree(p):
    for t in (Fraction(2), Fraction(-1), Fraction(3)):
        if bad_reason(t, p):
            continue
        by_counts = l_polynomial(t, p, method="counts")
        by_characters = l_polynomial(t, p, method="characters")
        assert by_counts == by_characters, f"t={t}, p={p}: {by_counts} vs {by_characters}"
        assert by_characters.method == "characters"


def test_unknown_method_and_range():
    with pytest.raises(DomainError):
        l_polynomial(2, 11, method="guess")
    with pytest.raises(DomainError):
        l_polynomial(2, 257)
    with pytest.raises(BadPrimeError):
        l_polynomial(2, 2)
    with pytest.raises(BadPrimeError):
        l_polynomial(Fraction(1, 3), 3)


def test_precomputed_counts():
    counts = [count_points(2, 11 ** k) for k in range(1, 5)]
    L = l_polynomial(2, 11, counts=counts)
    assert L.method == "cache"
    assert L == l_polynomial(2, 11, method="counts")
    with pytest.raises(DomainError):
        l_polynomial(2, 11, counts=counts[:3])
    with pytest.raises(InvariantViolation):
        l_polynomial(2, 11, counts=(13, 122, 1332, 14642))


FROBENIUS_CASES = [
    (2, 3), (2, 7), (2, 11), (2, 13), (2, 19), (2, 31),
    (-1, 3), (-1, 7), (-1, 13), (-1, 17),
    (3, 7), (3, 11), (3, 13), (3, 19),
    (4, 7), (4, 11), (4, 13),
    (Fraction(5, 2), 7), (Fraction(5, 2), 11), (Fraction(5, 2), 13),
    (Fraction(7, 3), 11), (Fraction(7, 3), 13),
]


@pytest.mark.parametrize("t,p", FROBENIUS_CASES)

def test_frobenius_roots_have_weight_one(t, p):
    roots = frobenius_roots(l_polynomial(t, p))
    assert len(roots) == 8
    for r in roots:
        assert abs(abs(r) - math.sqrt(p)) < 1e-6 * math.sqrt(p), f"|{r}| != sqrt({p})"


def test_basic_witness_for_t_equal_2():
    # t = 2 is the curve y^5 = x^3 - x; it is supersingular whenever p is not 1 mod 5
    for p in (7, 19):
        polygon = newton_polygon(l_polynomial(2, p))
        assert polygon.slopes == (Fraction(1, 2),) * 8, f"slopes at p={p}: {polygon}"
        assert classify_np(polygon) == NPClass.BASIC
    polygon = newton_polygon(l_polynomial(2, 11))
    assert polygon.slopes == (Fraction(0),) * 4 + (Fraction(1),) * 4
    assert classify_np(polygon) == NPClass.MU_ORDINARY
    print("✅ t=2 is Basic at 7 and 19, MuOrdinary at 11")


def test_twist_invariance():

    for p in (3, 7, 11, 13, 19, 31):
        for t in (Fraction(2), Fraction(-1), Fraction(7, 3)):
            if bad_reason(t, p) or bad_reason(1 - t, p):
                continue
            assert l_polynomial(t, p) == l_polynomial(1 - t, p), f"t <-> 1-t at p={p}"
    for p in (7, 13, 19, 29):
        assert l_polynomial(2, p) == l_polynomial(Fraction(1, 2), p), f"2 <-> 1/2 at p={p}"


@pytest.mark.parametrize("p", [11, 31])
def test_newton_polygon_constant_on_orbit(p):
    slopes = set()
    for s in j_orbit(Fraction(3)):
        slopes.add(newton_polygon(l_polynomial(s, p)).slopes)
    assert len(slopes) == 1, f"slopes differ along the orbit at p={p}: {slopes}"


def test_newton_polygon_examples():
    L = LPolynomial(7, (1, 0, 0, 0, 14, 0, 0, 0, 7 ** 4))
    polygon = newton_polygon(L)
    assert sorted(polygon.slopes) == [Fraction(1, 4)] * 4 + [Fraction(3, 4)] * 4
    assert polygon.is_symmetric
    assert classify_np(polygon) == NPClass.MU_ORDINARY

    L = LPolynomial(19, _expand(*[(1, 0, -19)] * 4))
    assert newton_polygon(L).slopes == (Fraction(1, 2),) * 8
    assert classify_np(newton_polygon(L)) == NPClass.BASIC

    L = LPolynomial(11, _expand(*[(1, -1)] * 4, *[(1, -11)] * 4))
    polygon = newton_polygon(L)
    assert polygon.slopes == (Fraction(0),) * 4 + (Fraction(1),) * 4
    assert classify_np(polygon) == NPClass.MU_ORDINARY
    assert classify_np(polygon, p=31) == NPClass.MU_ORDINARY
    assert classify_np(polygon, p=19) == NPClass.OTHER
    with pytest.raises(DomainError):
        classify_np(polygon, p=5)
    with pytest.raises(InvariantViolation):
        LPolynomial(11, (1, 2, 3))


def test_lehr_and_valuations():
    assert val5(j_normalized(Fraction(27, 4))) == -5
    assert val5(j_normalized(25)) == -1
    assert val5(j_normalized(0)) == math.inf
    assert lehr_criterion(125) == LehrClass.POTENTIALLY_GOOD
    assert lehr_criterion(1) == LehrClass.DEGENERATES_TO_CP
    assert lehr_criterion(Fraction(27, 4)) == LehrClass.DEGENERATES_TO_CP


def test_theorem_hypotheses():
    h = theorem_hypotheses(-1)
    assert h.h1 and h.h2 and h.h3
    assert h.all
    assert not h.literal_h2
    assert not theorem_hypotheses(Fraction(27, 4)).h1
    assert not theorem_hypotheses(7).h1
    assert theorem_hypotheses(F0Elem(-1)) == h


def test_shimura_taniyama_predictions():
    three = F0Elem(3)
    assert st_predict(three, three) == STPrediction.BASIC
    assert st_predict(three, prime_above(11)) == STPrediction.BASIC
    assert st_predict(three, F0Elem(7)) == STPrediction.NO_PREDICTION
    above = st_predict_above(three, 11)
    assert len(above) == 2
    assert all(pred == STPrediction.BASIC for _, pred in above)
    with pytest.raises(DomainError):
        st_predict(2 + U, three)
    with pytest.raises(DomainError):
        st_predict(three, F0Elem(9))


def test_scan_small_range():
    report = scan_basic(2, 30)
    assert [r.p for r in report.rows] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert {r.p: r.reason for r in report.skipped} == {2: "p = 2", 5: "p = 5"}
    assert report.J == Fraction(27, 4)
    for row in report.rows:
        if not row.skipped:
            assert row.label != NPClass.OTHER, f"p={row.p} has slopes {row.slopes}"
    assert report.summary["skipped"] == 2
    assert sum(report.summary.values()) == len(report.rows)


def test_scan_skip_reasons():
    rows = {r.p: r.reason for r in scan_basic(Fraction(5, 2), 4).rows}
    assert rows == {2: "p = 2", 3: "t = 1 mod p"}
    rows = {r.p: r.reason for r in scan_basic(3, 4).rows}
    assert rows[3] == "t = 0 mod p"


class _DictStore:
    def __init__(self):
        self.rows = {}

    def get(self, t, p):
        return self.rows.get((t, p))

    def put(self, t, p, counts):
        self.rows[(t, p)] = tuple(counts)


def test_scan_uses_count_store():
    store = _DictStore()
    first = scan_basic(-1, 20, cache=store)
    assert set(p for _, p in store.rows) == {3, 7, 11, 13, 17, 19}
    second = scan_basic(-1, 20, cache=store)
    assert all(r.method == "cache" for r in second.rows if not r.skipped)
    assert [r.label for r in first.rows] == [r.label for r in second.rows]


def test_scan_with_workers_matches_serial():
    serial = scan_basic(3, 24)
    parallel = scan_basic(3, 24, workers=2)
    assert [(r.p, r.label, r.coefficients) for r in serial.rows] == [
        (r.p, r.label, r.coefficients) for r in parallel.rows
    ]


@pytest.mark.slow
def test_census_is_mostly_mu_ordinary():
    census = basic_prime_census([2, 3, 4, -1, Fraction(5, 2)], 60)
    totals = Counter()
    for labels in census.by_residue.values():
        totals.update(labels)
    print(f"📊 census: {dict(totals)}, basic primes {census.basic_primes}")
    assert totals[NPClass.MU_ORDINARY.value] > totals[NPClass.BASIC.value]
    assert totals[NPClass.OTHER.value] == 0
    assert set(census.basic_primes) == {Fraction(2), Fraction(3), Fraction(4), Fraction(-1), Fraction(5, 2)}


@pytest.mark.slow
def test_long_scan_finds_basic_primes():
    report = scan_basic(2, 200)
    expected = [p for p in primerange(3, 200) if p % 5 in (2, 3, 4)]
    assert report.basic_primes == expected, f"basic primes for t = 2: {report.basic_primes}"
    for r in report.rows:
        if r.p % 5 == 1:
            assert r.label == NPClass.MU_ORDINARY, f"p={r.p} labelled {r.label}"
    assert {r.p for r in report.skipped} == {2, 5}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
