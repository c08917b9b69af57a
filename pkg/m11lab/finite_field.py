"""Finite fields F_{p^k} with numpy log/antilog tables.

Elements are encoded as integers sum(c_i p^i) for the polynomial
c_0 + c_1 x + ... + c_{k-1} x^{k-1} modulo a fixed monic irreducible.
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np
from sympy import Poly, factorint, symbols

from .errors import DomainError, InvariantViolation

logger = logging.getLogger(__name__)

_X = symbols("x")

# log tables are int64; keep them below ~130 MB
LOG_TABLE_LIMIT = 1 << 24

_BLOCK = 1024


def irreducible_modulus(p: int, k: int) -> Optional[List[int]]:
    """First monic irreducible of degree k over F_p, coefficients low -> high"""
    if k == 1:
        return None
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue
        coeffs = [1] + list(reversed(low))
        if Poly(coeffs, _X, modulus=p).is_irreducible:
            return list(low) + [1]
    raise InvariantViolation(f"no irreducible polynomial of degree {k} over F_{p}")


class GaloisField:
    def __init__(self, p: int, k: int) -> None:
        q = p ** k
        if q > LOG_TABLE_LIMIT:
            raise DomainError(f"F_{p}^{k} is too large for a log table")
        self.p, self.k, self.q = p, k, q
        self.modulus = irreducible_modulus(p, k)
        self.place = np.array([p ** i for i in range(k)], dtype=np.int64)
        self.generator = self._find_generator()
        self.antilog = self._powers(self.generator)
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.antilog] = np.arange(q - 1, dtype=np.int64)
        if (self.log[1:] < 0).any():
            raise InvariantViolation(f"generator of F_{q} is not primitive")
        logger.debug("built log table for F_%d (generator %d)", q, self.generator)

    def __repr__(self) -> str:
        return f"GaloisField(p={self.p}, k={self.k})"

    # scalar polynomial arithmetic, used before the tables exist

    def vec(self, code: int) -> List[int]:
        return [(code // self.p ** i) % self.p for i in range(self.k)]

    def code(self, vec: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(vec))

    def _polymul(self, a: List[int], b: List[int]) -> List[int]:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        if self.modulus is not None:
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d] % p
                if c:
                    for i in range(k + 1):
                        prod[d - k + i] -= c * self.modulus[i]
        return [c % p for c in prod[:k]]

    def _polypow(self, a: List[int], e: int) -> List[int]:
        result = [1] + [0] * (self.k - 1)
        while e > 0:
            if e & 1:
                result = self._polymul(result, a)
            a = self._polymul(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        one = [1] + [0] * (self.k - 1)
        primes = list(factorint(order)) if order > 1 else []
        for code in range(1, self.q):
            v = self.vec(code)
            if all(self._polypow(v, order // r) != one for r in primes):
                return code
        raise InvariantViolation(f"no primitive element in F_{self.q}")

    def _mult_matrix(self, code: int) -> np.ndarray:
        cols = []
        basis = [0] * self.k
        for i in range(self.k):
            e = list(basis)
            e[i] = 1
            cols.append(self._polymul(self.vec(code), e))
        return np.array(cols, dtype=np.int64).T

    def _powers(self, code: int) -> np.ndarray:
        """Codes of g^0 .. g^(q-2), built blockwise"""
        p, n = self.p, self.q - 1
        M = self._mult_matrix(code)
        block = min(n, _BLOCK)
        first = np.empty((block, self.k), dtype=np.int64)
        v = np.zeros(self.k, dtype=np.int64)
        v[0] = 1
        for i in range(block):
            first[i] = v
            v = M.dot(v) % p
        step = np.eye(self.k, dtype=np.int64)
        for _ in range(block):
            step = M.dot(step) % p
        n_blocks = -(-n // block)
        out = np.empty((n_blocks * block, self.k), dtype=np.int64)
        cur = first
        for j in range(n_blocks):
            out[j * block:(j + 1) * block] = cur
            cur = cur.dot(step.T) % p
        return out[:n].dot(self.place)

    # vectorized arithmetic on code arrays

    def digits(self, codes) -> List[np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        return [(codes // self.p ** i) % self.p for i in range(self.k)]

    def from_digits(self, digits: Sequence[np.ndarray]) -> np.ndarray:
        out = np.zeros_like(np.asarray(digits[0]), dtype=np.int64)
        for i, d in enumerate(digits):
            out = out + (np.asarray(d) % self.p) * self.p ** i
        return out

    def add(self, a, b) -> np.ndarray:
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def sub(self, a, b) -> np.ndarray:
        return self.from_digits([x - y for x, y in zip(self.digits(a), self.digits(b))])

    def scale(self, a, c: int) -> np.ndarray:
        """Multiply by an element c of the prime field"""
        return self.from_digits([x * c for x in self.digits(a)])

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        zero = (a == 0) | (b == 0)
        la = self.log[np.where(a == 0, 1, a)]
        lb = self.log[np.where(b == 0, 1, b)]
        return np.where(zero, 0, self.antilog[(la + lb) % (self.q - 1)])

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.antilog[(-self.log[a]) % (self.q - 1)]

    def div(self, a, b) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def log_mod(self, a, m: int) -> np.ndarray:
        """Discrete logs of nonzero codes, reduced mod m (m divides q - 1)"""
        return self.log[np.asarray(a, dtype=np.int64)] % m

    def shifted(self, z_digits: Sequence[np.ndarray], w_digits: Sequence[np.ndarray]) -> np.ndarray:
        """Table of z - w with one row per w and one column per z"""
        return self.from_digits([z[None, :] - w[:, None] for z, w in zip(z_digits, w_digits)])


@lru_cache(maxsize=8)
def galois_field(p: int, k: int) -> GaloisField:
    return GaloisField(p, k)


def prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if len(f) != 1:
        raise DomainError(f"{q} is not a prime power")
    (p, k), = f.items()
    return int(p), int(k)
