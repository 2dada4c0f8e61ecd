"""The cyclic algebra R = F_p[X]/(X^n - 1), n a power of p.

Since X^n - 1 = (X - 1)^n over F_p, R is local with maximal ideal (X - 1),
and the (X - 1)-divisibility order of an element is the natural size
measure.  Principal parts of group-algebra elements land here.
"""

from __future__ import annotations

from functools import lru_cache

from .kernel import cyclic_conv
from .series import inv_mod


@lru_cache(maxsize=None)
def _binomial_rows(p: int, n: int):
    """rows[j][i] = C(j, i) mod p for 0 <= i <= j < n."""
    rows = [[1]]
    for j in range(1, n):
        prev = rows[-1]
        row = [1] + [(prev[i - 1] + (prev[i] if i < j else 0)) % p
                     for i in range(1, j + 1)]
        rows.append(row)
    return rows


class CyclicPoly:
    __slots__ = ("p", "n", "coeffs")

    def __init__(self, p, n, coeffs):
        self.p = p
        self.n = n
        if not isinstance(coeffs, (bytes, bytearray)):
            coeffs = bytes(c % p for c in coeffs)
        if len(coeffs) != n:
            raise ValueError("coefficient vector must have length n")
        self.coeffs = bytes(coeffs)

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, bytes(n))

    @classmethod
    def one(cls, p, n):
        return cls.x_pow(p, n, 0)

    @classmethod
    def x_pow(cls, p, n, e, c=1):
        buf = bytearray(n)
        buf[e % n] = c % p
        return cls(p, n, bytes(buf))

    @classmethod
    def from_terms(cls, p, n, terms):
        buf = bytearray(n)
        for e, c in terms.items():
            buf[e % n] = (buf[e % n] + c) % p
        return cls(p, n, bytes(buf))

    @property
    def is_zero(self):
        return not any(self.coeffs)

    def __add__(self, other):
        self._check(other)
        p = self.p
        return CyclicPoly(p, self.n, bytes((a + b) % p for a, b
                                           in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.p
        return CyclicPoly(p, self.n, bytes((p - c) % p for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return CyclicPoly(self.p, self.n,
                          cyclic_conv(self.coeffs, other.coeffs, self.p))

    def scal(self, c: int):
        c %= self.p
        p = self.p
        return CyclicPoly(p, self.n, bytes((c * x) % p for x in self.coeffs))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        result = CyclicPoly.one(self.p, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            if k > 1:
                base = base * base
            k >>= 1
        return result

    def _check(self, other):
        if not isinstance(other, CyclicPoly) or other.p != self.p \
                or other.n != self.n:
            raise TypeError("mismatched cyclic algebras")

    def eval_one(self) -> int:
        """Evaluation at X = 1 (residue map of the local ring R)."""
        return sum(self.coeffs) % self.p

    def xm1_val(self) -> int:
        """Largest m <= n with (X-1)^m dividing self; n iff self == 0.

        Uses the basis change to powers of (X-1): with a_j the X^j
        coefficients, the (X-1)^i coordinate is sum_j C(j, i) a_j.
        """
        rows = _binomial_rows(self.p, self.n)
        for i in range(self.n):
            s = 0
            for j in range(i, self.n):
                a = self.coeffs[j]
                if a:
                    s += rows[j][i] * a
            if s % self.p:
                return i
        return self.n

    def proportional(self, other) -> int | None:
        """c with self == c*other, c != 0; None if no such c; 0==0 gives 1."""
        self._check(other)
        if other.is_zero:
            return 1 if self.is_zero else None
        if self.is_zero:
            return None
        j = next(i for i, c in enumerate(other.coeffs) if c)
        c = (self.coeffs[j] * inv_mod(other.coeffs[j], self.p)) % self.p
        if c == 0:
            return None
        return c if self == other.scal(c) else None

    def stretch(self, e: int):
        """Substitute X -> X^e (e may be negative; gcd(e, n) = 1 expected)."""
        buf = bytearray(self.n)
        for j, c in enumerate(self.coeffs):
            if c:
                k = (j * e) % self.n
                buf[k] = (buf[k] + c) % self.p
        return CyclicPoly(self.p, self.n, bytes(buf))

    def reverse(self):
        """Substitute X -> X^(-1)."""
        return self.stretch(-1)

    def __eq__(self, other):
        return (isinstance(other, CyclicPoly) and self.p == other.p
                and self.n == other.n and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.n, self.coeffs))

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append("X" if j == 1 else f"X^{j}")
            else:
                parts.append(f"{c}*X" if j == 1 else f"{c}*X^{j}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CyclicPoly(F_{self.p}[X]/(X^{self.n}-1): {self})"


def x_pow_minus_one(p: int, n: int, h: int) -> CyclicPoly:
    """X^h - 1 as an element of R (zero when n divides h)."""
    if h % n == 0:
        return CyclicPoly.zero(p, n)
    return CyclicPoly.x_pow(p, n, h % n) - CyclicPoly.one(p, n)
