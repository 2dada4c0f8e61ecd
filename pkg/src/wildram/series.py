"""Truncated Laurent series over the prime field F_p.

A series is stored in normalized form:

* ``lead``   -- exponent of the first stored coefficient,
* ``coeffs`` -- ``bytes`` of coefficients in ``[0, p)``; the first and the
  last stored byte are nonzero (``b""`` for a zero series),
* ``prec``   -- every exponent ``>= prec`` is unknown; ``INF`` means the
  series is exact (a Laurent polynomial known completely).

So ``coeffs == b""`` with ``prec == INF`` is the exact zero, while
``coeffs == b""`` with finite ``prec`` only certifies "zero below t^prec"
(an O(t^prec) element).  Asking such a fuzzy zero for its valuation raises
:class:`PrecisionExhausted`.

Arithmetic never reports a coefficient the operands do not determine: the
precision of a sum is the minimum of the precisions, the precision of a
product ``a*b`` is ``min(val(a) + prec(b), val(b) + prec(a))``, and
inverting ``a`` costs ``2*val(a)`` of absolute precision.

Values are immutable; every operation returns a new object.
"""

from __future__ import annotations

from .errors import PrecisionExhausted
from .kernel import conv, inv_series

INF = float("inf")


def inv_mod(c: int, p: int) -> int:
    """Inverse of c mod p (p prime, c not divisible by p)."""
    c %= p
    if c == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(c, p - 2, p)


class Series:
    __slots__ = ("p", "lead", "coeffs", "prec")

    def __init__(self, p, lead, coeffs, prec=INF, _normalized=False):
        self.p = p
        if prec == INF:
            prec = INF  # pin the module singleton so `is INF` stays valid
        if _normalized:
            self.lead = lead
            self.coeffs = coeffs
            self.prec = prec
            return
        if not isinstance(coeffs, (bytes, bytearray)):
            coeffs = bytes(c % p for c in coeffs)
        # drop unknown tail, then strip zero margins
        if prec is not INF and lead + len(coeffs) > prec:
            keep = max(0, prec - lead)
            coeffs = coeffs[:keep]
        start = 0
        end = len(coeffs)
        while start < end and coeffs[start] == 0:
            start += 1
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        if start == end:
            self.lead = 0
            self.coeffs = b""
        else:
            self.lead = lead + start
            self.coeffs = bytes(coeffs[start:end])
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p):
        return cls(p, 0, b"", INF, _normalized=True)

    @classmethod
    def bigoh(cls, p, prec):
        """The fuzzy zero O(t^prec)."""
        return cls(p, 0, b"", prec, _normalized=True)

    @classmethod
    def monomial(cls, p, exp, c=1, prec=INF):
        c %= p
        if c == 0:
            return cls.zero(p) if prec is INF else cls.bigoh(p, prec)
        return cls(p, exp, bytes([c]), prec)

    @classmethod
    def one(cls, p):
        return cls.monomial(p, 0)

    @classmethod
    def from_terms(cls, p, terms, prec=INF):
        """Build from {exponent: coefficient}."""
        live = {e: c % p for e, c in terms.items() if c % p}
        if not live:
            return cls.zero(p) if prec is INF else cls.bigoh(p, prec)
        lo, hi = min(live), max(live)
        buf = bytearray(hi - lo + 1)
        for e, c in live.items():
            buf[e - lo] = c
        return cls(p, lo, bytes(buf), prec)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self):
        """No certified nonzero coefficient (exact zero or fuzzy zero)."""
        return not self.coeffs

    @property
    def is_exact_zero(self):
        return not self.coeffs and self.prec is INF

    @property
    def exact(self):
        return self.prec is INF

    def val(self):
        """t-adic valuation; INF for the exact zero.

        Raises PrecisionExhausted for a fuzzy zero: all stored
        coefficients vanish but the element is not known to be zero.
        """
        if self.coeffs:
            return self.lead
        if self.prec is INF:
            return INF
        raise PrecisionExhausted(
            f"valuation not certified below t^{self.prec}")

    def val_bound(self):
        """(value, certified): valuation, or a lower bound for fuzzy zeros."""
        if self.coeffs:
            return self.lead, True
        if self.prec is INF:
            return INF, True
        return self.prec, False

    def lead_coeff(self):
        if not self.coeffs:
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def coeff(self, e):
        """Coefficient at exponent e; PrecisionExhausted if e >= prec."""
        if e >= self.prec:
            raise PrecisionExhausted(f"coefficient at t^{e} beyond precision")
        if self.coeffs and self.lead <= e < self.lead + len(self.coeffs):
            return self.coeffs[e - self.lead]
        return 0

    def support(self):
        """Exponents of the certified nonzero coefficients."""
        return [self.lead + i for i, c in enumerate(self.coeffs) if c]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        if isinstance(other, int):
            return Series.monomial(self.p, 0, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        prec = min(a.prec, b.prec)
        if not a.coeffs and not b.coeffs:
            return Series(self.p, 0, b"", prec, _normalized=True)
        if not a.coeffs:
            return Series(self.p, b.lead, b.coeffs, prec)
        if not b.coeffs:
            return Series(self.p, a.lead, a.coeffs, prec)
        lo = min(a.lead, b.lead)
        hi = max(a.lead + len(a.coeffs), b.lead + len(b.coeffs))
        if prec is not INF:
            hi = min(hi, prec)
        buf = bytearray(max(hi - lo, 0))
        p = self.p
        for i, c in enumerate(a.coeffs):
            e = a.lead + i - lo
            if 0 <= e < len(buf):
                buf[e] = (buf[e] + c) % p
        for i, c in enumerate(b.coeffs):
            e = b.lead + i - lo
            if 0 <= e < len(buf):
                buf[e] = (buf[e] + c) % p
        return Series(self.p, lo, bytes(buf), prec)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Series(p, self.lead, bytes((p - c) % p for c in self.coeffs),
                      self.prec, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.is_exact_zero or b.is_exact_zero:
            return Series.zero(self.p)
        la = a.lead if a.coeffs else a.prec
        lb = b.lead if b.coeffs else b.prec
        prec = min(la + b.prec, lb + a.prec)
        if not a.coeffs or not b.coeffs:
            return Series(self.p, 0, b"", prec, _normalized=True)
        lead = a.lead + b.lead
        full = len(a.coeffs) + len(b.coeffs) - 1
        out_len = full if prec is INF else min(full, prec - lead)
        return Series(self.p, lead, conv(a.coeffs, b.coeffs, self.p, out_len),
                      prec)

    __rmul__ = __mul__

    def scal(self, c: int):
        c %= self.p
        if c == 0:
            return Series.zero(self.p) if self.prec is INF \
                else Series.bigoh(self.p, self.prec)
        if c == 1:
            return self
        p = self.p
        return Series(p, self.lead, bytes((c * x) % p for x in self.coeffs),
                      self.prec, _normalized=True)

    def shift(self, e: int):
        """Multiply by t^e."""
        return Series(self.p, self.lead + e, self.coeffs,
                      INF if self.prec is INF else self.prec + e,
                      _normalized=True)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return Series(self.p, self.lead, self.coeffs, prec)

    def inv(self, prec=None):
        """Multiplicative inverse.

        For an exact monomial the result is exact.  Otherwise the result
        carries the propagated precision ``prec(self) - 2*val(self)``; an
        exact non-monomial needs an explicit target ``prec``.
        """
        if not self.coeffs:
            if self.prec is INF:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionExhausted("cannot invert an uncertified zero")
        v = self.lead
        if len(self.coeffs) == 1 and self.prec is INF:
            return Series.monomial(self.p, -v, inv_mod(self.coeffs[0], self.p))
        if self.prec is INF:
            if prec is None:
                raise ValueError(
                    "inverting an exact non-monomial requires a target precision")
            out_prec = prec
            rel = out_prec + v
        else:
            out_prec = self.prec - 2 * v
            if prec is not None:
                out_prec = min(out_prec, prec)
            rel = out_prec + v
        if rel <= 0:
            raise PrecisionExhausted("no precision left after inversion")
        return Series(self.p, -v, inv_series(self.coeffs, self.p, rel),
                      out_prec)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = Series.one(self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- comparisons -------------------------------------------------------

    def agrees(self, other) -> bool:
        """True when self - other has no certified nonzero coefficient."""
        other = self._coerce(other)
        return (self - other).is_zero

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, Series):
            return NotImplemented
        return (self.p == other.p and self.lead == other.lead
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.p, self.lead, self.coeffs, self.prec))

    # -- text form ---------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for i, c in enumerate(self.coeffs):
                if c:
                    e = self.lead + i
                    parts.append(f"t^{e}" if c == 1 else f"{c}*t^{e}")
            body = " + ".join(parts)
        if self.prec is INF:
            return body
        return f"{body} (mod t^{self.prec})"

    def __repr__(self):
        return f"Series(F_{self.p}: {self})"


def parse_series(p: int, text: str) -> Series:
    """Parse the textual form produced by ``str(Series)``.

    Accepts e.g. ``"t^-2 + 2*t^0 + t^5 (mod t^64)"``, ``"1 + 2*t^3"``,
    ``"0"``; plain integers are constant terms.
    """
    text = text.strip()
    prec = INF
    if "(mod" in text:
        body, _, tail = text.partition("(mod")
        tail = tail.strip()
        if not (tail.startswith("t^") and tail.endswith(")")):
            raise ValueError(f"bad precision suffix in {text!r}")
        prec = int(tail[2:-1])
        text = body.strip()
    terms: dict[int, int] = {}
    if text and text != "0":
        # protect exponent signs ("t^-2") before splitting on +/-
        protected = text.replace("^-", "^~")
        for part in protected.replace("-", "+-").split("+"):
            part = part.replace("~", "-").strip()
            if not part:
                continue
            sign = 1
            if part.startswith("-"):
                sign = -1
                part = part[1:].strip()
            if "*" in part:
                cs, _, ts = part.partition("*")
                c = int(cs)
            elif part.startswith("t"):
                c, ts = 1, part
            else:
                c, ts = int(part), "t^0"
            ts = ts.strip()
            if ts == "t":
                e = 1
            elif ts.startswith("t^"):
                e = int(ts[2:])
            else:
                raise ValueError(f"bad term {part!r}")
            terms[e] = terms.get(e, 0) + sign * c
    return Series.from_terms(p, terms, prec)
