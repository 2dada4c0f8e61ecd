"""The biquadratic-style wild tower K = k(x1, x2') over k = F_p((t)).

Construction.  K1 = k(x1) with x1^p - x1 = t^(-h1) is the first degree-p
step (ramification jump h1).  The second generator starts from
x2^p - x2 = t^(-h2); that right-hand side has valuation divisible by p in
K1, so it is reduced: subtracting p-th-power-minus-itself corrections
g_m = c*pi1^(v/p) strips leading terms until the valuation -w of the
remainder f_red is prime to p (w = p*h2 - (p-1)*h1).  The reduced
generator x2' = x2 - sum(g_m) then satisfies x2'^p - x2' = f_red, and K
is presented on the monomial basis x1^i * x2'^j (i, j < p) with the two
rewrite rules

    x1^p  = x1  + t^(-h1)
    x2'^p = x2' + f_red           (f_red a polynomial in x1 over k).

Galois action.  sigma2 fixes K1 and sends x2' to x2' + 1; sigma1 sends
x1 to x1 + 1 and x2' to x2' + (g - sigma1(g)) where g = sum(g_m) -- x2
itself is sigma1-invariant, so the correction terms carry the action.

Uniformizers are pinned monomials: pi1 = x1^a1 * t^b1 with
h1*a1 = -1 (mod p) and -h1*a1 + p*b1 = 1; pi is built the same way from
x2' and pi1, then rescaled by the scalar making residue(pi^n / t) = 1
(that normalization makes the principal-part scaling law
p_{i+n}(t*f) = p_i(f) exact).

Everything a tower hands out is immutable after construction; all caches
only grow monotonically, so concurrent use is safe.
"""

from __future__ import annotations

from . import linalg
from .cyclic import _binomial_rows
from .errors import ConsistencyError, PrecisionExhausted
from .series import INF, Series, inv_mod

GroupElem = tuple[int, int]


def group_elements(p: int) -> list[GroupElem]:
    """All of (Z/p)^2, identity first, ordered (a, b) lexicographically."""
    return [(a, b) for a in range(p) for b in range(p)]


def g_mul(p: int, g: GroupElem, h: GroupElem) -> GroupElem:
    return ((g[0] + h[0]) % p, (g[1] + h[1]) % p)


def g_inv(p: int, g: GroupElem) -> GroupElem:
    return ((-g[0]) % p, (-g[1]) % p)


def g_name(g: GroupElem) -> str:
    a, b = g
    parts = []
    if a:
        parts.append("s1" if a == 1 else f"s1^{a}")
    if b:
        parts.append("s2" if b == 1 else f"s2^{b}")
    return "*".join(parts) if parts else "e"


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def _min_certified(pairs):
    """Exact minimum of (value, certified) pairs, or PrecisionExhausted when
    an uncertified bound could undercut the best certified value."""
    best = None
    floor = None
    for v, ok in pairs:
        if v is INF:
            continue
        if ok:
            if best is None or v < best:
                best = v
        else:
            if floor is None or v < floor:
                floor = v
    if best is None:
        if floor is None:
            return INF
        raise PrecisionExhausted("minimum valuation not certified")
    if floor is not None and floor <= best:
        raise PrecisionExhausted("minimum valuation not certified")
    return best


class ASStep:
    """One Artin-Schreier step K1 = k(y), y^p - y = t^(-h), p not dividing h.

    Elements are length-p tuples of Series on the basis y^i.  This little
    field does its own valuation (through the pi1-power basis), residue
    (by scanning F_p) and Galois action (y -> y+1); the reduction loop
    that normalizes second-step right-hand sides lives here too.
    """

    def __init__(self, p: int, h: int, prec: int):
        if h <= 0 or h % p == 0:
            raise ValueError("jump must be positive and prime to p")
        self.p = p
        self.h = h
        self.prec = prec
        self.rhs = Series.monomial(p, -h)  # t^(-h) = y^p - y
        # pinned uniformizer y^a1 * t^b1 of valuation 1
        self.a1 = (-inv_mod(h, p)) % p
        self.b1 = (1 + h * self.a1) // p
        self._pows: dict[int, tuple] = {0: self.one()}
        self._pows[1] = self.monomial(self.a1, Series.monomial(p, self.b1))
        cols = [self.pi_pow(u) for u in range(p)]
        self.P = [[cols[u][i] for u in range(p)] for i in range(p)]
        self.Pinv = linalg.inverse(self.P, prec=prec)
        self.depth = (p - 1) * h
        self.c_pi = self.trace(self.pi_pow(-self.depth))

    # elements -------------------------------------------------------------

    def zero_vec(self):
        return tuple(Series.zero(self.p) for _ in range(self.p))

    def one(self):
        return self.monomial(0, Series.one(self.p))

    def monomial(self, i: int, c: Series):
        return tuple(c if j == i else Series.zero(self.p)
                     for j in range(self.p))

    def from_base(self, s: Series):
        return self.monomial(0, s)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        p = self.p
        acc = [Series.zero(p) for _ in range(2 * p - 1)]
        for i, ai in enumerate(a):
            if ai.is_exact_zero:
                continue
            for j, bj in enumerate(b):
                if bj.is_exact_zero:
                    continue
                acc[i + j] = acc[i + j] + ai * bj
        # y^p = y + t^(-h); degrees < 2p-1 need a single pass
        for i in range(2 * p - 2, p - 1, -1):
            c = acc[i]
            if c.is_exact_zero:
                continue
            acc[i - p + 1] = acc[i - p + 1] + c
            acc[i - p] = acc[i - p] + c * self.rhs
            acc[i] = Series.zero(p)
        return tuple(acc[:p])

    def pow(self, a, k: int):
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            if k > 1:
                base = self.mul(base, base)
            k >>= 1
        return result

    def pi_pow(self, m: int):
        if m not in self._pows:
            if m > 0:
                self._pows[m] = self.mul(self.pi_pow(m - 1), self._pows[1])
            else:
                if -1 not in self._pows:
                    mat = self.mult_matrix(self._pows[1])
                    e0 = [Series.one(self.p)] + \
                        [Series.zero(self.p)] * (self.p - 1)
                    self._pows[-1] = tuple(
                        linalg.solve_vec(mat, e0, prec=self.prec))
                self._pows[m] = self.mul(self.pi_pow(m + 1), self._pows[-1])
        return self._pows[m]

    def mult_matrix(self, a):
        cols = [a]
        y = self.monomial(1, Series.one(self.p))
        for _ in range(1, self.p):
            cols.append(self.mul(cols[-1], y))
        return [[cols[v][u] for v in range(self.p)] for u in range(self.p)]

    # valuation / residue ----------------------------------------------------

    def pi_coords(self, a):
        return linalg.mat_vec(self.Pinv, list(a))

    def val_bounds(self, a):
        coords = self.pi_coords(a)
        out = []
        for u, c in enumerate(coords):
            v, ok = c.val_bound()
            out.append((INF if v is INF else self.p * v + u, ok))
        return out

    def val(self, a):
        return _min_certified(self.val_bounds(a))

    def val_at_least(self, a, bound: int) -> bool:
        return all(v is INF or v >= bound for v, _ in self.val_bounds(a))

    def residue(self, a):
        """The c in F_p with val(a - c) > 0; requires val(a) >= 0."""
        if not self.val_at_least(a, 0):
            raise ValueError("residue needs an integral element")
        for c in range(self.p):
            if self.val_at_least(self.sub(a, self.from_base(
                    Series.monomial(self.p, 0, c))), 1):
                return c
        raise PrecisionExhausted("residue not determined")

    def sigma(self, a):
        """The generator of Gal(K1/k): y -> y + 1."""
        p = self.p
        rows = _binomial_rows(p, p)
        out = [Series.zero(p) for _ in range(p)]
        for j, c in enumerate(a):
            if c.is_exact_zero:
                continue
            for i in range(j + 1):
                out[i] = out[i] + c.scal(rows[j][i])
        return tuple(out)

    def trace(self, a):
        acc = a
        cur = a
        for _ in range(self.p - 1):
            cur = self.sigma(cur)
            acc = self.add(acc, cur)
        return acc[0]  # remaining coords are zero for a trace

    def as_reduce(self, f):
        """Normalize an AS right-hand side: subtract g^p - g corrections
        until the valuation is prime to p.  Returns (f_red, corrections).

        Requires val(f) < 0; raises if reduction ever leaves the wild
        range (val >= 0), which means f defines an unramified step.
        """
        corrections = []
        cur = f
        while True:
            v = self.val(cur)
            if v is INF or v >= 0:
                raise ValueError(
                    "right-hand side reduces to valuation >= 0: "
                    "no wildly ramified step")
            if v % self.p:
                return cur, corrections
            c = self.residue(self.mul(cur, self.pi_pow(-v)))
            if c == 0:
                raise ConsistencyError("leading residue vanished")
            g_m = tuple(x.scal(c) for x in self.pi_pow(v // self.p))
            gp = tuple(x.scal(c) for x in self.pi_pow(v))  # g_m^p, c^p = c
            cur = self.add(self.sub(cur, gp), g_m)
            corrections.append(g_m)


class KElem:
    """An element of K on the monomial basis x1^i * x2'^j (index i + p*j)."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = tuple(coords)

    def _like(self, other):
        if isinstance(other, KElem):
            if other.tower is not self.tower:
                raise ValueError("elements of different towers")
            return other
        if isinstance(other, int):
            return self.tower.from_base(Series.monomial(self.tower.p, 0, other))
        if isinstance(other, Series):
            return self.tower.from_base(other)
        return NotImplemented

    def __add__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return NotImplemented
        return KElem(self.tower,
                     (a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return KElem(self.tower, (-a for a in self.coords))

    def __sub__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return NotImplemented
        return self.tower.mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            if k > 1:
                base = base * base
            k >>= 1
        return result

    def scal(self, c: int):
        return KElem(self.tower, (a.scal(c) for a in self.coords))

    def scale(self, s: Series):
        return KElem(self.tower, (a * s for a in self.coords))

    @property
    def is_scalar(self):
        """True when the element lies in the base field k."""
        return all(c.is_exact_zero for c in self.coords[1:])

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coords)

    def agrees(self, other) -> bool:
        other = self._like(other)
        return all((a - b).is_zero
                   for a, b in zip(self.coords, other.coords))

    def val(self):
        return self.tower.val(self)

    def inv(self):
        return self.tower.elem_inv(self)

    def galois(self, g: GroupElem):
        return self.tower.galois_apply(g, self)

    def __repr__(self):
        parts = []
        p = self.tower.p
        for u, c in enumerate(self.coords):
            if not c.is_zero:
                i, j = u % p, u // p
                mono = "*".join([s for s in
                                 (f"x1^{i}" if i else "", f"x2^{j}" if j else "")
                                 if s]) or "1"
                parts.append(f"({c})*{mono}")
        return " + ".join(parts) if parts else "0"


class FieldTower:
    """K/k with all its cached structure; see the module docstring."""

    def __init__(self, p: int, h1: int, h2: int, prec: int = 64,
                 subfield_m: int | None = None, _pi_shift: int = 0):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if not (0 < h1 < h2):
            raise ValueError("need 0 < h1 < h2")
        if h1 % p == 0 or h2 % p == 0:
            raise ValueError(
                "jumps divisible by p are impossible for wild degree-p steps")
        self.p = p
        self.h1 = h1
        self.h2 = h2
        self.n = p * p
        self.prec = prec
        self.w_hat = p * h2 - (p - 1) * h1
        self.subfield_m = subfield_m
        self.k1 = ASStep(p, h1, prec)

        fred, corrections = self.k1.as_reduce(
            self.k1.from_base(Series.monomial(p, -h2)))
        if self.k1.val(fred) != -self.w_hat:
            raise ConsistencyError(
                f"reduced valuation {self.k1.val(fred)} != -{self.w_hat}")
        self.fred = fred  # x1-polynomial: tuple of p Series
        g = self.k1.zero_vec()
        for g_m in corrections:
            g = self.k1.add(g, g_m)
        self.g_corr = g
        self.delta1 = self.k1.sub(g, self.k1.sigma(g))  # sigma1(x2')-x2'

        self._build_galois()
        self._build_uniformizer(_pi_shift)
        self._build_ramification()
        self._pib_gal: dict = {}
        self._tensor_cache: dict = {}

    # construction helpers ---------------------------------------------------

    def _build_galois(self):
        p, n = self.p, self.n
        x1 = self.x1()
        x2 = self.x2()
        one = self.one()
        s1_images = self._monomial_images(x1 + one, x2 + self.embed_k1(self.delta1))
        s2_images = self._monomial_images(x1, x2 + one)
        m1 = [[s1_images[v].coords[u] for v in range(n)] for u in range(n)]
        m2 = [[s2_images[v].coords[u] for v in range(n)] for u in range(n)]
        mats = {}
        pow1 = [linalg.identity(p, n)]
        pow2 = [linalg.identity(p, n)]
        for _ in range(p - 1):
            pow1.append(linalg.mat_mul(pow1[-1], m1))
            pow2.append(linalg.mat_mul(pow2[-1], m2))
        for a in range(p):
            for b in range(p):
                if a == 0:
                    mats[(a, b)] = pow2[b]
                elif b == 0:
                    mats[(a, b)] = m1 if a == 1 else pow1[a]
                else:
                    mats[(a, b)] = linalg.mat_mul(pow1[a], pow2[b])
        self.gal_mats = mats
        # order p and commutation, exactly (up to stored precision)
        ident = linalg.identity(p, n)
        if not (self._mats_agree(linalg.mat_mul(pow1[-1], m1), ident)
                and self._mats_agree(linalg.mat_mul(pow2[-1], m2), ident)):
            raise ConsistencyError("galois generator does not have order p")
        if not self._mats_agree(linalg.mat_mul(m1, m2),
                                linalg.mat_mul(m2, m1)):
            raise ConsistencyError("galois generators do not commute")

    @staticmethod
    def _mats_agree(a, b):
        return all((x - y).is_zero for ra, rb in zip(a, b)
                   for x, y in zip(ra, rb))

    def _monomial_images(self, im_x1: "KElem", im_x2: "KElem"):
        p = self.p
        images = [self.one()] * self.n
        for i in range(1, p):
            images[i] = images[i - 1] * im_x1
        for j in range(1, p):
            base = images[p * (j - 1)] * im_x2
            images[p * j] = base
            for i in range(1, p):
                images[i + p * j] = images[i + p * (j - 1)] * im_x2
        return images

    def _build_uniformizer(self, pi_shift: int):
        p, n = self.p, self.n
        a2 = (-inv_mod(self.w_hat, p)) % p + pi_shift * p
        b2 = (1 + self.w_hat * a2) // p
        self.pi_pair = (a2, b2)
        pi = (self.x2() ** a2) * self.embed_k1(self.k1.pi_pow(b2))
        self._set_pi(pi)
        r_omega = self._residue_omega()
        if r_omega != 1:
            self._set_pi(pi.scal(inv_mod(r_omega, p)))
            if self._residue_omega() != 1:
                raise ConsistencyError("uniformizer normalization failed")
        self.r_omega = 1

    def _set_pi(self, pi: "KElem"):
        n = self.n
        self.pi = pi
        self._pi_pows = {0: self.one(), 1: pi}
        cols = [self.pi_pow(u) for u in range(n)]
        self.P = [[cols[v].coords[u] for v in range(n)] for u in range(n)]
        self.Pinv = linalg.inverse(self.P, prec=self.prec)
        if self.val(pi) != 1:
            raise ConsistencyError("pi does not have valuation 1")
        if self.val(self.x1()) != -self.p * self.h1:
            raise ConsistencyError("v(x1) wrong")
        if self.val(self.x2()) != -self.w_hat:
            raise ConsistencyError("v(x2') wrong")

    def _residue_omega(self) -> int:
        omega = self.pi_pow(self.n).scale(Series.monomial(self.p, -1))
        coords = self.pi_coords(omega)
        c0 = coords[0]
        if c0.is_zero or c0.val() != 0:
            raise ConsistencyError("pi^n/t is not a unit")
        return c0.lead_coeff()

    def _build_ramification(self):
        p, n = self.p, self.n
        jumps = {}
        for g in group_elements(p):
            if g == (0, 0):
                continue
            diff = self.galois_apply(g, self.pi) - self.pi
            jumps[g] = self.val(diff) - 1
        expected = {g: (self.h1 if g[0] else self.w_hat) for g in jumps}
        if jumps != expected:
            raise ConsistencyError(f"jump pattern {jumps} != {expected}")
        self.jumps = jumps
        self.different = sum(j + 1 for j in jumps.values())
        self.d = self.different - n + 1
        if self.d != (p - 1) * (p * self.h2 + self.h1):
            raise ConsistencyError("ramification depth mismatch")
        self.c_pi = self.trace_K(self.pi_pow(-self.d))
        if self.c_pi.is_zero or self.c_pi.val() != 0:
            raise ConsistencyError("Tr(pi^-d) is not a unit")
        self.rc_pi = self.c_pi.lead_coeff()

    # element constructors ---------------------------------------------------

    def zero(self):
        return KElem(self, (Series.zero(self.p),) * self.n)

    def one(self):
        return self.from_base(Series.one(self.p))

    def from_base(self, s: Series):
        coords = [Series.zero(self.p)] * self.n
        coords[0] = s
        return KElem(self, coords)

    def x1(self):
        coords = [Series.zero(self.p)] * self.n
        coords[1] = Series.one(self.p)
        return KElem(self, coords)

    def x2(self):
        """The reduced second generator x2'."""
        coords = [Series.zero(self.p)] * self.n
        coords[self.p] = Series.one(self.p)
        return KElem(self, coords)

    def embed_k1(self, vec):
        coords = [Series.zero(self.p)] * self.n
        for i, c in enumerate(vec):
            coords[i] = c
        return KElem(self, coords)

    def from_coords(self, coords):
        return KElem(self, coords)

    # multiplication -----------------------------------------------------

    def mul(self, a: "KElem", b: "KElem") -> "KElem":
        p = self.p
        if b.is_scalar:
            a, b = b, a
        if a.is_scalar:
            s = a.coords[0]
            return KElem(self, (c * s for c in b.coords))
        acc: dict[tuple[int, int], Series] = {}

        def bump(i, j, s):
            key = (i, j)
            cur = acc.get(key)
            acc[key] = s if cur is None else cur + s

        for u, au in enumerate(a.coords):
            if au.is_exact_zero:
                continue
            i1, j1 = u % p, u // p
            for v, bv in enumerate(b.coords):
                if bv.is_exact_zero:
                    continue
                bump(i1 + v % p, j1 + v // p, au * bv)
        # reduce x2-degree: x2^p = x2 + f_red
        for j in range(2 * p - 2, p - 1, -1):
            for i in range(2 * p - 1):
                c = acc.pop((i, j), None)
                if c is None or c.is_exact_zero:
                    continue
                bump(i, j - p + 1, c)
                for m, fm in enumerate(self.fred):
                    if not fm.is_exact_zero:
                        bump(i + m, j - p, fm * c)
        # reduce x1-degree: x1^p = x1 + t^(-h1)
        th1 = Series.monomial(p, -self.h1)
        top = max((i for (i, _) in acc), default=0)
        while top >= p:
            for i in range(top, p - 1, -1):
                for j in range(p):
                    c = acc.pop((i, j), None)
                    if c is None or c.is_exact_zero:
                        continue
                    bump(i - p + 1, j, c)
                    bump(i - p, j, c * th1)
            top = max((i for (i, _) in acc), default=0)
        coords = [Series.zero(p)] * self.n
        for (i, j), c in acc.items():
            coords[i + p * j] = c
        return KElem(self, coords)

    def mult_matrix(self, a: "KElem"):
        cols = [a * self.basis_elem(v) for v in range(self.n)]
        return [[cols[v].coords[u] for v in range(self.n)]
                for u in range(self.n)]

    def basis_elem(self, u: int):
        coords = [Series.zero(self.p)] * self.n
        coords[u] = Series.one(self.p)
        return KElem(self, coords)

    def elem_inv(self, a: "KElem") -> "KElem":
        e0 = [Series.one(self.p)] + [Series.zero(self.p)] * (self.n - 1)
        return KElem(self, linalg.solve_vec(self.mult_matrix(a), e0,
                                            prec=self.prec))

    # pi powers / coordinates ---------------------------------------------

    def pi_pow(self, m: int) -> "KElem":
        pows = self._pi_pows
        if m not in pows:
            if m > 0:
                k = max(x for x in pows if 0 < x <= m)
                cur = pows[k]
                while k < m:
                    cur = cur * pows[1]
                    k += 1
                    pows[k] = cur
            else:
                if -1 not in pows:
                    pows[-1] = self.elem_inv(pows[1])
                k = min(x for x in pows if x < 0)
                if m < k:
                    cur = pows[k]
                    while k > m:
                        cur = cur * pows[-1]
                        k -= 1
                        pows[k] = cur
        return pows[m]

    def pi_coords(self, a: "KElem"):
        """Coordinates over k on the basis pi^0 .. pi^(n-1)."""
        return linalg.mat_vec(self.Pinv, list(a.coords))

    def elem_from_pi_coords(self, coords, shift: int = 0) -> "KElem":
        out = self.zero()
        for u, c in enumerate(coords):
            if not (c.is_zero and c.prec is INF):
                out = out + self.pi_pow(u + shift).scale(c)
        return out

    # valuation, trace, norm, residue --------------------------------------

    def _val_bounds(self, a: "KElem"):
        out = []
        for u, c in enumerate(self.pi_coords(a)):
            v, ok = c.val_bound()
            out.append((INF if v is INF else self.n * v + u, ok))
        return out

    def val(self, a: "KElem"):
        """Fast valuation through the pi-power basis."""
        return _min_certified(self._val_bounds(a))

    def val_at_least(self, a: "KElem", bound: int) -> bool:
        return all(v is INF or v >= bound for v, _ in self._val_bounds(a))

    def valuation_K(self, a: "KElem"):
        """Valuation computed two independent ways; they must agree.

        Primary: v_k(Norm(a)) as the valuation of the determinant of the
        multiplication matrix.  Cross-check: the minimum of
        n*v_k(coord_u) + u over the pi-power coordinates.
        """
        v_basis = self.val(a)
        if v_basis is INF:
            raise ValueError("valuation of zero")
        v_norm = linalg.det_val(self.mult_matrix(a), prec=self.prec)
        if v_norm != v_basis:
            raise ConsistencyError(
                f"norm valuation {v_norm} != basis valuation {v_basis}")
        return v_norm

    def trace_K(self, a: "KElem") -> Series:
        m = self.mult_matrix(a)
        acc = m[0][0]
        for u in range(1, self.n):
            acc = acc + m[u][u]
        return acc

    def norm_K(self, a: "KElem") -> Series:
        return linalg.det(self.mult_matrix(a), prec=self.prec)

    def galois_apply(self, g: GroupElem, a: "KElem") -> "KElem":
        g = (g[0] % self.p, g[1] % self.p)
        if g == (0, 0):
            return a
        return KElem(self, linalg.mat_vec(self.gal_mats[g], list(a.coords)))

    def galois_sum_trace(self, a: "KElem") -> Series:
        """Trace as the sum over the Galois group (independent route)."""
        acc = self.zero()
        for g in group_elements(self.p):
            acc = acc + self.galois_apply(g, a)
        coords = acc.coords
        if any(not c.is_zero for c in coords[1:]):
            raise ConsistencyError("galois sum not in the base field")
        return coords[0]

    def residue(self, a: "KElem") -> int:
        """Residue of an integral element: r(Tr(a * pi^-d)) / r(c_pi)."""
        if not self.val_at_least(a, 0):
            raise ValueError("residue needs v(a) >= 0")
        tr = self.trace_K(a * self.pi_pow(-self.d))
        num = tr.coeff(0)
        return (num * inv_mod(self.rc_pi, self.p)) % self.p

    def residue_fast(self, a: "KElem") -> int:
        """Residue through pi-coordinates (cheap route used by hot paths)."""
        return self.residue_at_shift(self.pi_coords(a), 0)

    def residue_at_shift(self, pib, shift: int) -> int:
        """Residue of (sum_u pib[u] * pi^u) * pi^shift.

        Only the coordinate u = -shift mod n can contribute; since
        residue(pi^n / t) = 1 by normalization, the answer is just the
        t^q coefficient of that coordinate, q = -(u + shift)/n.  Raises
        if the element is not certified integral.
        """
        n = self.n
        u0 = (-shift) % n
        result = 0
        for u, c in enumerate(pib):
            v, ok = c.val_bound()
            if v is INF:
                continue
            total = n * v + u + shift
            if not ok:
                if total <= 0:
                    raise PrecisionExhausted("residue not certified")
                continue
            if total < 0:
                raise ValueError("residue of a non-integral element")
            if u == u0:
                q = -(u + shift) // n
                result = c.coeff(q)
        return result % self.p

    # rebasing -------------------------------------------------------------

    def tame_rebase(self, e: int) -> "FieldTower":
        """Base change t = s^e, p not dividing e: the lifted tower over
        F_p((s)) with the old base marked as the subfield of support e."""
        if e <= 0 or e % self.p == 0:
            raise ValueError("tame degree must be positive and prime to p")
        return FieldTower(self.p, e * self.h1, e * self.h2, prec=self.prec,
                          subfield_m=e)

    def insep_rebase(self, m: int) -> "FieldTower":
        """Designate k0 = F_p((t^m)) (m a power of p) by support marking."""
        q = m
        while q % self.p == 0:
            q //= self.p
        if q != 1 or m <= 1:
            raise ValueError("m must be a positive power of p")
        import copy
        other = copy.copy(self)
        other.subfield_m = m
        return other

    @staticmethod
    def in_subfield(s: Series, m: int) -> bool:
        """True iff every certified coefficient exponent is divisible by m."""
        return all(e % m == 0 for e in s.support())

    # cached galois action on pi powers, in pi-coordinates -----------------

    def gal_pi_coords(self, g: GroupElem, m: int):
        key = (g[0] % self.p, g[1] % self.p, m)
        cached = self._pib_gal.get(key)
        if cached is None:
            img = self.galois_apply((key[0], key[1]), self.pi_pow(m))
            cached = tuple(self.pi_coords(img))
            self._pib_gal[key] = cached
        return cached

    # serialization ---------------------------------------------------------

    def serialize(self) -> dict:
        return {
            "p": self.p, "h1": self.h1, "h2": self.h2, "prec": self.prec,
            "n": self.n, "w_hat": self.w_hat, "depth": self.d,
            "different": self.different,
            "pi1_pair": [self.k1.a1, self.k1.b1],
            "pi_pair": list(self.pi_pair),
            "f_red": [str(c) for c in self.fred],
            "subfield_m": self.subfield_m,
        }


def build_tower(p: int, h1: int, h2: int, prec: int = 64,
                subfield_m: int | None = None) -> FieldTower:
    return FieldTower(p, h1, h2, prec=prec, subfield_m=subfield_m)
