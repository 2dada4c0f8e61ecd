"""Exact dense linear algebra over the series field F_p((t)).

Matrices are lists of rows of :class:`Series`.  Elimination always picks
the remaining entry of smallest certified valuation as pivot (ties: lowest
row, then column), which keeps precision loss minimal and the result
deterministic.  A pivot whose valuation cannot be certified raises
:class:`PrecisionExhausted`.
"""

from __future__ import annotations

from .errors import PrecisionExhausted
from .series import INF, Series


def identity(p, size):
    one, zero = Series.one(p), Series.zero(p)
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def mat_vec(m, vec):
    out = []
    for row in m:
        acc = None
        for a, x in zip(row, vec):
            term = a * x
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def mat_mul(a, b):
    cols = list(zip(*b))
    return [[_dot(row, col) for col in cols] for row in a]


def _dot(row, col):
    acc = None
    for a, x in zip(row, col):
        term = a * x
        acc = term if acc is None else acc + term
    return acc


def _pick_pivot(rows, cols, m, col_only=None):
    """Smallest certified valuation among m[r][c]; PrecisionExhausted when an
    uncertified entry could beat the best certified one."""
    best = None
    uncertified_floor = None
    for r in rows:
        for c in (cols if col_only is None else [col_only]):
            v, ok = m[r][c].val_bound()
            if v is INF:
                continue
            if ok:
                if best is None or v < best[0]:
                    best = (v, r, c)
            else:
                if uncertified_floor is None or v < uncertified_floor:
                    uncertified_floor = v
    if best is None:
        if uncertified_floor is not None:
            raise PrecisionExhausted("no certifiable pivot")
        return None
    if uncertified_floor is not None and uncertified_floor <= best[0]:
        raise PrecisionExhausted("pivot valuation not certified")
    return best


def solve(a, b, prec=None):
    """Solve a*x = b for square a; b is a matrix (list of rows).

    ``prec`` caps the precision used when inverting exact non-monomial
    pivots (unneeded when entries already carry finite precision).
    """
    n = len(a)
    m = [row[:] for row in a]
    rhs = [row[:] for row in b]
    perm = list(range(n))
    piv_invs = [None] * n
    for k in range(n):
        got = _pick_pivot(range(k, n), range(k, n), m)
        if got is None:
            raise ValueError("singular matrix")
        _, pr, pc = got
        if pr != k:
            m[k], m[pr] = m[pr], m[k]
            rhs[k], rhs[pr] = rhs[pr], rhs[k]
        if pc != k:
            for row in m:
                row[k], row[pc] = row[pc], row[k]
            perm[k], perm[pc] = perm[pc], perm[k]
        piv = m[k][k]
        if piv.prec is INF and len(piv.coeffs) > 1 and prec is not None:
            piv = piv.truncate(prec)
        piv_invs[k] = piv.inv(prec)
        for r in range(n):
            if r == k:
                continue
            factor = m[r][k]
            if factor.is_zero and factor.prec is INF:
                continue
            q = factor * piv_invs[k]
            for c in range(k, n):
                m[r][c] = m[r][c] - q * m[k][c]
            for c in range(len(rhs[k])):
                rhs[r][c] = rhs[r][c] - q * rhs[k][c]
        # NB: m[k][k] is final from here on (later steps touch columns > k
        # of row k only), so rescaling can wait until extraction.
    out = [None] * n
    for k in range(n):
        out[perm[k]] = [x * piv_invs[k] for x in rhs[k]]
    return out


def solve_vec(a, vec, prec=None):
    sol = solve(a, [[x] for x in vec], prec)
    return [row[0] for row in sol]


def inverse(a, prec=None):
    return solve(a, identity(a[0][0].p, len(a)), prec)


def det(a, prec=None):
    """Determinant via valuation-pivoted elimination (sign tracked)."""
    n = len(a)
    p = a[0][0].p
    m = [row[:] for row in a]
    result = Series.one(p)
    swaps = 0
    for k in range(n):
        got = _pick_pivot(range(k, n), range(k, n), m)
        if got is None:
            # remaining block certified zero only if some entry is exact zero
            for r in range(k, n):
                for c in range(k, n):
                    if not m[r][c].is_exact_zero:
                        raise PrecisionExhausted("det: uncertified zero block")
            return Series.zero(p)
        _, pr, pc = got
        if pr != k:
            m[k], m[pr] = m[pr], m[k]
            swaps += 1
        if pc != k:
            for row in m:
                row[k], row[pc] = row[pc], row[k]
            swaps += 1
        piv = m[k][k]
        result = result * piv
        if k == n - 1:
            break
        if piv.prec is INF and len(piv.coeffs) > 1 and prec is not None:
            piv = piv.truncate(prec)
        piv_inv = piv.inv(prec)
        for r in range(k + 1, n):
            factor = m[r][k]
            if factor.is_zero and factor.prec is INF:
                continue
            q = factor * piv_inv
            for c in range(k + 1, n):
                m[r][c] = m[r][c] - q * m[k][c]
    if swaps % 2:
        result = result.scal(p - 1)
    return result


def det_val(a, prec=None):
    """Valuation of the determinant: sum of pivot valuations."""
    n = len(a)
    m = [row[:] for row in a]
    total = 0
    for k in range(n):
        got = _pick_pivot(range(k, n), range(k, n), m)
        if got is None:
            raise PrecisionExhausted("det_val of a numerically singular matrix")
        v, pr, pc = got
        total += v
        if pr != k:
            m[k], m[pr] = m[pr], m[k]
        if pc != k:
            for row in m:
                row[k], row[pc] = row[pc], row[k]
        if k == n - 1:
            break
        piv = m[k][k]
        if piv.prec is INF and len(piv.coeffs) > 1 and prec is not None:
            piv = piv.truncate(prec)
        piv_inv = piv.inv(prec)
        for r in range(k + 1, n):
            factor = m[r][k]
            if factor.is_zero and factor.prec is INF:
                continue
            q = factor * piv_inv
            for c in range(k + 1, n):
                m[r][c] = m[r][c] - q * m[k][c]
    return total
