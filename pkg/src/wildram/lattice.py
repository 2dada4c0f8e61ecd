"""Smith-style reduction and lattices over the valuation ring of F_p((t)).

The engine is deliberately simple: pivot on the entry of smallest
certified valuation (ties broken by lowest row, then column), clear its
row and column with quotients that are integral by construction, and
normalize the pivot to a plain power of t.  Every transformation applied
is elementary with unit determinant, so U and V stay unimodular over the
valuation ring by construction; the scale factors used are checked to be
units as they are applied.

``solve_congruence_lattice`` turns valuation constraints
``v(row_s(T c)) >= e_s`` into a lattice: scale row s by t^(-e_s), reduce
T' = U S V, and read the solution lattice off as V^(-1) diag(t^(-d_i)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import ConsistencyError, PrecisionExhausted
from .series import INF, Series


def smith(m_in, prec=None):
    """Smith reduction M = U * S * V over the valuation ring.

    Returns (U, divisors, V, Vinv): divisors[i] is the valuation d_i of
    the i-th diagonal entry t^(d_i) of S (``None`` for a zero diagonal,
    possible only when the certified rank is deficient).  The pivoting
    rule makes the divisors ascending.  U is rows x rows, V and Vinv are
    cols x cols; all three are unimodular by construction.
    """
    rows = len(m_in)
    cols = len(m_in[0]) if rows else 0
    p = m_in[0][0].p
    m = [row[:] for row in m_in]
    u = linalg.identity(p, rows)      # accumulates U via U <- U * E^-1
    v = linalg.identity(p, cols)      # accumulates V via V <- F^-1 * V
    vinv = linalg.identity(p, cols)   # accumulates V^-1 via Vinv <- Vinv * F
    r = min(rows, cols)
    divisors: list = []
    for k in range(r):
        got = linalg._pick_pivot(range(k, rows), range(k, cols), m)
        if got is None:
            divisors.extend([None] * (r - k))
            break
        val, pr, pc = got
        if pr != k:  # row swap; self-inverse
            m[k], m[pr] = m[pr], m[k]
            for row in u:
                row[k], row[pr] = row[pr], row[k]
        if pc != k:  # column swap; self-inverse
            for row in m:
                row[k], row[pc] = row[pc], row[k]
            v[k], v[pc] = v[pc], v[k]
            for row in vinv:
                row[k], row[pc] = row[pc], row[k]
        piv = m[k][k]
        if piv.prec is INF and len(piv.coeffs) > 1 and prec is not None:
            piv = piv.truncate(prec)
        unit = piv.shift(-val)
        if unit.val() != 0:
            raise ConsistencyError("pivot unit extraction failed")
        unit_inv = unit.inv(prec)
        # scale row k of m by unit_inv (pivot becomes t^val, plus noise
        # beyond precision); U picks up the inverse as a column scaling
        for c in range(k, cols):
            m[k][c] = m[k][c] * unit_inv
        for rr in range(rows):
            u[rr][k] = u[rr][k] * unit
        tneg = Series.monomial(p, -val)
        for rr in range(rows):
            if rr == k:
                continue
            f = m[rr][k]
            if f.is_zero and f.prec is INF:
                continue
            q = f * tneg  # integral by pivot minimality
            for c in range(k, cols):
                m[rr][c] = m[rr][c] - q * m[k][c]
            for rr2 in range(rows):  # U <- U * (I + q e_{rr,k})
                u[rr2][k] = u[rr2][k] + q * u[rr2][rr]
        for cc in range(cols):
            if cc == k:
                continue
            f = m[k][cc]
            if f.is_zero and f.prec is INF:
                continue
            q = f * tneg
            for rr2 in range(rows):
                m[rr2][cc] = m[rr2][cc] - m[rr2][k] * q
            for c2 in range(cols):   # V <- (I + q e_{k,cc}) * V
                v[k][c2] = v[k][c2] + q * v[cc][c2]
            for rr2 in range(cols):  # Vinv <- Vinv * (I - q e_{k,cc})
                vinv[rr2][cc] = vinv[rr2][cc] - vinv[rr2][k] * q
        m[k][k] = Series.monomial(p, val)
        divisors.append(val)
    return u, divisors, v, vinv


def smith_matrix(p, rows, cols, divisors):
    """The diagonal matrix S of t^divisors with the given shape."""
    s = [[Series.zero(p) for _ in range(cols)] for _ in range(rows)]
    for i, d in enumerate(divisors):
        if d is not None:
            s[i][i] = Series.monomial(p, d)
    return s


@dataclass
class Lattice:
    """A full-rank O_k-lattice in k^rank, given by basis columns."""

    p: int
    rank: int
    basis: list  # list of columns, each a list of Series
    divisors: list = field(default_factory=list)
    prec: int | None = None

    def basis_matrix(self):
        return [[self.basis[c][r] for c in range(self.rank)]
                for r in range(self.rank)]

    def contains(self, vec) -> bool:
        """Solve basis * y = vec and check y is integral (certified)."""
        y = linalg.solve_vec(self.basis_matrix(), list(vec), prec=self.prec)
        ok = True
        for c in y:
            val, certain = c.val_bound()
            if val is INF or val >= 0:
                continue
            if not certain:
                raise PrecisionExhausted("membership not certified")
            ok = False
        return ok

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(col) for col in other.basis)

    def same_lattice(self, other: "Lattice") -> bool:
        return (self.divisors == other.divisors
                and self.contains_lattice(other)
                and other.contains_lattice(self))


def lattice_from_columns(cols, prec=None) -> Lattice:
    """Lattice spanned by the given (independent) columns over O_k."""
    p = cols[0][0].p
    rank = len(cols)
    mat = [[cols[c][r] for c in range(rank)] for r in range(len(cols[0]))]
    _, divisors, _, _ = smith(mat, prec=prec)
    if any(d is None for d in divisors):
        raise ValueError("columns are not independent at this precision")
    return Lattice(p=p, rank=rank, basis=[list(c) for c in cols],
                   divisors=sorted(divisors), prec=prec)


def solve_congruence_lattice(t_mat, exponents, prec=None) -> Lattice:
    """All c with v(row_s(T c)) >= exponents[s], as a Lattice.

    T must have full column rank; raises ValueError otherwise.
    """
    cols = len(t_mat[0])
    p = t_mat[0][0].p
    scaled = [[entry.shift(-e) for entry in row]
              for row, e in zip(t_mat, exponents)]
    _, divisors, _, vinv = smith(scaled, prec=prec)
    if len(divisors) < cols or any(d is None for d in divisors):
        raise ValueError("constraint matrix is rank deficient")
    basis = []
    for i in range(cols):
        col = [vinv[r][i].shift(-divisors[i]) for r in range(cols)]
        basis.append(col)
    return Lattice(p=p, rank=cols, basis=basis,
                   divisors=sorted(-d for d in divisors), prec=prec)
