"""Exact integer/rational linear algebra.

Everything that feeds a certificate (determinants, expansivity, residue
classes, cycle fixed points) runs over Python integers and
``fractions.Fraction``; floating point only appears in ``contraction_factor``,
which is a norm estimate rather than a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotContractive, SingularMatrix

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix, row-major."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = len(self.rows)
        if d == 0 or any(len(r) != d for r in self.rows):
            raise ValueError("matrix must be square and nonempty")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def as_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def as_fractions(self) -> RatMatrix:
        return tuple(tuple(Fraction(x) for x in r) for r in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        a, b = self.rows, other.rows
        d = len(a)
        return IntMatrix(tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d))
            for i in range(d)))

    def apply(self, v: Sequence[int]) -> IntVector:
        return tuple(sum(r[j] * v[j] for j in range(len(r))) for r in self.rows)


def as_int_matrix(m) -> IntMatrix:
    """Coerce an int, nested sequence, or numpy array to IntMatrix."""
    if isinstance(m, IntMatrix):
        return m
    if isinstance(m, (int, np.integer)):
        return IntMatrix(((int(m),),))
    arr = np.asarray(m)
    if arr.ndim == 0:
        return IntMatrix(((int(arr),),))
    if arr.ndim == 1 and arr.size == 1:
        return IntMatrix(((int(arr[0]),),))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"not a square matrix: shape {arr.shape}")
    if not np.all(arr == np.round(arr)):
        raise ValueError("matrix entries must be integers")
    return IntMatrix(tuple(tuple(int(x) for x in row) for row in arr))


def as_int_vector(v, dim: int | None = None) -> IntVector:
    """Coerce a scalar or sequence to an integer tuple."""
    if isinstance(v, (int, np.integer)):
        out = (int(v),)
    else:
        out = tuple(int(x) for x in np.atleast_1d(np.asarray(v)))
    if dim is not None and len(out) != dim:
        raise ValueError(f"expected a {dim}-vector, got {out}")
    return out


def as_rat_vector(v, dim: int | None = None) -> RatVector:
    if isinstance(v, (int, Fraction)):
        out = (Fraction(v),)
    else:
        out = tuple(Fraction(x) for x in v)
    if dim is not None and len(out) != dim:
        raise ValueError(f"expected a {dim}-vector, got {out}")
    return out


def identity(d: int) -> IntMatrix:
    return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(d))
                           for i in range(d)))


def mat_pow(m: IntMatrix, k: int) -> IntMatrix:
    out = identity(m.dim)
    for _ in range(k):
        out = out @ m
    return out


def det(m) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    m = as_int_matrix(m)
    a = [list(r) for r in m.rows]
    d = m.dim
    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            for i in range(k + 1, d):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[d - 1][d - 1]


def charpoly(m: IntMatrix) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_d) of det(xI - M), c_d = 1, exact."""
    d = m.dim
    a = m.as_fractions()
    # Faddeev-LeVerrier over rationals; result is integral.
    coeffs = [Fraction(1)] + [Fraction(0)] * d  # c_d first, filled backwards
    mk = tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))
    ident = tuple(tuple(Fraction(1 if i == j else 0) for j in range(d))
                  for i in range(d))

    def matmul(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(d))
                           for j in range(d)) for i in range(d))

    def madd(x, y, s):
        return tuple(tuple(x[i][j] + s * y[i][j] for j in range(d))
                     for i in range(d))

    cur = ident
    c = Fraction(1)
    for k in range(1, d + 1):
        mk = matmul(a, cur)
        tr = sum(mk[i][i] for i in range(d))
        c = -tr / k
        coeffs[k] = c
        cur = madd(mk, ident, c)
    # coeffs[k] multiplies x^(d-k); reorder to ascending powers
    out = [coeffs[d - i] for i in range(d + 1)]
    assert all(x.denominator == 1 for x in out)
    return tuple(int(x) for x in out)


def _roots_strictly_inside_unit_disk(coeffs: Sequence[int]) -> bool:
    """Exact Schur-Cohn test: all roots of sum c_i z^i in the open unit disk.

    Ties (|c_0| == |c_n| at any stage) count as failure, so roots on the
    circle are rejected.
    """
    c = [Fraction(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    while len(c) > 1:
        n = len(c) - 1
        c0, cn = c[0], c[-1]
        if abs(c0) >= abs(cn):
            return False
        # One Schur reduction step; new leading coefficient is cn^2 - c0^2 > 0.
        c = [cn * c[i + 1] - c0 * c[n - 1 - i] for i in range(n)]
    return True


def is_expansive(m) -> bool:
    """True iff every eigenvalue of M has modulus strictly greater than 1.

    Decided exactly: the reversed characteristic polynomial must have all
    roots strictly inside the unit disk (Schur-Cohn over integers).
    """
    m = as_int_matrix(m)
    p = charpoly(m)  # ascending powers, monic
    if p[0] == 0:  # zero eigenvalue
        return False
    reversed_p = tuple(reversed(p))
    return _roots_strictly_inside_unit_disk(reversed_p)


def rat_solve(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> RatVector:
    """Exact solution of a x = v by Gaussian elimination over Fractions."""
    d = len(v)
    m = [[Fraction(a[i][j]) for j in range(d)] + [Fraction(v[i])]
         for i in range(d)]
    for k in range(d):
        piv = next((i for i in range(k, d) if m[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        pk = m[k][k]
        for i in range(d):
            if i != k and m[i][k] != 0:
                f = m[i][k] / pk
                for j in range(k, d + 1):
                    m[i][j] -= f * m[k][j]
    return tuple(m[i][d] / m[i][i] for i in range(d))


def solve_exact(a, v) -> RatVector:
    """Exact rational solve; raises SingularMatrix when det a = 0."""
    if isinstance(a, IntMatrix):
        rows = a.as_fractions()
    elif isinstance(a, (int, Fraction)):
        rows = ((Fraction(a),),)
    else:
        rows = tuple(tuple(Fraction(x) for x in row) for row in a)
    v = as_rat_vector(v, len(rows))
    return rat_solve(rows, v)


def rat_inverse(m: IntMatrix) -> RatMatrix:
    """Exact inverse of an integer matrix as a Fraction matrix."""
    d = m.dim
    a = m.as_fractions()
    cols = []
    for j in range(d):
        e = tuple(Fraction(1 if i == j else 0) for i in range(d))
        cols.append(rat_solve(a, e))
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def rat_matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    d = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(d))
                       for j in range(d)) for i in range(d))


def rat_apply(a: RatMatrix, v: Sequence[Fraction]) -> RatVector:
    return tuple(sum(row[j] * Fraction(v[j]) for j in range(len(row)))
                 for row in a)


def residue_classes_distinct(r, digits: Iterable) -> bool:
    """True iff no two digits are congruent modulo R Z^d (exact)."""
    r = as_int_matrix(r)
    if det(r) == 0:
        raise SingularMatrix("scaling matrix is singular")
    inv = rat_inverse(r)
    ds = [as_int_vector(b, r.dim) for b in digits]
    for i in range(len(ds)):
        for j in range(i):
            diff = tuple(Fraction(ds[i][k] - ds[j][k]) for k in range(r.dim))
            x = rat_apply(inv, diff)
            if all(q.denominator == 1 for q in x):
                return False
    return True


def is_complete_residue_set(r, digits: Iterable) -> bool:
    """True iff the digits form a complete residue system for R."""
    r = as_int_matrix(r)
    ds = list(digits)
    return len(ds) == abs(det(r)) and residue_classes_distinct(r, ds)


def contraction_factor(r) -> float:
    """Operator 2-norm of (R^T)^{-1} (largest singular value).

    Raises NotContractive when the norm is >= 1 even though R may be
    expansive; callers then fall back to `multi_step_contraction`.
    """
    r = as_int_matrix(r)
    if det(r) == 0:
        raise SingularMatrix("matrix is singular")
    inv_t = np.linalg.inv(r.as_numpy().T)
    c = float(np.linalg.norm(inv_t, 2))
    if c >= 1.0:
        raise NotContractive(
            f"||(R^T)^-1||_2 = {c:.6g} >= 1; use multi_step_contraction")
    return c


def multi_step_contraction(r, max_steps: int = 32) -> tuple[int, float]:
    """Smallest k <= max_steps with ||(R^T)^{-k}||_2 < 1, and that norm.

    Exists for every expansive R since the spectral radius of (R^T)^{-1}
    is < 1.
    """
    r = as_int_matrix(r)
    if det(r) == 0:
        raise SingularMatrix("matrix is singular")
    inv_t = np.linalg.inv(r.as_numpy().T)
    power = np.eye(r.dim)
    for k in range(1, max_steps + 1):
        power = power @ inv_t
        c = float(np.linalg.norm(power, 2))
        if c < 1.0:
            return k, c
    raise NotContractive(
        f"no contracting power of (R^T)^-1 within {max_steps} steps")


def inv_transpose_norm_series(r, rel_margin: float = 1e-9) -> float:
    """Upper bound on sum_{j>=1} ||(R^T)^{-j}||_2.

    Used for invariant-ball radii and truncation-error bounds when the
    one-step norm is not < 1: block the series by the first contracting
    power k and bound sum_{j} n_j / (1 - c_k), n_j = ||(R^T)^{-j}||.
    """
    r = as_int_matrix(r)
    try:
        c = contraction_factor(r)
        return c / (1.0 - c) * (1.0 + rel_margin)
    except NotContractive:
        k, ck = multi_step_contraction(r)
        inv_t = np.linalg.inv(r.as_numpy().T)
        power = np.eye(r.dim)
        block = 0.0
        for _ in range(k):
            power = power @ inv_t
            block += float(np.linalg.norm(power, 2))
        return block / (1.0 - ck) * (1.0 + rel_margin)
