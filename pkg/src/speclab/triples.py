"""Hadamard triples, masks, dual maps, and the invariant ball.

A triple (R, B, L) couples an expansive integer matrix with a digit set B
and frequency set L of equal size; it is verified by checking that the
N x N matrix H = [exp(2 pi i <R^{-1} b, l>)] / sqrt(N) is unitary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotContractive, VerificationFailed
from .linalg import (IntMatrix, as_int_matrix, as_int_vector, as_rat_vector,
                     contraction_factor, inv_transpose_norm_series,
                     is_expansive, rat_apply, rat_inverse, RatVector)

DEFAULT_TOL = 1e-9


def _as_vector_set(vs, name: str) -> tuple[tuple[int, ...], ...]:
    vecs = [as_int_vector(v) for v in vs]
    if not vecs:
        raise ValueError(f"{name} must be nonempty")
    d = len(vecs[0])
    if any(len(v) != d for v in vecs):
        raise ValueError(f"{name} vectors have mixed dimensions")
    if len(set(vecs)) != len(vecs):
        raise ValueError(f"{name} contains duplicates")
    if (0,) * d not in set(vecs):
        raise ValueError(f"{name} must contain the zero vector")
    return tuple(vecs)


@dataclass(frozen=True)
class DigitSet:
    """Finite set of integer digit vectors containing 0."""

    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, vs) -> "DigitSet":
        return cls(_as_vector_set(vs, "digit set"))

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def __len__(self) -> int:
        return len(self.vectors)

    def as_numpy(self) -> np.ndarray:
        return np.array(self.vectors, dtype=float)

    @property
    def max_norm(self) -> float:
        return float(np.linalg.norm(self.as_numpy(), axis=1).max())


@dataclass(frozen=True)
class FrequencySet:
    """Finite set of integer frequency vectors containing 0."""

    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, vs) -> "FrequencySet":
        return cls(_as_vector_set(vs, "frequency set"))

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def __len__(self) -> int:
        return len(self.vectors)

    def as_numpy(self) -> np.ndarray:
        return np.array(self.vectors, dtype=float)


@dataclass
class HadamardTriple:
    """(R, B, L) with verification state attached.

    `status` is one of "unverified", "verified", "failed"; `residual` holds
    the max-entry residual of H*H - I from the last verification.
    """

    R: IntMatrix
    B: DigitSet
    L: FrequencySet
    status: str = "unverified"
    residual: float | None = None

    def __post_init__(self):
        if self.B.dim != self.R.dim or self.L.dim != self.R.dim:
            raise DimensionMismatch("digit/frequency dimension != matrix dimension")
        if not is_expansive(self.R):
            raise ValueError("R is not expansive")

    @property
    def dim(self) -> int:
        return self.R.dim

    @property
    def size(self) -> int:
        return len(self.B)

    def require_verified(self, tol: float = DEFAULT_TOL) -> None:
        if self.status == "unverified":
            verify_hadamard(self, tol)
        if self.status != "verified":
            raise VerificationFailed(
                f"triple failed unitarity check (residual {self.residual:.3g})")


def triple(r, digits, freqs, tol: float = DEFAULT_TOL,
           require: bool = True) -> HadamardTriple:
    """Build and verify a Hadamard triple from loose inputs."""
    t = HadamardTriple(as_int_matrix(r), DigitSet.of(digits), FrequencySet.of(freqs))
    res = verify_hadamard(t, tol)
    if require and not res.passed:
        raise VerificationFailed(
            f"not a Hadamard triple: residual {res.residual:.3g} > {tol:g}")
    return t


@dataclass(frozen=True)
class VerifyResult:
    passed: bool
    residual: float


def hadamard_matrix(t: HadamardTriple) -> np.ndarray:
    """The candidate unitary H, rows indexed by L and columns by B."""
    rinv = np.linalg.inv(t.R.as_numpy())
    b = t.B.as_numpy() @ rinv.T          # R^{-1} b as rows
    l = t.L.as_numpy()
    n = len(t.B)
    return np.exp(2j * np.pi * (l @ b.T)) / np.sqrt(n)


def verify_hadamard(t: HadamardTriple, tol: float = DEFAULT_TOL) -> VerifyResult:
    """Check H*H = I in double precision and record the result on t.

    Genuine triples sit at machine-epsilon residuals while failures are at
    least of order 1/N, so a numerical check at tol=1e-9 is decisive.
    """
    if len(t.B) != len(t.L):
        raise DimensionMismatch(f"#B={len(t.B)} != #L={len(t.L)}")
    h = hadamard_matrix(t)
    resid = float(np.abs(h.conj().T @ h - np.eye(len(t.B))).max())
    t.residual = resid
    t.status = "verified" if resid <= tol else "failed"
    return VerifyResult(resid <= tol, resid)


def mask_eval(digits: DigitSet | Iterable, xi) -> complex:
    """m_B(xi) = mean of exp(2 pi i <b, xi>) over the digit set."""
    b = digits if isinstance(digits, DigitSet) else DigitSet.of(digits)
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    return complex(np.exp(2j * np.pi * (b.as_numpy() @ x)).mean())


def mask_eval_many(digits: DigitSet, xs: np.ndarray) -> np.ndarray:
    """Vectorized m_B over points of shape (..., d)."""
    return np.exp(2j * np.pi * (xs @ digits.as_numpy().T)).mean(axis=-1)


def mask_is_extreme_at(digits: DigitSet | Iterable, x) -> bool:
    """Exact test for |m_B(x)| = 1 at a rational point.

    With 0 in B this is equivalent to <b, x> being an integer for every
    digit b, which is decidable over Fractions.
    """
    b = digits if isinstance(digits, DigitSet) else DigitSet.of(digits)
    xv = as_rat_vector(x, b.dim)
    for vec in b.vectors:
        s = sum(Fraction(vec[i]) * xv[i] for i in range(b.dim))
        if s.denominator != 1:
            return False
    return True


def tau_exact(r, ell, x) -> RatVector:
    """Exact dual map (R^T)^{-1}(x + ell) over rationals."""
    rm = as_int_matrix(r)
    lv = as_int_vector(ell, rm.dim)
    xv = as_rat_vector(x, rm.dim)
    inv_t = rat_inverse(rm.transpose())
    return rat_apply(inv_t, tuple(xv[i] + lv[i] for i in range(rm.dim)))


def tau_float_many(r, ell, xs: np.ndarray) -> np.ndarray:
    """Dual map applied to an array of points (float path for sweeps)."""
    rm = as_int_matrix(r)
    inv_t = np.linalg.inv(rm.as_numpy().T)
    lv = np.asarray(as_int_vector(ell, rm.dim), dtype=float)
    return (xs + lv) @ inv_t.T


def invariant_ball_radius(r, freqs: FrequencySet | Iterable,
                          margin: float = 1e-6) -> float:
    """Radius r with tau_l(B_r) inside B_r for every l in L.

    With M = max_l |(R^T)^{-1} l| and c = ||(R^T)^{-1}||_2 < 1, any
    r >= M/(1-c) works: |tau_l(x)| <= c|x| + M. The returned radius carries
    a small relative margin so the containment is strict; it also bounds
    every cycle point, since a cycle point is sum_j (R^T)^{-j} l_j over its
    (rotated, repeated) word.
    """
    rm = as_int_matrix(r)
    fs = freqs if isinstance(freqs, FrequencySet) else FrequencySet.of(freqs)
    inv_t = np.linalg.inv(rm.as_numpy().T)
    m = float(np.linalg.norm(fs.as_numpy() @ inv_t.T, axis=1).max())
    c = contraction_factor(rm)  # NotContractive propagates to the caller
    return m / (1.0 - c) * (1.0 + margin)


def cycle_containment_radius(r, freqs: FrequencySet | Iterable,
                             margin: float = 1e-6) -> float:
    """Radius certified to contain every cycle point of the dual maps.

    Falls back to a k-step norm series when (R^T)^{-1} is not a one-step
    contraction; in that regime no one-step invariant Euclidean ball need
    exist, but cycle points are still bounded by
    max|l| * sum_j ||(R^T)^{-j}||.
    """
    fs = freqs if isinstance(freqs, FrequencySet) else FrequencySet.of(freqs)
    try:
        return invariant_ball_radius(r, fs, margin)
    except NotContractive:
        rm = as_int_matrix(r)
        series = inv_transpose_norm_series(rm)
        lmax = float(np.linalg.norm(fs.as_numpy(), axis=1).max())
        return lmax * series * (1.0 + margin)


def parseval_defect(t: HadamardTriple, xi) -> float:
    """|1 - sum_l |m_B(tau_l xi)|^2|; zero for a genuine triple."""
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    total = 0.0
    for ell in t.L.vectors:
        y = tau_float_many(t.R, ell, x[None, :])[0]
        total += abs(mask_eval(t.B, y)) ** 2
    return abs(1.0 - total)
