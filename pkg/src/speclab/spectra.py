"""Candidate spectra and completeness diagnostics.

Three instruments, all driven by the truncated Fourier product:

* the level matrices F_n = [ |mu_{>n}^(lambda)| e^{-2 pi i <b, lambda>} ] /
  sqrt(M_n) and their minimum "singular value", here the minimum eigenvalue
  of F* F (squared classical singular values; this convention is used
  throughout, including reports);
* the completeness functional Q(xi) = sum_lambda |mu^(xi + lambda)|^2, which
  equals 1 identically exactly when the frequency set is a spectrum;
* the transfer operator Rf(xi) = sum_l |m_B(tau_l xi)|^2 f(tau_l xi), whose
  fixed points include Q.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cycles import ExtremeCycle, dynamically_simple_spectrum
from .errors import SizeCap
from .linalg import mat_pow, rat_apply
from .measures import (ConvolutionSystem, DEFAULT_POLICY, TruncationPolicy,
                       ft_eval_many, ft_tail_eval_many)
from .triples import HadamardTriple, mask_eval_many, tau_float_many

FN_SIZE_CAP = 4096


# -- spectrum generators ------------------------------------------------------


class SpectrumGenerator:
    """Level-indexed producer of finite integer frequency sets.

    level(n) returns an (m, d) integer array; levels are nested for the
    level-set and cycle-spectrum kinds, and 0 is always in level(0).
    """

    dim: int

    def level(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class LevelSetsGenerator(SpectrumGenerator):
    """Lambda_n = L_1 + R_1^T L_2 + ... for the system's own triples."""

    def __init__(self, sys: ConvolutionSystem):
        self.sys = sys
        self.dim = sys.dim

    def level(self, n: int) -> np.ndarray:
        return np.array(lambda_n(self.sys, max(n, 1)), dtype=float)

    def describe(self) -> dict:
        return {"kind": "level_sets"}


class CycleSpectrumGenerator(SpectrumGenerator):
    """Spectrum generated by extreme cycles, by digit-layer level."""

    def __init__(self, t: HadamardTriple, cycles: Sequence[ExtremeCycle]):
        self.triple = t
        self.cycles = tuple(cycles)
        self.dim = t.dim

    def level(self, n: int) -> np.ndarray:
        pts = dynamically_simple_spectrum(self.triple, self.cycles, n)
        return np.array(pts, dtype=float)

    def describe(self) -> dict:
        return {"kind": "cycle_spectrum",
                "cycles": [c.to_dict() for c in self.cycles]}


class LatticeGenerator(SpectrumGenerator):
    """Points G m for integer m with ||m||_inf <= level."""

    def __init__(self, basis):
        b = np.atleast_2d(np.asarray(basis, dtype=float))
        if b.shape[0] != b.shape[1]:
            raise ValueError("lattice basis must be square")
        self.basis = b
        self.dim = b.shape[0]

    def level(self, n: int) -> np.ndarray:
        rng = np.arange(-n, n + 1)
        coords = np.array(list(itertools.product(rng, repeat=self.dim)),
                          dtype=float)
        return coords @ self.basis.T

    def describe(self) -> dict:
        return {"kind": "lattice", "basis": self.basis.tolist()}


class ExplicitGenerator(SpectrumGenerator):
    """A fixed finite frequency set, identical at every level."""

    def __init__(self, points):
        p = np.asarray(points, dtype=float)
        if p.ndim == 0:
            p = p.reshape(1, 1)
        elif p.ndim == 1:
            p = p.reshape(-1, 1)
        self.points = p
        self.dim = p.shape[1]

    def level(self, n: int) -> np.ndarray:
        return self.points

    def describe(self) -> dict:
        return {"kind": "explicit", "count": len(self.points)}


class ProductGenerator(SpectrumGenerator):
    """Cartesian product of two generators (block coordinates)."""

    def __init__(self, first: SpectrumGenerator, second: SpectrumGenerator):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim

    def level(self, n: int) -> np.ndarray:
        a = self.first.level(n)
        b = self.second.level(n)
        out = np.zeros((len(a) * len(b), self.dim))
        out[:, :self.first.dim] = np.repeat(a, len(b), axis=0)
        out[:, self.first.dim:] = np.tile(b, (len(a), 1))
        return out

    def describe(self) -> dict:
        return {"kind": "product", "first": self.first.describe(),
                "second": self.second.describe()}


# -- level frequency sets -----------------------------------------------------


def _level_cumulative_rt(sys: ConvolutionSystem, n: int):
    """P_k = R_1^T ... R_{k-1}^T (exact integer matrices), k = 1..n."""
    mats = [None] * n
    cur = mat_pow(sys.triples[0].R, 0)  # identity of the right dimension
    for k in range(1, n + 1):
        mats[k - 1] = cur
        t = sys.triple_at(k)
        if t is not None and k < n:
            cur = cur @ t.R.transpose()
    return mats


def level_words(sys: ConvolutionSystem, n: int) -> list[tuple[int, ...]]:
    """Digit index words in lexicographic order (first level outermost)."""
    sizes = []
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        sizes.append(1 if t is None else len(t.B))
    return list(itertools.product(*(range(s) for s in sizes)))


def lambda_word_values(sys: ConvolutionSystem, n: int) -> list[tuple[int, ...]]:
    """Lambda_n elements in digit-word order (with any collisions kept)."""
    mats = _level_cumulative_rt(sys, n)
    per_level = []
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        ls = ((0,) * sys.dim,) if t is None else t.L.vectors
        per_level.append([mats[k - 1].apply(l) for l in ls])
    vals = [(0,) * sys.dim]
    for opts in per_level:
        vals = [tuple(v[i] + o[i] for i in range(sys.dim))
                for v in vals for o in opts]
    return vals


def lambda_n(sys: ConvolutionSystem, n: int) -> list[tuple[int, ...]]:
    """Level-n frequency set, deduplicated and sorted.

    A collision (fewer distinct sums than digit words) breaks the bijective
    indexing the completeness criterion relies on, so it is reported as a
    warning.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    vals = lambda_word_values(sys, n)
    out = sorted(set(vals))
    if len(out) != len(vals):
        warnings.warn(f"Lambda_{n} has collisions ({len(vals)} words, "
                      f"{len(out)} distinct sums); orthogonality counting breaks",
                      stacklevel=2)
    return out


# -- the level matrices F_n ---------------------------------------------------


@dataclass
class FnMatrix:
    """Level matrix with its spectrum, orderings recorded for reproducibility."""

    n: int
    matrix: np.ndarray
    sigma_min: float
    sigmas: np.ndarray            # eigenvalues of F* F, ascending
    lambdas: list[tuple[int, ...]]   # row order (digit-word order)
    b_points: list[tuple[Fraction, ...]]  # column order (digit-word order)
    tail_moduli: np.ndarray       # |mu_{>n}^(lambda)| per row
    tail_bounds: np.ndarray
    collisions: bool

    @property
    def min_tail_modulus(self) -> float:
        return float(self.tail_moduli.min())


def _b_word_values(sys: ConvolutionSystem, n: int) -> list[tuple[Fraction, ...]]:
    cum = sys.cumulative_inverse_exact(n)
    per_level = []
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        if t is None:
            per_level.append([(Fraction(0),) * sys.dim])
        else:
            per_level.append([rat_apply(cum[k - 1], [Fraction(x) for x in b])
                              for b in t.B.vectors])
    vals = [(Fraction(0),) * sys.dim]
    for opts in per_level:
        vals = [tuple(v[i] + o[i] for i in range(sys.dim))
                for v in vals for o in opts]
    return vals


def build_fn(sys: ConvolutionSystem, n: int,
             pol: TruncationPolicy = DEFAULT_POLICY,
             cap: int = FN_SIZE_CAP) -> FnMatrix:
    """Assemble F_n and its eigenvalue spectrum.

    Phases <b, lambda> are accumulated from exact per-level rational dot
    products reduced mod 1, so the unitary part is bit-reproducible and free
    of argument-reduction error.
    """
    lambdas = lambda_word_values(sys, n)
    m_n = len(lambdas)
    if m_n > cap:
        raise SizeCap(f"M_n = {m_n} exceeds cap {cap}")
    collisions = len(set(lambdas)) != m_n
    if collisions:
        warnings.warn(f"Lambda_{n} collisions: criterion is inconclusive",
                      stacklevel=2)
    b_points = _b_word_values(sys, n)

    lam_arr = np.array(lambdas, dtype=float)
    tail_vals, tail_bounds = ft_tail_eval_many(sys, n, lam_arr, pol)
    moduli = np.abs(tail_vals)

    # per-level phase tables: frac(<(R_k...R_1)^{-1} b, lambda>) exactly
    cum = sys.cumulative_inverse_exact(n)
    phase = np.zeros((1, m_n))
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        if t is None:
            continue
        tbl = np.empty((len(t.B), m_n))
        for j, b in enumerate(t.B.vectors):
            scaled = rat_apply(cum[k - 1], [Fraction(x) for x in b])
            for i, lam in enumerate(lambdas):
                dot = sum(scaled[a] * lam[a] for a in range(sys.dim))
                tbl[j, i] = float(dot - math.floor(dot))
        phase = (phase[:, None, :] + tbl[None, :, :]).reshape(-1, m_n)
    # phase[w, i] = <b_w, lambda_i> mod 1; rows of F are indexed by lambda
    f = (moduli[:, None] * np.exp(-2j * np.pi * phase.T)) / math.sqrt(m_n)
    gram = f.conj().T @ f
    sigmas = np.linalg.eigvalsh(gram)
    return FnMatrix(n=n, matrix=f, sigma_min=float(max(sigmas[0], 0.0)),
                    sigmas=sigmas, lambdas=lambdas, b_points=b_points,
                    tail_moduli=moduli, tail_bounds=tail_bounds,
                    collisions=collisions)


def strichartz_report(sys: ConvolutionSystem, n_max: int,
                      pol: TruncationPolicy = DEFAULT_POLICY,
                      cap: int = FN_SIZE_CAP) -> dict:
    """Per-level sigma_min and tail-modulus floors up to n_max.

    Finite-level evidence only: a positive floor up to n_max says nothing
    about the infimum over all n, and the verdict string is worded
    accordingly.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    inconclusive = False
    for n in range(1, n_max + 1):
        fn = build_fn(sys, n, pol, cap)
        inconclusive = inconclusive or fn.collisions
        rows.append({"n": n, "sigma_min": fn.sigma_min,
                     "min_tail_modulus": fn.min_tail_modulus})
    floor_sigma = min(r["sigma_min"] for r in rows)
    floor_tail = min(r["min_tail_modulus"] for r in rows)
    if inconclusive:
        verdict = "inconclusive: level sets have collisions"
    else:
        verdict = (f"criterion holds up to n_max={n_max} with floor "
                   f"sigma_min={floor_sigma:.6g}, tail={floor_tail:.6g} "
                   "(no claim about the infimum over all n)")
    return {"levels": rows, "floor_sigma_min": floor_sigma,
            "floor_min_tail_modulus": floor_tail, "verdict": verdict}


def tail_factor_scan(sys: ConvolutionSystem, n_max: int, depth: int = 20) -> float:
    """min over levels n <= n_max, lambda in Lambda_n, and offsets j <= depth
    of the single-factor modulus |m_{B_{n+j}}((R_{n+j}...R_1)^{-T} lambda)|."""
    best = 1.0
    for n in range(1, n_max + 1):
        lam = np.array(lambda_n(sys, n), dtype=float)
        eta = lam.copy()
        mats = sys._inv_t_mats(n + depth)
        for k in range(1, n + depth + 1):
            eta = eta @ mats[k - 1].T
            if k <= n:
                continue
            t = sys.triple_at(k)
            if t is None:
                continue
            m = np.abs(mask_eval_many(t.B, eta))
            best = min(best, float(m.min()))
    return best


# -- completeness functional --------------------------------------------------


@dataclass(frozen=True)
class QValue:
    q: float
    terms: int
    q_bound: float


def qp_eval(sys: ConvolutionSystem, gen: SpectrumGenerator, xi,
            window: int = 8,
            pol: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Windowed completeness sum Q(xi) = sum |mu^(xi + lambda)|^2.

    Monotone nondecreasing in the window; the bound accumulates the
    per-term truncation slack 2|v|b + b^2.
    """
    lam = gen.level(window)
    x = np.asarray(xi, dtype=float).reshape(-1)
    pts = lam + x[None, :]
    vals, bounds = ft_eval_many(sys, pts, pol)
    q = float((np.abs(vals) ** 2).sum())
    slack = float((2 * np.abs(vals) * bounds + bounds ** 2).sum())
    return QValue(q, len(lam), slack)


def _q_grid(sys: ConvolutionSystem, gen: SpectrumGenerator, grid: np.ndarray,
            window: int, pol: TruncationPolicy) -> tuple[np.ndarray, np.ndarray, int]:
    """Q over a grid in one batched transform call."""
    lam = gen.level(window)
    pts = grid[:, None, :] + lam[None, :, :]
    vals, bounds = ft_eval_many(sys, pts.reshape(-1, sys.dim), pol)
    vals = vals.reshape(len(grid), len(lam))
    bounds = bounds.reshape(len(grid), len(lam))
    q = (np.abs(vals) ** 2).sum(axis=1)
    slack = (2 * np.abs(vals) * bounds + bounds ** 2).sum(axis=1)
    return q, slack, len(lam)


def uniform_grid(count: int, dim: int) -> np.ndarray:
    """count points per axis in [0, 1)^dim."""
    axes = [np.arange(count) / count for _ in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass
class QPoint:
    xi: tuple[float, ...]
    q: float
    terms: int
    q_bound: float


@dataclass
class AnalysisReport:
    """Result of a grid sweep with every knob echoed for reproducibility."""

    kind: str
    params: dict
    rows: list = field(default_factory=list)
    min_q: float = math.nan
    max_q: float = math.nan
    passed: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params,
                "min_q": self.min_q, "max_q": self.max_q,
                "passed": self.passed, "notes": self.notes,
                "rows": [{"xi": list(r.xi), "q": r.q, "terms": r.terms,
                          "q_bound": r.q_bound} for r in self.rows]}

    def csv_rows(self) -> list[str]:
        dim = len(self.rows[0].xi) if self.rows else 1
        header = ",".join(f"xi_{i}" for i in range(dim)) + ",Q,terms,tail_bound"
        lines = [header]
        for r in self.rows:
            xi = ",".join(repr(x) for x in r.xi)
            lines.append(f"{xi},{r.q!r},{r.terms},{r.q_bound!r}")
        return lines


def check_spectrum(sys: ConvolutionSystem, gen: SpectrumGenerator, grid,
                   window: int = 8, eps_complete: float = 0.01,
                   eps_orth: float = 1e-4,
                   pol: TruncationPolicy = DEFAULT_POLICY) -> AnalysisReport:
    """Grid sweep of Q with pass/fail thresholds.

    Pass means min Q >= 1 - eps_complete and max Q <= 1 + eps_orth. The
    thresholds are parameters because the achievable floor depends on the
    window; the report echoes everything needed to rerun it.
    """
    if isinstance(grid, (int, np.integer)):
        grid = uniform_grid(int(grid), sys.dim)
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[1] != sys.dim:
        grid = grid.reshape(-1, sys.dim)
    q, slack, terms = _q_grid(sys, gen, grid, window, pol)
    rows = [QPoint(tuple(map(float, grid[i])), float(q[i]), terms, float(slack[i]))
            for i in range(len(grid))]
    report = AnalysisReport(
        kind="spectrum_check",
        params={"generator": gen.describe(), "window": window,
                "eps_complete": eps_complete, "eps_orth": eps_orth,
                "grid_points": len(grid),
                "policy": {"depth": pol.depth, "target_error": pol.target_error,
                           "max_depth": pol.max_depth}},
        rows=rows,
        min_q=float(q.min()), max_q=float(q.max()),
        passed=bool(q.min() >= 1 - eps_complete and q.max() <= 1 + eps_orth))
    return report


def orthogonality_check(sys: ConvolutionSystem, gen: SpectrumGenerator,
                        window: int, max_pairs: int = 200_000,
                        pol: TruncationPolicy = DEFAULT_POLICY,
                        seed: int = 0) -> float:
    """max |mu^(lambda - lambda')| over distinct pairs in the window.

    Exhaustive when the pair count fits under max_pairs, otherwise a seeded
    sample of pairs.
    """
    lam = gen.level(window)
    n = len(lam)
    if n < 2:
        return 0.0
    total = n * (n - 1) // 2
    if total <= max_pairs:
        idx = np.triu_indices(n, k=1)
        diffs = lam[idx[0]] - lam[idx[1]]
    else:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, n, size=max_pairs)
        j = rng.integers(0, n, size=max_pairs)
        keep = i != j
        diffs = lam[i[keep]] - lam[j[keep]]
    diffs = np.unique(diffs, axis=0)
    vals, _ = ft_eval_many(sys, diffs, pol)
    return float(np.abs(vals).max())


# -- transfer operator --------------------------------------------------------


def transfer_apply(t: HadamardTriple, f: Callable[[np.ndarray], np.ndarray],
                   grid) -> np.ndarray:
    """Pointwise R f(xi) = sum_l |m_B(tau_l xi)|^2 f(tau_l xi) on a grid.

    f is an evaluator over (m, d) arrays, not a table of samples, so no
    interpolation error enters fixed-point tests.
    """
    pts = np.atleast_2d(np.asarray(grid, dtype=float))
    if pts.shape[1] != t.dim:
        pts = pts.reshape(-1, t.dim)
    out = np.zeros(len(pts))
    for ell in t.L.vectors:
        moved = tau_float_many(t.R, ell, pts)
        w = np.abs(mask_eval_many(t.B, moved)) ** 2
        out += w * np.asarray(f(moved), dtype=float)
    return out


def make_q_evaluator(sys: ConvolutionSystem, gen: SpectrumGenerator,
                     window: int = 8,
                     pol: TruncationPolicy = DEFAULT_POLICY) -> Callable:
    """Vectorized xi -> Q(xi) closure for transfer-operator experiments."""

    def evaluator(pts: np.ndarray) -> np.ndarray:
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts2.shape[1] != sys.dim:
            pts2 = pts2.reshape(-1, sys.dim)
        q, _, _ = _q_grid(sys, gen, pts2, window, pol)
        return q

    return evaluator
