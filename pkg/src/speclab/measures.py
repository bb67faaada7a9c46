"""Infinite convolution measures and their Fourier transforms.

The measure mu = delta_{R_1^{-1}B_1} * delta_{(R_2 R_1)^{-1}B_2} * ... is
represented by the level sequence of Hadamard triples that generate it.
Fourier values are truncated products with a certified tail bound: with
c bounding the per-level contraction of the inverse transposes,
|m_B(eta) - 1| <= 2 pi max|b| |eta| and |eta_k| <= c^k |xi| give

    |mu^(xi) - prod_{k<=K}| <= |prod_{k<=K}| * (exp(sum_{k>K} eps_k) - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotContractive
from .linalg import (contraction_factor, multi_step_contraction, rat_inverse,
                     rat_matmul)
from .triples import HadamardTriple

DEFAULT_TARGET = 1e-10
DEFAULT_MAX_DEPTH = 200


@dataclass(frozen=True)
class TruncationPolicy:
    """Either a fixed product depth or a target tail error with a cap."""

    depth: int | None = None
    target_error: float = DEFAULT_TARGET
    max_depth: int = DEFAULT_MAX_DEPTH


DEFAULT_POLICY = TruncationPolicy()


@dataclass
class ConvolutionSystem:
    """Level sequence of verified Hadamard triples defining one measure.

    kind: "self_affine" | "periodic" | "random_word" | "general"
    tail: "repeat_last" | "finite" (what happens beyond the explicit data)
    """

    kind: str
    triples: tuple[HadamardTriple, ...]
    word: tuple[int, ...] | None = None
    tail: str = "repeat_last"
    _caches: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("self_affine", "periodic", "random_word", "general"):
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.tail not in ("repeat_last", "finite"):
            raise ValueError(f"unknown tail convention {self.tail!r}")
        if not self.triples:
            raise ValueError("need at least one triple")
        for t in self.triples:
            t.require_verified()
        d = self.triples[0].dim
        if any(t.dim != d for t in self.triples):
            raise ValueError("triples have mixed dimensions")
        if self.kind in ("periodic", "random_word"):
            if not self.word:
                raise ValueError(f"{self.kind} system needs a digit word")
            if any(not 0 <= w < len(self.triples) for w in self.word):
                raise ValueError("word digits out of range")
        if self.kind == "random_word":
            r0, l0, m0 = self.triples[0].R, self.triples[0].L, len(self.triples[0].B)
            for t in self.triples[1:]:
                if t.R != r0 or t.L != l0 or len(t.B) != m0:
                    raise ValueError(
                        "random-word triples must share R, L, and digit count")
        if self.kind == "self_affine" and len(self.triples) != 1:
            raise ValueError("self-affine system takes exactly one triple")

    # -- level structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return self.triples[0].dim

    @property
    def explicit_length(self) -> int:
        if self.kind == "self_affine":
            return 1
        if self.kind in ("periodic", "random_word"):
            return len(self.word)
        return len(self.triples)

    @property
    def finite_length(self) -> int | None:
        """Total level count for finite-tail systems, else None."""
        if self.tail == "finite" and self.kind in ("random_word", "general"):
            return self.explicit_length
        return None

    def triple_at(self, k: int) -> HadamardTriple | None:
        """Triple generating level k >= 1; None past a finite tail."""
        if k < 1:
            raise ValueError("levels are 1-indexed")
        if self.kind == "self_affine":
            return self.triples[0]
        if self.kind == "periodic":
            return self.triples[self.word[(k - 1) % len(self.word)]]
        if self.kind == "random_word":
            if k <= len(self.word):
                return self.triples[self.word[k - 1]]
            if self.tail == "repeat_last":
                return self.triples[self.word[-1]]
            return None
        # general
        if k <= len(self.triples):
            return self.triples[k - 1]
        if self.tail == "repeat_last":
            return self.triples[-1]
        return None

    def distinct_triples(self) -> list[HadamardTriple]:
        seen: list[HadamardTriple] = []
        for t in self.triples:
            if not any(t is s for s in seen):
                seen.append(t)
        return seen

    @property
    def max_digit_norm(self) -> float:
        return max(t.B.max_norm for t in self.distinct_triples())

    # -- contraction machinery --------------------------------------------

    def _step_norms(self) -> tuple[float, float, int]:
        """(one-step c or block gamma, prefactor, kind flag) for tail sums.

        Returns (gamma, pref) such that ||(R_k...R_1)^{-T}||_2 <= pref*gamma^k.
        """
        if "step" in self._caches:
            return self._caches["step"]
        try:
            c = max(contraction_factor(t.R) for t in self.distinct_triples())
            out = (c, 1.0, 1)
        except NotContractive:
            rs = {t.R for t in self.distinct_triples()}
            if len(rs) > 1:
                raise NotContractive(
                    "mixed scaling matrices with a non-contractive step")
            r = next(iter(rs))
            k0, ck = multi_step_contraction(r)
            # ||S^q|| <= (nmax/ck) * (ck^(1/k0))^q with nmax over one block
            inv_t = np.linalg.inv(r.as_numpy().T)
            power = np.eye(r.dim)
            nmax = 0.0
            for _ in range(k0):
                power = power @ inv_t
                nmax = max(nmax, float(np.linalg.norm(power, 2)))
            out = (ck ** (1.0 / k0), nmax / ck, k0)
        self._caches["step"] = out
        return out

    def tail_norm_sum(self, k: int) -> float:
        """Upper bound on sum_{j>k} ||(R_j...R_1)^{-T}||_2."""
        fin = self.finite_length
        if fin is not None and k >= fin:
            return 0.0
        gamma, pref, _ = self._step_norms()
        return pref * gamma ** (k + 1) / (1.0 - gamma)

    def depth_for(self, max_xi_norm: float, pol: TruncationPolicy) -> int:
        """Product depth meeting the policy for |xi| <= max_xi_norm.

        Always covers the explicit word/level data (truncating earlier would
        still be sound, the bound holds for any digit choice, but the value
        would ignore specified levels).
        """
        lo = 1 if self.kind == "self_affine" else min(self.explicit_length,
                                                      pol.max_depth)
        if pol.depth is not None:
            k = max(pol.depth, lo)
        else:
            amp = 2.0 * math.pi * self.max_digit_norm * max(max_xi_norm, 0.0)
            k = lo
            while k < pol.max_depth and amp * self.tail_norm_sum(k) > pol.target_error:
                k += 1
        fin = self.finite_length
        if fin is not None:
            k = min(k, fin)
        return max(k, 1)

    def _inv_t_mats(self, upto: int) -> np.ndarray:
        """Float (R_k^T)^{-1} per level, shape (upto, d, d)."""
        cache = self._caches.setdefault("inv_t", [])
        while len(cache) < upto:
            k = len(cache) + 1
            t = self.triple_at(k)
            if t is None:
                cache.append(np.eye(self.dim))
            else:
                cache.append(np.linalg.inv(t.R.as_numpy().T))
        return np.array(cache[:upto])

    def _digit_arrays(self, upto: int) -> list[np.ndarray | None]:
        out = []
        for k in range(1, upto + 1):
            t = self.triple_at(k)
            out.append(None if t is None else t.B.as_numpy())
        return out

    def cumulative_inverse_exact(self, upto: int) -> list:
        """Exact (R_k...R_1)^{-1} as Fraction matrices for k = 1..upto."""
        cache = self._caches.setdefault("cum_inv", [])
        while len(cache) < upto:
            k = len(cache) + 1
            t = self.triple_at(k)
            if t is None:
                cache.append(cache[-1])
                continue
            step = rat_inverse(t.R)
            cache.append(step if k == 1 else rat_matmul(cache[-1], step))
        return cache[:upto]


# -- factories --------------------------------------------------------------


def self_affine(t: HadamardTriple) -> ConvolutionSystem:
    return ConvolutionSystem("self_affine", (t,))


def periodic_word(triples: Sequence[HadamardTriple], word: Sequence[int]) -> ConvolutionSystem:
    return ConvolutionSystem("periodic", tuple(triples), tuple(word))


def random_word(triples: Sequence[HadamardTriple], word: Sequence[int],
                tail: str = "repeat_last") -> ConvolutionSystem:
    return ConvolutionSystem("random_word", tuple(triples), tuple(word), tail)


def general_product(triples: Sequence[HadamardTriple],
                    tail: str = "finite") -> ConvolutionSystem:
    return ConvolutionSystem("general", tuple(triples), None, tail)


# -- Fourier transform -------------------------------------------------------


@dataclass(frozen=True)
class FtValue:
    value: complex
    tail_bound: float


def _as_points(sys: ConvolutionSystem, xi) -> np.ndarray:
    """Coerce scalars / vectors / stacks of vectors to shape (m, d)."""
    xs = np.asarray(xi, dtype=float)
    if sys.dim == 1:
        return np.atleast_1d(xs).reshape(-1, 1)
    return xs.reshape(-1, sys.dim)


def _ft_product(sys: ConvolutionSystem, pts: np.ndarray, depth: int,
                skip_upto: int = 0) -> np.ndarray:
    """prod_{skip_upto < k <= depth} conj(m_{B_k})((R_k...R_1)^{-T} xi)."""
    vals = np.ones(len(pts), dtype=complex)
    eta = pts.copy()
    mats = sys._inv_t_mats(depth)
    digits = sys._digit_arrays(depth)
    for k in range(1, depth + 1):
        eta = eta @ mats[k - 1].T
        if k > skip_upto and digits[k - 1] is not None:
            vals *= np.exp(-2j * np.pi * (eta @ digits[k - 1].T)).mean(axis=1)
    return vals


def ft_eval_many(sys: ConvolutionSystem, xi, pol: TruncationPolicy = DEFAULT_POLICY,
                 skip_upto: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Fourier transform at an array of points; returns (values, tail bounds)."""
    pts = _as_points(sys, xi)
    norms = np.linalg.norm(pts, axis=1)
    depth = sys.depth_for(float(norms.max(initial=0.0)), pol)
    vals = _ft_product(sys, pts, depth, skip_upto)
    amp = 2.0 * math.pi * sys.max_digit_norm * norms
    bounds = np.abs(vals) * np.expm1(amp * sys.tail_norm_sum(depth))
    return vals, bounds


def ft_eval(sys: ConvolutionSystem, xi, pol: TruncationPolicy = DEFAULT_POLICY) -> FtValue:
    """mu^(xi) as a truncated product with a certified tail bound."""
    vals, bounds = ft_eval_many(sys, xi, pol)
    return FtValue(complex(vals[0]), float(bounds[0]))


def ft_tail_eval_many(sys: ConvolutionSystem, n: int, xi,
                      pol: TruncationPolicy = DEFAULT_POLICY) -> tuple[np.ndarray, np.ndarray]:
    """Transform of the tail measure mu_{>n} at an array of points."""
    if n < 0:
        raise ValueError("level must be >= 0")
    pts = _as_points(sys, xi)
    norms = np.linalg.norm(pts, axis=1)
    depth = max(sys.depth_for(float(norms.max(initial=0.0)), pol), n)
    vals = _ft_product(sys, pts, depth, skip_upto=n)
    amp = 2.0 * math.pi * sys.max_digit_norm * norms
    bounds = np.abs(vals) * np.expm1(amp * sys.tail_norm_sum(depth))
    return vals, bounds


def ft_tail_eval(sys: ConvolutionSystem, n: int, xi,
                 pol: TruncationPolicy = DEFAULT_POLICY) -> FtValue:
    vals, bounds = ft_tail_eval_many(sys, n, xi, pol)
    return FtValue(complex(vals[0]), float(bounds[0]))


def ft_partial_eval(sys: ConvolutionSystem, n: int, xi) -> complex:
    """Transform of the finite convolution mu_n (exact product, no tail)."""
    pts = _as_points(sys, xi)
    return complex(_ft_product(sys, pts, n, skip_upto=0)[0])


# -- support geometry --------------------------------------------------------


def support_radius(sys: ConvolutionSystem, from_level: int = 0) -> float:
    """Certified Euclidean radius bound for the attractor K_{from_level}."""
    return sys.max_digit_norm * sys.tail_norm_sum(from_level)


def support_bbox(sys: ConvolutionSystem) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box certified to contain the support K_0."""
    rho = support_radius(sys, 0)
    lo = np.full(sys.dim, -rho)
    hi = np.full(sys.dim, rho)
    return lo, hi


def sample_support(sys: ConvolutionSystem, n: int, count: int,
                   seed: int = 0) -> np.ndarray:
    """count i.i.d. draws of sum_{k<=n} (R_k...R_1)^{-1} b_k, uniform digits."""
    if n < 1:
        raise ValueError("need at least one digit level")
    rng = np.random.default_rng(seed)
    pts = np.zeros((count, sys.dim))
    cum = np.eye(sys.dim)
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        if t is None:
            break
        cum = cum @ np.linalg.inv(t.R.as_numpy())
        digits = t.B.as_numpy()
        idx = rng.integers(0, len(digits), size=count)
        pts += digits[idx] @ cum.T
    return pts


# -- no-overlap assessment ----------------------------------------------------


@dataclass(frozen=True)
class NoOverlapReport:
    verdict: str                 # "proven" | "assumed" | "estimated"
    level: int
    p_hat: float | None = None
    detail: dict = field(default_factory=dict)


def _exact_atoms(sys: ConvolutionSystem, n: int):
    """All level-n atoms as exact Fraction vectors, in digit-word order."""
    cum = sys.cumulative_inverse_exact(n)
    level_digits = []
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        if t is None:
            level_digits.append([(Fraction(0),) * sys.dim])
            continue
        mats = cum[k - 1]
        level_digits.append([
            tuple(sum(mats[i][j] * Fraction(b[j]) for j in range(sys.dim))
                  for i in range(sys.dim))
            for b in t.B.vectors])
    atoms = [((Fraction(0),) * sys.dim, ())]
    for opts in level_digits:
        atoms = [(tuple(a[i] + o[i] for i in range(sys.dim)), w + (j,))
                 for a, w in atoms for j, o in enumerate(opts)]
    return atoms


def _atom_count(sys: ConvolutionSystem, n: int) -> int:
    total = 1
    for k in range(1, n + 1):
        t = sys.triple_at(k)
        total *= 1 if t is None else len(t.B)
    return total


def no_overlap_assess(sys: ConvolutionSystem, n: int, samples: int = 4096,
                      seed: int = 0, extra_depth: int = 8,
                      cap: int = 4096) -> NoOverlapReport:
    """Assess the no-overlap condition for levels 1..n.

    Proven: exact separation certificate (digit residues distinct at every
    level, level-n atoms pairwise farther apart than a certified diameter
    bound on K_n). Assumed: self-affine system with a verified triple (no
    overlap is known for that class). Estimated: fraction of deep-level atom
    pairs with distinct level-n prefixes that land within the tail diameter
    bound; sampling never upgrades to Proven.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    triples_used = {id(sys.triple_at(k)): sys.triple_at(k)
                    for k in range(1, n + 1) if sys.triple_at(k) is not None}
    if all(len(t.B) == 1 for t in triples_used.values()):
        return NoOverlapReport("proven", n, detail={"reason": "singleton digits"})

    m_n = _atom_count(sys, n)
    if m_n <= cap:
        from .linalg import residue_classes_distinct
        residues_ok = all(residue_classes_distinct(t.R, t.B.vectors)
                          for t in triples_used.values())
        atoms = _exact_atoms(sys, n)
        values = [a for a, _ in atoms]
        injective = len(set(values)) == m_n
        diam = 2.0 * support_radius(sys, n)
        arr = np.array([[float(x) for x in v] for v in values])
        min_gap = _min_pairwise_gap(arr)
        if residues_ok and injective and min_gap > diam:
            return NoOverlapReport("proven", n, detail={
                "min_gap": min_gap, "tail_diameter_bound": diam})
    if sys.kind == "self_affine" and sys.triples[0].status == "verified":
        return NoOverlapReport("assumed", n, detail={
            "reason": "self-affine measure of a verified Hadamard triple"})

    # Deep-enumeration / Monte-Carlo estimate. Translate overlap shows up as
    # level-m atoms from different level-n digit prefixes falling within the
    # diameter bound of the level-m tail.
    m = n + extra_depth
    tol = max(2.0 * support_radius(sys, m), 1e-12)
    if _atom_count(sys, m) <= cap:
        atoms = _exact_atoms(sys, m)
        pts = np.array([[float(x) for x in v] for v, _ in atoms])
        prefix_ids: dict[tuple, int] = {}
        prefixes = np.array([prefix_ids.setdefault(w[:n], len(prefix_ids))
                             for _, w in atoms])
        hits, pairs = _near_pairs(pts, prefixes, tol)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        w1, p1 = _sample_atoms(sys, m, samples, rng)
        w2, p2 = _sample_atoms(sys, m, samples, rng)
        cross = ~np.all(w1[:, :n] == w2[:, :n], axis=1)
        close = np.linalg.norm(p1 - p2, axis=1) < tol
        hits = int((close & cross).sum())
        pairs = int(cross.sum())
        mode = "sampled"
    p_hat = hits / max(pairs, 1)
    return NoOverlapReport("estimated", n, p_hat=p_hat, detail={
        "deep_level": m, "near_pairs": hits, "pairs": pairs,
        "tolerance": tol, "mode": mode})


def _sample_atoms(sys: ConvolutionSystem, m: int, count: int, rng):
    """(digit words, float atom positions) for `count` random level-m atoms."""
    words = np.zeros((count, m), dtype=np.int64)
    pts = np.zeros((count, sys.dim))
    cum = np.eye(sys.dim)
    for k in range(1, m + 1):
        t = sys.triple_at(k)
        if t is None:
            break
        cum = cum @ np.linalg.inv(t.R.as_numpy())
        digits = t.B.as_numpy()
        idx = rng.integers(0, len(digits), size=count)
        words[:, k - 1] = idx
        pts += digits[idx] @ cum.T
    return words, pts


def _min_pairwise_gap(pts: np.ndarray) -> float:
    if len(pts) < 2:
        return math.inf
    if pts.shape[1] == 1:
        v = np.sort(pts[:, 0])
        return float(np.diff(v).min())
    best = math.inf
    for i in range(len(pts)):
        d = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        if len(d):
            best = min(best, float(d.min()))
    return best


def _near_pairs(pts: np.ndarray, prefixes: np.ndarray,
                tol: float) -> tuple[int, int]:
    """(#cross-prefix pairs strictly within tol, #cross-prefix pairs)."""
    n = len(pts)
    same = np.equal.outer(prefixes, prefixes)
    total_cross = int((~same).sum() // 2)
    if pts.shape[1] == 1:
        order = np.argsort(pts[:, 0])
        v = pts[order, 0]
        pr = prefixes[order]
        hits = 0
        for i in range(n):
            k = i + 1
            while k < n and v[k] - v[i] < tol:
                if pr[k] != pr[i]:
                    hits += 1
                k += 1
        return hits, total_cross
    hits = 0
    for i in range(n):
        d = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        hits += int(((d < tol) & (prefixes[i + 1:] != prefixes[i])).sum())
    return hits, total_cross
