"""Monte Carlo over random digit words.

Words are sampled uniformly and independently per position; sample k draws
from a stream seeded by (seed, k) so any subset of samples reproduces in
isolation and results do not depend on the worker count. Finite words stand
in for infinite ones through the repeat-last tail; reports therefore speak
of pass fractions at a stated truncation, never of probability-one claims.
"""

from __future__ import annotations

import functools
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotCompleteResidue
from .linalg import is_complete_residue_set
from .measures import (ConvolutionSystem, DEFAULT_POLICY, TruncationPolicy,
                       random_word)
from .quasiproduct import TilingReport, lattice_tiling_check
from .spectra import SpectrumGenerator, check_spectrum, qp_eval
from .triples import HadamardTriple


def sample_words(n_letters: int, length: int, count: int,
                 seed: int = 0) -> list[tuple[int, ...]]:
    """count uniform words over {0..n_letters-1}; word k comes from the
    stream seeded by (seed, k)."""
    if n_letters < 1 or length < 1 or count < 1:
        raise ValueError("need n_letters, length, count >= 1")
    out = []
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        out.append(tuple(int(x) for x in rng.integers(0, n_letters, size=length)))
    return out


@dataclass
class EnsembleConfig:
    triples: Sequence[HadamardTriple]
    generator: SpectrumGenerator
    word_length: int = 20
    samples: int = 200
    seed: int = 0
    grid: int | np.ndarray = 32
    window: int = 64
    eps_complete: float = 0.01
    eps_orth: float = 1e-4
    policy: TruncationPolicy = DEFAULT_POLICY
    workers: int = 1
    tail: str = "repeat_last"

    def echo(self) -> dict:
        return {
            "n_letters": len(self.triples), "word_length": self.word_length,
            "samples": self.samples, "seed": self.seed,
            "grid": int(self.grid) if isinstance(self.grid, (int, np.integer))
            else np.asarray(self.grid).tolist(),
            "window": self.window, "eps_complete": self.eps_complete,
            "eps_orth": self.eps_orth, "workers": self.workers,
            "tail": self.tail, "generator": self.generator.describe(),
            "policy": {"depth": self.policy.depth,
                       "target_error": self.policy.target_error,
                       "max_depth": self.policy.max_depth},
        }


@dataclass
class SampleVerdict:
    index: int
    word: tuple[int, ...]
    passed: bool
    min_q: float
    max_q: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "word": list(self.word),
                "passed": self.passed, "min_q": self.min_q,
                "max_q": self.max_q, "error": self.error}


@dataclass
class EnsembleReport:
    kind: str
    config: dict
    verdicts: list[SampleVerdict]
    pass_fraction: float
    min_q_min: float
    min_q_median: float
    min_q_p5: float
    failing_words: list[tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "config": self.config,
                "pass_fraction": self.pass_fraction,
                "min_q_min": self.min_q_min,
                "min_q_median": self.min_q_median, "min_q_p5": self.min_q_p5,
                "failing_words": [list(w) for w in self.failing_words],
                "verdicts": [v.to_dict() for v in self.verdicts]}

    def csv_rows(self) -> list[str]:
        lines = ["index,word,min_q,max_q,passed,error"]
        for v in self.verdicts:
            word = "".join(str(d) for d in v.word)
            lines.append(f"{v.index},{word},{v.min_q!r},{v.max_q!r},"
                         f"{int(v.passed)},{v.error or ''}")
        return lines


def _spectrum_sample(cfg: EnsembleConfig, k: int) -> SampleVerdict:
    rng = np.random.default_rng([cfg.seed, k])
    word = tuple(int(x) for x in rng.integers(0, len(cfg.triples),
                                              size=cfg.word_length))
    try:
        sys = random_word(cfg.triples, word, tail=cfg.tail)
        rep = check_spectrum(sys, cfg.generator, cfg.grid, window=cfg.window,
                             eps_complete=cfg.eps_complete,
                             eps_orth=cfg.eps_orth, pol=cfg.policy)
        return SampleVerdict(k, word, rep.passed, rep.min_q, rep.max_q)
    except Exception as exc:  # recorded, not fatal
        return SampleVerdict(k, word, False, float("nan"), float("nan"),
                             error=f"{type(exc).__name__}: {exc}")


def _tiling_sample(cfg: EnsembleConfig, basis, tol: float, k: int) -> SampleVerdict:
    rng = np.random.default_rng([cfg.seed, k])
    word = tuple(int(x) for x in rng.integers(0, len(cfg.triples),
                                              size=cfg.word_length))
    try:
        sys = random_word(cfg.triples, word, tail=cfg.tail)
        rep = lattice_tiling_check(sys, basis, window=cfg.window,
                                   pol=cfg.policy, tol=tol)
        return SampleVerdict(k, word, rep.passed, rep.max_offlattice_mass,
                             rep.max_offlattice_mass)
    except Exception as exc:
        return SampleVerdict(k, word, False, float("nan"), float("nan"),
                             error=f"{type(exc).__name__}: {exc}")


def _run_samples(runner, cfg: EnsembleConfig) -> list[SampleVerdict]:
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            verdicts = list(pool.map(runner, range(cfg.samples)))
    else:
        verdicts = [runner(k) for k in range(cfg.samples)]
    return sorted(verdicts, key=lambda v: v.index)


def _aggregate(kind: str, cfg: EnsembleConfig,
               verdicts: list[SampleVerdict]) -> EnsembleReport:
    min_qs = [v.min_q for v in verdicts if not np.isnan(v.min_q)]
    min_qs_sorted = sorted(min_qs) or [float("nan")]
    p5 = min_qs_sorted[max(0, int(0.05 * len(min_qs_sorted)) - 1)] \
        if len(min_qs_sorted) > 1 else min_qs_sorted[0]
    return EnsembleReport(
        kind=kind, config=cfg.echo(), verdicts=verdicts,
        pass_fraction=sum(v.passed for v in verdicts) / len(verdicts),
        min_q_min=min(min_qs_sorted), min_q_median=statistics.median(min_qs_sorted),
        min_q_p5=p5,
        failing_words=[v.word for v in verdicts if not v.passed])


def ensemble_spectrum_report(cfg: EnsembleConfig) -> EnsembleReport:
    """check_spectrum over `samples` random words; order-independent."""
    runner = functools.partial(_spectrum_sample, cfg)
    return _aggregate("ensemble_spectrum", cfg, _run_samples(runner, cfg))


def ensemble_tiling_report(cfg: EnsembleConfig, basis,
                           tol: float = 1e-7) -> EnsembleReport:
    """lattice_tiling_check over random words.

    Requires every digit set to be a complete residue system for its R;
    min_q/max_q columns carry the off-lattice mass instead of Q.
    """
    for t in cfg.triples:
        if not is_complete_residue_set(t.R, t.B.vectors):
            raise NotCompleteResidue(
                f"digit set {t.B.vectors} is not a complete residue system")
    runner = functools.partial(_tiling_sample, cfg, basis, tol)
    return _aggregate("ensemble_tiling", cfg, _run_samples(runner, cfg))


@dataclass
class ProbeReport:
    word: tuple[int, ...]
    rows: list  # (xi, q, terms, q_bound)
    verdict: str
    threshold: float
    config: dict

    def to_dict(self) -> dict:
        return {"word": list(self.word), "verdict": self.verdict,
                "threshold": self.threshold, "config": self.config,
                "rows": [{"xi": list(np.atleast_1d(x).tolist()), "q": q,
                          "terms": t, "q_bound": b}
                         for (x, q, t, b) in self.rows]}


def counterexample_probe(triples: Sequence[HadamardTriple], word,
                         gen: SpectrumGenerator, probes,
                         window: int = 200,
                         pol: TruncationPolicy = DEFAULT_POLICY,
                         q_slack: float = 0.01,
                         tail: str = "repeat_last") -> ProbeReport:
    """Q at chosen probe points for one explicit word.

    Verdict "NonSpectralEvidence" when some probe falls below
    1 - 10 * q_slack; anything above reads "consistent". The lambda = 0 term
    contributes |mu^(xi)|^2 <= 1, so probes at xi = 0 always stay near 1.
    """
    sys = random_word(triples, tuple(int(x) for x in word), tail=tail)
    rows = []
    worst = float("inf")
    for xi in np.atleast_1d(np.asarray(probes, dtype=float)):
        qv = qp_eval(sys, gen, xi, window=window, pol=pol)
        rows.append((xi, qv.q, qv.terms, qv.q_bound))
        worst = min(worst, qv.q)
    threshold = 1.0 - 10.0 * q_slack
    verdict = "NonSpectralEvidence" if worst < threshold else "consistent"
    return ProbeReport(tuple(int(x) for x in word), rows, verdict, threshold,
                       {"window": window, "q_slack": q_slack, "tail": tail})
