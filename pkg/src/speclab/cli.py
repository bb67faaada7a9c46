"""Command-line front end.

JSON configs in, JSON/CSV reports out. Exit codes: 0 = pass, 2 = the
mathematical check ran and failed, 1 = operational error (bad input,
malformed JSON, missing file), so shell pipelines can tell mathematics
from tooling.

Input schemas (also in the README):

  triple:    {"R": 2 | [[...]], "B": [0,1] | [[...]], "L": [0,1]}
  system:    {"kind": "self_affine"|"periodic"|"random_word"|"general",
              "triples": [triple, ...], "word": [ints],
              "tail": "repeat_last"|"finite"}
  generator: {"kind": "lattice", "basis": 1 | [[...]]}
           | {"kind": "cycle_spectrum", "triple": triple, "mmax": 6}
           | {"kind": "level_sets"}
           | {"kind": "explicit", "points": [...]}
  check:     {"system": system, "generator": generator}
  quasiproduct: {"R1":..., "a":[...], "L1":[...], "R":...,
                 "B_family":[[...],...], "L":[...], "C":... (optional)}
  random:    {"triples":[...], "generator": generator}
  tiling:    {"system": system, "lattice": 1 | [[...]]}
  probe:     {"triples":[...], "word":[...], "generator": generator,
              "probes":[...]}
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .cycles import find_extreme_cycles, search_summary
from .ensemble import (EnsembleConfig, counterexample_probe,
                       ensemble_spectrum_report, ensemble_tiling_report)
from .errors import SpeclabError
from .measures import (ConvolutionSystem, TruncationPolicy, general_product,
                       periodic_word, random_word, self_affine)
from .quasiproduct import (build_quasi_product, describe_spec,
                           lattice_tiling_check, quasi_product_spec)
from .spectra import (CycleSpectrumGenerator, ExplicitGenerator,
                      LatticeGenerator, LevelSetsGenerator, check_spectrum,
                      lambda_n, strichartz_report)
from .triples import HadamardTriple, triple, verify_hadamard


class CliError(Exception):
    """Operational error: maps to exit code 1."""


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise CliError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}") from exc


def _parse_triple(obj, tol: float) -> HadamardTriple:
    if not isinstance(obj, dict):
        raise CliError(f"triple must be an object, got {type(obj).__name__}")
    for key in ("R", "B", "L"):
        if key not in obj:
            raise CliError(f"triple is missing field {key!r}")
    try:
        return triple(obj["R"], obj["B"], obj["L"], tol=tol, require=False)
    except (ValueError, TypeError, SpeclabError) as exc:
        raise CliError(f"bad triple: {exc}") from exc


def _parse_system(obj: dict, tol: float) -> ConvolutionSystem:
    kind = obj.get("kind")
    triples = [_parse_triple(t, tol) for t in obj.get("triples", [])]
    if not triples:
        raise CliError("system needs a nonempty 'triples' list")
    for t in triples:
        t.require_verified(tol)
    word = obj.get("word")
    tail = obj.get("tail", "repeat_last")
    try:
        if kind == "self_affine":
            return self_affine(triples[0])
        if kind == "periodic":
            return periodic_word(triples, word or [])
        if kind == "random_word":
            return random_word(triples, word or [], tail=tail)
        if kind == "general":
            return general_product(triples, tail=tail)
    except (ValueError, TypeError, SpeclabError) as exc:
        raise CliError(f"bad system: {exc}") from exc
    raise CliError(f"unknown system kind {kind!r}")


def _numeric(x) -> float:
    """JSON numbers plus "p/q" strings for exact rational entries."""
    if isinstance(x, str):
        try:
            return float(Fraction(x))
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(f"bad rational entry {x!r}") from exc
    return float(x)


def _numeric_array(x) -> np.ndarray:
    if isinstance(x, (list, tuple)):
        return np.array([_numeric_array(v) for v in x])
    return np.array(_numeric(x))


def _parse_generator(obj: dict, args) -> object:
    kind = obj.get("kind")
    if kind == "lattice":
        basis = _numeric_array(obj.get("basis", 1))
        return LatticeGenerator(np.atleast_2d(basis))
    if kind == "cycle_spectrum":
        t = _parse_triple(obj["triple"], args.tol)
        t.require_verified(args.tol)
        cycles = find_extreme_cycles(t, obj.get("mmax", args.mmax))
        return CycleSpectrumGenerator(t, cycles)
    if kind == "explicit":
        return ExplicitGenerator(_numeric_array(obj["points"]))
    raise CliError(f"unknown generator kind {kind!r} "
                   "(level_sets is resolved against a system)")


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(depth=args.depth)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                               default=str) + "\n")


def _write_lines(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n")


def _effective(args, extra: dict | None = None) -> dict:
    eff = {"command": args.command, "input": args.input, "out": args.out,
           "depth": args.depth, "tol": args.tol, "grid": args.grid,
           "window": args.window, "mmax": args.mmax, "samples": args.samples,
           "word_length": args.word_length, "seed": args.seed,
           "threads": args.threads, "version": __version__}
    if extra:
        eff.update(extra)
    return eff


def cmd_verify(args) -> int:
    obj = _load_json(args.input)
    t = _parse_triple(obj, args.tol)
    res = verify_hadamard(t, args.tol)
    report = {"config": _effective(args), "passed": res.passed,
              "residual": res.residual, "size": t.size, "dim": t.dim}
    _write_json(_out_dir(args) / "verify_report.json", report)
    print(f"hadamard check: {'pass' if res.passed else 'FAIL'} "
          f"(residual {res.residual:.3g}, tol {args.tol:g})")
    return 0 if res.passed else 2


def cmd_cycles(args) -> int:
    if args.mmax < 1:
        raise CliError("--mmax must be >= 1")
    obj = _load_json(args.input)
    t = _parse_triple(obj, args.tol)
    t.require_verified(args.tol)
    cycles = find_extreme_cycles(t, args.mmax)
    payload = {"config": _effective(args)}
    payload.update(search_summary(t, cycles, args.mmax))
    if args.spectrum_level is not None:
        from .cycles import dynamically_simple_spectrum
        from .errors import NonIntegerElement
        payload["spectrum_level"] = args.spectrum_level
        try:
            payload["spectrum"] = [list(p) for p in dynamically_simple_spectrum(
                t, cycles, args.spectrum_level)]
        except NonIntegerElement as exc:
            # cycles with non-integer points generate non-integer frequencies
            payload["spectrum"] = None
            payload["spectrum_note"] = str(exc)
    _write_json(_out_dir(args) / "cycles_report.json", payload)
    print(f"{len(cycles)} extreme cycle(s) with period <= {args.mmax}")
    return 0


def cmd_spectrum(args) -> int:
    obj = _load_json(args.input)
    payload = {"config": _effective(args)}
    if "kind" in obj:
        sysm = _parse_system(obj, args.tol)
        level = max(args.window, 1)
        payload["level"] = level
        payload["frequencies"] = [list(p) for p in lambda_n(sysm, level)]
    else:
        t = _parse_triple(obj, args.tol)
        t.require_verified(args.tol)
        cycles = find_extreme_cycles(t, args.mmax)
        from .cycles import dynamically_simple_spectrum
        payload["level"] = args.window
        payload["cycles"] = [c.to_dict() for c in cycles]
        payload["frequencies"] = [list(p) for p in dynamically_simple_spectrum(
            t, cycles, args.window)]
    _write_json(_out_dir(args) / "spectrum_report.json", payload)
    print(f"{len(payload['frequencies'])} frequencies at level {payload['level']}")
    return 0


def cmd_check(args) -> int:
    obj = _load_json(args.input)
    if "system" not in obj or "generator" not in obj:
        raise CliError("check config needs 'system' and 'generator'")
    sysm = _parse_system(obj["system"], args.tol)
    gen = (LevelSetsGenerator(sysm) if obj["generator"].get("kind") == "level_sets"
           else _parse_generator(obj["generator"], args))
    report = check_spectrum(sysm, gen, args.grid, window=args.window,
                            pol=_policy(args))
    report.params["cli"] = _effective(args)
    out = _out_dir(args)
    _write_json(out / "check_report.json", report.to_dict())
    _write_lines(out / "check_qsweep.csv", report.csv_rows())
    print(f"Q sweep: min={report.min_q:.6f} max={report.max_q:.6f} "
          f"-> {'pass' if report.passed else 'FAIL'}")
    return 0 if report.passed else 2


def cmd_strichartz(args) -> int:
    obj = _load_json(args.input)
    sysm = _parse_system(obj, args.tol) if "kind" in obj else \
        self_affine(_parse_triple(obj, args.tol))
    rep = strichartz_report(sysm, max(args.window, 1), pol=_policy(args))
    rep["config"] = _effective(args, {"n_max": max(args.window, 1)})
    _write_json(_out_dir(args) / "strichartz_report.json", rep)
    print(rep["verdict"])
    return 0


def cmd_quasiproduct(args) -> int:
    obj = _load_json(args.input)
    try:
        spec = quasi_product_spec(obj["R1"], obj["a"], obj["L1"], obj["R"],
                                  obj["B_family"], obj["L"], obj.get("C"))
        big = build_quasi_product(spec, tol=args.tol)
    except KeyError as exc:
        raise CliError(f"quasiproduct config missing field {exc}") from exc
    except (ValueError, SpeclabError) as exc:
        print(f"quasiproduct assembly failed: {exc}", file=sys.stderr)
        return 2
    payload = {"config": _effective(args), "spec": describe_spec(spec),
               "triple": {"R": [list(r) for r in big.R.rows],
                          "B": [list(b) for b in big.B.vectors],
                          "L": [list(l) for l in big.L.vectors]},
               "residual": big.residual, "passed": big.status == "verified"}
    _write_json(_out_dir(args) / "quasiproduct_report.json", payload)
    print(f"assembled {big.size}-digit triple on R^{big.dim}, "
          f"residual {big.residual:.3g}")
    return 0


def cmd_random(args) -> int:
    obj = _load_json(args.input)
    triples = [_parse_triple(t, args.tol) for t in obj.get("triples", [])]
    for t in triples:
        t.require_verified(args.tol)
    if not triples:
        raise CliError("random config needs a nonempty 'triples' family")
    gen = _parse_generator(obj.get("generator", {"kind": "lattice", "basis": 1}),
                           args)
    cfg = EnsembleConfig(triples=triples, generator=gen,
                         word_length=args.word_length, samples=args.samples,
                         seed=args.seed, grid=args.grid, window=args.window,
                         policy=_policy(args), workers=args.threads)
    rep = ensemble_spectrum_report(cfg)
    rep.config["cli"] = _effective(args)
    out = _out_dir(args)
    _write_json(out / "random_report.json", rep.to_dict())
    _write_lines(out / "random_samples.csv", rep.csv_rows())
    print(f"pass fraction {rep.pass_fraction:.3f} over {args.samples} words "
          f"(min Q median {rep.min_q_median:.4f})")
    return 0 if rep.pass_fraction >= args.pass_threshold else 2


def cmd_tiling(args) -> int:
    obj = _load_json(args.input)
    basis = _numeric_array(obj.get("lattice", 1))
    if "system" in obj or "kind" in obj:
        sysm = _parse_system(obj.get("system", obj), args.tol)
        rep = lattice_tiling_check(sysm, basis, window=args.window,
                                   pol=_policy(args))
        payload = {"config": _effective(args), "report": rep.to_dict()}
        _write_json(_out_dir(args) / "tiling_report.json", payload)
        print(f"tiling check: {'pass' if rep.passed else 'FAIL'} "
              f"(max off-lattice mass {rep.max_offlattice_mass:.3g})")
        return 0 if rep.passed else 2
    # family form: per-word ensemble
    triples = [_parse_triple(t, args.tol) for t in obj.get("triples", [])]
    for t in triples:
        t.require_verified(args.tol)
    gen = LatticeGenerator(np.atleast_2d(basis))
    cfg = EnsembleConfig(triples=triples, generator=gen,
                         word_length=args.word_length, samples=args.samples,
                         seed=args.seed, window=args.window,
                         policy=_policy(args), workers=args.threads)
    rep = ensemble_tiling_report(cfg, basis)
    rep.config["cli"] = _effective(args)
    out = _out_dir(args)
    _write_json(out / "tiling_report.json", rep.to_dict())
    _write_lines(out / "tiling_samples.csv", rep.csv_rows())
    print(f"tiling pass fraction {rep.pass_fraction:.3f}")
    return 0 if rep.pass_fraction >= args.pass_threshold else 2


def cmd_probe(args) -> int:
    obj = _load_json(args.input)
    triples = [_parse_triple(t, args.tol) for t in obj.get("triples", [])]
    for t in triples:
        t.require_verified(args.tol)
    if "word" not in obj or "probes" not in obj:
        raise CliError("probe config needs 'word' and 'probes'")
    gen = _parse_generator(obj.get("generator", {"kind": "lattice", "basis": 1}),
                           args)
    rep = counterexample_probe(triples, obj["word"], gen, obj["probes"],
                               window=args.window, pol=_policy(args),
                               tail=obj.get("tail", "repeat_last"))
    payload = rep.to_dict()
    payload["config"]["cli"] = _effective(args)
    _write_json(_out_dir(args) / "probe_report.json", payload)
    print(f"verdict: {rep.verdict} "
          f"(min Q {min(r[1] for r in rep.rows):.4f}, threshold {rep.threshold})")
    return 0 if rep.verdict == "consistent" else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="speclab",
        description="Spectral-measure toolkit: verify Hadamard triples, "
                    "enumerate extreme cycles, sweep completeness functionals, "
                    "and stress-test random convolutions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    defaults = dict(
        input=("--input", dict(required=True, help="input JSON file")),
        out=("--out", dict(default="speclab_reports",
                           help="output directory (all files go here)")),
        depth=("--depth", dict(type=int, default=None,
                               help="fixed product depth (default: auto)")),
        tol=("--tol", dict(type=float, default=1e-9,
                           help="unitarity tolerance")),
        grid=("--grid", dict(type=int, default=32,
                             help="grid points per axis in [0,1)^d")),
        window=("--window", dict(type=int, default=8,
                                 help="spectrum window: level, lattice radius, "
                                      "or n_max depending on the command")),
        mmax=("--mmax", dict(type=int, default=6,
                             help="maximum cycle period to search")),
        samples=("--samples", dict(type=int, default=200,
                                   help="ensemble sample count")),
        word_length=("--word-length", dict(type=int, default=20,
                                           dest="word_length",
                                           help="random word length")),
        seed=("--seed", dict(type=int, default=0, help="RNG seed")),
        threads=("--threads", dict(
            type=int,
            default=int(os.environ.get("SPECLAB_THREADS", "1")),
            help="worker cap (SPECLAB_THREADS as fallback); results do not "
                 "depend on it")),
    )

    def add(name, fn, help_, extra=()):
        sp = sub.add_parser(name, help=help_)
        for flag, kw in defaults.values():
            sp.add_argument(flag, **kw)
        for flag, kw in extra:
            sp.add_argument(flag, **kw)
        sp.set_defaults(func=fn)

    add("verify", cmd_verify, "check a triple's unitarity")
    add("cycles", cmd_cycles, "enumerate extreme cycles exactly",
        extra=[("--spectrum-level", dict(type=int, default=None,
                                         dest="spectrum_level",
                                         help="also emit the generated "
                                              "spectrum at this level"))])
    add("spectrum", cmd_spectrum, "emit a level frequency set")
    add("check", cmd_check, "Q-sweep a system against a generator")
    add("strichartz", cmd_strichartz,
        "per-level sigma_min / tail-modulus report (n_max = --window)")
    add("quasiproduct", cmd_quasiproduct, "assemble and verify a block triple")
    add("random", cmd_random, "ensemble spectrum check over random words",
        extra=[("--pass-threshold", dict(type=float, default=0.9,
                                         dest="pass_threshold",
                                         help="required pass fraction"))])
    add("tiling", cmd_tiling, "Fourier-side lattice tiling check",
        extra=[("--pass-threshold", dict(type=float, default=0.9,
                                         dest="pass_threshold",
                                         help="required pass fraction for "
                                              "family form"))])
    add("probe", cmd_probe, "targeted completeness probe for one word")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SpeclabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
