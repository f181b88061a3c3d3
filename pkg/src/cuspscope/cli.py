"""Command-line front end.

``cuspscope {verify,transform,classify,separation,elliptic,signals}`` with
``--config PATH --out DIR --seed N --threads N --format {json,csv,bin}``.
Exit codes: 0 success, 1 analysis or verification failure, 2 usage or
configuration error.  Errors are also written to standard error as JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .checks import DEFAULT_CHECKS, CheckResult, run_checks
from .config import ConfigError, RunConfig, load_config, scales_from_config, wavelet_from_config
from .elliptic import HypothesisError, regularity_gain_experiment
from .engine import GridSignal, forward, set_threads
from .geometry import Lattice, region_from_dict, well_separated
from .io import FormatError, dump_json, field_slice_rows, read_signal, write_csv, write_field, write_signal
from .microlocal import classify_type
from .signals import (
    CuspDomain,
    band_limited_random,
    composite_cusp,
    holder_cusp,
    oscillating_cusp,
    rough_background,
)

__all__ = ["main", "build_signal", "COMMANDS"]

FORMATS = ("json", "csv", "bin")


class AnalysisFailure(RuntimeError):
    """A verification or analysis step did not pass."""


def build_signal(cfg: RunConfig) -> GridSignal:
    grid, sig = cfg["grid"], cfg["signal"]
    n, L, dim = grid["n_points"], grid["length"], grid["dimension"]
    p = dict(sig.get("params") or {})
    seed = cfg["seed"]
    gen = sig["generator"]
    if gen == "file":
        if not sig.get("path"):
            raise ConfigError("signal generator 'file' needs a path")
        return read_signal(sig["path"])
    if gen == "zero":
        return GridSignal(np.zeros((n,) * dim), L)
    if gen == "holder-cusp":
        return holder_cusp(p.get("alpha", 0.5), p.get("x0", 0.5), tuple(p.get("window", (0.2, 0.35))),
                           n, L, dim)
    if gen == "rough":
        return rough_background(p.get("beta", 0.3), n, L, dim, seed, p.get("direction"))
    if gen == "band-limited":
        return band_limited_random(tuple(p.get("band", (2, n // 8))), n, L, dim, seed)
    if dim != 2:
        raise ConfigError(f"generator {gen!r} needs grid.dimension = 2")
    domain = CuspDomain.from_dict(p.get("domain", {}))
    if gen == "composite-cusp":
        return composite_cusp(domain, p.get("inside"), p.get("beta", 0.3), p.get("blend_steps", 3.0),
                              n, L, seed, tuple(p.get("direction", (1, 1))))
    if gen == "oscillating-cusp":
        s, _ = oscillating_cusp(domain, p.get("alpha", 1.5), p.get("beta", 0.3),
                                p.get("blend_steps", 3.0), n, L, seed)
        return s
    raise ConfigError(f"unknown generator {gen!r}")


def _envelope(cfg: RunConfig, command: str, payload: dict) -> dict:
    return {"command": command, "version": __version__, "config": cfg.to_dict(), **payload}


def _write_json(out: Path, name: str, obj: Any) -> Path:
    path = out / name
    path.write_text(dump_json(obj))
    return path


def cmd_verify(cfg: RunConfig, out: Path, fmt: str) -> int:
    names = cfg["verify"]["checks"]
    unknown = [n for n in names if n not in DEFAULT_CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks: {unknown}")
    results = run_checks(names)
    ell = cfg["elliptic"]
    if ell is not None:
        delta = CuspDomain.from_dict(ell["domain"]).degree
        ok = ell["gamma"] > delta
        results.append(CheckResult("elliptic hypothesis (gamma > delta)", ok, ell["gamma"], delta,
                                   detail={"message": "" if ok else "hypothesis violated"}))
    for r in results:
        print(r.line())
    passed = all(r.passed for r in results)
    report = _envelope(cfg, "verify", {"passed": passed, "checks": [r.to_dict() for r in results]})
    _write_json(out, "verify.json", report)
    if fmt == "csv":
        write_csv(out / "verify.csv", ["name", "passed", "value", "threshold"],
                  [(r.name, r.passed, r.value, r.threshold) for r in results])
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise AnalysisFailure(f"failed checks: {', '.join(failed)}")
    return 0


def cmd_transform(cfg: RunConfig, out: Path, fmt: str) -> int:
    s = build_signal(cfg)
    g = wavelet_from_config(cfg["wavelets"][0], s.dimension)
    scales = scales_from_config(cfg["scales"], s.n_points, s.length, s.dimension)
    W = forward(g, s, scales, guard=cfg["scales"]["kind"] == "resolvable")
    extra = {"config": cfg.to_dict(), "version": __version__}
    if fmt == "bin":
        write_field(out / "field.bin", W, extra)
    elif fmt == "csv":
        cols, rows = field_slice_rows(W)
        write_csv(out / "field.csv", cols, rows)
    _write_json(out, "transform.json", _envelope(cfg, "transform", {
        "field": W.metadata(), "abs_max_per_scale": W.abs_max_per_scale(),
        "noise_floor": W.noise_floor}))
    return 0


def _window(cfg: RunConfig, s: GridSignal):
    an = cfg["analysis"]
    if an["window"] is not None:
        return tuple(an["window"])
    return (an["window_steps"] * s.spacing, 0.04 * s.length)


def cmd_classify(cfg: RunConfig, out: Path, fmt: str) -> int:
    s = build_signal(cfg)
    an = cfg["analysis"]
    scales = scales_from_config(cfg["scales"], s.n_points, s.length, s.dimension)
    apex = an["apex"]
    if apex is None and cfg["signal"]["generator"] in ("composite-cusp", "oscillating-cusp"):
        apex = list(CuspDomain.from_dict(cfg["signal"]["params"].get("domain", {})).apex)
    window = _window(cfg, s)
    reports, rows = [], []
    for wd in cfg["wavelets"]:
        g = wavelet_from_config(wd, s.dimension)
        W = forward(g, s, scales, lazy=True)
        for p in an["paths"]:
            rep = classify_type(W, p["xi"], p["gamma"], an["eps"], an["alpha_grid"], apex, window,
                                cutoff=an["cutoff"], min_decades=an["min_decades"])
            reports.append({"wavelet": g.to_dict(), "xi": p["xi"], "gamma": p["gamma"], **rep.to_dict()})
            tag = f"{g.kind}:{dict(g.params)}"
            rows.extend((tag, json.dumps(p["xi"]), p["gamma"]) + r for r in rep.rows())
    _write_json(out, "classify.json", _envelope(cfg, "classify", {"reports": reports, "window": window}))
    if fmt == "csv":
        write_csv(out / "classify.csv",
                  ["wavelet", "xi", "gamma", "lambda", "a", "absW", "log_a", "log_absW"], rows)
    for r in reports:
        print(f"xi={r['xi']} gamma={r['gamma']} wavelet={r['wavelet']['kind']}"
              f"{r['wavelet']['params']}: alpha_hat={r['alpha_hat']:.3f} rapid={r['rapid']}")
    return 0


def cmd_separation(cfg: RunConfig, out: Path, fmt: str) -> int:
    sep = cfg["separation"]
    lc = sep["lattice"]
    lat = Lattice([np.linspace(lc["b_min"], lc["b_max"], lc["n_b"])],
                  np.geomspace(lc["a_min"], lc["a_max"], lc["n_a"]))
    verdicts = []
    for i, pair in enumerate(sep["pairs"]):
        om, si = region_from_dict(pair["omega"]), region_from_dict(pair["sigma"])
        rep = well_separated(om, si, pair.get("eps", 0.25), lat)
        verdicts.append({"name": pair.get("name", f"pair {i}"), **rep.to_dict()})
        print(f"{verdicts[-1]['name']}: separated={rep.separated} ratio={rep.ratio:.4g}")
    _write_json(out, "separation.json", _envelope(cfg, "separation", {"verdicts": verdicts}))
    if fmt == "csv":
        write_csv(out / "separation.csv", ["name", "separated", "ratio", "eps"],
                  [(v["name"], v["separated"], v["ratio"], v["eps"]) for v in verdicts])
    return 0


def cmd_elliptic(cfg: RunConfig, out: Path, fmt: str) -> int:
    ell = cfg["elliptic"]
    if ell is None:
        raise ConfigError("config has no elliptic block")
    domain = CuspDomain.from_dict(ell["domain"])
    g = wavelet_from_config(ell["wavelet"], 2)
    rep = regularity_gain_experiment(
        domain, tuple(ell["xi"]), ell["gamma"], ell["alpha"], g, n_points=ell["n_points"],
        eps=ell["eps"], window=None if ell["window"] is None else tuple(ell["window"]),
        n_scales=ell["n_scales"], seed=cfg["seed"])
    _write_json(out, "elliptic.json", _envelope(cfg, "elliptic", {"report": rep.to_dict()}))
    if fmt == "csv":
        rows = [("f",) + r for r in rep.f_report.rows()] + [("eta",) + r for r in rep.eta_report.rows()]
        write_csv(out / "elliptic.csv", ["signal", "lambda", "a", "absW", "log_a", "log_absW"], rows)
    print(f"alpha_f={rep.alpha_f:.3f} alpha_eta={rep.alpha_eta:.3f} gain={rep.gain:.3f} "
          f"transfer sign={rep.transfer.sign} residual={rep.transfer.residual:.2e}")
    return 0


def cmd_signals(cfg: RunConfig, out: Path, fmt: str) -> int:
    s = build_signal(cfg)
    extra = {"config": cfg.to_dict(), "version": __version__}
    if fmt == "bin":
        write_signal(out / "signal.bin", s, extra)
    elif fmt == "csv":
        coords = [c.ravel() for c in np.meshgrid(*[s.axis(i) for i in range(s.dimension)], indexing="ij")]
        write_csv(out / "signal.csv", ["x", "y"][:s.dimension] + ["value"],
                  zip(*[c.tolist() for c in coords], np.real(s.samples).ravel().tolist()))
    _write_json(out, "signals.json", _envelope(cfg, "signals", {
        "n_points": s.n_points, "length": s.length, "dimension": s.dimension,
        "norm": s.norm(), "max_abs": float(np.max(np.abs(s.samples)))}))
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "transform": cmd_transform,
    "classify": cmd_classify,
    "separation": cmd_separation,
    "elliptic": cmd_elliptic,
    "signals": cmd_signals,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cuspscope", description="Directional wavelet regularity analysis.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration (defaults are used for missing keys)")
    ap.add_argument("--out", default="cuspscope-out", help="output directory")
    ap.add_argument("--seed", type=int, help="override the config seed")
    ap.add_argument("--threads", type=int, help="FFT worker threads (fallback: CUSPSCOPE_THREADS)")
    ap.add_argument("--format", choices=FORMATS, default="json", help="extra output format")
    return ap


def _error(kind: str, exc: BaseException) -> None:
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_overrides(seed=args.seed)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be positive")
            set_threads(args.threads)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        _error("config", exc)
        return 2
    try:
        return COMMANDS[args.command](cfg, out, args.format)
    except (ConfigError, FormatError) as exc:
        _error("config", exc)
        return 2
    except (AnalysisFailure, HypothesisError, ValueError, ArithmeticError) as exc:
        _error("analysis", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
