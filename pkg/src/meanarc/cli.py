"""Command-line driver.

One executable with a --command switch: sweep (mean arc length across a
grid of trajectory scales), verify (Monte Carlo estimates against the
closed forms, with z-scores), critical (largest scale that still fits),
embed (does shape B fit inside shape A), and sample (draw placements and
render the scene).

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 verification
failure, 5 degenerate-placement flood.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import report, svg
from ._version import __version__
from .estimators import (
    BoundsInvalid,
    NoIntersections,
    estimate_measures,
    find_critical_scale,
    mean_arc_from_run,
    run_pair,
    sweep_scale,
    test_embeddability,
)
from .formulas import ShapeSummary
from .geometry import Tolerance, ValidationError
from .sampling import DegenerateFlood, build_window, sample_placements
from .shapes import (
    InvalidScale,
    InvalidSpec,
    ParseError,
    build,
    centered_on_centroid,
    load_shape,
    parse_spec,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_VERIFY = 4
EXIT_FLOOD = 5

COMMANDS = ("sweep", "verify", "critical", "embed", "sample")

DEFAULTS = {
    "samples": 10000,
    "seed": 0,
    "streams": 4,
    "workers": 1,
    "out": ".",
    "svg": False,
    "lambda_steps": 10,
    "window_shrink": 1.0,
}


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="meanarc",
        description="Mean arc lengths of closed trajectories randomly placed "
        "over a planar domain: Monte Carlo estimates, closed-form checks, "
        "scale sweeps, and containment search.",
    )
    p.add_argument("--command", choices=COMMANDS, help="what to run")
    p.add_argument("--domain", help="domain shape: spec string (circle:r=1,res=256) or JSON file path")
    p.add_argument("--trajectory", help="trajectory shape: spec string or JSON file path")
    p.add_argument("--samples", type=int, help="placement count (>= 1000); search budget for critical")
    p.add_argument("--seed", type=int, help="root seed, non-negative (default 0)")
    p.add_argument("--streams", type=int, help="independent sample streams (default 4)")
    p.add_argument("--workers", type=int, help="threads running the streams (default 1)")
    p.add_argument("--lambda-min", type=float, dest="lambda_min", help="sweep/critical lower scale")
    p.add_argument("--lambda-max", type=float, dest="lambda_max", help="sweep/critical upper scale")
    p.add_argument("--lambda-steps", type=int, dest="lambda_steps", help="sweep grid size (default 10)")
    p.add_argument("--lambdas", help="explicit comma-separated scale grid (overrides min/max/steps)")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--svg", action="store_true", default=None, help="also write SVG artifacts")
    p.add_argument("--eps-length", type=float, dest="eps_length", help="absolute length tolerance override")
    p.add_argument("--config", help="JSON file with these options; explicit flags win")
    p.add_argument("--window-shrink", type=float, dest="window_shrink", help=argparse.SUPPRESS)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def resolve_config(argv) -> dict:
    args = vars(build_parser().parse_args(argv))
    cfg = dict(DEFAULTS)
    path = args.pop("config", None)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        known = set(args) | set(DEFAULTS)
        for key, value in file_cfg.items():
            if key not in known:
                raise ConfigError(f"config file {path}: unknown option {key!r}")
            cfg[key] = value
    for key, value in args.items():
        if value is not None:
            cfg[key] = value
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    command = cfg.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"--command must be one of {', '.join(COMMANDS)}")
    for key in ("domain", "trajectory"):
        if not cfg.get(key):
            raise ConfigError(f"--{key} is required")
    if int(cfg["samples"]) < 1000:
        raise ConfigError("--samples must be at least 1000")
    if int(cfg["seed"]) < 0:
        raise ConfigError("--seed must be non-negative")
    if int(cfg["streams"]) < 1 or int(cfg["workers"]) < 1:
        raise ConfigError("--streams and --workers must be positive")
    if cfg.get("eps_length") is not None and float(cfg["eps_length"]) <= 0:
        raise ConfigError("--eps-length must be positive")
    if not 0.0 < float(cfg["window_shrink"]) <= 1.0:
        raise ConfigError("--window-shrink must be in (0, 1]")
    if command == "sweep":
        _lambda_grid(cfg)  # raises on a bad grid
    if command == "critical":
        lo, hi = cfg.get("lambda_min"), cfg.get("lambda_max")
        if lo is None or hi is None or not 0 < float(lo) < float(hi):
            raise ConfigError("critical needs --lambda-min < --lambda-max, both positive")


def _lambda_grid(cfg: dict) -> list:
    if cfg.get("lambdas"):
        raw = cfg["lambdas"]
        parts = raw.split(",") if isinstance(raw, str) else list(raw)
        try:
            grid = [float(v) for v in parts]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"--lambdas: {exc}") from exc
    else:
        lo, hi, steps = cfg.get("lambda_min"), cfg.get("lambda_max"), int(cfg["lambda_steps"])
        if lo is None or hi is None:
            raise ConfigError("sweep needs --lambdas or --lambda-min/--lambda-max")
        if steps < 1:
            raise ConfigError("--lambda-steps must be positive")
        grid = [float(v) for v in np.linspace(float(lo), float(hi), steps)]
    if not grid or grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("scale grid must be positive and strictly increasing")
    return grid


def _load_shape(text: str):
    """Build a polygon from a spec string, a file: spec, or a bare path."""
    if text.startswith("file:"):
        return load_shape(parse_spec(text).params["path"])
    if os.sep in text or text.endswith(".json") or os.path.exists(text):
        return load_shape(text)
    return build(parse_spec(text))


def _tolerance(cfg: dict) -> Tolerance | None:
    if cfg.get("eps_length") is None:
        return None
    return Tolerance(eps_length=float(cfg["eps_length"]))


def _meta(cfg: dict) -> dict:
    return {
        "domain": cfg["domain"],
        "trajectory": cfg["trajectory"],
        "samples": int(cfg["samples"]),
        "seed": int(cfg["seed"]),
        "streams": int(cfg["streams"]),
    }


def _motion_dict(motion) -> dict | None:
    if motion is None:
        return None
    return {"theta": motion.theta, "tx": motion.tx, "ty": motion.ty}


def run_sweep(cfg: dict) -> int:
    domain = _load_shape(cfg["domain"])
    trajectory = _load_shape(cfg["trajectory"])
    grid = _lambda_grid(cfg)
    result = sweep_scale(
        domain,
        trajectory,
        grid,
        int(cfg["samples"]),
        int(cfg["seed"]),
        streams=int(cfg["streams"]),
        tol=_tolerance(cfg),
        workers=int(cfg["workers"]),
    )
    rows = [report.sweep_row_dict(r) for r in result.rows]
    out = cfg["out"]
    report.write_csv(os.path.join(out, "sweep.csv"), report.SWEEP_COLUMNS, rows)
    report.write_json(os.path.join(out, "sweep.json"), report.sweep_payload(result, _meta(cfg)))
    if cfg["svg"]:
        svg.render_sweep_plot(os.path.join(out, "sweep.svg"), result.rows)
    last = result.rows[-1]
    print(f"sweep: {len(rows)} scales in [{grid[0]:g}, {grid[-1]:g}], "
          f"{cfg['samples']} samples each")
    print(f"  last point: per-arc mean {last.estimate.per_arc_mean:.6g} "
          f"(normalized {last.estimate.normalized_per_arc:.4f})")
    print(f"  wrote {os.path.join(out, 'sweep.csv')}")
    return EXIT_OK


def run_verify(cfg: dict) -> int:
    domain = _load_shape(cfg["domain"])
    trajectory = _load_shape(cfg["trajectory"])
    window = None
    shrink = float(cfg["window_shrink"])
    if shrink < 1.0:
        template = centered_on_centroid(trajectory)
        window = build_window(domain, template, ref=(0.0, 0.0)).shrunk(shrink)
    measures = estimate_measures(
        domain,
        trajectory,
        int(cfg["samples"]),
        int(cfg["seed"]),
        streams=int(cfg["streams"]),
        tol=_tolerance(cfg),
        window=window,
        workers=int(cfg["workers"]),
    )
    rows, notices = report.verify_rows(measures, domain, trajectory)
    print(report.format_table(rows, report.VERIFY_COLUMNS))
    for note in notices:
        print(f"notice: {note}")
    failed = any(r["status"] == "fail" for r in rows)
    out = cfg["out"]
    payload = {
        "command": "verify",
        "version": __version__,
        **_meta(cfg),
        "window_measure": measures.window_measure,
        "resampled": measures.resampled,
        "rows": rows,
        "notices": notices,
        "failed": failed,
    }
    report.write_csv(os.path.join(out, "verify.csv"), report.VERIFY_COLUMNS, rows)
    report.write_json(os.path.join(out, "verify.json"), payload)
    if failed:
        print("verification FAILED (|z| > 4)", file=sys.stderr)
        return EXIT_VERIFY
    print("verification ok")
    return EXIT_OK


def run_critical(cfg: dict) -> int:
    domain = _load_shape(cfg["domain"])
    trajectory = _load_shape(cfg["trajectory"])
    result = find_critical_scale(
        domain,
        trajectory,
        (float(cfg["lambda_min"]), float(cfg["lambda_max"])),
        budget=int(cfg["samples"]),
        seed=int(cfg["seed"]),
    )
    payload = {
        "command": "critical",
        "version": __version__,
        "domain": cfg["domain"],
        "trajectory": cfg["trajectory"],
        "lambda_bounds": [float(cfg["lambda_min"]), float(cfg["lambda_max"])],
        "budget": int(cfg["samples"]),
        "seed": int(cfg["seed"]),
        "lambda_critical": result.lambda_critical,
        "witness": _motion_dict(result.witness_motion),
        "evaluations": result.evaluations,
        "bisection_steps": result.bisection_steps,
    }
    report.write_json(os.path.join(cfg["out"], "critical.json"), payload)
    print(f"critical scale (lower bound): {result.lambda_critical:.6g} "
          f"after {result.bisection_steps} bisection steps")
    return EXIT_OK


def run_embed(cfg: dict) -> int:
    container = _load_shape(cfg["domain"])
    candidate = _load_shape(cfg["trajectory"])
    rep = test_embeddability(
        container, candidate, int(cfg["samples"]), int(cfg["seed"])
    )
    decisive = rep.contained_z > 3.0
    disagree = decisive and (rep.fits != rep.statistical_fits)
    payload = {
        "command": "embed",
        "version": __version__,
        "container": cfg["domain"],
        "candidate": cfg["trajectory"],
        "samples": int(cfg["samples"]),
        "seed": int(cfg["seed"]),
        "fits": rep.fits,
        "witness": _motion_dict(rep.witness),
        "nc_estimate": {
            "value": rep.contained_measure.value,
            "std_error": rep.contained_measure.std_error,
            "samples": rep.contained_measure.samples,
            "window_measure": rep.contained_measure.window_measure,
        },
        "nc_z": rep.contained_z,
        "statistical_fits": rep.statistical_fits,
        "verdicts_disagree": disagree,
        "mean_gap": rep.mean_gap,
    }
    report.write_json(os.path.join(cfg["out"], "embed.json"), payload)
    verdict = "fits" if rep.fits else "does not fit"
    print(f"direct search: {verdict}"
          + (f" (witness at theta={rep.witness.theta:.4f}, "
             f"t=({rep.witness.tx:.4f}, {rep.witness.ty:.4f}))" if rep.witness else ""))
    print(f"statistical: containment z={rep.contained_z:.2f} "
          f"-> {'fits' if rep.statistical_fits else 'no evidence of fitting'}")
    if disagree:
        print("warning: the two verdicts disagree", file=sys.stderr)
    return EXIT_OK


def run_sample(cfg: dict) -> int:
    domain = _load_shape(cfg["domain"])
    trajectory = _load_shape(cfg["trajectory"])
    tol = _tolerance(cfg)
    run = run_pair(
        domain,
        trajectory,
        int(cfg["samples"]),
        int(cfg["seed"]),
        streams=int(cfg["streams"]),
        tol=tol,
        workers=int(cfg["workers"]),
    )
    try:
        est = mean_arc_from_run(run, ShapeSummary.of(domain))
    except NoIntersections:
        est = None

    payload = {
        "command": "sample",
        "version": __version__,
        **_meta(cfg),
        "window_measure": run.window.measure,
        "resampled": run.resampled,
    }
    legend = []
    if est is not None:
        payload.update(
            per_arc_mean=est.per_arc_mean,
            per_arc_stderr=est.per_arc_stderr,
            per_traj_mean=est.per_trajectory_mean,
            normalized_per_arc=est.normalized_per_arc,
            n_intersecting=est.intersecting_count,
            n_contained=est.contained_count,
            n_covering=est.covering_count,
            n_disjoint=est.disjoint_count,
        )
        legend = [
            f"per-arc mean   {est.per_arc_mean:.5g} +/- {est.per_arc_stderr:.2g}",
            f"per-traj mean  {est.per_trajectory_mean:.5g}",
            f"normalized     {est.normalized_per_arc:.4f}",
        ]
        print(f"per-arc mean {est.per_arc_mean:.6g} +/- {est.per_arc_stderr:.2g} "
              f"({est.intersecting_count} crossing placements)")
    else:
        payload.update(per_arc_mean=None)
        legend = ["no crossing placements observed"]
        print("no crossing placements observed")
    out = cfg["out"]
    report.write_json(os.path.join(out, "sample.json"), payload)
    if cfg["svg"]:
        template = centered_on_centroid(trajectory)
        shown = sample_placements(
            domain,
            template,
            min(40, int(cfg["samples"])),
            np.random.SeedSequence([int(cfg["seed"]), 7]),
            tol=tol,
        )
        scene = [(s.motion.transform(template.vertices), s.report) for s in shown]
        svg_path = os.path.join(out, "scene.svg")
        svg.render_scene(svg_path, domain, scene, legend)
        print(f"  wrote {svg_path}")
    return EXIT_OK


_RUNNERS = {
    "sweep": run_sweep,
    "verify": run_verify,
    "critical": run_critical,
    "embed": run_embed,
    "sample": run_sample,
}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        os.makedirs(cfg["out"], exist_ok=True)
        return _RUNNERS[cfg["command"]](cfg)
    except DegenerateFlood as exc:
        print(f"degenerate flood: {exc}", file=sys.stderr)
        return EXIT_FLOOD
    except (ConfigError, InvalidSpec, InvalidScale, ParseError, ValidationError,
            BoundsInvalid, NoIntersections) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
