# invlabel/cli.py

"""
Command-line interface.

    invlabel <command> --config run.json [--set key.path=JSON ...] [--output-dir DIR]

Commands: poincare, solve-bvp, solve-evp, validate, scan, eval-grid. Every
command reads one `RunConfig` JSON document; `--set` overrides are applied to
the raw document before validation. Outputs are JSON and CSV files in the
output directory and carry no timestamps, so identical runs give identical
files.
"""

import argparse
import copy
import json
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from .bvp import solve_bvp
from .constants import ExitCode, ScanParameter, ScanSolver
from .error import ConfigError, FileIOError, NumericalError
from .evp import eigen_models, solve_evp
from .ext.flowmaps import pendulum_hamiltonian, perturbed_pendulum_hamiltonian
from .files import read_json, write_csv, write_json
from .geometry import sobol_sample
from .label import eval_grid, export_sample_values, load_model, normalize_maxabs, save_model
from .maps import build_map
from .models import (BoundarySpec, KernelSpec, LabelModel, PendulumMapSpec, PerturbedPendulumMapSpec,
                     RotationMapSpec, RunConfig, SampleSet, ScanConfig, StandardMapSpec, ValidationReport,
                     ZeroRegionBoundarySpec)
from .runner import ScanRunner
from .sampling import build_samples, cache_matches, load_samples, save_samples
from .validation import validation_score

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


# --- Configuration ---

def parse_override(text: str) -> Tuple[List[str], Any]:
    """
    Splits a `dotted.key=JSON` override.

    Values that are not valid JSON are taken as plain strings.

    Raises:
        ConfigError: If there is no `=` or the key is empty.
    """
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {text!r} is not of the form key.path=value")
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    return key.strip().split("."), parsed


def apply_overrides(raw: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Returns a copy of a raw config document with the overrides applied in order."""
    doc = copy.deepcopy(raw)
    for text in overrides:
        keys, value = parse_override(text)
        node = doc
        for key in keys[:-1]:
            child = node.get(key)
            if child is None:
                child = node[key] = {}
            elif not isinstance(child, dict):
                raise ConfigError(f"override {text!r}: {key!r} is not an object")
            node = child
        node[keys[-1]] = value
    return doc


def load_config(path: str, overrides: Sequence[str] = ()) -> RunConfig:
    """
    Reads, overrides and validates a run configuration.

    Raises:
        FileIOError: If the file cannot be read.
        ConfigError: If it is not valid JSON or does not validate.
    """
    try:
        raw = read_json(path)
    except ValueError as e:
        raise ConfigError(f"Config file {path} is not valid UTF-8 JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config file {path} does not contain a JSON object")
    try:
        return RunConfig.model_validate(apply_overrides(raw, overrides))
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration in {path}:\n{e}") from e


def _require_kernel(cfg: RunConfig) -> KernelSpec:
    if cfg.kernel is None:
        raise ConfigError("this command needs a 'kernel' in the config")
    return cfg.kernel


def _require_boundary(cfg: RunConfig) -> BoundarySpec:
    if cfg.boundary is None:
        raise ConfigError("this command needs a 'boundary' in the config")
    return cfg.boundary


def _config_block(cfg: RunConfig) -> Dict[str, Any]:
    return cfg.model_dump(mode="json")


def _observable(cfg: RunConfig) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    """The reference Hamiltonian of a built-in flow, if the map has one."""
    if isinstance(cfg.map, PendulumMapSpec):
        return pendulum_hamiltonian
    if isinstance(cfg.map, PerturbedPendulumMapSpec):
        return perturbed_pendulum_hamiltonian
    return None


def _score(cfg: RunConfig, model: LabelModel) -> ValidationReport:
    v = cfg.validation
    domain = cfg.domain if v.domain is None else v.domain
    return validation_score(model, cfg.map, domain, v.J, v.birkhoff(), v.sobol_skip)


def get_samples(cfg: RunConfig, use_cache: bool = True) -> SampleSet:
    """
    Builds the training samples of a config, going through `output.samples_cache` if set.

    A cache file is only used when its metadata names the config's map,
    domain, N and skip and its inputs are exactly the Sobol points the config
    asks for; otherwise the samples are rebuilt and the cache rewritten.
    """
    cache = cfg.output.samples_cache if use_cache else None
    if cache and os.path.exists(cache):
        if cache_matches(cache, cfg.map, cfg.domain, cfg.N, cfg.sobol_skip):
            samples = load_samples(cache, cfg.domain, cfg.map, cfg.sobol_skip)
            expected = sobol_sample(cfg.domain, cfg.N, cfg.sobol_skip)
            if samples.N == cfg.N and np.array_equal(samples.inputs, expected):
                return samples
        logger.warning(f"Sample cache {cache} does not match the config (map, N, skip or domain); rebuilding")
    samples = build_samples(cfg.map, cfg.domain, cfg.N, cfg.sobol_skip)
    if cache:
        save_samples(samples, cache)
    return samples


# --- Commands ---

def cmd_poincare(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Iterates each seed `poincare.steps` times; poincare.csv (trajectory_id, step, x, y)."""
    pc = cfg.poincare
    if pc.seeds:
        seeds = np.array([[s.x, s.y] for s in pc.seeds], dtype=float)
    else:
        seeds = sobol_sample(cfg.domain, pc.n_seeds, pc.sobol_skip)
    orbit = build_map(cfg.map).iterate(seeds, pc.steps)
    rows = (
        (j, t, orbit[t, j, 0], orbit[t, j, 1])
        for j in range(seeds.shape[0])
        for t in range(pc.steps + 1)
    )
    write_csv(os.path.join(out_dir, "poincare.csv"), ["trajectory_id", "step", "x", "y"], rows)


def cmd_solve_bvp(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Fits a label by the boundary value problem; model.json, report.json, samples.csv."""
    boundary = _require_boundary(cfg)
    samples = get_samples(cfg)
    model, report = solve_bvp(samples, _require_kernel(cfg), boundary, cfg.epsilon)
    if cfg.normalize:
        model = normalize_maxabs(model, cfg.domain)
    save_model(model, os.path.join(out_dir, "model.json"))
    write_json(os.path.join(out_dir, "report.json"), {
        "report": report.model_dump(mode="json"),
        "provenance": model.provenance.model_dump(mode="json"),
        "config": _config_block(cfg),
    })
    export_sample_values(model, samples, os.path.join(out_dir, "samples.csv"), _observable(cfg))


def cmd_solve_evp(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Solves the eigenvalue problem; eigen.json and one model_<i>.json per pair."""
    boundary = _require_boundary(cfg)
    if not isinstance(boundary, ZeroRegionBoundarySpec):
        raise ConfigError("solve-evp needs a zero_region boundary")
    if not cfg.n_eigs < 2 * cfg.N:
        raise ConfigError(f"n_eigs = {cfg.n_eigs} must be smaller than 2N = {2 * cfg.N}")
    samples = get_samples(cfg)
    result = solve_evp(samples, _require_kernel(cfg), boundary, cfg.epsilon, cfg.delta, cfg.n_eigs)
    files = []
    for i, model in enumerate(eigen_models(result, samples, boundary), start=1):
        if cfg.normalize:
            model = normalize_maxabs(model, cfg.domain)
        name = f"model_{i}.json"
        save_model(model, os.path.join(out_dir, name))
        files.append(name)
    write_json(os.path.join(out_dir, "eigen.json"), {
        "eigenvalues": [p.eigenvalue for p in result.pairs],
        "rayleigh": [p.rayleigh for p in result.pairs],
        "shift_delta": result.shift_delta,
        "epsilon": result.epsilon,
        "iterations": result.iterations,
        "jitter": result.jitter,
        "models": files,
        "config": _config_block(cfg),
    })


def cmd_validate(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Scores a saved model; validation.json and validation_pairs.csv (h, wb)."""
    model = load_model(args.model)
    report = _score(cfg, model)
    write_json(os.path.join(out_dir, "validation.json"), {
        "S": report.S,
        "J": report.J,
        "T": report.T,
        "model": args.model,
        "config": _config_block(cfg),
    })
    write_csv(os.path.join(out_dir, "validation_pairs.csv"), ["h", "wb"], report.pairs)


def cmd_eval_grid(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Evaluates a saved model on a grid; grid.csv (x, y, h)."""
    model = load_model(args.model)
    nx = cfg.grid.nx if args.nx is None else args.nx
    ny = cfg.grid.ny if args.ny is None else args.ny
    steps = cfg.grid.advect if args.advect is None else args.advect
    advect = (cfg.map, steps) if steps else None
    eval_grid(model, cfg.domain, nx, ny, path=os.path.join(out_dir, "grid.csv"), advect=advect)


# --- Scans ---

SAMPLE_PRESERVING = (ScanParameter.SIGMA, ScanParameter.SIGMA0, ScanParameter.EPSILON)


def _scan_variant(cfg: RunConfig, parameter: ScanParameter, value: float) -> RunConfig:
    """The config of one scan point."""
    if parameter == ScanParameter.K:
        if not isinstance(cfg.map, StandardMapSpec):
            raise ConfigError("a k scan needs the standard map")
        return cfg.model_copy(update={"map": StandardMapSpec(k=value)})
    if parameter == ScanParameter.OMEGA:
        if not isinstance(cfg.map, RotationMapSpec):
            raise ConfigError("an omega scan needs the rotation map")
        return cfg.model_copy(update={"map": RotationMapSpec(omega=value)})
    if parameter == ScanParameter.SIGMA:
        return cfg.model_copy(update={"kernel": KernelSpec(family=_require_kernel(cfg).family, sigma=value)})
    if parameter == ScanParameter.SIGMA0:
        return cfg.model_copy(update={"kernel": KernelSpec(family=_require_kernel(cfg).family, sigma0=value)})
    if parameter == ScanParameter.EPSILON:
        if not value > 0:
            raise ConfigError(f"epsilon scan values must be > 0, got {value}")
        return cfg.model_copy(update={"epsilon": value})
    if parameter == ScanParameter.N:
        if value != int(value) or value < 1:
            raise ConfigError(f"N scan values must be positive integers, got {value}")
        return cfg.model_copy(update={"N": int(value)})
    raise ConfigError(f"Unknown scan parameter {parameter!r}")


def _axes(scan: ScanConfig) -> List[ScanParameter]:
    axes = [ScanParameter(scan.parameter)]
    if scan.secondary is not None:
        axes.append(ScanParameter(scan.secondary.parameter))
    return axes


def _scan_points(scan: ScanConfig) -> List[Tuple[float, ...]]:
    """Every combination of axis values, primary outer, each axis in ascending order."""
    primary = sorted(scan.values)
    if scan.secondary is None:
        return [(v,) for v in primary]
    return [(v, w) for v in primary for w in sorted(scan.secondary.values)]


def _fit(cfg: RunConfig, samples: SampleSet) -> LabelModel:
    """The label a validation scan scores: the first eigenfunction for zero_region, else the BVP fit."""
    boundary = _require_boundary(cfg)
    if isinstance(boundary, ZeroRegionBoundarySpec):
        result = solve_evp(samples, _require_kernel(cfg), boundary, cfg.epsilon, cfg.delta, 1)
        return eigen_models(result, samples, boundary)[0]
    return solve_bvp(samples, _require_kernel(cfg), boundary, cfg.epsilon)[0]


def _density_width(cfg: RunConfig, model: LabelModel, N: int) -> float:
    """sigma0 of the fit; an absolute width is reported as sigma * sqrt(N)."""
    kernel = _require_kernel(cfg)
    if kernel.sigma0 is not None:
        return kernel.sigma0
    return model.kernel.sigma * math.sqrt(N)


def _scan_job(
    cfg: RunConfig, axes: Sequence[ScanParameter], solver: ScanSolver, point: Tuple[float, ...],
    samples: Optional[SampleSet],
) -> Callable[[], List[Any]]:
    def job() -> List[Any]:
        s = samples if samples is not None else get_samples(cfg, use_cache=False)
        row: List[Any] = [int(v) if p == ScanParameter.N else v for p, v in zip(axes, point)]
        if solver == ScanSolver.BVP:
            _, report = solve_bvp(s, _require_kernel(cfg), _require_boundary(cfg), cfg.epsilon)
            return row + [report.R, report.E_inv, report.E_bd, report.E_K]
        if solver == ScanSolver.EVP:
            result = solve_evp(s, _require_kernel(cfg), _require_boundary(cfg), cfg.epsilon, cfg.delta, cfg.n_eigs)
            return row + [p.eigenvalue for p in result.pairs]
        model = _fit(cfg, s)
        report = _score(cfg, model)
        if ScanParameter.N not in axes:
            row.append(s.N)
        if ScanParameter.SIGMA0 not in axes:
            row.append(_density_width(cfg, model, s.N))
        return row + [report.S]
    return job


def scan_header(scan: ScanConfig, n_eigs: int) -> List[str]:
    axes = _axes(scan)
    header = [p.value for p in axes]
    solver = ScanSolver(scan.solver)
    if solver == ScanSolver.BVP:
        return header + ["R", "E_inv", "E_bd", "E_K"]
    if solver == ScanSolver.EVP:
        return header + [f"lambda_{i}" for i in range(1, n_eigs + 1)]
    if ScanParameter.N not in axes:
        header.append(ScanParameter.N.value)
    if ScanParameter.SIGMA0 not in axes:
        header.append(ScanParameter.SIGMA0.value)
    return header + ["S"]


def run_scan(cfg: RunConfig) -> List[List[Any]]:
    """
    Runs the scan of a config and returns its rows, ordered by parameter value.

    With a secondary axis every primary value is paired with every secondary
    value. Samples are shared across the scan when no swept parameter changes
    the map or N, and rebuilt per point otherwise.
    """
    scan = cfg.scan
    if scan is None:
        raise ConfigError("the scan command needs a 'scan' section in the config")
    axes = _axes(scan)
    solver = ScanSolver(scan.solver)
    points = _scan_points(scan)
    variants = []
    for point in points:
        variant = cfg
        for parameter, value in zip(axes, point):
            variant = _scan_variant(variant, parameter, value)
        variants.append(variant)

    shared = None
    if all(p in SAMPLE_PRESERVING for p in axes):
        shared = get_samples(cfg)
    jobs = [_scan_job(variant, axes, solver, point, shared) for variant, point in zip(variants, points)]
    logger.info(f"Scanning {' x '.join(p.value for p in axes)} over {len(jobs)} points with {scan.workers} workers")
    return ScanRunner(scan.workers).run_sync(jobs)


def cmd_scan(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> None:
    """Sweeps one parameter, or two with `scan.secondary`; scan.csv with one row per point."""
    rows = run_scan(cfg)
    write_csv(os.path.join(out_dir, "scan.csv"), scan_header(cfg.scan, cfg.n_eigs), rows)


# --- Entry Point ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invlabel",
        description="Learn approximately invariant label functions of 2D symplectic maps.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="run configuration (JSON)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=JSON",
                        help="override a config key, e.g. --set kernel.sigma=0.1 (repeatable)")
    common.add_argument("--output-dir", default=None, help="defaults to output.directory of the config")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("poincare", parents=[common], help="iterate seeds for a Poincare plot").set_defaults(
        handler=cmd_poincare)
    sub.add_parser("solve-bvp", parents=[common], help="fit a label by the boundary value problem").set_defaults(
        handler=cmd_solve_bvp)
    sub.add_parser("solve-evp", parents=[common], help="solve the invariant eigenvalue problem").set_defaults(
        handler=cmd_solve_evp)
    p = sub.add_parser("validate", parents=[common], help="score a model with weighted Birkhoff averages")
    p.add_argument("--model", required=True, help="model file")
    p.set_defaults(handler=cmd_validate)
    sub.add_parser("scan", parents=[common], help="sweep one parameter").set_defaults(handler=cmd_scan)
    p = sub.add_parser("eval-grid", parents=[common], help="evaluate a model on a grid")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--advect", type=int, default=None, help="evaluate h after this many map iterations")
    p.set_defaults(handler=cmd_eval_grid)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the CLI and returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        cfg = load_config(args.config, args.set)
        out_dir = args.output_dir or cfg.output.directory
        args.handler(cfg, args, out_dir)
    except (ConfigError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return ExitCode.CONFIG
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return ExitCode.NUMERICAL
    except FileIOError as e:
        logger.error(f"I/O failure: {e}")
        return ExitCode.IO
    return ExitCode.OK
