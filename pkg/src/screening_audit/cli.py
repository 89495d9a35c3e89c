"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
Flags override values from ``--config``; the merged configuration is written
to ``config.json`` in the output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .bayes import ADDS_TEST, Prevalence, TestCharacteristics, build_event_tree, posterior_report, prevalence_sweep
from .diagnostics import diagnose
from .errors import ScreeningAuditError
from .render import posterior_table, tree_text
from .replica import (
    DatasetSpec,
    Hyperparams,
    ScoringConfig,
    compare_protocols,
    evaluate_grouped_loo,
    evaluate_leaked,
    generate_synthetic_dataset,
)
from .simulation import SimulationConfig, simulate_screening
from .svg import sweep_svg, tree_svg

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

CONFIG_KEYS = {"test", "prior", "population", "dataset_spec", "hyperparams", "scoring",
               "replicates", "seed", "grid", "protocols", "holdout"}
DEFAULT_GRID = {"min": 1e-5, "max": 0.5, "points": 200}
HIGHLIGHT_PRIOR = 0.05


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: configuration error: {message}\n")


def _add_test_flags(p):
    p.add_argument("--sensitivity", type=float, help="P(+ | Lie), a fraction")
    p.add_argument("--specificity", type=float, help="P(- | No-lie), a fraction")


def _add_common(p, out=True):
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--seed", type=int)
    if out:
        p.add_argument("--out", type=Path, help="output directory (default: ./output)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="screening-audit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("posterior", help="joint matrix, PPV/NPV and expected counts")
    _add_test_flags(p)
    p.add_argument("--prior", type=float)
    p.add_argument("--population", type=float)
    _add_common(p)

    p = sub.add_parser("sweep", help="PPV/NPV across a log grid of priors")
    _add_test_flags(p)
    p.add_argument("--grid-min", type=float)
    p.add_argument("--grid-max", type=float)
    p.add_argument("--grid-points", type=int)
    _add_common(p)

    p = sub.add_parser("tree", help="event tree of outcomes")
    _add_test_flags(p)
    p.add_argument("--prior", type=float)
    p.add_argument("--population", type=float)
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo screening of a finite population")
    _add_test_flags(p)
    p.add_argument("--prior", type=float)
    p.add_argument("--population", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("replicate", help="synthetic ADDS experiment under both protocols")
    p.add_argument("--dataset", type=Path, help="segment CSV to use instead of generating one")
    p.add_argument("--export-dataset", action="store_true", help="also write dataset.csv")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("diagnose", help="dimensionality, ICC and effective sample size")
    p.add_argument("--dataset", type=Path, help="CSV with a group-id column")
    p.add_argument("--group-column", default="participant_id")
    p.add_argument("--holdout", type=int, help="groups reserved for testing (default 2)")
    _add_common(p)
    return parser


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    return cfg


def merge(cfg: dict, args: argparse.Namespace) -> dict:
    """Overlay command-line flags on the config file values."""
    cfg = json.loads(json.dumps(cfg))
    test = dict(cfg.get("test") or {})
    for name in ("sensitivity", "specificity"):
        if getattr(args, name, None) is not None:
            test[name] = getattr(args, name)
    if test:
        cfg["test"] = test
    for flag, key in (("prior", "prior"), ("population", "population"), ("replicates", "replicates"),
                      ("seed", "seed"), ("holdout", "holdout")):
        if getattr(args, flag, None) is not None:
            cfg[key] = getattr(args, flag)
    grid = dict(cfg.get("grid") or {})
    for flag, key in (("grid_min", "min"), ("grid_max", "max"), ("grid_points", "points")):
        if getattr(args, flag, None) is not None:
            grid[key] = getattr(args, flag)
    if grid:
        cfg["grid"] = grid
    return cfg


def _test(cfg) -> TestCharacteristics:
    if "test" not in cfg:
        return ADDS_TEST
    try:
        return TestCharacteristics.from_dict(cfg["test"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"test: {exc}") from None


def _prior(cfg) -> Prevalence:
    if "prior" not in cfg:
        raise ConfigError("prior is required (--prior or config 'prior')")
    try:
        return Prevalence(float(cfg["prior"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _population(cfg, default):
    n = cfg.get("population", default)
    try:
        n = float(n)
    except (TypeError, ValueError):
        raise ConfigError(f"population must be a number, got {n!r}") from None
    if not n > 0:
        raise ConfigError(f"population must be positive, got {n!r}")
    return n


def _section(cls, cfg, key, **defaults):
    data = dict(defaults)
    data.update(cfg.get(key) or {})
    try:
        return cls.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _seed(cfg) -> int:
    seed = cfg.get("seed", 0)
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return seed


def _outdir(args, cfg) -> Path:
    out = args.out if args.out is not None else Path("output")
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "config.json", cfg)
    return out


def cmd_posterior(args, cfg):
    test, prior = _test(cfg), _prior(cfg)
    n = _population(cfg, 1000)

    def run():
        report = posterior_report(test, prior, n)
        print(posterior_table(report))
        if args.out is not None:
            io.write_json(_outdir(args, cfg) / "posterior.json", report.to_dict())

    return run


def cmd_sweep(args, cfg):
    test = _test(cfg)
    grid = {**DEFAULT_GRID, **cfg.get("grid", {})}
    try:
        lo, hi, k = float(grid["min"]), float(grid["max"]), int(grid["points"])
    except (TypeError, ValueError):
        raise ConfigError(f"grid: min/max must be numbers and points an integer, got {grid}") from None
    if k < 1:
        raise ConfigError(f"grid-points must be >= 1, got {k}")
    if not 0 < lo <= hi <= 1:
        raise ConfigError(f"grid needs 0 < grid-min <= grid-max <= 1, got [{lo}, {hi}]")
    if k > 1 and lo == hi:
        raise ConfigError("grid-min equals grid-max but more than one point was requested")
    priors = np.geomspace(lo, hi, k) if k > 1 else np.array([lo])
    if k > 1 and lo <= HIGHLIGHT_PRIOR <= hi:
        # the highlighted scenario always gets an exact row
        priors = np.union1d(priors, [HIGHLIGHT_PRIOR])
    curve = prevalence_sweep(test, priors.tolist())

    def run():
        out = _outdir(args, cfg)
        io.write_sweep_csv(out / "sweep.csv", curve)
        (out / "sweep.svg").write_text(sweep_svg(curve))
        print(f"wrote {len(curve)} points to {out / 'sweep.csv'} and {out / 'sweep.svg'}")

    return run


def cmd_tree(args, cfg):
    test, prior = _test(cfg), _prior(cfg)
    n = _population(cfg, 10000)

    def run():
        tree = build_event_tree(test, prior, n)
        print(tree_text(tree))
        out = _outdir(args, cfg)
        (out / "tree.svg").write_text(tree_svg(tree))

    return run


def cmd_simulate(args, cfg):
    test, prior = _test(cfg), _prior(cfg)
    n = cfg.get("population", 1000)
    try:
        sim = SimulationConfig(test, prior, n, cfg.get("replicates", 1), _seed(cfg))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None

    def run():
        result = simulate_screening(sim, n_jobs=args.jobs)
        out = _outdir(args, cfg)
        io.write_replicates_csv(out / "replicates.csv", result.counts)
        io.write_json(out / "summary.json", result.summary())
        ppv = result.ppv.estimate
        print(f"{sim.replicates} replicate(s) of {sim.population_size}: empirical PPV "
              f"{'undefined' if ppv is None else f'{ppv:.4f}'}; mean referrals {result.mean_referrals:.1f}")

    return run


def _protocol_settings(cfg):
    p = dict(cfg.get("protocols") or {})
    unknown = set(p) - {"grouped_folds", "leaked_folds", "leakage_threshold"}
    if unknown:
        raise ConfigError(f"protocols: unknown key(s) {', '.join(sorted(unknown))}")
    return p.get("grouped_folds", 9), p.get("leaked_folds", 10), p.get("leakage_threshold", 5.0)


def _dataset_spec(cfg):
    seed = _seed(cfg)
    return _section(DatasetSpec, cfg, "dataset_spec", seed=seed)


def cmd_replicate(args, cfg):
    seed = _seed(cfg)
    hp = _section(Hyperparams, cfg, "hyperparams", seed=seed)
    scoring = _section(ScoringConfig, cfg, "scoring")
    g_folds, l_folds, threshold = _protocol_settings(cfg)
    if args.dataset is not None:
        if not args.dataset.exists():
            raise ConfigError(f"dataset CSV {args.dataset} does not exist")
        spec = None
    else:
        spec = _dataset_spec(cfg)

    def run():
        dataset = io.read_dataset_csv(args.dataset) if spec is None else generate_synthetic_dataset(spec)
        out = _outdir(args, cfg)
        if args.export_dataset:
            io.write_dataset_csv(out / "dataset.csv", dataset)
        grouped = evaluate_grouped_loo(dataset, hp, scoring, n_folds=g_folds, n_jobs=args.jobs)
        leaked = evaluate_leaked(dataset, hp, scoring, n_folds=l_folds, n_jobs=args.jobs)
        gap = compare_protocols(grouped, leaked, threshold)
        io.write_protocol_csv(out / "grouped_loo.csv", grouped)
        io.write_protocol_csv(out / "leaked_split.csv", leaked)
        io.write_table2_csv(out / "table2.csv", grouped, leaked)
        report = gap.to_dict()
        report["grouped"] = grouped.to_dict()
        report["leaked"] = leaked.to_dict()
        io.write_json(out / "gap.json", report)
        print(f"grouped  T {grouped.mean_truthful:6.2f} +/- {grouped.std_truthful:5.2f}   "
              f"D {grouped.mean_deceptive:6.2f} +/- {grouped.std_deceptive:5.2f}")
        print(f"leaked   T {leaked.mean_truthful:6.2f} +/- {leaked.std_truthful:5.2f}   "
              f"D {leaked.mean_deceptive:6.2f} +/- {leaked.std_deceptive:5.2f}")
        print(f"leakage flag: {str(gap.leakage_flag).lower()}")

    return run


def cmd_diagnose(args, cfg):
    holdout = cfg.get("holdout", 2)
    if not isinstance(holdout, int) or holdout < 0:
        raise ConfigError(f"holdout must be a non-negative integer, got {holdout!r}")
    if args.dataset is not None:
        if not args.dataset.exists():
            raise ConfigError(f"dataset CSV {args.dataset} does not exist")
        spec = None
    else:
        spec = _dataset_spec(cfg)

    def run():
        if spec is None:
            features, groups, _ = io.read_grouped_csv(args.dataset, args.group_column)
            report = diagnose(features, groups, holdout=holdout)
        else:
            report = diagnose(generate_synthetic_dataset(spec), holdout=holdout)
        out = _outdir(args, cfg)
        io.write_json(out / "diagnostics.json", report.to_dict())
        for note in report.notes:
            print(note)
        print(f"cod_flag: {str(report.cod_flag).lower()}  icc: {report.icc:.4f}  "
              f"effective sample size: {report.effective_sample_size:.2f}")

    return run


COMMANDS = {
    "posterior": cmd_posterior,
    "sweep": cmd_sweep,
    "tree": cmd_tree,
    "simulate": cmd_simulate,
    "replicate": cmd_replicate,
    "diagnose": cmd_diagnose,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge(load_config(args.config), args)
        run = COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        run()
    except ScreeningAuditError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
