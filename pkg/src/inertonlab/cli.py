"""Command line entry point.

Usage::

    inertonlab <scenario> --config <path> --out <dir> [--format text|json]

Exit codes: 0 success, 1 invalid configuration, 2 verification failure,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dynamics, figures, mechanics, model, quantization, trajectories
from .config import FORMATS, SCENARIOS, ConfigError, RunConfig, load_config
from .report import emit_csv, emit_report, table_text, write_text
from .verify import run_verification

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_IO = 3

ORACLE_TOLERANCE = 1e-7


class ScenarioFailed(Exception):
    pass


def _grid(cfg: RunConfig, dq):
    return trajectories.time_grid(cfg.t_end, cfg.samples_per_period, dq.T)


def scenario_analytic(cfg: RunConfig):
    dq = model.derive_quantities(cfg.params)
    series = mechanics.attach_diagnostics(trajectories.sample_trajectory(_grid(cfg, dq), dq), dq)
    path = emit_csv(series, cfg.out_dir / "trajectory.csv")
    print(f"analytic: {len(series)} samples -> {path}")


def scenario_integrate(cfg: RunConfig):
    dq = model.derive_quantities(cfg.params)
    grid = _grid(cfg, dq)
    series = dynamics.integrate(dynamics.canonical_initial_state(dq), (0.0, grid[-1]), dq, cfg.integrator, t_eval=grid)
    mechanics.attach_diagnostics(series, dq)
    emit_csv(series, cfg.out_dir / "trajectory.csv")
    err = dynamics.oracle_errors(series, dq)
    rows = np.column_stack([series.t, err, err.max(axis=1)])
    write_text(
        cfg.out_dir / "oracle_errors.csv",
        table_text(("t", "err_X", "err_Xdot", "err_x", "err_xdot", "max_err"), rows),
    )
    worst = float(err.max())
    print(f"integrate: {len(series)} samples, {len(series.meta['events'])} reflections, max oracle error {worst:.3e}")
    if worst > ORACLE_TOLERANCE:
        raise ScenarioFailed(f"max oracle error {worst:.3e} exceeds {ORACLE_TOLERANCE:g}")


def scenario_verify(cfg: RunConfig):
    rep = run_verification(cfg)
    suffix = "json" if cfg.report_format == "json" else "txt"
    path = emit_report(rep, cfg.out_dir / f"report.{suffix}", cfg.report_format)
    for chk in rep.checks:
        print(f"[{'PASS' if chk.passed else 'FAIL'}] {chk.id} {chk.title}")
    print(f"verify: {rep.status} -> {path}")
    if not rep.passed:
        raise ScenarioFailed("verification failed")


def scenario_figures(cfg: RunConfig):
    dq = model.derive_quantities(cfg.params)
    if dq.v0 == 0:
        raise model.ParameterError("figures are scaled by v0 and need v0 > 0")
    series = mechanics.attach_diagnostics(trajectories.sample_trajectory(_grid(cfg, dq), dq), dq)
    emit_csv(series, cfg.out_dir / "trajectory.csv")
    a = figures.plot_four_panel(series, dq.v0, dq.c, dq.T, dq.Lam, cfg.out_dir / "particle_cloud.svg")
    b = figures.plot_period_ruler(series, dq.v0, dq.T, dq.Lam, cfg.out_dir / "periods.svg")
    print(f"figures: {a}, {b}")


def quantize_summary(dq) -> dict:
    db = quantization.de_broglie(dq)
    J = quantization.cyclic_action(dq.E, dq.M, dq.T)
    return {
        "E": dq.E,
        "M": dq.M,
        "T": dq.T,
        "h": dq.h,
        "hbar": dq.hbar,
        "J": J,
        "2ET": 2.0 * dq.E * dq.T,
        "X_max": quantization.turning_point(dq.E, dq.M, dq.T),
        "S1(X_max)": quantization.shortened_action(quantization.turning_point(dq.E, dq.M, dq.T), dq.E, dq.M, dq.T),
        "lambda": dq.lam,
        "de_broglie_wavelength": db.wavelength,
        "wavelength_residual": db.wavelength_residual,
        "nu": db.nu,
        "1/2T": 1.0 / (2.0 * dq.T),
        "nu_residual": db.nu_residual,
        "total_energy_Mc2": dq.total_energy,
        "nu_if_total_energy": dq.total_energy / dq.h,
    }


def scenario_quantize(cfg: RunConfig):
    dq = model.derive_quantities(cfg.params)
    summary = quantize_summary(dq)  # rejects the rest case before any table is built
    table = quantization.action_table(dq.E, dq.M, dq.T, n_points=cfg.samples_per_period + 1)
    exact = quantization.shortened_action_closed_form(table.X, dq.E, dq.M, dq.T)
    write_text(cfg.out_dir / "action.csv", table_text(("X", "S1_quadrature", "S1_closed_form"), np.column_stack([table.X, table.S1, exact])))
    if cfg.report_format == "json":
        text = json.dumps(summary, indent=2) + "\n"
        path = write_text(cfg.out_dir / "quantization.json", text)
    else:
        width = max(len(k) for k in summary)
        text = "".join(f"{k.ljust(width)}  {v!r}\n" for k, v in summary.items())
        path = write_text(cfg.out_dir / "quantization.txt", text)
    print(f"quantize: J={summary['J']!r} (2ET={summary['2ET']!r}) -> {path}")


SCENARIO_FUNCS = {
    "analytic": scenario_analytic,
    "integrate": scenario_integrate,
    "verify": scenario_verify,
    "figures": scenario_figures,
    "quantize": scenario_quantize,
}


def run_scenario(cfg: RunConfig) -> int:
    try:
        SCENARIO_FUNCS[cfg.scenario](cfg)
    except ScenarioFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except dynamics.IntegrationError as exc:
        print(f"error: integration failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (model.ParameterError, dynamics.DegenerateSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; argparse's default status 2 means verification failure here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="inertonlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True, help="key-value configuration file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--format", choices=FORMATS, default=None, help="report format (default from config, else text)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, scenario=args.scenario, out_dir=Path(args.out), report_format=args.format)
    except ConfigError as exc:
        print(f"error: invalid config {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_scenario(cfg)


if __name__ == "__main__":
    sys.exit(main())
