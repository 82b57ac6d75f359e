"""Command line front end.

    filastab analyze CONFIG [--out DIR] [--seed N] [--resolution N] [--format json|text]
    filastab sweep CONFIG ...
    filastab verify [CONFIG] ...
    filastab dump-curve CONFIG ...
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .config import AnalysisConfig, default_config, load_config
from .curve_geometry import curve_table
from .equilibrium import solve_B0
from .errors import FilamentError
from .serialize import HUMAN_DIGITS, dumps, fmt_float, write_csv, write_json


def _g(x) -> str:
    return fmt_float(float(x), HUMAN_DIGITS)


def _text_summary(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    geo = report.get("geometry", {})
    if geo:
        lines.append(
            f"geometry: L = {_g(geo['L'])}, mean kappa = {_g(geo['mean_kappa'])}, "
            f"planar = {geo['planar']}"
        )
    modes = report.get("modes")
    if modes:
        kp, kq = modes["k_perp"]["roots"], modes["k_par"]["roots"]
        lines.append(f"k_perp = +-{_g(abs(kp[0]))}   k_par = +-{_g(abs(kq[0]))}")
        sel = modes["selected"]
        lines.append(f"omega0 = {_g(sel['omega0'])}   Va = {_g(sel['Va'])} (branch {modes['selected_branch']})")
    st = report.get("stability")
    if st:
        lines.append(f"Im omega = {_g(st['im_omega'])}: {st['class']} ({st['note']})")
    if "rows" in report:
        header = report["parameters"] + ["im_omega", "class", "Va"]
        lines.append("  ".join(header))
        for row in report["rows"]:
            lines.append("  ".join(_g(row[h]) if isinstance(row[h], float) else str(row[h]) for h in header))
    disc = report.get("discrepancies")
    if disc:
        lines.append(f"B0 forms max |diff| = {_g(disc['b0_forms']['max_abs_difference'])}")
        cs = disc["continuity_sign"]
        lines.append(
            f"growth formula root sign {cs['root_satisfying_growth_formula']}, "
            f"squared relation zeroed by sign {cs['root_zeroing_squared_relation']}"
        )
        lines.append(
            f"equilibrium current residual = {_g(disc['equilibrium_current_residual']['magnitude'])}"
        )
    return "\n".join(lines) + "\n"


def _load(args) -> AnalysisConfig:
    cfg = load_config(args.config) if args.config else default_config()
    return cfg.with_overrides(seed=args.seed, resolution=args.resolution)


def _out_dir(args, cfg: AnalysisConfig) -> Path:
    out = Path(args.out) if args.out else cfg.base_dir / cfg["run"]["output_dir"]
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_geometry(out: Path, cfg: AnalysisConfig, geom) -> None:
    header, table = curve_table(geom.curve, geom.frame)
    write_csv(out / "curve.csv", header, table.tolist())


def cmd_analyze(args) -> dict:
    cfg = _load(args)
    geom = analysis.prepare_geometry(cfg)
    report = analysis.evaluate(cfg, geom).to_dict()
    out = _out_dir(args, cfg)
    write_json(out / "report.json", report)
    _write_geometry(out, cfg, geom)
    coeffs = analysis.build_coefficients(cfg, geom.frame)
    c0 = cfg["equilibrium"]["c0"]
    cols = [geom.curve.arc_length, solve_B0(coeffs, c0, "printed_34"), solve_B0(coeffs, c0, "divergence_33")]
    write_csv(out / "b0_profile.csv", ["s", "B0_printed_34", "B0_divergence_33"],
              np.column_stack(cols).tolist())
    return report


def cmd_sweep(args) -> dict:
    cfg = _load(args)
    result = analysis.run_sweep(cfg)
    report = result.to_dict(cfg.to_dict())
    out = _out_dir(args, cfg)
    write_json(out / "report.json", report)
    write_csv(out / "summary.csv", result.header, result.rows())
    return report


def cmd_verify(args) -> dict:
    cfg = _load(args)
    report = analysis.run_verification(cfg)
    write_json(_out_dir(args, cfg) / "report.json", report)
    return report


def cmd_dump_curve(args) -> dict:
    cfg = _load(args)
    geom = analysis.prepare_geometry(cfg)
    _write_geometry(_out_dir(args, cfg), cfg, geom)
    return {"command": "dump-curve", "geometry": geom.summary(cfg["tolerances"]["constraint"])}


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "dump-curve": cmd_dump_curve,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="filastab", description="Planar plasma filament stability analysis")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", nargs="?" if name == "verify" else None,
                       help="YAML config (verify falls back to the built-in solar loop)")
        p.add_argument("--out", help="output directory (default: run.output_dir next to the config)")
        p.add_argument("--seed", type=int, help="seed for randomized verification draws")
        p.add_argument("--resolution", type=int, help="override curve.resolution")
        p.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except FilamentError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(dumps(report) if args.format == "json" else _text_summary(report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
