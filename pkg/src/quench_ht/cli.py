"""Command-line front end: ``quench-ht sweep`` and ``quench-ht reproduce``."""
from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .experiment import (
    DEFAULT_SIGMA_GRID,
    DEFAULT_TAU_GRID,
    ExperimentConfig,
    SweepKind,
    SweepResult,
    TrialError,
    run_sweep,
    worker_count,
)
from .model import ModelId
from .noise import JitterMode

CSV_HEADER = ("model", "pairs", "sigma", "delta_tau", "mean_fidelity", "sd", "sample_size", "seed")

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2

_PI_RE = re.compile(r"^(?:(\d+)\s*\*\s*)?pi\s*/\s*(\d+)$")


class ConfigError(ValueError):
    pass


def parse_real(text: str) -> float:
    """Parse ``pi/INT``, ``INT*pi/INT`` or a plain decimal."""
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2))
        if den == 0:
            raise ConfigError(f"division by zero in {text!r}")
        return num * math.pi / den
    try:
        value = float(s)
    except ValueError:
        raise ConfigError(f"not a number or pi literal: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"non-finite value: {text!r}")
    return value


def parse_real_list(text: str) -> tuple[float, ...]:
    return tuple(parse_real(t) for t in text.split(",") if t.strip())


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"not a comma-separated integer list: {text!r}") from None


def fmt17(x: float) -> str:
    return format(x, ".17g")


def sigma_label(sigma: float) -> str:
    """``k*pi/90`` reduced to lowest terms when sigma is on that lattice."""
    k = round(sigma * 90 / math.pi)
    if k <= 0 or sigma != k * math.pi / 90:
        return fmt17(sigma)
    g = math.gcd(k, 90)
    num, den = k // g, 90 // g
    return f"pi/{den}" if num == 1 else f"{num}*pi/{den}"


# ---------------------------------------------------------------- output

def csv_text(result: SweepResult) -> str:
    cfg = result.config
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    grid_attr = "sigma" if cfg.sweep_kind is SweepKind.SIGMA else "delta_tau"
    for p in sorted(result.points, key=lambda p: (p.pairs, getattr(p, grid_attr))):
        writer.writerow(
            [
                cfg.model_id.value,
                p.pairs,
                repr(p.sigma),
                repr(p.delta_tau),
                repr(p.mean_fidelity),
                repr(p.sd),
                p.sample_size,
                cfg.seed,
            ]
        )
    return buf.getvalue()


def manifest_entries(cfg: ExperimentConfig, outputs: list[Path], command: str) -> dict[str, str]:
    return {
        "command": command,
        "model": cfg.model_id.value,
        "sweep": cfg.sweep_kind.value,
        "pairs": ",".join(str(r) for r in cfg.pair_counts),
        "sample_size": str(cfg.sample_size),
        "sigma_grid": ",".join(fmt17(x) for x in cfg.sigma_grid),
        "tau_grid": ",".join(fmt17(x) for x in cfg.tau_grid),
        "fixed_sigma": fmt17(cfg.fixed_sigma),
        "quench_time": fmt17(cfg.quench_time),
        "jitter_mode": cfg.jitter_mode.value,
        "seed": str(cfg.seed),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "outputs": ",".join(str(p) for p in outputs),
    }


def write_outputs(result: SweepResult, csv_path: Path, command: str, extra: list[Path] = ()) -> Path:
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(csv_text(result), encoding="utf-8", newline="\n")
    manifest_path = csv_path.with_name(csv_path.name + ".manifest")
    entries = manifest_entries(result.config, [csv_path, *extra], command)
    lines = [f"{k} = {entries[k]}" for k in sorted(entries)]
    manifest_path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return manifest_path


def format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    out = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    out.append("  ".join("-" * w for w in widths))
    out += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(out)


def summary_table(result: SweepResult) -> str:
    cfg = result.config
    grid_name = "sigma" if cfg.sweep_kind is SweepKind.SIGMA else "delta_tau"
    rows = []
    for p in result.points:
        g = p.sigma if cfg.sweep_kind is SweepKind.SIGMA else p.delta_tau
        label = sigma_label(g) if cfg.sweep_kind is SweepKind.SIGMA else f"{g:g}"
        rows.append([str(p.pairs), label, f"{p.mean_fidelity:.4f}", f"{p.sd:.4f}", str(p.sample_size)])
    title = f"model={cfg.model_id.value} sweep={cfg.sweep_kind.value} seed={cfg.seed}"
    return title + "\n" + format_table(["r", grid_name, "F_av", "SD", "n"], rows)


# ---------------------------------------------------------------- presets

# printed averages and SDs keyed by (k, r) with sigma = k*pi/90
TABLE1 = {
    (1, 3): (0.94, 0.13), (1, 6): (0.94, 0.16), (1, 12): (0.88, 0.21),
    (2, 3): (0.92, 0.16), (2, 6): (0.90, 0.18), (2, 12): (0.87, 0.20),
    (3, 3): (0.85, 0.21), (3, 6): (0.86, 0.21), (3, 12): (0.85, 0.21),
}
TABLE2 = {
    (1, 6): (0.83, 0.08), (1, 12): (0.956, 0.024),
    (2, 6): (0.82, 0.09), (2, 12): (0.91, 0.06),
    (3, 6): (0.79, 0.15), (3, 12): (0.88, 0.09),
    (4, 6): (0.68, 0.18), (4, 12): (0.84, 0.13),
    (5, 6): (0.67, 0.18), (5, 12): (0.81, 0.17),
    (6, 6): (0.59, 0.17), (6, 12): (0.79, 0.17),
    (7, 6): (0.56, 0.18), (7, 12): (0.69, 0.17),
    (8, 6): (0.56, 0.19), (8, 12): (0.63, 0.18),
    (9, 6): (0.57, 0.19), (9, 12): (0.59, 0.19),
}


@dataclass(frozen=True)
class Preset:
    model_id: ModelId
    sweep_kind: SweepKind
    pair_counts: tuple[int, ...]
    sigma_grid: tuple[float, ...] = DEFAULT_SIGMA_GRID
    reference: dict | None = None

    def config(self, seed: int) -> ExperimentConfig:
        return ExperimentConfig(
            model_id=self.model_id,
            sweep_kind=self.sweep_kind,
            pair_counts=self.pair_counts,
            sigma_grid=self.sigma_grid,
            tau_grid=DEFAULT_TAU_GRID,
            seed=seed,
        )


def _pi90(ks) -> tuple[float, ...]:
    return tuple(k * math.pi / 90 for k in ks)


PRESETS = {
    "fig1": Preset(ModelId.SIC, SweepKind.SIGMA, (3, 6, 12)),
    "fig2": Preset(ModelId.POLARIZATION, SweepKind.SIGMA, (3, 6, 12)),
    "fig3": Preset(ModelId.PAULI, SweepKind.SIGMA, (3, 6, 12)),
    "fig4": Preset(ModelId.TFIM2, SweepKind.SIGMA, (3, 6, 12)),
    "fig5": Preset(ModelId.TFIM2, SweepKind.TAU, (3, 12)),
    "fig6": Preset(ModelId.RF3, SweepKind.SIGMA, (6, 12)),
    "fig7": Preset(ModelId.RF3, SweepKind.TAU, (6, 12)),
    "table1": Preset(ModelId.TFIM2, SweepKind.SIGMA, (3, 6, 12), _pi90([1, 2, 3]), TABLE1),
    "table2": Preset(ModelId.RF3, SweepKind.SIGMA, (6, 12), _pi90(range(1, 10)), TABLE2),
}


def comparison_table(result: SweepResult, reference: dict) -> str:
    rows = []
    for p in result.points:
        k = round(p.sigma * 90 / math.pi)
        ref_mean, ref_sd = reference[(k, p.pairs)]
        rows.append(
            [
                sigma_label(p.sigma),
                str(p.pairs),
                f"{p.mean_fidelity:.3f}",
                f"{ref_mean:.3f}",
                f"{p.mean_fidelity - ref_mean:+.3f}",
                f"{p.sd:.3f}",
                f"{ref_sd:.3f}",
                f"{p.sd - ref_sd:+.3f}",
            ]
        )
    rows.sort(key=lambda r: (round(parse_real(r[0]), 12), int(r[1])))
    headers = ["sigma", "r", "F_av", "F_av(paper)", "dF", "SD", "SD(paper)", "dSD"]
    return format_table(headers, rows)


# ---------------------------------------------------------------- commands

def _run(cfg: ExperimentConfig) -> SweepResult:
    return run_sweep(cfg, workers=worker_count() or 1)


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        kind = SweepKind(args.sweep)
        cfg = ExperimentConfig(
            model_id=ModelId.parse(args.model),
            sweep_kind=kind,
            pair_counts=parse_int_list(args.pairs),
            sample_size=args.sample_size,
            sigma_grid=parse_real_list(args.sigma_grid) if args.sigma_grid else DEFAULT_SIGMA_GRID,
            tau_grid=parse_real_list(args.tau_grid) if args.tau_grid else DEFAULT_TAU_GRID,
            fixed_sigma=parse_real(args.fixed_sigma),
            quench_time=parse_real(args.quench_time),
            jitter_mode=JitterMode(args.jitter_mode),
            seed=args.seed,
        )
        workers = worker_count()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = run_sweep(cfg, workers=workers or 1)
    except TrialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    write_outputs(result, Path(args.out), "sweep")
    print(summary_table(result))
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    preset = PRESETS.get(args.target)
    if preset is None:
        print(f"error: unknown target {args.target!r}; valid targets: {', '.join(PRESETS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = preset.config(args.seed)
        workers = worker_count()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = run_sweep(cfg, workers=workers or 1)
    except TrialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out_dir = Path(args.out)
    csv_path = out_dir / f"{args.target}.csv"
    extra = []
    text = summary_table(result)
    if preset.reference is not None:
        comparison = comparison_table(result, preset.reference)
        cmp_path = out_dir / f"{args.target}_comparison.txt"
        out_dir.mkdir(parents=True, exist_ok=True)
        cmp_path.write_text(comparison + "\n", encoding="utf-8", newline="\n")
        extra.append(cmp_path)
        text = f"{args.target}: simulated vs paper (seed={cfg.seed})\n{comparison}"
    write_outputs(result, csv_path, f"reproduce {args.target}", extra)
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quench-ht",
        description="Hamiltonian tomography by the quantum quench protocol under random noise.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a fidelity sweep over a sigma or delta-tau grid")
    sw.add_argument("--model", required=True, help="sic | polarization | pauli | tfim2 | rf3")
    sw.add_argument("--sweep", choices=[k.value for k in SweepKind], default="sigma")
    sw.add_argument("--pairs", default="3,6,12", help="comma-separated pair counts")
    sw.add_argument("--sample-size", type=int, default=None, help="Hamiltonians per grid point (default 100, rf3: 25)")
    sw.add_argument("--sigma-grid", default=None, help="comma list, e.g. 'pi/90,pi/45' (default k*pi/90, k=1..15)")
    sw.add_argument("--tau-grid", default=None, help="comma list of jitter widths (default 0.01..0.10)")
    sw.add_argument("--fixed-sigma", default="pi/90", help="sigma used by tau sweeps")
    sw.add_argument("--quench-time", default="1", help="quench time T")
    sw.add_argument("--jitter-mode", choices=[m.value for m in JitterMode], default="entry")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", default="sweep.csv", help="output CSV path")
    sw.set_defaults(func=cmd_sweep)

    rp = sub.add_parser("reproduce", help="rerun the sweep behind a figure or table")
    rp.add_argument("--target", required=True, help=" | ".join(PRESETS))
    rp.add_argument("--seed", type=int, default=1)
    rp.add_argument("--out", default=".", help="output directory")
    rp.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
