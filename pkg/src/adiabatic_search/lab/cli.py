"""Command line entry point: ``sweep``, ``evolve``, ``figure`` and ``check``.

Every option can also come from a ``--config`` file of ``key = value`` lines
(keys are flag names without the leading dashes; ``#`` starts a comment).
Flags given on the command line override the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError, SweepError


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


def _paths(text: str) -> tuple[str, ...]:
    # poly:a0,a1 contains commas itself, so split on commas only before a name
    out: list[str] = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        if out and out[-1].startswith("poly:") and not piece[0].isalpha():
            out[-1] += "," + piece
        else:
            out.append(piece)
    return tuple(out)


@dataclass(frozen=True)
class Option:
    name: str
    type: object
    default: object
    help: str
    flag: bool = False  # store_true switch


_COMMON = (Option("workers", int, 1, "worker threads"),)

OPTIONS = {
    "sweep": (
        Option("paths", _paths, "linear,sin,square,sin2,sin3,cubic", "comma-separated path names"),
        Option("n", int, 100, "number of items N"),
        Option("m", int, 1, "number of marked items M"),
        Option("tmin", float, 10.0, "smallest total time"),
        Option("tmax", float, 1e4, "largest total time"),
        Option("points", int, 200, "log-spaced T points"),
        Option("dt", float, 0.01, "RK4 step"),
        Option("smooth", int, 9, "geometric-mean window (odd)"),
        Option("out", Path, Path("out"), "output directory"),
        Option("no_renormalize", _bool, False, "skip per-step renormalization", flag=True),
    ) + _COMMON,
    "evolve": (
        Option("path", str, "cubic", "path name or poly:a0,a1,..."),
        Option("n", int, 10, "number of items N"),
        Option("m", int, 1, "number of marked items M"),
        Option("T", float, 1000.0, "total time"),
        Option("record", int, 10, "record every k-th step"),
        Option("dt", float, 0.01, "RK4 step"),
        Option("out", Path, Path("out"), "output directory"),
        Option("full", _bool, False, "integrate the dense N-level model", flag=True),
        Option("no_renormalize", _bool, False, "skip per-step renormalization", flag=True),
    ),
    "figure": (
        Option("id", str, "fig9", "figure id (fig2..fig9 or all)"),
        Option("out", Path, Path("out"), "output directory"),
    ) + _COMMON,
    "check": _COMMON,
}
_KNOWN_KEYS = {o.name for opts in OPTIONS.values() for o in opts}


def read_config(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _KNOWN_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiabatic-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in OPTIONS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", type=Path, help="key = value file; flags override it")
        for opt in options:
            flag = "--" + opt.name.replace("_", "-")
            if opt.flag:
                p.add_argument(flag, dest=opt.name, action="store_const", const=True, default=None, help=opt.help)
            else:
                p.add_argument(flag, dest=opt.name, default=None, help=f"{opt.help} (default {opt.default})")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags, converting types."""
    from_file = read_config(args.config) if args.config else {}
    settings = {}
    for opt in OPTIONS[args.command]:
        value = getattr(args, opt.name)
        if value is None:
            value = from_file.get(opt.name, opt.default)
        if isinstance(value, str) or opt.type is _paths:
            try:
                value = opt.type(value)
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"bad value for {opt.name}: {value!r}") from exc
        settings[opt.name] = value
    return settings


def _evolution(dt: float, renormalize: bool, stride: int = 10):
    from ..dynamics import EvolutionConfig

    return EvolutionConfig(steps_per_unit_time=1.0 / dt, record_stride=stride, renormalize=renormalize)


def cmd_sweep(cfg: dict) -> int:
    from .sweep import SweepSpec, log_grid, run_sweep

    spec = SweepSpec(
        n_items=cfg["n"], n_marked=cfg["m"], paths=cfg["paths"],
        t_grid=log_grid(cfg["tmin"], cfg["tmax"], cfg["points"]),
        evolution=_evolution(cfg["dt"], not cfg["no_renormalize"]),
        smoothing_window=cfg["smooth"], workers=cfg["workers"],
    )
    result = run_sweep(spec)
    for f in result.write(cfg["out"]):
        print(f)
    return 0


def cmd_evolve(cfg: dict) -> int:
    from .. import deviation as dev
    from ..dynamics import evolve_full, evolve_reduced
    from ..model import FullSearchModel
    from ..schedule import parse_path

    model = FullSearchModel.first_marked(cfg["n"], cfg["m"])
    path = parse_path(cfg["path"], cfg["T"])
    config = _evolution(cfg["dt"], not cfg["no_renormalize"], cfg["record"])
    tr = evolve_full(model, path, config) if cfg["full"] else evolve_reduced(model.r, path, config)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    files = [tr.to_csv(out / "trajectory.csv")]
    if model.r < 0.5:  # the fixed point and its deviation centres need r < 1/2
        files.append(dev.residual_against_center(tr, 2).to_csv(out / "residual.csv"))
    meta = {
        "path": path.name, "n_items": model.n_items, "n_marked": model.n_marked, "r": model.r,
        "T": path.total_time, "dt": config.dt, "step_size": tr.step_size, "record_stride": config.record_stride,
        "renormalize": config.renormalize, "model": tr.meta["model"], "delta": tr.error,
    }
    meta_path = out / "trajectory.meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    files.append(meta_path)
    for f in files:
        print(f)
    print(f"delta = {tr.error:.6e}")
    return 0


def cmd_figure(cfg: dict) -> int:
    from .figures import FIGURES, reproduce_figure

    ids = FIGURES if cfg["id"] == "all" else (cfg["id"],)
    status = 0
    for fig in ids:
        report = reproduce_figure(fig, cfg["out"], workers=cfg["workers"])
        for f in report.files:
            print(f)
        for check in report.checks:
            print(f"{fig}: {check.line()}")
        if not report.passed:
            status = 1
    return status


def cmd_check(cfg: dict) -> int:
    from .acceptance import run_all

    results = run_all(workers=cfg["workers"])
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


COMMANDS = {"sweep": cmd_sweep, "evolve": cmd_evolve, "figure": cmd_figure, "check": cmd_check}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (ValueError, OSError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
