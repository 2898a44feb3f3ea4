"""Error-versus-time sweeps over schedules, smoothing and oscillation patterns."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .. import _csv
from ..dynamics import EvolutionConfig, evolve_reduced
from ..errors import ConfigurationError, ResolutionError, SweepError
from ..schedule import NAMED_KINDS, parse_path

DEFAULT_PATHS = tuple(k.value for k in NAMED_KINDS)
DIP_RATIO = 100.0
TOUCHES_ZERO = "touches-zero"
BOUNDED_AWAY = "bounded-away"


def log_grid(t_min: float = 10.0, t_max: float = 1e4, points: int = 200) -> tuple[float, ...]:
    if not (0 < t_min < t_max) or points < 2:
        raise ConfigurationError("need 0 < t_min < t_max and at least two points")
    return tuple(float(x) for x in np.geomspace(t_min, t_max, points))


def _package_version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


@dataclass(frozen=True)
class SweepSpec:
    n_items: int = 100
    n_marked: int = 1
    paths: tuple[str, ...] = DEFAULT_PATHS
    t_grid: tuple[float, ...] = field(default_factory=log_grid)
    evolution: EvolutionConfig = EvolutionConfig()
    smoothing_window: int = 9
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        if not self.t_grid or any(t <= 0 for t in self.t_grid):
            raise ConfigurationError("t_grid must contain positive times")
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ConfigurationError("t_grid must be strictly increasing")
        if not 0 < 2 * self.n_marked <= self.n_items:
            raise ConfigurationError("need 0 < M <= N/2")
        _check_window(self.smoothing_window, len(self.t_grid))
        for name in self.paths:
            parse_path(name, 1.0)
        if self.workers < 1:
            raise ConfigurationError("workers must be positive")

    @property
    def r(self) -> float:
        return self.n_marked / self.n_items


@dataclass(frozen=True)
class PathSweep:
    times: np.ndarray
    raw: np.ndarray
    smoothed: np.ndarray


@dataclass(frozen=True)
class SweepResult:
    curves: dict[str, PathSweep]
    metadata: dict

    def to_csv(self, path) -> Path:
        rows = []
        for name, curve in self.curves.items():
            for t, d, ds in zip(curve.times, curve.raw, curve.smoothed):
                rows.append((name, _csv.amp(t), _csv.sci(d), _csv.sci(ds)))
        return _csv.write_rows(path, ("path", "T", "delta_raw", "delta_smoothed"), rows)

    def write(self, out_dir, stem: str = "sweep") -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = self.to_csv(out_dir / f"{stem}.csv")
        meta_path = out_dir / f"{stem}.meta.json"
        meta_path.write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")
        return [csv_path, meta_path]


def final_error(r: float, path_name: str, total_time: float, config: EvolutionConfig) -> float:
    path = parse_path(path_name, total_time)
    # only the end state is needed
    cfg = replace(config, record_stride=config.n_steps(total_time))
    return evolve_reduced(r, path, cfg).error


def run_sweep(spec: SweepSpec) -> SweepResult:
    """One reduced-model evolution per (path, T); results are independent of ``workers``."""
    jobs = [(name, T) for name in spec.paths for T in spec.t_grid]
    results: dict[tuple[str, float], float] = {}
    failures = {}

    def work(job):
        name, T = job
        return final_error(spec.r, name, T, spec.evolution)

    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        futures = {job: pool.submit(work, job) for job in jobs}
        for job, fut in futures.items():
            try:
                results[job] = fut.result()
            except Exception as exc:  # collected and re-raised with context below
                failures[job] = exc
    if failures:
        raise SweepError(failures)

    times = np.array(spec.t_grid)
    curves = {}
    for name in spec.paths:
        raw = np.array([results[(name, T)] for T in spec.t_grid])
        curves[name] = PathSweep(times, raw, smooth_series(raw, spec.smoothing_window))
    metadata = {
        "n_items": spec.n_items,
        "n_marked": spec.n_marked,
        "r": spec.r,
        "dt": spec.evolution.dt,
        "renormalize": spec.evolution.renormalize,
        "smoothing_window": spec.smoothing_window,
        "t_min": spec.t_grid[0],
        "t_max": spec.t_grid[-1],
        "points": len(spec.t_grid),
        "paths": list(spec.paths),
        "code_version": _package_version(),
    }
    return SweepResult(curves, metadata)


def _check_window(window: int, n: int) -> None:
    if window < 1 or window % 2 == 0:
        raise ConfigurationError(f"smoothing window must be a positive odd integer, got {window}")
    if window > n:
        raise ConfigurationError(f"smoothing window {window} exceeds the {n} grid points")


def smooth_series(values, window: int) -> np.ndarray:
    """Centred moving geometric mean; near the ends the window shrinks symmetrically."""
    values = np.asarray(values, dtype=float)
    _check_window(window, len(values))
    logs = np.log(np.maximum(values, np.finfo(float).tiny))
    half = window // 2
    n = len(values)
    out = values.copy()  # one-point windows keep the value bit-for-bit
    for i in range(n):
        k = min(half, i, n - 1 - i)
        if k:
            out[i] = np.exp(logs[i - k : i + k + 1].mean())
    return out


def smooth(result: SweepResult, window: int) -> SweepResult:
    curves = {
        name: PathSweep(c.times, c.raw, smooth_series(c.raw, window)) for name, c in result.curves.items()
    }
    return SweepResult(curves, {**result.metadata, "smoothing_window": window})


def smoothed_error_at(
    r: float,
    path_name: str,
    total_time: float,
    config: EvolutionConfig | None = None,
    window: int = 9,
    log_step: float = math.log(1e3) / 199,
) -> float:
    """Smoothed error at an arbitrary T.

    Runs the ``window`` grid points centred on ``total_time`` with the log
    spacing of the default grid and returns their geometric mean, i.e. the
    value the default smoothing would give if T were a grid point.
    """
    config = config or EvolutionConfig()
    half = window // 2
    _check_window(window, window)
    times = total_time * np.exp(log_step * np.arange(-half, half + 1))
    raw = [final_error(r, path_name, float(T), config) for T in times]
    return float(np.exp(np.mean(np.log(np.maximum(raw, np.finfo(float).tiny)))))


def dip_ratios(values) -> np.ndarray:
    """For every interior local minimum, (smaller neighbouring local maximum) / minimum."""
    v = np.asarray(values, dtype=float)
    dv = np.diff(v)
    sign = np.sign(dv)
    minima = np.nonzero((sign[:-1] < 0) & (sign[1:] > 0))[0] + 1
    maxima = np.nonzero((sign[:-1] > 0) & (sign[1:] < 0))[0] + 1
    ratios = []
    for i in minima:
        left = maxima[maxima < i]
        right = maxima[maxima > i]
        if not len(left) or not len(right):
            continue
        neighbour = min(v[left[-1]], v[right[0]])
        ratios.append(neighbour / max(v[i], np.finfo(float).tiny))
    return np.array(ratios)


def oscillation_pattern(result: SweepResult, path_name: str, min_points: int = 100) -> str:
    """Classify the raw error curve of one path.

    ``touches-zero`` if some local minimum lies at least 100x below both of
    its neighbouring local maxima, ``bounded-away`` otherwise.
    """
    curve = result.curves[path_name]
    if len(curve.raw) < min_points:
        raise ResolutionError(f"need at least {min_points} T-points, have {len(curve.raw)}")
    ratios = dip_ratios(curve.raw)
    return TOUCHES_ZERO if len(ratios) and ratios.max() >= DIP_RATIO else BOUNDED_AWAY
