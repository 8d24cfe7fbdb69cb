"""Monte Carlo sweeps of reconstruction fidelity over noise grids."""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import ModelId, random_model
from .noise import JitterMode, NoiseConfig
from .protocol import QuenchTrial, run_quench, sample_states
from .rng import RandomStream, float_key

THREADS_ENV = "QUENCH_HT_THREADS"

DEFAULT_SIGMA_GRID = tuple(k * math.pi / 90 for k in range(1, 16))
DEFAULT_TAU_GRID = tuple(k / 100 for k in range(1, 11))


class SweepKind(str, enum.Enum):
    SIGMA = "sigma"
    TAU = "tau"


class TrialError(RuntimeError):
    def __init__(self, grid_value: float, pairs: int, trial_idx: int, cause: Exception):
        super().__init__(
            f"trial {trial_idx} failed at grid value {grid_value!r} with r={pairs}: {cause}"
        )
        self.grid_value = grid_value
        self.pairs = pairs
        self.trial_idx = trial_idx


def _check_grid(name: str, grid) -> tuple[float, ...]:
    grid = tuple(float(x) for x in grid)
    if not grid:
        raise ValueError(f"{name} must not be empty")
    if any(not math.isfinite(x) or x < 0 for x in grid):
        raise ValueError(f"{name} entries must be finite and non-negative")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return grid


@dataclass(frozen=True)
class ExperimentConfig:
    model_id: ModelId
    sweep_kind: SweepKind = SweepKind.SIGMA
    pair_counts: tuple[int, ...] = (3, 6, 12)
    sample_size: int | None = None
    sigma_grid: tuple[float, ...] = DEFAULT_SIGMA_GRID
    tau_grid: tuple[float, ...] = DEFAULT_TAU_GRID
    fixed_sigma: float = math.pi / 90
    quench_time: float = 1.0
    jitter_mode: JitterMode = JitterMode.PER_ENTRY
    seed: int = 0

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        model_id = ModelId.parse(self.model_id) if isinstance(self.model_id, str) else self.model_id
        set_("model_id", model_id)
        set_("sweep_kind", SweepKind(self.sweep_kind))
        set_("jitter_mode", JitterMode(self.jitter_mode))
        if self.sample_size is None:
            set_("sample_size", 25 if model_id is ModelId.RF3 else 100)
        if self.sample_size < 1:
            raise ValueError("sample_size must be >= 1")
        pairs = tuple(int(r) for r in self.pair_counts)
        if not pairs:
            raise ValueError("pair_counts must not be empty")
        if len(set(pairs)) != len(pairs):
            raise ValueError("pair_counts must not repeat")
        min_pairs = max(2, model_id.eta - 1)
        if any(r < min_pairs for r in pairs):
            raise ValueError(f"model {model_id.value} needs at least {min_pairs} pairs")
        set_("pair_counts", tuple(sorted(pairs)))
        set_("sigma_grid", _check_grid("sigma_grid", self.sigma_grid))
        set_("tau_grid", _check_grid("tau_grid", self.tau_grid))
        if not (self.fixed_sigma >= 0 and math.isfinite(self.fixed_sigma)):
            raise ValueError("fixed_sigma must be finite and non-negative")
        if not self.quench_time > 0:
            raise ValueError("quench_time must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def grid(self) -> tuple[float, ...]:
        return self.sigma_grid if self.sweep_kind is SweepKind.SIGMA else self.tau_grid

    def noise_at(self, grid_value: float) -> NoiseConfig:
        if self.sweep_kind is SweepKind.SIGMA:
            sigma, delta_tau = grid_value, 0.0
        else:
            sigma, delta_tau = self.fixed_sigma, grid_value
        return NoiseConfig(sigma, self.quench_time, delta_tau, self.jitter_mode)


@dataclass(frozen=True)
class PointResult:
    pairs: int
    sigma: float
    delta_tau: float
    mean_fidelity: float
    sd: float
    sample_size: int
    fidelities: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def standard_error(self) -> float:
        return self.sd / math.sqrt(self.sample_size)


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    points: list[PointResult]

    def point(self, pairs: int, grid_value: float) -> PointResult:
        key = "sigma" if self.config.sweep_kind is SweepKind.SIGMA else "delta_tau"
        for p in self.points:
            if p.pairs == pairs and getattr(p, key) == grid_value:
                return p
        raise KeyError((pairs, grid_value))

    def curve(self, pairs: int) -> list[PointResult]:
        return [p for p in self.points if p.pairs == pairs]


def _trial_streams(cfg: ExperimentConfig, grid_value: float, r: int, trial_idx: int):
    trial_rng = RandomStream(cfg.seed).child("trial", trial_idx)
    # Hamiltonian and states depend only on the trial index, so every grid
    # point and pair count scores the same Hamiltonian sample.
    noise_rng = (
        trial_rng.child(cfg.sweep_kind.value, float_key(grid_value)).child("pairs", r)
    )
    return trial_rng.child("hamiltonian"), trial_rng.child("states"), noise_rng


def run_trial(cfg: ExperimentConfig, grid_value: float, r: int, trial_idx: int) -> float:
    """Fidelity of one reconstruction; a pure function of its arguments."""
    if not 0 <= trial_idx < cfg.sample_size:
        raise ValueError(f"trial index {trial_idx} outside [0, {cfg.sample_size})")
    ham_rng, state_rng, noise_rng = _trial_streams(cfg, grid_value, r, trial_idx)
    model = random_model(cfg.model_id, ham_rng)
    states = sample_states(model.dim, r, state_rng)
    trial = QuenchTrial(model, states, cfg.noise_at(grid_value))
    return run_quench(trial, noise_rng).fidelity


def worker_count() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _guarded_trial(args) -> float:
    cfg, grid_value, r, idx = args
    try:
        return run_trial(cfg, grid_value, r, idx)
    except Exception as exc:
        raise TrialError(grid_value, r, idx, exc) from exc


def run_sweep(
    cfg: ExperimentConfig, workers: int | None = None, keep_trials: bool = False
) -> SweepResult:
    """Run every (pair count, grid point) cell over the Hamiltonian sample.

    Points are ordered by (pair count, grid value).  Aggregation happens in
    trial-index order, so results do not depend on ``workers``.
    """
    if workers is None:
        workers = worker_count() or 1
    cells = [(r, g) for r in cfg.pair_counts for g in cfg.grid]
    tasks = [(cfg, g, r, idx) for r, g in cells for idx in range(cfg.sample_size)]

    if workers == 1:
        values = [_guarded_trial(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_guarded_trial, tasks))

    fids = np.array(values).reshape(len(cells), cfg.sample_size)
    points = []
    for (r, g), row in zip(cells, fids):
        noise = cfg.noise_at(g)
        points.append(
            PointResult(
                pairs=r,
                sigma=noise.sigma,
                delta_tau=noise.delta_tau,
                mean_fidelity=float(np.mean(row)),
                sd=float(np.std(row)),
                sample_size=cfg.sample_size,
                fidelities=row.copy() if keep_trials else None,
            )
        )
    return SweepResult(cfg, points)
