"""End-to-end runs: train the channel estimate, design the DFE, equalize."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..adg import DECOUPLED, PLAIN, ActivityGuide, ActivityTracker
from ..channel import DiscreteChannel, transmit
from ..dfe import DfeCoefficients, design_from_channel, equalize, symbol_error_count
from ..lms import LmsFilter, identify_channel
from ..signals import gen_symbols, random_source, upsample
from .config import VARIANTS, ExperimentConfig
from .metrics import NOT_CONVERGED, asymptotic_mse, convergence_iterations, moving_average

CONVERGENCE_FACTOR = 5.0


@dataclass
class RunResult:
    config: ExperimentConfig
    truth: DiscreteChannel
    estimate: DiscreteChannel
    mse_raw: np.ndarray
    mse_smooth: np.ndarray
    estimate_error: np.ndarray
    estimate_error_smooth: np.ndarray
    snapshots: np.ndarray
    snapshot_iters: np.ndarray
    active_count: list
    coefficients: DfeCoefficients
    data_symbols: np.ndarray
    soft: np.ndarray
    decisions: np.ndarray
    skip: int
    symbol_errors: int
    asymptotic_mse: float
    convergence_iter: int
    error_free_from: int

    @property
    def squared_difference(self) -> np.ndarray:
        """Per-symbol ``(sent - equalizer soft output)^2``."""
        return (self.data_symbols - self.soft) ** 2

    def active_count_at(self, iteration: int) -> Optional[int]:
        """Active-tap count of the last classification at or before ``iteration``."""
        count = None
        for it, c in self.active_count:
            if it > iteration:
                break
            count = c
        return count


def make_guide(cfg: ExperimentConfig, n_taps: int) -> Optional[ActivityGuide]:
    if cfg.variant == "plain":
        return None
    mode = DECOUPLED if cfg.variant == "adg_td" else PLAIN
    tracker = ActivityTracker(n_taps, mode=mode, threshold_const=cfg.threshold_const)
    return ActivityGuide(tracker, cadence=cfg.cadence, hold=cfg.hold)


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    """Training-phase channel identification followed by decision-directed
    equalization of a fresh data block, all from ``cfg.seed``."""
    M = cfg.oversampling
    truth = cfg.channel()
    src = random_source(cfg.seed)
    n_train_sym = cfg.training_length // M
    symbols = gen_symbols(n_train_sym + cfg.data_length, src)
    x = upsample(symbols, M)
    received = transmit(truth, x, cfg.noise_variance, src)

    n_taps = len(truth)
    filt = LmsFilter(n_taps, cfg.step_size)
    traj = identify_channel(
        x[: cfg.training_length],
        received[: cfg.training_length],
        filt,
        snapshot_stride=cfg.snapshot_stride,
        guide=make_guide(cfg, n_taps),
        truth=truth.taps,
    )
    mask = filt.active_mask if filt.active_mask is not None else np.ones(n_taps, dtype=bool)
    estimate = DiscreteChannel(traj.final_weights, truth.spacing, mask)
    coeffs = design_from_channel(estimate, cfg.noise_variance, cfg.dfe)

    data = symbols[n_train_sym:]
    decisions, soft = equalize(coeffs, received[cfg.training_length :])
    skip = cfg.skip_symbols
    errors = symbol_error_count(decisions, data, skip)
    wrong = np.flatnonzero(decisions != data)

    est_smooth = moving_average(traj.estimate_error, cfg.smoothing)
    asym = asymptotic_mse(est_smooth, cfg.tail_fraction)
    conv = convergence_iterations(est_smooth, CONVERGENCE_FACTOR * asym) if asym > 0 else 0
    return RunResult(
        config=cfg,
        truth=truth,
        estimate=estimate,
        mse_raw=traj.sq_error,
        mse_smooth=moving_average(traj.sq_error, cfg.smoothing),
        estimate_error=traj.estimate_error,
        estimate_error_smooth=est_smooth,
        snapshots=traj.snapshots,
        snapshot_iters=traj.snapshot_iters,
        active_count=traj.active_count,
        coefficients=coeffs,
        data_symbols=data,
        soft=soft,
        decisions=decisions,
        skip=skip,
        symbol_errors=errors,
        asymptotic_mse=asym,
        convergence_iter=conv,
        error_free_from=int(wrong[-1]) + 1 if wrong.size else 0,
    )


@dataclass
class CompareTable:
    """Per (variant, seed) metrics plus per-variant means.

    ``convergence_iter`` is measured against a level shared by all
    variants of the same seed, ``5 x`` the lowest asymptotic MSE among
    them, so faster variants read as smaller numbers regardless of their
    own noise floor. ``self_convergence_iter`` uses each run's own floor.
    """

    rows: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)
    n_iter: int = 0

    COLUMNS = ("variant", "seed", "convergence_iter", "asymptotic_mse", "symbol_errors")

    def column(self, name: str, variant: Optional[str] = None) -> np.ndarray:
        return np.array([r[name] for r in self.rows if variant is None or r["variant"] == variant])

    def mean(self, name: str, variant: str) -> float:
        vals = self.column(name, variant).astype(float)
        if name.endswith("convergence_iter"):
            # censor runs that never converge at the curve length
            vals = np.where(vals == NOT_CONVERGED, self.n_iter, vals)
        return float(vals.mean()) if vals.size else float("nan")

    def means(self) -> dict:
        variants = sorted({r["variant"] for r in self.rows}, key=VARIANTS.index)
        return {
            v: {name: self.mean(name, v) for name in
                ("convergence_iter", "self_convergence_iter", "asymptotic_mse", "symbol_errors")}
            for v in variants
        }


def _run_seed(args) -> list:
    cfg, seed, variants = args
    return [run_experiment(cfg.replace(variant=v, seed=seed)) for v in variants]


def compare_variants(cfg: ExperimentConfig, seeds, variants=VARIANTS, jobs: int = 1) -> CompareTable:
    """Run every variant on every seed (same channel and noise per seed)."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    tasks = [(cfg, s, tuple(variants)) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_seed = list(pool.map(_run_seed, tasks))
    else:
        per_seed = [_run_seed(t) for t in tasks]

    table = CompareTable(n_iter=cfg.training_length)
    sums = {v: 0.0 for v in variants}
    for seed, results in zip(seeds, per_seed):
        level = CONVERGENCE_FACTOR * min(r.asymptotic_mse for r in results)
        for r in results:
            shared = convergence_iterations(r.estimate_error_smooth, level) if level > 0 else 0
            table.rows.append({
                "variant": r.config.variant,
                "seed": seed,
                "convergence_iter": shared,
                "self_convergence_iter": r.convergence_iter,
                "asymptotic_mse": r.asymptotic_mse,
                "symbol_errors": r.symbol_errors,
            })
            sums[r.config.variant] = sums[r.config.variant] + r.estimate_error_smooth
    table.curves = {v: sums[v] / len(seeds) for v in variants}
    return table


def sweep(cfg: ExperimentConfig, key: str, values) -> list:
    """Run ``cfg`` once per value of config field ``key``."""
    rows = []
    for value in values:
        r = run_experiment(cfg.replace(**{key: value}))
        rows.append({
            key: value,
            "convergence_iter": r.convergence_iter,
            "asymptotic_mse": r.asymptotic_mse,
            "symbol_errors": r.symbol_errors,
        })
    return rows
