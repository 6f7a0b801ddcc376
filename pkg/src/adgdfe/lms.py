"""LMS identification of an FIR channel from a known training input."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class LmsFilter:
    """Plain (non-normalised) LMS transversal filter.

    Weights start at zero. When an active mask is set, weights outside the
    mask are held at exactly 0.0 and skipped by the update.
    """

    def __init__(self, n_taps: int, step_size: float, active_mask=None):
        if n_taps < 1:
            raise ValueError(f"filter needs at least one tap, got {n_taps}")
        if step_size < 0:
            raise ValueError(f"step size must be >= 0, got {step_size}")
        self.weights = np.zeros(n_taps)
        self.step_size = float(step_size)
        self.active_mask: Optional[np.ndarray] = None
        self._gate = np.ones(n_taps)
        if active_mask is not None:
            self.set_active_mask(active_mask)

    @property
    def n_taps(self) -> int:
        return self.weights.size

    def set_active_mask(self, mask) -> None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != self.weights.shape:
            raise ValueError(f"mask length {mask.size} != filter length {self.n_taps}")
        self.active_mask = mask.copy()
        self._gate = mask.astype(np.float64)
        self.weights[~mask] = 0.0

    def clear_active_mask(self) -> None:
        self.active_mask = None
        self._gate = np.ones(self.n_taps)

    def predict(self, regressor) -> float:
        return float(self.weights @ regressor)

    def step(self, regressor, desired: float) -> float:
        """One LMS update; returns the a-priori error ``desired - w.y``."""
        y = np.asarray(regressor, dtype=np.float64)
        if y.shape != self.weights.shape:
            raise ValueError(f"regressor length {y.size} != filter length {self.n_taps}")
        e = desired - float(self.weights @ y)
        # adding mu*e*0.0 keeps a +0.0 weight at +0.0
        self.weights += (self.step_size * e) * (y * self._gate)
        return e


def lms_step(filt: LmsFilter, regressor, desired: float) -> float:
    return filt.step(regressor, desired)


def regressors(x, n_taps: int) -> np.ndarray:
    """Row ``i`` is ``[x_i, x_{i-1}, ..., x_{i-L+1}]`` with zeros before t=0."""
    x = np.asarray(x, dtype=np.float64)
    padded = np.concatenate([np.zeros(n_taps - 1), x])
    windows = np.lib.stride_tricks.sliding_window_view(padded, n_taps)
    return windows[:, ::-1]


@dataclass
class WeightTrajectory:
    """Record of one identification run.

    ``snapshots[j]`` holds the weights after iteration ``snapshot_iters[j]``
    (1-based update count). ``estimate_error`` is only filled when the true
    channel was supplied.
    """

    sq_error: np.ndarray
    snapshots: np.ndarray
    snapshot_iters: np.ndarray
    final_weights: np.ndarray
    estimate_error: Optional[np.ndarray] = None
    active_count: list = field(default_factory=list)

    @property
    def n_iter(self) -> int:
        return self.sq_error.size


def identify_channel(
    x,
    received,
    filt: LmsFilter,
    snapshot_stride: int = 10,
    guide=None,
    truth=None,
) -> WeightTrajectory:
    """Adapt ``filt`` so that ``w * x`` tracks ``received``.

    Parameters
    ----------
    x, received : array_like
        Channel input and (noisy) channel output, equal length.
    filt : LmsFilter
        Updated in place.
    snapshot_stride : int
        Keep the weight vector every ``snapshot_stride`` iterations.
    guide : optional
        Object with ``observe(desired, regressor, weights) -> mask | None``.
        It sees the pre-update weights; a returned mask is applied to the
        filter before the next update.
    truth : array_like, optional
        True channel taps; enables the per-iteration ``||w - h||^2`` curve.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(received, dtype=np.float64)
    if x.shape != u.shape:
        raise ValueError(f"input length {x.size} != received length {u.size}")
    L = filt.n_taps
    if L > x.size:
        raise ValueError(f"filter length {L} exceeds data length {x.size}")
    if snapshot_stride < 1:
        raise ValueError("snapshot_stride must be >= 1")
    h = None
    if truth is not None:
        h = np.asarray(truth, dtype=np.float64)
        if h.shape != filt.weights.shape:
            raise ValueError("truth length must match filter length")

    Y = regressors(x, L)
    n = x.size
    sq_error = np.empty(n)
    est_err = np.empty(n) if h is not None else None
    snaps, snap_iters, counts = [], [], []
    for i in range(n):
        y = Y[i]
        if guide is not None:
            mask = guide.observe(u[i], y, filt.weights)
            if mask is not None:
                filt.set_active_mask(mask)
                counts.append((i + 1, int(mask.sum())))
        e = filt.step(y, u[i])
        sq_error[i] = e * e
        if h is not None:
            d = filt.weights - h
            est_err[i] = d @ d
        if (i + 1) % snapshot_stride == 0:
            snaps.append(filt.weights.copy())
            snap_iters.append(i + 1)
    return WeightTrajectory(
        sq_error=sq_error,
        snapshots=np.array(snaps).reshape(-1, L),
        snapshot_iters=np.array(snap_iters, dtype=int),
        final_weights=filt.weights.copy(),
        estimate_error=est_err,
        active_count=counts,
    )


def batch_least_squares(x, received, n_taps: int) -> np.ndarray:
    """Least-squares FIR fit over the same regressor windows LMS sees."""
    Y = regressors(x, n_taps)
    sol, *_ = np.linalg.lstsq(Y, np.asarray(received, dtype=np.float64), rcond=None)
    return sol
