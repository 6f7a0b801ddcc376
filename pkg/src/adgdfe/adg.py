"""Activity detection for sparse channel identification.

For tap ``k`` with regressor entry ``y_{i,k} = x_{i-k}`` the activity
measure after ``N`` samples is

    C_k = (mean_i u_i y_{i,k})^2 / mean_i y_{i,k}^2

and a tap counts as active when ``C_k`` exceeds

    T_N = c * var(u) * ln(N) / N.

The decoupled measure replaces ``u_i`` by the residual
``u_i - w.y_i + w_k y_{i,k}``, which strips the contribution of every
other estimated tap before correlating.
"""

from __future__ import annotations

import numpy as np

PLAIN = "plain"
DECOUPLED = "decoupled"


class NotReadyError(RuntimeError):
    """Raised when the tracker has seen too few samples to classify."""


class UndefinedMeasureError(ValueError):
    """Raised when a tap's regressor energy is still zero."""


class ActivityTracker:
    """Running correlation statistics for ``n_taps`` channel taps."""

    def __init__(self, n_taps: int, mode: str = PLAIN, threshold_const: float = 2.0):
        if mode not in (PLAIN, DECOUPLED):
            raise ValueError(f"mode must be {PLAIN!r} or {DECOUPLED!r}, got {mode!r}")
        if n_taps < 1:
            raise ValueError("tracker needs at least one tap")
        self.n_taps = n_taps
        self.mode = mode
        self.threshold_const = float(threshold_const)
        self.n = 0
        self.cross = np.zeros(n_taps)
        self.energy = np.zeros(n_taps)
        self.cross_decoupled = np.zeros(n_taps)
        self.sum_u = 0.0
        self.sum_u2 = 0.0
        self.active = np.zeros(n_taps, dtype=bool)

    def update(self, desired: float, regressor, weights=None) -> None:
        y = np.asarray(regressor, dtype=np.float64)
        if y.shape != (self.n_taps,):
            raise ValueError(f"regressor length {y.size} != {self.n_taps}")
        u = float(desired)
        self.n += 1
        self.cross += u * y
        self.energy += y * y
        self.sum_u += u
        self.sum_u2 += u * u
        if self.mode == DECOUPLED:
            w = np.zeros(self.n_taps) if weights is None else np.asarray(weights, dtype=np.float64)
            if w.shape != y.shape:
                raise ValueError(f"weights length {w.size} != {self.n_taps}")
            residual = u - float(w @ y) + w * y
            self.cross_decoupled += residual * y

    def _normalised(self, cross: np.ndarray, k=None) -> np.ndarray:
        energy = self.energy if k is None else self.energy[k]
        if np.any(energy <= 0):
            raise UndefinedMeasureError(f"zero regressor energy at tap {k}")
        mean_cross = (cross if k is None else cross[k]) / self.n
        return mean_cross**2 / (energy / self.n)

    def activity_measure(self, k: int) -> float:
        return float(self._normalised(self.cross, k))

    def decoupled_measure(self, k: int) -> float:
        if self.mode != DECOUPLED:
            raise ValueError("decoupled measure needs a tracker in decoupled mode")
        return float(self._normalised(self.cross_decoupled, k))

    def measures(self) -> np.ndarray:
        """Measures for all taps; taps with zero energy read as 0."""
        cross = self.cross_decoupled if self.mode == DECOUPLED else self.cross
        out = np.zeros(self.n_taps)
        ok = self.energy > 0
        if self.n:
            out[ok] = (cross[ok] / self.n) ** 2 / (self.energy[ok] / self.n)
        return out

    def desired_variance(self) -> float:
        if self.n == 0:
            return 0.0
        mean = self.sum_u / self.n
        return max(self.sum_u2 / self.n - mean * mean, 0.0)

    def activity_threshold(self) -> float:
        if self.n < 3:
            raise NotReadyError(f"need at least 3 samples, have {self.n}")
        return self.threshold_const * self.desired_variance() * np.log(self.n) / self.n

    def classify(self) -> tuple[np.ndarray, int]:
        """Return the active mask and its population count."""
        thr = self.activity_threshold()
        mask = self.measures() > thr
        self.active = mask
        return mask.copy(), int(mask.sum())


class ActivityGuide:
    """Feeds an :class:`ActivityTracker` and reclassifies every ``cadence``
    samples, with hysteresis for established taps.

    A tap that has been active for ``hold`` consecutive classifications
    survives one sub-threshold reading; a second consecutive miss drops it.
    Until the first classification no mask is imposed.
    """

    def __init__(self, tracker: ActivityTracker, cadence: int = 50, hold: int = 3):
        if cadence < 1:
            raise ValueError("cadence must be >= 1")
        self.tracker = tracker
        self.cadence = cadence
        self.hold = hold
        self.streak = np.zeros(tracker.n_taps, dtype=int)
        self.missed = np.zeros(tracker.n_taps, dtype=bool)
        self.mask = None
        self.history: list[tuple[int, int]] = []

    def observe(self, desired, regressor, weights):
        t = self.tracker
        t.update(desired, regressor, weights)
        if t.n < 3 or t.n % self.cadence:
            return None
        raw, _ = t.classify()
        keep = ~raw & (self.streak >= self.hold) & ~self.missed
        self.missed = keep
        self.streak = np.where(raw, self.streak + 1, np.where(keep, self.streak, 0))
        self.mask = raw | keep
        self.history.append((t.n, int(self.mask.sum())))
        return self.mask.copy()
