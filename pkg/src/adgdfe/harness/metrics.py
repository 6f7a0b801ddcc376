"""Learning-curve metrics."""

from __future__ import annotations

import numpy as np

NOT_CONVERGED = -1


def moving_average(x, width: int = 100) -> np.ndarray:
    """Trailing mean over up to ``width`` samples; same length as ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if width < 1:
        raise ValueError("width must be >= 1")
    c = np.concatenate([[0.0], np.cumsum(x)])
    idx = np.arange(1, x.size + 1)
    lo = np.maximum(idx - width, 0)
    return (c[idx] - c[lo]) / (idx - lo)


def convergence_iterations(curve, level: float, hold: int = 200) -> int:
    """First index where ``curve <= level`` and the next ``hold`` points stay
    ``<= 2 * level``. Returns ``NOT_CONVERGED`` when there is none.

    Near the end of the curve only the points that exist are checked.
    """
    c = np.asarray(curve, dtype=np.float64)
    if c.size == 0:
        raise ValueError("empty curve")
    if not level > 0:
        raise ValueError("level must be > 0")
    bad = c > 2 * level
    # next_bad[i] = smallest j >= i with bad[j], or len(c)
    n = c.size
    pos = np.where(bad, np.arange(n), n)
    next_bad = np.minimum.accumulate(pos[::-1])[::-1]
    after = np.append(next_bad[1:], n)
    ok = (c <= level) & (after > np.arange(n) + hold)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else NOT_CONVERGED


def asymptotic_mse(curve, tail_fraction: float = 0.1) -> float:
    """Mean of the last ``tail_fraction`` of the curve."""
    c = np.asarray(curve, dtype=np.float64)
    if c.size == 0:
        raise ValueError("empty curve")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must be in (0, 1]")
    n_tail = max(1, int(round(c.size * tail_fraction)))
    return float(c[-n_tail:].mean())
