"""Fractionally-spaced decision-feedback equalizer.

The equalizer output for symbol ``k`` is

    soft_k = sum_{n=-N1}^{N2} c_n y_{kM-n} + sum_{i=1}^{N3} F_i d_{k-i}

with the feedforward filter ``c`` running on ``M`` samples per symbol and
the feedback filter ``F`` on past symbol decisions (or known training
symbols). Coefficients are designed from a channel estimate and then held
fixed; the feedback filter is never adapted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import DiscreteChannel

TRAINING = "training"
DECISION_DIRECTED = "decision_directed"


class DesignError(RuntimeError):
    """The equalizer could not be designed from the given channel estimate."""

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class DfeConfig:
    n1: int = 4  # anticausal feedforward taps
    n2: int = 2  # causal feedforward taps
    n3: int = 4  # feedback taps
    M: int = 2  # samples per symbol

    def __post_init__(self):
        if min(self.n1, self.n2, self.n3) < 0:
            raise ValueError(f"tap spans must be >= 0: {self}")
        if self.M < 1:
            raise ValueError(f"oversampling factor must be >= 1, got {self.M}")

    @property
    def n_feedforward(self) -> int:
        return self.n1 + self.n2 + 1


@dataclass(frozen=True)
class DfeCoefficients:
    """``feedforward[j]`` is ``c_n`` for ``n = j - n1``; ``feedback[i-1]`` is ``F_i``."""

    feedforward: np.ndarray
    feedback: np.ndarray
    config: DfeConfig

    def __post_init__(self):
        ff = np.array(self.feedforward, dtype=np.float64)
        fb = np.array(self.feedback, dtype=np.float64)
        if ff.size != self.config.n_feedforward or fb.size != self.config.n3:
            raise ValueError("coefficient lengths do not match the configuration")
        object.__setattr__(self, "feedforward", ff)
        object.__setattr__(self, "feedback", fb)


def slicer(x: float) -> float:
    """Binary decision: ``+1`` for ``x >= 0``, else ``-1``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot slice non-finite value {x}")
    return 1.0 if x >= 0 else -1.0


def design_from_channel(
    estimate: DiscreteChannel,
    noise_variance: float,
    cfg: DfeConfig,
    zero_forcing: bool = False,
) -> DfeCoefficients:
    """Design DFE coefficients from an estimated channel.

    The feedforward filter solves a ridge-regularised least-squares problem
    on the symbol-spaced samples of the combined response: unit main cursor,
    zero precursors, zero post-cursors beyond the feedback span; post-cursors
    ``1..N3`` are left free. The ridge weight is ``noise_variance`` (the
    MMSE solution for unit-power symbols and white noise), or 0 with
    ``zero_forcing``, in which case the minimum-norm solution is taken.
    The feedback taps are the negated post-cursors of the resulting
    combined response.
    """
    h = np.asarray(estimate.taps, dtype=np.float64)
    M = cfg.M
    if not math.isclose(estimate.spacing * M, 1.0, rel_tol=1e-9):
        raise ValueError(f"estimate spacing {estimate.spacing} does not match T/{M}")
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    if not np.all(np.isfinite(h)) or not np.any(h):
        raise DesignError("channel estimate is zero or non-finite", estimate)

    n_ff = cfg.n_feedforward
    L = h.size
    n_comb = n_ff + L - 1
    conv = np.zeros((n_comb, n_ff))
    for j in range(n_ff):
        conv[j : j + L, j] = h
    # combined index q corresponds to p = q - n1
    rows, target = [], []
    for q in range(n_comb):
        p = q - cfg.n1
        if p % M:
            continue
        j = p // M
        if 1 <= j <= cfg.n3:
            continue
        rows.append(q)
        target.append(1.0 if j == 0 else 0.0)
    A = conv[rows]
    t = np.array(target)
    lam = 0.0 if zero_forcing else float(noise_variance)
    if lam > 0:
        A = np.vstack([A, math.sqrt(lam) * np.eye(n_ff)])
        t = np.concatenate([t, np.zeros(n_ff)])
    c, *_ = np.linalg.lstsq(A, t, rcond=None)
    if not np.all(np.isfinite(c)):
        raise DesignError("feedforward solve produced non-finite taps", estimate)
    g = conv @ c
    main = g[cfg.n1]
    if not main > 1e-3:
        raise DesignError(f"main cursor {main:.3g} is not reachable by the feedforward span", estimate)
    F = np.zeros(cfg.n3)
    for i in range(1, cfg.n3 + 1):
        q = cfg.n1 + i * M
        if q < n_comb:
            F[i - 1] = -g[q]
    return DfeCoefficients(c, F, cfg)


def feedforward_output(coeffs: DfeCoefficients, received) -> np.ndarray:
    """Linear part of the equalizer output, one value per symbol."""
    cfg = coeffs.config
    y = np.asarray(received, dtype=np.float64)
    n_sym = -(-y.size // cfg.M)
    # pad so y_{kM-n} is defined for every k and every n in [-n1, n2]
    padded = np.concatenate([np.zeros(cfg.n2), y, np.zeros(cfg.n1 + cfg.M)])
    z = np.zeros(n_sym)
    for j, c in enumerate(coeffs.feedforward):
        n = j - cfg.n1
        start = cfg.n2 - n
        z += c * padded[start : start + n_sym * cfg.M : cfg.M]
    return z


def equalize(
    coeffs: DfeCoefficients,
    received,
    reference=None,
    mode: str = DECISION_DIRECTED,
) -> tuple[np.ndarray, np.ndarray]:
    """Run the DFE over ``received`` (``M`` samples per symbol).

    Returns ``(decisions, soft)``, one entry per symbol. Samples outside the
    received block count as zero, as do feedback symbols before the block.
    In ``training`` mode the feedback filter is driven by ``reference``
    instead of the slicer output.
    """
    cfg = coeffs.config
    y = np.asarray(received, dtype=np.float64)
    if y.size < cfg.M * cfg.n_feedforward:
        raise ValueError(
            f"need at least {cfg.M * cfg.n_feedforward} received samples, got {y.size}"
        )
    if mode not in (TRAINING, DECISION_DIRECTED):
        raise ValueError(f"unknown mode {mode!r}")
    z = feedforward_output(coeffs, y)
    n_sym = z.size
    if mode == TRAINING:
        if reference is None:
            raise ValueError("training mode needs a reference symbol sequence")
        ref = np.asarray(reference, dtype=np.float64)
        if ref.size < n_sym:
            raise ValueError(f"reference has {ref.size} symbols, need {n_sym}")
    F = coeffs.feedback
    n3 = F.size
    soft = np.empty(n_sym)
    decisions = np.empty(n_sym)
    # history[i] holds d_{k-1-i}
    history = np.zeros(n3)
    for k in range(n_sym):
        v = z[k] + float(F @ history) if n3 else z[k]
        soft[k] = v
        d = slicer(v)
        decisions[k] = d
        if n3:
            history[1:] = history[:-1]
            history[0] = ref[k] if mode == TRAINING else d
    return decisions, soft


def symbol_error_count(decisions, truth, skip: int = 0) -> int:
    """Mismatches between ``decisions`` and ``truth`` at indices >= ``skip``."""
    d = np.asarray(decisions)
    t = np.asarray(truth)
    if d.shape != t.shape:
        raise ValueError(f"length mismatch: {d.size} decisions vs {t.size} symbols")
    if d.size and not 0 <= skip < d.size:
        raise ValueError(f"skip {skip} outside [0, {d.size})")
    return int(np.count_nonzero(d[skip:] != t[skip:]))
