"""Cosine-squared optical channel model and tapped-delay-line channels.

Times and frequencies are normalised to the symbol period ``T = 1``; a
pulse of duration ``tau`` lasts ``tau`` symbol periods.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signals import RandomSource, gen_awgn


def _check_tau(tau: float) -> None:
    if not tau > 0:
        raise ValueError(f"pulse duration tau must be > 0, got {tau}")


def impulse_response(t, tau: float):
    """Cosine-squared pulse ``(2/tau) cos^2(pi t / tau)`` on ``|t| < tau/2``.

    The pulse has unit area. Accepts scalars or arrays.
    """
    _check_tau(tau)
    t = np.asarray(t, dtype=np.float64)
    h = np.where(np.abs(t) < tau / 2, (2.0 / tau) * np.cos(np.pi * t / tau) ** 2, 0.0)
    return h if h.ndim else float(h)


def frequency_response(f, tau: float):
    """Baseband response ``sinc(f tau) / (1 - f^2 tau^2)`` of the pulse.

    The removable singularities at ``f = 0`` and ``|f| = 1/tau`` are
    evaluated exactly: for ``|f tau| >= 1/2`` the expression is rewritten
    as ``sinc(1 - |x|) / (|x| (1 + |x|))`` which has no pole at ``|x| = 1``.
    """
    _check_tau(tau)
    x = np.abs(np.asarray(f, dtype=np.float64) * tau)
    near = x >= 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        low = np.sinc(x) / (1.0 - x * x)
        high = np.sinc(1.0 - x) / (x * (1.0 + x))
    H = np.where(near, high, low)
    return H if H.ndim else float(H)


@dataclass(frozen=True)
class DiscreteChannel:
    """Sampled channel taps.

    Attributes
    ----------
    taps : ndarray
        Real tap gains, first tap at delay 0.
    spacing : float
        Tap spacing as a fraction of the symbol period (0.5 means T/2).
    active_mask : ndarray of bool
        True where the tap is part of the channel's support.
    """

    taps: np.ndarray
    spacing: float = 1.0
    active_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        taps = np.array(self.taps, dtype=np.float64).ravel()
        if taps.size == 0:
            raise ValueError("channel needs at least one tap")
        if not self.spacing > 0:
            raise ValueError(f"tap spacing must be > 0, got {self.spacing}")
        mask = taps != 0 if self.active_mask is None else np.array(self.active_mask, dtype=bool).ravel()
        if mask.shape != taps.shape:
            raise ValueError("active_mask length must match the number of taps")
        taps.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "active_mask", mask)

    def __len__(self) -> int:
        return self.taps.size

    @property
    def n_active(self) -> int:
        return int(self.active_mask.sum())


def discretize(tau: float, spacing: float, span: float) -> DiscreteChannel:
    """Sample the cosine-squared pulse on a symmetric grid.

    Grid points are ``t_k = (k - K) * spacing`` for ``k = 0..2K`` with
    ``K = ceil(span / (2 * spacing))``. Each tap holds ``h(t_k) * spacing``
    so the taps sum to approximately one.
    """
    _check_tau(tau)
    if not spacing > 0:
        raise ValueError(f"tap spacing must be > 0, got {spacing}")
    if span < tau:
        raise ValueError(f"span {span} must cover the pulse duration {tau}")
    K = int(np.ceil(span / (2 * spacing) - 1e-12))
    t = (np.arange(2 * K + 1) - K) * spacing
    taps = impulse_response(t, tau) * spacing
    active = np.abs(t) < tau / 2
    taps[~active] = 0.0
    return DiscreteChannel(taps, spacing, active)


def grid_times(ch: DiscreteChannel) -> np.ndarray:
    """Tap times of a symmetric channel produced by :func:`discretize`."""
    K = (len(ch) - 1) // 2
    return (np.arange(len(ch)) - K) * ch.spacing


def sparse_channel(positions, gains, length: int, spacing: float = 0.5) -> DiscreteChannel:
    """Channel of ``length`` taps, nonzero only at ``positions``."""
    positions = [int(p) for p in positions]
    gains = [float(g) for g in gains]
    if len(positions) != len(gains):
        raise ValueError("positions and gains must have the same length")
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValueError(f"positions must be strictly increasing, got {positions}")
    if positions and (positions[0] < 0 or positions[-1] >= length):
        raise ValueError(f"positions {positions} out of range for length {length}")
    if any(g == 0 for g in gains):
        raise ValueError("active tap gains must be nonzero")
    taps = np.zeros(length)
    taps[positions] = gains
    mask = np.zeros(length, dtype=bool)
    mask[positions] = True
    return DiscreteChannel(taps, spacing, mask)


def transmit(ch: DiscreteChannel, x, noise_variance: float, src: RandomSource) -> np.ndarray:
    """Convolve ``x`` with the channel (zero initial state) and add AWGN.

    The output has the same length as ``x``; the convolution tail is dropped.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("cannot transmit an empty sequence")
    y = np.convolve(x, ch.taps)[: x.size]
    return y + gen_awgn(x.size, noise_variance, src)
