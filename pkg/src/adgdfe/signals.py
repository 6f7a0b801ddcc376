"""Symbol, noise and rate-conversion primitives.

All randomness flows through :class:`numpy.random.Generator` instances
backed by the PCG64 bit generator. Gaussian samples use NumPy's ziggurat
``standard_normal`` transform, so a given seed reproduces the same stream
for a given NumPy release.
"""

from __future__ import annotations

import numpy as np

RandomSource = np.random.Generator


def random_source(seed: int) -> RandomSource:
    """Return a PCG64-backed generator for ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def gen_symbols(n: int, src: RandomSource) -> np.ndarray:
    """Draw ``n`` equiprobable antipodal (BPSK) symbols in {-1, +1}."""
    if n < 0:
        raise ValueError(f"symbol count must be >= 0, got {n}")
    bits = src.integers(0, 2, size=n)
    return (2.0 * bits - 1.0).astype(np.float64)


def gen_awgn(n: int, variance: float, src: RandomSource) -> np.ndarray:
    """Zero-mean white Gaussian noise with the given variance."""
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    if variance < 0:
        raise ValueError(f"noise variance must be >= 0, got {variance}")
    # draw even when variance == 0 so the stream position does not depend on it
    return np.sqrt(variance) * src.standard_normal(n)


def upsample(s, M: int) -> np.ndarray:
    """Zero-stuff ``s`` by an integer factor ``M`` (symbol at index k*M)."""
    if M < 1:
        raise ValueError(f"oversampling factor must be >= 1, got {M}")
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros(s.size * M)
    out[::M] = s
    return out


def downsample(x, M: int, phase: int = 0) -> np.ndarray:
    """Keep every ``M``-th sample starting at ``phase``."""
    if M < 1:
        raise ValueError(f"oversampling factor must be >= 1, got {M}")
    return np.asarray(x)[phase::M].copy()
