import pytest

from adgdfe.channel import sparse_channel, transmit
from adgdfe.signals import gen_symbols, random_source, upsample

NOISE_VAR = 0.1
STEP = 0.005


@pytest.fixture
def sec5_channel():
    return sparse_channel([1, 4], [1.0, 0.5], 7)


def sec5_data(seed, n_samples=4000, noise_variance=NOISE_VAR, channel=None):
    """Zero-stuffed training input and noisy output of the sparse test channel."""
    ch = channel or sparse_channel([1, 4], [1.0, 0.5], 7)
    src = random_source(seed)
    x = upsample(gen_symbols(n_samples // 2, src), 2)
    return x, transmit(ch, x, noise_variance, src), ch


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
