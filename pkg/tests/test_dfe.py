import numpy as np
import pytest
from hypothesis import given, strategies as st

from adgdfe.channel import DiscreteChannel, sparse_channel, transmit
from adgdfe.dfe import (
    DECISION_DIRECTED,
    TRAINING,
    DesignError,
    DfeCoefficients,
    DfeConfig,
    design_from_channel,
    equalize,
    slicer,
    symbol_error_count,
)
from adgdfe.signals import gen_symbols, random_source, upsample


def naive_equalize(coeffs, y, reference=None):
    """Literal double sum over feedforward and feedback taps, one symbol at a time."""
    cfg = coeffs.config
    n_sym = -(-len(y) // cfg.M)

    def sample(j):
        return y[j] if 0 <= j < len(y) else 0.0

    soft, dec = [], []
    for k in range(n_sym):
        v = 0.0
        for n in range(-cfg.n1, cfg.n2 + 1):
            v += coeffs.feedforward[n + cfg.n1] * sample(k * cfg.M - n)
        for i in range(1, cfg.n3 + 1):
            if k - i >= 0:
                past = reference[k - i] if reference is not None else dec[k - i]
                v += coeffs.feedback[i - 1] * past
        soft.append(v)
        dec.append(1.0 if v >= 0 else -1.0)
    return np.array(dec), np.array(soft)


def symbol_channel(taps):
    return DiscreteChannel(np.asarray(taps, dtype=float), 1.0)


class TestSlicer:
    @pytest.mark.parametrize("x,d", [(0.3, 1.0), (-2.0, -1.0), (0.0, 1.0), (-0.0, 1.0)])
    def test_examples(self, x, d):
        assert slicer(x) == d

    @pytest.mark.parametrize("x", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, x):
        with pytest.raises(ValueError):
            slicer(x)

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_idempotent(self, x):
        assert slicer(slicer(x)) == slicer(x)


class TestDesign:
    @pytest.mark.parametrize("M", [1, 2])
    def test_identity_channel(self, M):
        cfg = DfeConfig(3, 3, 4, M)
        co = design_from_channel(DiscreteChannel([1.0], 1.0 / M), 0.0, cfg)
        spike = np.zeros(7)
        spike[3] = 1.0
        assert np.max(np.abs(co.feedforward - spike)) < 1e-6
        assert np.max(np.abs(co.feedback)) < 1e-6

    def test_identity_channel_noisy_is_shrunk_spike(self):
        co = design_from_channel(DiscreteChannel([1.0], 1.0), 0.25, DfeConfig(2, 2, 2, 1))
        assert co.feedforward[2] == pytest.approx(1 / 1.25)
        assert np.sum(np.abs(co.feedforward)) == pytest.approx(1 / 1.25)

    def test_two_tap_feedback_cancels_postcursor(self):
        co = design_from_channel(symbol_channel([1.0, 0.5]), 0.0, DfeConfig(3, 3, 4, 1))
        g = np.convolve(co.feedforward, [1.0, 0.5])
        main = 3
        assert g[main] == pytest.approx(1.0, abs=1e-6)
        assert np.allclose(g[:main], 0.0, atol=1e-9)
        assert co.feedback == pytest.approx(-g[main + 1 : main + 5], abs=1e-12)
        assert co.feedback[0] == pytest.approx(-0.5, abs=1e-6)

    def test_two_tap_hand_convolution(self):
        # short sequence: y_k = s_k + 0.5 s_{k-1}; soft_k = y_k - 0.5 d_{k-1}
        s = np.array([1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, 1.0])
        y = s + 0.5 * np.concatenate([[0.0], s[:-1]])
        co = design_from_channel(symbol_channel([1.0, 0.5]), 0.0, DfeConfig(0, 6, 1, 1))
        d, soft = equalize(co, y)
        assert np.allclose(soft, s, atol=1e-9)
        assert np.array_equal(d, s)

    def test_two_tap_random_data(self):
        src = random_source(8)
        s = gen_symbols(5000, src)
        ch = symbol_channel([1.0, 0.5])
        y = transmit(ch, s, 0.0, src)
        co = design_from_channel(ch, 0.0, DfeConfig(3, 3, 4, 1))
        d, _ = equalize(co, y)
        assert symbol_error_count(d, s) == 0

    @pytest.mark.parametrize("taps,M", [
        ([0.0, 1.0, 0.0, 0.0, 0.5, 0.0, 0.0], 2),
        ([0.2, 1.0, -0.3, 0.1], 1),
        ([0.1, 0.4, 1.0, 0.4, 0.1], 2),
    ])
    def test_noise_free_main_cursor(self, taps, M):
        cfg = DfeConfig(4, 2, 4, M)
        co = design_from_channel(DiscreteChannel(taps, 1.0 / M), 0.0, cfg)
        g = np.convolve(co.feedforward, taps)
        assert g[cfg.n1] == pytest.approx(1.0, abs=1e-6)

    def test_zero_estimate_fails(self):
        with pytest.raises(DesignError) as info:
            design_from_channel(DiscreteChannel([0.0, 0.0], 0.5), 0.1, DfeConfig())
        assert info.value.estimate is not None

    def test_unreachable_main_cursor_fails(self):
        # energy only at a delay the feedforward span cannot pull back
        ch = DiscreteChannel([0.0] * 6 + [1.0], 1.0)
        with pytest.raises(DesignError):
            design_from_channel(ch, 0.0, DfeConfig(1, 1, 2, 1))

    def test_spacing_must_match(self):
        with pytest.raises(ValueError):
            design_from_channel(DiscreteChannel([1.0], 1.0), 0.0, DfeConfig(M=2))

    def test_coefficient_lengths_checked(self):
        with pytest.raises(ValueError):
            DfeCoefficients([1.0], [0.0], DfeConfig(1, 1, 1, 1))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DfeConfig(-1, 0, 0, 1)
        with pytest.raises(ValueError):
            DfeConfig(1, 1, 1, 0)


class TestEqualize:
    def test_passthrough(self):
        s = gen_symbols(100, random_source(1))
        co = DfeCoefficients([1.0], [], DfeConfig(0, 0, 0, 1))
        d, soft = equalize(co, s)
        assert np.array_equal(d, s)
        assert np.array_equal(soft, s)

    @pytest.mark.parametrize("mode", [TRAINING, DECISION_DIRECTED])
    def test_matches_naive_double_loop(self, mode):
        rng = np.random.default_rng(5)
        cfg = DfeConfig(3, 2, 3, 2)
        co = DfeCoefficients(rng.standard_normal(6), rng.standard_normal(3), cfg)
        y = rng.standard_normal(301)
        ref = gen_symbols(151, random_source(6))
        d, soft = equalize(co, y, reference=ref, mode=mode)
        d0, soft0 = naive_equalize(co, y, ref if mode == TRAINING else None)
        assert np.max(np.abs(soft - soft0)) < 1e-12
        assert np.array_equal(d, d0)

    def test_training_mode_exact(self):
        src = random_source(12)
        s = gen_symbols(10_000, src)
        ch = sparse_channel([1, 3, 4], [1.0, 0.6, -0.4], 7)
        y = transmit(ch, upsample(s, 2), 0.0, src)
        cfg = DfeConfig(4, 2, 4, 2)
        co = design_from_channel(ch, 0.0, cfg)
        d, _ = equalize(co, y, reference=s, mode=TRAINING)
        assert symbol_error_count(d, s, skip=cfg.n3) == 0

    def test_fractional_delay_decimation(self):
        s = gen_symbols(500, random_source(2))
        y = transmit(sparse_channel([1], [1.0], 2), upsample(s, 2), 0.0, random_source(0))
        co = DfeCoefficients([1.0, 0.0], [], DfeConfig(1, 0, 0, 2))
        d, soft = equalize(co, y)
        assert np.array_equal(soft, s)

    def test_feedback_reach_is_finite(self):
        rng = np.random.default_rng(3)
        cfg = DfeConfig(1, 1, 3, 1)
        co = DfeCoefficients(rng.standard_normal(3), rng.standard_normal(3), cfg)
        y = rng.standard_normal(60)
        ref = gen_symbols(60, random_source(4))
        bad = ref.copy()
        j = 20
        bad[j] = -bad[j]
        _, a = equalize(co, y, ref, TRAINING)
        _, b = equalize(co, y, bad, TRAINING)
        assert np.array_equal(a[: j + 1], b[: j + 1])
        assert not np.array_equal(a[j + 1 : j + 4], b[j + 1 : j + 4])
        assert np.array_equal(a[j + cfg.n3 + 1 :], b[j + cfg.n3 + 1 :])

    def test_error_burst_then_recovery(self):
        src = random_source(31)
        s = gen_symbols(3000, src)
        ch = symbol_channel([1.0, 0.9])
        y = transmit(ch, s, 0.0, src)
        co = design_from_channel(ch, 0.0, DfeConfig(0, 3, 2, 1))
        clean, _ = equalize(co, y)
        assert symbol_error_count(clean, s) == 0
        k0 = 1000
        y[k0] -= 3.0 * s[k0]  # one wrong decision
        d, _ = equalize(co, y)
        wrong = np.flatnonzero(d != s)
        assert wrong[0] == k0
        assert wrong.size > 1  # the error propagates
        assert wrong[-1] < k0 + 200  # and dies out

    def test_missing_reference(self):
        co = DfeCoefficients([1.0], [0.5], DfeConfig(0, 0, 1, 1))
        with pytest.raises(ValueError):
            equalize(co, np.ones(10), mode=TRAINING)

    def test_short_input(self):
        co = DfeCoefficients(np.zeros(7), np.zeros(4), DfeConfig(3, 3, 4, 2))
        with pytest.raises(ValueError):
            equalize(co, np.ones(13))

    def test_bad_mode(self):
        co = DfeCoefficients([1.0], [], DfeConfig(0, 0, 0, 1))
        with pytest.raises(ValueError):
            equalize(co, np.ones(3), mode="blind")


class TestErrorCount:
    def test_identical(self):
        s = gen_symbols(20, random_source(0))
        assert symbol_error_count(s, s, 0) == 0

    def test_flip_after_skip(self):
        s = gen_symbols(20, random_source(0))
        d = s.copy()
        d[10] = -d[10]
        assert symbol_error_count(d, s, 5) == 1

    def test_flip_before_skip(self):
        s = gen_symbols(20, random_source(0))
        d = s.copy()
        d[3] = -d[3]
        assert symbol_error_count(d, s, 5) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            symbol_error_count(np.ones(3), np.ones(4))

    def test_skip_out_of_range(self):
        with pytest.raises(ValueError):
            symbol_error_count(np.ones(3), np.ones(3), 3)
