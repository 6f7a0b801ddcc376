"""Adaptive fractionally-spaced DFE with activity-detection-guided LMS
channel identification for dispersive optical channels."""

from .adg import ActivityTracker, NotReadyError, UndefinedMeasureError
from .channel import (
    DiscreteChannel,
    discretize,
    frequency_response,
    impulse_response,
    sparse_channel,
    transmit,
)
from .dfe import (
    DesignError,
    DfeCoefficients,
    DfeConfig,
    design_from_channel,
    equalize,
    slicer,
    symbol_error_count,
)
from .lms import LmsFilter, WeightTrajectory, identify_channel
from .signals import gen_awgn, gen_symbols, random_source, upsample

__all__ = [
    "ActivityTracker",
    "DesignError",
    "DfeCoefficients",
    "DfeConfig",
    "DiscreteChannel",
    "LmsFilter",
    "NotReadyError",
    "UndefinedMeasureError",
    "WeightTrajectory",
    "design_from_channel",
    "discretize",
    "equalize",
    "frequency_response",
    "gen_awgn",
    "gen_symbols",
    "identify_channel",
    "impulse_response",
    "random_source",
    "slicer",
    "sparse_channel",
    "symbol_error_count",
    "transmit",
    "upsample",
]
