"""Jammer-resilient uplink time synchronization simulator."""

from ._jass import (  # noqa: F401
    __version__,
    derive_sync_sequence,
    detect,
    draw_rayleigh_channel,
    metric_trace,
    next_secret,
    run_mismatch,
    run_roc,
    sample_arrival,
    simulate_trial,
    statistic,
)
