"""Bundled six-agent worked example.

Six agents A..F share a reward of 1000 on a two-grade scale with
alpha = 100 and epsilon = 0.01.  The numbers double as a golden test:
agent F's aggregated evaluation component is about 191.80, its truth
score about -0.21, and the final shares are roughly (149.2, 209.6,
179.3, 166.0, 125.1, 170.8).
"""

from __future__ import annotations

from .profiles import OpinionProfile, validate_profile

EXAMPLE_PROFILE_MAPPING = {
    "V": 1000.0,
    "M": 2,
    "alpha": 100.0,
    "epsilon": 0.01,
    "agents": ["A", "B", "C", "D", "E", "F"],
    "evaluations": [
        [None, 2, 2, 1, 1, 1],
        [1, None, 2, 2, 1, 2],
        [1, 2, None, 1, 1, 2],
        [1, 2, 2, None, 1, 2],
        [2, 2, 1, 2, None, 2],
        [2, 2, 1, 2, 1, None],
    ],
    "predictions": [
        [None, [0.0, 1.0], [0.4, 0.6], [0.2, 0.8], [1.0, 0.0], [0.2, 0.8]],
        [[0.8, 0.2], None, [0.2, 0.8], [0.2, 0.8], [1.0, 0.0], [0.4, 0.6]],
        [[0.8, 0.2], [0.0, 1.0], None, [0.4, 0.6], [1.0, 0.0], [0.4, 0.6]],
        [[0.8, 0.2], [0.2, 0.8], [0.6, 0.4], None, [0.8, 0.2], [0.4, 0.6]],
        [[0.8, 0.2], [0.0, 1.0], [0.6, 0.4], [0.4, 0.6], None, [0.4, 0.6]],
        [[0.8, 0.2], [0.8, 0.2], [0.6, 0.4], [0.4, 0.6], [0.8, 0.2], None],
    ],
}


def example_profile() -> OpinionProfile:
    """The six-agent example as a validated profile."""
    return validate_profile(EXAMPLE_PROFILE_MAPPING)
