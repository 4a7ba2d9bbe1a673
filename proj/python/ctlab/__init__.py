"""Python access to the ctlab core."""

import json

from ._ctlab import (
    InputError,
    NumericalError,
    electric_distances,
    four_point_delta,
    run_cli,
    solve_representation,
    stable_slope,
    tracking_constant,
)


def verify_leaves(**kwargs):
    """Leaf and control gap report as a dict."""
    from ._ctlab import verify_leaves_json

    return json.loads(verify_leaves_json(**kwargs))


def ladder_audit(spec_text):
    """Every ladder audit for a key=value spec, as a dict."""
    from ._ctlab import ladder_audit_json

    return json.loads(ladder_audit_json(spec_text))


__all__ = [
    "InputError",
    "NumericalError",
    "electric_distances",
    "four_point_delta",
    "ladder_audit",
    "run_cli",
    "solve_representation",
    "stable_slope",
    "tracking_constant",
    "verify_leaves",
]
