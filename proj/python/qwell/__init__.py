"""Bound states of a quaternionic square well."""

import json

from ._core import (
    BoundState,
    BoundStateSet,
    DegenerateEnergyError,
    DomainError,
    EmptyWindowError,
    NotARootError,
    PotentialSpec,
    QuantizationProblem,
    Quaternion,
    RadialState,
    UnsupportedRegimeError,
    UsageError,
    apply_automorphism,
    canonicalize,
    characteristic_data,
    complex_limit_states,
    f_quantization,
    find_bound_states,
    mismatch,
    reality_report,
    solve_coefficients,
    trial_complex_kappa,
    trial_complex_states,
    verify_determinant,
)
from ._core import run as _run


def run(mode, **settings):
    """Runs a CLI mode in-process.

    Keyword names follow the CLI flags with underscores for dashes. JSON output
    is returned parsed; CSV output is returned as text.
    """
    text = _run(mode, {k.replace("_", "-"): str(v) for k, v in settings.items()})
    if settings.get("format", "json") == "json":
        return json.loads(text)
    return text


__all__ = [name for name in dir() if not name.startswith("_")] + ["run"]
