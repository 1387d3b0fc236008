"""Pinwheel solutions of competitive Schrodinger systems."""

from ._pinwheel import (
    NumericalError,
    ParameterError,
    RadialProfile,
    epsilon_R,
    ground_state,
    pair_interaction,
    power_inequality_check,
    run_cli,
    separation_constants,
)

__all__ = [
    "NumericalError",
    "ParameterError",
    "RadialProfile",
    "epsilon_R",
    "ground_state",
    "pair_interaction",
    "power_inequality_check",
    "run_cli",
    "separation_constants",
]
