"""Executable iteral notation: iteration of functions, the N0 sieve, Collatz traces, dynamics."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    UNBOUNDED,
    ConvergencePolicy,
    Converged,
    Cycle,
    Diverged,
    DomainExit,
    Orbit,
    Value,
    iterate,
    periodic_order,
    splinter,
)
from .dsl import evaluate, format_expr, parse  # noqa: E402
from .sieve import Even, Odd, ZERO, classify, value_of  # noqa: E402

__all__ = [
    "UNBOUNDED",
    "ConvergencePolicy",
    "Converged",
    "Cycle",
    "Diverged",
    "DomainExit",
    "Orbit",
    "Value",
    "iterate",
    "periodic_order",
    "splinter",
    "evaluate",
    "format_expr",
    "parse",
    "Even",
    "Odd",
    "ZERO",
    "classify",
    "value_of",
]
