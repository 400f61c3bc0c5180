"""Iterating a self-map: values, orbits (splinters) and cycle diagnosis.

The iteral ``I[x=v, n=k](f)`` is the value of ``f`` applied ``k`` times
starting from ``v``; ``k = 0`` gives ``v`` back unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational
from typing import Any, Callable, Optional, Union

__all__ = [
    "UNBOUNDED",
    "ConvergencePolicy",
    "DEFAULT_POLICY",
    "DomainExitError",
    "Value",
    "Converged",
    "Diverged",
    "Cycle",
    "DomainExit",
    "Orbit",
    "iterate",
    "splinter",
    "periodic_order",
    "is_exact",
]


class _Unbounded:
    """Iteration count meaning "until the orbit settles" (the iteral's infinity)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()

IterCount = Union[int, _Unbounded]


class DomainExitError(ArithmeticError):
    """Raised by a map when its argument leaves the domain."""


# Exceptions treated as leaving the domain of the iterated map.
_DOMAIN_ERRORS = (ZeroDivisionError, OverflowError, ValueError, DomainExitError)


@dataclass(frozen=True)
class ConvergencePolicy:
    eps: float = 1e-12
    bailout: float = 1e150
    max_steps: int = 10**6

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if not self.bailout > 0:
            raise ValueError(f"bailout must be positive, got {self.bailout!r}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps!r}")


DEFAULT_POLICY = ConvergencePolicy()


@dataclass(frozen=True)
class Value:
    value: Any


@dataclass(frozen=True)
class Converged:
    value: Any
    steps: int


@dataclass(frozen=True)
class Diverged:
    steps: int
    last: Any = None


@dataclass(frozen=True)
class Cycle:
    """An exact repeat: ``values[entry] == values[entry + period]``."""

    entry: int
    period: int

    @property
    def steps(self):
        return self.entry + self.period


@dataclass(frozen=True)
class DomainExit:
    steps: int
    last: Any = None


Outcome = Union[Value, Converged, Diverged, Cycle, DomainExit]


@dataclass(frozen=True)
class Orbit:
    values: tuple
    outcome: Outcome

    @property
    def steps(self):
        return len(self.values) - 1


def is_exact(x) -> bool:
    """True for exact integers and rationals (bool excluded)."""
    return isinstance(x, Rational) and not isinstance(x, bool)


def _check_count(n):
    if n is UNBOUNDED:
        return
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"iteration count must be a nonnegative int or UNBOUNDED, got {n!r}")


def _run(f, v, n, policy, keep):
    """Shared driver. Returns (values or None, outcome)."""
    _check_count(n)
    values = [v] if keep else None
    x = v

    if n is not UNBOUNDED:
        for t in range(n):
            try:
                x = f(x)
            except _DOMAIN_ERRORS:
                return values, DomainExit(t, x)
            if keep:
                values.append(x)
        return values, Value(x)

    exact = is_exact(v)
    seen = {v: 0} if exact else None
    if abs(x) > policy.bailout:
        return values, Diverged(0, x)
    for t in range(1, policy.max_steps + 1):
        try:
            nxt = f(x)
        except _DOMAIN_ERRORS:
            return values, DomainExit(t - 1, x)
        if keep:
            values.append(nxt)
        try:
            diff = abs(nxt - x)
            size = abs(nxt)
        except _DOMAIN_ERRORS:
            return values, DomainExit(t, nxt)
        if diff < policy.eps:
            return values, Converged(nxt, t)
        if size > policy.bailout:
            return values, Diverged(t, nxt)
        if exact:
            if not is_exact(nxt):
                exact = False
                seen = None
            elif nxt in seen:
                entry = seen[nxt]
                return values, Cycle(entry, t - entry)
            else:
                seen[nxt] = t
        x = nxt
    return values, Diverged(policy.max_steps, x)


def iterate(
    f: Callable[[Any], Any],
    v,
    n: IterCount = 0,
    policy: ConvergencePolicy = DEFAULT_POLICY,
) -> Outcome:
    """Apply ``f`` to ``v`` ``n`` times.

    A finite ``n`` yields ``Value`` (or ``DomainExit`` if ``f`` fails on the
    way). ``UNBOUNDED`` runs until one of: successive values closer than
    ``policy.eps`` (``Converged``), modulus above ``policy.bailout``
    (``Diverged``), an exact repeat of an integer/rational value
    (``Cycle``), or ``policy.max_steps`` exhausted (``Diverged``).

    In exact mode a fixed point is reported as ``Converged`` since the step
    difference is zero; ``Cycle`` is only produced for periods of two or more.
    """
    return _run(f, v, n, policy, keep=False)[1]


def splinter(f, v, n: IterCount, policy: ConvergencePolicy = DEFAULT_POLICY) -> Orbit:
    """The orbit ``(v, f(v), ..., f^n(v))``, truncated at a domain exit."""
    values, outcome = _run(f, v, n, policy, keep=True)
    return Orbit(tuple(values), outcome)


def periodic_order(f, v, m_max: int, eps: Optional[float] = None) -> Optional[int]:
    """Least ``m <= m_max`` with ``f^m(v) == v``, or None.

    Exact values compare with ``==``; anything else with ``|a - b| <= eps``
    (``eps`` defaults to the default policy tolerance).
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    if eps is None:
        eps = DEFAULT_POLICY.eps
    exact = is_exact(v)
    x = v
    for m in range(1, m_max + 1):
        try:
            x = f(x)
        except _DOMAIN_ERRORS:
            return None
        if exact and is_exact(x):
            if x == v:
                return m
        elif abs(x - v) <= eps:
            return m
    return None
