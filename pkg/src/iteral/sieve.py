"""The binary sieve over N0 and its fixed subsequences.

The sieve sends the members of a sequence standing on even positions to a
child named by prefixing ``E`` and those on odd positions to a child named by
prefixing ``O``; positions are renumbered from zero in each child. A node
whose name starts with ``EO`` is *fixed* and is never sieved again. Every
positive integer lands in exactly one fixed subsequence:

* ``EO_kO`` (``E`` followed by ``k + 1`` letters ``O``) holds the odd numbers
  ``2^(k+2) p + 2^(k+1) - 1``;
* ``EO_lE_mE`` (``E``, ``l`` letters ``O``, ``m + 1`` letters ``E``) holds the
  even numbers ``2^(m+l+2) p + 2^(m+1) (2^l - 1)``.

Zero never reaches a fixed node and is kept as the distinguished ``ZERO``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Union

__all__ = [
    "Zero",
    "ZERO",
    "Odd",
    "Even",
    "ResidueClass",
    "LinearForm",
    "IDENTITY",
    "is_fixed",
    "name_to_form",
    "class_to_name",
    "classify",
    "value_of",
    "form_of",
    "equivalent",
    "compare",
    "sort_key",
    "sieve_oracle",
    "render_name",
    "render_coords",
    "descriptor",
    "ZERO_LABEL",
]

ZERO_LABEL = "ZERO (EE∞E)"


def _natural(name, x, minimum=0):
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"{name} must be an int, got {type(x).__name__}")
    if x < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {x}")


@dataclass(frozen=True)
class Zero:
    def __repr__(self):
        return "Zero()"


ZERO = Zero()


@dataclass(frozen=True)
class Odd:
    """Odd number ``2^(k+2) p + 2^(k+1) - 1`` in ``EO_kO``."""

    k: int
    p: int

    def __post_init__(self):
        _natural("k", self.k)
        _natural("p", self.p)


@dataclass(frozen=True)
class Even:
    """Even number ``2^(m+l+2) p + 2^(m+1) (2^l - 1)`` in ``EO_lE_mE``."""

    m: int
    l: int  # noqa: E741
    p: int

    def __post_init__(self):
        _natural("m", self.m)
        _natural("l", self.l, minimum=1)
        _natural("p", self.p)


ResidueClass = Union[Zero, Odd, Even]


@dataclass(frozen=True)
class LinearForm:
    """The progression ``stride * p + offset`` of one sieve node."""

    stride: int = 1
    offset: int = 0

    def __call__(self, p: int) -> int:
        return self.stride * p + self.offset

    def left(self) -> "LinearForm":
        # child built from even positions: p <- 2p
        return LinearForm(2 * self.stride, self.offset)

    def right(self) -> "LinearForm":
        # child built from odd positions: p <- 2p + 1
        return LinearForm(2 * self.stride, self.offset + self.stride)

    def position(self, n: int) -> Optional[int]:
        """Inverse map: the position of ``n`` in this progression, if any."""
        q, r = divmod(n - self.offset, self.stride)
        if r or q < 0:
            return None
        return q

    def __str__(self):
        head = "p" if self.stride == 1 else f"{self.stride}p"
        return head if self.offset == 0 else f"{head} + {self.offset}"


IDENTITY = LinearForm(1, 0)


def _check_name(name: str):
    if not isinstance(name, str) or any(ch not in "EO" for ch in name):
        raise ValueError(f"subsequence name must be letters E/O, got {name!r}")


def is_fixed(name: str) -> bool:
    """Fixed subsequences carry the prefix ``EO``."""
    return name.startswith("EO")


def name_to_form(name: str) -> LinearForm:
    """Progression of the node ``name``; ``""`` is the root N0 (``p``).

    Letters are read right to left, the order in which the sieve added them.
    """
    _check_name(name)
    form = IDENTITY
    for letter in reversed(name):
        form = form.left() if letter == "E" else form.right()
    return form


def class_to_name(c: ResidueClass) -> str:
    if isinstance(c, Odd):
        return "E" + "O" * (c.k + 1)
    if isinstance(c, Even):
        return "E" + "O" * c.l + "E" * (c.m + 1)
    raise ValueError("zero has no finite fixed subsequence name (EE∞E)")


def _odd_branch(n):
    """Repeated (subtract one, halve) on odd ``n``; returns (counter, stopping number)."""
    counter = 0
    while True:
        n = (n - 1) // 2
        counter += 1
        if n % 2 == 0:  # even or zero: the stopping number
            return counter, n


def classify(n: int) -> ResidueClass:
    """Coordinates of ``n`` in the fixed-subsequence decomposition.

    >>> classify(39)
    Odd(k=2, p=2)
    >>> classify(28)
    Even(m=1, l=3, p=0)
    """
    _natural("n", n)
    if n == 0:
        return ZERO
    if n % 2:
        counter_k, stop = _odd_branch(n)
        return Odd(counter_k - 1, stop // 2)
    counter_m = 0
    while n % 2 == 0:
        n //= 2
        counter_m += 1
    m = counter_m - 1
    if n == 1:
        return Even(m, 1, 0)
    counter_k, stop = _odd_branch(n)
    return Even(m, counter_k, stop // 2)


def value_of(c: ResidueClass) -> int:
    if isinstance(c, Odd):
        return (c.p << (c.k + 2)) + (1 << (c.k + 1)) - 1
    if isinstance(c, Even):
        return (c.p << (c.m + c.l + 2)) + (((1 << c.l) - 1) << (c.m + 1))
    if isinstance(c, Zero):
        return 0
    raise TypeError(f"not a residue class: {c!r}")


def form_of(c: ResidueClass) -> LinearForm:
    """Closed-form progression of the fixed subsequence holding ``c``."""
    if isinstance(c, Odd):
        return LinearForm(1 << (c.k + 2), (1 << (c.k + 1)) - 1)
    if isinstance(c, Even):
        return LinearForm(1 << (c.m + c.l + 2), ((1 << c.l) - 1) << (c.m + 1))
    raise ValueError("zero has no fixed progression")


def _subsequence(c):
    if isinstance(c, Odd):
        return ("odd", c.k)
    if isinstance(c, Even):
        return ("even", c.m, c.l)
    return ("zero",)


def equivalent(a: int, b: int) -> bool:
    """Whether ``a`` and ``b`` end in the same fixed subsequence."""
    _natural("a", a, 1)
    _natural("b", b, 1)
    return _subsequence(classify(a)) == _subsequence(classify(b))


def sort_key(c: ResidueClass):
    """Key realising the reordering of N0: evens, then zero, then odds.

    Evens come with more trailing ``E`` first, then more ``O`` first; odds
    with fewer ``O`` first. Members of one subsequence follow position order.
    """
    if isinstance(c, Even):
        return (0, -c.m, -c.l, c.p)
    if isinstance(c, Zero):
        return (1, 0, 0, 0)
    if isinstance(c, Odd):
        return (2, c.k, 0, c.p)
    raise TypeError(f"not a residue class: {c!r}")


def compare(a: ResidueClass, b: ResidueClass) -> int:
    """-1 if ``a`` precedes ``b`` in the reordering, 1 if it follows, 0 if equal."""
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


def sieve_oracle(limit: int, depth: int) -> Dict[int, Optional[str]]:
    """Run the sieve literally on ``0..limit``.

    Each number maps to the name of the fixed subsequence it reaches within
    ``depth`` letters, or None when unresolved (zero always is).
    """
    _natural("limit", limit)
    _natural("depth", depth)
    result: Dict[int, Optional[str]] = {}
    stack = [("", list(range(limit + 1)))]
    while stack:
        name, members = stack.pop()
        if not members:
            continue
        if is_fixed(name):
            for n in members:
                result[n] = name
            continue
        if len(name) >= depth:
            for n in members:
                result[n] = None
            continue
        stack.append(("E" + name, members[0::2]))
        stack.append(("O" + name, members[1::2]))
    return dict(sorted(result.items()))


def render_name(c: ResidueClass) -> str:
    """Compact name with run lengths as inline numbers, e.g. ``EO3E``, ``EOE1E``."""
    if isinstance(c, Odd):
        return "EO" if c.k == 0 else f"EO{c.k}O"
    if isinstance(c, Even):
        runs = str(c.l) if c.l >= 2 else ""
        tail = f"E{c.m}" if c.m >= 1 else ""
        return f"EO{runs}{tail}E"
    raise ValueError("zero has no finite fixed subsequence name (EE∞E)")


def render_coords(c: ResidueClass) -> str:
    if isinstance(c, Odd):
        return f"(k={c.k}, p={c.p})"
    if isinstance(c, Even):
        return f"(m={c.m}, l={c.l}, p={c.p})"
    raise ValueError("zero has no coordinates")


def descriptor(n: int) -> str:
    """``NAME : formula : (coords) : value`` for ``n``, recomputing the value from its class."""
    c = classify(n)
    if isinstance(c, Zero):
        return ZERO_LABEL
    return f"{render_name(c)} : {form_of(c)} : {render_coords(c)} : {value_of(c)}"
