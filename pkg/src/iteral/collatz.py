"""(3x+1)/2 and x/2 dynamics read through the sieve coordinates.

``trace`` reproduces the output of the ``oneness`` program: one line per
step with the operation, the value in a chosen radix and the descriptor of
the fixed subsequence the value belongs to.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Tuple

from .sieve import (
    Even,
    Odd,
    ResidueClass,
    classify,
    form_of,
    render_coords,
    render_name,
    value_of,
)

__all__ = [
    "StepOp",
    "TraceLine",
    "Trace",
    "step",
    "trace",
    "to_radix",
    "odd_transition",
    "odd_run_pair",
    "odd_run_endpoint",
    "even_strip",
    "odd2_decompose",
    "CAP31",
    "MAX_STEPS",
]

CAP31 = 2**31 - 1
MAX_STEPS = 10**6
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class StepOp(enum.Enum):
    IN = "IN"
    THREE_X = "3X"
    D2 = "D2"

    def __str__(self):
        return self.value


def step(n: int) -> Tuple[int, StepOp]:
    """One move: halve an even number, send an odd one to (3n+1)/2.

    ``step(1)`` returns ``(2, 3X)``, the arithmetic value; stopping at one is
    the caller's business (``trace`` does it).
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("n must be an int")
    if n < 1:
        raise ValueError(f"step needs n >= 1, got {n}")
    if n % 2 == 0:
        return n // 2, StepOp.D2
    return (3 * n + 1) // 2, StepOp.THREE_X


def to_radix(n: int, radix: int) -> str:
    if not 2 <= radix <= 36:
        raise ValueError(f"radix must be in 2..36, got {radix}")
    if n == 0:
        return "0"
    sign = "-" if n < 0 else ""
    n = abs(n)
    digits = []
    while n:
        n, r = divmod(n, radix)
        digits.append(_DIGITS[r])
    return sign + "".join(reversed(digits))


@dataclass(frozen=True)
class TraceLine:
    step: int
    value: int
    op: StepOp
    radix_repr: str
    cls: ResidueClass
    recomputed: int

    @property
    def name(self) -> str:
        return render_name(self.cls)

    @property
    def formula(self) -> str:
        return str(form_of(self.cls))

    @property
    def coords(self) -> str:
        return render_coords(self.cls)

    def descriptor(self) -> str:
        return f"{self.name} : {self.formula} : {self.coords} : {self.recomputed}"

    def tokens(self) -> List[str]:
        return [str(self.step), str(self.value), str(self.op), self.radix_repr] + self.descriptor().split()

    def __str__(self):
        return " ".join(self.tokens())


@dataclass
class Trace:
    """Lines of a run plus how it ended: ``ONE``, ``UNRESOLVED`` or ``OVERFLOW``."""

    n: int
    radix: int
    lines: List[TraceLine] = field(default_factory=list)
    status: str = "ONE"

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    @property
    def values(self) -> List[int]:
        return [line.value for line in self.lines]

    def format(self, exact: bool = False) -> str:
        """Whitespace-separated lines; ``exact`` uses fixed-width aligned columns."""
        if not exact:
            body = [str(line) for line in self.lines]
        else:
            ws = max([2] + [len(str(x.step)) for x in self.lines])
            wv = max([2] + [len(str(x.value)) for x in self.lines])
            wr = max([4] + [len(x.radix_repr) for x in self.lines])
            body = [
                f"{x.step:>{ws}} {x.value:>{wv}} {x.op} {x.radix_repr:>{wr}} {x.descriptor()}"
                for x in self.lines
            ]
        if self.status != "ONE":
            body.append(self.status)
        return "\n".join(body) + "\n"


def _line(i, n, op, radix):
    c = classify(n)
    return TraceLine(i, n, op, to_radix(n, radix), c, value_of(c))


def trace(n: int, radix: int = 10, max_steps: int = MAX_STEPS, cap31: bool = False) -> Trace:
    """Run the Collatz moves from ``n`` down to one.

    Stops with status ``UNRESOLVED`` after ``max_steps`` moves, or with
    ``OVERFLOW`` when ``cap31`` is set and a computation would exceed
    ``2^31 - 1`` (signed 32-bit limit).
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("n must be an int")
    if n < 1:
        raise ValueError(f"trace needs n >= 1, got {n}")
    if not 2 <= radix <= 36:
        raise ValueError(f"radix must be in 2..36, got {radix}")
    out = Trace(n, radix)
    if cap31 and n > CAP31:
        out.status = "OVERFLOW"
        return out
    out.lines.append(_line(0, n, StepOp.IN, radix))
    i = 0
    while n != 1:
        if i >= max_steps:
            out.status = "UNRESOLVED"
            return out
        if cap31 and n % 2 and 3 * n + 1 > CAP31:
            out.status = "OVERFLOW"
            return out
        n, op = step(n)
        i += 1
        out.lines.append(_line(i, n, op, radix))
    return out


def odd_transition(c: Odd) -> ResidueClass:
    """Class of (3n+1)/2 for odd ``n`` in class ``c``."""
    if not isinstance(c, Odd):
        raise TypeError("odd_transition needs an Odd class")
    if c.k >= 1:
        return Odd(c.k - 1, 3 * c.p + 1)
    return classify(6 * c.p + 2)


def odd_run_pair(c: Odd, j: int) -> Odd:
    """Coordinates after ``j <= k`` moves of (3x+1)/2, all still odd."""
    if not 0 <= j <= c.k:
        raise ValueError(f"j must be in 0..{c.k}, got {j}")
    return Odd(c.k - j, 3**j * c.p + (3**j - 1) // 2)


def odd_run_endpoint(c: Odd) -> int:
    """The even value reached after exactly ``k + 1`` moves of (3x+1)/2."""
    return 3 ** (c.k + 1) * (2 * c.p + 1) - 1


def even_strip(c: Even) -> Odd:
    """Class of the odd number left after ``m + 1`` halvings; ``l`` and ``p`` carry over."""
    if not isinstance(c, Even):
        raise TypeError("even_strip needs an Even class")
    return Odd(c.l - 1, c.p)


def odd2_decompose(n: int) -> Tuple[int, int]:
    """``n = odd * 2**e``; returns ``(odd, e)``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    e = (n & -n).bit_length() - 1
    return n >> e, e
