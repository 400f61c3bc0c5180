"""Numeric iterated maps: logistic orbits, Julia/Mandelbrot escape times, Lorenz steps."""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np

from .core import Orbit, splinter

log = logging.getLogger(__name__)

__all__ = [
    "logistic_orbit",
    "EscapeParams",
    "GridSpec",
    "Mandelbrot",
    "Julia",
    "escape_time",
    "render_grid",
    "grid_points",
    "to_pgm",
    "grid_to_csv",
    "LorenzParams",
    "LorenzState",
    "lorenz_rhs",
    "lorenz_step",
    "lorenz_trajectory",
    "trajectory_to_csv",
]


def logistic_orbit(b: float, v: float, n: int) -> Orbit:
    """Orbit of ``x -> b x (1 - x)`` from ``v``, ``n`` steps."""
    return splinter(lambda x: b * x * (1 - x), v, n)


# ------------------------------------------------------------ escape times


@dataclass(frozen=True)
class EscapeParams:
    max_iter: int = 1000
    bailout: float = 2.0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.bailout >= 2:
            raise ValueError("bailout must be >= 2 for z^2 + c")


@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int

    def __post_init__(self):
        if not self.re_min < self.re_max or not self.im_min < self.im_max:
            raise ValueError("grid bounds must satisfy min < max")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid size must be positive")


@dataclass(frozen=True)
class Mandelbrot:
    """Vary ``c`` over the grid, start every orbit at 0."""


@dataclass(frozen=True)
class Julia:
    """Fixed ``c``, vary the starting point over the grid."""

    c: complex


def escape_time(c: complex, z0: complex, p: EscapeParams = EscapeParams()) -> Optional[int]:
    """1-based index of the first orbit term of ``z -> z^2 + c`` with modulus above the bailout.

    The orbit is ``z0, z1, z2, ...``; ``z0`` itself counts as term 1, so for
    ``c = 1, z0 = 0`` (orbit 0, 1, 2, 5, ...) the answer is 4. At most
    ``max_iter`` terms are examined; None means the point is kept as bounded.
    """
    z = complex(z0)
    c = complex(c)
    for t in range(1, p.max_iter + 1):
        if abs(z) > p.bailout:
            return t
        z = z * z + c
    return None


def grid_points(g: GridSpec) -> np.ndarray:
    """Complex cell centres, shape (height, width); row 0 is the top (im_max)."""
    re_mid, re_half = (g.re_max + g.re_min) / 2, (g.re_max - g.re_min) / 2
    im_mid, im_half = (g.im_max + g.im_min) / 2, (g.im_max - g.im_min) / 2
    # written around the midpoint so a grid symmetric about 0 is exactly symmetric
    cols = np.arange(g.width)
    rows = np.arange(g.height)
    re = re_mid + re_half * ((2 * cols + 1 - g.width) / g.width)
    im = im_mid + im_half * ((g.height - 1 - 2 * rows) / g.height)
    return re[np.newaxis, :] + 1j * im[:, np.newaxis]


def render_grid(kind: Union[Mandelbrot, Julia], g: GridSpec, p: EscapeParams = EscapeParams()) -> np.ndarray:
    """Escape counts per pixel (int array, shape (height, width)); 0 marks members.

    Vectorised over pixels, with the same per-pixel arithmetic as
    ``escape_time``, so each entry equals the scalar result.
    """
    pts = grid_points(g)
    if isinstance(kind, Mandelbrot):
        c = pts
        z = np.zeros_like(pts)
    elif isinstance(kind, Julia):
        c = np.full_like(pts, complex(kind.c))
        z = pts.copy()
    else:
        raise TypeError(f"unknown fractal kind {kind!r}")
    counts = np.zeros(pts.shape, dtype=np.int64)
    active = np.ones(pts.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, p.max_iter + 1):
            escaped = active & (np.abs(z) > p.bailout)
            counts[escaped] = t
            active &= ~escaped
            if not active.any():
                break
            z[active] = z[active] * z[active] + c[active]
    return counts


def to_pgm(counts: np.ndarray, max_iter: int) -> bytes:
    """Binary P5 image, maxval 255; counts scaled linearly, members black."""
    scaled = np.rint(counts.astype(np.float64) * 255.0 / max_iter)
    pixels = np.clip(scaled, 0, 255).astype(np.uint8)
    h, w = counts.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def grid_to_csv(counts: np.ndarray, g: GridSpec) -> str:
    pts = grid_points(g)
    out = io.StringIO()
    out.write("row,col,re,im,count\n")
    for i in range(g.height):
        for j in range(g.width):
            z = pts[i, j]
            out.write(f"{i},{j},{float(z.real)!r},{float(z.imag)!r},{int(counts[i, j])}\n")
    return out.getvalue()


# ------------------------------------------------------------------ Lorenz


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    r: float = 28.0
    b: float = 8.0 / 3.0
    dt: float = 0.01

    def __post_init__(self):
        for name in ("sigma", "r", "b", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class LorenzState(NamedTuple):
    x: float
    y: float
    z: float


def lorenz_rhs(s: Sequence[float], prm: LorenzParams) -> LorenzState:
    """Lorenz right-hand side, written as the state-dependent matrix times the state."""
    x, y, z = s
    a = (
        (-prm.sigma, prm.sigma, 0.0),
        (prm.r, -1.0, -x),
        (0.0, x, -prm.b),
    )
    return LorenzState(*(row[0] * x + row[1] * y + row[2] * z for row in a))


def _euler(s, prm):
    f = lorenz_rhs(s, prm)
    return LorenzState(*(si + fi * prm.dt for si, fi in zip(s, f)))


def lorenz_step(s: Sequence[float], prm: LorenzParams = LorenzParams()) -> LorenzState:
    """Double approximation: half the sum of the state and two forward Euler steps from it."""
    gg = _euler(_euler(s, prm), prm)
    return LorenzState(*(0.5 * (si + gi) for si, gi in zip(s, gg)))


def lorenz_trajectory(s0: Sequence[float], prm: LorenzParams = LorenzParams(), n: int = 1) -> List[LorenzState]:
    """``n + 1`` states from repeated ``lorenz_step``; stops early at a non-finite state."""
    if n < 0:
        raise ValueError("n must be >= 0")
    s = LorenzState(*map(float, s0))
    states = [s]
    for i in range(n):
        s = lorenz_step(s, prm)
        if not all(math.isfinite(v) for v in s):
            log.warning("Lorenz trajectory left finite range at step %d; truncated", i + 1)
            break
        states.append(s)
    return states


def trajectory_to_csv(states: Sequence[LorenzState], dt: float) -> str:
    out = io.StringIO()
    out.write("tau,X,Y,Z\n")
    for i, s in enumerate(states):
        out.write(f"{i * dt!r},{s.x!r},{s.y!r},{s.z!r}\n")
    return out.getvalue()
