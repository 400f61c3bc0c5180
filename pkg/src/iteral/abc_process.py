"""a-b-c tick process: sessions of random length built as nested iterations.

Session ``j`` starts from the last tick of session ``j - 1`` moved by one
c-increment ``(dA, dC)``; the session's remaining ``N_j - 1`` ticks each add
an a-increment (waiting time) and a b-increment (whole ticks of price).

Draw order per session, from a single ``numpy`` generator: ``N_j``; the
c-increment ``dA`` then ``dC``; then for every intraday tick the wait and the
price change. Replaying a seed reproduces the series exactly.
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

__all__ = [
    "Tick",
    "IncrementModel",
    "SessionSeries",
    "Summary",
    "simulate",
    "summarize",
    "make_sampler",
    "model_from_config",
    "parse_config",
    "DEFAULT_CONFIG",
    "series_to_csv",
]

Sampler = Callable[[np.random.Generator], float]


@dataclass(frozen=True)
class Tick:
    t: float
    p: int
    v: Optional[int] = None


@dataclass
class IncrementModel:
    wait: Sampler
    b_inc: Sampler
    c_wait: Sampler
    c_inc: Sampler
    n_ticks: Sampler


@dataclass
class SessionSeries:
    z0: Tick
    sessions: List[List[Tick]] = field(default_factory=list)

    @property
    def ticks(self) -> List[Tick]:
        return [tick for s in self.sessions for tick in s]


def _int_sample(x, what):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise ValueError(f"{what} sampler must return whole numbers, got {x!r}")


def simulate(z0: Tick, model: IncrementModel, sessions: int, seed: int) -> SessionSeries:
    if sessions < 1:
        raise ValueError("sessions must be >= 1")
    rng = np.random.default_rng(seed)
    out = SessionSeries(z0)
    last = z0
    for j in range(sessions):
        n = _int_sample(model.n_ticks(rng), "n_ticks")
        if n < 1:
            raise ValueError(f"session {j} drew N_j = {n}; need N_j >= 1")
        da = float(model.c_wait(rng))
        dc = _int_sample(model.c_inc(rng), "c_inc")
        if not da > 0:
            raise ValueError(f"c-increment time must be positive, got {da!r}")
        tick = Tick(last.t + da, last.p + dc)
        session = [tick]
        for _ in range(n - 1):
            dt = float(model.wait(rng))
            dp = _int_sample(model.b_inc(rng), "b_inc")
            if not dt > 0:
                raise ValueError(f"waiting time must be positive, got {dt!r}")
            tick = Tick(tick.t + dt, tick.p + dp)
            session.append(tick)
        out.sessions.append(session)
        last = tick
    return out


@dataclass(frozen=True)
class Summary:
    ticks_per_session: Tuple[int, ...]
    dt_mean: float
    dt_var: float
    dt_hist: Dict[float, int]
    dp_mean: float
    dp_var: float
    dp_hist: Dict[int, int]
    c_increments: Tuple[Tuple[float, int], ...]


def summarize(s: SessionSeries) -> Summary:
    """Intraday waiting-time and price-increment statistics (population variance)."""
    if not s.sessions:
        raise ValueError("no sessions to summarize")
    dts, dps = [], []
    for session in s.sessions:
        for a, b in zip(session, session[1:]):
            dts.append(b.t - a.t)
            dps.append(b.p - a.p)
    prev = [s.z0] + [session[-1] for session in s.sessions[:-1]]
    c_incs = tuple((session[0].t - q.t, session[0].p - q.p) for q, session in zip(prev, s.sessions))

    def moments(xs):
        if not xs:
            return math.nan, math.nan
        arr = np.asarray(xs, dtype=float)
        return float(arr.mean()), float(arr.var())

    dt_mean, dt_var = moments(dts)
    dp_mean, dp_var = moments(dps)
    return Summary(
        ticks_per_session=tuple(len(x) for x in s.sessions),
        dt_mean=dt_mean,
        dt_var=dt_var,
        dt_hist=dict(sorted(Counter(dts).items())),
        dp_mean=dp_mean,
        dp_var=dp_var,
        dp_hist=dict(sorted(Counter(dps).items())),
        c_increments=c_incs,
    )


# ----------------------------------------------------------------- config


def make_sampler(spec: str) -> Sampler:
    """Build a sampler from ``"name key=value ..."``.

    Names: ``const value=``, ``weibull shape= scale=``, ``exponential scale=``,
    ``uniform_int low= high=`` (inclusive), ``choice values=a,b,...``.
    """
    name, *args = spec.split()
    kw = {}
    for a in args:
        key, sep, val = a.partition("=")
        if not sep:
            raise ValueError(f"sampler argument {a!r} is not key=value")
        kw[key] = val
    try:
        if name == "const":
            value = float(kw.pop("value"))
            value = int(value) if value.is_integer() else value
            sampler = lambda rng: value  # noqa: E731
        elif name == "weibull":
            shape, scale = float(kw.pop("shape")), float(kw.pop("scale", 1.0))
            sampler = lambda rng: scale * rng.weibull(shape)  # noqa: E731
        elif name == "exponential":
            scale = float(kw.pop("scale", 1.0))
            sampler = lambda rng: rng.exponential(scale)  # noqa: E731
        elif name == "uniform_int":
            low, high = int(kw.pop("low")), int(kw.pop("high"))
            if low > high:
                raise ValueError("uniform_int needs low <= high")
            sampler = lambda rng: int(rng.integers(low, high + 1))  # noqa: E731
        elif name == "choice":
            values = [int(v) for v in kw.pop("values").split(",")]
            sampler = lambda rng: values[int(rng.integers(len(values)))]  # noqa: E731
        else:
            raise ValueError(f"unknown sampler {name!r}")
    except KeyError as exc:
        raise ValueError(f"sampler {name!r} is missing {exc.args[0]}=") from None
    if kw:
        raise ValueError(f"sampler {name!r} got unknown arguments {sorted(kw)}")
    return sampler


DEFAULT_CONFIG = {
    "wait": "weibull shape=0.8 scale=1.0",
    "b_inc": "uniform_int low=-1 high=1",
    "c_wait": "const value=1000",
    "c_inc": "uniform_int low=-5 high=5",
    "n_ticks": "uniform_int low=50 high=150",
    "z0_t": "0",
    "z0_p": "1000",
}


def parse_config(text: str) -> Dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key = value")
        key = key.strip()
        if key not in DEFAULT_CONFIG:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        cfg[key] = val.strip()
    return cfg


def model_from_config(cfg: Dict[str, str]) -> Tuple[IncrementModel, Tick]:
    merged = {**DEFAULT_CONFIG, **cfg}
    model = IncrementModel(
        wait=make_sampler(merged["wait"]),
        b_inc=make_sampler(merged["b_inc"]),
        c_wait=make_sampler(merged["c_wait"]),
        c_inc=make_sampler(merged["c_inc"]),
        n_ticks=make_sampler(merged["n_ticks"]),
    )
    return model, Tick(float(merged["z0_t"]), int(merged["z0_p"]))


def series_to_csv(s: SessionSeries) -> str:
    out = io.StringIO()
    out.write("session,index,t,p\n")
    for j, session in enumerate(s.sessions):
        for i, tick in enumerate(session):
            out.write(f"{j},{i},{tick.t!r},{tick.p}\n")
    return out.getvalue()
