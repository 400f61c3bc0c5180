"""Command line entry point: ``iteral <subcommand> ...``.

Exit status: 0 on success, 1 on usage or parse errors, 2 when a Collatz
trace hits its guard or a computation fails numerically.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, abc_process, collatz, core, dsl, dynamics, sieve

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text, count, what):
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return [float(x) for x in parts]
    except ValueError:
        raise UsageError(f"{what}: not a number in {text!r}") from None


def _size(text):
    w, sep, h = text.lower().partition("x")
    if not sep or not w.isdigit() or not h.isdigit():
        raise UsageError(f"--size must look like WxH, got {text!r}")
    return int(w), int(h)


def _natural(text):
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


def _positive(text):
    value = _natural(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _radix(text):
    value = _natural(text)
    if not 2 <= value <= 36:
        raise argparse.ArgumentTypeError(f"radix must be in 2..36, got {value}")
    return value


def _emit(text_or_bytes, out, stdout):
    if out is None:
        if isinstance(text_or_bytes, bytes):
            stdout.flush()
            getattr(stdout, "buffer", stdout).write(text_or_bytes)
        else:
            stdout.write(text_or_bytes)
        return
    path = Path(out)
    if isinstance(text_or_bytes, bytes):
        path.write_bytes(text_or_bytes)
    else:
        path.write_text(text_or_bytes)


def _show_config(items, stdout):
    for key, value in items:
        stdout.write(f"{key}={value}\n")
    return EXIT_OK


# -------------------------------------------------------------- commands


def cmd_eval(args, stdout, stderr):
    policy = core.ConvergencePolicy(eps=args.eps, bailout=args.bailout, max_steps=args.max_steps)
    if args.show_config:
        return _show_config(
            [("eps", policy.eps), ("bailout", policy.bailout), ("max_steps", policy.max_steps)], stdout
        )
    env = {}
    for binding in args.let:
        name, sep, text = binding.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"--let expects name=value, got {binding!r}")
        outcome = dsl.evaluate(text, {}, policy)
        if not isinstance(outcome, (core.Value, core.Converged)):
            raise UsageError(f"--let {name}: value did not evaluate ({outcome})")
        env[name] = outcome.value
    expr = dsl.parse(args.expr)
    outcome = dsl.evaluate(expr, env, policy)
    if isinstance(outcome, (core.Value, core.Converged)):
        stdout.write(dsl.format_value(outcome.value) + "\n")
        return EXIT_OK
    if isinstance(outcome, core.Cycle):
        stdout.write(f"CYCLE entry={outcome.entry} period={outcome.period}\n")
        return EXIT_OK
    if isinstance(outcome, core.Diverged):
        stdout.write(f"DIVERGED steps={outcome.steps}\n")
        return EXIT_NUMERIC
    stdout.write(f"DOMAIN EXIT steps={outcome.steps}\n")
    return EXIT_NUMERIC


def cmd_format(args, stdout, stderr):
    stdout.write(dsl.format_expr(dsl.parse(args.expr), unicode=args.unicode) + "\n")
    return EXIT_OK


def cmd_classify(args, stdout, stderr):
    if args.show_config:
        return _show_config([("n", args.n), ("radix", args.radix)], stdout)
    line = sieve.descriptor(args.n)
    if args.radix != 10:
        line = f"{collatz.to_radix(args.n, args.radix)} {line}"
    stdout.write(line + "\n")
    return EXIT_OK


def cmd_oneness(args, stdout, stderr):
    if args.show_config:
        return _show_config(
            [("n", args.n), ("radix", args.radix), ("exact", args.exact),
             ("cap31", args.cap31), ("max_steps", args.max_steps)],
            stdout,
        )
    if args.n < 1:
        raise UsageError("oneness needs n >= 1")
    tr = collatz.trace(args.n, args.radix, max_steps=args.max_steps, cap31=args.cap31)
    stdout.write(tr.format(exact=args.exact))
    if tr.status != "ONE":
        stderr.write(f"oneness: stopped with status {tr.status}\n")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_fractal(args, stdout, stderr):
    grid = dynamics.GridSpec(*_floats(args.grid, 4, "--grid"), *_size(args.size))
    params = dynamics.EscapeParams(args.max_iter, args.bailout)
    c = complex(*_floats(args.c, 2, "--c"))
    kind = dynamics.Mandelbrot() if args.kind == "mandelbrot" else dynamics.Julia(c)
    if args.show_config:
        return _show_config(
            [("kind", args.kind), ("c", args.c), ("grid", args.grid), ("size", args.size),
             ("max_iter", params.max_iter), ("bailout", params.bailout), ("out", args.out)],
            stdout,
        )
    counts = dynamics.render_grid(kind, grid, params)
    if args.out is not None and args.out.lower().endswith(".csv"):
        _emit(dynamics.grid_to_csv(counts, grid), args.out, stdout)
    else:
        _emit(dynamics.to_pgm(counts, params.max_iter), args.out, stdout)
    return EXIT_OK


def cmd_logistic(args, stdout, stderr):
    if args.show_config:
        return _show_config([("b", args.b), ("x0", args.x0), ("steps", args.steps), ("out", args.out)], stdout)
    orbit = dynamics.logistic_orbit(args.b, args.x0, args.steps)
    lines = ["n,x"] + [f"{i},{float(x)!r}" for i, x in enumerate(orbit.values)]
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return EXIT_OK if isinstance(orbit.outcome, core.Value) else EXIT_NUMERIC


def cmd_lorenz(args, stdout, stderr):
    prm = dynamics.LorenzParams(args.sigma, args.r, args.b, args.dt)
    s0 = _floats(args.x0, 3, "--x0")
    if args.show_config:
        return _show_config(
            [("sigma", prm.sigma), ("r", prm.r), ("b", prm.b), ("dt", prm.dt),
             ("steps", args.steps), ("x0", args.x0), ("out", args.out)],
            stdout,
        )
    states = dynamics.lorenz_trajectory(s0, prm, args.steps)
    _emit(dynamics.trajectory_to_csv(states, prm.dt), args.out, stdout)
    if len(states) != args.steps + 1:
        stderr.write(f"lorenz: trajectory truncated after {len(states) - 1} steps (non-finite state)\n")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_abc(args, stdout, stderr):
    cfg = {}
    if args.config:
        cfg = abc_process.parse_config(Path(args.config).read_text())
    if args.show_config:
        merged = {**abc_process.DEFAULT_CONFIG, **cfg}
        return _show_config(
            [("sessions", args.sessions), ("seed", args.seed)] + list(merged.items()), stdout
        )
    model, z0 = abc_process.model_from_config(cfg)
    series = abc_process.simulate(z0, model, args.sessions, args.seed)
    _emit(abc_process.series_to_csv(series), args.out, stdout)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iteral", description="Iteral notation engine: iteration, sieve, Collatz, dynamics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--show-config", action="store_true", help="print effective parameters and exit")
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate an iteral expression, e.g. 'I[x=2, n=2](x^2)'")
    p.add_argument("expr")
    p.add_argument("--let", action="append", default=[], metavar="NAME=VALUE", help="bind a free variable")
    p.add_argument("--eps", type=float, default=core.DEFAULT_POLICY.eps)
    p.add_argument("--bailout", type=float, default=core.DEFAULT_POLICY.bailout)
    p.add_argument("--max-steps", type=_positive, default=core.DEFAULT_POLICY.max_steps)

    p = sub.add_parser("format", help="print an expression in canonical form")
    p.add_argument("expr")
    p.add_argument("--unicode", action="store_true", help="draw iterals with И and sub/superscripts")
    p.set_defaults(func=cmd_format)

    p = add("classify", cmd_classify, "name the fixed subsequence holding n")
    p.add_argument("n", type=_natural)
    p.add_argument("--radix", type=_radix, default=10, help="also print n in this radix")

    p = add("oneness", cmd_oneness, "Collatz trace of n with values shown in a radix")
    p.add_argument("n", type=_natural)
    p.add_argument("radix", type=_radix)
    p.add_argument("--exact", action="store_true", help="fixed-width aligned columns")
    p.add_argument("--cap31", action="store_true", help="stop when a computation exceeds 2^31 - 1")
    p.add_argument("--max-steps", type=_positive, default=collatz.MAX_STEPS)

    p = add("fractal", cmd_fractal, "escape-time image of a Mandelbrot or filled-in Julia set")
    p.add_argument("--kind", choices=("mandelbrot", "julia"), default="mandelbrot")
    p.add_argument("--c", default="0,0", metavar="RE,IM", help="Julia parameter (use --c=-1,0 for negatives)")
    p.add_argument("--grid", default="-2,2,-2,2", metavar="RE0,RE1,IM0,IM1")
    p.add_argument("--size", default="256x256", metavar="WxH")
    p.add_argument("--max-iter", type=_positive, default=1000)
    p.add_argument("--bailout", type=float, default=2.0)
    p.add_argument("--out", help="output file; .csv writes CSV, anything else PGM")

    p = add("logistic", cmd_logistic, "orbit of the logistic map b x (1 - x) as CSV")
    p.add_argument("--b", type=float, default=3.2)
    p.add_argument("--x0", type=float, default=0.3)
    p.add_argument("--steps", type=_natural, default=200)
    p.add_argument("--out")

    p = add("lorenz", cmd_lorenz, "Lorenz double-approximation trajectory as CSV")
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--r", type=float, default=28.0)
    p.add_argument("--b", type=float, default=8.0 / 3.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=_natural, default=10000)
    p.add_argument("--x0", default="0,1,0", metavar="X,Y,Z")
    p.add_argument("--out")

    p = add("abc", cmd_abc, "simulate the a-b-c tick process as CSV")
    p.add_argument("--sessions", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="flat key=value file of sampler settings")
    p.add_argument("--out")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, stdout, stderr)
    except (UsageError, dsl.UnboundVariableError, OSError, ValueError, TypeError) as exc:
        stderr.write(f"iteral {args.command}: {exc}\n")
        return EXIT_USAGE
    except ArithmeticError as exc:
        stderr.write(f"iteral {args.command}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
