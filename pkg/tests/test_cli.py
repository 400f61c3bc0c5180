import io
import subprocess
import sys
from pathlib import Path

import pytest

from iteral import __version__, abc_process, collatz, dynamics
from iteral.cli import main

GOLDEN = (Path(__file__).parent / "data" / "oneness_9_3.txt").read_text()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_oneness_reference_trace():
    code, out, _ = run("oneness", "9", "3")
    assert code == 0
    assert [line.split() for line in out.splitlines()] == [line.split() for line in GOLDEN.splitlines()]
    assert run("oneness", "9", "3", "--exact")[1] == GOLDEN


def test_oneness_guards_exit_2():
    code, out, err = run("oneness", "27", "10", "--max-steps", "5")
    assert code == 2 and out.splitlines()[-1] == "UNRESOLVED" and "UNRESOLVED" in err
    code, out, _ = run("oneness", str(2**31 - 3), "10", "--cap31")
    assert code == 2 and out.splitlines()[-1] == "OVERFLOW"


def test_eval():
    assert run("eval", "I[x=2,n=2](x^2)") == (0, "16\n", "")
    assert run("eval", "I[x=1,n=5](a*x)", "--let", "a=3") == (0, "243\n", "")
    code, out, _ = run("eval", "I[x=2,n=inf](x^2)")
    assert code == 2 and out.startswith("DIVERGED")
    code, out, _ = run("eval", "I[x=1,n=2](1/(x-1))")
    assert code == 2 and out.startswith("DOMAIN EXIT")
    assert run("eval", "I[x=0,n=inf](1-x)")[1] == "CYCLE entry=0 period=2\n"


def test_format():
    assert run("format", "I[x=2,n=2](x^2)")[1] == "I[x=2, n=2](x^2)\n"
    assert run("format", "--unicode", "I[x=2,n=2](x^2)")[1] == "Иₓ₌₂²(x^2)\n"


def test_classify():
    assert run("classify", "0") == (0, "ZERO (EE∞E)\n", "")
    assert run("classify", "39")[1] == "EO2O : 16p + 7 : (k=2, p=2) : 39\n"
    assert run("classify", "14", "--radix", "3")[1] == "112 EO3E : 32p + 14 : (m=0, l=3, p=0) : 14\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "x + 1"],
        ["eval", "1 +"],
        ["eval", "1", "--let", "noequals"],
        ["classify", "-1"],
        ["classify", "5", "--bogus"],
        ["oneness", "9", "1"],
        ["oneness", "0", "10"],
        ["nosuchcommand"],
        [],
        ["fractal", "--size", "3by3"],
        ["lorenz", "--x0", "1,2"],
        ["lorenz", "--dt", "0"],
        ["abc", "--config", "/nonexistent/file.cfg"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    code, _, err = run(*argv)
    assert code == 1
    assert err or capsys.readouterr().err


def test_version(capsys):
    assert run("--version")[0] == 0
    assert __version__ in capsys.readouterr().out


def test_help_per_subcommand(capsys):
    for cmd in ("eval", "format", "classify", "oneness", "fractal", "logistic", "lorenz", "abc"):
        assert run(cmd, "--help")[0] == 0
        assert "usage" in capsys.readouterr().out


def test_show_config():
    _, out, _ = run("lorenz", "--show-config")
    assert "sigma=10.0" in out and "dt=0.01" in out
    _, out, _ = run("abc", "--show-config")
    assert "wait=weibull shape=0.8 scale=1.0" in out and "seed=0" in out
    _, out, _ = run("fractal", "--show-config")
    assert "max_iter=1000" in out and "bailout=2.0" in out
    _, out, _ = run("eval", "1", "--show-config")
    assert "eps=1e-12" in out


# thin-adapter identity: CLI output equals the module result byte for byte


def test_fractal_adapter(tmp_path):
    pgm, csv = tmp_path / "m.pgm", tmp_path / "m.csv"
    args = ["fractal", "--kind", "julia", "--c=-0.8,0.156", "--grid=-1.5,1.5,-1,1", "--size", "30x20", "--max-iter", "50"]
    assert run(*args, "--out", str(pgm))[0] == 0
    assert run(*args, "--out", str(csv))[0] == 0
    g = dynamics.GridSpec(-1.5, 1.5, -1, 1, 30, 20)
    counts = dynamics.render_grid(dynamics.Julia(complex(-0.8, 0.156)), g, dynamics.EscapeParams(50))
    assert pgm.read_bytes() == dynamics.to_pgm(counts, 50)
    assert csv.read_text() == dynamics.grid_to_csv(counts, g)


def test_fractal_pgm_to_stdout():
    proc = subprocess.run(
        [sys.executable, "-m", "iteral", "fractal", "--size", "1x1", "--grid=0.5,1.5,-0.5,0.5"],
        capture_output=True,
        check=True,
    )
    assert proc.stdout == b"P5\n1 1\n255\n" + bytes([round(4 * 255 / 1000)])


def test_lorenz_adapter():
    code, out, _ = run("lorenz", "--steps", "50", "--x0", "1,1,1")
    assert code == 0
    states = dynamics.lorenz_trajectory((1, 1, 1), dynamics.LorenzParams(), 50)
    assert out == dynamics.trajectory_to_csv(states, 0.01)


def test_logistic_adapter(tmp_path):
    path = tmp_path / "l.csv"
    assert run("logistic", "--b", "4", "--x0", "0.5", "--steps", "2", "--out", str(path))[0] == 0
    assert path.read_text() == "n,x\n0,0.5\n1,1.0\n2,0.0\n"


def test_abc_adapter(tmp_path):
    cfg = tmp_path / "abc.cfg"
    cfg.write_text("n_ticks = uniform_int low=2 high=5\nz0_p = 50\n")
    code, out, _ = run("abc", "--sessions", "3", "--seed", "9", "--config", str(cfg))
    assert code == 0
    model, z0 = abc_process.model_from_config(abc_process.parse_config(cfg.read_text()))
    assert out == abc_process.series_to_csv(abc_process.simulate(z0, model, 3, 9))
    assert out == run("abc", "--sessions", "3", "--seed", "9", "--config", str(cfg))[1]


def test_oneness_adapter():
    assert run("oneness", "27", "16")[1] == collatz.trace(27, 16).format()
