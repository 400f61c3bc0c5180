import math
import random

import pytest
from hypothesis import given, settings

from ast_gen import exprs, random_expr
from iteral.core import UNBOUNDED, ConvergencePolicy, Converged, Cycle, Diverged, DomainExit, Value
from iteral.dsl import (
    Binary,
    Call,
    Iteral,
    Num,
    ParseError,
    Unary,
    UnboundVariableError,
    Var,
    evaluate,
    format_expr,
    format_value,
    free_vars,
    parse,
)

X_SQUARED = Binary("^", Var("x"), Num(2))


def test_parse_examples():
    assert parse("I[x=2, n=2](x^2)") == Iteral("x", Num(2), 2, X_SQUARED)
    assert parse("I[x=1, n=inf](1/(x+1))") == Iteral(
        "x", Num(1), UNBOUNDED, Binary("/", Num(1), Binary("+", Var("x"), Num(1)))
    )
    nested = parse("I[p=I[p=3, n=1](2*p+1), n=1](2*p)")
    inner = Iteral("p", Num(3), 1, Binary("+", Binary("*", Num(2), Var("p")), Num(1)))
    assert nested == Iteral("p", inner, 1, Binary("*", Num(2), Var("p")))


def test_whitespace_insignificant():
    assert parse("I [ x = 2 , n = 2 ] ( x ^ 2 )") == parse("I[x=2,n=2](x^2)")


@pytest.mark.parametrize(
    "src,tree",
    [
        ("1 + 2 * 3", Binary("+", Num(1), Binary("*", Num(2), Num(3)))),
        ("2^3^2", Binary("^", Num(2), Binary("^", Num(3), Num(2)))),
        ("-x^2", Unary("-", X_SQUARED)),
        ("2^-x", Binary("^", Num(2), Unary("-", Var("x")))),
        ("a - b - c", Binary("-", Binary("-", Var("a"), Var("b")), Var("c"))),
        ("a / b * c", Binary("*", Binary("/", Var("a"), Var("b")), Var("c"))),
        ("3*i", Binary("*", Num(3), Num(1j))),
        ("sqrt(2.5e-3)", Call("sqrt", Num(0.0025))),
        ("I", Var("I")),
    ],
)
def test_precedence(src, tree):
    assert parse(src) == tree


@pytest.mark.parametrize(
    "src,pos",
    [
        ("1 +", 3),
        ("(1 + 2", 6),
        ("I[x=1, n=-1](x)", 9),
        ("I[x=1, m=1](x)", 7),
        ("I[i=1, n=1](x)", 2),
        ("2 $ 3", 2),
        ("sin x", 4),
        ("1 2", 2),
    ],
)
def test_syntax_errors_carry_position(src, pos):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.pos == pos


def test_format_examples():
    assert format_expr(Iteral("x", Num(2), 2, X_SQUARED)) == "I[x=2, n=2](x^2)"
    assert format_expr(Num(3.5)) == "3.5"
    src = "I[p=I[p=3, n=1](2*p + 1), n=1](2*p)"
    assert format_expr(parse("I[p=I[p=3,n=1](2*p+1),n=1](2*p)")) == src
    assert format_expr(parse("(a - b) - (c - d)")) == "a - b - (c - d)"
    assert format_expr(parse("(-x)^2")) == "(-x)^2"


def test_format_unicode_display():
    assert format_expr(parse("I[x=2, n=2](x^2)"), unicode=True) == "Иₓ₌₂²(x^2)"
    assert format_expr(parse("I[x=1, n=inf](1/(x+1))"), unicode=True) == "Иₓ₌₁^∞(1/(x + 1))"


def test_format_keeps_value_of_unparseable_literals():
    e = Binary("^", Num(-2), Num(2))
    assert format_expr(e) == "(-2)^2"
    assert evaluate(parse(format_expr(e))) == Value(4)


@settings(max_examples=500, deadline=None)
@given(exprs)
def test_round_trip_property(e):
    assert parse(format_expr(e)) == e


def test_round_trip_seeded():
    rng = random.Random(1)
    for _ in range(500):
        e = random_expr(rng, 5)
        assert parse(format_expr(e)) == e


def test_eval_examples():
    assert evaluate("I[x=2, n=0](x^2)") == Value(2)
    assert evaluate("I[x=2, n=1](x^2)") == Value(4)
    assert evaluate("I[x=2, n=2](x^2)") == Value(16)
    assert evaluate("I[x=0, n=7](x+1)") == Value(7)
    assert evaluate("I[x=1, n=5](a*x)", {"a": 3}) == Value(243)
    assert evaluate("I[p=I[p=3, n=1](2*p+1), n=1](2*p)") == Value(14)


def test_eval_exactness():
    big = evaluate("I[x=3, n=6](x^2)")
    assert big == Value(3**64) and isinstance(big.value, int)
    assert isinstance(evaluate("6/3").value, complex)
    assert evaluate("2^-1") == Value(0.5 + 0j)


def test_eval_golden_ratio():
    out = evaluate("I[x=1, n=inf](1/(x+1))")
    assert isinstance(out, Converged)
    assert abs(out.value - 2 / (1 + math.sqrt(5))) < 1e-10


def test_eval_unbounded_squares():
    assert isinstance(evaluate("I[x=2, n=inf](x^2)"), Diverged)
    assert evaluate("I[x=1, n=inf](x^2)") == Converged(1, 1)
    out = evaluate("I[x=0.5, n=inf](x^2)")
    assert isinstance(out, Converged) and abs(out.value) < 1e-6


def test_eval_exact_cycle():
    assert evaluate("I[x=0, n=inf](1 - x)") == Cycle(0, 2)


def test_mixed_environment():
    expected = 0.5 + math.sin(math.sqrt(2) / 2)
    out = evaluate("cos(x)^2 + I[x=x, n=2](sin(x))", {"x": math.pi / 4})
    assert abs(out.value - expected) <= 1e-12
    out = evaluate("cos(y)^2 + I[x=y, n=2](sin(x))", {"y": math.pi / 4})
    assert abs(out.value - expected) <= 1e-12


def test_nesting_is_not_repetition():
    nested = parse("I[p=2*p0+1, n=1](I[p=2*p+1, n=1](2*p))")
    repeated = parse("I[p=2*p0+1, n=2](2*p)")
    for p0 in range(101):
        assert evaluate(nested, {"p0": p0}) == Value(8 * p0 + 6)
        assert evaluate(repeated, {"p0": p0}) == Value(8 * p0 + 4)


def test_domain_exit_is_an_outcome():
    assert evaluate("I[x=1, n=3](1/(x-1))") == DomainExit(0, 1)
    assert evaluate("I[x=2, n=5](1/(x-1))") == DomainExit(1, 1 + 0j)
    assert evaluate("1/0") == DomainExit(0)
    # a diverging inner iteral stops the outer one as a domain exit
    out = evaluate("I[y=1, n=2](I[x=2, n=inf](x^2) + y)")
    assert isinstance(out, DomainExit)
    # and at top level its own outcome comes through
    assert isinstance(evaluate("1 + I[x=2, n=inf](x^2)"), Diverged)


def test_unbound_variables():
    with pytest.raises(UnboundVariableError):
        evaluate("x + 1")
    with pytest.raises(UnboundVariableError):
        evaluate("I[x=y, n=1](x)")
    assert free_vars(parse("I[x=y, n=1](x + z)")) == {"y", "z"}


def test_policy_is_used():
    out = evaluate("I[x=1, n=inf](1/(x+1))", policy=ConvergencePolicy(eps=1e-3))
    assert isinstance(out, Converged) and out.steps < 10


def test_format_value():
    assert format_value(16) == "16"
    assert format_value(0.5 + 0j) == "0.5"
    assert format_value(1 + 2j) == "1.0 + 2.0*i"
    assert format_value(1 - 2j) == "1.0 - 2.0*i"
