import math

import numpy as np
import pytest

from etlab.errors import DomainError, ExpressionSyntaxError
from etlab.expressions import Call, Const, Pow, coordinates, lift, log, parse_expression, sqrt

NAMES = ["x1", "x2", "x3"]


@pytest.mark.parametrize(
    "text, point, want",
    [
        ("3*x1 + 1", [0.5, 0, 0], 2.5),
        ("x1^2 + x2**3", [2.0, -1.0, 0], 3.0),
        ("-x1 / (1 + x2)", [1.0, 1.0, 0], -0.5),
        ("sqrt(4*x3) * exp(0) + log(e)", [0, 0, 1.0], 3.0),
        ("sin(pi/2) + cos(x1)", [0.0, 0, 0], 2.0),
        ("(1 - x1^2)^-0.5", [0.6, 0, 0], 1.25),
        ("7", [0, 0, 0], 7.0),
    ],
)
def test_parse_and_evaluate(text, point, want):
    assert parse_expression(text, NAMES).evaluate(point) == pytest.approx(want, rel=1e-15)


def test_constant_exponent_folds():
    e = parse_expression("x1^(1/2)", NAMES)
    assert isinstance(e, Pow) and e.exponent == 0.5


def test_numeric_literal_accepted():
    assert parse_expression(2.5, NAMES) == Const(2.5)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("x1 +* 2", 1, 5),
        ("y + 1", 1, 1),
        ("x1 ^ 2 + bar", 1, 10),
        ("x1^x2", 1, 4),
        ("foo(x1)", 1, 1),
        ("(x1 +\n  q)", 2, 3),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text, NAMES)
    assert (info.value.line, info.value.column) == (line, column)
    assert f"(line {line}, column {column})" in str(info.value)


def test_two_argument_call_rejected():
    with pytest.raises(ExpressionSyntaxError, match="exactly one argument"):
        parse_expression("sqrt(x1, x2)", NAMES)


class TestDomainErrors:
    x, y = coordinates(["x", "y"])

    def test_log_names_node(self):
        node = log(self.x)
        with pytest.raises(DomainError) as info:
            lift(node + 1, [-0.5, 0.0], 3)
        assert info.value.node is node
        assert "log" in str(info.value)

    def test_sqrt_negative(self):
        with pytest.raises(DomainError, match="sqrt"):
            lift(sqrt(self.y - 1), [0.0, 0.5], 2)

    def test_division_by_zero(self):
        with pytest.raises(DomainError, match="division by zero"):
            lift(1 / (self.x - self.y), [0.3, 0.3], 2)

    def test_fractional_power_of_negative(self):
        with pytest.raises(DomainError):
            lift(self.x**1.5, [-1.0, 0.0], 2)

    def test_negative_integer_power_of_zero(self):
        with pytest.raises(DomainError):
            lift(self.x**-2, [0.0, 1.0], 2)


def test_call_rejects_unknown_function():
    with pytest.raises(ValueError):
        Call("tan", Const(1.0))


def test_shared_subexpression_lifts_once_consistently():
    x, y = coordinates(["x", "y"])
    s = sqrt(1 + x**2 + y**2)
    j = lift(s * s - (1 + x**2 + y**2), [0.4, -0.7], 5)
    assert np.max(np.abs(j.array)) < 1e-14


def test_parsed_matches_built():
    x1, x2, x3 = coordinates(NAMES)
    built = 4 / (1 + x1**2 + x2**2 + x3**2) ** 2
    parsed = parse_expression("4/(1 + x1^2 + x2^2 + x3^2)^2", NAMES)
    p = [0.1, -0.2, 0.3]
    assert np.array_equal(lift(built, p, 4).array, lift(parsed, p, 4).array)
    assert parsed.evaluate(p) == pytest.approx(4 / (1.14**2), rel=1e-15)
    assert math.isclose(lift(parsed, p, 0).value, parsed.evaluate(p))
