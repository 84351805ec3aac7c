"""Jet arithmetic, lifting and partial extraction."""

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from etlab.errors import DomainError, OrderExhaustedError, ShapeMismatchError
from etlab.expressions import coordinates, cos, exp, lift, log, sin, sqrt
from etlab.jets import (
    Jet,
    JetSpace,
    extract_partial,
    jet_add,
    jet_mul,
    jet_recip,
    jet_sqrt,
    jet_space,
)

(X,) = coordinates(["x"])
XS = coordinates(["x", "y", "z", "w"])


def coeff_list(j):
    return [j.coefficient((k,)) for k in range(j.order + 1)]


class TestLiftExamples:
    def test_square(self):
        j = lift(X**2, [3.0], 2)
        assert coeff_list(j) == [9.0, 6.0, 1.0]

    def test_sine_maclaurin(self):
        j = lift(sin(X), [0.0], 3)
        assert coeff_list(j) == pytest.approx([0.0, 1.0, 0.0, -1.0 / 6.0], abs=1e-15)

    def test_geometric_series(self):
        j = lift(1 / (1 - X), [0.0], 3)
        assert coeff_list(j) == pytest.approx([1.0, 1.0, 1.0, 1.0], abs=1e-15)

    def test_default_order(self):
        assert lift(X, [1.0]).order == 6


class TestArithmetic:
    def test_binomial(self):
        a = Jet.from_dict({(0,): 1.0, (1,): 1.0}, 1, 2)
        assert coeff_list(jet_mul(a, a)) == [1.0, 2.0, 1.0]

    def test_recip_geometric(self):
        a = Jet.from_dict({(0,): 1.0, (1,): -1.0}, 1, 3)
        assert coeff_list(jet_recip(a)) == pytest.approx([1, 1, 1, 1], abs=1e-15)

    def test_sqrt_binomial(self):
        a = Jet.from_dict({(0,): 1.0, (1,): 1.0}, 1, 2)
        assert coeff_list(jet_sqrt(a)) == pytest.approx([1.0, 0.5, -0.125], abs=1e-15)

    def test_add(self):
        a = Jet.variable(0, 2.0, 2, 2)
        b = Jet.variable(1, 3.0, 2, 2)
        c = jet_add(a, b)
        assert c.value == 5.0
        assert c.coefficient((1, 0)) == 1.0 and c.coefficient((0, 1)) == 1.0

    def test_mismatched_order(self):
        with pytest.raises(ShapeMismatchError):
            jet_add(Jet.constant(1.0, 2, 3), Jet.constant(1.0, 2, 4))

    def test_mismatched_vars(self):
        with pytest.raises(ShapeMismatchError):
            jet_mul(Jet.constant(1.0, 2, 3), Jet.constant(1.0, 3, 3))

    def test_recip_zero(self):
        with pytest.raises(DomainError):
            jet_recip(Jet.variable(0, 0.0, 1, 3))

    @pytest.mark.parametrize("v", [0.0, -1.0])
    def test_sqrt_nonpositive(self, v):
        with pytest.raises(DomainError):
            jet_sqrt(Jet.constant(v, 1, 3))

    def test_immutable(self):
        j = Jet.constant(1.0, 2, 2)
        with pytest.raises(ValueError):
            j.array[0] = 2.0


class TestExtractPartial:
    def test_mixed(self):
        x, y = coordinates(["x", "y"])
        j = lift(x**2 * y, [0.7, -1.3], 3)
        assert extract_partial(j, (2, 1)) == pytest.approx(2.0, abs=1e-14)

    def test_zero_index_is_value(self):
        x, y = coordinates(["x", "y"])
        j = lift(exp(x) * y, [0.2, 3.0], 4)
        assert extract_partial(j, (0, 0)) == j.value == pytest.approx(3 * math.exp(0.2))

    def test_sixth_power(self):
        j = lift(X**6, [0.4], 6)
        assert extract_partial(j, (6,)) == pytest.approx(720.0, rel=1e-14)

    def test_order_exhausted(self):
        j = lift(X**6, [0.4], 5)
        with pytest.raises(OrderExhaustedError) as info:
            extract_partial(j, (6,))
        assert info.value.required == 6


# sympy is the independent oracle for every derivative below
SYMS = sp.symbols("x y z w")


def _sympy_partial(expr, alpha, point):
    d = expr
    for s, k in zip(SYMS, alpha):
        if k:
            d = sp.diff(d, s, k)
    return float(d.subs(dict(zip(SYMS, point))))


def _random_poly(rng, nv, degree):
    """The same random polynomial built as a sympy expression and an etlab expression."""
    sym = sp.Integer(0)
    ours = 0.0
    space = jet_space(nv, degree)
    for mono in space.monomials:
        if rng.random() < 0.5:
            continue
        c = round(float(rng.uniform(-2, 2)), 3)
        term_s = sp.Float(c)
        term_o = c
        for s, v, k in zip(SYMS, XS, mono):
            if k:
                term_s *= s**k
                term_o = term_o * v**k
        sym += term_s
        ours = ours + term_o
    return sym, ours


@pytest.mark.parametrize("seed", range(8))
def test_polynomial_partials_match_sympy(seed):
    rng = np.random.default_rng(seed)
    nv = int(rng.integers(1, 5))
    degree = int(rng.integers(1, 6))
    sym, ours = _random_poly(rng, nv, degree)
    if isinstance(ours, float):
        pytest.skip("empty polynomial draw")
    point = [float(v) for v in rng.uniform(-1.5, 1.5, nv)]
    j = lift(ours, point, degree)
    for alpha in jet_space(nv, degree).monomials:
        want = _sympy_partial(sym, alpha, point)
        got = extract_partial(j, alpha)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_elementary_functions_match_sympy():
    x, y, z = SYMS[:3]
    ex, ey, ez = XS[:3]
    sym = sp.sqrt(1 + x**2 + y * z) * sp.exp(x - z) + sp.log(2 + y) * sp.sin(x * y) + sp.cos(z) ** 3 / (1 + x**2)
    ours = sqrt(1 + ex**2 + ey * ez) * exp(ex - ez) + log(2 + ey) * sin(ex * ey) + cos(ez) ** 3 / (1 + ex**2)
    point = [0.3, -0.4, 0.8]
    j = lift(ours, point, 5)
    for alpha in jet_space(3, 5).monomials:
        want = _sympy_partial(sym, alpha, point)
        assert extract_partial(j, alpha) == pytest.approx(want, rel=1e-11, abs=1e-11)


def test_fractional_power_matches_sympy():
    x, y = SYMS[:2]
    ex, ey = XS[:2]
    j = lift((1 + ex**2 + ey) ** (-1.5), [0.5, 0.25], 4)
    sym = (1 + x**2 + y) ** sp.Rational(-3, 2)
    for alpha in jet_space(2, 4).monomials:
        assert extract_partial(j, alpha) == pytest.approx(_sympy_partial(sym, alpha, [0.5, 0.25]), rel=1e-12)


def _random_jet(rng, nv, order):
    space = jet_space(nv, order)
    c = rng.uniform(-1, 1, space.size())
    c[0] = rng.choice([-1, 1]) * rng.uniform(0.1, 2.0)
    return Jet(space, c)


def test_recip_inverts_random_jets():
    rng = np.random.default_rng(11)
    for _ in range(100):
        nv = int(rng.integers(1, 5))
        a = _random_jet(rng, nv, 4)
        prod = jet_mul(a, jet_recip(a)).array
        assert prod[0] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(prod[1:])) < 1e-12


def test_recip_inverts_random_jets_default_order():
    # at order 6 the reciprocal's coefficients reach ~1/|a0|^6, so the
    # absolute error of the product is bounded relative to them
    rng = np.random.default_rng(11)
    for _ in range(100):
        nv = int(rng.integers(1, 5))
        a = _random_jet(rng, nv, 6)
        r = jet_recip(a)
        prod = jet_mul(a, r).array
        assert prod[0] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(prod[1:])) < 1e-12 * np.max(np.abs(r.array))


def test_sqrt_squares_back():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = _random_jet(rng, 3, 5)
        a = Jet(a.space, np.concatenate([[abs(a.value)], a.array[1:]]))
        s = jet_sqrt(a)
        assert np.max(np.abs(jet_mul(s, s).array - a.array)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(0, 2**32 - 1),
)
def test_leibniz_first_order(nv, seed):
    rng = np.random.default_rng(seed)
    a = _random_jet(rng, nv, 3)
    b = _random_jet(rng, nv, 3)
    ab = jet_mul(a, b)
    for i in range(nv):
        e = tuple(1 if k == i else 0 for k in range(nv))
        want = extract_partial(a, e) * b.value + a.value * extract_partial(b, e)
        assert extract_partial(ab, e) == want


class TestJetSpace:
    def test_sizes(self):
        sp_ = JetSpace(4, 6)
        assert sp_.size() == 210
        assert sp_.size(2) == 15

    def test_graded_layout(self):
        sp_ = JetSpace(2, 2)
        assert sp_.monomials[0] == (0, 0)
        assert all(sum(m) <= sum(n) for m, n in zip(sp_.monomials, sp_.monomials[1:]))

    def test_deriv_consumes_order(self):
        sp_ = jet_space(2, 3)
        arr = sp_.variable(0, 1.0)
        d = sp_.deriv(arr, 0)
        assert sp_.order_of(d) == 2
        assert d[0] == 1.0

    def test_deriv_of_order_zero_raises(self):
        sp_ = jet_space(2, 0)
        with pytest.raises(OrderExhaustedError):
            sp_.deriv(sp_.constant(1.0), 0)

    def test_matinv(self):
        x, y = coordinates(["x", "y"])
        exprs = [[2 + x**2, x * y], [x * y, 3 + sin(y)]]
        sp_ = jet_space(2, 4)
        m = np.array([[lift(e, [0.3, 0.6], 4).array for e in row] for row in exprs])
        inv = sp_.matinv(m)
        ident = sp_.einsum("ik,kj->ij", m, inv)
        assert np.allclose(ident[..., 0], np.eye(2), atol=1e-14)
        assert np.max(np.abs(ident[..., 1:])) < 1e-13
