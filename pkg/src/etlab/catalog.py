"""Closed-form solutions and the warped-product classification checks.

Every builder returns an :class:`EinsteinTypeStructure` on an explicit chart.
Spheres use the stereographic chart ``4 a^2 / (1 + |y|^2)^2 delta``; the
static vacuum family is written in the areal coordinate ``r`` with potential
``u = sqrt(1 - r^(2-n))`` (the equations are linear in the potential, so the
constant prefactor is dropped).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import CriticalPointError, NumericError, UnsupportedDimensionError
from .expressions import Const, Expr, Var, as_expr, sin, sqrt
from .geometry import CurvatureBundle, MetricChart
from .jets import DEFAULT_ORDER
from .structures import EinsteinTypeStructure, StructurePoint

SUPPORTED_DIMS = (4, 5, 6)
HORIZON_MARGIN = 0.3


def _check_dim(n: int, allowed=SUPPORTED_DIMS):
    if n not in allowed:
        raise UnsupportedDimensionError(f"dimension {n} not supported here; expected one of {allowed}")


def _names(prefix: str, count: int, start: int = 1) -> list[str]:
    return [f"{prefix}{i}" for i in range(start, start + count)]


def _diag(entries: Sequence[Expr]) -> list[list[Expr]]:
    n = len(entries)
    zero = Const(0.0)
    return [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]


def _sumsq(xs: Sequence[Expr]) -> Expr:
    out = xs[0] ** 2
    for x in xs[1:]:
        out = out + x**2
    return out


# -- fibers ---------------------------------------------------------------------


@dataclass(frozen=True)
class Fiber:
    """A fiber metric; ``einstein_constant`` is None for non-Einstein fibers."""

    chart: MetricChart
    einstein_constant: float | None

    @property
    def dim(self) -> int:
        return self.chart.dim


def sphere_fiber(dim: int, radius: float = 1.0, names=None, half_width: float = 1.0) -> Fiber:
    """Round sphere of the given radius in a stereographic chart."""
    names = names or _names("y", dim)
    ys = [Var(i, nm) for i, nm in enumerate(names)]
    conf = 4.0 * radius**2 / (1 + _sumsq(ys)) ** 2
    chart = MetricChart(names, _diag([conf] * dim), [(-half_width, half_width)] * dim, f"S{dim}")
    return Fiber(chart, (dim - 1) / radius**2)


def product_fiber(a2: float, b2: float, half_width: float = 1.0) -> Fiber:
    """``S^2(a) x S^2(b)``; Einstein exactly when ``a2 == b2``."""
    names = _names("y", 4)
    ys = [Var(i, nm) for i, nm in enumerate(names)]
    ca = 4.0 * a2 / (1 + _sumsq(ys[:2])) ** 2
    cb = 4.0 * b2 / (1 + _sumsq(ys[2:])) ** 2
    chart = MetricChart(names, _diag([ca, ca, cb, cb]), [(-half_width, half_width)] * 4, "S2xS2")
    lam = 1.0 / a2 if a2 == b2 else None
    return Fiber(chart, lam)


def fiber_einstein_residual(fiber: Fiber, point: Sequence[float]) -> float:
    """``max |Ric - lambda g|`` at a fiber point (inf for non-Einstein fibers)."""
    if fiber.einstein_constant is None:
        return math.inf
    b = CurvatureBundle(fiber.chart, point, 2)
    return float(np.max(np.abs(b.ricci_jet[..., 0] - fiber.einstein_constant * b.g_jet[..., 0])))


# -- warped products ------------------------------------------------------------


@dataclass(frozen=True)
class WarpedProductChart:
    """``base_factor(r) dr^2 + warp(r)^2 g_fiber`` on ``base x fiber box``.

    ``base_factor`` and ``warp`` are expressions in the single variable ``r``
    (coordinate index 0 of the assembled chart).
    """

    base: tuple[float, float]
    warp: Expr
    fiber: Fiber
    base_factor: Expr = Const(1.0)
    name: str = "warped"

    @property
    def dim(self) -> int:
        return self.fiber.dim + 1

    @functools.cached_property
    def chart(self) -> MetricChart:
        return _assemble(self)

    def fiber_point(self, point: Sequence[float]) -> np.ndarray:
        return np.asarray(point[1:], dtype=float)


def _shift(expr: Expr, offset: int, names: Sequence[str]) -> Expr:
    """Re-index the variables of ``expr`` by ``offset``."""
    from .expressions import Add, Call, Div, Mul, Neg, Pow, Sub

    if isinstance(expr, Var):
        return Var(expr.index + offset, names[expr.index + offset])
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Neg):
        return Neg(_shift(expr.arg, offset, names))
    if isinstance(expr, Pow):
        return Pow(_shift(expr.base, offset, names), expr.exponent)
    if isinstance(expr, Call):
        return Call(expr.func, _shift(expr.arg, offset, names))
    for cls in (Add, Sub, Mul, Div):
        if type(expr) is cls:
            return cls(_shift(expr.left, offset, names), _shift(expr.right, offset, names))
    raise TypeError(f"cannot shift {expr!r}")


def _assemble(w: WarpedProductChart) -> MetricChart:
    m = w.fiber.dim
    names = ["r"] + list(w.fiber.chart.coord_names)
    phi2 = w.warp**2
    comps = [[Const(0.0)] * (m + 1) for _ in range(m + 1)]
    comps[0][0] = w.base_factor
    for a in range(m):
        for c in range(m):
            fc = w.fiber.chart.components[a][c]
            if isinstance(fc, Const) and fc.value == 0.0:
                continue
            comps[a + 1][c + 1] = phi2 * _shift(fc, 1, names)
    return MetricChart(names, comps, [w.base] + list(w.fiber.chart.domain), w.name)


@dataclass(frozen=True)
class FiberWeylCheck:
    """Both sides of the fiber-Weyl formula on fiber index pairs.

    ``lhs[a, b] = W(e1, d_a, e1, d_b)`` with ``e1`` the unit radial vector;
    ``rhs = (Ric_fiber - R_fiber g_fiber / (n - 1)) / (n - 2)`` in the same
    fiber coordinates; ``sign`` is the sign relating them,
    ``lhs = sign * rhs``.
    """

    lhs: np.ndarray
    rhs: np.ndarray
    sign: float

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.lhs - self.sign * self.rhs)))

    @property
    def relative(self) -> float:
        return self.residual / (1.0 + max(np.max(np.abs(self.lhs)), np.max(np.abs(self.rhs))))


# Sign of the fiber-Weyl relation under the curvature convention fixed by the
# Ricci identity (R_ijkl = g_ik g_jl - g_il g_jk on the unit sphere).
FIBER_WEYL_SIGN = -1.0


def fiber_weyl_sides(w: WarpedProductChart, point: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    n = w.dim
    b = CurvatureBundle(w.chart, point, 2)
    weyl = b.weyl_jet[..., 0]
    lhs = weyl[0, 1:, 0, 1:] / b.g_jet[0, 0, 0]
    fb = CurvatureBundle(w.fiber.chart, w.fiber_point(point), 2)
    rhs = (fb.ricci_jet[..., 0] - fb.scalar * fb.g_jet[..., 0] / (n - 1)) / (n - 2)
    return lhs, rhs


def check_fiber_einstein_weyl(w: WarpedProductChart, point: Sequence[float], sign: float = FIBER_WEYL_SIGN) -> FiberWeylCheck:
    lhs, rhs = fiber_weyl_sides(w, point)
    return FiberWeylCheck(lhs, rhs, sign)


# -- solution builders ------------------------------------------------------------


def cartesian_chart(n: int, conformal: Expr | None, box, name: str) -> tuple[MetricChart, list[Var]]:
    names = _names("x", n)
    xs = [Var(i, nm) for i, nm in enumerate(names)]
    c = Const(1.0) if conformal is None else conformal(xs)
    return MetricChart(names, _diag([c] * n), [box] * n, name), xs


def make_flat(n: int = 4, f: Expr | str | None = None, h: float = 0.0, box=(0.1, 1.0)) -> EinsteinTypeStructure:
    """Euclidean space with an affine potential (default ``3 x1 + 1``)."""
    _check_dim(n, (3, 4, 5, 6))
    chart, xs = cartesian_chart(n, None, box, "flat")
    if f is None:
        f = 3.0 * xs[0] + 1.0
    elif isinstance(f, str):
        from .expressions import parse_expression

        f = parse_expression(f, chart.coord_names)
    return EinsteinTypeStructure(chart, f, as_expr(h), "static_null_lambda", harmonic_weyl=True)


def _stereo(xs, a2=1.0):
    return 4.0 * a2 / (1 + _sumsq(xs)) ** 2


def make_sphere(n: int = 4, half_width: float = 0.35) -> EinsteinTypeStructure:
    """Unit sphere with the height function ``(1 - |x|^2) / (1 + |x|^2)``, ``h = n f``."""
    _check_dim(n)
    chart, xs = cartesian_chart(n, _stereo, (-half_width, half_width), "sphere")
    s = _sumsq(xs)
    f = (1 - s) / (1 + s)
    return EinsteinTypeStructure(chart, f, n * f, "static_nonnull_lambda", harmonic_weyl=True)


def make_cpe_sphere(n: int = 4, half_width: float = 0.35) -> EinsteinTypeStructure:
    """Unit sphere with the height function as a critical-point-equation solution."""
    base = make_sphere(n, half_width)
    return EinsteinTypeStructure(base.chart, base.f, base.h, "cpe", harmonic_weyl=True)


def make_miao_tam_ball(n: int = 4, box=(0.3, 1.0)) -> EinsteinTypeStructure:
    """Flat space with ``f = -|x|^2 / (2(n-1))`` and ``h = 1/(n-1)``."""
    _check_dim(n)
    chart, xs = cartesian_chart(n, None, box, "miao_tam_ball")
    f = -_sumsq(xs) / (2.0 * (n - 1))
    return EinsteinTypeStructure(chart, f, Const(1.0 / (n - 1)), "miao_tam", harmonic_weyl=True)


def make_schwarzschild_slice(n: int = 4, box=(0.5, 2.0)) -> EinsteinTypeStructure:
    """Time-symmetric Schwarzschild slice in isotropic Cartesian coordinates.

    ``g = psi^(4/(n-2)) delta`` with ``psi = 1 + rho^(2-n)/4``, potential
    ``(1 - rho^(2-n)/4) / psi``.  Areal radius ``r = rho psi^(2/(n-2))``, so
    ``1 - r^(2-n)`` is the square of the potential.
    """
    _check_dim(n)
    lo = box[0]
    rho_h = 4.0 ** (-1.0 / (n - 2))
    if lo * math.sqrt(n) <= rho_h * (1 + HORIZON_MARGIN / 3):
        raise ValueError("box reaches the horizon")
    names = _names("x", n)
    xs = [Var(i, nm) for i, nm in enumerate(names)]
    q = 0.25 * _sumsq(xs) ** (-(n - 2) / 2.0)
    psi = 1 + q
    conf = psi ** (4.0 / (n - 2))
    chart = MetricChart(names, _diag([conf] * n), [box] * n, "schwarzschild_slice")
    f = (1 - q) / psi
    return EinsteinTypeStructure(chart, f, Const(0.0), "static_null_lambda", harmonic_weyl=True)


def isotropic_radius(n: int, r: float) -> float:
    """Isotropic radius rho with areal radius ``r`` (``r > 1``)."""
    if r <= 1.0:
        raise ValueError("areal radius must exceed 1")
    big = r ** ((n - 2) / 2.0)
    s = (big + math.sqrt(big * big - 1.0)) / 2.0
    return s ** (2.0 / (n - 2))


def schwarzschild_point(n: int, r: float, direction: Sequence[float] | None = None) -> np.ndarray:
    """Isotropic Cartesian point at areal radius ``r`` along ``direction``."""
    d = np.ones(n) if direction is None else np.asarray(direction, dtype=float)
    return isotropic_radius(n, r) * d / np.linalg.norm(d)


@dataclass(frozen=True)
class Example1Solution:
    """``(1 - r^(2-n))^-1 dr^2 + r^2 g_fiber`` with potential ``sqrt(1 - r^(2-n))``, ``h = 0``."""

    n: int
    warped: WarpedProductChart
    structure: EinsteinTypeStructure
    r_min: float
    r_max: float

    @property
    def chart(self) -> MetricChart:
        return self.structure.chart

    def point(self, r: float, fiber: Sequence[float] | None = None) -> np.ndarray:
        y = np.zeros(self.n - 1) if fiber is None else np.asarray(fiber, dtype=float)
        return np.concatenate([[r], y])


def make_example1_solution(
    n: int = 4,
    r_min: float | None = None,
    r_max: float = 4.0,
    fiber: str = "sphere",
    half_width: float = 1.0,
) -> Example1Solution:
    _check_dim(n)
    r_min = 1.0 + HORIZON_MARGIN if r_min is None else float(r_min)
    if r_min <= 1.0 or r_max <= r_min:
        raise ValueError("need 1 < r_min < r_max")
    if fiber == "sphere":
        fib = sphere_fiber(n - 1, 1.0, half_width=half_width)
    elif fiber == "s2xs2":
        if n != 5:
            raise UnsupportedDimensionError("the S2xS2 fiber needs n = 5")
        fib = product_fiber(1.0 / 3.0, 1.0 / 3.0, half_width)
    else:
        raise ValueError(f"unknown fiber {fiber!r}; expected 'sphere' or 's2xs2'")
    r = Var(0, "r")
    lapse2 = 1 - r ** (2.0 - n)
    warped = WarpedProductChart((r_min, r_max), r, fib, 1 / lapse2, f"example1_{fiber}")
    structure = EinsteinTypeStructure(
        warped.chart, sqrt(lapse2), Const(0.0), "static_null_lambda", harmonic_weyl=True, warped=warped
    )
    return Example1Solution(n, warped, structure, r_min, r_max)


def make_example1(n: int = 4, **params) -> EinsteinTypeStructure:
    return make_example1_solution(n, **params).structure


def make_warped(
    n: int = 4,
    epsilon: float = 0.1,
    base=(1.0, 3.0),
    fiber: Fiber | None = None,
) -> tuple[WarpedProductChart, EinsteinTypeStructure]:
    """``dr^2 + (r (1 + eps sin r))^2 g_S`` with ``f = r^2``; not a solution."""
    r = Var(0, "r")
    fib = fiber or sphere_fiber(n - 1)
    w = WarpedProductChart(tuple(base), r * (1 + epsilon * sin(r)), fib, Const(1.0), "warped_generic")
    return w, EinsteinTypeStructure(w.chart, r**2, Const(0.0), "generic", claims_solution=False, warped=w)


def make_warped_generic(n: int = 4, epsilon: float = 0.1) -> EinsteinTypeStructure:
    return make_warped(n, epsilon)[1]


def make_generic_metric(n: int = 4) -> EinsteinTypeStructure:
    """A chart with no symmetry, for exercising the general curvature identities."""
    from .expressions import cos

    names = _names("x", n)
    xs = [Var(i, nm) for i, nm in enumerate(names)]
    comps = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                e = 1 + 0.3 * sin(xs[i] * xs[(i + 1) % n]) + 0.2 * xs[(i + 2) % n] ** 2
            elif j == i + 1:
                e = 0.15 * cos(xs[i] + 2 * xs[(j + 1) % n]) * xs[(i + 3) % n]
            else:
                e = 0.1 * xs[i] * xs[j] / (1 + xs[(i + j) % n] ** 2)
            comps[i][j] = comps[j][i] = e
    chart = MetricChart(names, comps, [(-0.5, 0.5)] * n, "generic_metric")
    f = 2 + xs[0] + 0.5 * xs[1] * xs[-1] + 0.3 * sin(xs[2 % n])
    return EinsteinTypeStructure(chart, f, 0.5 * xs[1], "generic", claims_solution=False)


# -- Example 1 radial profile ------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    t: float
    f: float
    df: float


def example1_profile(n: int, r: float) -> Profile:
    """Arclength ``t(r) = int_1^r du / sqrt(1 - u^(2-n))`` with ``f = r``, ``f' = sqrt(1 - r^(2-n))``.

    The integrable singularity at ``u = 1`` is removed by ``u = 1 + s^2``.
    """
    if n < 3:
        raise UnsupportedDimensionError("profile needs n >= 3")
    if not r > 1.0:
        raise ValueError("r must exceed 1")

    def integrand(s):
        u = 1.0 + s * s
        if s == 0.0:
            return 2.0 / math.sqrt(n - 2)  # limit of 2 s / sqrt(1 - u^(2-n))
        return 2.0 * s / math.sqrt(-math.expm1((2 - n) * math.log1p(s * s)))

    t, _ = integrate.quad(integrand, 0.0, math.sqrt(r - 1.0), epsabs=1e-13, epsrel=1e-13, limit=200)
    return Profile(t, r, math.sqrt(1.0 - r ** (2.0 - n)))


# -- classification checks -----------------------------------------------------------


@dataclass(frozen=True)
class EigenvectorCheck:
    residual: np.ndarray  # Ric(grad f) - kappa grad f, as a covector
    kappa: float
    frame_combinations: float  # max over i != j of |grad_j f (R_jj + (n-1) R_ii - R)|
    cotton: float
    radial_weyl: float
    grad_norm: float

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    @property
    def relative(self) -> float:
        return self.max_residual / (1.0 + self.grad_norm * (1.0 + abs(self.kappa)))


GRAD_EPS = 1e-8


def check_ricci_eigenvector(E, point=None, order: int = 3) -> EigenvectorCheck:
    s = E if isinstance(E, StructurePoint) else E.at(point, order)
    b = s.b
    n = s.n
    g, gi = s.g, s.g_inv
    ric = b.ricci_jet[..., 0]
    df = s.df
    dfu = gi @ df
    norm2 = float(df @ dfu)
    if math.sqrt(norm2) < GRAD_EPS:
        raise CriticalPointError(f"|grad f| < {GRAD_EPS:g} at {b.point}")
    ric_df = ric @ dfu
    kappa = float(ric_df @ dfu) / norm2
    residual = ric_df - kappa * df
    evals, frame = _orthonormal_eigenframe(ric, g)
    dfe = frame.T @ df
    combos = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                combos = max(combos, abs(dfe[j] * (evals[j] + (n - 1) * evals[i] - b.scalar)))
    cot = float(np.max(np.abs(b.cotton_jet[..., 0]))) if b.order >= 3 else math.nan
    rw = float(np.max(np.abs(np.einsum("ijkl,l->ijk", b.weyl_jet[..., 0], dfu))))
    return EigenvectorCheck(residual, kappa, float(combos), cot, rw, math.sqrt(norm2))


def _orthonormal_eigenframe(sym: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of ``sym`` relative to ``g`` and a g-orthonormal eigenframe (columns)."""
    from scipy.linalg import eigh

    return eigh(sym, g)


@dataclass(frozen=True)
class LevelSetCheck:
    grad_norms: np.ndarray
    identity_residuals: np.ndarray
    identity_scale: float

    @property
    def spread(self) -> float:
        return float(np.max(self.grad_norms) - np.min(self.grad_norms))

    @property
    def max_identity_residual(self) -> float:
        return float(np.max(self.identity_residuals))


def check_level_set_gradient(E: EinsteinTypeStructure, points: Sequence[Sequence[float]], order: int = 3, level_tol: float = 1e-10) -> LevelSetCheck:
    """Spread of ``|grad f|`` over points of one level set, and per point the
    residual of ``f Ric(e_a, grad f) = e_a(|grad f|^2) / 2 + h df(e_a)`` over a
    g-orthonormal frame with ``e_1 = grad f / |grad f|``."""
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    norms, res = [], []
    scale = 0.0
    values = []
    for p in pts:
        s = E.at(p, order)
        values.append(s.f)
        b = s.b
        df = s.df
        dfu = s.g_inv @ df
        nrm = math.sqrt(float(df @ dfu))
        if nrm < GRAD_EPS:
            raise CriticalPointError(f"|grad f| < {GRAD_EPS:g} at {tuple(p)}")
        norms.append(nrm)
        frame = _adapted_frame(dfu / nrm, s.g)
        grad_sq = b.einsum("i,i->", s.df_jet, s.df_up_jet)
        d_grad_sq = b.grad(grad_sq)[..., 0]
        lhs = s.f * (frame.T @ (b.ricci_jet[..., 0] @ dfu))
        half = 0.5 * (frame.T @ d_grad_sq)
        hdf = s.h * (frame.T @ df)
        res.append(float(np.max(np.abs(lhs - half - hdf))))
        scale = max(scale, float(np.max(np.abs(lhs))), float(np.max(np.abs(half))), float(np.max(np.abs(hdf))))
    if max(values) - min(values) > level_tol:
        raise ValueError(f"points are not on one level set (f spread {max(values) - min(values):.3e})")
    return LevelSetCheck(np.array(norms), np.array(res), scale)


def _adapted_frame(e1: np.ndarray, g: np.ndarray) -> np.ndarray:
    """g-orthonormal frame (columns) whose first vector is ``e1``."""
    n = len(e1)
    basis = [e1]
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for u in basis:
            v = v - (u @ g @ v) * u
        nv = math.sqrt(max(float(v @ g @ v), 0.0))
        if nv > 1e-8:
            basis.append(v / nv)
        if len(basis) == n:
            break
    return np.column_stack(basis)


def schwarzschild_level_points(n: int, r: float, count: int, rng: np.random.Generator, box=(0.5, 2.0)) -> np.ndarray:
    """Points at areal radius ``r`` spread over directions inside ``box``."""
    rho = isotropic_radius(n, r)
    out = []
    while len(out) < count:
        d = rng.random(n) + 0.05
        p = rho * d / np.linalg.norm(d)
        if np.all(p > box[0]) and np.all(p < box[1]):
            out.append(p)
    return np.array(out)


def sphere_latitude_points(n: int, radius: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stereographic points with ``|x| = radius`` (a latitude of the height function)."""
    d = rng.normal(size=(count, n))
    return radius * d / np.linalg.norm(d, axis=1, keepdims=True)


# -- registry -----------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    kind: type
    default: Any
    help: str


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., EinsteinTypeStructure]
    params: dict[str, Param]
    realizes: str
    solution: bool

    def build(self, params: dict | None = None) -> EinsteinTypeStructure:
        return self.builder(**self.resolve(params))

    def resolve(self, params: dict | None = None) -> dict:
        params = dict(params or {})
        unknown = set(params) - set(self.params)
        if unknown:
            raise KeyError(f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}")
        out = {}
        for key, spec in self.params.items():
            val = params.get(key, spec.default)
            if val is not None and spec.kind is not str:
                if spec.kind is int and isinstance(val, float) and not val.is_integer():
                    raise ValueError(f"parameter {key} must be an integer")
                val = spec.kind(val)
            out[key] = val
        return out

    def schema(self) -> dict:
        return {
            k: {"type": p.kind.__name__, "default": p.default, "help": p.help}
            for k, p in self.params.items()
        }


_N = Param(int, 4, "dimension n in {4, 5, 6}")

CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry(
            "flat_linear",
            lambda n, a, c: make_flat(n, a * Var(0, "x1") + c),
            {"n": Param(int, 4, "dimension n in {3, 4, 5, 6}"), "a": Param(float, 3.0, "slope of f in x1"), "c": Param(float, 1.0, "constant term of f")},
            "Euclidean space, f affine, h = 0 (static vacuum, null cosmological constant)",
            True,
        ),
        CatalogEntry(
            "sphere_height",
            lambda n: make_sphere(n),
            {"n": _N},
            "unit round sphere, f = height function, h = n f (static, non-null cosmological constant)",
            True,
        ),
        CatalogEntry(
            "cpe_sphere",
            lambda n: make_cpe_sphere(n),
            {"n": _N},
            "unit round sphere, f = height function, critical point equation pair",
            True,
        ),
        CatalogEntry(
            "schwarzschild_slice",
            lambda n: make_schwarzschild_slice(n),
            {"n": _N},
            "Schwarzschild time-symmetric slice, isotropic chart, static vacuum potential, h = 0",
            True,
        ),
        CatalogEntry(
            "example1",
            lambda n, r_min, r_max, fiber: make_example1(n, r_min=r_min, r_max=r_max, fiber=fiber),
            {
                "n": _N,
                "r_min": Param(float, 1.0 + HORIZON_MARGIN, "inner radius (> 1, excludes the horizon)"),
                "r_max": Param(float, 4.0, "outer radius"),
                "fiber": Param(str, "sphere", "'sphere' (unit S^(n-1)) or 's2xs2' (n = 5, Einstein product fiber)"),
            },
            "static vacuum warped product over an Einstein fiber: harmonic curvature, zero radial Weyl",
            True,
        ),
        CatalogEntry(
            "miao_tam_ball",
            lambda n: make_miao_tam_ball(n),
            {"n": _N},
            "Euclidean space, f = -|x|^2/(2(n-1)), h = 1/(n-1) (Miao-Tam equation)",
            True,
        ),
        CatalogEntry(
            "warped_generic",
            lambda n, epsilon: make_warped_generic(n, epsilon),
            {"n": _N, "epsilon": Param(float, 0.1, "warp perturbation in r (1 + eps sin r)")},
            "warped product dr^2 + phi(r)^2 g_sphere with f = r^2 (not a solution; classification checks)",
            False,
        ),
        CatalogEntry(
            "generic_metric",
            lambda n: make_generic_metric(n),
            {"n": _N},
            "chart without symmetry (not a solution; general curvature identities)",
            False,
        ),
    ]
}


def build(name: str, params: dict | None = None) -> EinsteinTypeStructure:
    try:
        entry = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    return entry.build(params)


def list_catalog() -> list[dict]:
    return [
        {"name": e.name, "params": e.schema(), "realizes": e.realizes, "solution": e.solution}
        for e in CATALOG.values()
    ]
