"""Einstein-type structures ``f Ric = Hess f + h g`` and their residual identities.

Every residual returns a :class:`Residual`: the left-minus-right components
plus the separately evaluated terms, so relative residuals can be formed as
``max|residual| / (1 + max|term|)``.  Each side of an identity is evaluated
through its own code path; only the base curvature jets are shared.
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import NearZeroPotentialError, NumericError, OrderExhaustedError
from .expressions import Expr, as_expr
from .geometry import CurvatureBundle, MetricChart, _check_order, t_tensor_jet
from .jets import DEFAULT_ORDER
from .tensors import ComponentTensor, relative_residual

CASE_TAGS = (
    "generic",
    "static_null_lambda",
    "static_nonnull_lambda",
    "perfect_fluid",
    "cpe",
    "miao_tam",
)

EPS_F = 1e-6


@dataclass(frozen=True)
class PerfectFluidCoefficients:
    density: Expr
    pressure: Expr


@dataclass(frozen=True)
class EinsteinTypeStructure:
    """A metric chart with potential ``f`` and coefficient ``h``."""

    chart: MetricChart
    f: Expr
    h: Expr
    case_tag: str = "generic"
    fluid: PerfectFluidCoefficients | None = None
    eps_f: float = EPS_F
    pfe_trace_times_f: bool = False
    # False for charts that are not solutions (identity-only test beds)
    claims_solution: bool = True
    # expects harmonic Weyl and zero radial Weyl (the classification hypotheses)
    harmonic_weyl: bool = False
    warped: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "f", as_expr(self.f))
        object.__setattr__(self, "h", as_expr(self.h))
        if self.case_tag not in CASE_TAGS:
            raise ValueError(f"unknown case tag {self.case_tag!r}; expected one of {CASE_TAGS}")

    @property
    def dim(self) -> int:
        return self.chart.dim

    def at(self, point: Sequence[float], order: int = DEFAULT_ORDER) -> "StructurePoint":
        return StructurePoint(self, CurvatureBundle(self.chart, point, order))

    def scaled(self, c: float) -> "EinsteinTypeStructure":
        """Same metric with ``(f, h) -> (c f, c h)``."""
        return dataclasses.replace(self, f=c * self.f, h=c * self.h)


@dataclass
class Residual:
    components: np.ndarray
    terms: tuple[np.ndarray, ...] = ()

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.components))) if np.size(self.components) else 0.0

    @property
    def relative(self) -> float:
        return relative_residual(self.components, *self.terms)

    @property
    def tensor(self) -> ComponentTensor:
        return ComponentTensor.covariant(self.components)


class StructurePoint:
    """Jets of ``f``, ``h`` and derived fields at one point of a structure."""

    def __init__(self, structure: EinsteinTypeStructure, bundle: CurvatureBundle):
        self.structure = structure
        self.b = bundle
        self.n = bundle.dim

    @functools.cached_property
    def f_jet(self) -> np.ndarray:
        return self.b.lift(self.structure.f)

    @functools.cached_property
    def h_jet(self) -> np.ndarray:
        return self.b.lift(self.structure.h)

    @property
    def f(self) -> float:
        return float(self.f_jet[0])

    @property
    def h(self) -> float:
        return float(self.h_jet[0])

    def guard(self):
        if abs(self.f) <= self.structure.eps_f:
            raise NearZeroPotentialError(
                f"|f| = {abs(self.f):.3e} <= {self.structure.eps_f:g} at {self.b.point}"
            )

    @functools.cached_property
    def df_jet(self) -> np.ndarray:
        return self.b.grad(self.f_jet)

    @functools.cached_property
    def df_up_jet(self) -> np.ndarray:
        return self.b.einsum("lm,m->l", self.b.ginv_jet, self.df_jet)

    @property
    def df(self) -> np.ndarray:
        return self.df_jet[..., 0]

    @property
    def df_up(self) -> np.ndarray:
        return self.df_up_jet[..., 0]

    @functools.cached_property
    def hess_jet(self) -> np.ndarray:
        return self.b.covd(self.df_jet)

    @functools.cached_property
    def recip_f_jet(self) -> np.ndarray:
        self.guard()
        return self.b.space.recip(self.f_jet)

    @functools.cached_property
    def t_jet(self) -> np.ndarray:
        return t_tensor_jet(self.b, self.f_jet)

    @functools.cached_property
    def t_over_f_jet(self) -> np.ndarray:
        return self.b.mul(self.t_jet, self.recip_f_jet)

    @functools.cached_property
    def ric_up_jet(self) -> np.ndarray:
        return self.b.raise_slots(self.b.ricci_jet, (0, 1))

    @property
    def g(self) -> np.ndarray:
        return self.b.g_jet[..., 0]

    @property
    def g_inv(self) -> np.ndarray:
        return self.b.ginv_jet[..., 0]

    @property
    def laplacian(self) -> float:
        return float(np.einsum("ij,ij->", self.g_inv, self.hess_jet[..., 0]))


def _ctx(E, point, order) -> StructurePoint:
    if isinstance(E, StructurePoint):
        return E
    return E.at(point, order)


def residual_principal(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``f Ric - Hess f - h g``."""
    s = _ctx(E, point, order)
    s.guard()
    f_ric = s.f * s.b.ricci_jet[..., 0]
    hess = s.hess_jet[..., 0]
    hg = s.h * s.g
    return Residual(f_ric - hess - hg, (f_ric, hess, hg))


def residual_trace(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``f R - Laplacian f - n h``."""
    s = _ctx(E, point, order)
    s.guard()
    f_r = s.f * s.b.scalar
    lap = s.laplacian
    nh = s.n * s.h
    return Residual(np.array(f_r - lap - nh), (np.array(f_r), np.array(lap), np.array(nh)))


def residual_grad_h(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``grad h - (R grad f + f grad R / 2) / (n - 1)``."""
    s = _ctx(E, point, order)
    s.guard()
    n = s.n
    dh = s.b.grad(s.h_jet)[..., 0]
    r_df = s.b.scalar * s.df / (n - 1)
    f_dr = 0.5 * s.f * s.b.grad(s.b.scalar_jet)[..., 0] / (n - 1)
    return Residual(dh - r_df - f_dr, (dh, r_df, f_dr))


def residual_lemma_fC(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``f C_ijk - W_ijkl grad^l f - T_ijk``."""
    s = _ctx(E, point, order)
    s.guard()
    _check_order(s.b.order, 3, "f C = W grad f + T")
    fc = s.f * s.b.cotton_jet[..., 0]
    wdf = np.einsum("ijkl,l->ijk", s.b.weyl_jet[..., 0], s.df_up)
    t = s.t_jet[..., 0]
    return Residual(fc - wdf - t, (fc, wdf, t))


def residual_lemma_bach(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``(n-2) B_ij + div(T/f)_ij - (n-3)/(n-2) C_jki grad^k f / f
    - W_ikjl grad^k f grad^l f / f^2``; B from the Weyl-divergence form."""
    s = _ctx(E, point, order)
    s.guard()
    n = s.n
    _check_order(s.b.order, 4, "Bach lemma")
    bw, _ = s.b.bach_jets()
    nb = (n - 2) * bw[..., 0]
    div_tf = s.b.divergence(s.t_over_f_jet, 1)[..., 0]
    c_term = (n - 3) / (n - 2) * np.einsum("jki,k->ij", s.b.cotton_jet[..., 0], s.df_up) / s.f
    w_term = np.einsum("ikjl,k,l->ij", s.b.weyl_jet[..., 0], s.df_up, s.df_up) / s.f**2
    return Residual(nb + div_tf - c_term - w_term, (nb, div_tf, c_term, w_term))


def _weyl_ricci_df_jet(s: StructurePoint) -> np.ndarray:
    """Jet of ``W_ikjl (R^ik grad^l f + R^il grad^k f) / f`` (free index j)."""
    b = s.b
    w = b.weyl_jet
    ru = s.ric_up_jet
    a = b.einsum("jl,l->j", b.einsum("ikjl,ik->jl", w, ru), s.df_up_jet)
    c = b.einsum("kj,k->j", b.einsum("ikjl,il->kj", w, ru), s.df_up_jet)
    return b.mul(a + c, s.recip_f_jet)


def residual_lemma_second_order(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``C_jki R^ik - (n-2) grad^i grad^k (T_ikj/f) + (n-2) W_ikjl(R^ik grad^l f + R^il grad^k f)/f``."""
    s = _ctx(E, point, order)
    s.guard()
    n = s.n
    _check_order(s.b.order, 5, "second-order lemma")
    cr = np.einsum("jki,ik->j", s.b.cotton_jet[..., 0], s.ric_up_jet[..., 0])
    ddt = (n - 2) * s.b.divergence(s.b.divergence(s.t_over_f_jet, 1), 0)[..., 0]
    wr = (n - 2) * _weyl_ricci_df_jet(s)[..., 0]
    return Residual(cr - ddt + wr, (cr, ddt, wr))


def residual_lemma_third_order(E, point=None, order: int = DEFAULT_ORDER) -> Residual:
    """``|C|^2/2 + R^ik grad^j C_jki - (n-2) grad^j grad^i grad^k (T_ikj/f)
    + (n-2) grad^j [W_ikjl(R^ik grad^l f + R^il grad^k f)/f]``."""
    s = _ctx(E, point, order)
    s.guard()
    n = s.n
    b = s.b
    _check_order(b.order, 6, "third-order lemma")
    c = b.cotton_jet[..., 0]
    gi = s.g_inv
    c_up = np.einsum("ia,jb,kc,abc->ijk", gi, gi, gi, c)
    half_c2 = np.array(0.5 * np.sum(c * c_up))
    div_c = b.divergence(b.cotton_jet, 0)[..., 0]  # (k, i): grad^j C_jki
    r_div_c = np.array(np.einsum("ik,ki->", s.ric_up_jet[..., 0], div_c))
    dddt = np.array(
        (n - 2) * b.divergence(b.divergence(b.divergence(s.t_over_f_jet, 1), 0), 0)[0]
    )
    dw = np.array((n - 2) * b.divergence(_weyl_ricci_df_jet(s), 0)[0])
    return Residual(half_c2 + r_div_c - dddt + dw, (half_c2, r_div_c, dddt, dw))


def expected_h(s: StructurePoint) -> float | None:
    """h prescribed by the structure's case tag, or None when unconstrained."""
    tag = s.structure.case_tag
    n = s.n
    if tag == "static_null_lambda":
        return 0.0
    if tag == "static_nonnull_lambda":
        return s.b.scalar * s.f / (n - 1)
    if tag == "miao_tam":
        return (s.b.scalar * s.f + 1.0) / (n - 1)
    if tag == "perfect_fluid" and s.structure.fluid is not None:
        mu = s.structure.fluid.density.evaluate(s.b.point)
        rho = s.structure.fluid.pressure.evaluate(s.b.point)
        return (mu - rho) * s.f / (n - 1)
    return None


def special_case_residual(E, point=None, order: int = DEFAULT_ORDER) -> tuple[Residual, Residual]:
    """The tagged special case's own equation pair, as (tensor, scalar) residuals."""
    s = _ctx(E, point, order)
    st = s.structure
    tag = st.case_tag
    n = s.n
    f = s.f
    ric = s.b.ricci_jet[..., 0]
    scal = s.b.scalar
    hess = s.hess_jet[..., 0]
    lap = s.laplacian
    g = s.g
    if tag == "cpe":
        if abs(1.0 + f) <= st.eps_f:
            raise NearZeroPotentialError(f"|1 + f| <= {st.eps_f:g} at {s.b.point}")
        traceless = ric - scal / n * g
        a = (1.0 + f) * traceless
        c = scal * f / (n * (n - 1)) * g
        tensor = Residual(a - hess - c, (a, hess, c))
        sc = scal * f / (n - 1)
        return tensor, Residual(np.array(lap + sc), (np.array(lap), np.array(sc)))
    s.guard()
    f_ric = f * ric
    if tag in ("generic",):
        hg = s.h * g
        nh = n * s.h
        return (
            Residual(f_ric - hess - hg, (f_ric, hess, hg)),
            Residual(np.array(f * scal - lap - nh), (np.array(f * scal), np.array(lap), np.array(nh))),
        )
    if tag == "static_null_lambda":
        return Residual(f_ric - hess, (f_ric, hess)), Residual(np.array(lap), (np.array(lap),))
    if tag == "static_nonnull_lambda":
        c = scal * f / (n - 1)
        return (
            Residual(f_ric - hess - c * g, (f_ric, hess, c * g)),
            Residual(np.array(lap + c), (np.array(lap), np.array(c))),
        )
    if tag == "miao_tam":
        c = (scal * f + 1.0) / (n - 1)
        sc = scal * f / (n - 1)
        rhs = -n / (n - 1)
        return (
            Residual(f_ric - hess - c * g, (f_ric, hess, c * g)),
            Residual(np.array(lap + sc - rhs), (np.array(lap), np.array(sc), np.array(rhs))),
        )
    if tag == "perfect_fluid":
        if st.fluid is None:
            raise ValueError("perfect_fluid structures need density and pressure expressions")
        mu = st.fluid.density.evaluate(s.b.point)
        rho = st.fluid.pressure.evaluate(s.b.point)
        c = (mu - rho) * f / (n - 1)
        src = ((n - 2) * mu + n * rho) / (n - 1)
        if st.pfe_trace_times_f:
            src *= f
        return (
            Residual(f_ric - hess - c * g, (f_ric, hess, c * g)),
            Residual(np.array(lap + src), (np.array(lap), np.array(src))),
        )
    raise ValueError(f"unhandled case tag {tag!r}")


@dataclass(frozen=True)
class FluidSolution:
    density: float
    pressure: float
    backsubstitution: float

    @property
    def energy_condition(self) -> bool:
        return self.density >= abs(self.pressure)


def perfect_fluid_coefficients(E, point=None, order: int = DEFAULT_ORDER) -> FluidSolution:
    """Solve ``h = (mu - rho) f / (n-1)`` together with the fluid trace equation
    ``Lap f + ((n-2) mu + n rho) / (n-1) = 0`` for (mu, rho)."""
    s = _ctx(E, point, order)
    n = s.n
    f = s.f
    if f == 0.0:
        raise NumericError("perfect-fluid system is singular at f = 0")
    k = f if s.structure.pfe_trace_times_f else 1.0
    a = np.array([[f / (n - 1), -f / (n - 1)], [k * (n - 2) / (n - 1), k * n / (n - 1)]])
    rhs = np.array([s.h, -s.laplacian])
    if abs(np.linalg.det(a)) < 1e-300:
        raise NumericError("perfect-fluid system is singular")
    mu, rho = np.linalg.solve(a, rhs)
    back = float(np.max(np.abs(a @ np.array([mu, rho]) - rhs)))
    return FluidSolution(float(mu), float(rho), back)
