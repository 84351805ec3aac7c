"""Curvature stack computed exactly from a metric chart via jets.

Conventions (all stored tensors fully covariant):

* ``Gamma^l_ij`` -- Levi-Civita Christoffel symbols, axes ``[l, i, j]``.
* ``R_ijkl`` is fixed by the Ricci identity
  ``grad_i grad_j grad_k u - grad_j grad_i grad_k u = R_ijkl grad^l u``,
  which makes ``R_ijkl = g_ik g_jl - g_il g_jk`` on the unit sphere.
* ``Ric_ik = g^{jl} R_ijkl``, ``R = g^{ik} Ric_ik``.
* A covariant derivative adds its slot first: ``(nabla T)[i, ...] = nabla_i T_...``.

Each :class:`CurvatureBundle` expands the metric into order-``K`` jets at one
point; every derivative consumes one order, and an
:class:`~etlab.errors.OrderExhaustedError` is raised instead of truncating.
"""

from __future__ import annotations

import functools
import string
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    NumericError,
    OrderExhaustedError,
    ShapeMismatchError,
    UnsupportedDimensionError,
)
from .expressions import Expr, as_expr, lift_array, parse_expression
from .jets import DEFAULT_ORDER, JetSpace, jet_space
from .tensors import COV, ComponentTensor, MetricValue

_IDX = "abcdefghjkmnopqrstuvwxy"  # tensor axis letters; 'i' and 'l' reserved


@dataclass(frozen=True)
class MetricChart:
    """Metric components as expressions over named coordinates.

    ``domain`` is the open coordinate box sample points are drawn from.
    """

    coord_names: tuple[str, ...]
    components: tuple[tuple[Expr, ...], ...]
    domain: tuple[tuple[float, float], ...]
    name: str = "chart"

    def __post_init__(self):
        names = tuple(self.coord_names)
        comps = tuple(tuple(as_expr(c) for c in row) for row in self.components)
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        object.__setattr__(self, "coord_names", names)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "domain", dom)
        n = len(names)
        if n < 2:
            raise UnsupportedDimensionError("charts need at least two coordinates")
        if len(set(names)) != n:
            raise ValueError("coordinate names must be distinct")
        if len(comps) != n or any(len(row) != n for row in comps):
            raise ShapeMismatchError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if comps[i][j] != comps[j][i]:
                    raise ValueError(f"metric component ({i},{j}) differs from ({j},{i})")
        if len(dom) != n or any(not lo < hi for lo, hi in dom):
            raise ValueError("domain must give one open interval (lo < hi) per coordinate")

    @property
    def dim(self) -> int:
        return len(self.coord_names)

    @classmethod
    def from_strings(cls, coord_names, metric, domain, name="chart") -> "MetricChart":
        """Build from a matrix of expression strings (or a 1-D diagonal)."""
        names = tuple(coord_names)
        n = len(names)
        if metric and all(not isinstance(row, (list, tuple)) for row in metric):
            if len(metric) != n:
                raise ShapeMismatchError(f"diagonal metric needs {n} entries")
            zero = as_expr(0.0)
            diag = [parse_expression(s, names) for s in metric]
            comps = [[diag[i] if i == j else zero for j in range(n)] for i in range(n)]
        else:
            parsed = [[parse_expression(s, names) for s in row] for row in metric]
            if len(parsed) != n or any(len(r) != n for r in parsed):
                raise ShapeMismatchError(f"metric must be {n}x{n}")
            comps = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    comps[i][j] = parsed[min(i, j)][max(i, j)]
                    if i > j and parsed[i][j] != parsed[j][i]:
                        raise ValueError(f"metric entries ({i},{j}) and ({j},{i}) differ")
        return cls(names, comps, domain, name)

    def metric_jets(self, point: Sequence[float], order: int, space: JetSpace | None = None) -> np.ndarray:
        n = self.dim
        space = space or jet_space(n, order)
        out = np.zeros((n, n, space.size(order)))
        memo: dict = {}
        for i in range(n):
            for j in range(i, n):
                arr = _lift_shared(self.components[i][j], space, point, order, memo)
                out[i, j] = arr
                out[j, i] = arr
        return out

    def metric_value(self, point: Sequence[float]) -> MetricValue:
        g = self.metric_jets(point, 0)[..., 0]
        return MetricValue.from_matrix(g)

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo < x < hi for x, (lo, hi) in zip(point, self.domain))

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.array([d[0] for d in self.domain])
        hi = np.array([d[1] for d in self.domain])
        return lo + (hi - lo) * rng.random((count, self.dim))


def _lift_shared(expr, space, point, order, memo):
    from .expressions import _eval

    return _eval(expr, space, np.asarray(point, dtype=float), order, memo)


def _check_order(order: int, required: int, what: str):
    if order < required:
        raise OrderExhaustedError(
            f"{what} needs jet order >= {required}, configured order is {order}",
            required=required,
        )


class CurvatureBundle:
    """Jet-backed curvature of a chart at one point.

    Jet arrays (trailing coefficient axis) are exposed through the ``*_jet``
    cached properties; the plain properties return point values as
    :class:`ComponentTensor` objects.
    """

    def __init__(self, chart: MetricChart, point: Sequence[float], order: int = DEFAULT_ORDER):
        _check_order(order, 2, "curvature")
        self.chart = chart
        self.point = tuple(float(x) for x in point)
        if len(self.point) != chart.dim:
            raise ShapeMismatchError(f"point has {len(self.point)} coordinates, chart has {chart.dim}")
        self.order = order
        self.dim = chart.dim
        self.space = jet_space(chart.dim, order)
        self.warnings: list[str] = []
        self.g_jet = chart.metric_jets(self.point, order, self.space)
        g0 = self.g_jet[..., 0]
        try:
            np.linalg.cholesky(g0)
        except np.linalg.LinAlgError:
            raise NumericError(
                f"metric of {chart.name} is not positive-definite at {self.point}"
            ) from None
        self.ginv_jet = self.space.matinv(self.g_jet)

    # -- jet helpers ---------------------------------------------------------

    def lift(self, expr: Expr) -> np.ndarray:
        return lift_array(expr, self.point, self.order, self.space)

    def mul(self, a, b):
        return self.space.mul(a, b)

    def einsum(self, subscripts, a, b):
        return self.space.einsum(subscripts, a, b)

    def trunc(self, arr, order):
        return self.space.truncate(arr, order)

    def order_of(self, arr) -> int:
        return self.space.order_of(arr)

    def covd(self, t: np.ndarray) -> np.ndarray:
        """Covariant derivative of a fully covariant jet tensor (new slot first)."""
        m = self.order_of(t)
        if m == 0:
            raise OrderExhaustedError(
                "covariant derivative of an order-0 field; increase the jet order",
                required=self.order + 1,
            )
        rank = t.ndim - 1
        out = self.space.grad(t)
        if rank == 0:
            return out
        gam = self.trunc(self.gamma_jet, m - 1)
        low = self.trunc(t, m - 1)
        idx = _IDX[:rank]
        for s in range(rank):
            sub = idx[:s] + "p" + idx[s + 1:]
            out = out - self.einsum(f"pi{idx[s]},{sub}->i{idx}", gam, low)
        return out

    def raise_slots(self, t: np.ndarray, slots: Sequence[int]) -> np.ndarray:
        idx = _IDX[: t.ndim - 1]
        for s in slots:
            out = idx[:s] + "z" + idx[s + 1:]
            t = self.einsum(f"z{idx[s]},{idx}->{out}", self.ginv_jet, t)
        return t

    def trace(self, t: np.ndarray, a: int, b: int) -> np.ndarray:
        """g^{ab}-contraction of two covariant slots of a jet tensor."""
        idx = list(_IDX[: t.ndim - 1])
        ia, ib = idx[a], idx[b]
        keep = "".join(c for k, c in enumerate(idx) if k not in (a, b))
        return self.einsum(f"{ia}{ib},{''.join(idx)}->{keep}", self.ginv_jet, t)

    def divergence(self, t: np.ndarray, slot: int) -> np.ndarray:
        """``g^{ab} nabla_a T_{... b ...}`` with ``b`` at position ``slot`` of T."""
        return self.trace(self.covd(t), 0, slot + 1)

    def grad(self, f: np.ndarray) -> np.ndarray:
        return self.space.grad(f)

    def hessian(self, f: np.ndarray) -> np.ndarray:
        return self.covd(self.space.grad(f))

    # -- curvature jets ------------------------------------------------------

    @functools.cached_property
    def gamma_jet(self) -> np.ndarray:
        dg = self.space.grad(self.g_jet)  # dg[a, b, c] = d_a g_bc
        low = 0.5 * (
            np.einsum("ijkz->kijz", dg) + np.einsum("jikz->kijz", dg) - dg
        )  # Gamma_{kij} = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
        return self.einsum("lk,kij->lij", self.ginv_jet, low)

    @functools.cached_property
    def riemann_jet(self) -> np.ndarray:
        gam = self.gamma_jet
        dgam = self.space.grad(gam)  # dgam[a, m, b, c] = d_a Gamma^m_bc
        gg = self.trunc(self.einsum("mip,pjk->ijkm", gam, gam), self.order_of(dgam))
        std = (
            np.einsum("imjkz->ijkmz", dgam)
            - np.einsum("jmikz->ijkmz", dgam)
            + gg
            - np.einsum("jikmz->ijkmz", gg)
        )  # R(d_i, d_j) d_k = std[i, j, k, m] d_m
        return -self.einsum("lm,ijkm->ijkl", self.g_jet, std)

    @functools.cached_property
    def ricci_jet(self) -> np.ndarray:
        return self.einsum("jl,ijkl->ik", self.ginv_jet, self.riemann_jet)

    @functools.cached_property
    def scalar_jet(self) -> np.ndarray:
        return self.einsum("ik,ik->", self.ginv_jet, self.ricci_jet)

    @functools.cached_property
    def weyl_jet(self) -> np.ndarray:
        n = self.dim
        rm = self.riemann_jet
        if n == 3:
            self.warnings.append("Weyl tensor vanishes identically in dimension 3")
            warnings.warn("Weyl tensor is identically zero in dimension 3", stacklevel=2)
            return np.zeros_like(rm)
        g = self.g_jet
        ric = self.ricci_jet
        ric_g = self.einsum("ik,jl->ijkl", ric, g)
        kul = (
            ric_g
            - np.einsum("ijlkz->ijklz", ric_g)
            + np.einsum("jilkz->ijklz", ric_g)
            - np.einsum("jiklz->ijklz", ric_g)
        )  # R_ik g_jl - R_il g_jk + R_jl g_ik - R_jk g_il
        gg = self.einsum("ik,jl->ijkl", g, g)
        gg = gg - np.einsum("ijlkz->ijklz", gg)
        scal = self.scalar_jet
        return rm - kul / (n - 2) + self.mul(scal, gg) / ((n - 1) * (n - 2))

    @functools.cached_property
    def cotton_jet(self) -> np.ndarray:
        n = self.dim
        dric = self.covd(self.ricci_jet)
        dscal = self.space.grad(self.scalar_jet)
        g = self.g_jet
        dsg = self.einsum("i,jk->ijk", dscal, g)
        return (
            dric
            - np.einsum("jikz->ijkz", dric)
            - (dsg - np.einsum("jikz->ijkz", dsg)) / (2 * (n - 1))
        )

    @functools.cached_property
    def ricci_weyl_jet(self) -> np.ndarray:
        """``R^{kl} W_ikjl`` as a jet (axes i, j)."""
        ric_up = self.raise_slots(self.ricci_jet, (0, 1))
        return self.einsum("kl,ikjl->ij", ric_up, self.weyl_jet)

    def div_weyl_jet(self, k: int) -> np.ndarray:
        """Successive Weyl divergences ``grad^k grad^i grad^j grad^l W_jkil``.

        k=1: ``D_jki = grad^l W_jkil``; k=2: ``grad^j D_jki``; k=3: ``grad^i`` of
        that; k=4: the final ``grad^k`` contraction (a scalar).
        """
        if not 1 <= k <= 4:
            raise ValueError("k must be in 1..4")
        if self.dim == 3:
            raise UnsupportedDimensionError("Weyl divergences are not defined here for n = 3")
        _check_order(self.order, 2 + k, f"div^{k} W")
        return self._div_chain[k - 1]

    @functools.cached_property
    def _div_chain(self):
        d1 = self.divergence(self.weyl_jet, 3)
        chain = [d1]
        if self.order >= 4:
            chain.append(self.divergence(chain[-1], 0))
        if self.order >= 5:
            chain.append(self.divergence(chain[-1], 1))
        if self.order >= 6:
            chain.append(self.divergence(chain[-1], 0))
        return chain

    def bach_jets(self) -> tuple[np.ndarray, np.ndarray]:
        """Bach tensor from the Weyl-divergence form and from the Cotton form."""
        n = self.dim
        if n < 4:
            raise UnsupportedDimensionError("the Bach tensor needs n >= 4 (factor 1/(n-3))")
        _check_order(self.order, 4, "Bach tensor")
        ddw = self.divergence(self.divergence(self.weyl_jet, 3), 1)
        rw = self.ricci_weyl_jet
        from_weyl = ddw / (n - 3) + self.trunc(rw, self.order_of(ddw)) / (n - 2)
        dc = self.divergence(self.cotton_jet, 1)
        from_cotton = -dc / (n - 2) + self.trunc(rw, self.order_of(dc)) / (n - 2)
        return from_weyl, from_cotton

    # -- point values --------------------------------------------------------

    @property
    def metric(self) -> MetricValue:
        return MetricValue.from_matrix(self.g_jet[..., 0])

    @property
    def christoffel(self) -> np.ndarray:
        return self.gamma_jet[..., 0]

    @property
    def riemann(self) -> ComponentTensor:
        return ComponentTensor.covariant(self.riemann_jet[..., 0])

    @property
    def ricci(self) -> ComponentTensor:
        return ComponentTensor.covariant(self.ricci_jet[..., 0])

    @property
    def scalar(self) -> float:
        return float(self.scalar_jet[0])

    def value(self, jet: np.ndarray) -> ComponentTensor:
        return ComponentTensor.covariant(jet[..., 0])


def curvature(chart: MetricChart, point: Sequence[float], order: int = DEFAULT_ORDER) -> CurvatureBundle:
    return CurvatureBundle(chart, point, order)


def _bundle(chart_or_bundle, point, order) -> CurvatureBundle:
    if isinstance(chart_or_bundle, CurvatureBundle):
        return chart_or_bundle
    if point is None:
        raise ValueError("a point is required when passing a chart")
    return CurvatureBundle(chart_or_bundle, point, order)


def covariant_derivative(t: np.ndarray, bundle: CurvatureBundle) -> np.ndarray:
    """Covariant derivative of a fully covariant jet tensor; new slot first."""
    return bundle.covd(t)


def weyl(bundle: CurvatureBundle) -> ComponentTensor:
    return bundle.value(bundle.weyl_jet)


def cotton(chart, point=None, order: int = DEFAULT_ORDER) -> ComponentTensor:
    b = _bundle(chart, point, order)
    _check_order(b.order, 3, "Cotton tensor")
    return b.value(b.cotton_jet)


@dataclass(frozen=True)
class BachResult:
    tensor: ComponentTensor
    from_cotton: ComponentTensor

    @property
    def disagreement(self) -> float:
        return float(np.max(np.abs(self.tensor.components - self.from_cotton.components)))


def bach(chart, point=None, order: int = DEFAULT_ORDER) -> BachResult:
    b = _bundle(chart, point, order)
    bw, bc = b.bach_jets()
    return BachResult(b.value(bw), b.value(bc))


def div_weyl(chart, point=None, k: int = 1, order: int = DEFAULT_ORDER):
    """k-th Weyl divergence; a ComponentTensor of rank 4-k, or a float for k=4."""
    b = _bundle(chart, point, order)
    d = b.div_weyl_jet(k)
    return float(d[0]) if k == 4 else b.value(d)


def radial_weyl(chart, f, point=None, order: int = DEFAULT_ORDER) -> ComponentTensor:
    """``W_ijkl grad^l f``."""
    b = _bundle(chart, point, order)
    return ComponentTensor.covariant(radial_weyl_values(b, b.lift(as_expr(f))))


def radial_weyl_values(b: CurvatureBundle, f_jet: np.ndarray) -> np.ndarray:
    w = b.weyl_jet[..., 0]
    df_up = b.ginv_jet[..., 0] @ b.grad(f_jet)[..., 0]
    return np.einsum("ijkl,l->ijk", w, df_up)


def t_tensor_jet(b: CurvatureBundle, f_jet: np.ndarray) -> np.ndarray:
    """Jet of ``T_ijk`` built from Ric, R and df (see :func:`etlab.tensors.t_formula`)."""
    n = b.dim
    g = b.g_jet
    ric = b.ricci_jet
    df = b.grad(f_jet)
    dfu = b.einsum("lm,m->l", b.ginv_jet, df)
    rv = b.einsum("jl,l->j", ric, dfu)
    a = b.einsum("j,ik->ijk", rv, g)
    t = (a - np.einsum("jikz->ijkz", a)) / (n - 2)
    c = b.einsum("i,jk->ijk", df, g)
    t = t + b.mul(b.scalar_jet, c - np.einsum("jikz->ijkz", c)) / (n - 2)
    e = b.einsum("j,ik->ijk", df, ric)
    t = t + (n - 1) / (n - 2) * (e - np.einsum("jikz->ijkz", e))
    return t


def T_tensor(chart, f, point=None, order: int = DEFAULT_ORDER) -> ComponentTensor:
    b = _bundle(chart, point, order)
    return b.value(t_tensor_jet(b, b.lift(as_expr(f))))


def ricci_identity_residual(b: CurvatureBundle, u: Expr) -> tuple[np.ndarray, list[np.ndarray]]:
    """``grad_i grad_j grad_k u - grad_j grad_i grad_k u - R_ijkl grad^l u``.

    Returns the residual and the constituent terms (for relative scaling).
    """
    _check_order(b.order, 3, "Ricci identity")
    uj = b.lift(as_expr(u))
    d3 = b.covd(b.hessian(uj))[..., 0]
    swapped = np.einsum("jik->ijk", d3)
    du_up = b.ginv_jet[..., 0] @ b.grad(uj)[..., 0]
    rterm = np.einsum("ijkl,l->ijk", b.riemann_jet[..., 0], du_up)
    return d3 - swapped - rterm, [d3, swapped, rterm]


def finite_difference_christoffel(chart: MetricChart, point: Sequence[float], step: float = 1e-5) -> np.ndarray:
    """Diagnostic only: Christoffel symbols from central differences of g."""
    n = chart.dim
    p = np.asarray(point, dtype=float)
    dg = np.zeros((n, n, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = step
        dg[a] = (chart.metric_value(p + e).g - chart.metric_value(p - e).g) / (2 * step)
    low = 0.5 * (np.einsum("ijk->kij", dg) + np.einsum("jik->kij", dg) - dg)
    return np.einsum("lk,kij->lij", chart.metric_value(p).g_inv, low)
