"""Pointwise dense tensor algebra on component arrays.

Everything here works on plain real components at a single point.  The
curvature stack in :mod:`etlab.geometry` keeps its own jet-valued arrays and
converts to :class:`ComponentTensor` at the API boundary.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EtlabError, NumericError, ShapeMismatchError

COV = "cov"
CON = "con"


@dataclass(frozen=True)
class ComponentTensor:
    """Dense components ``T[i1, ..., ik]`` plus the variance of every slot."""

    components: np.ndarray
    variances: tuple[str, ...]

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variances", tuple(self.variances))
        if comps.ndim != len(self.variances):
            raise ShapeMismatchError(
                f"rank {comps.ndim} does not match {len(self.variances)} variances"
            )
        if comps.ndim and len(set(comps.shape)) != 1:
            raise ShapeMismatchError(f"all axes must have the same extent, got {comps.shape}")
        bad = set(self.variances) - {COV, CON}
        if bad:
            raise ValueError(f"unknown variance labels {bad}")

    @classmethod
    def covariant(cls, components) -> "ComponentTensor":
        comps = np.asarray(components, dtype=float)
        return cls(comps, (COV,) * comps.ndim)

    @classmethod
    def contravariant(cls, components) -> "ComponentTensor":
        comps = np.asarray(components, dtype=float)
        return cls(comps, (CON,) * comps.ndim)

    @property
    def rank(self) -> int:
        return self.components.ndim

    @property
    def dim(self) -> int:
        return self.components.shape[0] if self.rank else 0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0

    def __sub__(self, other: "ComponentTensor") -> "ComponentTensor":
        if other.variances != self.variances:
            raise ShapeMismatchError("variances differ")
        return ComponentTensor(self.components - other.components, self.variances)

    def __add__(self, other: "ComponentTensor") -> "ComponentTensor":
        if other.variances != self.variances:
            raise ShapeMismatchError("variances differ")
        return ComponentTensor(self.components + other.components, self.variances)


@dataclass(frozen=True)
class MetricValue:
    """Metric, inverse metric and volume factor at one point."""

    g: np.ndarray
    g_inv: np.ndarray
    sqrt_det: float

    @classmethod
    def from_matrix(cls, g) -> "MetricValue":
        g = np.asarray(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeMismatchError("metric must be a square matrix")
        scale = 1.0 + np.max(np.abs(g))
        if np.max(np.abs(g - g.T)) > 1e-12 * scale:
            raise NumericError("metric is not symmetric")
        try:
            chol = np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise NumericError("metric is not positive-definite") from None
        g_inv = np.linalg.inv(g)
        return cls(g, g_inv, float(np.prod(np.diag(chol))))

    @classmethod
    def euclidean(cls, n: int) -> "MetricValue":
        return cls(np.eye(n), np.eye(n), 1.0)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def identity_residual(self) -> float:
        return float(np.max(np.abs(self.g @ self.g_inv - np.eye(self.dim))))


def _letters(k):
    return string.ascii_lowercase[:k]


def contract(
    t: ComponentTensor, slot_a: int, slot_b: int, metric: MetricValue | None = None
) -> ComponentTensor:
    """Contract two slots; like-variance slots are paired through ``metric``."""
    r = t.rank
    if slot_a == slot_b:
        raise ValueError("contraction slots must be distinct")
    for s in (slot_a, slot_b):
        if not 0 <= s < r:
            raise IndexError(f"slot {s} out of range for rank {r}")
    va, vb = t.variances[slot_a], t.variances[slot_b]
    idx = list(_letters(r))
    keep = [c for k, c in enumerate(idx) if k not in (slot_a, slot_b)]
    out_var = tuple(v for k, v in enumerate(t.variances) if k not in (slot_a, slot_b))
    if va != vb:
        idx[slot_b] = idx[slot_a]
        comps = np.einsum(f"{''.join(idx)}->{''.join(keep)}", t.components)
        return ComponentTensor(comps, out_var)
    if metric is None:
        raise EtlabError(
            f"slots {slot_a} and {slot_b} are both {va}; a metric is required to contract them"
        )
    pairing = metric.g_inv if va == COV else metric.g
    a, b = idx[slot_a], idx[slot_b]
    comps = np.einsum(f"{a}{b},{''.join(idx)}->{''.join(keep)}", pairing, t.components)
    return ComponentTensor(comps, out_var)


def _move_index(t: ComponentTensor, slot: int, matrix: np.ndarray, new_var: str) -> ComponentTensor:
    idx = _letters(t.rank)
    out = idx[:slot] + "z" + idx[slot + 1:]
    comps = np.einsum(f"z{idx[slot]},{idx}->{out}", matrix, t.components)
    var = list(t.variances)
    var[slot] = new_var
    return ComponentTensor(comps, tuple(var))


def raise_index(t: ComponentTensor, slot: int, metric: MetricValue) -> ComponentTensor:
    if t.variances[slot] != COV:
        raise EtlabError(f"slot {slot} is already contravariant")
    return _move_index(t, slot, metric.g_inv, CON)


def lower_index(t: ComponentTensor, slot: int, metric: MetricValue) -> ComponentTensor:
    if t.variances[slot] != CON:
        raise EtlabError(f"slot {slot} is already covariant")
    return _move_index(t, slot, metric.g, COV)


def norm_squared(t: ComponentTensor, metric: MetricValue) -> float:
    """``|T|^2`` with every slot paired through the metric."""
    up = t
    for s, v in enumerate(t.variances):
        if v == COV:
            up = raise_index(up, s, metric)
    down = t
    for s, v in enumerate(t.variances):
        if v == CON:
            down = lower_index(down, s, metric)
    return float(np.sum(up.components * down.components))


def relative_residual(residual, *terms) -> float:
    """max|residual| / (1 + max|term|) over the constituent terms."""
    res = np.max(np.abs(np.asarray(residual, dtype=float))) if np.size(residual) else 0.0
    scale = 0.0
    for term in terms:
        arr = np.asarray(term, dtype=float)
        if arr.size:
            scale = max(scale, float(np.max(np.abs(arr))))
    return float(res) / (1.0 + scale)


@dataclass(frozen=True)
class CottonSymmetryReport:
    antisymmetry: float
    cyclic: float
    trace: float

    def max(self) -> float:
        return max(self.antisymmetry, self.cyclic, self.trace)


def check_cotton_symmetries(c: ComponentTensor | np.ndarray, metric: MetricValue) -> CottonSymmetryReport:
    """Max residuals of ``C_ijk = -C_jik``, the cyclic sum and every g-trace."""
    comps = c.components if isinstance(c, ComponentTensor) else np.asarray(c, dtype=float)
    if isinstance(c, ComponentTensor) and c.variances != (COV, COV, COV):
        raise EtlabError("check_cotton_symmetries expects a fully covariant rank-3 tensor")
    if comps.ndim != 3:
        raise ShapeMismatchError("expected a rank-3 tensor")
    anti = comps + comps.transpose(1, 0, 2)
    cyc = comps + np.einsum("ijk->jki", comps) + np.einsum("ijk->kij", comps)
    gi = metric.g_inv
    traces = [
        np.einsum("ij,ijk->k", gi, comps),
        np.einsum("ik,ijk->j", gi, comps),
        np.einsum("jk,ijk->i", gi, comps),
    ]
    return CottonSymmetryReport(
        antisymmetry=float(np.max(np.abs(anti))),
        cyclic=float(np.max(np.abs(cyc))),
        trace=float(max(np.max(np.abs(t)) for t in traces)),
    )


def t_formula(ric: np.ndarray, grad_f: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    """The rank-3 tensor ``T_ijk`` built from a Ricci-like ``ric`` and ``df``.

    ``R`` is taken as the g-trace of ``ric``.  With ``v^l = g^{lm} df_m`` and
    ``rv_j = ric_jl v^l``::

        T_ijk = (rv_j g_ik - rv_i g_jk) / (n-2)
              + R (df_i g_jk - df_j g_ik) / (n-2)
              + (n-1)/(n-2) (df_j ric_ik - df_i ric_jk)
    """
    n = g.shape[0]
    scal = float(np.einsum("ij,ij->", g_inv, ric))
    rv = ric @ (g_inv @ grad_f)
    t = (np.einsum("j,ik->ijk", rv, g) - np.einsum("i,jk->ijk", rv, g)) / (n - 2)
    t += scal * (np.einsum("i,jk->ijk", grad_f, g) - np.einsum("j,ik->ijk", grad_f, g)) / (n - 2)
    t += (n - 1) / (n - 2) * (np.einsum("j,ik->ijk", grad_f, ric) - np.einsum("i,jk->ijk", grad_f, ric))
    return t


def random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    return a @ a.T + n * np.eye(n)


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    return 0.5 * (a + a.T)


def _hessian_cotton_loop(h_up, c):
    n = c.shape[0]
    out = np.zeros(n)
    for i in range(n):
        s = 0.0
        for j in range(n):
            for k in range(n):
                s += h_up[k, j] * c[j, k, i]
        out[i] = s
    return out


def _contraction_identity_loop(s_up, v_up, c, c_up, f, n):
    # S^{ji} v^k C_kji  and  ((n-2) f / (2(n-1))) C_kji C^kji
    lhs = 0.0
    norm = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs += s_up[j, i] * v_up[k] * c[k, j, i]
                norm += c[k, j, i] * c_up[k, j, i]
    return lhs, (n - 2) * f / (2 * (n - 1)) * norm


@dataclass
class AlgebraTrial:
    index: int
    dim: int
    hessian_cancellation: float
    contraction_identity: float


@dataclass
class AlgebraReport:
    seed: int
    trials: list[AlgebraTrial] = field(default_factory=list)
    hessian_tol: float = 1e-10
    contraction_tol: float = 1e-9

    @property
    def max_hessian(self) -> float:
        return max((t.hessian_cancellation for t in self.trials), default=0.0)

    @property
    def max_contraction(self) -> float:
        return max((t.contraction_identity for t in self.trials), default=0.0)

    @property
    def failures(self) -> list[AlgebraTrial]:
        return [
            t for t in self.trials
            if t.hessian_cancellation > self.hessian_tol or t.contraction_identity > self.contraction_tol
        ]

    @property
    def passed(self) -> bool:
        return not self.failures


class AlgebraIdentityFailure(EtlabError):
    pass


def algebra_trial(
    rng: np.random.Generator,
    n: int,
    *,
    zero_gradient: bool = False,
    cotton: np.ndarray | None = None,
    hessian_skew: float = 0.0,
) -> tuple[float, float]:
    """One draw of the pointwise identities; returns both relative residuals.

    By default ``C = T/f`` with ``T`` from :func:`t_formula`.  Passing
    ``cotton`` substitutes an arbitrary rank-3 tensor, and ``hessian_skew``
    adds that multiple of a random antisymmetric matrix to the Hessian
    (negative controls).
    """
    g = random_spd(rng, n)
    g_inv = np.linalg.inv(g)
    s = random_symmetric(rng, n)
    v = np.zeros(n) if zero_gradient else rng.uniform(-1.0, 1.0, size=n)
    f = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    h_up = random_symmetric(rng, n)
    if hessian_skew:
        a = rng.uniform(-1.0, 1.0, size=(n, n))
        h_up = h_up + hessian_skew * (a - a.T)
    c = t_formula(s, v, g, g_inv) / f if cotton is None else cotton

    hc = _hessian_cotton_loop(h_up, c)
    hess_terms = np.abs(np.einsum("kj,jki->jki", h_up, c))
    hess_rel = relative_residual(hc, hess_terms)

    s_up = g_inv @ s @ g_inv
    v_up = g_inv @ v
    c_up = np.einsum("ia,jb,kc,abc->ijk", g_inv, g_inv, g_inv, c)
    lhs, rhs = _contraction_identity_loop(s_up, v_up, c, c_up, f, n)
    contr_rel = relative_residual(lhs + rhs, lhs, rhs)
    return hess_rel, contr_rel


def random_algebra_identity_suite(
    seed: int,
    trials: int,
    dims: Sequence[int] = (4, 5, 6),
    *,
    hessian_tol: float = 1e-10,
    contraction_tol: float = 1e-9,
    raise_on_failure: bool = False,
) -> AlgebraReport:
    """Random-input check of the Hessian/Cotton cancellation and the
    ``Ric(., .) df`` / ``|C|^2`` contraction identity.

    Each trial gets its own child of ``SeedSequence(seed)``, so results do not
    depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    report = AlgebraReport(seed=seed, hessian_tol=hessian_tol, contraction_tol=contraction_tol)
    children = np.random.SeedSequence(seed).spawn(trials)
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        n = int(dims[int(rng.integers(len(dims)))])
        hess, contr = algebra_trial(rng, n)
        report.trials.append(AlgebraTrial(k, n, hess, contr))
    if raise_on_failure and not report.passed:
        bad = report.failures[0]
        raise AlgebraIdentityFailure(
            f"seed {seed}, trial {bad.index}: hessian {bad.hessian_cancellation:.3e}, "
            f"contraction {bad.contraction_identity:.3e}"
        )
    return report
