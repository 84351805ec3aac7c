"""Truncated multivariate Taylor arithmetic.

A jet of order ``K`` in ``n`` variables stores the Taylor coefficients
``d^a u(p) / a!`` for every multi-index ``a`` with ``|a| <= K``.  Coefficients
are laid out densely in graded order (all degree-0 terms, then degree 1, ...),
so the coefficients of the order-``m`` truncation are simply the first
``JetSpace.size(m)`` entries.  Every array routine in this module works on a
trailing coefficient axis, which lets whole tensors of jets be pushed through
products and contractions in one numpy call.

Two layers live here:

* :class:`JetSpace` -- cached index tables plus the array kernels (product,
  contraction, partial derivative, elementary-function composition, matrix
  inverse) used by the curvature stack;
* :class:`Jet` -- an immutable scalar jet with operator overloading, which is
  the user-facing value type.
"""

from __future__ import annotations

import functools
import math
import string
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, OrderExhaustedError, ShapeMismatchError

DEFAULT_ORDER = 6


def _monomials(num_vars: int, degree: int):
    """Exponent tuples of total ``degree`` in reverse-lex order."""
    if num_vars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(num_vars - 1, degree - first):
            yield (first,) + rest


class JetSpace:
    """Index tables and kernels for jets in ``num_vars`` variables up to ``order``.

    Arrays handled by the kernels may carry any order ``m <= order``; the
    order is recovered from the length of the trailing axis.
    """

    def __init__(self, num_vars: int, order: int):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        if order < 0:
            raise ValueError("order must be non-negative")
        self.num_vars = num_vars
        self.order = order

        monos = [m for d in range(order + 1) for m in _monomials(num_vars, d)]
        self.monomials: tuple[tuple[int, ...], ...] = tuple(monos)
        self.index = {m: i for i, m in enumerate(monos)}
        self.degrees = np.array([sum(m) for m in monos], dtype=np.int64)
        self.factorials = np.array(
            [math.prod(math.factorial(k) for k in m) for m in monos], dtype=float
        )
        self._sizes = [math.comb(num_vars + m, m) for m in range(order + 1)]
        self._order_of_size = {s: m for m, s in enumerate(self._sizes)}

        # product pairs (a, b) -> a + b, grouped by the target coefficient
        triples = []
        for ia, a in enumerate(monos):
            room = order - self.degrees[ia]
            for ib in range(self._sizes[room]):
                b = monos[ib]
                c = tuple(x + y for x, y in zip(a, b))
                triples.append((self.index[c], ia, ib))
        triples.sort()
        tri = np.array(triples, dtype=np.int64)
        self._pair_c = tri[:, 0]
        self._pair_a = tri[:, 1]
        self._pair_b = tri[:, 2]
        self._starts = np.searchsorted(self._pair_c, np.arange(len(monos)))
        self._npairs = [int(np.searchsorted(self._pair_c, s)) for s in self._sizes]

        # partial derivative tables: coefficient a of d_i u is (a_i + 1) u[a + e_i]
        self._deriv_idx = []
        self._deriv_fac = []
        n_low = self._sizes[order - 1] if order > 0 else 0
        for i in range(num_vars):
            idx = np.empty(n_low, dtype=np.int64)
            fac = np.empty(n_low)
            for k in range(n_low):
                m = list(monos[k])
                fac[k] = m[i] + 1
                m[i] += 1
                idx[k] = self.index[tuple(m)]
            self._deriv_idx.append(idx)
            self._deriv_fac.append(fac)

    def __repr__(self):
        return f"JetSpace(num_vars={self.num_vars}, order={self.order})"

    # -- bookkeeping -------------------------------------------------------

    def size(self, order: int | None = None) -> int:
        return self._sizes[self.order if order is None else order]

    def order_of(self, arr: np.ndarray) -> int:
        try:
            return self._order_of_size[arr.shape[-1]]
        except KeyError:
            raise ShapeMismatchError(
                f"trailing axis {arr.shape[-1]} is not a jet size for {self!r}"
            ) from None

    def truncate(self, arr: np.ndarray, order: int) -> np.ndarray:
        have = self.order_of(arr)
        if order > have:
            raise OrderExhaustedError(
                f"cannot raise jet order from {have} to {order}", required=order
            )
        return arr[..., : self._sizes[order]]

    def constant(self, value, order: int | None = None) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        out = np.zeros(value.shape + (self.size(order),))
        out[..., 0] = value
        return out

    def variable(self, i: int, value: float, order: int | None = None) -> np.ndarray:
        out = self.constant(value, order)
        if out.shape[-1] > 1:
            e = [0] * self.num_vars
            e[i] = 1
            out[self.index[tuple(e)]] = 1.0
        return out

    def values(self, arr: np.ndarray) -> np.ndarray:
        return arr[..., 0]

    # -- kernels -----------------------------------------------------------

    def _common(self, a, b):
        m = min(self.order_of(a), self.order_of(b))
        return m, a[..., : self._sizes[m]], b[..., : self._sizes[m]]

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Truncated product, broadcasting over the leading axes."""
        m, a, b = self._common(a, b)
        if m == 0:
            return a * b
        p = self._npairs[m]
        x = a[..., self._pair_a[:p]] * b[..., self._pair_b[:p]]
        return np.add.reduceat(x, self._starts[: self._sizes[m]], axis=-1)

    def einsum(self, subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``np.einsum`` over the tensor axes with jet products in the entries.

        ``subscripts`` names only the tensor axes, e.g. ``"ij,jk->ik"``.
        """
        m, a, b = self._common(a, b)
        lhs, out = subscripts.replace(" ", "").split("->")
        sa, sb = lhs.split(",")
        z = next(c for c in string.ascii_letters if c not in subscripts)
        if m == 0:
            return np.einsum(f"{sa}{z},{sb}{z}->{out}{z}", a, b)
        p = self._npairs[m]
        x = np.einsum(
            f"{sa}{z},{sb}{z}->{out}{z}",
            a[..., self._pair_a[:p]],
            b[..., self._pair_b[:p]],
            optimize=True,
        )
        return np.add.reduceat(x, self._starts[: self._sizes[m]], axis=-1)

    def deriv(self, arr: np.ndarray, i: int) -> np.ndarray:
        """Partial derivative along variable ``i``; the result loses one order."""
        m = self.order_of(arr)
        if m == 0:
            raise OrderExhaustedError(
                "partial derivative of an order-0 jet; increase the jet order",
                required=self.order + 1,
            )
        k = self._sizes[m - 1]
        return arr[..., self._deriv_idx[i][:k]] * self._deriv_fac[i][:k]

    def grad(self, arr: np.ndarray) -> np.ndarray:
        """All first partials, stacked on a new leading axis."""
        return np.stack([self.deriv(arr, i) for i in range(self.num_vars)])

    def compose(self, arr: np.ndarray, taylor: Callable[[np.ndarray, int], list]) -> np.ndarray:
        """Apply a univariate function given by its Taylor coefficients.

        ``taylor(a0, m)`` must return ``[f(a0), f'(a0), f''(a0)/2!, ...]`` up to
        degree ``m`` (each entry broadcastable against ``a0``).  The result is
        ``sum_k c_k (arr - a0)^k`` evaluated by Horner's rule.
        """
        m = self.order_of(arr)
        a0 = arr[..., 0]
        coeffs = taylor(a0, m)
        if m == 0:
            return np.asarray(coeffs[0], dtype=float)[..., None] * np.ones_like(arr)
        tail = arr.copy()
        tail[..., 0] = 0.0
        out = self.constant(np.broadcast_to(coeffs[m], a0.shape), m)
        for k in range(m - 1, -1, -1):
            out = self.mul(out, tail)
            out[..., 0] += coeffs[k]
        return out

    def recip(self, arr: np.ndarray) -> np.ndarray:
        a0 = arr[..., 0]
        if np.any(a0 == 0.0):
            raise DomainError("reciprocal of a jet with zero constant term")
        return self.compose(arr, lambda x, m: [(-1.0) ** k / x ** (k + 1) for k in range(m + 1)])

    def power(self, arr: np.ndarray, p: float) -> np.ndarray:
        """Real power; the constant term must be positive unless ``p`` is a
        non-negative integer."""
        if float(p).is_integer() and p >= 0:
            return self.int_power(arr, int(p))
        a0 = arr[..., 0]
        if float(p).is_integer():
            if np.any(a0 == 0.0):
                raise DomainError("negative power of a jet with zero constant term")
            return self.int_power(self.recip(arr), int(-p))
        if np.any(a0 <= 0.0):
            raise DomainError(f"non-integer power {p} of a non-positive base")
        return self.compose(
            arr, lambda x, m: [_binom(p, k) * x ** (p - k) for k in range(m + 1)]
        )

    def int_power(self, arr: np.ndarray, k: int) -> np.ndarray:
        out = self.constant(np.ones(arr.shape[:-1]), self.order_of(arr))
        base = arr
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def sqrt(self, arr: np.ndarray) -> np.ndarray:
        a0 = arr[..., 0]
        if np.any(a0 < 0.0):
            raise DomainError("square root of a jet with negative constant term")
        if np.any(a0 == 0.0) and self.order_of(arr) > 0:
            raise DomainError("square root is not differentiable at 0")
        return self.power(arr, 0.5)

    def exp(self, arr: np.ndarray) -> np.ndarray:
        return self.compose(arr, lambda x, m: [np.exp(x) / math.factorial(k) for k in range(m + 1)])

    def log(self, arr: np.ndarray) -> np.ndarray:
        if np.any(arr[..., 0] <= 0.0):
            raise DomainError("log of a jet with non-positive constant term")

        def taylor(x, m):
            return [np.log(x)] + [(-1.0) ** (k + 1) / (k * x**k) for k in range(1, m + 1)]

        return self.compose(arr, taylor)

    def sin(self, arr: np.ndarray) -> np.ndarray:
        return self.compose(arr, lambda x, m: _trig_series(x, m, 0))

    def cos(self, arr: np.ndarray) -> np.ndarray:
        return self.compose(arr, lambda x, m: _trig_series(x, m, 1))

    def matinv(self, mat: np.ndarray) -> np.ndarray:
        """Inverse of a square matrix of jets (axes ``(n, n, coeff)``).

        Uses ``(G0 + E)^-1 = sum_k (-G0^-1 E)^k G0^-1``, which terminates after
        ``order`` terms because ``E`` has no constant part.
        """
        m = self.order_of(mat)
        g0 = mat[..., 0]
        inv0 = np.linalg.inv(g0)
        pert = mat.copy()
        pert[..., 0] = 0.0
        step = -np.einsum("ij,jkz->ikz", inv0, pert)
        inv0_jet = self.constant(inv0, m)
        out = inv0_jet.copy()
        term = inv0_jet
        for _ in range(m):
            term = self.einsum("ij,jk->ik", step, term)
            out = out + term
        return out


def _binom(p: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= (p - j) / (j + 1)
    return out


def _trig_series(x, m, shift):
    # shift 0: sin, shift 1: cos; derivative cycle sin, cos, -sin, -cos
    cycle = [np.sin(x), np.cos(x), -np.sin(x), -np.cos(x)]
    return [cycle[(k + shift) % 4] / math.factorial(k) for k in range(m + 1)]


@functools.lru_cache(maxsize=None)
def jet_space(num_vars: int, order: int) -> JetSpace:
    """Shared, cached :class:`JetSpace` instance."""
    return JetSpace(num_vars, order)


class Jet:
    """Immutable truncated Taylor expansion of a scalar at a point.

    ``coeffs`` holds ``d^a u(p) / a!`` in the graded layout of
    :class:`JetSpace`.  Arithmetic between two jets requires equal
    ``num_vars`` and ``order``; plain numbers are promoted to constants.
    """

    __slots__ = ("space", "_c")

    def __init__(self, space: JetSpace, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.shape != (space.size(),):
            raise ShapeMismatchError(
                f"expected {space.size()} coefficients for {space!r}, got {c.shape}"
            )
        c.setflags(write=False)
        self.space = space
        self._c = c

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, value: float, num_vars: int, order: int = DEFAULT_ORDER) -> "Jet":
        space = jet_space(num_vars, order)
        return cls(space, space.constant(value))

    @classmethod
    def variable(cls, i: int, value: float, num_vars: int, order: int = DEFAULT_ORDER) -> "Jet":
        space = jet_space(num_vars, order)
        return cls(space, space.variable(i, value))

    @classmethod
    def from_dict(cls, coeffs: dict, num_vars: int, order: int) -> "Jet":
        space = jet_space(num_vars, order)
        c = np.zeros(space.size())
        for alpha, v in coeffs.items():
            c[space.index[tuple(alpha)]] = v
        return cls(space, c)

    # -- accessors -----------------------------------------------------------

    @property
    def num_vars(self) -> int:
        return self.space.num_vars

    @property
    def order(self) -> int:
        return self.space.order

    @property
    def array(self) -> np.ndarray:
        return self._c

    @property
    def value(self) -> float:
        return float(self._c[0])

    @property
    def coeffs(self) -> dict[tuple[int, ...], float]:
        return {m: float(v) for m, v in zip(self.space.monomials, self._c)}

    def coefficient(self, alpha: Sequence[int]) -> float:
        alpha = tuple(alpha)
        if len(alpha) != self.num_vars:
            raise ShapeMismatchError(f"multi-index {alpha} has wrong length")
        if sum(alpha) > self.order:
            raise OrderExhaustedError(
                f"multi-index {alpha} has degree {sum(alpha)} > jet order {self.order}",
                required=sum(alpha),
            )
        return float(self._c[self.space.index[alpha]])

    def partial(self, alpha: Sequence[int]) -> float:
        return extract_partial(self, alpha)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.space is not self.space and (
                other.num_vars != self.num_vars or other.order != self.order
            ):
                raise ShapeMismatchError(
                    f"jet shapes differ: ({self.num_vars}, {self.order}) vs "
                    f"({other.num_vars}, {other.order})"
                )
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet(self.space, self.space.constant(float(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.space, self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.space, self._c - other._c)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Jet(self.space, -self._c)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.space, self.space.mul(self._c, other._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * jet_recip(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * jet_recip(self)

    def __pow__(self, p):
        return Jet(self.space, self.space.power(self._c, p))

    def __repr__(self):
        nz = {m: v for m, v in self.coeffs.items() if v != 0.0}
        return f"Jet(num_vars={self.num_vars}, order={self.order}, coeffs={nz})"


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_recip(a: Jet) -> Jet:
    if a.value == 0.0:
        raise DomainError("jet_recip: zero constant term")
    return Jet(a.space, a.space.recip(a.array))


def jet_sqrt(a: Jet) -> Jet:
    if a.value <= 0.0:
        raise DomainError("jet_sqrt: non-positive constant term")
    return Jet(a.space, a.space.sqrt(a.array))


def extract_partial(a: Jet, alpha: Sequence[int]) -> float:
    """Raw partial derivative ``d^alpha u(p) = alpha! * coefficient(alpha)``."""
    alpha = tuple(alpha)
    return a.coefficient(alpha) * math.prod(math.factorial(k) for k in alpha)
