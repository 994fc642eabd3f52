"""Ordered-simplex integrals of the log-derivative weight.

The building block of the whole solver is the n-fold integral

    S_n(a, b; k) = 2**-n * int_{a<=y1<=...<=yn<=b}
                   prod_p mu(y_p) * sin(k * A(y)) dy1..dyn,

where mu = sigma'/sigma and the phase A(y) alternates travel-time gaps:

    A(y) = sum_{p=0..n} (-1)**p (tau(y_{p+1}) - tau(y_p)),
    y_0 = a, y_{n+1} = b.

Since tau enters linearly, A(y) = c + sum_p 2*(-1)**(p+1) tau(y_p) with the
constant c = -tau(a) + (-1)**n tau(b), so a quadrature rule for the simplex
reduces to a list of (weight, phase) pairs that are *independent of k*.  All
evaluators below exploit that: nested Gauss-Legendre nodes are expanded once
(innermost limits shrink with the outer variable) and then any number of k
values can be swept as dot products against the tuple arrays.

Two kernels share the tuples:

* plain:        sin(k * (c + T)) -- fine for real and moderately complex k;
* regularized:  exp(ik*shift) * sin(k*(c+T)) expanded as
                (exp(ik*(shift+c+T)) - exp(ik*(shift-c-T))) / 2i,
                where shift >= tau(b)-tau(a) >= |c+T| keeps every exponent's
                imaginary part nonnegative for Im k >= 0, so no intermediate
                exceeds magnitude 1 per sample (up to the mu product).

Cost grows as quad_order**n; orders above ORDER_CAP are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coefficients import Conductivity, TravelTimeMap, log_derivative
from .errors import DomainError, OrderTooHigh, ShiftTooSmall

__all__ = [
    "ORDER_CAP",
    "SeriesSpec",
    "SimplexTerm",
    "simplex_integral",
    "regularized_simplex_integral",
    "series_sum",
    "regularized_series_sum",
    "term_bound",
    "abs_log_derivative_integral",
]

ORDER_CAP = 6

# State arrays larger than this are split before expanding the next level.
_CHUNK_LIMIT = 1 << 22
# Stored term tables refuse orders whose per-interval tuple count exceeds this.
_TABLE_LIMIT = 1 << 24


@dataclass(frozen=True)
class SeriesSpec:
    """Truncation and quadrature configuration for the series evaluators.

    truncation_N: series cut at n <= N (N >= 0).
    quad_order:   Gauss-Legendre nodes per simplex dimension (>= 2).
    tol:          target absolute accuracy per term (used by audits).
    """

    truncation_N: int = 2
    quad_order: int = 32
    tol: float = 1e-10

    def __post_init__(self):
        if self.truncation_N < 0:
            raise DomainError("truncation_N must be >= 0")
        if self.quad_order < 2:
            raise DomainError("quad_order must be >= 2")
        if self.tol <= 0.0:
            raise DomainError("tol must be positive")


@dataclass(frozen=True)
class SimplexTerm:
    """One evaluated series term; real for real k, odd in k."""

    n: int
    interval: tuple
    k: complex
    value: complex


@lru_cache(maxsize=32)
def _unit_gauss(order):
    """Gauss-Legendre nodes/weights mapped to [0, 1], cached per order."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _phase_const(tt, a, b, n):
    return -tt.tau(a) + (-1.0) ** n * tt.tau(b)


def _check_interval(a, b):
    if not (0.0 <= a <= b <= 1.0) :
        if a > b:
            raise DomainError(f"interval must satisfy a <= b, got ({a}, {b})")
        raise DomainError(f"interval must lie in [0, 1], got ({a}, {b})")


def _check_order(n, quad_order):
    if n < 0:
        raise DomainError("order n must be >= 0")
    if n > ORDER_CAP:
        raise OrderTooHigh(
            f"order n={n} exceeds cap {ORDER_CAP} (cost grows as quad_order**n)"
        )
    return quad_order**n


def _expand_level(lo, up, W, T, sign, mu_vals_fn, tau_vals_fn, x01, w01):
    """Add one inner simplex variable; upper limits shrink to current nodes."""
    span = up - lo
    y = lo[:, None] + span[:, None] * x01[None, :]
    jac = span[:, None] * w01[None, :]
    yf = y.ravel()
    Wf = (W[:, None] * jac).ravel() * mu_vals_fn(yf)
    Tf = T[:, None].repeat(x01.size, axis=1).ravel() + (2.0 * sign) * tau_vals_fn(yf)
    lof = lo[:, None].repeat(x01.size, axis=1).ravel()
    return lof, yf, Wf, Tf


def _fold_simplex(c, tt, n, a, b, quad_order, kernel):
    """Apply ``kernel(W, c + T)`` over all quadrature tuples of S_n, chunked."""
    count = _check_order(n, quad_order)
    const = _phase_const(tt, a, b, n)
    if n == 0:
        return kernel(np.array([1.0]), np.array([const]))
    x01, w01 = _unit_gauss(quad_order)
    mu = lambda y: np.asarray(log_derivative(c, y))
    tau = lambda y: np.asarray(tt.tau(y))
    scale = 0.5**n

    def recurse(lo, up, W, T, level):
        # level = index p of the variable being added next (n down to 1)
        if level == 0:
            return np.sum(kernel(W * scale, T + const))
        if up.size * quad_order > _CHUNK_LIMIT and up.size > 1:
            half = up.size // 2
            return recurse(lo[:half], up[:half], W[:half], T[:half], level) + recurse(
                lo[half:], up[half:], W[half:], T[half:], level
            )
        sign = (-1.0) ** (level + 1)
        lof, yf, Wf, Tf = _expand_level(lo, up, W, T, sign, mu, tau, x01, w01)
        return recurse(lof, yf, Wf, Tf, level - 1)

    lo0 = np.array([a], dtype=float)
    up0 = np.array([b], dtype=float)
    return recurse(lo0, up0, np.array([1.0]), np.array([0.0]), n)


def _kernel_plain(k):
    kc = complex(k)
    if kc.imag == 0.0:
        kr = kc.real

        def kern(W, P):
            return complex(W @ np.sin(kr * P))

    else:

        def kern(W, P):
            return complex(W @ np.sin(kc * P))

    return kern


def _kernel_regularized(k, shift):
    kc = complex(k)

    def kern(W, P):
        up = np.exp(1j * kc * (shift + P))
        dn = np.exp(1j * kc * (shift - P))
        return complex(W @ (up - dn)) / 2j

    return kern


def simplex_integral(c: Conductivity, tt: TravelTimeMap, n: int, a: float, b: float,
                     k, spec: SeriesSpec) -> complex:
    """Evaluate S_n(a, b; k) by nested Gauss-Legendre quadrature.

    Odd in k, real for real k, and bounded by :func:`term_bound`.  For
    large Im k prefer :func:`regularized_simplex_integral`.
    """
    _check_interval(a, b)
    return _fold_simplex(c, tt, n, a, b, spec.quad_order, _kernel_plain(k))


def regularized_simplex_integral(c: Conductivity, tt: TravelTimeMap, n: int, a: float,
                                 b: float, k, spec: SeriesSpec, shift: float) -> complex:
    """Evaluate exp(ik*shift) * S_n(a, b; k) in overflow-safe form.

    Requires Im k >= 0 and shift >= tau(b) - tau(a); every combined
    exponent then decays in the upper half k-plane.
    """
    _check_interval(a, b)
    kc = complex(k)
    if kc.imag < -1e-12:
        raise DomainError("regularized evaluation requires Im k >= 0")
    span = tt.tau(b) - tt.tau(a)
    if shift < span - 1e-12:
        raise ShiftTooSmall(
            f"shift={shift:g} is below the travel-time span {span:g}; "
            "the combined exponents would grow"
        )
    return _fold_simplex(c, tt, n, a, b, spec.quad_order, _kernel_regularized(kc, shift))


def series_sum(c: Conductivity, tt: TravelTimeMap, a: float, b: float, k,
               spec: SeriesSpec) -> complex:
    """Partial sum over n <= truncation_N of the simplex integrals."""
    _check_interval(a, b)
    kern = _kernel_plain(k)
    return complex(
        sum(_fold_simplex(c, tt, n, a, b, spec.quad_order, kern)
            for n in range(spec.truncation_N + 1))
    )


def regularized_series_sum(c: Conductivity, tt: TravelTimeMap, a: float, b: float, k,
                           spec: SeriesSpec, shift: float) -> complex:
    """Regularized counterpart of :func:`series_sum` (same shift every term)."""
    _check_interval(a, b)
    kc = complex(k)
    if kc.imag < -1e-12:
        raise DomainError("regularized evaluation requires Im k >= 0")
    span = tt.tau(b) - tt.tau(a)
    if shift < span - 1e-12:
        raise ShiftTooSmall(f"shift={shift:g} below travel-time span {span:g}")
    kern = _kernel_regularized(kc, shift)
    return complex(
        sum(_fold_simplex(c, tt, n, a, b, spec.quad_order, kern)
            for n in range(spec.truncation_N + 1))
    )


def abs_log_derivative_integral(c: Conductivity, a: float, b: float, panels: int = 64,
                                order: int = 12) -> float:
    """int_a^b |sigma'/sigma| by composite Gauss-Legendre quadrature."""
    _check_interval(a, b)
    if b == a:
        return 0.0
    edges = np.linspace(a, b, panels + 1)
    x01, w01 = _unit_gauss(order)
    lo, hi = edges[:-1], edges[1:]
    pts = lo[:, None] + (hi - lo)[:, None] * x01[None, :]
    vals = np.abs(log_derivative(c, pts.ravel())).reshape(pts.shape)
    return float(np.sum((hi - lo)[:, None] * w01[None, :] * vals))


def term_bound(c: Conductivity, tt: TravelTimeMap, n: int, a: float, b: float, k) -> float:
    """|S_n(a,b;k)| <= cosh(|Im k| (tau(b)-tau(a))) * (int|mu|)^n / (2^n n!).

    Follows from |sin(x+iy)| <= cosh(y) and the 1/n! simplex volume.
    """
    span = float(tt.tau(b) - tt.tau(a))
    integral = abs_log_derivative_integral(c, a, b)
    kc = complex(k)
    return math.cosh(abs(kc.imag) * span) * integral**n / (2.0**n * math.factorial(n))


# ---------------------------------------------------------------------------
# Batched term tables: tuples for many intervals at once, reused across k.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermTable:
    """Quadrature tuples of S_n for a batch of intervals, shared across k.

    ``weights``/``phases`` have shape (M, quad_order**n); ``const`` is the
    per-interval phase constant.  ``eval_plain`` and ``eval_regularized``
    return (M, K) arrays for a vector of K wavenumbers.
    """

    n: int
    weights: np.ndarray
    phases: np.ndarray
    const: np.ndarray
    span: np.ndarray  # tau(b) - tau(a), for shift validation

    def _sweep(self, k, func, chunk_elems=1 << 23):
        k = np.atleast_1d(np.asarray(k))
        M, J = self.phases.shape
        out = np.empty((M, k.size), dtype=complex)
        P = self.const[:, None] + self.phases
        if not self.weights.any():
            out[:] = 0.0
            return out
        step = max(1, int(chunk_elems // max(1, M * J)))
        for s in range(0, k.size, step):
            kk = k[s : s + step]
            out[:, s : s + kk.size] = func(P, kk)
        return out

    def eval_plain(self, k):
        def func(P, kk):
            S = np.sin(P[:, :, None] * kk[None, None, :])
            return np.einsum("mj,mjk->mk", self.weights, S)

        return self._sweep(k, func)

    def eval_regularized(self, k, shift):
        shift = np.asarray(shift, dtype=float)
        if shift.ndim == 0:
            shift = np.full((self.phases.shape[0], 1), float(shift))
        else:
            shift = shift.reshape(self.phases.shape[0], 1)
        if np.any(shift[:, 0] < self.span - 1e-12):
            raise ShiftTooSmall("shift below travel-time span of a batched interval")

        def func(P, kk):
            up = np.exp(1j * (shift + P)[:, :, None] * kk[None, None, :])
            dn = np.exp(1j * (shift - P)[:, :, None] * kk[None, None, :])
            return np.einsum("mj,mjk->mk", self.weights, (up - dn)) / 2j

        return self._sweep(k, func)


def build_term_tables(c: Conductivity, tt: TravelTimeMap, a, b, spec: SeriesSpec,
                      max_order: int | None = None) -> list[TermTable]:
    """Precompute tuples of S_0..S_N over a batch of intervals.

    ``a`` and ``b`` broadcast to a common length M; returns one
    :class:`TermTable` per order.  Memory is M * quad_order**n tuples per
    order, so high orders are refused here (use the scalar evaluators).
    """
    N = spec.truncation_N if max_order is None else max_order
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    a = a.ravel().copy()
    b = b.ravel().copy()
    if np.any(a < 0.0) or np.any(b > 1.0) or np.any(a > b):
        raise DomainError("batched intervals must satisfy 0 <= a <= b <= 1")
    M = a.size
    x01, w01 = _unit_gauss(spec.quad_order)
    mu = lambda y: np.asarray(log_derivative(c, y))
    tau = lambda y: np.asarray(tt.tau(y))
    span = tau(b) - tau(a)

    tables = []
    for n in range(N + 1):
        count = _check_order(n, spec.quad_order)
        if count > _TABLE_LIMIT:
            raise OrderTooHigh(
                f"order {n} at quad_order {spec.quad_order} needs {count} stored "
                "tuples per interval; lower quad_order or use the scalar path"
            )
        const = -tau(a) + (-1.0) ** n * tau(b)
        if n == 0:
            tables.append(
                TermTable(0, np.ones((M, 1)), np.zeros((M, 1)), const, span)
            )
            continue
        lo = a.copy()
        up = b.copy()
        W = np.full(M, 0.5**n)
        T = np.zeros(M)
        for level in range(n, 0, -1):
            sign = (-1.0) ** (level + 1)
            lo, up, W, T = _expand_level(lo, up, W, T, sign, mu, tau, x01, w01)
        J = count
        tables.append(
            TermTable(n, W.reshape(M, J), T.reshape(M, J), const, span)
        )
    return tables
