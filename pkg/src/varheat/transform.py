"""Characteristic function, solution kernel, and contour-integral solver.

The solution of q_t = (sigma^2 q_x)_x with Dirichlet data is represented as

    q(x, t) = Re[ (1/(i*pi)) * int_Gamma (Phi(k,x) / Delta(k)) e^{-k^2 t} dk ],

where Delta is the series of simplex integrals over (0, 1), Psi(k,x,y) the
product of the (0, min(x,y)) and (max(x,y), 1) series, and
Phi(k,x) = int_0^1 Psi(k,x,y) q0(y) / sqrt(sigma(x) sigma(y)) dy.

Numerically both numerator and denominator are multiplied by
exp(i k tau(1)) so that each decays in the upper half plane, and the contour
Gamma is a pair of rays at arguments delta and pi - delta joined by an arc
of radius r over the origin; along those rays Re(k^2) > 0, so the factor
exp(-k^2 t) damps the integrand.  The contour is traversed from the upper
left ray inward, over the arc, and outward along the right ray; with a node
set symmetric under k -> -conj(k) the raw integral is purely imaginary for
real data, which is monitored through ``imag_residual``.

Truncation of the series at n <= N gives the computable approximation; all
operations accept the truncation via :class:`~varheat.simplex.SeriesSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import Conductivity, TravelTimeMap
from .errors import DenominatorNearZero, DomainError, TailTooLarge
from .simplex import (
    SeriesSpec,
    _unit_gauss,
    build_term_tables,
    series_sum,
    simplex_integral,
)

__all__ = [
    "Contour",
    "SolutionSample",
    "default_contour",
    "delta_fn",
    "regularized_delta_fn",
    "delta_values",
    "psi_kernel",
    "regularized_psi_kernel",
    "phi_fn",
    "solve",
    "solve_grid",
]


@dataclass(frozen=True)
class Contour:
    """Integration path for the inverse transform.

    ``angled_rays`` runs along arguments delta and pi - delta (0 < delta <
    pi/4), joined by an arc of radius r through the upper half plane; the
    sector boundary ``boundary_omega`` is the delta = pi/4 limit, where
    exp(-k^2 t) no longer decays (kept for reference, not for production
    use).  Nodes come in mirror pairs under k -> -conj(k) so that real data
    produce real solutions up to roundoff.
    """

    shape: str = "angled_rays"
    r: float = 0.5
    delta: float = math.pi / 8.0
    kmax: float = 8.0
    nodes_per_unit: int = 40

    def __post_init__(self):
        if self.shape not in ("angled_rays", "boundary_omega"):
            raise DomainError(f"unknown contour shape {self.shape!r}")
        if not 0.0 < self.r < self.kmax:
            raise DomainError("need 0 < r < kmax")
        if self.shape == "angled_rays" and not 0.0 < self.delta < math.pi / 4.0:
            raise DomainError("angled_rays needs 0 < delta < pi/4")
        if self.nodes_per_unit < 1:
            raise DomainError("nodes_per_unit must be >= 1")

    @property
    def ray_angle(self) -> float:
        return math.pi / 4.0 if self.shape == "boundary_omega" else self.delta

    def nodes(self):
        """Directed nodes and weights (k_j, w_j) with sum_j f(k_j) w_j ~ int f dk."""
        delta = self.ray_angle
        x01, w01 = _unit_gauss(12)

        def composite(lo, hi, per_unit):
            n_panels = max(1, math.ceil((hi - lo) * per_unit / 12.0))
            edges = np.linspace(lo, hi, n_panels + 1)
            width = edges[1:] - edges[:-1]
            pts = edges[:-1, None] + width[:, None] * x01[None, :]
            wts = width[:, None] * w01[None, :]
            return pts.ravel(), wts.ravel()

        s, ws = composite(self.r, self.kmax, self.nodes_per_unit)
        theta, wt = composite(delta, math.pi - delta, self.r * self.nodes_per_unit)

        right_k = s * np.exp(1j * delta)
        right_w = np.exp(1j * delta) * ws
        # Left ray traversed inward = reversed orientation of its s-grid.
        left_k = -np.conj(right_k)
        left_w = np.conj(right_w)
        arc_k = self.r * np.exp(1j * theta)
        arc_w = -1j * self.r * np.exp(1j * theta) * wt

        k = np.concatenate([left_k[::-1], arc_k[::-1], right_k])
        w = np.concatenate([left_w[::-1], arc_w[::-1], right_w])
        return k, w


@dataclass(frozen=True)
class SolutionSample:
    """One evaluation q_N(x, t) with its contour-realness diagnostic."""

    x: float
    t: float
    value: float
    truncation_N: int
    imag_residual: float


def default_contour(t: float, shape: str = "angled_rays") -> Contour:
    """Contour sized for time t: kmax = max(8, 6/sqrt(t)) tames the tail."""
    return Contour(shape=shape, kmax=max(8.0, 6.0 / math.sqrt(t)))


# ---------------------------------------------------------------------------
# Characteristic function
# ---------------------------------------------------------------------------


def delta_fn(c: Conductivity, tt: TravelTimeMap, k, spec: SeriesSpec) -> complex:
    """Truncated characteristic function: sum_{n<=N} S_n(0, 1; k).

    Odd and entire in k; for constant sigma it reduces to sin(k tau(1)) and
    its positive real zeros are the square roots of minus the eigenvalues.
    """
    return series_sum(c, tt, 0.0, 1.0, k, spec)


def regularized_delta_fn(c: Conductivity, tt: TravelTimeMap, k, spec: SeriesSpec) -> complex:
    """exp(i k tau(1)) * Delta_N(k), bounded in the upper half plane."""
    from .simplex import regularized_series_sum

    return regularized_series_sum(c, tt, 0.0, 1.0, k, spec, tt.total)


def delta_values(c: Conductivity, tt: TravelTimeMap, ks, spec: SeriesSpec) -> np.ndarray:
    """Vectorized Delta_N over an array of wavenumbers (real arrays stay real)."""
    ks = np.asarray(ks)
    tables = build_term_tables(c, tt, 0.0, 1.0, spec)
    if np.isrealobj(ks):
        total = np.zeros(ks.size, dtype=float)
        for tab in tables:
            P = tab.const[:, None] + tab.phases
            if tab.weights.any():
                total += (tab.weights[0] @ np.sin(np.multiply.outer(P[0], ks.ravel())))
        return total.reshape(ks.shape)
    vals = sum(tab.eval_plain(ks.ravel())[0] for tab in tables)
    return vals.reshape(ks.shape)


# ---------------------------------------------------------------------------
# Solution kernel Psi and transform Phi
# ---------------------------------------------------------------------------


def psi_kernel(c: Conductivity, tt: TravelTimeMap, k, x: float, y: float,
               spec: SeriesSpec, form: str = "product") -> complex:
    """Symmetric kernel Psi_N(k, x, y).

    ``product`` multiplies the two series each truncated at N (the form the
    solver integrates); ``cauchy`` keeps only total order <= N in the double
    sum.  The two agree up to the first omitted cross term.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise DomainError("psi_kernel needs x, y in [0, 1]")
    lo, hi = (y, x) if y <= x else (x, y)
    if form == "product":
        left = series_sum(c, tt, 0.0, lo, k, spec)
        right = series_sum(c, tt, hi, 1.0, k, spec)
        return left * right
    if form == "cauchy":
        N = spec.truncation_N
        left = [simplex_integral(c, tt, n, 0.0, lo, k, spec) for n in range(N + 1)]
        right = [simplex_integral(c, tt, n, hi, 1.0, k, spec) for n in range(N + 1)]
        return complex(sum(left[n - l] * right[l] for n in range(N + 1) for l in range(n + 1)))
    raise DomainError(f"unknown psi form {form!r}")


def regularized_psi_kernel(c: Conductivity, tt: TravelTimeMap, k, x: float,
                           y: float, spec: SeriesSpec) -> complex:
    """exp(i k tau(1)) * Psi_N(k, x, y), every exponent kept decaying.

    The two series factors carry their own travel-time spans as shifts and
    the remaining gap exp(ik (tau(max) - tau(min))) is bounded for
    Im k >= 0, so the product stays finite arbitrarily high in the upper
    half plane where the plain kernel overflows.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise DomainError("psi kernel needs x, y in [0, 1]")
    from .simplex import regularized_series_sum

    kc = complex(k)
    lo, hi = (y, x) if y <= x else (x, y)
    tau_lo = float(tt.tau(lo))
    tau_hi = float(tt.tau(hi))
    left = regularized_series_sum(c, tt, 0.0, lo, kc, spec, shift=tau_lo)
    right = regularized_series_sum(c, tt, hi, 1.0, kc, spec,
                                   shift=tt.total - tau_hi)
    return left * right * np.exp(1j * kc * (tau_hi - tau_lo))


def phi_fn(c: Conductivity, tt: TravelTimeMap, k, x: float, q0, spec: SeriesSpec,
           regularized: bool = False) -> complex:
    """Phi_N(k, x) = int_0^1 Psi_N(k,x,y) q0(y) / sqrt(sigma(x) sigma(y)) dy.

    Pointwise reference path: composite Gauss-Legendre in y, split at y = x
    where the kernel has a derivative kink.  ``regularized`` multiplies by
    exp(i k tau(1)) with every exponent kept decaying, so it stays bounded
    high in the upper half plane.  The production solver uses the batched
    equivalent in :func:`solve_grid`; the two are cross-checked in tests.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError("phi_fn needs x in [0, 1]")
    kc = complex(k)
    if x in (0.0, 1.0):
        return 0j
    from .simplex import regularized_series_sum

    total = tt.total
    per_unit = max(24.0, 0.9 * abs(kc) * total)

    def one_side(lo, hi, series_a, series_b):
        # integrand factor sum S(series interval depending on y) * q0 / sqrt(sigma)
        if hi <= lo:
            return 0j
        n_panels = max(2, math.ceil((hi - lo) * per_unit / 12.0))
        edges = np.linspace(lo, hi, n_panels + 1)
        x01, w01 = _unit_gauss(12)
        pts = edges[:-1, None] + np.diff(edges)[:, None] * x01[None, :]
        wts = (np.diff(edges)[:, None] * w01[None, :]).ravel()
        pts = pts.ravel()
        dens = q0(pts) / np.sqrt(c.sigma(pts))
        acc = 0j
        for y, wq, d in zip(pts, wts, dens):
            if regularized:
                sval = regularized_series_sum(c, tt, *series_a(y), kc, spec,
                                              shift=series_b(y))
            else:
                sval = series_sum(c, tt, *series_a(y), kc, spec)
            acc += wq * d * sval
        return acc

    if regularized:
        # Left part: exp(ik tau(x)) S(0,y); right part: exp(ik(tau(1)-tau(x))) S(y,1).
        tau_x = float(tt.tau(x))
        left = one_side(0.0, x, lambda y: (0.0, y), lambda y: tau_x)
        right = one_side(x, 1.0, lambda y: (y, 1.0), lambda y: total - tau_x)
        right_factor = regularized_series_sum(c, tt, x, 1.0, kc, spec, shift=total - tau_x)
        left_factor = regularized_series_sum(c, tt, 0.0, x, kc, spec, shift=tau_x)
        # Each product then carries the full shift tau(1) exactly once.
        val = right_factor * left + left_factor * right
    else:
        left = one_side(0.0, x, lambda y: (0.0, y), None)
        right = one_side(x, 1.0, lambda y: (y, 1.0), None)
        right_factor = series_sum(c, tt, x, 1.0, kc, spec)
        left_factor = series_sum(c, tt, 0.0, x, kc, spec)
        val = right_factor * left + left_factor * right
    return val / math.sqrt(float(c.sigma(x)))


# ---------------------------------------------------------------------------
# Batched solve
# ---------------------------------------------------------------------------


def _cheb_lobatto(G):
    return 0.5 * (1.0 - np.cos(np.pi * np.arange(G) / (G - 1)))


def _barycentric_matrix(grid, targets):
    """Rows interpolate a function known on ``grid`` to each target point."""
    G = grid.size
    w = np.ones(G)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    diff = targets[:, None] - grid[None, :]
    exact = np.isclose(diff, 0.0, atol=1e-15)
    diff = np.where(exact, 1.0, diff)
    ratios = w[None, :] / diff
    B = ratios / ratios.sum(axis=1, keepdims=True)
    hit_rows = exact.any(axis=1)
    B[hit_rows] = 0.0
    B[hit_rows, exact.argmax(axis=1)[hit_rows]] = 1.0
    return B


def _segment_weights(c, q0, lo, hi, per_unit):
    """Gauss nodes and q0/sqrt(sigma)-weighted quadrature weights on [lo, hi]."""
    if hi - lo <= 1e-14:
        return np.empty(0), np.empty(0)
    x01, w01 = _unit_gauss(12)
    n_panels = max(2, math.ceil((hi - lo) * per_unit / 12.0))
    edges = np.linspace(lo, hi, n_panels + 1)
    pts = (edges[:-1, None] + np.diff(edges)[:, None] * x01[None, :]).ravel()
    wts = (np.diff(edges)[:, None] * w01[None, :]).ravel()
    return pts, wts * q0(pts) / np.sqrt(c.sigma(pts))


def _phi_batch(c, tt, q0, ks, xs, spec, kmax):
    """Regularized Phi_n(k, x) for all orders n <= N, contour nodes, and xs.

    Returns an array of shape (N+1, X, K) holding exp(ik tau(1)) Phi with the
    series *cumulative* in n (entry n is the truncation-N=n value).

    The y-integral is evaluated through a Chebyshev-Lobatto grid in y: the
    simplex series over (0, y) and (y, 1) are smooth in y, so their values on
    the grid interpolate to any quadrature node, which turns the whole double
    sweep into small matrix products reused by every x.
    """
    total = tt.total
    X = len(xs)
    K = ks.size
    N = spec.truncation_N
    G = min(220, max(48, int(0.75 * kmax * total) + 16))
    ygrid = _cheb_lobatto(G)

    left_tabs = build_term_tables(c, tt, 0.0, ygrid, spec)
    right_tabs = build_term_tables(c, tt, ygrid, 1.0, spec)
    SL = np.stack([tab.eval_plain(ks) for tab in left_tabs])    # (N+1, G, K)
    SR = np.stack([tab.eval_plain(ks) for tab in right_tabs])
    np.cumsum(SL, axis=0, out=SL)
    np.cumsum(SR, axis=0, out=SR)

    xs_arr = np.asarray(xs, dtype=float)
    tau_x = tt.tau(xs_arr)
    # Endpoint factors, regularized with their own travel-time span.
    fac_left_tabs = build_term_tables(c, tt, 0.0, xs_arr, spec)
    fac_right_tabs = build_term_tables(c, tt, xs_arr, 1.0, spec)
    FL = np.stack([tab.eval_regularized(ks, tau_x[:, None]) for tab in fac_left_tabs])
    FR = np.stack([tab.eval_regularized(ks, (total - tau_x)[:, None]) for tab in fac_right_tabs])
    np.cumsum(FL, axis=0, out=FL)
    np.cumsum(FR, axis=0, out=FR)

    per_unit = max(24.0, 0.9 * kmax * total)
    CL = np.zeros((X, G))
    CR = np.zeros((X, G))
    for i, x in enumerate(xs_arr):
        pts, wq = _segment_weights(c, q0, 0.0, float(x), per_unit)
        if pts.size:
            CL[i] = wq @ _barycentric_matrix(ygrid, pts)
        pts, wq = _segment_weights(c, q0, float(x), 1.0, per_unit)
        if pts.size:
            CR[i] = wq @ _barycentric_matrix(ygrid, pts)

    # P(n, x, k) = int_0^x S_sum(0,y) q0/sqrt(sigma) dy, likewise R on (x, 1).
    P = np.einsum("xg,ngk->nxk", CL, SL)
    R = np.einsum("xg,ngk->nxk", CR, SR)
    phase_left = np.exp(1j * np.multiply.outer(tau_x, ks))          # (X, K)
    phase_right = np.exp(1j * np.multiply.outer(total - tau_x, ks))
    phi = FR * (phase_left[None] * P) + FL * (phase_right[None] * R)
    phi /= np.sqrt(c.sigma(xs_arr))[None, :, None]
    return phi


def solve_grid(c: Conductivity, tt: TravelTimeMap, q0, xs, ts, spec: SeriesSpec,
               contour: Contour | None = None, tail_tol: float = 1e-8,
               denominator_floor: float = 1e-12, all_orders: bool = False):
    """Evaluate q_N on a grid of x values for each t; returns {t: [samples]}.

    Contour data (characteristic function, kernel tables) are shared across
    all x for a given t, which is the production path for solution grids.
    With ``all_orders=True`` the result is {t: {n: [samples]}} for every
    truncation n <= N at no extra cost (the series is summed cumulatively).
    Raises :class:`DenominatorNearZero` if the contour passes too close to a
    zero of the regularized characteristic function, :class:`TailTooLarge`
    if the truncation radius cannot control the tail at this t.
    """
    xs = [float(x) for x in np.atleast_1d(xs)]
    ts = [float(t) for t in np.atleast_1d(ts)]
    if any(t <= 0.0 for t in ts):
        raise DomainError("solve requires t > 0")
    if any(x < 0.0 or x > 1.0 for x in xs):
        raise DomainError("solve requires x in [0, 1]")
    N = spec.truncation_N
    out = {}
    delta_tabs = build_term_tables(c, tt, 0.0, 1.0, spec)
    for t in ts:
        cont = contour if contour is not None else default_contour(t)
        ks, ws = cont.nodes()
        regD = np.cumsum(
            np.stack([tab.eval_regularized(ks, tt.total)[0] for tab in delta_tabs]),
            axis=0,
        )  # (N+1, K)
        dscale = np.abs(regD[N])
        floor = denominator_floor * max(1.0, float(dscale.max()))
        if float(dscale.min()) < floor:
            raise DenominatorNearZero(
                "contour passes within the floor of a characteristic zero; "
                "enlarge r or adjust delta"
            )
        phi = _phi_batch(c, tt, q0, ks, xs, spec, cont.kmax)  # (N+1, X, K)
        decay = np.exp(-(ks**2) * t) * ws

        per_order = {}
        orders = range(N + 1) if all_orders else (N,)
        for n in orders:
            integrand = phi[n] / regD[n][None, :]
            raw = integrand @ decay  # (X,)
            if n == N:
                # Tail control: envelope decay rate along the truncated rays.
                delta_ang = cont.ray_angle
                end_mag = float(np.max(np.abs(integrand[:, [0, -1]] *
                                              np.exp(-(ks[[0, -1]] ** 2) * t))))
                rate = 2.0 * cont.kmax * t * max(math.cos(2 * delta_ang),
                                                 math.sin(2 * delta_ang))
                tail_est = 2.0 * end_mag / (math.pi * rate)
                if tail_est > tail_tol:
                    raise TailTooLarge(
                        f"tail estimate {tail_est:.2e} exceeds {tail_tol:.2e}; "
                        "increase kmax (or loosen tail_tol)"
                    )
            samples = []
            for i, x in enumerate(xs):
                if x == 0.0 or x == 1.0:
                    samples.append(SolutionSample(x, t, 0.0, n, 0.0))
                    continue
                val = raw[i] / (1j * math.pi)
                samples.append(SolutionSample(x, t, float(val.real), n,
                                              float(abs(val.imag))))
            per_order[n] = samples
        out[t] = per_order if all_orders else per_order[N]
    return out


def solve(c: Conductivity, tt: TravelTimeMap, q0, x: float, t: float,
          spec: SeriesSpec, contour: Contour | None = None,
          tail_tol: float = 1e-8) -> SolutionSample:
    """Evaluate the truncated solution q_N at one point (x, t)."""
    res = solve_grid(c, tt, q0, [x], [t], spec, contour=contour, tail_tol=tail_tol)
    return res[float(t)][0]
