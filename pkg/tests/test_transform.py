import math

import numpy as np
import pytest

from varheat import SeriesSpec
from varheat.errors import DenominatorNearZero, DomainError, TailTooLarge
from varheat.oracles import fourier_solution
from varheat.simplex import term_bound
from varheat.transform import (
    Contour,
    default_contour,
    delta_fn,
    delta_values,
    phi_fn,
    psi_kernel,
    regularized_delta_fn,
    solve,
    solve_grid,
)

from conftest import quadratic, sine

# Frozen closed form (symbolic integration of the sine products):
# Phi(k=2, x=0.3) for sigma = 1, q0 = sin(pi y).
PHI_CONST_K2_X03 = 0.2506598472315638


def test_delta_constant_is_sine(const1, spec2):
    c, tt = const1
    for k in (0.7, 2.0, 1.0 + 1.0j):
        assert delta_fn(c, tt, k, spec2) == pytest.approx(np.sin(k), abs=1e-12)


def test_delta_oddness(parabolic, spec2):
    c, tt = parabolic
    d = delta_fn(c, tt, 1.7, spec2)
    assert delta_fn(c, tt, -1.7, spec2) == pytest.approx(-d, abs=1e-13)


def test_delta_values_vectorized(parabolic, spec2):
    c, tt = parabolic
    ks = np.array([0.3, 1.1, 2.9])
    vals = delta_values(c, tt, ks, spec2)
    assert vals.dtype == float
    for k, v in zip(ks, vals):
        assert v == pytest.approx(delta_fn(c, tt, k, spec2).real, abs=1e-12)


def test_regularized_delta_consistency(parabolic, spec2):
    c, tt = parabolic
    k = 2.0 + 1.5j
    reg = regularized_delta_fn(c, tt, k, spec2)
    assert reg == pytest.approx(np.exp(1j * k * tt.total) * delta_fn(c, tt, k, spec2),
                                abs=1e-12)


def test_delta_matches_interface_determinant(parabolic, spec2, spec3):
    # The 2000-cell piecewise-constant model, evaluated straight from the
    # scaled determinant, approaches the characteristic function.  k = 1.0
    # sits almost exactly on a zero of the untruncated function, so the
    # N = 2 comparison is dominated by the omitted third series term; the
    # defensible bound is that term's envelope plus the O(1/cells) of the
    # discrete model.
    from varheat.oracles import dn_det, uniform_partition

    c, tt = parabolic
    part = uniform_partition(c, 2000)
    lhs = dn_det(part, 1.0)
    gap2 = abs(lhs - delta_fn(c, tt, 1.0, spec2))
    assert gap2 < term_bound(c, tt, 3, 0.0, 1.0, 1.0) + 5e-4
    # at matching truncation depth the agreement is far tighter
    gap3 = abs(lhs - delta_fn(c, tt, 1.0, spec3))
    assert gap3 < 5e-4


def test_psi_constant_kernel(const1, spec2):
    c, tt = const1
    k, x, y = 2.0, 0.7, 0.3
    val = psi_kernel(c, tt, k, x, y, spec2)
    assert val == pytest.approx(math.sin(k * y) * math.sin(k * (1 - x)), abs=1e-12)


def test_psi_symmetry(parabolic, spec2):
    c, tt = parabolic
    a = psi_kernel(c, tt, 2.0, 0.3, 0.7, spec2)
    b = psi_kernel(c, tt, 2.0, 0.7, 0.3, spec2)
    assert a == pytest.approx(b, abs=1e-14)


def test_psi_cauchy_vs_product(parabolic, spec3):
    c, tt = parabolic
    k, x, y = 2.0, 0.6, 0.25
    prod = psi_kernel(c, tt, k, x, y, spec3, form="product")
    cauchy = psi_kernel(c, tt, k, x, y, spec3, form="cauchy")
    # difference is the sum of cross terms with total order > N
    N = spec3.truncation_N
    bound = sum(
        term_bound(c, tt, n, 0.0, y, k) * term_bound(c, tt, l, x, 1.0, k)
        for n in range(N + 1) for l in range(N + 1) if n + l > N
    )
    assert abs(prod - cauchy) <= bound + 1e-14


def test_regularized_psi_consistency_and_boundedness(parabolic, spec2):
    from varheat.transform import regularized_psi_kernel

    c, tt = parabolic
    k = 2.0 + 1.0j
    reg = regularized_psi_kernel(c, tt, k, 0.7, 0.3, spec2)
    plain = psi_kernel(c, tt, k, 0.7, 0.3, spec2)
    assert reg == pytest.approx(np.exp(1j * k * tt.total) * plain, abs=1e-12)
    # symmetric in (x, y) like the plain kernel
    assert reg == pytest.approx(regularized_psi_kernel(c, tt, k, 0.3, 0.7, spec2),
                                abs=1e-14)
    # stays finite where the plain kernel would overflow
    high = regularized_psi_kernel(c, tt, 300j, 0.7, 0.3, spec2)
    assert np.isfinite(high.real) and np.isfinite(high.imag)


def test_phi_closed_form_constant(const1, spec2):
    c, tt = const1
    v = phi_fn(c, tt, 2.0, 0.3, sine, spec2)
    assert v.real == pytest.approx(PHI_CONST_K2_X03, abs=1e-9)
    assert abs(v.imag) < 1e-14


def test_phi_vanishes_at_endpoints(parabolic, spec2):
    c, tt = parabolic
    assert phi_fn(c, tt, 1.3, 0.0, quadratic, spec2) == 0.0
    assert phi_fn(c, tt, 1.3, 1.0, quadratic, spec2) == 0.0


def test_phi_regularized_consistency(parabolic, spec2):
    c, tt = parabolic
    k = 2.0 + 1.0j
    reg = phi_fn(c, tt, k, 0.4, quadratic, spec2, regularized=True)
    plain = phi_fn(c, tt, k, 0.4, quadratic, spec2)
    assert reg == pytest.approx(np.exp(1j * k * tt.total) * plain, abs=1e-12)


def test_contour_validation():
    with pytest.raises(DomainError):
        Contour(r=0.0)
    with pytest.raises(DomainError):
        Contour(delta=1.0)  # >= pi/4
    with pytest.raises(DomainError):
        Contour(shape="circle")
    cont = default_contour(0.25)
    assert cont.kmax == pytest.approx(12.0)


def test_contour_mirror_symmetry():
    ks, ws = Contour(kmax=6.0).nodes()
    mirrored = -np.conj(ks)
    # the node multiset is symmetric under k -> -conj(k)
    assert np.allclose(np.sort_complex(ks), np.sort_complex(mirrored))


def test_solve_constant_sigma_exact(const1, spec2):
    c, tt = const1
    s = solve(c, tt, sine, 0.5, 0.1, spec2)
    exact = math.exp(-math.pi**2 * 0.1) * math.sin(math.pi * 0.5)
    assert s.value == pytest.approx(exact, abs=1e-6)
    assert s.imag_residual < 1e-8


def test_solve_constant_matches_fourier_all_orders(const1, const2):
    for fixture, sig in ((const1, 1.0), (const2, 2.0)):
        c, tt = fixture
        res = solve_grid(c, tt, quadratic, [0.25, 0.5, 0.8], [0.1, 1.0],
                         SeriesSpec(truncation_N=2), all_orders=True)
        for t, per_order in res.items():
            for n, samples in per_order.items():
                for s in samples:
                    ref = fourier_solution(sig, quadratic, s.x, t, 400)
                    assert s.value == pytest.approx(ref, abs=1e-8), (sig, t, n, s.x)


def test_solve_parabolic_benchmark_point(parabolic, spec2):
    c, tt = parabolic
    s = solve(c, tt, quadratic, 0.5, 1.0, spec2)
    assert s.value == pytest.approx(0.25 * math.exp(-1.0), abs=2e-3)
    assert s.imag_residual < 1e-10


def test_solve_boundary_values_are_zero(parabolic, spec2):
    c, tt = parabolic
    res = solve_grid(c, tt, quadratic, [0.0, 1.0], [0.5], spec2)
    for s in res[0.5]:
        assert s.value == 0.0


def test_solve_realness_residual(parabolic, spec2):
    c, tt = parabolic
    res = solve_grid(c, tt, quadratic, np.linspace(0.1, 0.9, 5), [0.5], spec2)
    for s in res[0.5]:
        assert s.imag_residual <= 1e-8 * max(1.0, abs(s.value))


def test_solve_large_time_decay(parabolic, spec2):
    c, tt = parabolic
    v1 = solve(c, tt, quadratic, 0.5, 1.0, spec2).value
    v5 = solve(c, tt, quadratic, 0.5, 5.0, spec2).value
    lam1 = -1.0006
    assert abs(v5) <= math.exp(lam1 * 4.0) * abs(v1) * 1.1


def test_solve_batched_matches_pointwise_phi(parabolic, spec2):
    # cross-check of the production batched kernel against the direct
    # pointwise quadrature path, through the full contour integral
    from varheat.transform import _phi_batch

    c, tt = parabolic
    cont = default_contour(1.0)
    ks, _ = cont.nodes()
    probe = ks[::97]
    phi = _phi_batch(c, tt, quadratic, probe, [0.35, 0.8], spec2, cont.kmax)
    for i, x in enumerate((0.35, 0.8)):
        for j, k in enumerate(probe):
            direct = phi_fn(c, tt, k, x, quadratic, spec2, regularized=True)
            assert abs(phi[2, i, j] - direct) < 1e-9


def test_solve_input_validation(parabolic, spec2):
    c, tt = parabolic
    with pytest.raises(DomainError):
        solve(c, tt, quadratic, 0.5, -1.0, spec2)
    with pytest.raises(DomainError):
        solve(c, tt, quadratic, 1.5, 1.0, spec2)


def test_denominator_floor_triggers(parabolic, spec2):
    c, tt = parabolic
    tiny_arc = Contour(r=1e-13, kmax=8.0)
    with pytest.raises(DenominatorNearZero):
        solve(c, tt, quadratic, 0.5, 1.0, spec2, contour=tiny_arc)


def test_tail_guard_triggers(parabolic, spec2):
    c, tt = parabolic
    short = Contour(kmax=1.2)
    with pytest.raises(TailTooLarge):
        solve(c, tt, quadratic, 0.5, 0.05, spec2, contour=short)


def test_boundary_omega_contour_is_marginal(const1, spec2):
    # On the sector boundary exp(-k^2 t) stops decaying; the tail guard
    # must refuse the default tolerance but a loose one gives a rough value.
    c, tt = const1
    omega = Contour(shape="boundary_omega", kmax=40.0)
    with pytest.raises(TailTooLarge):
        solve(c, tt, sine, 0.5, 1.0, spec2, contour=omega)
    s = solve(c, tt, sine, 0.5, 1.0, spec2, contour=omega, tail_tol=1.0)
    exact = math.exp(-math.pi**2) * math.sin(math.pi * 0.5)
    assert s.value == pytest.approx(exact, abs=5e-2)
