from __future__ import annotations

import cmath
import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from baxtoda.baxter import (affine_kernel, affine_l_factor, affine_q, affine_relation_residuals,
                            apply_baxter_affine_generic, apply_baxter_critical, apply_baxter_finite,
                            bessel_k_half_integer, critical_ode_residual, critical_recurrence_residual,
                            eigenvalue_affine_generic, eigenvalue_finite, expansion_check, int_two,
                            kernel_critical, kernel_finite, lattice_eigenvalue, limit_study, mellin_bessel,
                            mellin_bessel_check, oper_calibration, orth_gl_rank1, q0_general, q0_v_integral,
                            relation_residuals, separated_phi_closed, separated_phi_finite)
from baxtoda.errors import DomainError, UnsupportedRank
from baxtoda.qspecial import gamma_q
from baxtoda.whittaker import PositionVector, SpectralVector, whittaker_gl2_closed


def mp_eigen(lam, t, gammas):
    out = mpmath.mpc(1)
    for g in gammas:
        z = 1j * lam - 1j * g
        out *= (mpmath.pi * t) ** (-z / 2) * mpmath.gamma(z / 2)
    return complex(out)


# ---------------------------------------------------------------------------
# finite rank kernel and eigenvalue

def test_kernel_values():
    x = PositionVector((0.3,))
    assert abs(kernel_finite(x, x, 0.0) - 2 * math.exp(-math.pi)) < 1e-16
    assert abs(kernel_finite(x, x, 0.0, t=2.0) - 2 * math.exp(-2 * math.pi)) < 1e-16


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-2, 2),
       st.floats(0.3, 3.0))
def test_kernel_depends_on_differences(x1, x2, d1, d2, a, t):
    x = PositionVector((x1, x2))
    y = PositionVector((x1 - d1, x2 - d2))
    base = kernel_finite(x, y, 0.4 - 0.2j, t)
    moved = kernel_finite(x.shifted(a), y.shifted(a), 0.4 - 0.2j, t)
    assert abs(base - moved) <= 1e-12 * abs(base)


def test_kernel_t_scaling_rank_two():
    x, y = PositionVector((0.2, -0.1)), PositionVector((0.5, 0.3))
    lam, t = 0.3 - 0.4j, 1.7
    expo = sum((1j * lam + r) * (a - b) for r, a, b in zip((0.5, -0.5), x.xs, y.xs))
    lit = t * math.pi * (math.exp(2 * (x.xs[0] - y.xs[0])) + math.exp(2 * (y.xs[0] - x.xs[1]))
                         + math.exp(2 * (x.xs[1] - y.xs[1])))
    assert abs(kernel_finite(x, y, lam, t) - 4 * cmath.exp(expo - lit)) < 1e-14
    inv = lit - t * math.pi * math.exp(2 * (y.xs[0] - x.xs[1])) + math.pi / t * math.exp(2 * (y.xs[0] - x.xs[1]))
    assert abs(kernel_finite(x, y, lam, t, inverse_cross=True) - 4 * cmath.exp(expo - inv)) < 1e-14


def test_eigenvalue_examples():
    assert abs(eigenvalue_finite(-2j, 1.0, [0.0]) - 1 / math.pi) < 1e-15
    assert abs(eigenvalue_finite(-2j, 2.0, [0.0]) - 1 / (2 * math.pi)) < 1e-15
    assert abs(eigenvalue_finite(-1j, 1.0, [0.0]) - 1) < 1e-15
    assert abs(eigenvalue_finite(-2j, 1.0, [0.0, 0.0]) - math.pi**-2) < 1e-15


@given(st.floats(-2, 2), st.floats(-3, -0.1), st.floats(0.2, 4), st.lists(st.floats(-1, 1), min_size=1, max_size=3))
def test_eigenvalue_matches_mpmath(re, im, t, gammas):
    lam = complex(re, im)
    ref = mp_eigen(lam, t, gammas)
    assert abs(eigenvalue_finite(lam, t, gammas) - ref) <= 1e-12 * abs(ref)


def test_relation_residuals():
    shift, ode = relation_residuals(-3j, 1.0, [0.4])
    assert shift <= 1e-12
    assert ode <= 1e-6
    for lam, t, g in ((0.5 - 1j, 2.0, [0.1, -0.3]), (1.2 - 0.3j, 0.6, [0.0, 0.5, 0.2])):
        shift, ode = relation_residuals(lam, t, g)
        assert shift <= 1e-12 and ode <= 1e-6


def test_eigenvalue_continuous_towards_real_axis():
    vals = [eigenvalue_finite(0.7 - 1j * e, 1.0, [0.2]) for e in (1e-2, 1e-4, 1e-6)]
    target = eigenvalue_finite(0.7, 1.0, [0.2])
    errs = [abs(v - target) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-5


# ---------------------------------------------------------------------------
# kernel applications

def test_rank_one_anchors():
    r = apply_baxter_finite(-1j, 1.0, SpectralVector((0.0,)), PositionVector((0.3,)))
    assert abs(r.applied - 1.0) < 1e-12
    r = apply_baxter_finite(-2j, 1.0, SpectralVector((0.0,)), PositionVector((-0.4,)))
    assert abs(r.applied - 1 / math.pi) < 1e-12


@given(st.floats(-2, 2), st.floats(0.5, 2.0), st.floats(-1, 1), st.floats(0.5, 2.0), st.floats(-2, 2))
def test_rank_one_eigenvector(re, im, g, t, x):
    r = apply_baxter_finite(complex(re, -im), t, SpectralVector((g,)), PositionVector((x,)))
    assert abs(r.ratio_to_eigenvalue - 1) <= 1e-8


def test_rank_one_ratio_independent_of_x():
    lam, g = 0.4 - 0.8j, 0.3
    ratios = [apply_baxter_finite(lam, 1.0, SpectralVector((g,)), PositionVector((x,))).ratio_to_eigenvalue
              for x in (-1.5, 0.0, 0.7, 2.2)]
    assert max(abs(r - ratios[0]) for r in ratios) <= 1e-8


def test_rank_two_eigenvector():
    t0 = time.perf_counter()
    r = apply_baxter_finite(-2j, 1.0, SpectralVector((0.0, 0.0)), PositionVector((0.0, 0.0)))
    assert abs(r.applied - math.pi**-2 * whittaker_rho_phi((0.0, 0.0), (0.0, 0.0))) < 1e-5 * math.pi**-2
    for lam, g, t, x in ((0.5 - 0.5j, (0.2, -0.3), 1.0, (0.2, -0.1)),
                         (0.8 - 0.7j, (0.6, -0.6), 0.7, (0.3, 0.9))):
        r = apply_baxter_finite(lam, t, SpectralVector(g), PositionVector(x))
        assert abs(r.ratio_to_eigenvalue - 1) <= 1e-5
    assert time.perf_counter() - t0 < 120


def whittaker_rho_phi(g, x):
    return math.exp(0.5 * (x[0] - x[1])) * whittaker_gl2_closed(g, *x)


def test_application_domain_and_rank():
    with pytest.raises(DomainError):
        apply_baxter_finite(0.5 + 0.1j, 1.0, SpectralVector((0.0,)), PositionVector((0.0,)))
    with pytest.raises(UnsupportedRank):
        apply_baxter_finite(-1j, 1.0, SpectralVector((0, 0, 0)), PositionVector((0, 0, 0)))


# ---------------------------------------------------------------------------
# critical level

def test_critical_eigenvalue():
    assert abs(q0_general(1.0, 0.4, 0.4) - 2 * float(mpmath.besselk(0, 2))) < 1e-14
    assert abs(q0_general(1.0, 0.4, 0.4) - 0.2277878) < 1e-7
    assert abs(q0_v_integral(0.4, 0.4) - q0_general(1.0, 0.4, 0.4)) < 1e-13
    for lam, g in ((0.3, -0.2), (1.1, 0.4)):
        ref = 2 * complex(mpmath.besselk(1j * (lam - g), 2))
        assert abs(q0_v_integral(lam, g) - ref) < 1e-12


@pytest.mark.parametrize("lam,g,x", [(0.5, 0.1, 0.0), (1.3, -0.4, 0.7), (-0.6, 0.2, -1.1)])
def test_critical_application(lam, g, x):
    r = apply_baxter_critical(lam, g, x)
    assert abs(r.ratio_to_eigenvalue - 1) <= 1e-7


def test_critical_kernel_translation():
    assert abs(kernel_critical(0.7, 0.2, 0.3) - kernel_critical(1.7, 1.2, 0.3)) < 1e-15


@pytest.mark.parametrize("nu", [0.5, 1 + 0.3j, 2.0])
def test_macdonald_recurrence(nu):
    # nu = i (lam - gamma)
    lam = -1j * nu
    assert critical_recurrence_residual(1.0, lam, 0.0) <= 1e-10


def test_half_integer_recurrence_exact():
    k = [bessel_k_half_integer(n, 2.0) for n in (3, -1, 1)]
    base = math.sqrt(math.pi / 4) * math.exp(-2)
    assert k == pytest.approx([1.5 * base, base, base], rel=1e-15)
    assert abs(k[0] - k[1] - 0.5 * k[2]) < 1e-16
    assert abs(bessel_k_half_integer(5, 1.3) - float(mpmath.besselk(2.5, 1.3))) < 1e-14
    with pytest.raises(DomainError):
        bessel_k_half_integer(2, 1.0)


def test_critical_ode():
    assert critical_ode_residual(0.0, 1.0, 0.0) <= 1e-6
    assert critical_ode_residual(0.3, 0.2, -0.5) <= 1e-6
    assert critical_ode_residual(0.0, 1.0, 0.0, potential_sign=1.0) > 1.0


# ---------------------------------------------------------------------------
# affine generic level

def test_affine_relations():
    r1, r2 = affine_relation_residuals(0.37 + 0.2j, math.sqrt(3))
    assert r1 <= 1e-8 and r2 <= 1e-8


def test_affine_q_at_one_is_exact():
    for k in (0.7, 2.0, 5.0, 32.0):
        assert abs(affine_q(1.0, k) - 1) < 1e-12


def test_affine_q_tends_to_gamma():
    errs = limit_study(1.5, [4, 8, 16, 32])
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3
    assert abs(eigenvalue_affine_generic(0.2 - 1.3j, 0.2, 16.0) - affine_q(1.3, 16.0)) < 1e-14


def test_affine_q_recursion():
    # the kappa -> inf limit of the factor is z
    k, z = 3.0, 0.6 + 0.2j
    ratio = affine_q(z + 1, k) / affine_q(z, k)
    assert abs(ratio - (k / (2 * math.pi)) * 2 * cmath.sin(math.pi * z / k)) < 1e-10


def test_affine_l_factor_product():
    gs = [0.1, -0.3]
    s, k = 0.2 - 1.1j, 2.5
    assert abs(affine_l_factor(s, gs, k) - affine_q(1j * s - 0.1j, k) * affine_q(1j * s + 0.3j, k)) < 1e-14


def test_affine_kernel_finite_and_deterministic():
    a = affine_kernel([0.0, 0.5, -1.0], 1.5)
    b = affine_kernel([0.0, 0.5, -1.0], 1.5)
    assert np.all(np.isfinite(a))
    assert np.array_equal(a, b)


def test_affine_kernel_best_effort(capsys):
    r = apply_baxter_affine_generic(0.4 - 0.1j, 0.4, 1.5)
    with capsys.disabled():
        print(f"\n[best effort] affine kernel ratio {r.ratio:.6g} |ratio-1| = {abs(r.ratio - 1):.3g}")
    assert np.isfinite(abs(r.ratio))


# ---------------------------------------------------------------------------
# lattice

def test_lattice_eigenvalue():
    assert abs(lattice_eigenvalue(0.1, [2, 3], 0.5) - gamma_q(0.05, 0.5) * gamma_q(0.1 / 3, 0.5)) < 1e-15


def test_expansion_rank_one_series():
    err, bound = expansion_check(Fraction(1, 3), [Fraction(1)], Fraction(1, 2), 40)
    assert err <= bound


@pytest.mark.parametrize("n", [5, 10, 20, 40])
def test_expansion_within_bound(n):
    err, bound = expansion_check(Fraction(1, 10), [Fraction(2), Fraction(3)], Fraction(1, 2), n)
    assert err <= 2 * bound
    errf, boundf = expansion_check(0.1, [2.0, 3.0], 0.5, min(n, 10))
    assert errf <= 2 * boundf + 1e-15


def test_expansion_domain():
    with pytest.raises(DomainError):
        expansion_check(Fraction(3), [Fraction(2)], Fraction(1, 2), 5)


# ---------------------------------------------------------------------------
# separated eigenfunction, Mellin-Bessel

@pytest.mark.parametrize("y", [-0.5, 0.0, 0.8])
def test_separated_phi_rank_one(y):
    val = separated_phi_finite(y, [0.3])
    ref = separated_phi_closed(y, [0.3])
    assert abs(val - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("y", [-0.3, 0.4])
def test_separated_phi_rank_two(y):
    val = separated_phi_finite(y, [0.3, -0.2])
    ref = separated_phi_closed(y, [0.3, -0.2])
    assert abs(val - ref) <= 1e-9 * abs(ref)


def test_oper_calibration():
    fit = oper_calibration()
    assert abs(fit.alpha + 2) <= 1e-6 * 2
    assert abs(fit.c + 2 * math.pi) <= 1e-6 * 2 * math.pi
    assert fit.residual <= 1e-6


def test_mellin_bessel():
    val, closed = mellin_bessel(2, 0)
    assert abs(closed - 1) < 1e-15
    assert abs(val - 1) <= 1e-8
    assert mellin_bessel_check(2, 0.5) <= 1e-10
    assert abs(mellin_bessel(2, 0.5)[1] - 2**0 * math.gamma(1.25) * math.gamma(0.75)) < 1e-14
    with pytest.raises(DomainError):
        mellin_bessel(0.4, 0.5)


@given(st.floats(1.2, 4.0), st.floats(-0.9, 0.9), st.floats(-1, 1))
def test_mellin_nu_symmetry(s, nr, ni):
    nu = complex(nr, ni)
    a = mellin_bessel(s, nu)
    b = mellin_bessel(s, -nu)
    assert abs(a[1] - b[1]) <= 1e-13 * abs(a[1])
    assert abs(a[0] - b[0]) <= 1e-9 * abs(a[0])


@pytest.mark.parametrize("s", [-0.5j, 0.4 - 1.0j, -0.7 - 0.3j])
def test_int_two(s):
    val, closed = int_two(s, (0.2, -0.1))
    assert abs(val - closed) <= 1e-8 * abs(closed)


def test_orth_rank_one():
    val, closed = orth_gl_rank1(0.3 + 0.8j, (0.1, -0.4))
    assert abs(val - closed) <= 1e-8 * abs(closed)
