"""Baxter Q-operators of the Toda chains: kernels, eigenvalues, and the
quadratures that apply kernels to Whittaker functions.

Kernel applications need Re(i lambda - i gamma_j) > 0 for absolute
convergence, so they are exercised at Im lambda < 0; the closed-form
eigenvalues are entire in that region away from Gamma poles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, NonConvergence, PoleError, UnsupportedRank
from .gamma_zeta import gamma as cgamma
from .gamma_zeta import log_gamma, macdonald_k
from .numerics import QuadratureSpec, derivative_fd, gauss_legendre_grid, integrate_1d
from .qspecial import ModulusPair, double_sine, gamma_q, log_double_sine, mathcal_s, b22
from .whittaker import PositionVector, SpectralVector, q_character, whittaker_gl2_closed


def _rho(n: int) -> np.ndarray:
    l = n - 1
    return np.array([l / 2 + 1 - j for j in range(1, n + 1)], dtype=float)


# ---------------------------------------------------------------------------
# finite gl_{l+1}

def kernel_finite(x: PositionVector, y: PositionVector, lam, t: float = 1.0,
                  inverse_cross: bool = False) -> complex:
    """Q(x, y | lam, t) = 2^{l+1} exp{ sum_j (i lam + rho_j)(x_j - y_j)
    - t pi sum_{k<=l} (e^{2(x_k - y_k)} + e^{2(y_k - x_{k+1})}) - t pi e^{2(x_{l+1} - y_{l+1})} }.

    With ``inverse_cross`` the e^{2(y_k - x_{k+1})} terms carry pi/t instead
    of t pi.  Both agree at t = 1 and in rank 1; for rank >= 2 and t != 1
    only the inverse-cross kernel has Phi_gamma as an eigenfunction with
    eigenvalue ``eigenvalue_finite(lam, t, gamma)``.
    """
    xs, ys = np.asarray(x.xs), np.asarray(y.xs)
    if xs.shape != ys.shape:
        raise DimensionMismatch("x and y must have the same length")
    n = len(xs)
    rho = _rho(n)
    expo = np.sum((1j * lam + rho) * (xs - ys))
    cross = (1.0 / t if inverse_cross else t) * math.pi * np.sum(np.exp(2.0 * (ys[:-1] - xs[1:])))
    diag = t * math.pi * np.sum(np.exp(2.0 * (xs - ys)))
    return complex(2.0**n * np.exp(expo - diag - cross))


def eigenvalue_finite(lam, t: float, gammas: Sequence) -> complex:
    """prod_j (pi t)^{-z_j/2} Gamma(z_j/2), z_j = i lam - i gamma_j."""
    out = 1.0 + 0j
    for g in gammas:
        z = 1j * lam - 1j * g
        out *= cmath.exp(-0.5 * z * math.log(math.pi * t)) * cgamma(0.5 * z)
    return out


def relation_residuals(lam, t: float, gammas: Sequence, step: float = 1e-4):
    """Relative residuals of the lam -> lam - 2i shift relation and of the t-ODE.

    Q(lam - 2i, t) = prod_j (i lam - i gamma_j)/(2 pi t) Q(lam, t)
    (t d/dt + 1/2 sum_j (i lam - i gamma_j)) Q(lam, t) = 0
    """
    q0 = eigenvalue_finite(lam, t, gammas)
    factor = 1.0 + 0j
    for g in gammas:
        factor *= (1j * lam - 1j * g) / (2.0 * math.pi * t)
    shift = abs(eigenvalue_finite(lam - 2j, t, gammas) - factor * q0) / abs(factor * q0)
    # d/d(log t) is better conditioned than d/dt
    dlog = derivative_fd(lambda u: eigenvalue_finite(lam, t * math.exp(u), gammas), 0.0, order=1, step=step)
    ode = abs(dlog + 0.5 * sum(1j * lam - 1j * g for g in gammas) * q0) / abs(q0)
    return shift, ode


@dataclass(frozen=True)
class ApplyResult:
    applied: complex
    ratio_to_eigenvalue: complex
    error_estimate: float = 0.0


def _gl1_interval(z: complex, t: float) -> tuple[float, float]:
    # integrand e^{z u - t pi e^{2u}}: grows like e^{Re z u} towards -inf
    lo = -(45.0 / z.real + 5.0)
    hi = 0.5 * math.log(50.0 / (math.pi * t)) + 1.0
    return lo, hi


def apply_baxter_finite(lam, t: float, gamma: SpectralVector, x: PositionVector,
                        spec: QuadratureSpec | None = None) -> ApplyResult:
    """int dy Q(x, y | lam, t) Phi_gamma(y) by quadrature, compared with Q(lam, t) Phi_gamma(x).

    The rho-parts of kernel and Phi combine into e^{<rho, x>}, so only
    Psi_gamma(y) enters the integrand.  Rank 1 is a 1-D integral; rank 2 is
    a 2-D integral with Psi from the Bessel closed form, using the
    inverse-cross kernel (see ``kernel_finite``).
    """
    n = gamma.rank
    if len(x.xs) != n:
        raise DimensionMismatch("x must match the rank of gamma")
    zs = [1j * lam - 1j * g for g in gamma.gammas]
    if min(z.real for z in zs) <= 0:
        raise DomainError("kernel application needs Re(i lam - i gamma_j) > 0")
    xs = np.asarray(x.xs, dtype=float)
    rho_x = math.exp(float(np.dot(_rho(n), xs)))
    eig = eigenvalue_finite(lam, t, gamma.gammas)
    if n == 1:
        spec = spec or QuadratureSpec(panels=64, nodes_per_panel=16, rel_tol=1e-13, abs_tol=1e-300)
        g = gamma.gammas[0]
        z = zs[0]
        # u = x - y
        f = lambda u: 2.0 * np.exp(z * u - t * math.pi * np.exp(2.0 * u))
        val, err = integrate_1d(f, spec, interval=_gl1_interval(z, t))
        psi_x = cmath.exp(1j * g * xs[0])
        applied = rho_x * psi_x * val
        return ApplyResult(applied, applied / (eig * rho_x * psi_x), err / abs(val))
    if n == 2:
        return _apply_gl2(lam, t, gamma, xs, zs, rho_x, eig, spec)
    raise UnsupportedRank("kernel application is implemented for rank 1 and 2")


def _trapezoid(a: float, b: float, h: float):
    n = int(math.ceil((b - a) / h))
    return a + h * np.arange(n + 1), h


def _apply_gl2(lam, t, gamma, xs, zs, rho_x, eig, spec):
    """Trapezoidal rule on a common lattice for (y1, y2).

    The integrand is analytic in a strip and decays double-exponentially or
    exponentially, so the trapezoidal rule converges geometrically; with a
    common step the differences y1 - y2 live on one lattice and the Bessel
    factor is evaluated once per difference.
    """
    spec = spec or QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300, max_refinements=3)
    g1, g2 = gamma.gammas
    x1, x2 = xs
    a = 4.5
    zmin = min(z.real for z in zs)
    y1_lo, y1_hi = min(x1, x2) - a, max(x1, x2) + a
    y2_lo, y2_hi = x2 - a, x2 + 45.0 / zmin + 5.0

    def estimate(h):
        # anchor both axes on the same lattice so y1 - y2 is a multiple of h
        k1 = np.arange(math.floor(y1_lo / h), math.ceil(y1_hi / h) + 1)
        k2 = np.arange(math.floor(y2_lo / h), math.ceil(y2_hi / h) + 1)
        y1, y2 = k1 * h, k2 * h
        diff_k = np.arange(k1[0] - k2[-1], k1[-1] - k2[0] + 1)
        kvals = macdonald_k(0.5j * (g1 - g2), 2.0 * math.pi * np.exp(diff_k * h))
        kmat = kvals[(k1[:, None] - k2[None, :]) - diff_k[0]]
        Y1, Y2 = y1[:, None], y2[None, :]
        expo = (1j * lam * (x1 + x2 - Y1 - Y2) + 0.5j * (g1 + g2) * (Y1 + Y2)
                - t * math.pi * (np.exp(2.0 * (x1 - Y1)) + np.exp(2.0 * (x2 - Y2)))
                - math.pi / t * np.exp(2.0 * (Y1 - x2)))
        return complex(4.0 * np.sum(np.exp(expo) * kmat) * h * h)

    h = 0.2
    prev = estimate(h)
    for _ in range(spec.max_refinements):
        h *= 0.5
        cur = estimate(h)
        err = abs(cur - prev)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            break
        prev = cur
    else:
        raise NonConvergence(f"gl2 kernel application did not converge (last difference {err:.3e})")
    psi_x = whittaker_gl2_closed((g1, g2), x1, x2)
    applied = rho_x * cur
    return ApplyResult(applied, applied / (eig * rho_x * psi_x), err / abs(cur))


# ---------------------------------------------------------------------------
# critical level

def kernel_critical(x: float, y: float, lam) -> complex:
    """exp{ i lam (x - y) - e^{x-y} - e^{y-x} }."""
    return cmath.exp(1j * lam * (x - y) - 2.0 * math.cosh(x - y))


def q0_general(t: float, lam, gamma) -> complex:
    """2 K_{i(lam - gamma)}(2t); at t = 1 the critical-level eigenvalue."""
    if not t > 0:
        raise DomainError("t must be positive")
    return 2.0 * macdonald_k(1j * (lam - gamma), 2.0 * t)


def q0_v_integral(lam, gamma, spec: QuadratureSpec | None = None) -> complex:
    """int_0^inf dv/v v^{-i(lam-gamma)} e^{-(v + 1/v)}, integrated in u = log v."""
    spec = spec or QuadratureSpec(panels=32, nodes_per_panel=16, rel_tol=1e-14, abs_tol=1e-300)
    nu = 1j * (lam - gamma)
    val, _ = integrate_1d(lambda u: np.exp(-nu * u - 2.0 * np.cosh(u)), spec, interval=(-6.0, 6.0))
    return val


def apply_baxter_critical(lam, gamma, x: float, spec: QuadratureSpec | None = None) -> ApplyResult:
    """int dy exp{i lam (x-y) - 2 cosh(x-y)} e^{i gamma y} vs 2 K_{i(lam-gamma)}(2) e^{i gamma x}."""
    spec = spec or QuadratureSpec(panels=32, nodes_per_panel=16, rel_tol=1e-14, abs_tol=1e-300)
    val, err = integrate_1d(lambda y: np.exp(1j * lam * (x - y) - 2.0 * np.cosh(x - y) + 1j * gamma * y),
                            spec, interval=(x - 6.0, x + 6.0))
    psi = cmath.exp(1j * gamma * x)
    eig = q0_general(1.0, lam, gamma)
    return ApplyResult(val, val / (eig * psi), err / abs(val))


def critical_recurrence_residual(t: float, lam, gamma) -> float:
    """|Q0(t, lam + i) - Q0(t, lam - i) + (i lam - i gamma)/t Q0(t, lam)| / |Q0(t, lam)|."""
    q = q0_general(t, lam, gamma)
    r = q0_general(t, lam + 1j, gamma) - q0_general(t, lam - 1j, gamma) + (1j * lam - 1j * gamma) / t * q
    return abs(r) / abs(q)


def critical_ode_residual(tau: float, lam, gamma, step: float = 1e-3, potential_sign: float = -1.0) -> float:
    """|(d^2/dtau^2 + potential_sign * 4 e^{2 tau} + (lam - gamma)^2) Q0| / |Q0| at t = e^tau.

    Q0 = 2 K_nu(2 e^tau) solves the equation with ``potential_sign = -1``;
    passing +1 evaluates the other sign for comparison.
    """
    f = lambda s: q0_general(math.exp(s), lam, gamma)
    q = f(tau)
    d2 = derivative_fd(f, tau, order=2, step=step)
    r = d2 + potential_sign * 4.0 * math.exp(2.0 * tau) * q + (lam - gamma) ** 2 * q
    return abs(r) / abs(q)


def bessel_k_half_integer(order2: int, x: float) -> float:
    """K_{n+1/2}(x) for order = order2 / 2 with order2 odd, from the terminating series."""
    if order2 % 2 == 0:
        raise DomainError("order must be a half-integer")
    n = abs(order2) // 2  # K_{-v} = K_v
    total = 0.0
    for k in range(n + 1):
        total += math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) / (2.0 * x) ** k
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


# ---------------------------------------------------------------------------
# affine gl_1, generic level

def _omega(kappa: float) -> ModulusPair:
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    return ModulusPair(1.0, float(kappa))


def affine_q(z, kappa: float, path: str = "integral") -> complex:
    """Q(z) = sqrt(2 pi) (2 pi / kappa)^{1/2 - z} / S_2(z | 1, kappa)."""
    z = complex(z)
    log_s2 = log_double_sine(z, _omega(kappa), path)
    return math.sqrt(2.0 * math.pi) * cmath.exp((0.5 - z) * math.log(2.0 * math.pi / kappa) - log_s2)


def eigenvalue_affine_generic(lam, gamma, kappa: float) -> complex:
    """Q(i lam - i gamma) for periods (1, kappa)."""
    return affine_q(1j * lam - 1j * gamma, kappa)


def affine_relation_residuals(z, kappa: float):
    """Relative residuals of S2^{-1}(z+1) = 2 sin(pi z/kappa) S2^{-1}(z) and S2^{-1}(z+kappa) = 2 sin(pi z) S2^{-1}(z)."""
    om = _omega(kappa)
    inv = lambda w: 1.0 / double_sine(complex(w), om)
    base = inv(z)
    r1 = abs(inv(z + 1) - 2 * cmath.sin(math.pi * z / kappa) * base) / abs(inv(z + 1))
    r2 = abs(inv(z + kappa) - 2 * cmath.sin(math.pi * z) * base) / abs(inv(z + kappa))
    return r1, r2


def affine_l_factor(s, gammas: Sequence, kappa: float) -> complex:
    """prod_j Q(i s - i gamma_j)."""
    out = 1.0 + 0j
    for g in gammas:
        out *= affine_q(1j * s - 1j * g, kappa)
    return out


def limit_study(z, kappa_sequence: Sequence[float]) -> list[float]:
    """|Q(z)/Gamma(z) - 1| for each kappa."""
    g = cgamma(complex(z))
    return [abs(affine_q(z, k) / g - 1.0) for k in kappa_sequence]


@dataclass(frozen=True)
class AffineKernelResult:
    kernel_value: complex
    applied: complex
    ratio: complex


_RAY_ANGLE = math.pi / 8


def _affine_contour(kappa: float, eps: float, left: float, right: float, density: float = 6.0):
    """Nodes, weights and h(rho) = e^{rho(1+kappa)} / S(-i rho kappa / 2 pi) on the rho-contour.

    The contour runs along R - i eps for Re rho < 0 and then along the ray
    -i eps + s e^{-i theta}.  The poles of 1/S(-i rho kappa/2 pi) lie on the
    negative imaginary rho-axis, so the rotation crosses none of them; on the
    ray the quadratic phase of 1/S turns into Gaussian decay, which removes
    the cancellation of the horizontal contour at large Re rho.
    """
    om = _omega(kappa)
    r, wr = gauss_legendre_grid(-left, 0.0, max(4, int(math.ceil(left * density))), 16)
    sr, ws = gauss_legendre_grid(0.0, right, max(4, int(math.ceil(right * density))), 16)
    ray = cmath.exp(-1j * _RAY_ANGLE)
    rho = np.concatenate([r - 1j * eps, -1j * eps + sr * ray])
    w = np.concatenate([wr.astype(complex), ws * ray])
    arg = -1j * rho * kappa / (2.0 * math.pi)
    log_s = log_double_sine(arg, om, path="contour") - 0.5j * math.pi * b22(arg, om)
    h = np.exp(rho * (1.0 + kappa) - log_s)
    return rho, w, h


def _affine_shift(kappa: float) -> float:
    return math.log(2.0 * math.pi / kappa) - 0.5 * math.pi * (1.0 + kappa) / kappa


def affine_kernel(delta, kappa: float, eps: float = 0.1):
    """The kernel as a function of delta = x - y, by quadrature over the rho-contour.

    2 pi sqrt(kappa) int drho exp{-kappa/(2 pi) (c - delta - rho)^2} e^{rho(1+kappa)} / S(-i rho kappa/(2 pi)),
    c = log(2 pi / kappa) - pi (1 + kappa) / (2 kappa).
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    c = _affine_shift(kappa)
    span = float(np.max(np.abs(delta))) + abs(c) + math.sqrt(2.0 * math.pi * 50.0 / kappa)
    rho, w, h = _affine_contour(kappa, eps, span + 5.0, 1.5 * span + 5.0)
    gauss = np.exp(-kappa / (2.0 * math.pi) * (c - delta[:, None] - rho[None, :]) ** 2)
    return 2.0 * math.pi * math.sqrt(kappa) * (gauss @ (w * h))


def apply_baxter_affine_generic(lam, gamma, kappa: float, delta: float = 0.0, eps: float = 0.1,
                                half_width: float = 30.0) -> AffineKernelResult:
    """Apply the kernel, with the phase e^{i lam (x - y)}, to e^{i gamma y}.

    Returns the kernel at ``delta``, the quadrature value of
    int d delta K(delta) e^{i (lam - gamma) delta}, and its ratio to Q(i lam - i gamma).
    """
    d, wd = gauss_legendre_grid(-half_width, half_width, int(4 * half_width), 16)
    kern = affine_kernel(d, kappa, eps)
    applied = complex(np.sum(wd * kern * np.exp(1j * (lam - gamma) * d)))
    kval = complex(affine_kernel([delta], kappa, eps)[0])
    expected = eigenvalue_affine_generic(lam, gamma, kappa)
    return AffineKernelResult(kval, applied, applied / expected)


# ---------------------------------------------------------------------------
# lattice

def lattice_eigenvalue(t, ts: Sequence, q) -> complex:
    """prod_i Gamma_q(t / t_i)."""
    out = 1.0 + 0j
    for ti in ts:
        out *= gamma_q(complex(t) / complex(ti), q)
    return out


def _gamma_q_decimal(a: Fraction, q: Fraction, digits: int) -> Decimal:
    """1/(a; q)_inf for rational 0 <= q < 1, |a| < 1, to ``digits`` digits."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        qd = Decimal(q.numerator) / Decimal(q.denominator)
        term = Decimal(a.numerator) / Decimal(a.denominator)
        prod = Decimal(1)
        tiny = Decimal(10) ** (-(digits + 5))
        while abs(term) > tiny:
            prod *= 1 - term
            term *= qd
        return 1 / prod


def expansion_check(t, ts: Sequence, q, n_max: int, digits: int = 80):
    """(|prod Gamma_q(t/t_i) - sum_{n<=N} t^n chi_n|, tail bound).

    Bound: C(N+1+l, l) x^{N+1} / ((1-x)^{l+1} (|q|;|q|)_inf^{l+1}), x = |t| max |1/t_i|.
    With all-rational input the partial sum is exact and the product is
    evaluated to ``digits`` decimal digits, so the error resolves bounds far
    below double precision; otherwise both are floating point.
    """
    from .qspecial import pochhammer_q

    ts = list(ts)
    l = len(ts) - 1
    x = abs(complex(t)) * max(abs(1 / complex(ti)) for ti in ts)
    if not x < 1:
        raise DomainError("expansion needs |t / t_i| < 1")
    qabs = abs(complex(q))
    pinf = pochhammer_q(qabs, qabs, math.inf).real if qabs > 0 else 1.0
    bound = math.comb(n_max + 1 + l, l) * x ** (n_max + 1) / ((1 - x) ** (l + 1) * pinf ** (l + 1))
    rational = all(isinstance(v, (int, Fraction)) for v in ts + [t, q])
    if rational and 0 <= q < 1:
        t, q = Fraction(t), Fraction(q)
        ts = [Fraction(v) for v in ts]
        partial = sum(t**n * q_character(n, ts, q, "exact") for n in range(n_max + 1))
        with localcontext() as ctx:
            ctx.prec = digits + 10
            value = Decimal(1)
            for ti in ts:
                value *= _gamma_q_decimal(t / ti, q, digits)
            err = abs(value - Decimal(partial.numerator) / Decimal(partial.denominator))
        return float(err), bound
    partial = sum(complex(t) ** n * complex(q_character(n, ts, q, "float")) for n in range(n_max + 1))
    return abs(lattice_eigenvalue(t, ts, q) - partial), bound


# ---------------------------------------------------------------------------
# separated eigenfunction and Mellin-Bessel

def separated_phi_finite(y: float, gammas: Sequence, spec: QuadratureSpec | None = None) -> complex:
    """phi(y) = int d lam e^{i lam y} prod_j pi^{-z_j/2} Gamma(z_j/2), z_j = i lam - i gamma_j.

    The lam-line is moved to Im lam = -2 sigma with sigma at the saddle of the
    Gamma/power product, so the integrand stays O(result) along the contour.
    """
    gammas = list(gammas)
    n = len(gammas)
    if n not in (1, 2):
        raise UnsupportedRank("separated eigenfunction implemented for rank 1 and 2")
    big_x = math.pi * math.exp(-2.0 * y / n)
    sigma = max(big_x, 0.25)
    reach = 2.0 * (60.0 / math.pi + sigma + 5.0) + 2.0 * max(abs(complex(g)) for g in gammas)
    spec = spec or QuadratureSpec(panels=int(math.ceil(reach)), nodes_per_panel=16,
                                  rel_tol=1e-13, abs_tol=1e-300)

    def f(lr):
        lam = lr - 2j * sigma
        logv = 1j * lam * y
        for g in gammas:
            z = 1j * lam - 1j * g
            logv = logv - 0.5 * z * math.log(math.pi) + log_gamma(0.5 * z)
        return np.exp(logv)

    val, _ = integrate_1d(f, spec, interval=(-reach, reach))
    return val


def separated_phi_closed(y: float, gammas: Sequence) -> complex:
    """Closed forms: 4 pi e^{i gamma y} exp(-pi e^{-2y}) (rank 1);
    8 pi e^{i (g1+g2) y/2} K_{i(g1-g2)/2}(2 pi e^{-y}) (rank 2)."""
    gammas = list(gammas)
    if len(gammas) == 1:
        return 4.0 * math.pi * cmath.exp(1j * gammas[0] * y - math.pi * math.exp(-2.0 * y))
    if len(gammas) == 2:
        g1, g2 = gammas
        return 8.0 * math.pi * cmath.exp(0.5j * (g1 + g2) * y) * macdonald_k(0.5j * (g1 - g2), 2.0 * math.pi * math.exp(-y))
    raise UnsupportedRank("closed form known for rank 1 and 2")


@dataclass(frozen=True)
class OperFit:
    alpha: float
    c: complex
    residual: float


def oper_calibration(gamma: float = 0.3, ys: Sequence[float] | None = None, step: float = 2e-4) -> OperFit:
    """Fit (iγ - d/dy) phi = c e^{alpha y} phi on rank-1 quadrature values of phi.

    alpha and log|c| come from a linear least-squares fit of log|R(y)|,
    R = (iγ - d/dy) phi / phi; the sign/phase of c from the mean phase of R.
    The residual is max_y |R(y) - c e^{alpha y}| / |c e^{alpha y}|.
    """
    if ys is None:
        ys = np.linspace(-1.0, 1.0, 9)
    ys = np.asarray(ys, dtype=float)
    ratios = []
    for y in ys:
        phi = separated_phi_finite(y, [gamma])
        d1 = derivative_fd(lambda s: separated_phi_finite(s, [gamma]), float(y), order=1, step=step)
        ratios.append((1j * gamma * phi - d1) / phi)
    ratios = np.array(ratios)
    slope, intercept = np.polyfit(ys, np.log(np.abs(ratios)), 1)
    phase = np.angle(np.mean(ratios / np.abs(ratios)))
    c = math.exp(intercept) * cmath.exp(1j * phase)
    model = c * np.exp(slope * ys)
    residual = float(np.max(np.abs(ratios - model) / np.abs(model)))
    c = c.real if abs(c.imag) < 1e-12 * abs(c) else c
    return OperFit(float(slope), c, residual)


def mellin_bessel(s, nu, spec: QuadratureSpec | None = None):
    """(quadrature, closed form) for int_0^inf t^{s-1} K_nu(t) dt = 2^{s-2} Gamma((s+nu)/2) Gamma((s-nu)/2)."""
    s, nu = complex(s), complex(nu)
    gap = s.real - abs(nu.real)
    if gap <= 0:
        raise DomainError("need Re s > |Re nu|")
    spec = spec or QuadratureSpec(panels=64, nodes_per_panel=16, rel_tol=1e-13, abs_tol=1e-300)
    lo, hi = -(45.0 / gap + 5.0), math.log(80.0)
    val, _ = integrate_1d(lambda u: np.exp(s * u) * macdonald_k(nu, np.exp(u)), spec, interval=(lo, hi))
    closed = 2.0 ** (s - 2.0) * cgamma(0.5 * (s + nu)) * cgamma(0.5 * (s - nu))
    return val, closed


def mellin_bessel_check(s, nu, spec: QuadratureSpec | None = None) -> float:
    """Relative residual of the Mellin transform of K_nu."""
    val, closed = mellin_bessel(s, nu, spec)
    return abs(val - closed) / abs(closed)


def int_two(s, gammas: Sequence, spec: QuadratureSpec | None = None):
    """(quadrature, closed form) for int dx e^{i s x} Psi_{g1,g2}(x, 0), Im s < 0.

    Closed form pi^{-i(s + gbar)} / 4 * Gamma(i(s+g1)/2) Gamma(i(s+g2)/2), gbar = (g1+g2)/2;
    relative to the bare Gamma product this carries the s-dependent factor
    pi^{-i(s+gbar)}/4 together with the halved arguments.
    """
    g1, g2 = gammas
    s = complex(s)
    sigma = 1j * (s + 0.5 * (g1 + g2))
    nu = 0.5j * (g1 - g2)
    gap = sigma.real - abs(nu.real)
    if gap <= 0:
        raise DomainError("need Im s < 0 (relative to Im of the gammas)")
    spec = spec or QuadratureSpec(panels=64, nodes_per_panel=16, rel_tol=1e-13, abs_tol=1e-300)
    lo, hi = -(45.0 / gap + 5.0), math.log(80.0 / (2.0 * math.pi))
    zero = np.zeros(1)
    val, _ = integrate_1d(lambda x: np.exp(1j * s * x) * whittaker_gl2_closed((g1, g2), x, np.zeros_like(x)),
                          spec, interval=(lo, hi))
    closed = cmath.exp(-sigma * math.log(math.pi)) / 4.0 * cgamma(0.5j * (s + g1)) * cgamma(0.5j * (s + g2))
    return val, closed


def orth_gl_rank1(gamma, lams: Sequence, spec: QuadratureSpec | None = None):
    """(quadrature, closed form) for int dx e^{-i gamma x} Psi_{lam1,lam2}(x, 0).

    Closed form pi^{i gamma - i lbar} / 4 * prod_j Gamma(i(lam_j - gamma)/2).
    """
    return int_two(-gamma, lams, spec)
