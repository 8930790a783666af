"""Gamma function, its integral representations, Hurwitz zeta and the
zeta-regularized determinant of ``lambda + x d/dx``.

Also home of the Macdonald function K_nu (modified Bessel function of the
second kind, complex order), used by the Whittaker and Baxter modules.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, PoleError
from .numerics import QuadratureSpec, gauss_legendre_grid, integrate_1d

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
EULER_GAMMA = 0.57721566490153286061

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _check_poles(z: np.ndarray):
    near = np.abs(z - np.round(z.real)) < 1e-14 * np.maximum(1.0, np.abs(z))
    if np.any(near & (np.round(z.real) <= 0)):
        raise PoleError("Gamma has a pole at non-positive integers")


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2; analytic branch of log Gamma there
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return LOG_SQRT_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z):
    """log Gamma(z).

    For Re z >= 1/2 this is the analytic continuation of the real log Gamma
    (principal logs throughout).  For Re z < 1/2 it comes from the reflection
    formula and is only guaranteed modulo 2*pi*i.
    """
    arr, scalar = _as_complex_array(z)
    _check_poles(arr)
    out = np.empty_like(arr)
    right = arr.real >= 0.5
    out[right] = _lanczos_log(arr[right])
    left = ~right
    if np.any(left):
        zl = arr[left]
        out[left] = math.log(math.pi) - np.log(np.sin(math.pi * zl)) - _lanczos_log(1.0 - zl)
    return complex(out) if scalar else out


def gamma(z):
    """Complex Gamma function (Lanczos, g=7, with reflection for Re z < 1/2).

    Accepts scalars or arrays.  Raises ``PoleError`` at non-positive integers.
    Real arguments use the correctly rounded ``math.gamma``.
    """
    arr, scalar = _as_complex_array(z)
    _check_poles(arr)
    out = np.empty_like(arr)
    real = (arr.imag == 0) & (arr.real < 171.0)
    if np.any(real):
        out[real] = [math.gamma(v) for v in arr.real[real]]
    right = (arr.real >= 0.5) & ~real
    out[right] = np.exp(_lanczos_log(arr[right]))
    left = ~right & ~real
    if np.any(left):
        zl = arr[left]
        out[left] = math.pi / (np.sin(math.pi * zl) * np.exp(_lanczos_log(1.0 - zl)))
    return complex(out) if scalar else out


# ---------------------------------------------------------------------------
# integral representations of log Gamma

def _weil_integrand(z):
    def f(t):
        em1 = np.expm1(-t)
        return ((z - 1.0) * np.exp(-t) + (np.expm1(-z * t) - em1) / (-em1)) / t
    return f


def _binet_integrand(z):
    def f(t):
        small = t < 0.25
        ts = np.where(small, t, 1.0)
        tl = np.where(small, 1.0, t)
        # 1/2 - 1/t + 1/(e^t - 1) = t/12 - t^3/720 + t^5/30240 - t^7/1209600 + ...
        series = ts / 12.0 - ts**3 / 720.0 + ts**5 / 30240.0 - ts**7 / 1209600.0 + ts**9 / 47900160.0
        direct = 0.5 - 1.0 / tl + np.exp(-tl) / -np.expm1(-tl)
        bracket = np.where(small, series, direct)
        return bracket * np.exp(-z * t) / t
    return f


def log_gamma_rep(z, rep: str = "weil", spec: QuadratureSpec | None = None) -> complex:
    """log Gamma(z) by quadrature of an integral representation.

    ``weil``:  int_0^inf dt/t [ (z-1) e^{-t} + (e^{-zt} - e^{-t}) / (1 - e^{-t}) ]
    ``binet``: (z-1/2) log z - z + log sqrt(2 pi)
               + int_0^inf (1/2 - 1/t + 1/(e^t-1)) e^{-zt} dt/t
    """
    z = complex(z)
    if z.real <= 0:
        raise DomainError("integral representations need Re z > 0")
    spec = spec or QuadratureSpec(panels=32, nodes_per_panel=16, rel_tol=1e-13, abs_tol=1e-14)
    upper = 40.0 / min(1.0, z.real) + 10.0
    if rep == "weil":
        val, _ = integrate_1d(_weil_integrand(z), spec, interval=(0.0, upper))
        return val
    if rep == "binet":
        val, _ = integrate_1d(_binet_integrand(z), spec, interval=(0.0, upper))
        return (z - 0.5) * cmath.log(z) - z + LOG_SQRT_2PI + val
    raise DomainError(f"unknown representation {rep!r}")


# ---------------------------------------------------------------------------
# Hurwitz zeta

@lru_cache(maxsize=None)
def _bernoulli_even(m: int) -> tuple[Fraction, ...]:
    """B_{2j}/(2j)! for j = 1..m, from the exact Akiyama-Tanigawa recurrence."""
    n_max = 2 * m
    a = [Fraction(0)] * (n_max + 1)
    bern = []
    for n in range(n_max + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])
    return tuple(bern[2 * j] / math.factorial(2 * j) for j in range(1, m + 1))


_EM_TERMS = 15


def _hurwitz_em(s, a, n_direct: int, log, exp, coeffs, one):
    """Euler-Maclaurin sum in the arithmetic of ``one``.

    Returns (zeta(s, a), d/ds zeta(s, a), sum of |direct terms|); the last
    measures the cancellation in the result.
    """
    total = 0 * one
    dtotal = 0 * one
    scale = 0.0
    for k in range(n_direct):
        lk = log(k + a)
        term = exp(-s * lk)
        total += term
        dtotal -= lk * term
        scale += abs(term)
    big = n_direct + a
    lb = log(big)
    pw = exp(-s * lb)  # big^{-s}
    # integral tail and endpoint correction
    total += big * pw / (s - 1) + pw / 2
    dtotal += big * pw * (-lb / (s - 1) - 1 / (s - 1) ** 2) - lb * pw / 2
    # Bernoulli corrections: B_{2j}/(2j)! (s)_{2j-1} big^{-s-2j+1}
    poch, dpoch = one, 0 * one
    power = pw / big  # big^{-s-1}
    for j, c in enumerate(coeffs, start=1):
        # extend rising factorial to (s)_{2j-1}
        lo = 0 if j == 1 else 2 * j - 3
        for i in range(lo, 2 * j - 1):
            dpoch = dpoch * (s + i) + poch
            poch = poch * (s + i)
        total += c * poch * power
        dtotal += c * power * (dpoch - lb * poch)
        power /= big * big
    return total, dtotal, float(scale)


def hurwitz_zeta(s, a, derivative: bool = False) -> complex:
    """Hurwitz zeta(s, a) = sum_{k>=0} (k+a)^{-s} by Euler-Maclaurin.

    Powers use principal logarithms.  With ``derivative=True`` returns
    d/ds zeta(s, a).  Raises ``PoleError`` at s = 1 or when a is a
    non-positive integer.

    The direct terms can cancel heavily: for Re s < 0 they grow like
    k^{-Re s} while zeta stays of order Gamma(1-s)/(2 pi)^{1-s}, and complex
    a with large Im s gives similar losses.  When the sum of |terms|
    exceeds |zeta| by more than 10^4 (always for Re s < 0) the same sum is
    rerun in multiprecision arithmetic with guard digits for the
    measured cancellation.
    """
    s = complex(s)
    a = complex(a)
    if s == 1:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if a.imag == 0 and a.real <= 0 and a.real == round(a.real):
        raise PoleError("a must not be a non-positive integer")
    n_direct = max(0, int(math.ceil(abs(s) + 30.0 - a.real)))
    coeffs = _bernoulli_even(_EM_TERMS)
    total, dtotal, scale = _hurwitz_em(s, a, n_direct, cmath.log, cmath.exp, [float(c) for c in coeffs], 1.0 + 0j)
    value = dtotal if derivative else total
    if s.real < 0 or not scale <= 1e4 * abs(value):
        lost = max((1.0 - s.real) * math.log10(n_direct + abs(a) + 1.0),
                   math.log10(scale / abs(value)) if value != 0 and math.isfinite(scale) else 0.0)
        with mpmath.workdps(30 + int(math.ceil(lost))):
            mp = _hurwitz_em(mpmath.mpc(s), mpmath.mpc(a), n_direct, mpmath.log, mpmath.exp,
                             [mpmath.mpf(c.numerator) / c.denominator for c in coeffs], mpmath.mpc(1))
            value = complex(mp[1] if derivative else mp[0])
    return value


@dataclass(frozen=True)
class RegDetResult:
    value: complex
    zeta_prime_at_zero: complex


# Zeta regularization gives [det_reg(lambda + x d/dx)]^{-1} = Gamma(lambda) / sqrt(2 pi).
DET_REG_SCHEME_CONSTANT = math.sqrt(2.0 * math.pi)


def det_reg_shifted(lam) -> RegDetResult:
    """Zeta-regularized determinant of ``lam + x d/dx`` (spectrum lam + n, n >= 0)."""
    zp = hurwitz_zeta(0.0, lam, derivative=True)
    return RegDetResult(value=cmath.exp(-zp), zeta_prime_at_zero=zp)


def trace_Kt(t: float, gamma_weight) -> complex:
    """Tr K_t = e^{-t gamma} / (1 - e^{-t}) for the weighted scaling operator."""
    if not t > 0:
        raise DomainError("trace_Kt needs t > 0")
    return complex(cmath.exp(-t * complex(gamma_weight)) / -math.expm1(-t))


def trace_counterterms(lam, eps: float) -> complex:
    """Singular part R(eps) = 1/eps + (lam - 1/2) log eps of int_eps^inf dt/t Tr K_t."""
    return 1.0 / eps + (complex(lam) - 0.5) * math.log(eps)


def regularized_trace_log(lam, eps: float = 1e-7, spec: QuadratureSpec | None = None) -> complex:
    """int_eps^inf (dt/t) Tr K_t(weight lam) - R(eps).

    As eps -> 0 this tends to log Gamma(lam) - log sqrt(2 pi) + EULER_GAMMA (lam - 1/2);
    the O(eps) remainder is B_2(1-lam)/2 * eps.  The integral is done in
    u = log t so the 1/t^2 singularity is resolved.
    """
    lam = complex(lam)
    if lam.real <= 0:
        raise DomainError("need Re lam > 0")
    spec = spec or QuadratureSpec(panels=64, nodes_per_panel=16, rel_tol=1e-14, abs_tol=1e-12)
    upper = math.log(45.0 / min(1.0, lam.real) + 10.0)

    def f(u):
        t = np.exp(u)
        return np.exp(-lam * t) / -np.expm1(-t)

    val, _ = integrate_1d(f, spec, interval=(math.log(eps), upper))
    return val - trace_counterterms(lam, eps)


def scheme_polynomial(lam) -> complex:
    """Difference between the cutoff-regularized trace and log Gamma(lam)."""
    return -LOG_SQRT_2PI + EULER_GAMMA * (complex(lam) - 0.5)


# ---------------------------------------------------------------------------
# non-Archimedean L-factor

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(math.isqrt(p)) + 1))


@dataclass(frozen=True)
class NonArchParams:
    p: int
    s: complex
    n: int = 0

    def __post_init__(self):
        if not _is_prime(int(self.p)):
            raise DomainError(f"{self.p} is not prime")


def l_factor_from_x(x, n: int):
    """L_p as a function of x = p^{-s}: x^n / (1 - x).  Exact for Fraction input."""
    if x == 1:
        raise PoleError("L_p has a pole where p^{-s} = 1")
    return x**n / (1 - x)


def l_factor_nonarch(params: NonArchParams) -> complex:
    """L_p(s, n) = int_{p^n Z_p} |x|^s dmu_p = p^{-ns} / (1 - p^{-s})."""
    x = cmath.exp(-complex(params.s) * math.log(params.p))
    if abs(x - 1) < 1e-15:
        raise PoleError("L_p has a pole where p^{-s} = 1")
    return complex(l_factor_from_x(x, params.n))


# ---------------------------------------------------------------------------
# Macdonald function

def macdonald_k(nu, x, panels_per_unit: float = 2.0, nodes: int = 16):
    """K_nu(x) = int_0^inf exp(-x cosh s) cosh(nu s) ds for complex nu, x > 0.

    Vectorized over ``x``.  Composite Gauss-Legendre on [0, S] where S is
    chosen so that the integrand is below ~e^{-40} relative to its peak.
    """
    nu = complex(nu)
    xs, scalar = _as_complex_array(x)
    xr = xs.real
    if np.any(xs.imag != 0) or np.any(xr <= 0):
        raise DomainError("macdonald_k needs real x > 0")
    grow = abs(nu.real)
    flat = xr.ravel()
    s_max = np.arccosh(1.0 + 45.0 / flat)
    for _ in range(3):
        s_max = np.arccosh(1.0 + (45.0 + grow * s_max) / flat)
    out = np.empty(flat.shape, dtype=complex)
    # bucket by window length to avoid integrating long empty tails
    order = np.argsort(s_max)
    chunk = 1024
    for start in range(0, len(order), chunk):
        idx = order[start:start + chunk]
        top = float(s_max[idx].max()) + 1.0
        panels = max(2, int(math.ceil(top * panels_per_unit)))
        s, w = gauss_legendre_grid(0.0, top, panels, nodes)
        vals = np.exp(-flat[idx, None] * np.cosh(s)[None, :]) * np.cosh(nu * s)[None, :]
        out[idx] = vals @ w
    out = out.reshape(xr.shape)
    return complex(out) if scalar else out
