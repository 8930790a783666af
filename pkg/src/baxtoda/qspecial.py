"""q-Pochhammer symbols, q-Gamma, q-exponentials, Jackson sums and the
double sine function.

Infinite products need |q| < 1.  Unit-circle deformation parameters
(q = exp(2 pi i / kappa)) are never fed to products here: everything living
on the unit circle is expressed through the double sine with periods
(1, kappa).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

from .errors import DomainError, NonConvergence, PoleError
from .numerics import gauss_legendre_grid

_DEFAULT_TOL = 1e-17
_MAX_PRODUCT_TERMS = 2_000_000


@dataclass(frozen=True)
class DeformationParams:
    """Either ``q`` inside the unit disc or ``kappa`` with q = exp(2 pi i / kappa)."""

    q: complex | None = None
    kappa: float | None = None
    p: int | None = None

    def __post_init__(self):
        if (self.q is None) == (self.kappa is None):
            raise DomainError("give exactly one of q and kappa")
        if self.q is not None and not abs(self.q) < 1:
            raise DomainError("product/series mode needs |q| < 1")
        if self.kappa is not None and not self.kappa > 0:
            raise DomainError("kappa must be positive")

    @property
    def on_unit_circle(self) -> bool:
        return self.kappa is not None

    @property
    def omega(self) -> "ModulusPair":
        """Periods (1, kappa) of the double sine carrying the unit-circle data."""
        if self.kappa is None:
            raise DomainError("periods are defined only in unit-circle mode")
        return ModulusPair(1.0, float(self.kappa))


@dataclass(frozen=True)
class ModulusPair:
    omega1: complex
    omega2: complex

    def __post_init__(self):
        if self.omega1 == 0 or self.omega2 == 0:
            raise DomainError("periods must be nonzero")

    @property
    def is_real(self) -> bool:
        w1, w2 = complex(self.omega1), complex(self.omega2)
        return w1.imag == 0 and w2.imag == 0 and w1.real > 0 and w2.real > 0

    @property
    def total(self) -> complex:
        return complex(self.omega1) + complex(self.omega2)

    def swapped(self) -> "ModulusPair":
        return ModulusPair(self.omega2, self.omega1)


# ---------------------------------------------------------------------------
# q-Pochhammer and friends

def product_cutoff(a, q, tol: float = _DEFAULT_TOL) -> int:
    """Number of factors M of (a;q)_inf with |a| |q|^M / (1-|q|) below tol/10."""
    aq, qa = abs(complex(a)), abs(complex(q))
    if not qa < 1:
        raise DomainError("infinite product needs |q| < 1")
    if qa == 0 or aq == 0:
        return 1
    target = 0.1 * tol * (1.0 - qa) / aq
    if target >= 1:
        return 1
    m = int(math.ceil(math.log(target) / math.log(qa)))
    if m > _MAX_PRODUCT_TERMS:
        raise NonConvergence(f"infinite product needs {m} factors")
    return max(m, 1)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def pochhammer_q(a, q, n=math.inf, tol: float = _DEFAULT_TOL):
    """(a;q)_n = prod_{i=0}^{n-1} (1 - a q^i).

    ``n`` may be ``math.inf``.  Finite products are exact for ``int`` or
    ``Fraction`` arguments; infinite ones are truncated from the geometric
    tail bound.
    """
    if n == math.inf:
        if _is_exact(a) and _is_exact(q):
            a, q = float(a), float(q)
        m = product_cutoff(a, q, tol)
        if m <= 1 or complex(q) == 0:
            return complex(1 - complex(a))
        powers = complex(a) * complex(q) ** np.arange(m)
        return complex(np.prod(1.0 - powers))
    if n < 0 or int(n) != n:
        raise DomainError("n must be a non-negative integer or infinity")
    n = int(n)
    if _is_exact(a) and _is_exact(q):
        out = Fraction(1)
        qi = Fraction(1)
        for _ in range(n):
            out *= 1 - a * qi
            qi *= q
        return out
    out = 1.0 + 0j
    qi = 1.0 + 0j
    for _ in range(n):
        out *= 1.0 - a * qi
        qi *= q
    return out


def q_number(n: int, q):
    """[n]_q = (1 - q^n) / (1 - q)."""
    if q == 1:
        return n
    return (1 - q**n) / (1 - q)


def q_factorial(n: int, q):
    """(n)_q! = (q;q)_n."""
    return pochhammer_q(q, q, n)


def _check_gamma_q_poles(t, q, m: int):
    t, q = complex(t), complex(q)
    qm = 1.0 + 0j
    for _ in range(max(m, 1)):
        if abs(1.0 - t * qm) < 1e-15:
            raise PoleError("Gamma_q has a pole where t q^m = 1")
        qm *= q
        if abs(t * qm) < 0.5:
            break


def gamma_q(t, q, tol: float = _DEFAULT_TOL) -> complex:
    """Gamma_q(t) = 1 / (t;q)_inf."""
    if abs(complex(q)) >= 1:
        raise DomainError("gamma_q needs |q| < 1")
    m = product_cutoff(t, q, tol)
    _check_gamma_q_poles(t, q, m)
    return 1.0 / pochhammer_q(t, q, math.inf, tol)


def gamma_q_truncated(t, q, m: int):
    """1 / (t;q)_M, exact for rational t and q.

    With matched truncations the recursion is exact:
    ``gamma_q_truncated(t*q, q, M-1) / gamma_q_truncated(t, q, M) == 1 - t``.
    """
    den = pochhammer_q(t, q, m)
    if den == 0:
        raise PoleError("Gamma_q has a pole where t q^m = 1")
    return 1 / den


def q_exponentials(t, q, form: str = "series", tol: float = 1e-16, max_terms: int = 100_000):
    """Return ``(e_q(t), E_q(t))``.

    e_q(t) = sum t^n/(q;q)_n = 1/(t;q)_inf and
    E_q(t) = sum q^{n(n-1)/2} t^n/(q;q)_n = (-t;q)_inf, so e_q(t) E_q(-t) = 1.
    """
    t, q = complex(t), complex(q)
    if not abs(q) < 1:
        raise DomainError("q-exponentials need |q| < 1")
    if form == "product":
        return 1.0 / pochhammer_q(t, q, math.inf), pochhammer_q(-t, q, math.inf)
    if form != "series":
        raise DomainError(f"unknown form {form!r}")
    if not abs(t) < 1:
        raise NonConvergence("the e_q series needs |t| < 1")
    small_e, big_e = 1.0 + 0j, 1.0 + 0j
    term = 1.0 + 0j  # t^n / (q;q)_n
    qn = 1.0 + 0j    # q^n
    tri = 1.0 + 0j   # q^{n(n-1)/2}
    for n in range(1, max_terms):
        term *= t / (1.0 - qn * q)
        tri *= qn
        qn *= q
        small_e += term
        big_e += tri * term
        bound = abs(term) * abs(t) / ((1.0 - abs(t)) * abs(1.0 - qn * q))
        if bound < tol * abs(small_e):
            return small_e, big_e
    raise NonConvergence("q-exponential series did not converge")


def jackson_integral(f, q, cutoffs: tuple[int, int] = (40, 400)) -> complex:
    """Two-sided truncated Jackson integral (1-q) sum_{j=-J1}^{J2} q^j f(q^j)."""
    q = complex(q)
    j_lo, j_hi = cutoffs
    j = np.arange(-j_lo, j_hi + 1)
    x = q ** j
    return complex((1.0 - q) * np.sum(x * np.asarray(f(x), dtype=complex)))


def jackson_gamma_q(t, q, cutoffs: tuple[int, int] | None = None, tol: float = 1e-15) -> complex:
    """Gamma_q(t) from its Jackson-integral representation.

    Gamma_q(t) = 1/((1-q)(q;q)_inf) * int_0^inf chi_t(z) E_q(-qz) z^{-1} d_q z,
    chi_t(q^j) = t^j.  The Jackson sum is (1-q) sum_j t^j E_q(-q^{j+1}); terms
    with j <= -1 contain the factor 1 - q^0 and vanish identically.
    """
    t, q = complex(t), complex(q)
    if not abs(q) < 1:
        raise DomainError("jackson_gamma_q needs |q| < 1")
    if not abs(t) < 1:
        raise NonConvergence("the Jackson sum needs |t| < 1")
    if cutoffs is None:
        need = 1 if t == 0 else int(math.ceil(math.log(tol * (1 - abs(t))) / math.log(abs(t)))) + 1
        cutoffs = (0 if q == 0 else 20, max(need, 1))
    j_lo, j_hi = cutoffs
    if q == 0:
        j_lo = min(j_lo, 1)  # 0^j is undefined for j < -1
    if t != 0 and abs(t) ** (j_hi + 1) / (1 - abs(t)) > max(tol, 1e-300) * 10:
        raise NonConvergence("Jackson sum tail exceeds tolerance at the cutoff")
    total = 0j
    for j in range(-j_lo, j_hi + 1):
        # E_q(-q^{j+1}) = (q^{j+1}; q)_inf with integer exponents kept exact
        if j + 1 <= 0:
            big_e = 0.0  # factor (1 - q^0)
        elif q == 0:
            big_e = 1.0
        else:
            big_e = pochhammer_q(q ** (j + 1), q, math.inf)
        if big_e == 0:
            continue
        total += (t**j if j else 1.0) * big_e
    jackson = (1.0 - q) * total
    return jackson / ((1.0 - q) * pochhammer_q(q, q, math.inf))


def gamma_q_classical_limit(x: float, epsilon_sequence) -> list[float]:
    """Gamma~_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^{1-x} at q = e^{-eps}.

    Tends to Gamma(x) as eps -> 0.  Evaluated as a sum of log1p-type terms.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    out = []
    for eps in epsilon_sequence:
        if not eps > 0:
            raise DomainError("epsilon must be positive")
        m_max = int(math.ceil(45.0 / eps)) + 10
        if m_max > _MAX_PRODUCT_TERMS:
            raise NonConvergence("epsilon too small for the product truncation")
        m = np.arange(m_max, dtype=float)
        num = np.log(-np.expm1(-eps * (m + 1.0)))
        den = np.log(-np.expm1(-eps * (m + x)))
        log_val = math.fsum(num - den) + (1.0 - x) * math.log(-math.expm1(-eps))
        out.append(math.exp(log_val))
    return out


# ---------------------------------------------------------------------------
# double sine

def b22(z, omega: ModulusPair):
    """Multiple Bernoulli polynomial B_{2,2}(z | omega1, omega2)."""
    w1, w2 = complex(omega.omega1), complex(omega.omega2)
    if isinstance(z, Number) and all(isinstance(w, (int, Fraction)) for w in (omega.omega1, omega.omega2)) \
            and isinstance(z, (int, Fraction)):
        w1, w2 = Fraction(omega.omega1), Fraction(omega.omega2)
    return (z * z - (w1 + w2) * z) / (w1 * w2) + (w1 * w1 + 3 * w1 * w2 + w2 * w2) / (6 * w1 * w2)


def _on_lattice(z: complex, omega: ModulusPair, tol: float = 1e-12) -> bool:
    """z in {-m w1 - n w2} or {w1 + w2 + m w1 + n w2}, m, n >= 0 (real periods)."""
    w1, w2 = float(complex(omega.omega1).real), float(complex(omega.omega2).real)
    if abs(z.imag) > tol:
        return False
    for base, sign in ((0.0, -1.0), (w1 + w2, 1.0)):
        r = sign * (z.real - base)
        if r < -tol:
            continue
        for m in range(int(r / w1) + 2):
            rest = r - m * w1
            if rest < -tol:
                break
            n = round(rest / w2)
            if n >= 0 and abs(rest - n * w2) < tol * max(1.0, abs(z)):
                return True
    return False


_SERIES_CUTOFF = 0.08
# e^{-|Im z| delta} below this many e-folds makes the contour integral negligible
_NEGLIGIBLE_LOG = 45.0


def _sinhc_m1(x):
    x2 = x * x
    return x2 * (1 / 6 + x2 * (1 / 120 + x2 * (1 / 5040 + x2 * (1 / 362880 + x2 / 39916800))))


def _inv_sinhc_m1(x):
    x2 = x * x
    return x2 * (-1 / 6 + x2 * (7 / 360 + x2 * (-31 / 15120 + x2 * (127 / 604800 - x2 * 73 / 3421440))))


def _log_s2_symmetric(z: np.ndarray, w1: float, w2: float) -> np.ndarray:
    """log S_2 for 0 < Re z < w1 + w2 from the symmetrized real-line integral

    int_0^inf [ sinh((z - w/2) t) / (2 sinh(w1 t/2) sinh(w2 t/2)) - (2z - w)/(w1 w2 t) ] dt/t.
    """
    w = w1 + w2
    margin = float(np.min(np.minimum(z.real, w - z.real)))
    upper = 50.0 / margin + 20.0
    lower = 1e-8
    u, wt = gauss_legendre_grid(math.log(lower), math.log(upper), 240, 20)
    t = np.exp(u)
    alpha = z - 0.5 * w
    c = alpha / (0.5 * w1 * w2)
    small = t < _SERIES_CUTOFF / max(1.0, 0.5 * w1, 0.5 * w2, float(np.max(np.abs(alpha))))
    ts, tl = t[small], t[~small]
    bracket = np.empty((z.size, t.size), dtype=complex)
    # (c/t) [ h(alpha t) g(w1 t/2) g(w2 t/2) - 1 ], h = sinh x/x, g = x/sinh x
    hh = _sinhc_m1(np.multiply.outer(alpha, ts))
    g1 = _inv_sinhc_m1(0.5 * w1 * ts)
    g2 = _inv_sinhc_m1(0.5 * w2 * ts)
    gg = g1 + g2 + g1 * g2
    bracket[:, small] = np.multiply.outer(c, 1.0 / ts) * (hh + gg + hh * gg)
    bracket[:, ~small] = (np.sinh(np.multiply.outer(alpha, tl))
                          / (2.0 * np.sinh(0.5 * w1 * tl) * np.sinh(0.5 * w2 * tl))
                          - np.multiply.outer(c, 1.0 / tl))
    val = bracket @ wt  # dt/t = du
    # [0, lower]: bracket ~ c k t; (upper, inf): bracket -> -c/t
    k = (alpha * alpha - 0.25 * (w1 * w1 + w2 * w2)) / 6.0
    return val + c * k * lower - c / upper


def _contour_height(w1: complex, w2: complex) -> float:
    heights = [2.0 * math.pi * w.real / abs(w) ** 2 for w in (w1, w2)]
    if min(heights) <= 0:
        raise DomainError("shifted contour needs Re omega > 0")
    return 0.5 * min(heights)


def _log_mathcal_s_shifted(z: np.ndarray, w1: complex, w2: complex) -> np.ndarray:
    """log S(z|omega) = int over R + i0 of e^{zt} / ((e^{w1 t}-1)(e^{w2 t}-1)) dt/t.

    The line is moved to R + i delta when Im z >= 0 and to R - i delta
    otherwise (picking up -i pi B22(z) from the pole at t = 0), so that
    |e^{zt}| carries the factor e^{-|Im z| delta}.
    """
    w = w1 + w2
    delta = _contour_height(w1, w2)
    if np.any(z.real <= 0) or np.any((w - z).real <= 0):
        raise DomainError("shifted contour needs 0 < Re z < Re(omega1 + omega2)")
    out = np.zeros(z.shape, dtype=complex)
    damp = np.abs(z.imag) * delta
    live = np.flatnonzero(damp < _NEGLIGIBLE_LOG)
    order = live[np.argsort(np.abs(z.imag[live]))]
    for start in range(0, len(order), 256):
        idx = order[start:start + 256]
        zc = z[idx]
        lo = float(np.min(zc.real))
        hi = float(np.min((w - zc).real))
        a, b = -(45.0 / lo + 5.0), 45.0 / hi + 5.0
        h = min(0.5, 8.0 / (1.0 + float(np.max(np.abs(zc.imag)))))
        u, du = gauss_legendre_grid(a, b, int(math.ceil((b - a) / h)), 20)
        for sign in (1.0, -1.0):
            sel = (zc.imag >= 0) if sign > 0 else (zc.imag < 0)
            if not np.any(sel):
                continue
            t = u + 1j * sign * delta
            den = np.expm1(w1 * t) * np.expm1(w2 * t) * t
            vals = np.exp(np.multiply.outer(zc[sel], t) - np.log(den))
            out[idx[sel]] = vals @ du
    lower = z.imag < 0
    if np.any(lower):
        out[lower] -= 1j * math.pi * b22(z[lower], ModulusPair(w1, w2))
    return out


def _as_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr.reshape(-1), arr.shape, arr.ndim == 0


def _log_s2_real_periods(z: np.ndarray, omega: ModulusPair, method: str) -> np.ndarray:
    w1, w2 = float(complex(omega.omega1).real), float(complex(omega.omega2).real)
    for zi in z:
        if _on_lattice(complex(zi), omega):
            raise PoleError(f"double sine has a zero or pole at z = {complex(zi)}")
    # bring Re z into the window [w2/2, w2/2 + w1) using z -> z + w1 steps
    k = np.floor((z.real - 0.5 * w2) / w1).astype(int)
    z0 = z - k * w1
    log0 = np.empty_like(z0)
    # the symmetrized integrand oscillates like e^{i Im z t}; it is used only near the real axis
    sym = np.abs(z0.imag) <= 2.0 if method == "symmetric" else np.zeros(z0.shape, dtype=bool)
    if np.any(sym):
        log0[sym] = _log_s2_symmetric(z0[sym], w1, w2)
    if np.any(~sym):
        log0[~sym] = _log_mathcal_s_shifted(z0[~sym], w1, w2) + 0.5j * math.pi * b22(z0[~sym], omega)
    # S2(z) = 2 sin(pi z / w2) S2(z + w1)
    corr = np.zeros_like(z)
    for j in range(int(np.max(np.abs(k), initial=0))):
        left = k < -j
        right = k > j
        if np.any(left):
            corr[left] += np.log(2.0 * np.sin(math.pi * (z[left] + j * w1) / w2))
        if np.any(right):
            corr[right] -= np.log(2.0 * np.sin(math.pi * (z[right] - (j + 1) * w1) / w2))
    return log0 + corr


def log_double_sine(z, omega: ModulusPair, path: str = "integral"):
    """log S_2(z|omega), elementwise over ``z``.

    ``path="integral"``: symmetrized real-line integral (real positive periods),
    continued outside 0 < Re z < w1 + w2 by S_2(z) = 2 sin(pi z/w2) S_2(z + w1).
    ``path="contour"``: the R + i delta contour form of log S plus i pi B22 / 2.
    ``path="product"``: infinite product formula, needs Im(w1/w2) > 0.
    Only exp of the result is branch independent.
    """
    zf, shape, scalar = _as_array(z)
    if path == "product":
        out = _log_mathcal_s_product(zf, omega) + 0.5j * math.pi * b22(zf, omega)
    elif path in ("integral", "contour"):
        method = "symmetric" if path == "integral" else "shifted"
        if omega.is_real:
            out = _log_s2_real_periods(zf, omega, method)
        elif path == "contour":
            out = _log_mathcal_s_shifted(zf, complex(omega.omega1), complex(omega.omega2)) \
                + 0.5j * math.pi * b22(zf, omega)
        else:
            raise DomainError("the symmetrized integral needs real positive periods")
    else:
        raise DomainError(f"unknown path {path!r}")
    return complex(out[0]) if scalar else out.reshape(shape)


def double_sine(z, omega: ModulusPair, path: str = "integral"):
    """S_2(z|omega) = exp(i pi B22(z)/2) S(z|omega).

    Satisfies S_2(z + w1) = S_2(z) / (2 sin(pi z / w2)) and the same with
    w1 and w2 exchanged.  Zeros at -m w1 - n w2, poles at w1 + w2 + m w1 + n w2.
    """
    return np.exp(log_double_sine(z, omega, path)) if not np.isscalar(z) else cmath.exp(log_double_sine(z, omega, path))


def mathcal_s(z, omega: ModulusPair, path: str = "integral"):
    """S(z|omega) = exp(-i pi B22(z)/2) S_2(z|omega)."""
    logv = log_double_sine(z, omega, path) - 0.5j * math.pi * b22(np.asarray(z, dtype=complex), omega)
    return np.exp(logv) if not np.isscalar(z) else cmath.exp(complex(logv))


def _log_mathcal_s_product(z: np.ndarray, omega: ModulusPair, tol: float = 1e-17) -> np.ndarray:
    """S(z) = prod_{m>=0} (1 - e((z + m w1)/w2)) / prod_{m>=1} (1 - e((z - m w2)/w1))."""
    w1, w2 = complex(omega.omega1), complex(omega.omega2)
    tau = w1 / w2
    if not tau.imag > 0:
        raise DomainError("product formula needs Im(omega1/omega2) > 0")
    r1 = abs(cmath.exp(2j * math.pi * tau))
    r2 = abs(cmath.exp(-2j * math.pi * w2 / w1))
    growth = max(np.max(np.abs(np.exp(2j * math.pi * z / w2))), np.max(np.abs(np.exp(2j * math.pi * z / w1))), 1.0)
    m_max = int(math.ceil(math.log(tol / growth) / math.log(max(r1, r2)))) + 2
    if m_max > _MAX_PRODUCT_TERMS:
        raise NonConvergence("product formula converges too slowly for these periods")
    m = np.arange(m_max)
    num = 1.0 - np.exp(2j * math.pi * np.add.outer(z, m * w1) / w2)
    den = 1.0 - np.exp(2j * math.pi * np.add.outer(z, -(m[1:]) * w2) / w1)
    if np.any(num == 0):
        raise PoleError("double sine vanishes at this point")
    if np.any(den == 0):
        raise PoleError("double sine has a pole at this point")
    return np.sum(np.log(num), axis=1) - np.sum(np.log(den), axis=1)


def fourier_lhs(a, z, omega: ModulusPair, angle: float = 0.3, s_max: float = 80.0) -> complex:
    """int dt S(w1 + w2 - i t - a | omega) exp(2 pi i z t / (w1 w2)) for 0 < Re a < (w1+w2)/2.

    For t -> +inf the integrand decays like exp(-pi t (w1 + w2 - 2a) / (w1 w2)).
    For t -> -inf it tends to the bare exponential, so that half-line is
    rotated by ``angle`` into the half plane where the exponential decays
    (upper for Re z > 0, lower for Re z < 0).  No zero or pole of S is
    crossed by the rotation.
    """
    a, z = complex(a), complex(z)
    w1, w2 = complex(omega.omega1).real, complex(omega.omega2).real
    w = w1 + w2
    prod = w1 * w2
    if not 0 < a.real < 0.5 * w:
        raise DomainError("need 0 < Re a < (w1 + w2)/2")
    if z.real == 0:
        raise DomainError("need Re z != 0 to close the oscillatory half-line")
    rot = cmath.exp(-1j * angle * math.copysign(1.0, z.real))
    decay = math.pi * (w - 2 * a.real) / prod
    right = min(s_max, 45.0 / decay)
    total = 0j
    for lo, hi, phase in ((0.0, right, 1.0), (-s_max, 0.0, rot)):
        v, wt = gauss_legendre_grid(lo, hi, int(math.ceil((hi - lo) * 4)), 20)
        t = v * phase
        x = w - a - 1j * t
        log_s = log_double_sine(x, omega, path="contour") - 0.5j * math.pi * b22(x, omega)
        total += complex(np.exp(log_s + 2j * math.pi * z * t / prod) @ wt) * phase
    return total


def fourier_rhs(a, z, omega: ModulusPair) -> complex:
    """sqrt(w1 w2) exp(-i pi B22(0)/2) S(i z)^{-1} exp(-2 pi z a / (w1 w2))."""
    w1, w2 = complex(omega.omega1).real, complex(omega.omega2).real
    prod = w1 * w2
    a, z = complex(a), complex(z)
    return (math.sqrt(prod) * cmath.exp(-0.5j * math.pi * b22(0.0, omega))
            / mathcal_s(1j * z, omega, path="contour") * cmath.exp(-2.0 * math.pi * z * a / prod))


def dsine_fourier_check(a, z, omega: ModulusPair, angle: float = 0.3, s_max: float = 80.0) -> float:
    """Relative residual |LHS - RHS| / |RHS| of the Fourier identity for S."""
    if not omega.is_real:
        raise DomainError("dsine_fourier_check needs real positive periods")
    lhs = fourier_lhs(a, z, omega, angle, s_max)
    rhs = fourier_rhs(a, z, omega)
    return abs(lhs - rhs) / abs(rhs)
