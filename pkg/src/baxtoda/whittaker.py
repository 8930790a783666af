"""Whittaker functions of the open, affine and lattice Toda chains.

Finite rank uses the Givental integral

    Psi(x) = int prod_{k<=l, i<=k} dx_{k,i} exp F(x),
    F = i sum_k gamma_k (sum_i x_{k,i} - sum_i x_{k-1,i})
        - pi sum_{k=1}^{l} sum_{i=1}^{k} (e^{2(x_{k+1,i} - x_{k,i})} + e^{2(x_{k,i} - x_{k+1,i+1})}),

with the top row x_{l+1,i} = x_i.  In these coordinates the quadratic
Hamiltonian is H2 = -1/2 sum d^2/dx_i^2 + 4 pi^2 sum e^{2(x_i - x_{i+1})} with
eigenvalue sum gamma_i^2 / 2.  The substitution x_i = x'_i/2 + (i-1) log pi,
gamma = 2 gamma' turns it into 4 * (-1/2 sum d^2/dx'^2 + sum e^{x'_i - x'_{i+1}}),
whose eigenvalue is sum gamma'^2 / 2; see ``to_exponential_convention``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, PoleError, UnsupportedRank
from .gamma_zeta import macdonald_k
from .numerics import QuadratureSpec, derivative_fd, integrate_1d, integrate_nd


@dataclass(frozen=True)
class SpectralVector:
    """Spectral data gamma_1..gamma_{l+1}, the Q-operator parameter lambda and rho."""

    gammas: tuple
    lam: complex = 0.0
    sl: bool = False

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(complex(g) if isinstance(g, complex) else g for g in self.gammas))
        if len(self.gammas) < 1:
            raise DomainError("need at least one spectral parameter")
        if self.sl and abs(sum(complex(g) for g in self.gammas)) > 1e-12:
            raise DomainError("sl restriction needs sum(gammas) = 0")

    @property
    def rank(self) -> int:
        return len(self.gammas)

    @property
    def rho(self) -> np.ndarray:
        l = self.rank - 1
        return np.array([l / 2 + 1 - j for j in range(1, l + 2)], dtype=float)


@dataclass(frozen=True)
class PositionVector:
    xs: tuple

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))

    def shifted(self, a: float) -> "PositionVector":
        return PositionVector(tuple(x + a for x in self.xs))


@dataclass(frozen=True)
class AffineParams:
    kappa: float
    mu: complex = 0.0
    t0: float = 0.0
    t_plus: float = 0.0
    t_minus: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")

    @property
    def log_q(self) -> complex:
        return 2j * math.pi / self.kappa

    @property
    def log_q_dual(self) -> complex:
        return 2j * math.pi * self.kappa


# ---------------------------------------------------------------------------
# finite rank

def _check_dims(gamma: SpectralVector, x: PositionVector):
    if len(x.xs) != gamma.rank:
        raise DimensionMismatch(f"{len(x.xs)} positions for rank {gamma.rank}")
    if gamma.rank > 3:
        raise UnsupportedRank("Givental integrals are implemented for rank <= 3")


def givental_exponent(gammas: Sequence, top: Sequence, tower: Sequence[Sequence]):
    """F for the tower rows ``tower[k-1] = (x_{k,1}, ..., x_{k,k})``, k = 1..l.

    Entries may be broadcastable numpy arrays.
    """
    l = len(top) - 1
    rows = list(tower) + [list(top)]
    phase = 0
    for k in range(1, l + 2):
        s = sum(rows[k - 1])
        if k > 1:
            s = s - sum(rows[k - 2])
        phase = phase + gammas[k - 1] * s
    pot = 0
    for k in range(1, l + 1):
        for i in range(1, k + 1):
            xk = rows[k - 1][i - 1]
            pot = pot + np.exp(2.0 * (rows[k][i - 1] - xk)) + np.exp(2.0 * (xk - rows[k][i]))
    return 1j * phase - math.pi * pot


def _window(xs: Sequence[float]) -> tuple[float, float]:
    spread = max(xs) - min(xs)
    mid = 0.5 * (max(xs) + min(xs))
    half = 0.5 * spread + 4.5
    return mid - half, mid + half


_DEFAULT_SPECS = {
    2: QuadratureSpec(panels=12, nodes_per_panel=16, rel_tol=1e-13, abs_tol=1e-15),
    3: QuadratureSpec(panels=6, nodes_per_panel=16, rel_tol=1e-11, abs_tol=1e-14, max_refinements=2),
}


def givental_psi(gamma: SpectralVector, x: PositionVector, spec: QuadratureSpec | None = None) -> complex:
    """Bare Givental integral Psi_gamma(x) for rank 1, 2 or 3."""
    _check_dims(gamma, x)
    g = gamma.gammas
    xs = x.xs
    n = gamma.rank
    if n == 1:
        return cmath.exp(1j * g[0] * xs[0])
    spec = spec or _DEFAULT_SPECS[n]
    lo, hi = _window(xs)
    if n == 2:
        f = lambda s: givental_exponent(g, xs, [[s]])
        val, _ = integrate_1d(lambda s: np.exp(f(s)), spec, interval=(lo, hi))
        return val

    def f3(a, b, c):
        return np.exp(givental_exponent(g, xs, [[a], [b, c]]))

    val, _ = integrate_nd(f3, [spec] * 3, intervals=[(lo, hi)] * 3)
    return val


def whittaker_finite(gamma: SpectralVector, x: PositionVector, spec: QuadratureSpec | None = None):
    """Return ``(Psi, Phi)`` with Psi the Givental integral and Phi = e^{<rho, x>} Psi."""
    psi = givental_psi(gamma, x, spec)
    phi = math.exp(float(np.dot(gamma.rho, x.xs))) * psi
    return psi, phi


def whittaker_gl2_closed(gammas: Sequence, x1, x2):
    """e^{i(g1+g2)(x1+x2)/2} K_{i(g1-g2)/2}(2 pi e^{x1-x2}), vectorized over x1, x2."""
    g1, g2 = gammas
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    nu = 0.5j * (g1 - g2)
    k = macdonald_k(nu, 2.0 * math.pi * np.exp(x1 - x2))
    out = np.exp(0.5j * (g1 + g2) * (x1 + x2)) * k
    return complex(out) if np.ndim(out) == 0 else out


def to_exponential_convention(gamma: SpectralVector, x: PositionVector):
    """Map Givental-coordinate data to the coordinates where H2 has potential e^{x_i - x_{i+1}}.

    Returns ``(gamma', x')`` with gamma' = gamma / 2 and x'_i = 2 (x_i - (i-1) log pi).
    """
    g = tuple(complex(v) / 2 if isinstance(v, complex) else v / 2 for v in gamma.gammas)
    xp = tuple(2.0 * (xi - i * math.log(math.pi)) for i, xi in enumerate(x.xs))
    return SpectralVector(g, gamma.lam, gamma.sl), PositionVector(xp)


def toda_check_finite(gamma: SpectralVector, x: PositionVector, spec: QuadratureSpec | None = None,
                      step: float = 5e-3, psi_fn=None):
    """Eigenvalue residuals |H Psi - E Psi| / |Psi| for H1 and H2 (Givental coordinates).

    H1 = -i sum d/dx_i is applied as a directional derivative along (1,...,1);
    H2 = -1/2 sum d^2/dx_i^2 + 4 pi^2 sum e^{2(x_i - x_{i+1})} by central
    differences.  E1 = sum gamma, E2 = sum gamma^2 / 2.
    """
    _check_dims(gamma, x)
    if psi_fn is None:
        psi_fn = lambda g, pos: givental_psi(g, pos, spec)
    xs = np.array(x.xs)
    n = gamma.rank
    e1 = sum(gamma.gammas)
    e2 = 0.5 * sum(g * g for g in gamma.gammas)
    psi0 = psi_fn(gamma, x)
    d1 = derivative_fd(lambda a: psi_fn(gamma, x.shifted(a)), 0.0, order=1, step=step)
    h1 = abs(-1j * d1 - e1 * psi0) / abs(psi0)
    lap = 0j
    for i in range(n):
        def along(a, i=i):
            pos = xs.copy()
            pos[i] += a
            return psi_fn(gamma, PositionVector(pos))
        lap += derivative_fd(along, 0.0, order=2, step=step)
    pot = sum(4.0 * math.pi**2 * math.exp(2.0 * (xs[i] - xs[i + 1])) for i in range(n - 1))
    h2 = abs(-0.5 * lap + pot * psi0 - e2 * psi0) / abs(psi0)
    return h1, h2


# ---------------------------------------------------------------------------
# affine gl_1

def whittaker_affine_generic(gamma, params: AffineParams) -> complex:
    """exp{ i gamma t0 + t_+ kappa + t_- (mu - gamma^2/2) }."""
    return cmath.exp(1j * gamma * params.t0 + params.t_plus * params.kappa
                     + params.t_minus * (params.mu - 0.5 * gamma * gamma))


def whittaker_affine_critical(gamma, x):
    """e^{i gamma x}."""
    return cmath.exp(1j * gamma * x) if np.isscalar(x) else np.exp(1j * gamma * np.asarray(x))


def _affine_psi(gamma, z):
    # the closed form e^{i gamma x}, continued to complex x
    return cmath.exp(1j * gamma * z)


def _difference_residual(lam, gamma, x, log_q):
    """(q^{i/2 (lam + i d)} - q^{-i/2 (lam + i d)}) Psi - (q^{i/2 (lam-gamma)} - q^{-i/2 (lam-gamma)}) Psi.

    q^{i/2 (i d/dx)} = e^{-(log q)/2 d/dx} is the translation x -> x - (log q)/2.
    """
    plus = cmath.exp(0.5j * lam * log_q) * _affine_psi(gamma, x - 0.5 * log_q)
    minus = cmath.exp(-0.5j * lam * log_q) * _affine_psi(gamma, x + 0.5 * log_q)
    psi = _affine_psi(gamma, x)
    rhs = (cmath.exp(0.5j * (lam - gamma) * log_q) - cmath.exp(-0.5j * (lam - gamma) * log_q)) * psi
    return abs(plus - minus - rhs) / abs(psi)


def difference_eq_check_affine(lam, gamma, params: AffineParams, x: float):
    """Residuals of the q- and dual q~-difference equations on e^{i gamma x}."""
    return (_difference_residual(lam, gamma, x, params.log_q),
            _difference_residual(lam, gamma, x, params.log_q_dual))


def affine_lattice_values(gamma, kappa: float, ns: Sequence[int]):
    """Pairs (Psi(2 pi n / kappa), q^{n gamma}) with q = e^{2 pi i / kappa}."""
    log_q = 2j * math.pi / kappa
    return [(cmath.exp(1j * gamma * 2.0 * math.pi * n / kappa), cmath.exp(n * gamma * log_q)) for n in ns]


# ---------------------------------------------------------------------------
# lattice gl_2

def _to_exact(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise DomainError(f"cannot represent {v!r} exactly")


def _coerce(values, mode: str):
    if mode == "exact":
        return [_to_exact(v) for v in values]
    if mode == "float":
        return [complex(v) for v in values]
    raise DomainError(f"unknown mode {mode!r}")


def _color_series(t_inv, q, n: int, one):
    """[t^{-m} / (m)_q!]_{m=0..n}."""
    out = [one]
    fact = one
    for m in range(1, n + 1):
        fact = fact * (1 - q**m)
        if fact == 0:
            raise PoleError(f"(m)_q! vanishes at m = {m}")
        out.append(t_inv**m / fact)
    return out


def q_character(n: int, ts: Sequence, q, mode: str = "exact"):
    """chi_n = sum over n_1 + ... + n_{l+1} = n of prod t_k^{-n_k} / (n_k)_q!."""
    if n < 0:
        raise DomainError("n must be non-negative")
    vals = _coerce(list(ts) + [q], mode)
    ts_c, qc = vals[:-1], vals[-1]
    one = Fraction(1) if mode == "exact" else 1.0 + 0j
    if any(t == 0 for t in ts_c):
        raise PoleError("t_k must be nonzero")
    acc = [one] + [one * 0] * n
    for t in ts_c:
        series = _color_series(1 / t, qc, n, one)
        acc = [sum((acc[j] * series[m - j] for j in range(m + 1)), one * 0) for m in range(n + 1)]
    return acc[n]


def _recursion_values(n_max: int, t1, t2, q, one):
    a, b = 1 / t1, 1 / t2
    vals = [one]
    if n_max >= 1:
        vals.append((a + b) / (1 - q))
    for m in range(1, n_max):
        den = 1 - q ** (m + 1)
        if den == 0:
            raise PoleError("1 - q^{n+1} vanishes")
        vals.append(((a + b) * vals[m] - a * b * vals[m - 1]) / den)
    return vals


def lattice_whittaker_gl2(n: int, t1, t2, q, via: str = "character", mode: str = "exact"):
    """Psi^{(q)}_{t1,t2}(n) from the character sum or from the three-term recursion.

    The recursion t1^{-1} t2^{-1} Psi(n-1) + (1 - q^{n+1}) Psi(n+1) = (t1^{-1} + t2^{-1}) Psi(n)
    is iterated forward from Psi(0) = 1, Psi(1) = (t1^{-1} + t2^{-1}) / (1 - q).
    """
    t1, t2, q = _coerce([t1, t2, q], mode)
    if via == "character":
        return q_character(n, [t1, t2], q, mode)
    if via == "recursion":
        one = Fraction(1) if mode == "exact" else 1.0 + 0j
        return _recursion_values(n, t1, t2, q, one)[n]
    raise DomainError(f"unknown path {via!r}")


def recursion_residual(n: int, t1, t2, q, values) -> object:
    """t1^{-1} t2^{-1} v[n-1] + (1 - q^{n+1}) v[n+1] - (t1^{-1} + t2^{-1}) v[n]."""
    a, b = 1 / t1, 1 / t2
    return a * b * values[n - 1] + (1 - q ** (n + 1)) * values[n + 1] - (a + b) * values[n]


@dataclass
class LatticeWhittakerTable:
    q: object
    t1: object
    t2: object
    values: dict = field(default_factory=dict)


def lattice_whittaker_table(n_max: int, t1, t2, q, mode: str = "exact", rel_tol: float = 1e-10) -> LatticeWhittakerTable:
    """Values Psi(0..n_max), with the character and recursion paths asserted equal."""
    t1c, t2c, qc = _coerce([t1, t2, q], mode)
    one = Fraction(1) if mode == "exact" else 1.0 + 0j
    rec = _recursion_values(n_max, t1c, t2c, qc, one)
    table = LatticeWhittakerTable(qc, t1c, t2c)
    for n in range(n_max + 1):
        ch = q_character(n, [t1c, t2c], qc, mode)
        same = ch == rec[n] if mode == "exact" else abs(ch - rec[n]) <= rel_tol * max(abs(ch), 1e-300)
        if not same:
            raise AssertionError(f"character and recursion disagree at n = {n}")
        table.values[n] = ch
    return table
