"""Graded traces over a truncated bosonic Fock space, Schur polynomials and
the Cauchy identity, and the gl2 Shintani geometric-series identity.

The Fock space carries oscillators a+_{m,j} with mode m = 0..M and colour
j = 1..l+1.  A state with occupations k_{m,j} has grade I0 = sum k, energy
L0 = sum m k and colour charges K_j = sum_m k_{m,j}; its trace weight is
q^{L0} t^{I0} prod_j t_j^{-K_j}.  As M -> infinity the grade-n trace tends
to the q-character chi_n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CutoffError, DimensionError, DomainError
from .whittaker import q_character


@dataclass(frozen=True)
class FockState:
    """Occupation numbers keyed by (mode, colour) with colour starting at 1."""

    occupation: tuple[tuple[tuple[int, int], int], ...] = field(default_factory=tuple)

    @classmethod
    def from_map(cls, occ: dict) -> "FockState":
        return cls(tuple(sorted((key, k) for key, k in occ.items() if k > 0)))

    @property
    def grade(self) -> int:
        return sum(k for _, k in self.occupation)

    @property
    def energy(self) -> int:
        return sum(m * k for (m, _), k in self.occupation)

    def charge(self, colour: int) -> int:
        return sum(k for (_, j), k in self.occupation if j == colour)


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts if p != 0)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError("partition parts must be positive and weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


def _as_mode(mode: str):
    if mode == "exact":
        return lambda v: Fraction(v)
    if mode == "float":
        return lambda v: complex(v)
    raise DomainError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Fock traces

def fock_states(colours: int, mode_cutoff: int, grade: int) -> Iterator[FockState]:
    """All states of the given grade with modes 0..mode_cutoff, in colex order."""
    labels = [(m, j) for j in range(1, colours + 1) for m in range(mode_cutoff + 1)]
    for combo in itertools.combinations_with_replacement(range(len(labels)), grade):
        occ: dict = {}
        for idx in combo:
            occ[labels[idx]] = occ.get(labels[idx], 0) + 1
        yield FockState.from_map(occ)


def _energy_counts(mode_cutoff: int, k: int) -> dict[int, int]:
    """Number of single-colour states with k quanta in modes 0..M, by energy."""
    counts: dict[int, int] = {}
    for combo in itertools.combinations_with_replacement(range(mode_cutoff + 1), k):
        e = sum(combo)
        counts[e] = counts.get(e, 0) + 1
    return counts


def _colour_grade_sums(q, mode_cutoff: int, n: int, zero):
    """s[k] = sum over single-colour states with k quanta of q^{L0}."""
    out = []
    for k in range(n + 1):
        counts = _energy_counts(mode_cutoff, k)
        out.append(sum((c * q**e for e, c in counts.items()), zero))
    return out


def grade_restricted_trace(n: int, ts: Sequence, q, mode_cutoff: int, mode: str = "exact"):
    """Sum over states of grade n with modes <= M of q^{L0} prod_j t_j^{-K_j}.

    Each colour's states are enumerated directly; the trace over the tensor
    product of colours is the product of single-colour traces, so the
    grade-n part is the convolution of the per-colour grade sums.
    """
    if n < 0 or mode_cutoff < 0:
        raise DomainError("grade and mode cutoff must be non-negative")
    conv = _as_mode(mode)
    qv = conv(q)
    zero, one = conv(0), conv(1)
    sums = _colour_grade_sums(qv, mode_cutoff, n, zero)
    acc = [one] + [zero] * n
    for t in ts:
        tinv = one / conv(t)
        series = [sums[k] * tinv**k for k in range(n + 1)]
        acc = [sum((acc[i] * series[m - i] for i in range(m + 1)), zero) for m in range(n + 1)]
    return acc[n]


def grade_restricted_trace_joint(n: int, ts: Sequence, q, mode_cutoff: int, mode: str = "exact"):
    """Same trace by enumerating every joint state; only for small cutoffs."""
    conv = _as_mode(mode)
    qv = conv(q)
    tinv = [conv(1) / conv(t) for t in ts]
    total = conv(0)
    for st in fock_states(len(ts), mode_cutoff, n):
        w = qv**st.energy
        for j, ti in enumerate(tinv, start=1):
            w *= ti ** st.charge(j)
        total += w
    return total


def mode_tail_bound(n: int, ts: Sequence, q, mode_cutoff: int) -> float:
    """Bound on |chi_n - grade-n trace at cutoff M|.

    Every state missing from the truncation has a quantum in some mode m > M;
    removing it leaves a grade n-1 state.  Summing over the removed quantum,
    |q|^{M+1}/(1-|q|) * sum_j |1/t_j| * C(n-1+l, l) r^{n-1} / (|q|;|q|)_inf^{l+1},
    r = max_j |1/t_j|.
    """
    if n == 0:
        return 0.0
    qa = abs(complex(q))
    if not qa < 1:
        raise DomainError("need |q| < 1")
    l = len(ts) - 1
    rs = [abs(1 / complex(t)) for t in ts]
    poch = math.prod(1 - qa**k for k in range(1, 2000) if qa**k > 1e-18) if qa > 0 else 1.0
    return (qa ** (mode_cutoff + 1) / (1 - qa) * sum(rs)
            * math.comb(n - 1 + l, l) * max(rs) ** (n - 1) / poch ** (l + 1))


def graded_trace(q, t, ts: Sequence, mode_cutoff: int, grade_cutoff: int, mode: str = "exact",
                 tol: float | None = None):
    """(sum_{n<=N} t^n * grade-n trace, total mode-tail bound).

    Raises CutoffError when ``tol`` is given and the bound exceeds it.
    """
    if not abs(complex(q)) < 1:
        raise DomainError("need |q| < 1")
    if mode_cutoff < 1 or grade_cutoff < 0:
        raise DomainError("cutoffs must be positive")
    conv = _as_mode(mode)
    tv = conv(t)
    total = conv(0)
    bound = 0.0
    for n in range(grade_cutoff + 1):
        total += tv**n * grade_restricted_trace(n, ts, q, mode_cutoff, mode)
        bound += abs(complex(t)) ** n * mode_tail_bound(n, ts, q, mode_cutoff)
    if tol is not None and bound > tol:
        raise CutoffError(f"mode-tail bound {bound:.3e} exceeds tolerance {tol:.3e}")
    return total, bound


def trace_vs_character(n: int, ts: Sequence, q, mode_cutoff: int, mode: str = "exact"):
    """(|chi_n - grade-n trace|, tail bound)."""
    diff = q_character(n, ts, q, mode) - grade_restricted_trace(n, ts, q, mode_cutoff, mode)
    return abs(diff), mode_tail_bound(n, ts, q, mode_cutoff)


# ---------------------------------------------------------------------------
# Schur polynomials and the Cauchy identity

def complete_homogeneous(k: int, zs: Sequence):
    """h_k(z) via h_k(z_1..z_n) = h_k(z_1..z_{n-1}) + z_n h_{k-1}(z_1..z_n)."""
    if k < 0:
        return 0 * (zs[0] if zs else 0)
    zero = zs[0] * 0 if zs else 0
    h = [zero + 1] + [zero] * k
    for z in zs:
        for m in range(1, k + 1):
            h[m] = h[m] + z * h[m - 1]
    return h[k]


def _det(mat: list[list]):
    """Determinant by Gaussian elimination; exact for Fraction entries."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    if not all(isinstance(v, (Fraction, int)) for row in a for v in row):
        return complex(np.linalg.det(np.array(a, dtype=complex)))
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = Fraction(a[r][c]) / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def schur(lam: Partition | Sequence[int], zs: Sequence):
    """s_lambda(z) = det[h_{lambda_i - i + j}(z)] (Jacobi-Trudi)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    if len(lam) > len(zs):
        raise DimensionError("partition has more rows than variables")
    n = len(lam)
    if n == 0:
        return Fraction(1) if all(isinstance(z, (Fraction, int)) for z in zs) else 1.0
    hs = {}
    mat = []
    for i in range(n):
        row = []
        for j in range(n):
            k = lam.parts[i] - i + j
            if k not in hs:
                hs[k] = complete_homogeneous(k, list(zs)) if k >= 0 else 0 * zs[0]
            row.append(hs[k])
        mat.append(row)
    return _det(mat)


def partitions(n: int, max_parts: int | None = None) -> Iterator[Partition]:
    """Partitions of n, in reverse lexicographic order."""
    def rec(rest, largest, acc):
        if rest == 0:
            yield Partition(tuple(acc))
            return
        if max_parts is not None and len(acc) >= max_parts:
            return
        for p in range(min(rest, largest), 0, -1):
            yield from rec(rest - p, p, acc + [p])

    yield from rec(n, n, [])


def cauchy_check(degree: int, zs: Sequence, ws: Sequence, mode: str = "exact"):
    """Largest per-degree difference between prod 1/(1 - z_i w_j) and sum s_L(z) s_L(w).

    The degree-k part of the product is h_k of the products z_i w_j; the
    right side sums over partitions of k with at most min(#z, #w) rows.
    """
    if degree > 12:
        raise DomainError("degree above desk scale")
    conv = _as_mode(mode)
    zs = [conv(z) for z in zs]
    ws = [conv(w) for w in ws]
    prods = [z * w for z in zs for w in ws]
    rows = min(len(zs), len(ws))
    worst = 0
    for k in range(degree + 1):
        lhs = complete_homogeneous(k, prods)
        rhs = sum((schur(p, zs) * schur(p, ws) for p in partitions(k, rows)), conv(0))
        worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# gl2 Shintani identity

@dataclass(frozen=True)
class ShintaniResult:
    partial_sum: object
    target: object
    remainder_bound: object


def classical_character(n: int, x1, x2):
    """h_n(x1, x2) = sum_k x1^k x2^{n-k}."""
    return sum((x1**k * x2 ** (n - k) for k in range(n + 1)), 0 * x1)


def shintani_gl2(p: int, y1, y2, n_max: int) -> ShintaniResult:
    """Partial sums of sum_n h_n(p^{-y1}, p^{-y2}) against prod_i 1/(1 - p^{-y_i}).

    Exact when p and y are integers.  Remainder bound
    sum_{n>N} (n+1) x^n = x^{N+1} ((N+2) - (N+1) x) / (1-x)^2, x = max p^{-y_i}.
    """
    if not (y1 > 0 and y2 > 0):
        raise DomainError("y1 and y2 must be positive")
    if p < 2:
        raise DomainError("p must be at least 2")
    exact = all(isinstance(v, (int, Fraction)) for v in (y1, y2)) and all(
        Fraction(v).denominator == 1 for v in (y1, y2))
    if exact:
        x1, x2 = Fraction(1, p ** int(y1)), Fraction(1, p ** int(y2))
    else:
        x1, x2 = float(p) ** (-float(y1)), float(p) ** (-float(y2))
    partial = sum((classical_character(n, x1, x2) for n in range(n_max + 1)), 0 * x1)
    target = 1 / ((1 - x1) * (1 - x2))
    x = max(x1, x2)
    bound = x ** (n_max + 1) * ((n_max + 2) - (n_max + 1) * x) / (1 - x) ** 2
    return ShintaniResult(partial, target, bound)


def shintani_from_lattice(n: int, p: int, y1: int, y2: int):
    """chi_n^{(q)} at q = 0 with t_i = p^{y_i}; equals h_n(p^{-y1}, p^{-y2})."""
    return q_character(n, [Fraction(p) ** y1, Fraction(p) ** y2], Fraction(0), "exact")
