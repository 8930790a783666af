"""Deterministic quadrature and finite differences.

All integrators here work on the real line only.  Callers that need an
imaginary contour shift apply it to the integrand's parameters (see
``QuadratureSpec.contour_shift``) rather than to the integration variable.

Integrands are evaluated on numpy arrays of nodes, so they must be written
with numpy ufuncs (broadcasting over all arguments for ``integrate_nd``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergence

# e^{-pi e^{2u}} < 1e-30 at the window edge, with margin
DEFAULT_HALF_WIDTH = max(8.0, 0.5 * math.log(math.log(1e30) / math.pi) + 8.0)

_TANH_SINH_T = 4.0
_CHUNK_POINTS = 1 << 21


@dataclass(frozen=True)
class QuadratureSpec:
    """Window, node budget and stopping rule for one integration axis.

    ``method`` is ``"gauss"`` (composite Gauss-Legendre) or ``"tanh_sinh"``.
    For tanh-sinh, ``panels`` is the number of steps per unit of the
    transformed variable and ``nodes_per_panel`` is ignored.
    """

    half_width: float = DEFAULT_HALF_WIDTH
    panels: int = 16
    nodes_per_panel: int = 16
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_refinements: int = 6
    contour_shift: float = 0.0
    method: str = "gauss"

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("half_width must be positive")
        if self.panels < 1 or self.nodes_per_panel < 1:
            raise DomainError("panels and nodes_per_panel must be positive")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_refinements < 0:
            raise DomainError("max_refinements must be non-negative")
        if self.method not in ("gauss", "tanh_sinh"):
            raise DomainError(f"unknown quadrature method {self.method!r}")

    def with_(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)


@lru_cache(maxsize=None)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_grid(a: float, b: float, panels: int, nodes_per_panel: int):
    """Nodes and weights of the composite Gauss-Legendre rule on [a, b]."""
    x, w = _legendre(nodes_per_panel)
    h = (b - a) / panels
    mids = a + h * (np.arange(panels) + 0.5)
    nodes = (mids[:, None] + 0.5 * h * x[None, :]).ravel()
    weights = np.tile(0.5 * h * w, panels)
    return nodes, weights


def tanh_sinh_grid(a: float, b: float, steps_per_unit: int):
    """Nodes and weights of the truncated tanh-sinh rule on [a, b].

    Nodes are built from their distance to the nearer endpoint so that
    integrands with endpoint singularities are never sampled at the endpoint.
    """
    h = 1.0 / steps_per_unit
    k = np.arange(-math.ceil(_TANH_SINH_T / h), math.ceil(_TANH_SINH_T / h) + 1)
    tau = k * h
    y = 0.5 * math.pi * np.sinh(tau)
    r = 0.5 * (b - a)
    # distance to the nearer endpoint: r(1 - tanh|y|) = 2r / (1 + e^{2|y|})
    dist = 2.0 * r / (1.0 + np.exp(2.0 * np.abs(y)))
    nodes = np.where(y < 0, a + dist, b - dist)
    weights = h * r * 0.5 * math.pi * np.cosh(tau) / np.cosh(y) ** 2
    keep = (nodes > a) & (nodes < b) & (weights > 0)
    return nodes[keep], weights[keep]


def _grid(spec: QuadratureSpec, a: float, b: float, level: int):
    if spec.method == "gauss":
        return gauss_legendre_grid(a, b, spec.panels << level, spec.nodes_per_panel)
    return tanh_sinh_grid(a, b, spec.panels << level)


def _checked(values, shape=None) -> np.ndarray:
    vals = np.asarray(values, dtype=complex)
    if shape is not None and vals.shape != shape:
        vals = np.broadcast_to(vals, shape)
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand returned non-finite values at quadrature nodes")
    return vals


def _refine(estimate: Callable[[int], complex], spec: QuadratureSpec, full_output: bool):
    history: list[float] = []
    prev = estimate(0)
    for level in range(1, spec.max_refinements + 1):
        cur = estimate(level)
        diff = abs(cur - prev)
        history.append(diff)
        if diff < max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return (cur, diff, history) if full_output else (cur, diff)
        prev = cur
    raise NonConvergence(
        f"quadrature did not converge after {spec.max_refinements} refinements "
        f"(last difference {history[-1] if history else float('nan'):.3e})"
    )


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec | None = None,
    interval: tuple[float, float] | None = None,
    full_output: bool = False,
):
    """Integrate ``f`` over ``interval`` (default ``[-half_width, half_width]``).

    Returns ``(value, err_estimate)`` where ``err_estimate`` is the difference
    between the last two refinement levels.  With ``full_output`` the list of
    successive differences is appended.
    """
    spec = spec or QuadratureSpec()
    a, b = interval if interval is not None else (-spec.half_width, spec.half_width)

    def estimate(level):
        x, w = _grid(spec, a, b, level)
        return complex(np.dot(_checked(f(x), x.shape), w))

    return _refine(estimate, spec, full_output)


def integrate_nd(
    f: Callable[..., np.ndarray],
    specs: QuadratureSpec | Sequence[QuadratureSpec],
    intervals: Sequence[tuple[float, float] | None] | None = None,
    full_output: bool = False,
):
    """Tensor-product integration of ``f(x_0, ..., x_{n-1})`` for n <= 3.

    ``specs`` is one spec per axis (or a single spec reused).  All axes are
    refined together; the stopping rule of the first spec applies.  ``f`` must
    broadcast over open-mesh arguments.
    """
    if isinstance(specs, QuadratureSpec):
        n = len(intervals) if intervals is not None else 1
        specs = [specs] * n
    specs = list(specs)
    n = len(specs)
    if n not in (1, 2, 3):
        raise DomainError("integrate_nd supports 1 to 3 dimensions")
    if intervals is None:
        intervals = [None] * n
    bounds = [iv if iv is not None else (-s.half_width, s.half_width) for s, iv in zip(specs, intervals)]

    def estimate(level):
        grids = [_grid(s, a, b, level) for s, (a, b) in zip(specs, bounds)]
        rest = [g[0] for g in grids[1:]]
        rest_w = [g[1] for g in grids[1:]]
        inner = int(np.prod([len(r) for r in rest])) if rest else 1
        chunk = max(1, _CHUNK_POINTS // max(inner, 1))
        x0, w0 = grids[0]
        total = 0j
        for start in range(0, len(x0), chunk):
            xs = x0[start:start + chunk]
            mesh = np.ix_(xs, *rest)
            shape = (len(xs), *(len(r) for r in rest))
            vals = _checked(f(*mesh), shape)
            acc = vals
            for wr in reversed(rest_w):
                acc = acc @ wr
            total += complex(np.dot(acc, w0[start:start + chunk]))
        return total

    return _refine(estimate, specs[0], full_output)


def derivative_fd(f: Callable[[float], complex], x: float, order: int = 1, step: float = 1e-3) -> complex:
    """Fourth-order central finite difference of ``f`` at ``x``."""
    if not step > 0:
        raise DomainError("step must be positive")
    h = step
    samples = [complex(f(x + k * h)) for k in (-2, -1, 0, 1, 2)]
    if not all(np.isfinite(s) for s in samples):
        raise DomainError("non-finite sample in finite-difference stencil")
    fm2, fm1, f0, fp1, fp2 = samples
    if order == 1:
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    if order == 2:
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    raise DomainError("order must be 1 or 2")
