"""Named verification suites: each case compares a computed value with an
independent closed form or checks a residual against a tolerance.

Suites marked best-effort report failures as ``skipped``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable


from . import baxter, fock_schur, gamma_zeta, qspecial, whittaker
from .qspecial import ModulusPair
from .whittaker import PositionVector, SpectralVector


@dataclass
class ReportRecord:
    suite: str
    case: str
    inputs: dict
    expected: object
    actual: object
    abs_err: float
    rel_err: float
    tolerance: float
    status: str = ""
    oracle: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _record(suite, case, inputs, expected, actual, tol, oracle, best_effort=False) -> ReportRecord:
    exp_c, act_c = complex(expected), complex(actual)
    abs_err = abs(act_c - exp_c)
    rel_err = abs_err / abs(exp_c) if exp_c != 0 else abs_err
    ok = (rel_err if exp_c != 0 else abs_err) <= tol
    status = "pass" if ok else ("skipped" if best_effort else "fail")
    return ReportRecord(suite, case, inputs, expected, actual, float(abs_err), float(rel_err), tol, status, oracle)


def _flag(suite, case, inputs, ok: bool, detail: float, oracle, best_effort=False) -> ReportRecord:
    status = "pass" if ok else ("skipped" if best_effort else "fail")
    return ReportRecord(suite, case, inputs, True, bool(ok), 0.0 if ok else 1.0, float(detail), 0.0, status, oracle)


# ---------------------------------------------------------------------------

GL1_POINTS = [(complex(re, -im), g, t, x)
              for (re, im) in [(0.0, 0.5), (0.7, 0.5), (-0.4, 1.0), (1.3, 1.5), (0.2, 2.0)]
              for (g, t, x) in [(0.0, 1.0, 0.3), (0.35, 1.0, -0.8), (-0.6, 1.7, 1.1), (0.9, 0.6, 0.0)]]


def suite_baxter_gl1(scale: float = 1.0):
    out = []
    name = "baxter_gl1"
    # gamma = 0 and rho = 0 make Phi identically 1
    for lam, anchor in [(-1j, 1.0), (-2j, 1.0 / math.pi)]:
        r = baxter.apply_baxter_finite(lam, 1.0, SpectralVector((0.0,)), PositionVector((0.4,)))
        out.append(_record(name, f"anchor lam={lam}", {"lambda": lam, "gamma": 0, "t": 1},
                           anchor, r.applied, 1e-8 * scale, "Gamma integral"))
    for lam, g, t, x in GL1_POINTS:
        r = baxter.apply_baxter_finite(lam, t, SpectralVector((g,)), PositionVector((x,)))
        out.append(_record(name, f"lam={lam} gamma={g} t={t} x={x}", {"lambda": lam, "gamma": g, "t": t, "x": x},
                           1.0, r.ratio_to_eigenvalue, 1e-8 * scale, "eigenvalue closed form"))
    return out


GL2_POINTS = [
    (-2j, (0.0, 0.0), 1.0, (0.0, 0.0)),
    (0.5 - 0.5j, (0.2, -0.3), 1.0, (0.2, -0.1)),
    (1.0 - 1.0j, (0.4, 0.1), 1.0, (1.0, -1.0)),
    (-0.3 - 0.5j, (-0.2, 0.5), 1.0, (-1.0, 0.5)),
    (0.2 - 0.6j, (0.3, 0.3), 2.0, (0.4, 0.4)),
    (0.8 - 0.7j, (0.6, -0.6), 0.7, (0.3, 0.9)),
]


def suite_baxter_gl2(scale: float = 1.0):
    out = []
    for lam, g, t, x in GL2_POINTS:
        r = baxter.apply_baxter_finite(lam, t, SpectralVector(g), PositionVector(x))
        out.append(_record("baxter_gl2", f"lam={lam} gamma={g} t={t} x={x}",
                           {"lambda": lam, "gamma": g, "t": t, "x": x},
                           1.0, r.ratio_to_eigenvalue, 1e-5 * scale, "eigenvalue closed form"))
    return out


def suite_givental_bessel(scale: float = 1.0):
    out = []
    g = (0.3, -0.2)
    for x1 in (-0.5, 0.0, 0.5):
        for x2 in (-0.4, 0.0, 0.4):
            psi, _ = whittaker.whittaker_finite(SpectralVector(g), PositionVector((x1, x2)))
            out.append(_record("givental_bessel", f"x=({x1},{x2})", {"gamma": g, "x": (x1, x2)},
                               whittaker.whittaker_gl2_closed(g, x1, x2), psi, 1e-8 * scale, "Bessel closed form"))
    for gam, x in [((0.4, 0.1, -0.5), (0.0, 0.0, 0.0)), ((0.4, 0.1, -0.5), (0.5, 0.0, -0.3))]:
        _, h2 = whittaker.toda_check_finite(SpectralVector(gam), PositionVector(x))
        out.append(_record("givental_bessel", f"gl3 H2 x={x}", {"gamma": gam, "x": x}, 0.0, h2,
                           1e-4 * scale, "eigenvalue equation"))
    return out


def suite_det_reg(scale: float = 1.0):
    lams = [0.5, 1.0, 1.5, 2.0, 3.7, 0.3 + 0.4j, 1.0 + 2.0j, 2.5 - 1.0j, 5.0, 0.8 + 0.1j]
    return [_record("det_reg", f"lam={lam}", {"lambda": lam}, gamma_zeta.DET_REG_SCHEME_CONSTANT,
                    gamma_zeta.det_reg_shifted(lam).value * gamma_zeta.gamma(lam), 1e-9 * scale,
                    "Lerch formula constant")
            for lam in lams]


DS_POINTS = [complex(0.15 + 0.11 * k, 0.37 * math.sin(1.3 * k)) for k in range(20)]


def suite_double_sine(scale: float = 1.0):
    out = []
    om = ModulusPair(1.0, 1.3)
    for z in DS_POINTS:
        s = qspecial.double_sine(z, om)
        for w_shift, w_other, label in ((1.0, 1.3, "w1"), (1.3, 1.0, "w2")):
            expected = s / (2.0 * cmath.sin(math.pi * z / w_other))
            out.append(_record("double_sine", f"shift {label} z={z:.4f}", {"z": z, "omega": (1.0, 1.3)},
                               expected, qspecial.double_sine(z + w_shift, om), 1e-8 * scale, "functional equation"))
    for z in DS_POINTS[:5]:
        out.append(_record("double_sine", f"symmetry z={z:.4f}", {"z": z}, qspecial.double_sine(z, om),
                           qspecial.double_sine(z, om.swapped()), 1e-8 * scale, "period symmetry"))
    omc = ModulusPair(1.0, 1.3 - 0.2j)
    for z in (0.6 + 0.1j, 1.1 - 0.2j, 0.9 + 0.3j):
        out.append(_record("double_sine", f"product vs integral z={z}", {"z": z, "omega": (1, "1.3-0.2i")},
                           qspecial.double_sine(z, omc, path="product"),
                           qspecial.double_sine(z, omc, path="contour"), 1e-6 * scale, "infinite product"))
    return out


def suite_affine_generic(scale: float = 1.0):
    out = []
    for z, kappa in [(0.37 + 0.2j, math.sqrt(3.0)), (0.8 - 0.3j, 2.5), (1.4 + 0.1j, 1.2)]:
        r1, r2 = baxter.affine_relation_residuals(z, kappa)
        for r, lab in ((r1, "shift 1"), (r2, "shift kappa")):
            out.append(_record("affine_generic", f"{lab} z={z} kappa={kappa:.4f}", {"z": z, "kappa": kappa},
                               0.0, r, 1e-8 * scale, "double-sine functional equation"))
    kappas = [4.0, 8.0, 16.0, 32.0]
    for z in (1.0, 1.5):
        errs = baxter.limit_study(z, kappas)
        ok = all(b < a for a, b in zip(errs, errs[1:]))
        out.append(_flag("affine_generic", f"kappa limit strictly decreasing z={z}",
                         {"z": z, "kappa": kappas, "errors": errs}, ok, errs[-1], "Gamma function"))
    return out


def suite_critical(scale: float = 1.0):
    out = []
    for lam, g, x in [(0.3 - 0.1j, 0.3, 0.5), (0.7 - 0.2j, -0.1, -0.4), (1.5 - 0.1j, 0.2, 1.0)]:
        r = baxter.apply_baxter_critical(lam, g, x)
        out.append(_record("critical", f"kernel lam={lam} gamma={g}", {"lambda": lam, "gamma": g, "x": x},
                           1.0, r.ratio_to_eigenvalue, 1e-7 * scale, "Macdonald function"))
    for nu in (0.5, 1 + 0.3j, 2.0):
        lam = -1j * nu  # nu = i(lam - gamma) with gamma = 0
        out.append(_record("critical", f"recurrence nu={nu}", {"nu": nu}, 0.0,
                           baxter.critical_recurrence_residual(1.0, lam, 0.0), 1e-10 * scale, "Bessel recurrence"))
    k = lambda o2: baxter.bessel_k_half_integer(o2, 2.0)
    out.append(_record("critical", "recurrence nu=1/2 half-integer", {"nu": 0.5}, 0.5 * k(1), k(3) - k(-1),
                       1e-14 * scale, "half-integer Bessel"))
    out.append(_record("critical", "half-integer K_{1/2}(2)", {"nu": 0.5}, k(1),
                       baxter.q0_general(1.0, -0.5j, 0.0) / 2, 1e-12 * scale, "half-integer Bessel"))
    for d in (1.0, 0.4, 2.0 + 0.5j):
        out.append(_record("critical", f"ODE lam-gamma={d}", {"lambda-gamma": d}, 0.0,
                           baxter.critical_ode_residual(0.0, d, 0.0), 1e-6 * scale, "Bessel equation"))
    return out


LATTICE_TRIPLES = [(Fraction(1, 2), Fraction(2), Fraction(3)), (Fraction(1, 3), Fraction(5, 2), Fraction(-7, 3)),
                   (Fraction(-2, 5), Fraction(3, 4), Fraction(6))]


def suite_lattice_gl2(scale: float = 1.0):
    out = []
    for q, t1, t2 in LATTICE_TRIPLES:
        ok = True
        for n in range(31):
            rec = whittaker.lattice_whittaker_gl2(n, t1, t2, q, via="recursion")
            ch = whittaker.lattice_whittaker_gl2(n, t1, t2, q, via="character")
            ok &= rec == ch
        out.append(_flag("lattice_gl2", f"recursion = character n<=30 q={q} t=({t1},{t2})",
                         {"q": str(q), "t1": str(t1), "t2": str(t2)}, ok, 0.0, "exact rational arithmetic"))
    for N in (10, 20, 40):
        err, bound = baxter.expansion_check(Fraction(1, 10), [Fraction(2), Fraction(3)], Fraction(1, 2), N)
        out.append(_flag("lattice_gl2", f"expansion N={N}", {"N": N, "error": err, "bound": bound},
                         err <= bound, err, "geometric tail bound"))
    return out


def suite_fock_trace(scale: float = 1.0):
    out = []
    colours = {1: [Fraction(2)], 2: [Fraction(2), Fraction(3)], 3: [Fraction(2), Fraction(3), Fraction(5, 2)]}
    for n_col, ts in colours.items():
        ok = True
        worst = 0.0
        for n in range(9):
            diff, bound = fock_schur.trace_vs_character(n, ts, Fraction(1, 2), 12)
            ok &= diff <= bound
            worst = max(worst, float(diff))
        out.append(_flag("fock_trace", f"l+1={n_col} n<=8 M=12", {"ts": [str(t) for t in ts], "q": "1/2"},
                         ok, worst, "q-character"))
    return out


def suite_cauchy(scale: float = 1.0):
    zs = [Fraction(1, 2), Fraction(-1, 3), Fraction(2)]
    ws = [Fraction(3), Fraction(1, 5), Fraction(-1)]
    res = fock_schur.cauchy_check(4, zs, ws)
    return [_flag("cauchy", "degree 4, 3+3 variables", {"z": [str(z) for z in zs], "w": [str(w) for w in ws]},
                  res == 0, float(res), "exact expansion")]


def suite_shintani(scale: float = 1.0):
    ok = True
    prev = None
    worst = 0.0
    for N in range(31):
        r = fock_schur.shintani_gl2(2, 1, 2, N)
        gap = r.target - r.partial_sum
        ok &= 0 <= gap <= r.remainder_bound and r.target == Fraction(8, 3)
        ok &= prev is None or r.partial_sum > prev
        prev = r.partial_sum
        worst = max(worst, float(gap))
    return [_flag("shintani", "p=2 y=(1,2) N<=30", {"p": 2, "y": (1, 2)}, ok, worst, "geometric series")]


def suite_mellin_bessel(scale: float = 1.0):
    out = []
    val, _ = baxter.mellin_bessel(2, 0)
    out.append(_record("mellin_bessel", "s=2 nu=0", {"s": 2, "nu": 0}, 1.0, val, 1e-8 * scale, "classical Mellin transform"))
    val, _ = baxter.mellin_bessel(2, 0.5)
    # int t K_{1/2}(t) dt = sqrt(pi/2) Gamma(3/2)
    out.append(_record("mellin_bessel", "s=2 nu=1/2", {"s": 2, "nu": 0.5},
                       math.sqrt(math.pi / 2) * math.sqrt(math.pi) / 2, val, 1e-10 * scale, "half-integer Bessel"))
    val, closed = baxter.int_two(0.3 - 0.5j, (0.2, -0.1))
    out.append(_record("mellin_bessel", "gl2 Whittaker transform", {"s": "0.3-0.5i", "gamma": (0.2, -0.1)},
                       closed, val, 1e-8 * scale, "Mellin-Bessel with pi-power"))
    return out


def suite_oper(scale: float = 1.0):
    fit = baxter.oper_calibration()
    return [
        _record("oper", "alpha", {"gamma": 0.3}, -2.0, fit.alpha, 1e-6 * scale, "closed-form eigenfunction"),
        _record("oper", "c", {"gamma": 0.3}, -2.0 * math.pi, fit.c, 1e-6 * scale, "closed-form eigenfunction"),
        _record("oper", "post-fit residual", {"y": "[-1,1]"}, 0.0, fit.residual, 1e-6 * scale, "fit"),
    ]


def suite_affine_kernel(scale: float = 1.0):
    out = []
    for mu in (0.3 - 0.1j, 1.0 - 0.1j):
        try:
            r = baxter.apply_baxter_affine_generic(mu, 0.0, 1.5)
            out.append(_record("affine_kernel", f"kappa=1.5 lam-gamma={mu}", {"kappa": 1.5, "lambda-gamma": mu},
                               1.0, r.ratio, 1e-3 * scale, "double-sine eigenvalue", best_effort=True))
        except Exception as exc:  # best-effort tier reports instead of aborting
            out.append(ReportRecord("affine_kernel", f"lam-gamma={mu}", {}, 1.0, repr(exc), math.inf, math.inf,
                                    1e-3, "skipped", "double-sine eigenvalue"))
    return out


def suite_dsine_fourier(scale: float = 1.0):
    om = ModulusPair(1.0, 1.3)
    out = []
    for a, z in ((0.5, 0.3), (0.7, 0.5), (0.3, 1.0)):
        lhs = qspecial.fourier_lhs(a, z, om)
        out.append(_record("dsine_fourier", f"a={a} z={z}", {"a": a, "z": z, "omega": (1.0, 1.3)},
                           qspecial.fourier_rhs(a, z, om), lhs, 1e-3 * scale, "Fourier identity", best_effort=True))
    return out


SUITES: dict[str, tuple[Callable, bool]] = {
    "baxter_gl1": (suite_baxter_gl1, False),
    "baxter_gl2": (suite_baxter_gl2, False),
    "givental_bessel": (suite_givental_bessel, False),
    "det_reg": (suite_det_reg, False),
    "double_sine": (suite_double_sine, False),
    "affine_generic": (suite_affine_generic, False),
    "critical": (suite_critical, False),
    "lattice_gl2": (suite_lattice_gl2, False),
    "fock_trace": (suite_fock_trace, False),
    "cauchy": (suite_cauchy, False),
    "shintani": (suite_shintani, False),
    "mellin_bessel": (suite_mellin_bessel, False),
    "oper": (suite_oper, False),
    "affine_kernel": (suite_affine_kernel, True),
    "dsine_fourier": (suite_dsine_fourier, True),
}


def run_suite(name: str, scale: float = 1.0) -> list[ReportRecord]:
    fn, _ = SUITES[name]
    return fn(scale)
