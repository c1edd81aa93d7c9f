"""Property checks shared by ``sphwave check`` and the acceptance tests.

Every check returns a :class:`CheckResult` carrying the worst measured
value next to the tolerance it was held to, so a failure reports how far
off it was rather than just that it failed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import field, oracle, solver, specfun
from .model import BeamSpec, StepPotential, WaveNumbers, derive_wavenumbers
from .quadrature import integrate

SWEEP_SEED = 20240917
Params = Tuple[float, float, float, float]  # (a, v1, v_inf, E)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tol = f"{self.tolerance:.1e}" if math.isfinite(self.tolerance) else "none"
        text = f"{status}  {self.name}: measured {self.measured:.3e} (tol {tol})"
        if self.detail:
            text += f"  [{self.detail}]"
        return text


# -- parameter sweeps ---------------------------------------------------------

def sweep_parameters(n: int, seed: int = SWEEP_SEED) -> List[Params]:
    """Random step potentials over the standard ranges.

    ``a in [0.2, 5]``, ``E - V_inf in [0.1, 50]``, ``V1 - V_inf in [-50, 50]``,
    ``V_inf in [-10, 10]``. Every second set is forced to ``E < 0`` so the
    reference wavenumber ``k0`` is imaginary; ``|E| < 0.05`` is redrawn to
    keep ``k0 a`` away from the Hankel singularity.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        while True:
            a = rng.uniform(0.2, 5.0)
            if i % 2:
                v_inf = rng.uniform(-10.0, -0.2)
                kin = rng.uniform(0.1, -v_inf - 0.05)
            else:
                v_inf = rng.uniform(-10.0, 10.0)
                kin = rng.uniform(0.1, 50.0)
            strength = rng.uniform(-50.0, 50.0)
            energy = v_inf + kin
            if abs(energy) >= 0.05:
                break
        out.append((a, v_inf + strength, v_inf, energy))
    return out


def sweep_coverage(params: Sequence[Params]) -> str:
    barrier = sum(v1 > v_inf for _, v1, v_inf, _ in params)
    tunnel = sum(v1 > e for _, v1, _, e in params)
    neg_e = sum(e < 0 for *_, e in params)
    return (f"{len(params)} sets: {barrier} barriers, {tunnel} with imaginary k1, "
            f"{neg_e} with E<0")


def wavenumbers(p: Params) -> WaveNumbers:
    a, v1, v_inf, e = p
    return derive_wavenumbers(StepPotential(a, v1, v_inf), BeamSpec(e))


def relative_gap(u: complex, v: complex, floor: float = 1e-300) -> float:
    return abs(u - v) / max(abs(u), abs(v), floor)


def route_disagreement(results: Dict[str, list], floor_rel: float = 0.0) -> np.ndarray:
    """Per-l worst relative disagreement over every pair of routes.

    The denominator is floored at ``floor_rel * (2l + 1)`` (the size of the
    incident partial amplitude), which only matters when a coefficient
    vanishes identically, as in free propagation.
    """
    names = list(results)
    n = len(next(iter(results.values())))
    out = np.zeros(n)
    for i, first in enumerate(names):
        for second in names[i + 1:]:
            for l, (c1, c2) in enumerate(zip(results[first], results[second])):
                fl = max(floor_rel * (2 * l + 1), 1e-300)
                out[l] = max(out[l], relative_gap(c1.a_gt, c2.a_gt, fl),
                             relative_gap(c1.a_lt, c2.a_lt, fl))
    return out


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- solver -------------------------------------------------------------------

@_timed
def check_route_equivalence(n=200, seed=SWEEP_SEED, tol=1e-9) -> CheckResult:
    """All three coefficient routes agree per l up to ``choose_lmax``."""
    params = sweep_parameters(n, seed)
    worst, where = 0.0, None
    for p in params:
        wn = wavenumbers(p)
        l_max = solver.choose_lmax(wn, p[0])
        res = {r: solver.solve(wn, p[0], l_max, r) for r in solver.ROUTES}
        gaps = route_disagreement(res)
        if gaps.max() > worst:
            worst, where = float(gaps.max()), (p, int(gaps.argmax()))
    detail = sweep_coverage(params)
    if where is not None:
        detail += f"; worst at l={where[1]}"
    return CheckResult("route equivalence", worst <= tol, worst, tol, detail)


@_timed
def check_det_m(n=200, seed=SWEEP_SEED, l_max=40, tol=1e-12) -> CheckResult:
    """``det M_l = 2 / (pi i a)`` for every ``l <= 40``."""
    worst = 0.0
    for p in sweep_parameters(n, seed):
        a = p[0]
        target = 2.0 / (math.pi * 1j * a)
        for sys_l in solver.assemble_mode_systems(wavenumbers(p), a, l_max):
            worst = max(worst, abs(sys_l.det_m - target) / abs(target))
    return CheckResult("det M_l invariant", worst <= tol, worst, tol, f"l <= {l_max}")


def _row_normalize(aug: np.ndarray) -> np.ndarray:
    out = np.empty_like(aug)
    for i, row in enumerate(aug):
        out[i] = row / row[np.argmax(np.abs(row))]
    return out


def system_identity_gap(wn: WaveNumbers, a: float, l: int):
    """Compare ``[N_l | B_l]`` with the continuity system.

    Returns the normalized gap after swapping the rows of ``N_l`` and the
    overall factor relating the raw systems (``+1`` or ``-1`` when they
    are the same system).
    """
    ms = solver.assemble_mode_system(wn, a, l)
    aug_n = np.column_stack([ms.n_mat, ms.b_vec])[::-1]
    mat, rhs = solver.matching_system(wn, a, l, form="half_order")
    aug_m = np.column_stack([mat, rhs])
    gap = float(np.max(np.abs(_row_normalize(aug_n) - _row_normalize(aug_m))))
    i, j = np.unravel_index(np.argmax(np.abs(aug_m)), aug_m.shape)
    return gap, complex(aug_n[i, j] / aug_m[i, j])


@_timed
def check_system_identity(n=200, seed=SWEEP_SEED, tol=1e-12) -> CheckResult:
    """``N_l, B_l`` equal the continuity system up to a row swap and a sign."""
    worst, sign_gap = 0.0, 0.0
    for p in sweep_parameters(n, seed):
        wn = wavenumbers(p)
        for l in range(solver.choose_lmax(wn, p[0]) + 1):
            gap, factor = system_identity_gap(wn, p[0], l)
            worst = max(worst, gap)
            sign_gap = max(sign_gap, min(abs(factor - 1), abs(factor + 1)))
    measured = max(worst, sign_gap)
    return CheckResult("system identity (row swap, sign)", measured <= tol, measured, tol,
                       f"row gap {worst:.1e}, sign gap {sign_gap:.1e}")


@_timed
def check_vinf_shift(n=50, seed=SWEEP_SEED + 1, tol=1e-12) -> CheckResult:
    """Shifting every energy by the same constant leaves the coefficients unchanged.

    Parameters are rounded to multiples of ``2**-20`` and shifts to
    multiples of ``2**-10`` so the shifted differences ``E - V`` are exact;
    otherwise the test would only measure input rounding amplified at high l.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in sweep_parameters(n, seed):
        a, v1, v_inf, e = (round(x * 2 ** 20) / 2 ** 20 for x in p)
        c = round(rng.uniform(-5, 5) * 2 ** 10) / 2 ** 10
        if abs(e + c) < 0.05:
            continue
        wn = wavenumbers((a, v1, v_inf, e))
        wn_c = wavenumbers((a, v1 + c, v_inf + c, e + c))
        l_max = solver.choose_lmax(wn, a)
        for route in solver.ROUTES:
            gaps = route_disagreement({"x": solver.solve(wn, a, l_max, route),
                                       "y": solver.solve(wn_c, a, l_max, route)})
            worst = max(worst, float(gaps.max()))
    return CheckResult("V_inf shift invariance", worst <= tol, worst, tol)


VINF_LIMIT_CASES = ((1.0, -1.0, 1.0), (1.0, 3.0, 2.0), (2.0, -5.0, 3.0), (0.8, 4.0, 1.0))


def vinf_limit_errors(a: float, v1: float, kinetic: float, exponents=range(1, 7)):
    """Homogeneous-route error against the ``V_inf = 0`` inhomogeneous result.

    The kinetic energy ``E - V_inf`` is held fixed while the floor is
    lowered to zero; ``V1`` stays put, so the interior wavenumber tracks
    ``V_inf``. Errors are normalized by the largest reference coefficient.
    """
    wn0 = derive_wavenumbers(StepPotential(a, v1, 0.0), BeamSpec(kinetic))
    l_max = solver.choose_lmax(wn0, a)
    ref = solver.solve_inhomogeneous(wn0, a, l_max)
    scale = max(max(abs(c.a_gt), abs(c.a_lt)) for c in ref)
    errs = []
    for p in exponents:
        v_inf = 10.0 ** (-p)
        wn = derive_wavenumbers(StepPotential(a, v1, v_inf), BeamSpec(v_inf + kinetic))
        got = solver.solve_homogeneous(wn, a, l_max)
        errs.append(max(max(abs(x.a_gt - y.a_gt), abs(x.a_lt - y.a_lt))
                        for x, y in zip(got, ref)) / scale)
    return errs


@_timed
def check_vinf_limit(final_tol: Optional[float] = None) -> CheckResult:
    """``V_inf -> 0`` continuity: errors shrink monotonically decade by decade.

    With ``final_tol`` the error at ``V_inf = 1e-6`` must also be below it.
    """
    monotone = True
    finals = []
    for case in VINF_LIMIT_CASES:
        errs = vinf_limit_errors(*case)
        monotone &= all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        finals.append(errs[-1])
    worst = max(finals)
    passed = monotone and (final_tol is None or worst <= final_tol)
    tol = final_tol if final_tol is not None else math.inf
    return CheckResult("V_inf -> 0 limit", passed, worst, tol,
                       f"monotone={monotone}, final error at V_inf=1e-6")


@_timed
def check_unitarity(n=200, seed=SWEEP_SEED, tol_s=1e-10, tol_opt=1e-8,
                    tol_free=1e-12) -> CheckResult:
    """``|S_l| = 1``, the optical theorem, and null scattering when free."""
    worst_s, worst_opt = 0.0, 0.0
    for p in sweep_parameters(n, seed):
        wn = wavenumbers(p)
        coeffs = solver.solve(wn, p[0], solver.choose_lmax(wn, p[0]))
        worst_s = max(worst_s, float(np.max(np.abs(np.abs(field.s_matrix(coeffs)) - 1))))
        worst_opt = max(worst_opt, field.optical_theorem_gap(coeffs, wn))
    worst_free = 0.0
    for a, v, e in ((1.0, 0.0, 1.0), (2.5, -3.0, 4.0), (0.4, 7.0, 7.5), (3.0, -2.0, -1.0)):
        wn = derive_wavenumbers(StepPotential(a, v, v), BeamSpec(e))
        l_max = solver.choose_lmax(wn, a)
        for route in solver.ROUTES:
            coeffs = solver.solve(wn, a, l_max, route)
            worst_free = max(worst_free, max(abs(c.a_gt) for c in coeffs),
                             field.observables(coeffs, wn).cross_section_total)
    passed = worst_s <= tol_s and worst_opt <= tol_opt and worst_free <= tol_free
    measured = max(worst_s / tol_s, worst_opt / tol_opt, worst_free / tol_free)
    return CheckResult("unitarity / optical theorem / free case", passed, measured, 1.0,
                       f"||S|-1| {worst_s:.1e}, optical {worst_opt:.1e}, "
                       f"free {worst_free:.1e} (measured is worst ratio to tolerance)")


# -- field ---------------------------------------------------------------------

@_timed
def check_residuals(n_sets=20, n_points=16, seed=SWEEP_SEED + 2, tol=1e-5,
                    abs_tol=1e-14, rel_tol=1e-13) -> CheckResult:
    """Solved coefficients satisfy both integral equations pointwise.

    Inside a tunnelling barrier ``|psi|`` can be ~1e-9 while the right-hand
    side is a cancellation of order-one terms, so the quadrature tolerance
    must sit well below the library default for the relative residual to
    mean anything there.
    """
    rng = np.random.default_rng(seed)
    tols = {"abs_tol": abs_tol, "rel_tol": rel_tol}
    worst = {"inhomogeneous": 0.0, "homogeneous": 0.0, "damped tail": 0.0}
    for p in sweep_parameters(n_sets, seed):
        wn = wavenumbers(p)
        a = p[0]
        l_max = solver.choose_lmax(wn, a)
        # each equation is checked with the coefficients obtained from it
        c_inh = solver.solve(wn, a, l_max, "inhomogeneous")
        c_hom = solver.solve(wn, a, l_max, "homogeneous")
        for pt in field.sample_field_points(a, n_points, rng):
            rep = field.residual_inhomogeneous(c_inh, wn, a, pt, **tols)
            worst["inhomogeneous"] = max(worst["inhomogeneous"], rep.rel_residual)
            rep = field.residual_homogeneous(c_hom, wn, a, pt, **tols)
            worst["homogeneous"] = max(worst["homogeneous"], rep.rel_residual)
            if wn.k0.imag > 0:
                rep = field.residual_homogeneous(c_hom, wn, a, pt, tail="quadrature", **tols)
                worst["damped tail"] = max(worst["damped tail"], rep.rel_residual)
    measured = max(worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return CheckResult("integral-equation residuals", measured <= tol, measured, tol, detail)


@_timed
def check_interface_continuity(n=50, seed=SWEEP_SEED + 3, tol=1e-9) -> CheckResult:
    """Interior and exterior expansions agree in value and slope at ``r = a``."""
    worst = 0.0
    cos = np.linspace(-1.0, 1.0, 32)
    for p in sweep_parameters(n, seed):
        wn = wavenumbers(p)
        a = p[0]
        coeffs = solver.solve(wn, a, solver.choose_lmax(wn, a))
        for deriv in (False, True):
            inner = field.psi_interior(coeffs, wn, a, cos, derivative=deriv)
            outer = field.psi_exterior(coeffs, wn, a, cos, derivative=deriv)
            scale = max(np.max(np.abs(inner)), np.max(np.abs(outer)))
            worst = max(worst, float(np.max(np.abs(inner - outer)) / scale))
    return CheckResult("interface continuity", worst <= tol, worst, tol)


def plane_wave_cutoff(kr: float) -> int:
    """``kr + 20`` up to ``kr = 12``; beyond that the tail of the expansion
    exceeds 1e-10 (about 4e-9 at ``kr = 20``), so the margin grows like
    ``(kr)**(1/3)``, the width of the transition region of ``j_l``."""
    base = int(math.ceil(kr)) + 20
    if kr <= 12.0:
        return base
    return base + int(math.ceil(4.0 * kr ** (1.0 / 3.0)))


@_timed
def check_plane_wave(n=400, seed=SWEEP_SEED + 4, tol=1e-10) -> CheckResult:
    """Partial sums of the incident wave converge to ``exp(i k r cos t)``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        k = rng.uniform(0.1, 7.0)
        r = rng.uniform(0.0, 20.0 / k)
        c = rng.uniform(-1.0, 1.0)
        wn = WaveNumbers(k=k, k0=complex(k), k1=complex(k))
        psi = field.psi_incident(wn, field.FieldPoint(r, c), plane_wave_cutoff(k * r))
        worst = max(worst, abs(psi - np.exp(1j * k * r * c)))
    return CheckResult("plane-wave partial sums", worst <= tol, worst, tol, "kr <= 20")


@_timed
def check_greens_sum(n=200, seed=SWEEP_SEED + 5, tol=1e-8, l_max=60,
                     max_ratio=0.7) -> CheckResult:
    """Partial-wave sum of the radial kernel rebuilds ``-exp(ikR) / (4 pi R)``.

    The sum converges like ``(r_< / r_>)**l``, so 60 terms reach 1e-8 only
    for radius ratios up to about 0.7; pairs closer than that are redrawn.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    ls = np.arange(l_max + 1)
    for _ in range(n):
        w = rng.uniform(0.2, 3.0) * (1.0 if rng.random() < 0.7 else 1j)
        x1, x2 = rng.normal(size=3), rng.normal(size=3)
        x1 *= rng.uniform(0.2, 1.5) / np.linalg.norm(x1)
        x2 *= rng.uniform(0.2, 1.5) / np.linalg.norm(x2)
        r1, r2 = np.linalg.norm(x1), np.linalg.norm(x2)
        if min(r1, r2) > max_ratio * max(r1, r2):
            continue
        dist = np.linalg.norm(x1 - x2)
        pl = field.legendre_table(l_max, float(x1 @ x2 / (r1 * r2)))
        lo, hi = min(r1, r2), max(r1, r2)
        j, _ = specfun.spherical_jn_table(l_max, np.array([w * lo]))
        h, _ = specfun.spherical_h1_table(l_max, np.array([w * hi]))
        total = np.sum(w / (4j * math.pi) * (2 * ls + 1) * j[:, 0] * h[:, 0] * pl)
        exact = -np.exp(1j * w * dist) / (4 * math.pi * dist)
        worst = max(worst, abs(total - exact) / abs(exact))
    return CheckResult("Green's function partial waves", worst <= tol, worst, tol)


# -- specfun -------------------------------------------------------------------

def specfun_samples(n: int, seed: int, l_max: int = 40):
    """``(l, x)`` with ``0.1 <= |x| <= 100`` in the closed upper half plane.

    A third each are real, purely imaginary and general complex.
    """
    rng = np.random.default_rng(seed)
    l = rng.integers(0, l_max + 1, n)
    mod = 10.0 ** rng.uniform(-1.0, 2.0, n)
    kind = rng.integers(0, 3, n)
    phase = np.where(kind == 0, 0.0, np.where(kind == 1, math.pi / 2,
                                                rng.uniform(0.0, math.pi, n)))
    return l, mod * np.exp(1j * phase)


@_timed
def check_specfun_identities(n=10_000, seed=SWEEP_SEED + 6) -> CheckResult:
    """Wronskians, recurrence, derivative identity and conjugation symmetry."""
    ls, xs = specfun_samples(n, seed)
    l_top = int(ls.max()) + 1
    j, dj = specfun.spherical_jn_table(l_top, xs)
    h, dh = specfun.spherical_h1_table(l_top, xs)
    jc, _ = specfun.spherical_jn_table(l_top, np.conj(xs))
    jz, djz = specfun.cylinder_table(l_top, xs, "J")
    hz, dhz = specfun.cylinder_table(l_top, xs, "H1")
    idx = np.arange(n)

    def at(tab, dl=0):
        return tab[ls + dl, idx]

    w_sph = at(j) * at(dh) - at(dj) * at(h)
    e_wsph = np.abs(w_sph - 1j / xs ** 2) / np.abs(1j / xs ** 2)
    w_cyl = at(jz) * at(dhz) - at(djz) * at(hz)
    e_wcyl = np.abs(w_cyl - 2j / (math.pi * xs)) / np.abs(2j / (math.pi * xs))

    pos = ls >= 1
    ip = idx[pos]
    lp = ls[pos]
    e_rec = []
    e_der = []
    for tab, der in ((j, dj), (h, dh)):
        lhs = tab[lp - 1, ip] + tab[lp + 1, ip]
        rhs = (2 * lp + 1) / xs[pos] * tab[lp, ip]
        scale = np.abs(tab[lp - 1, ip]) + np.abs(tab[lp + 1, ip])
        e_rec.append(np.abs(lhs - rhs) / scale)
        d_rhs = tab[lp - 1, ip] - (lp + 1) / xs[pos] * tab[lp, ip]
        d_scale = np.abs(tab[lp - 1, ip]) + np.abs((lp + 1) / xs[pos] * tab[lp, ip])
        e_der.append(np.abs(der[lp, ip] - d_rhs) / d_scale)
    e_conj = np.abs(at(jc) - np.conj(at(j))) / np.maximum(np.abs(at(j)), 1e-300)

    parts = {
        "sph Wronskian": (float(e_wsph.max()), 1e-12),
        "cyl Wronskian": (float(e_wcyl.max()), 1e-12),
        "recurrence": (float(max(e.max() for e in e_rec)), 1e-11),
        "derivative": (float(max(e.max() for e in e_der)), 1e-11),
        "conjugation": (float(e_conj.max()), 1e-12),
    }
    passed = all(v <= t for v, t in parts.values())
    measured = max(v / t for v, t in parts.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, (v, _) in parts.items())
    return CheckResult(f"specfun identities ({n} samples)", passed, measured, 1.0,
                       detail + " (measured is worst ratio to tolerance)")


_KINDS = (("J", "J"), ("J", "H1"), ("H1", "J"), ("H1", "H1"))


def lommel_samples(n: int, seed: int, l_max: int = 20):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        kz, kw = _KINDS[i % 4]
        l = int(rng.integers(0, l_max + 1))

        def wavenumber():
            m = rng.uniform(0.2, 5.0)
            choice = rng.integers(0, 3)
            if choice == 0:
                return complex(m)
            if choice == 1:
                return 1j * m
            return m * np.exp(1j * rng.uniform(0.0, math.pi / 2))

        alpha = wavenumber()
        beta = alpha if i % 10 == 9 else wavenumber()
        # closed J-J pairs may start at the origin; Hankel factors may not
        lo = 0.0 if kz == kw == "J" and i % 3 == 0 else rng.uniform(0.3, 1.5)
        hi = lo + rng.uniform(0.1, 3.0)
        out.append((l, alpha, beta, kz, kw, lo, hi))
    return out


@_timed
def check_lommel(n=2000, seed=SWEEP_SEED + 7, tol=1e-8, chunk=250) -> CheckResult:
    """Lommel closed forms against adaptive quadrature, all kind pairs.

    Error is measured relative to ``int |z w| r**2 dr`` so intervals on
    which the integral happens to cancel are still held to a meaningful
    standard.
    """
    samples = lommel_samples(n, seed)
    worst = 0.0
    for start in range(0, n, chunk):
        block = samples[start:start + chunk]
        ls = np.array([s[0] for s in block])
        al = np.array([s[1] for s in block])
        be = np.array([s[2] for s in block])
        lo = np.array([s[5] for s in block])
        hi = np.array([s[6] for s in block])
        l_top = int(ls.max())

        def integrand(t):
            r = lo[:, None] + (hi - lo)[:, None] * t[None, :]
            vals = np.empty((2, len(block), t.size), dtype=complex)
            for kind_pair in set((s[3], s[4]) for s in block):
                m = np.array([(s[3], s[4]) == kind_pair for s in block])
                z, _ = specfun._table(kind_pair[0], l_top, al[m, None] * r[m])
                w, _ = specfun._table(kind_pair[1], l_top, be[m, None] * r[m])
                f = z[ls[m], np.arange(m.sum())] * w[ls[m], np.arange(m.sum())]
                f = f * r[m] ** 2 * (hi - lo)[m, None]
                vals[0, m] = f
                vals[1, m] = np.abs(f)
            return vals

        quad = integrate(integrand, 0.0, 1.0, abs_tol=1e-14, rel_tol=1e-13)
        for i, (l, alpha, beta, kz, kw, r_lo, r_hi) in enumerate(block):
            if specfun.is_degenerate(alpha, beta):
                res = specfun.lommel_degenerate(l, alpha, kz, kw, r_lo, r_hi)
            else:
                res = specfun.lommel_closed(l, alpha, beta, kz, kw, r_lo, r_hi)
            err = abs(res.value - quad.value[0, i]) / abs(quad.value[1, i])
            worst = max(worst, err)
    return CheckResult(f"Lommel closed forms ({n} samples)", worst <= tol, worst, tol)


# -- oracle --------------------------------------------------------------------

@_timed
def check_numerov_oracle(n=50, seed=SWEEP_SEED + 8, l_top=10, tol=1e-6,
                         tol_swave=1e-8) -> CheckResult:
    """Coefficient-route phase shifts against direct radial integration."""
    worst = 0.0
    for p in sweep_parameters(n, seed):
        wn = wavenumbers(p)
        a = p[0]
        l_max = max(solver.choose_lmax(wn, a), l_top)
        delta = field.observables(solver.solve(wn, a, l_max), wn).phase_shifts
        for l in range(l_top + 1):
            gap = abs(oracle.wrap_pi(oracle.phase_shift_oracle(wn, a, l) - delta[l]))
            worst = max(worst, gap)
    wn = derive_wavenumbers(StepPotential(1.0, -1.0, 0.0), BeamSpec(1.0))
    delta0 = field.observables(solver.solve(wn, 1.0, 8), wn).phase_shifts[0]
    swave = abs(oracle.wrap_pi(delta0 - oracle.s_wave_phase_shift(wn, 1.0)))
    passed = worst <= tol and swave <= tol_swave
    return CheckResult("Numerov oracle phase shifts", passed, worst, tol,
                       f"{n} sets, l <= {l_top}; s-wave closed form gap {swave:.1e} "
                       f"(tol {tol_swave:.0e})")


@_timed
def check_numerov_order(tol_low=12.0, tol_high=20.0) -> CheckResult:
    """Halving the Numerov step cuts successive differences by about 16.

    Three halvings from the step bound (four step sizes) give three
    differences and two ratios; a further halving reaches roundoff.
    """
    # deep well with k1 a = 40 so truncation error sits well above roundoff
    wn = derive_wavenumbers(StepPotential(4.0, -99.0, 0.0), BeamSpec(1.0))
    h = oracle.max_step(wn, 4.0)
    deltas = [oracle.phase_shift_oracle(wn, 4.0, 1, h / 2 ** i, richardson=False)
              for i in range(4)]
    diffs = [abs(oracle.wrap_pi(d1 - d2)) for d1, d2 in zip(deltas, deltas[1:])]
    ratios = [d1 / d2 for d1, d2 in zip(diffs, diffs[1:])]
    passed = all(tol_low <= r <= tol_high for r in ratios)
    worst = max(abs(r - 16.0) for r in ratios)
    return CheckResult("Numerov fourth-order convergence", passed, worst, 4.0,
                       "ratios " + ", ".join(f"{r:.2f}" for r in ratios))


# -- cli -------------------------------------------------------------------------

@_timed
def check_run_determinism() -> CheckResult:
    """Two runs of the same configuration write byte-identical CSV files."""
    import tempfile
    from pathlib import Path

    from . import cli

    config = cli.example_config()
    with tempfile.TemporaryDirectory() as tmp:
        bodies = []
        for name in ("first", "second"):
            out = Path(tmp) / name
            report = cli.run(cli.parse_config(config))
            cli.emit_outputs(report, out)
            bodies.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
    same = bodies[0] == bodies[1] and len(bodies[0]) == 4
    return CheckResult("run determinism", same, 0.0 if same else 1.0, 0.0,
                       f"{len(bodies[0])} CSV files compared")


# -- registry ----------------------------------------------------------------------

QUICK = {
    "route_equivalence": lambda: check_route_equivalence(n=40),
    "det_m": lambda: check_det_m(n=40),
    "system_identity": lambda: check_system_identity(n=40),
    "vinf_shift": lambda: check_vinf_shift(n=20),
    "vinf_limit": lambda: check_vinf_limit(),
    "unitarity": lambda: check_unitarity(n=40),
    "residuals": lambda: check_residuals(n_sets=4, n_points=8),
    "interface_continuity": lambda: check_interface_continuity(n=20),
    "plane_wave": lambda: check_plane_wave(n=100),
    "greens_sum": lambda: check_greens_sum(n=50),
    "specfun_identities": lambda: check_specfun_identities(n=2000),
    "lommel": lambda: check_lommel(n=400),
    "numerov_oracle": lambda: check_numerov_oracle(n=6, l_top=6),
    "numerov_order": lambda: check_numerov_order(),
    "run_determinism": lambda: check_run_determinism(),
}

FULL: Dict[str, Callable[[], CheckResult]] = {
    "route_equivalence": check_route_equivalence,
    "det_m": check_det_m,
    "system_identity": check_system_identity,
    "vinf_shift": check_vinf_shift,
    "vinf_limit": check_vinf_limit,
    "unitarity": check_unitarity,
    "residuals": check_residuals,
    "interface_continuity": check_interface_continuity,
    "plane_wave": check_plane_wave,
    "greens_sum": check_greens_sum,
    "specfun_identities": check_specfun_identities,
    "lommel": check_lommel,
    "numerov_oracle": check_numerov_oracle,
    "numerov_order": check_numerov_order,
    "run_determinism": check_run_determinism,
}
