import cmath
import math

import numpy as np
import pytest

from sphwave import field, solver
from sphwave.errors import DomainError, UnitarityWarning
from sphwave.field import FieldPoint
from sphwave.model import BeamSpec, StepPotential, derive_wavenumbers


def setup(a, v1, v_inf, e, l_max=None, route="matching"):
    wn = derive_wavenumbers(StepPotential(a, v1, v_inf), BeamSpec(e))
    if l_max is None:
        l_max = solver.choose_lmax(wn, a)
    return wn, solver.solve(wn, a, l_max, route)


def test_field_point_validation():
    with pytest.raises(DomainError):
        FieldPoint(-0.1, 0.0)
    with pytest.raises(DomainError):
        FieldPoint(1.0, 1.5)
    with pytest.raises(DomainError):
        FieldPoint(float("nan"), 0.0)


def test_legendre_table_low_orders():
    x = np.array([-0.3, 0.0, 0.8])
    p = field.legendre_table(3, x)
    np.testing.assert_allclose(p[2], 1.5 * x ** 2 - 0.5, atol=1e-15)
    np.testing.assert_allclose(p[3], 2.5 * x ** 3 - 1.5 * x, atol=1e-15)


@pytest.mark.parametrize("kr,cos_t", [(0.5, 0.3), (4.0, -1.0), (11.0, 0.9)])
def test_incident_partial_wave_sum(kr, cos_t):
    wn, _ = setup(1.0, 2.0, 0.0, 1.0, l_max=1)
    p = FieldPoint(kr, cos_t)
    got = field.psi_incident(wn, p, int(kr) + 25)
    assert abs(got - cmath.exp(1j * kr * cos_t)) < 1e-12


def test_interface_continuity():
    a = 1.3
    wn, coeffs = setup(a, -6.0, 0.5, 2.5)
    cos_t = np.linspace(-1, 1, 11)
    for derivative in (False, True):
        inner = field.psi_interior(coeffs, wn, a, cos_t, derivative=derivative)
        outer = field.psi_exterior(coeffs, wn, a, cos_t, derivative=derivative)
        assert np.max(np.abs(inner - outer)) < 1e-11 * np.max(np.abs(outer))


def test_greens_kernel_symmetry():
    g1 = field.greens_partial_wave(3, 1.7, 0.4, 2.2)
    g2 = field.greens_partial_wave(3, 1.7, 2.2, 0.4)
    assert g1 == g2
    with pytest.raises(DomainError):
        field.greens_partial_wave(0, 1.0, 0.0, 0.0)


class TestResiduals:
    @pytest.mark.parametrize("p", [FieldPoint(0.4, 0.2), FieldPoint(1.7, 0.2),
                                   FieldPoint(2.6, -0.9)])
    def test_inhomogeneous(self, p):
        wn, coeffs = setup(1.0, 3.0, 1.0, 2.0)
        rep = field.residual_inhomogeneous(coeffs, wn, 1.0, p)
        assert rep.converged
        assert rep.rel_residual < 1e-8

    def test_homogeneous_example(self):
        wn, coeffs = setup(1.0, 3.0, 1.0, 2.0)
        rep = field.residual_homogeneous(coeffs, wn, 1.0, FieldPoint(1.7, 0.2))
        assert rep.rel_residual <= 1e-5

    def test_homogeneous_without_floor_shift(self):
        wn, coeffs = setup(1.0, -4.0, 0.0, 1.5)
        for p in (FieldPoint(0.5, 0.1), FieldPoint(2.0, -0.4)):
            assert field.residual_homogeneous(coeffs, wn, 1.0, p).rel_residual <= 1e-8

    def test_damped_tail_cross_check(self):
        # E < 0: the kernel decays, so the exterior source can be integrated directly
        wn, coeffs = setup(1.0, -6.0, -2.0, -0.5)
        p = FieldPoint(1.6, 0.35)
        closed = field.residual_homogeneous(coeffs, wn, 1.0, p)
        direct = field.residual_homogeneous(coeffs, wn, 1.0, p, tail="quadrature",
                                            abs_tol=1e-12, rel_tol=1e-12)
        assert abs(closed.rhs - direct.rhs) < 1e-8 * abs(closed.lhs)

    def test_quadrature_tail_needs_damping(self):
        wn, coeffs = setup(1.0, 3.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            field.residual_homogeneous(coeffs, wn, 1.0, FieldPoint(1.5, 0.0), tail="quadrature")

    def test_r_split_independence(self):
        wn, coeffs = setup(1.0, -3.0, 0.5, 2.0)
        p = FieldPoint(2.2, 0.6)
        vals = [field.residual_homogeneous(coeffs, wn, 1.0, p, r_split=s).rhs
                for s in (1.5, 4.0, 9.0)]
        assert max(abs(v - vals[0]) for v in vals) < 1e-8 * abs(vals[0])

    def test_interface_point_rejected(self):
        wn, coeffs = setup(1.0, 3.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            field.residual_inhomogeneous(coeffs, wn, 1.0, FieldPoint(1.0, 0.0))
        with pytest.raises(DomainError):
            field.residual_homogeneous(coeffs, wn, 1.0, FieldPoint(1.0, 0.0))

    def test_zero_energy_rejected_by_homogeneous(self):
        wn, coeffs = setup(1.0, 3.0, -1.0, 0.0)
        with pytest.raises(DomainError):
            field.residual_homogeneous(coeffs, wn, 1.0, FieldPoint(1.5, 0.0))

    def test_lmax_stability(self):
        wn, _ = setup(1.0, -8.0, 0.0, 3.0)
        p = FieldPoint(2.0, 0.3)
        L = solver.choose_lmax(wn, 1.0)
        values = [field.psi_total(solver.solve(wn, 1.0, n), wn, 1.0, p, incident="exact")
                  for n in (L, L + 10)]
        assert abs(values[0] - values[1]) < 1e-11 * abs(values[1])

    def test_exact_incident_is_the_converged_partial_sum(self):
        wn, coeffs = setup(1.0, -8.0, 0.0, 3.0, l_max=40)
        p = FieldPoint(2.0, 0.3)
        exact = field.psi_total(coeffs, wn, 1.0, p, incident="exact")
        partial = field.psi_total(coeffs, wn, 1.0, p)
        assert abs(exact - partial) < 1e-13
        dx = field.psi_exterior(coeffs, wn, 2.0, 0.3, derivative=True, incident="exact")
        dp = field.psi_exterior(coeffs, wn, 2.0, 0.3, derivative=True)
        assert abs(dx - dp) < 1e-12
        with pytest.raises(DomainError):
            field.psi_total(coeffs, wn, 1.0, p, incident="none")


class TestObservables:
    def test_s_wave_cross_section(self):
        wn, coeffs = setup(1.0, -1.0, 0.0, 1.0, l_max=0)
        obs = field.observables(coeffs, wn)
        d = 0.3511299177452372984
        assert obs.phase_shifts[0] == pytest.approx(d, rel=1e-13)
        assert obs.cross_section_total == pytest.approx(4 * math.pi * math.sin(d) ** 2, rel=1e-13)

    def test_partial_sums_and_unitarity(self):
        wn, coeffs = setup(2.0, -10.0, 1.0, 3.0)
        obs = field.observables(coeffs, wn)
        assert np.max(np.abs(np.abs(obs.s_matrix) - 1)) < 1e-12
        assert obs.cross_section_total == pytest.approx(obs.cross_sections_partial.sum())
        assert field.optical_theorem_gap(coeffs, wn) < 1e-10

    def test_free_case(self):
        wn, coeffs = setup(1.0, 0.7, 0.7, 2.0)
        obs = field.observables(coeffs, wn)
        assert np.max(np.abs(obs.phase_shifts)) < 1e-14
        assert obs.cross_section_total < 1e-26
        # both sides are roundoff here, so only boundedness is meaningful
        assert 0.0 <= field.optical_theorem_gap(coeffs, wn) <= 1.0

    def test_unitarity_warning(self):
        wn, coeffs = setup(1.0, 2.0, 0.0, 3.0)
        broken = [solver.ModeCoefficients(c.l, 1.5 * c.a_gt, c.a_lt) for c in coeffs]
        with pytest.warns(UnitarityWarning):
            field.observables(broken, wn)

    def test_unwrap_keeps_continuity(self):
        deltas = np.array([3.0, 2.2, 1.2, 0.3, 0.01])
        s = np.exp(2j * deltas)
        np.testing.assert_allclose(field.unwrap_phase_shifts(s), deltas, atol=1e-14)

    def test_far_field_vectorized(self):
        wn, coeffs = setup(1.0, -2.0, 0.0, 2.0)
        c = np.array([-1.0, 0.0, 1.0])
        vec = field.far_field_amplitude(coeffs, wn, c)
        assert vec[2] == field.far_field_amplitude(coeffs, wn, 1.0)


def test_hard_barrier_suppresses_interior():
    mags = []
    for v1 in (10.0, 100.0, 1000.0):
        wn, coeffs = setup(1.0, v1, 0.0, 1.0)
        mags.append(abs(field.psi_total(coeffs, wn, 1.0, FieldPoint(0.0, 0.0))))
    assert mags[0] > mags[1] > mags[2]
    assert mags[2] < 1e-10


def test_sample_field_points_avoid_interface():
    pts = field.sample_field_points(2.0, 40, np.random.default_rng(3))
    r = np.array([p.r for p in pts])
    assert np.sum(r < 2.0) == 20
    assert np.all(np.abs(r - 2.0) >= 0.1 - 1e-12)
    assert r.max() <= 6.0


@pytest.mark.parametrize("k2,r,cos_t", [(1.0, 0.0, 0.4), (1.0, math.pi, 1.0), (4.0, 1.3, -0.4)])
def test_documented_plane_wave_values(k2, r, cos_t):
    wn, _ = setup(1.0, 3.0, 0.0, k2, l_max=1)
    k = math.sqrt(k2)
    got = field.psi_incident(wn, FieldPoint(r, cos_t), 40)
    assert abs(got - cmath.exp(1j * k * r * cos_t)) < 1e-12


def test_free_total_field_is_incident():
    wn, coeffs = setup(1.0, 0.3, 0.3, 2.0, l_max=20)
    for p in (FieldPoint(0.4, -0.7), FieldPoint(1.9, 0.1)):
        assert abs(field.psi_total(coeffs, wn, 1.0, p) - field.psi_incident(wn, p, 20)) < 1e-13
    assert np.max(np.abs(field.far_field_amplitude(coeffs, wn, np.linspace(-1, 1, 5)))) < 1e-14


def test_s_wave_kernel_closed_form():
    lo, hi = 0.6, 1.9
    expected = (1 / (4j * math.pi)) * (math.sin(lo) / lo) * (-1j * cmath.exp(1j * hi) / hi)
    assert abs(field.greens_partial_wave(0, 1.0, lo, hi) - expected) < 1e-16


def test_greens_partial_sum_reproduces_point_source():
    # -exp(i w |d|) / (4 pi |d|) between two points at radius ratio 0.5
    w, r1, r2, gamma = 1.3, 0.6, 1.2, 0.9
    dist = math.sqrt(r1 ** 2 + r2 ** 2 - 2 * r1 * r2 * math.cos(gamma))
    pl = field.legendre_table(60, math.cos(gamma))
    total = sum(field.greens_partial_wave(l, w, r1, r2) * pl[l] for l in range(61))
    expected = -cmath.exp(1j * w * dist) / (4 * math.pi * dist)
    assert abs(total - expected) < 1e-8 * abs(expected)


class TestDocumentedResiduals:
    def test_free_inhomogeneous_residual_vanishes(self):
        wn, coeffs = setup(1.0, 0.0, 0.0, 1.0, route="inhomogeneous")
        rep = field.residual_inhomogeneous(coeffs, wn, 1.0, FieldPoint(0.5, 0.2))
        assert rep.abs_residual < 1e-14

    @pytest.mark.parametrize("p", [FieldPoint(2.0, 0.3), FieldPoint(0.5, -1.0)])
    def test_well_inhomogeneous(self, p):
        wn, coeffs = setup(1.0, -1.0, 0.0, 1.0, route="inhomogeneous")
        assert field.residual_inhomogeneous(coeffs, wn, 1.0, p).rel_residual <= 1e-6

    def test_plane_wave_solves_shifted_free_equation(self):
        # V1 = V_inf != 0: the incident wave alone satisfies the homogeneous form
        wn, coeffs = setup(1.0, 1.5, 1.5, 3.0, route="homogeneous")
        for p in (FieldPoint(0.5, 0.3), FieldPoint(2.5, -0.8)):
            assert field.residual_homogeneous(coeffs, wn, 1.0, p).rel_residual <= 1e-8

    def test_damped_exterior_example(self):
        wn, coeffs = setup(1.0, -6.0, -2.0, -0.5, route="homogeneous")
        for p in (FieldPoint(0.6, 0.1), FieldPoint(1.8, -0.5)):
            rep = field.residual_homogeneous(coeffs, wn, 1.0, p, tail="quadrature")
            assert rep.rel_residual <= 1e-6


def test_far_field_lmax_doubling():
    wn, _ = setup(1.5, -6.0, 0.5, 4.0)
    L = solver.choose_lmax(wn, 1.5)
    cos_t = np.linspace(-1, 1, 9)
    f1 = field.far_field_amplitude(solver.solve(wn, 1.5, L), wn, cos_t)
    f2 = field.far_field_amplitude(solver.solve(wn, 1.5, 2 * L), wn, cos_t)
    assert np.max(np.abs(f1 - f2)) < 1e-10 * np.max(np.abs(f2))


def test_optical_theorem_example():
    wn, coeffs = setup(1.0, -1.0, 0.0, 1.0)
    obs = field.observables(coeffs, wn)
    forward = 4 * math.pi / wn.k * field.far_field_amplitude(coeffs, wn, 1.0).imag
    assert obs.cross_section_total == pytest.approx(forward, rel=1e-8)
