import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import spherical_jn, spherical_yn

from sphwave import specfun
from sphwave.errors import DegenerateWavenumberError, DomainError, SpecialFunctionOverflow
from sphwave.quadrature import integrate


# values from mpmath at 50 digits: 60-term ascending series for j_l and the
# finite elementary sum for h_l
J2_AT_1p5_0p5I = complex(0.12433664609072109069, 0.073320885266404103107)
DJ2_AT_1p5_0p5I = complex(0.15708343039712701945, 0.012294552394162323248)
H3_AT_2 = complex(0.060722097662874828461, -1.4843665574430799239)
DH3_AT_2 = complex(0.077003753731396921401, 2.2347416901985057778)


def _mp_hankel_sum(l, x):
    x = mp.mpc(x)
    total = sum((1j) ** m * mp.factorial(l + m) / (mp.factorial(m) * mp.factorial(l - m)
                                                    * (2 * x) ** m) for m in range(l + 1))
    return complex((-1j) ** (l + 1) * mp.exp(1j * x) / x * total)


def _mp_jn(l, x):
    x = mp.mpc(x)
    return complex(mp.sqrt(mp.pi / (2 * x)) * mp.besselj(l + mp.mpf(1) / 2, x))


def test_origin_values():
    p0 = specfun.sph_bessel_j(0, 0.0)
    p1 = specfun.sph_bessel_j(1, 0.0)
    assert p0.value == 1 and p0.derivative == 0
    assert p1.value == 0 and p1.derivative == pytest.approx(1 / 3, abs=1e-16)


def test_j2_series_oracle():
    p = specfun.sph_bessel_j(2, 1.5 + 0.5j)
    assert abs(p.value - J2_AT_1p5_0p5I) <= 1e-13 * abs(J2_AT_1p5_0p5I)
    assert abs(p.derivative - DJ2_AT_1p5_0p5I) <= 1e-13 * abs(DJ2_AT_1p5_0p5I)


def test_h3_closed_form_oracle():
    p = specfun.sph_hankel1(3, 2.0)
    assert abs(p.value - H3_AT_2) <= 1e-13 * abs(H3_AT_2)
    assert abs(p.derivative - DH3_AT_2) <= 1e-13 * abs(DH3_AT_2)


@pytest.mark.parametrize("x", [math.pi, 1.0])
def test_h0_elementary(x):
    assert specfun.sph_hankel1(0, x).value == pytest.approx(-1j * cmath.exp(1j * x) / x,
                                                             rel=1e-15)


def test_h0_at_pi_is_i_over_pi():
    assert abs(specfun.sph_hankel1(0, math.pi).value - 1j / math.pi) < 1e-15


@pytest.mark.parametrize("l,x", [(0, 2.0), (5, 0.3), (10, 3 + 4j), (40, 0.1j), (25, 77 + 5j)])
def test_wronskian_sph_examples(l, x):
    w = specfun.wronskian_sph(l, x)
    assert abs(w - 1j / x ** 2) <= 1e-12 * abs(1j / x ** 2)


def test_wronskian_cyl_is_half_order_form():
    # 2i/(pi x) for the half-index pair
    for x in (2.0, 1 + 1j, 0.5j):
        assert abs(specfun.wronskian_cyl(1, x) - 2j / (math.pi * x)) < 1e-13 * abs(2 / x)


def test_cyl_from_sph_half_order_identity():
    # J_{1/2}(x) = sqrt(2/(pi x)) sin x
    for x in (1.0, math.pi / 2):
        jj = specfun.cyl_bessel_j(0, x)
        assert jj.value == pytest.approx(math.sqrt(2 / (math.pi * x)) * math.sin(x), rel=1e-15)
    assert specfun.cyl_bessel_j(0, 1.0).value == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1))


def test_cyl_table_matches_scalar():
    x = np.array([0.7 + 0.2j, 3.0, 1j])
    vals, ders = specfun.cylinder_table(6, x, "H1")
    for i, xi in enumerate(x):
        p = specfun.cyl_hankel1(6, xi)
        assert vals[6, i] == pytest.approx(p.value, rel=1e-15)
        assert ders[6, i] == pytest.approx(p.derivative, rel=1e-15)


@pytest.mark.parametrize("l", [0, 1, 7, 20, 50])
@pytest.mark.parametrize("x", [0.05, 0.9 + 0.3j, 2.5j, 12.0 - 0.0j, 40 + 20j, 99.0])
def test_jn_against_mpmath(l, x):
    mp.mp.dps = 40
    ref = _mp_jn(l, x)
    got = specfun.sph_bessel_j(l, x).value
    assert abs(got - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("l", [0, 3, 15, 50])
@pytest.mark.parametrize("x", [0.3, 1 + 1j, 8.0, 30 + 2j, 0.8j])
def test_hn_against_finite_sum(l, x):
    mp.mp.dps = 60
    ref = _mp_hankel_sum(l, x)
    got = specfun.sph_hankel1(l, x).value
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_against_scipy_real_axis():
    x = np.linspace(0.1, 100, 257)
    j, dj = specfun.spherical_jn_table(30, x)
    h, _ = specfun.spherical_h1_table(30, x)
    for l in (0, 1, 10, 30):
        ref = spherical_jn(l, x)
        assert np.max(np.abs(j[l] - ref) / np.maximum(np.abs(ref), 1e-3)) < 1e-12
        assert np.allclose(dj[l], spherical_jn(l, x, derivative=True), rtol=1e-11, atol=1e-14)
        assert np.allclose(h[l].imag, spherical_yn(l, x), rtol=1e-12)


@pytest.mark.parametrize("x", [72.0, 850.5, 9851.941470735368])
def test_oscillatory_region_backward_recurrence(x):
    # just past the turning point the recurrence needs a wide starting margin
    j, _ = specfun.spherical_jn_table(60, np.array([x]))
    ref = spherical_jn(np.arange(61), x)
    assert np.max(np.abs(j[:, 0] - ref)) < 1e-12 / x


def test_large_order_small_argument_no_cancellation():
    # closed trigonometric forms would lose every digit here
    v = specfun.sph_bessel_j(40, 0.5).value
    mp.mp.dps = 40
    assert abs(v - _mp_jn(40, 0.5)) <= 1e-13 * abs(v)


@pytest.mark.filterwarnings("error")
@pytest.mark.parametrize("x", [316.2j, 3 + 690j, 50 + 600j])
def test_large_imaginary_argument_without_overflow(x):
    mp.mp.dps = 400
    for l in (0, 5, 30):
        ref = _mp_jn(l, x)
        assert abs(specfun.sph_bessel_j(l, x).value - ref) <= 1e-12 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(l=st.integers(0, 40), r=st.floats(0.1, 100), t=st.floats(0.0, math.pi))
def test_wronskian_property(l, r, t):
    x = r * cmath.exp(1j * t)
    assert abs(specfun.wronskian_sph(l, x) * x * x - 1j) < 1e-12


@settings(max_examples=200, deadline=None)
@given(l=st.integers(0, 60), r=st.floats(0.1, 100), t=st.floats(-math.pi, math.pi))
def test_conjugation_symmetry(l, r, t):
    x = r * cmath.exp(1j * t)
    if abs(x.imag) > 650:
        return
    a = specfun.sph_bessel_j(l, x.conjugate()).value
    b = specfun.sph_bessel_j(l, x).value.conjugate()
    assert abs(a - b) <= 1e-14 * abs(b) + 1e-300


@settings(max_examples=100, deadline=None)
@given(l=st.integers(1, 60), r=st.floats(0.1, 100), t=st.floats(0.0, math.pi))
def test_recurrence_property(l, r, t):
    x = r * cmath.exp(1j * t)
    j, _ = specfun.spherical_jn_table(l + 1, np.array([x]))
    lhs = j[l - 1, 0] + j[l + 1, 0]
    rhs = (2 * l + 1) / x * j[l, 0]
    assert abs(lhs - rhs) <= 1e-11 * (abs(j[l - 1, 0]) + abs(j[l + 1, 0]))


class TestDomain:
    def test_order_limits(self):
        with pytest.raises(DomainError):
            specfun.sph_bessel_j(201, 1.0)
        with pytest.raises(DomainError):
            specfun.sph_bessel_j(-1, 1.0)
        with pytest.raises(DomainError):
            specfun.sph_bessel_j(1.5, 1.0)

    def test_argument_limits(self):
        with pytest.raises(DomainError):
            specfun.sph_bessel_j(0, 2e4)
        with pytest.raises(SpecialFunctionOverflow):
            specfun.sph_bessel_j(0, 800j)

    def test_hankel_singular_and_lower_half_plane(self):
        with pytest.raises(DomainError):
            specfun.sph_hankel1(0, 0.0)
        with pytest.raises(DomainError):
            specfun.sph_hankel1(0, 1 - 0.5j)
        with pytest.raises(DomainError):
            specfun.wronskian_sph(0, 0)

    def test_half_order_conversion_at_zero(self):
        with pytest.raises(DomainError):
            specfun.cyl_bessel_j(0, 0.0)

    def test_kind(self):
        with pytest.raises(DomainError):
            specfun.spherical_pair(0, 1.0, "Y")


class TestLommel:
    def test_zero_crossing_interval(self):
        # int_0^pi j0(r) j0(2r) r^2 dr vanishes exactly
        res = specfun.lommel_closed(0, 1.0, 2.0, "J", "J", 0.0, math.pi)
        assert abs(res.value) < 1e-14
        assert res.value == res.upper_limit_term - res.lower_limit_term

    def test_tiny_interval(self):
        res = specfun.lommel_closed(0, 1.0, 2.0, "J", "J", 0.0, 1e-9)
        assert abs(res.value) < 1e-26

    def test_complex_wavenumber_against_quadrature(self):
        # mpmath quadrature of j_2(1.3 r) j_2(0.7i r) r^2 on [0, 1]
        res = specfun.lommel_closed(2, 1.3, 0.7j, "J", "J", 0.0, 1.0)
        assert abs(res.value - (-0.00049136743344291927051)) < 1e-15

    @pytest.mark.parametrize("upper,expected", [(math.pi, math.pi / 2), (2 * math.pi, math.pi)])
    def test_degenerate_sin_squared(self, upper, expected):
        res = specfun.lommel_degenerate(0, 1.0, "J", "J", 0.0, upper)
        assert res.value == pytest.approx(expected, rel=1e-14)

    def test_degenerate_l1(self):
        res = specfun.lommel_degenerate(1, 2.0, "J", "J", 0.0, 1.0)
        assert res.value == pytest.approx(0.049673558869639369812, rel=1e-13)

    def test_degenerate_pair_rejected(self):
        with pytest.raises(DegenerateWavenumberError):
            specfun.lommel_closed(0, 1.0, 1.0 + 1e-12, "J", "J", 0.0, 1.0)
        assert specfun.is_degenerate(1.0, 1.0 + 1e-12)
        assert not specfun.is_degenerate(1.0, 1.0 + 1e-6)

    def test_hankel_at_origin_rejected(self):
        with pytest.raises(DomainError):
            specfun.lommel_closed(0, 1.0, 2.0, "H1", "J", 0.0, 1.0)

    def test_bad_limits(self):
        with pytest.raises(DomainError):
            specfun.lommel_closed(0, 1.0, 2.0, "J", "J", 1.0, 1.0)

    @pytest.mark.parametrize("kz,kw", [("J", "J"), ("J", "H1"), ("H1", "J"), ("H1", "H1")])
    @pytest.mark.parametrize("alpha,beta", [(1.1, 0.4), (2 + 0.5j, 0.9j), (3.0, 3.0)])
    def test_all_kinds_against_quadrature(self, kz, kw, alpha, beta):
        lo, hi, l = 0.4, 2.3, 3

        def f(r):
            zt, _ = specfun._table(kz, l, alpha * r)
            wt, _ = specfun._table(kw, l, beta * r)
            return (zt[l] * wt[l] * r * r)[None, :]

        quad = integrate(f, lo, hi, abs_tol=1e-14, rel_tol=1e-14)
        if specfun.is_degenerate(alpha, beta):
            res = specfun.lommel_degenerate(l, alpha, kz, kw, lo, hi)
        else:
            res = specfun.lommel_closed(l, alpha, beta, kz, kw, lo, hi)
        assert abs(res.value - quad.value[0]) <= 1e-10 * abs(quad.value[0])
