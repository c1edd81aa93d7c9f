"""Exterior/interior partial-wave coefficients for the spherical step.

Three independent routes produce the same pair ``(A_gt_l, A_lt_l)`` per
angular momentum ``l``:

``solve_inhomogeneous``
    Explicit closed forms from the driven integral equation: the interior
    coefficient first, then the exterior one from it.
``solve_homogeneous``
    The per-mode 2x2 system ``N_l A_l = B_l`` left after the integral
    equation without a driving term is reduced; the outer factor ``M_l`` has
    constant determinant ``2/(pi i a)`` and is dropped.
``solve_boundary_matching``
    Continuity of the wavefunction and its radial derivative at ``r = a``.

The exterior field is ``psi_inc + sum_l A_gt_l h_l(kr) P_l`` and the
interior field ``sum_l A_lt_l j_l(k1 r) P_l``. With that normalization the
S-matrix element is ``S_l = 1 + 2 (-i)**l A_gt_l / (2l + 1)``.

All routes use the half-order (``J_{l+1/2}``, ``H_{l+1/2}``) forms except
boundary matching, which stays spherical so it shares no transcription
with the other two.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import List

import numpy as np

from . import specfun
from .errors import DomainError, LmaxCapWarning, SingularSystemError
from .model import WaveNumbers

L_CAP = 200
SINGULAR_RTOL = 1e-13
ROUTES = ("inhomogeneous", "homogeneous", "matching")


@dataclass(frozen=True)
class ModeCoefficients:
    l: int
    a_gt: complex
    a_lt: complex


@dataclass(frozen=True)
class ModeSystem:
    m_mat: np.ndarray
    n_mat: np.ndarray
    b_vec: np.ndarray

    @property
    def det_m(self) -> complex:
        return complex(np.linalg.det(self.m_mat))


def incident_weight(l: int) -> complex:
    """``i**l (2l + 1)``, the plane-wave partial amplitude, exact in ``l mod 4``."""
    return (1, 1j, -1, -1j)[l % 4] * (2 * l + 1)


def _ipow(n: int) -> complex:
    return (1, 1j, -1, -1j)[n % 4]


def _check_inputs(wn: WaveNumbers, a, l_max) -> None:
    if not a > 0:
        raise DomainError(f"radius must be positive, got {a}")
    if isinstance(l_max, bool) or int(l_max) != l_max or l_max < 0:
        raise DomainError(f"l_max must be a nonnegative integer, got {l_max!r}")
    if l_max > L_CAP:
        raise DomainError(f"l_max {l_max} exceeds cap {L_CAP}")
    if wn.k1 == 0:
        raise DomainError(
            "interior wavenumber vanishes (E == V1); the j_l(k1 r) interior "
            "expansion degenerates"
        )


def _singular(l, magnitude, scale, what) -> SingularSystemError:
    cond = float(scale / magnitude) if magnitude else math.inf
    return SingularSystemError(
        f"{what} is numerically singular at l={l} (condition ~ {cond:.3g}); "
        "a quasi-bound state sits at these parameters",
        l=l,
        condition=cond,
    )


def solve_2x2(mat, rhs, l=None):
    """Gaussian elimination with the larger-magnitude pivot in column 0."""
    (m00, m01), (m10, m11) = mat
    r0, r1 = rhs
    det = m00 * m11 - m01 * m10
    scale = abs(m00 * m11) + abs(m01 * m10)
    if abs(det) <= SINGULAR_RTOL * scale:
        raise _singular(l, abs(det), scale, "2x2 mode system")
    if abs(m10) > abs(m00):
        m00, m01, r0, m10, m11, r1 = m10, m11, r1, m00, m01, r0
    factor = m10 / m00
    x1 = (r1 - factor * r0) / (m11 - factor * m01)
    x0 = (r0 - m01 * x1) / m00
    return x0, x1


# -- inhomogeneous route ---------------------------------------------------

def solve_inhomogeneous(wn: WaveNumbers, a: float, l_max: int) -> List[ModeCoefficients]:
    """Leapfrog solution: ``A_lt`` in closed form, then ``A_gt`` from it."""
    _check_inputs(wn, a, l_max)
    k, k1 = wn.k, wn.k1
    jk1, djk1 = specfun.cylinder_table(l_max, np.array([k1 * a]), "J")
    jk, djk = specfun.cylinder_table(l_max, np.array([k * a]), "J")
    hk, dhk = specfun.cylinder_table(l_max, np.array([k * a]), "H1")
    root_in = cmath.sqrt(k1 / k)
    root_out = cmath.sqrt(k / k1)
    out = []
    for l in range(l_max + 1):
        t1 = k1 * djk1[l, 0] * hk[l, 0]
        t2 = k * jk1[l, 0] * dhk[l, 0]
        bracket = t1 - t2
        if abs(bracket) <= SINGULAR_RTOL * (abs(t1) + abs(t2)):
            raise _singular(l, abs(bracket), abs(t1) + abs(t2), "interior bracket")
        a_lt = 2 * _ipow(l - 1) / (math.pi * a) * root_in * (2 * l + 1) / bracket
        link = k1 * djk1[l, 0] * jk[l, 0] - k * jk1[l, 0] * djk[l, 0]
        a_gt = math.pi * a / 2j * root_out * link * a_lt
        out.append(ModeCoefficients(l, complex(a_gt), complex(a_lt)))
    return out


# -- homogeneous route -----------------------------------------------------

def _n_and_b(wn: WaveNumbers, a: float, l_max: int):
    k, k1 = wn.k, wn.k1
    jk1, djk1 = specfun.cylinder_table(l_max, np.array([k1 * a]), "J")
    jk, djk = specfun.cylinder_table(l_max, np.array([k * a]), "J")
    hk, dhk = specfun.cylinder_table(l_max, np.array([k * a]), "H1")
    rk, rk1 = math.sqrt(k), cmath.sqrt(k1)
    n = np.empty((l_max + 1, 2, 2), dtype=complex)
    n[:, 0, 0] = -rk * dhk[:, 0]
    n[:, 0, 1] = rk1 * djk1[:, 0]
    n[:, 1, 0] = -hk[:, 0] / rk
    n[:, 1, 1] = jk1[:, 0] / rk1
    weights = np.array([incident_weight(l) for l in range(l_max + 1)])
    b = np.empty((l_max + 1, 2), dtype=complex)
    b[:, 0] = weights / rk * k * djk[:, 0]
    b[:, 1] = weights / rk * jk[:, 0]
    return n, b


def _m_matrices(wn: WaveNumbers, a: float, l_max: int) -> np.ndarray:
    k0 = wn.k0
    if k0 == 0:
        raise DomainError("reference wavenumber k0 vanishes (E == 0); M_l is undefined")
    j0, dj0 = specfun.cylinder_table(l_max, np.array([k0 * a]), "J")
    h0, dh0 = specfun.cylinder_table(l_max, np.array([k0 * a]), "H1")
    m = np.empty((l_max + 1, 2, 2), dtype=complex)
    m[:, 0, 0] = j0[:, 0]
    m[:, 0, 1] = -k0 * dj0[:, 0]
    m[:, 1, 0] = h0[:, 0]
    m[:, 1, 1] = -k0 * dh0[:, 0]
    return m


def assemble_mode_system(wn: WaveNumbers, a: float, l: int) -> ModeSystem:
    """``M_l``, ``N_l`` and ``B_l`` for one angular momentum."""
    _check_inputs(wn, a, l)
    n, b = _n_and_b(wn, a, l)
    m = _m_matrices(wn, a, l)
    return ModeSystem(m_mat=m[l], n_mat=n[l], b_vec=b[l])


def assemble_mode_systems(wn: WaveNumbers, a: float, l_max: int) -> List[ModeSystem]:
    """:func:`assemble_mode_system` for every ``l <= l_max`` from shared tables."""
    _check_inputs(wn, a, l_max)
    n, b = _n_and_b(wn, a, l_max)
    m = _m_matrices(wn, a, l_max)
    return [ModeSystem(m_mat=m[l], n_mat=n[l], b_vec=b[l]) for l in range(l_max + 1)]


def solve_homogeneous(wn: WaveNumbers, a: float, l_max: int) -> List[ModeCoefficients]:
    """Solve ``N_l A_l = B_l`` for each ``l``.

    ``M_l`` is never inverted: its determinant is the constant ``2/(pi i a)``.
    ``N_l`` and ``B_l`` do not involve ``k0``, so any ``V_inf`` is accepted,
    including zero.
    """
    _check_inputs(wn, a, l_max)
    n, b = _n_and_b(wn, a, l_max)
    out = []
    for l in range(l_max + 1):
        a_gt, a_lt = solve_2x2(n[l], b[l], l=l)
        out.append(ModeCoefficients(l, complex(a_gt), complex(a_lt)))
    return out


# -- boundary matching -----------------------------------------------------

def matching_system(wn: WaveNumbers, a: float, l: int, form: str = "spherical"):
    """Continuity system at ``r = a`` as ``(matrix, rhs)`` for ``(A_gt, A_lt)``.

    ``form="spherical"``: rows are continuity of ``psi_l`` and of
    ``d psi_l / dr``. ``form="half_order"``: rows are continuity of
    ``sqrt(2r/pi) psi_l`` and of its radial derivative, obtained from the
    spherical rows by that (invertible) row transformation.
    """
    _check_inputs(wn, a, l)
    k, k1 = wn.k, wn.k1
    jk = specfun.sph_bessel_j(l, k * a)
    hk = specfun.sph_hankel1(l, k * a)
    jk1 = specfun.sph_bessel_j(l, k1 * a)
    c = incident_weight(l)
    mat = np.array([
        [-hk.value, jk1.value],
        [-k * hk.derivative, k1 * jk1.derivative],
    ], dtype=complex)
    rhs = np.array([c * jk.value, c * k * jk.derivative], dtype=complex)
    if form == "spherical":
        return mat, rhs
    if form != "half_order":
        raise DomainError(f"unknown form {form!r}")
    w = math.sqrt(2.0 * a / math.pi)
    transform = w * np.array([[1.0, 0.0], [1.0 / (2.0 * a), 1.0]])
    return transform @ mat, transform @ rhs


def solve_boundary_matching(wn: WaveNumbers, a: float, l_max: int) -> List[ModeCoefficients]:
    _check_inputs(wn, a, l_max)
    k, k1 = wn.k, wn.k1
    jk, djk = specfun.spherical_jn_table(l_max, np.array([k * a]))
    hk, dhk = specfun.spherical_h1_table(l_max, np.array([k * a]))
    jk1, djk1 = specfun.spherical_jn_table(l_max, np.array([k1 * a]))
    out = []
    for l in range(l_max + 1):
        c = incident_weight(l)
        mat = ((-hk[l, 0], jk1[l, 0]), (-k * dhk[l, 0], k1 * djk1[l, 0]))
        rhs = (c * jk[l, 0], c * k * djk[l, 0])
        a_gt, a_lt = solve_2x2(mat, rhs, l=l)
        out.append(ModeCoefficients(l, complex(a_gt), complex(a_lt)))
    return out


SOLVERS = {
    "inhomogeneous": solve_inhomogeneous,
    "homogeneous": solve_homogeneous,
    "matching": solve_boundary_matching,
}


def solve(wn: WaveNumbers, a: float, l_max: int, route: str = "inhomogeneous"):
    try:
        fn = SOLVERS[route]
    except KeyError:
        raise DomainError(f"unknown route {route!r}; expected one of {ROUTES}") from None
    return fn(wn, a, l_max)


# -- truncation ------------------------------------------------------------

def lmax_floor(wn: WaveNumbers, a: float) -> int:
    return int(math.ceil(abs(wn.k) * a)) + 4


def choose_lmax(wn: WaveNumbers, a: float, rel_tol: float = 1e-12) -> int:
    """Smallest ``L >= ceil(|k| a) + 4`` with ``|A_gt_L| < rel_tol * max_{l<=L} |A_gt_l|``.

    Capped at 200 with a :class:`LmaxCapWarning`.
    """
    if not 0.0 < rel_tol < 1.0:
        raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    floor = min(lmax_floor(wn, a), L_CAP)
    upper = floor
    while True:
        coeffs = solve_boundary_matching(wn, a, upper)
        mags = np.abs([c.a_gt for c in coeffs])
        running = np.maximum.accumulate(mags)
        for L in range(floor, upper + 1):
            if running[L] == 0.0 or mags[L] < rel_tol * running[L]:
                return L
        if upper >= L_CAP:
            warnings.warn(
                f"partial-wave truncation did not reach rel_tol={rel_tol:g} by l={L_CAP}",
                LmaxCapWarning,
                stacklevel=2,
            )
            return L_CAP
        upper = min(upper + 8, L_CAP)
