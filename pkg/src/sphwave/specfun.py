"""Spherical and half-order cylinder Bessel/Hankel functions of complex argument.

Only the functions needed for scattering off a spherical step are provided:
the regular spherical Bessel function ``j_l``, the outgoing spherical Hankel
function ``h_l^(1)``, their half-order cylinder counterparts
``J_{l+1/2}`` and ``H^(1)_{l+1/2}``, Wronskians, and closed-form Lommel
integrals of products of two of them against ``r**2``.

Every routine has a table form that returns all orders ``0..lmax`` at once
for an array of arguments; the scalar functions are thin wrappers around the
tables so both paths share one implementation.

Algorithms
----------
``j_l``
    Ascending power series for ``|x| <= 1``; elsewhere Miller's downward
    recurrence started at ``lmax + 20 + ceil(|x|)`` and normalized by least
    squares against the closed forms of ``j_0`` and ``j_1``. Running scale
    counters keep the recurrence away from overflow and let values far below
    ``j_0`` survive normalization.
``h_l^(1)``
    Upward recurrence from the closed forms of ``h_0`` and ``h_1``. The
    hankel function is the dominant solution of the recurrence, so this is
    stable for every order.

Derivatives always come from ``z_l' = z_{l-1} - (l+1)/x z_l``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateWavenumberError, DomainError, SpecialFunctionOverflow

Kind = Literal["J", "H1"]

L_SUPPORTED = 200
X_SUPPORTED = 1.0e4
IMAG_GUARD = 700.0
SERIES_RADIUS = 1.0
DEGENERATE_RTOL = 1.0e-9

_MILLER_PAD = 20
_RESCALE = 1.0e150
_LOG_RESCALE = math.log(_RESCALE)


@dataclass(frozen=True)
class BesselPair:
    """A function value together with its derivative in the full argument."""

    value: complex
    derivative: complex


@dataclass(frozen=True)
class LommelResult:
    value: complex
    lower_limit_term: complex
    upper_limit_term: complex


# -- argument checks -------------------------------------------------------

def _check_order(l) -> int:
    if isinstance(l, bool) or int(l) != l or l < 0:
        raise DomainError(f"order must be a nonnegative integer, got {l!r}")
    l = int(l)
    if l > L_SUPPORTED:
        raise DomainError(f"order {l} exceeds supported maximum {L_SUPPORTED}")
    return l


def _check_args(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise DomainError("argument must be finite")
    if x.size and np.max(np.abs(x)) > X_SUPPORTED:
        raise DomainError(f"|x| exceeds supported maximum {X_SUPPORTED:g}")
    if x.size and np.max(np.abs(x.imag)) > IMAG_GUARD:
        raise SpecialFunctionOverflow(
            f"|Im x| exceeds {IMAG_GUARD:g}; exp(|Im x|) is not representable"
        )
    return x


def _check_kind(kind) -> str:
    if kind not in ("J", "H1"):
        raise DomainError(f"kind must be 'J' or 'H1', got {kind!r}")
    return kind


# -- j_l -------------------------------------------------------------------

def _jn_series(nmax: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1, x.size), dtype=complex)
    y = -0.5 * x * x
    lead = np.ones_like(x)
    for l in range(nmax + 1):
        if l:
            lead = lead * x / (2 * l + 1)
        term = np.ones_like(x)
        total = np.ones_like(x)
        k = 0
        while True:
            term = term * y / ((k + 1) * (2 * l + 2 * k + 3))
            total = total + term
            k += 1
            if np.all(np.abs(term) <= 1e-17 * np.abs(total)) or k > 60:
                break
        out[l] = lead * total
    return out


def _jn_miller(nmax: int, x: np.ndarray) -> np.ndarray:
    # nmax >= 1: orders 0 and 1 are both needed for normalization
    # past the turning point n ~ |x| the minimal solution only wins at a rate
    # set by (n - |x|)**1.5 / sqrt|x|, hence the |x|**(1/3) margin
    xmax = float(np.max(np.abs(x)))
    start = max(nmax, int(math.ceil(xmax))) + _MILLER_PAD + int(math.ceil(12.0 * xmax ** (1.0 / 3.0)))
    f_next = np.zeros_like(x)
    f_cur = np.ones_like(x)
    count = np.zeros(x.shape, dtype=np.int64)
    vals = np.zeros((nmax + 1, x.size), dtype=complex)
    counts = np.zeros((nmax + 1, x.size), dtype=np.int64)
    for n in range(start, 0, -1):
        f_prev = (2 * n + 1) / x * f_cur - f_next
        big = np.abs(f_prev) > _RESCALE
        if big.any():
            f_prev[big] /= _RESCALE
            f_cur[big] /= _RESCALE
            count[big] += 1
        f_next, f_cur = f_cur, f_prev
        if n - 1 <= nmax:
            vals[n - 1] = f_cur
            counts[n - 1] = count

    sx, cx = np.sin(x), np.cos(x)
    j0 = sx / x
    j1 = sx / (x * x) - cx / x
    u0 = vals[0]
    u1 = vals[1] * _RESCALE ** (counts[1] - counts[0]).astype(float)
    # normalise both pairs first: for large |Im x| the raw products overflow
    su = np.maximum(np.abs(u0), np.abs(u1))
    sj = np.maximum(np.abs(j0), np.abs(j1))
    u0, u1, n0, n1 = u0 / su, u1 / su, j0 / sj, j1 / sj
    inner = (np.conj(u0) * n0 + np.conj(u1) * n1) / (np.abs(u0) ** 2 + np.abs(u1) ** 2)

    with np.errstate(divide="ignore", under="ignore", over="ignore", invalid="ignore"):
        log_mag = (
            np.log(np.abs(vals))
            + np.log(np.abs(inner)) + np.log(sj) - np.log(su)
            + (counts - counts[0]) * _LOG_RESCALE
        )
        phase = np.exp(1j * (np.angle(vals) + np.angle(inner)))
        out = np.where(vals == 0, 0.0, phase * np.exp(log_mag))
    out[0] = j0
    out[1] = j1
    return out


def _jn_values(nmax: int, x: np.ndarray) -> np.ndarray:
    flat = x.ravel()
    out = np.empty((nmax + 1, flat.size), dtype=complex)
    small = np.abs(flat) <= SERIES_RADIUS
    if small.any():
        out[:, small] = _jn_series(nmax, flat[small])
    if (~small).any():
        out[:, ~small] = _jn_miller(nmax, flat[~small])
    return out.reshape((nmax + 1,) + x.shape)


def _derivatives(vals: np.ndarray, x: np.ndarray, at_zero: np.ndarray | None) -> np.ndarray:
    """z_l' from a table holding orders 0..lmax+1."""
    lmax = vals.shape[0] - 2
    der = np.empty((lmax + 1,) + x.shape, dtype=complex)
    der[0] = -vals[1]
    safe_x = np.where(x == 0, 1.0, x)
    for l in range(1, lmax + 1):
        der[l] = vals[l - 1] - (l + 1) / safe_x * vals[l]
    if at_zero is not None and at_zero.any():
        der[:, at_zero] = 0.0
        if lmax >= 1:
            der[1, at_zero] = 1.0 / 3.0
    return der


def spherical_jn_table(lmax: int, x):
    """Values and derivatives of ``j_l(x)`` for ``l = 0..lmax``.

    Returns two arrays of shape ``(lmax + 1,) + x.shape``.
    """
    lmax = _check_order(lmax)
    x = _check_args(x)
    vals = _jn_values(lmax + 1, x)
    der = _derivatives(vals, x, x == 0)
    return vals[: lmax + 1], der


# -- h_l^(1) ---------------------------------------------------------------

def _check_upper_half(x: np.ndarray) -> None:
    if np.any(x == 0):
        raise DomainError("spherical Hankel function is singular at x = 0")
    guard = 1e-12 * np.maximum(1.0, np.abs(x))
    if np.any(x.imag < -guard):
        raise DomainError("outgoing-wave convention requires Im(x) >= 0")


def spherical_h1_table(lmax: int, x):
    """Values and derivatives of ``h_l^(1)(x)`` for ``l = 0..lmax``."""
    lmax = _check_order(lmax)
    x = _check_args(x)
    _check_upper_half(x)
    n = max(lmax + 1, 1)
    vals = np.empty((n + 1,) + x.shape, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        e = np.exp(1j * x)
        vals[0] = -1j * e / x
        vals[1] = -e * (x + 1j) / (x * x)
        for l in range(1, n):
            vals[l + 1] = (2 * l + 1) / x * vals[l] - vals[l - 1]
        der = _derivatives(vals[: lmax + 2], x, None)
    vals = vals[: lmax + 1]
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(der))):
        raise SpecialFunctionOverflow(
            f"h_l^(1) overflows for lmax={lmax} at min|x|={np.min(np.abs(x)):.3g}"
        )
    return vals, der


def cylinder_table(lmax: int, x, kind: Kind):
    """Values and derivatives of ``Z_{l+1/2}(x)`` for ``l = 0..lmax``.

    Same conversion as :func:`cyl_from_sph`, applied to a whole table.
    """
    x = _check_args(x)
    if np.any(x == 0):
        raise DomainError("half-order conversion is singular at x = 0")
    vals, der = _table(_check_kind(kind), lmax, x)
    w = np.sqrt(2.0 * x / math.pi)
    return w * vals, w * (der + vals / (2.0 * x))


# -- scalar interface ------------------------------------------------------

def sph_bessel_j(l: int, x) -> BesselPair:
    """``j_l(x)`` and ``j_l'(x)``."""
    l = _check_order(l)
    vals, der = spherical_jn_table(l, np.array([x]))
    return BesselPair(complex(vals[l, 0]), complex(der[l, 0]))


def sph_hankel1(l: int, x) -> BesselPair:
    """``h_l^(1)(x)`` and its derivative; requires ``x != 0`` and ``Im x >= 0``."""
    l = _check_order(l)
    vals, der = spherical_h1_table(l, np.array([x]))
    return BesselPair(complex(vals[l, 0]), complex(der[l, 0]))


def cyl_from_sph(l: int, x, pair: BesselPair, kind: Kind) -> BesselPair:
    """Convert a spherical pair to its half-order cylinder antecedent.

    ``Z_{l+1/2}(x) = sqrt(2x/pi) z_l(x)`` using the principal square root;
    the derivative follows from the product rule.
    """
    _check_order(l)
    _check_kind(kind)
    x = complex(x)
    if x == 0:
        raise DomainError("half-order conversion is singular at x = 0")
    w = cmath.sqrt(2.0 * x / math.pi)
    value = w * pair.value
    return BesselPair(value, w * (pair.derivative + pair.value / (2.0 * x)))


def cyl_bessel_j(l: int, x) -> BesselPair:
    """``J_{l+1/2}(x)`` and its derivative."""
    return cyl_from_sph(l, x, sph_bessel_j(l, x), "J")


def cyl_hankel1(l: int, x) -> BesselPair:
    """``H^(1)_{l+1/2}(x)`` and its derivative."""
    return cyl_from_sph(l, x, sph_hankel1(l, x), "H1")


def spherical_pair(l: int, x, kind: Kind) -> BesselPair:
    if _check_kind(kind) == "J":
        return sph_bessel_j(l, x)
    return sph_hankel1(l, x)


def cylinder_pair(l: int, x, kind: Kind) -> BesselPair:
    return cyl_from_sph(l, x, spherical_pair(l, x, kind), kind)


def wronskian_sph(l: int, x) -> complex:
    """``j_l h_l^(1)' - j_l' h_l^(1)``; equals ``i / x**2``."""
    if complex(x) == 0:
        raise DomainError("Wronskian undefined at x = 0")
    j = sph_bessel_j(l, x)
    h = sph_hankel1(l, x)
    return j.value * h.derivative - j.derivative * h.value


def wronskian_cyl(l: int, x) -> complex:
    """``J_nu H_nu^(1)' - J_nu' H_nu^(1)`` for ``nu = l + 1/2``; equals ``2i/(pi x)``."""
    if complex(x) == 0:
        raise DomainError("Wronskian undefined at x = 0")
    jj = cyl_bessel_j(l, x)
    hh = cyl_hankel1(l, x)
    return jj.value * hh.derivative - jj.derivative * hh.value


# -- Lommel integrals -------------------------------------------------------

def _table(kind: str, lmax: int, x):
    if kind == "J":
        return spherical_jn_table(lmax, x)
    return spherical_h1_table(lmax, x)


def _check_limits(r_lo, r_hi) -> None:
    if not (0.0 <= r_lo < r_hi < math.inf):
        raise DomainError(f"need 0 <= r_lo < r_hi < inf, got [{r_lo}, {r_hi}]")


def is_degenerate(alpha, beta) -> bool:
    alpha, beta = complex(alpha), complex(beta)
    gap = abs(alpha * alpha - beta * beta)
    return gap <= DEGENERATE_RTOL * (abs(alpha) ** 2 + abs(beta) ** 2)


def lommel_antiderivative_table(lmax, alpha, beta, kind_alpha, kind_beta, r) -> np.ndarray:
    """Antiderivative of ``z_l(alpha r) w_l(beta r) r**2`` for ``l = 0..lmax``.

    ``F(r) = r**2 (beta z w' - alpha z' w) / (alpha**2 - beta**2)`` with ``z``
    at ``alpha r`` and ``w`` at ``beta r``. This is the half-order form
    ``r (beta Z W' - alpha Z' W) pi / (2 sqrt(alpha beta))`` with the
    ``sqrt(2r/pi)`` weights cancelled, which keeps it finite when a
    wavenumber vanishes.
    """
    alpha, beta = complex(alpha), complex(beta)
    if is_degenerate(alpha, beta):
        raise DegenerateWavenumberError(
            f"alpha={alpha}, beta={beta} are degenerate; use lommel_degenerate"
        )
    r = float(r)
    if r == 0.0:
        if kind_alpha == "H1" or kind_beta == "H1":
            raise DomainError("Hankel factor is singular at r = 0")
        return np.zeros(lmax + 1, dtype=complex)
    z, dz = _table(_check_kind(kind_alpha), lmax, np.array([alpha * r]))
    w, dw = _table(_check_kind(kind_beta), lmax, np.array([beta * r]))
    return (r * r * (beta * z[:, 0] * dw[:, 0] - alpha * dz[:, 0] * w[:, 0])
            / (alpha * alpha - beta * beta))


def lommel_degenerate_antiderivative_table(lmax, alpha, kind_alpha, kind_beta, r) -> np.ndarray:
    """Antiderivative of ``z_l(alpha r) w_l(alpha r) r**2`` for ``l = 0..lmax``.

    ``F(r) = (r**3 / 2) [z w + z' w' - l(l+1) z w / x**2 + (z w' + z' w) / (2x)]``
    with ``x = alpha r``. Equivalent to the textbook
    ``(r**3/2)[z_l w_l - (z_{l-1} w_{l+1} + z_{l+1} w_{l-1})/2]`` after
    eliminating the neighbouring orders.
    """
    alpha = complex(alpha)
    _check_kind(kind_alpha)
    _check_kind(kind_beta)
    r = float(r)
    has_h = kind_alpha == "H1" or kind_beta == "H1"
    if r == 0.0 or alpha == 0:
        if has_h:
            raise DomainError("Hankel factor is singular at x = 0")
        out = np.zeros(lmax + 1, dtype=complex)
        out[0] = r ** 3 / 3.0 if alpha == 0 else 0.0
        return out
    x = alpha * r
    z, dz = _table(kind_alpha, lmax, np.array([x]))
    w, dw = _table(kind_beta, lmax, np.array([x]))
    z, dz, w, dw = z[:, 0], dz[:, 0], w[:, 0], dw[:, 0]
    ll = np.arange(lmax + 1)
    zw = z * w
    bracket = zw + dz * dw - ll * (ll + 1) * zw / (x * x) + (z * dw + dz * w) / (2 * x)
    return 0.5 * r ** 3 * bracket


def lommel_closed(l, alpha, beta, kind_alpha: Kind, kind_beta: Kind, r_lo, r_hi) -> LommelResult:
    """Closed form of ``int_{r_lo}^{r_hi} z_l(alpha r) w_l(beta r) r**2 dr``.

    Raises :class:`DegenerateWavenumberError` when
    ``|alpha**2 - beta**2| <= 1e-9 (|alpha|**2 + |beta|**2)``.
    """
    l = _check_order(l)
    _check_limits(r_lo, r_hi)
    lo = lommel_antiderivative_table(l, alpha, beta, kind_alpha, kind_beta, r_lo)[l]
    hi = lommel_antiderivative_table(l, alpha, beta, kind_alpha, kind_beta, r_hi)[l]
    return LommelResult(complex(hi - lo), complex(lo), complex(hi))


def lommel_degenerate(l, alpha, kind_alpha: Kind, kind_beta: Kind, r_lo, r_hi) -> LommelResult:
    """Equal-wavenumber companion of :func:`lommel_closed`."""
    l = _check_order(l)
    _check_limits(r_lo, r_hi)
    lo = lommel_degenerate_antiderivative_table(l, alpha, kind_alpha, kind_beta, r_lo)[l]
    hi = lommel_degenerate_antiderivative_table(l, alpha, kind_alpha, kind_beta, r_hi)[l]
    return LommelResult(complex(hi - lo), complex(lo), complex(hi))


def lommel_any_table(lmax, alpha, beta, kind_alpha, kind_beta, r) -> np.ndarray:
    """Antiderivative table, switching to the degenerate form when needed."""
    if is_degenerate(alpha, beta):
        return lommel_degenerate_antiderivative_table(lmax, alpha, kind_alpha, kind_beta, r)
    return lommel_antiderivative_table(lmax, alpha, beta, kind_alpha, kind_beta, r)
