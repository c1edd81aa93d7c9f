"""Direct integration of the radial Schroedinger equation.

This path shares nothing with the coefficient routes: the interior is
integrated with Numerov's method and the exterior match uses SciPy's
spherical Bessel functions rather than :mod:`sphwave.specfun`.

With ``u = r R(r)`` the radial equation is

    u'' = [l(l+1)/r**2 + V(r) - E] u
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from scipy.special import spherical_jn, spherical_yn

from .errors import DomainError, StepTooLargeError
from .model import WaveNumbers

log = logging.getLogger(__name__)

RESCALE_AT = 1e100
#: Number of Numerov steps taken beyond ``r = a`` so the grid straddles it.
OVERSHOOT = 4


@dataclass
class RadialSolution:
    l: int
    grid: List[float]
    u_values: List[complex]
    log_derivative_at_a: complex
    rescale_events: int = 0


def max_step(wn: WaveNumbers, a: float) -> float:
    return min(0.01 / abs(wn.k), 0.01 / max(1.0, abs(wn.k1)), a / 100.0)


def _series_start(l: int, q: float, r: float) -> float:
    # regular solution r^{l+1} (1 - q r^2 / (2(2l+3)) + q^2 r^4 / (8 (2l+3)(2l+5)))
    r2 = r * r
    c1 = q / (2.0 * (2 * l + 3))
    c2 = q * q / (8.0 * (2 * l + 3) * (2 * l + 5))
    return r ** (l + 1) * (1.0 - c1 * r2 + c2 * r2 * r2)


def numerov_radial(wn: WaveNumbers, a: float, l: int, step: Optional[float] = None) -> RadialSolution:
    """Integrate the regular solution outward from the origin.

    The step is rounded down so that ``a`` falls on a grid node; the
    log-derivative ``u'/u`` at ``a`` comes from a one-sided five-point
    difference over interior nodes only. Both potential values must be real.
    """
    if l < 0 or int(l) != l:
        raise DomainError(f"l must be a nonnegative integer, got {l!r}")
    l = int(l)
    bound = max_step(wn, a)
    h = bound if step is None else float(step)
    if not h > 0:
        raise DomainError("step must be positive")
    if h > bound * (1 + 1e-12):
        raise StepTooLargeError(f"step {h:g} exceeds bound {bound:g}")
    n_a = int(math.ceil(a / h - 1e-9))
    h = a / n_a

    energy = complex(wn.energy)
    v1 = complex(wn.v1)
    v_inf = complex(wn.v_inf)
    if energy.imag or v1.imag or v_inf.imag:
        raise DomainError("Numerov oracle needs real energy and potential")
    energy, v1, v_inf = energy.real, v1.real, v_inf.real
    q_in = energy - v1
    cent = l * (l + 1)
    h2 = h * h / 12.0

    def g(i):
        r = i * h
        v = v1 if i <= n_a else v_inf
        return cent / (r * r) + v - energy

    n_total = n_a + OVERSHOOT
    u = [0.0] * (n_total + 1)
    u[1] = _series_start(l, q_in, h)
    u[2] = _series_start(l, q_in, 2 * h)
    events = 0
    # Summed form: y = (1 - h^2 g / 12) u with the first difference of y
    # carried separately, so the O(h^2) curvature increment is never added
    # to a quantity of order one and rounded away.
    y_prev = (1.0 - h2 * g(1)) * u[1]
    y_cur = (1.0 - h2 * g(2)) * u[2]
    dy = y_cur - y_prev
    for i in range(2, n_total):
        dy += 12.0 * h2 * g(i) * u[i]
        y_cur += dy
        u[i + 1] = y_cur / (1.0 - h2 * g(i + 1))
        if abs(u[i + 1]) > RESCALE_AT:
            inv = 1.0 / RESCALE_AT
            for j in range(i + 2):
                u[j] *= inv
            y_cur *= inv
            dy *= inv
            events += 1
    if events:
        log.info("numerov l=%d: %d rescale events", l, events)

    um = u[n_a - 4: n_a + 1]
    du = (25 * um[4] - 48 * um[3] + 36 * um[2] - 16 * um[1] + 3 * um[0]) / (12 * h)
    grid = [i * h for i in range(n_total + 1)]
    return RadialSolution(l, grid, [complex(x) for x in u], complex(du / um[4]), events)


def _phase_from_log_derivative(k: float, a: float, l: int, logd: float) -> float:
    beta = logd - 1.0 / a  # R'/R with R = u / r
    x = k * a
    j, dj = spherical_jn(l, x), spherical_jn(l, x, derivative=True)
    y, dy = spherical_yn(l, x), spherical_yn(l, x, derivative=True)
    # R = cos(d) j - sin(d) y outside
    return math.atan2(k * dj - beta * j, k * dy - beta * y)


def wrap_pi(d: float) -> float:
    """Map an angle to ``(-pi/2, pi/2]``; phase shifts are defined modulo ``pi``."""
    return d - math.pi * math.ceil(d / math.pi - 0.5)


def phase_shift_oracle(wn: WaveNumbers, a: float, l: int, step: Optional[float] = None,
                       richardson: bool = True) -> float:
    """Phase shift ``delta_l`` in ``(-pi/2, pi/2]`` from the Numerov solution.

    With ``richardson`` the steps ``h`` and ``h/2`` are combined to cancel
    the leading ``h**4`` error term.
    """
    if not isinstance(wn.k, float) and complex(wn.k).imag:
        raise DomainError("phase shifts need a real exterior wavenumber")
    k = float(wn.k)
    h = max_step(wn, a) if step is None else step
    sol = numerov_radial(wn, a, l, h)
    d_h = _phase_from_log_derivative(k, a, l, sol.log_derivative_at_a.real)
    if not richardson:
        return wrap_pi(d_h)
    sol2 = numerov_radial(wn, a, l, h / 2)
    d_h2 = _phase_from_log_derivative(k, a, l, sol2.log_derivative_at_a.real)
    diff = wrap_pi(d_h2 - d_h)
    return wrap_pi(d_h2 + diff / 15.0)


def s_wave_phase_shift(wn: WaveNumbers, a: float) -> float:
    """Closed form ``arctan((k/k1) tan(k1 a)) - k a``, wrapped to ``(-pi/2, pi/2]``.

    An imaginary ``k1 = i kappa`` turns the ratio into ``(k/kappa) tanh(kappa a)``.
    """
    k = float(wn.k)
    k1 = complex(wn.k1)
    if k1 == 0:
        ratio = k * a
    elif k1.imag == 0:
        ratio = k / k1.real * math.tan(k1.real * a)
    else:
        kappa = k1.imag
        ratio = k / kappa * math.tanh(kappa * a)
    return wrap_pi(math.atan(ratio) - k * a)
