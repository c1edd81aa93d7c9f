import math
import warnings

import numpy as np
import pytest

from sphwave.errors import QuadratureWarning
from sphwave.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate


def test_rule_weights_sum_to_two():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_to_degree_22(deg):
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert np.dot(KRONROD_WEIGHTS, NODES ** deg) == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("deg", range(0, 14))
def test_gauss_exact_to_degree_13(deg):
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert np.dot(GAUSS_WEIGHTS, NODES ** deg) == pytest.approx(exact, abs=1e-14)


def test_oscillatory_complex():
    res = integrate(lambda x: np.exp(1j * 40 * x), 0.0, 3.0, abs_tol=1e-13, rel_tol=1e-13)
    exact = (np.exp(120j) - 1) / 40j
    assert res.converged
    assert abs(res.value - exact) < 1e-12


def test_vector_valued_shares_subdivision():
    ks = np.array([1.0, 5.0, 17.0])
    res = integrate(lambda x: np.sin(ks[:, None] * x[None, :]), 0.0, math.pi,
                    abs_tol=1e-13, rel_tol=1e-13)
    exact = (1 - np.cos(ks * math.pi)) / ks
    assert np.allclose(res.value, exact, atol=1e-12)


def test_breakpoint_handles_kink():
    res = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=(0.3,))
    assert res.intervals == 2
    assert res.value == pytest.approx(0.5 * (0.09 + 0.49), abs=1e-15)


def test_reversed_limits():
    res = integrate(lambda x: x ** 2, 1.0, 0.0)
    assert res.value == pytest.approx(-1 / 3, abs=1e-15)


def test_empty_interval():
    assert integrate(lambda x: x, 2.0, 2.0).value == 0


def test_nonconvergence_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, abs_tol=1e-15, rel_tol=1e-15,
                        max_intervals=8)
    assert not res.converged
    assert any(issubclass(w.category, QuadratureWarning) for w in caught)
