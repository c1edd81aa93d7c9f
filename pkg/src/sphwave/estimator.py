"""Estimator-style front end to the solver and field modules."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import field, solver
from ._validation import check_field_points, check_l_max, check_route
from .model import BeamSpec, StepPotential, derive_wavenumbers


class SphericalStepScatterer(BaseEstimator):
    """Scattering of a plane wave by a spherical step potential.

    ``fit`` solves for the partial-wave coefficients; ``predict`` evaluates
    the total wavefunction at rows of ``[r, cos_theta]``.

    Parameters
    ----------
    radius : float
        Radius ``a`` of the step.
    v1, v_inf : float
        Potential inside the sphere and at infinity.
    energy : float
        Beam energy ``E``; must exceed ``v_inf``.
    route : {"inhomogeneous", "homogeneous", "matching"}
    l_max : int or None
        Partial-wave cutoff; chosen automatically when None.
    rel_tol : float
        Truncation tolerance for the automatic cutoff.
    """

    def __init__(self, radius=1.0, v1=0.0, v_inf=0.0, energy=1.0,
                 route="inhomogeneous", l_max=None, rel_tol=1e-12):
        self.radius = radius
        self.v1 = v1
        self.v_inf = v_inf
        self.energy = energy
        self.route = route
        self.l_max = l_max
        self.rel_tol = rel_tol

    def fit(self, X=None, y=None):
        """Solve for the coefficients. ``X`` and ``y`` are ignored."""
        pot = StepPotential(self.radius, self.v1, self.v_inf)
        wn = derive_wavenumbers(pot, BeamSpec(self.energy))
        route = check_route(self.route)
        l_max = check_l_max(self.l_max)
        if l_max is None:
            l_max = solver.choose_lmax(wn, pot.radius_a, self.rel_tol)
        coeffs = solver.solve(wn, pot.radius_a, l_max, route)
        self.potential_ = pot
        self.wavenumbers_ = wn
        self.l_max_ = l_max
        self.coefficients_ = coeffs
        self.coef_ = np.array([[c.a_gt, c.a_lt] for c in coeffs])
        return self

    def predict(self, X):
        """Total wavefunction at each row ``[r, cos_theta]`` of ``X``."""
        check_is_fitted(self, "coef_")
        X = check_field_points(X)
        a = self.potential_.radius_a
        out = np.empty(X.shape[0], dtype=complex)
        for i, (r, c) in enumerate(X):
            out[i] = field.psi_total(self.coefficients_, self.wavenumbers_, a,
                                     field.FieldPoint(r, c), incident="exact")
        return out

    def far_field(self, cos_theta):
        check_is_fitted(self, "coef_")
        return field.far_field_amplitude(self.coefficients_, self.wavenumbers_, cos_theta)

    def observables(self):
        check_is_fitted(self, "coef_")
        return field.observables(self.coefficients_, self.wavenumbers_)
