"""Input validation shared by the estimator and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import DomainError
from .solver import ROUTES


def check_route(route: str) -> str:
    if route not in ROUTES:
        raise DomainError(f"route must be one of {ROUTES}, got {route!r}")
    return route


def check_routes(routes) -> tuple:
    """Normalize a route list (or comma string) preserving first-seen order."""
    if isinstance(routes, str):
        routes = [r.strip() for r in routes.split(",") if r.strip()]
    out = []
    for r in routes:
        check_route(r)
        if r not in out:
            out.append(r)
    return tuple(out)


def check_l_max(l_max):
    if l_max is None:
        return None
    if isinstance(l_max, bool) or int(l_max) != l_max or l_max < 0:
        raise DomainError(f"l_max must be a nonnegative integer, got {l_max!r}")
    return int(l_max)


def check_field_points(X) -> np.ndarray:
    """Validate an ``(n, 2)`` array of ``[r, cos_theta]`` rows."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 2:
        raise DomainError(f"expected columns [r, cos_theta], got {X.shape[1]} columns")
    if np.any(X[:, 0] < 0):
        raise DomainError("r must be nonnegative")
    if np.any(np.abs(X[:, 1]) > 1):
        raise DomainError("cos_theta must lie in [-1, 1]")
    return X
