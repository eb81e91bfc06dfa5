"""Small dense linear algebra used by the steppers.

Everything here is sized for systems with a handful of degrees of freedom,
so dense direct factorizations are used throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve


class NotPositiveDefinite(ValueError):
    """Cholesky factorization hit a nonpositive pivot."""


def sym_matrix(entries) -> np.ndarray:
    """Validate and return an exactly symmetric float64 matrix."""
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix entries are not exactly symmetric")
    return a


def skew_matrix(entries) -> np.ndarray:
    """Validate and return an exactly antisymmetric float64 matrix."""
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, -a.T):
        raise ValueError("matrix entries are not exactly antisymmetric")
    return a


@dataclass(frozen=True, eq=False)
class SpdFactor:
    """Reusable Cholesky factorization of a symmetric positive definite matrix."""

    _cf: tuple

    def solve(self, b) -> np.ndarray:
        return cho_solve(self._cf, np.asarray(b, dtype=float))


def spd_factor(a) -> SpdFactor:
    """Factor a symmetric positive definite matrix once for repeated solves."""
    a = np.asarray(a, dtype=float)
    try:
        c, lower = cho_factor(a, lower=True)
    except LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return SpdFactor((c, lower))


def solve_spd(a, b) -> np.ndarray:
    """Solve A x = b for symmetric positive definite A."""
    return spd_factor(a).solve(b)


def cayley(s) -> np.ndarray:
    """(I - S/2)^(-1) (I + S/2), special orthogonal for real skew S.

    Computed by solving against the columns of I + S/2; no explicit inverse.
    The solve cannot fail for skew input: I - S/2 has determinant >= 1.
    """
    s = np.asarray(s, dtype=float)
    eye = np.eye(s.shape[0])
    return np.linalg.solve(eye - 0.5 * s, eye + 0.5 * s)


def spectral_radius_2x2(p) -> float:
    """Largest eigenvalue modulus of a real 2x2 matrix via the quadratic formula."""
    (a, b), (c, d) = np.asarray(p, dtype=float)
    tr = a + d
    det = a * d - b * c
    # scimath.sqrt goes complex for a conjugate (rotation-like) pair
    root = np.lib.scimath.sqrt(tr * tr - 4.0 * det)
    return float(max(abs(0.5 * (tr + root)), abs(0.5 * (tr - root))))
