"""Dense symmetric linear algebra: eigendecomposition, inertia, pseudoinverse,
definiteness tests, numerical rank.

All routines take plain float ndarrays. Matrices that are symmetric by
construction are explicitly symmetrized before eigendecomposition so that
round-off asymmetry never leaks into eigenvalue classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    NoConvergenceError,
    NonSquareError,
    NotPSDError,
    NotSymmetricError,
)


@dataclass(frozen=True)
class Tolerance:
    """Numeric thresholds for residual and eigenvalue classification."""

    rel_residual: float = 1e-8
    eig_zero: float = 1e-9
    nonzero_floor: float = 1e-10

    def __post_init__(self):
        for name in ("rel_residual", "eig_zero", "nonzero_floor"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must be in (0, 1), got {v}")


DEFAULT_TOL = Tolerance()


class Inertia(NamedTuple):
    n_minus: int
    n_zero: int
    n_plus: int


def _as_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def sym_eigen(a: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues ascending, orthonormal eigenvector columns).
    """
    a = _as_square(a)
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    asym = float(np.abs(a - a.T).max(initial=0.0))
    if asym > tol.rel_residual * scale:
        raise NotSymmetricError(
            f"asymmetry {asym:.3e} exceeds {tol.rel_residual:.1e} * {scale:.3e}"
        )
    sym = (a + a.T) / 2.0
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(str(exc)) from exc
    return w, v


def inertia_of(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Inertia:
    """Counts of (negative, zero, positive) eigenvalues.

    Eigenvalues with |lambda| <= eig_zero * max(1, spectral_radius) count
    as zero.
    """
    w, _ = sym_eigen(a, tol)
    thresh = tol.eig_zero * max(1.0, float(np.abs(w).max(initial=0.0)))
    n_minus = int(np.sum(w < -thresh))
    n_plus = int(np.sum(w > thresh))
    return Inertia(n_minus, len(w) - n_minus - n_plus, n_plus)


def pinv_psd(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a symmetric positive semidefinite matrix."""
    w, v = sym_eigen(a, tol)
    thresh = tol.eig_zero * max(1.0, float(np.abs(w).max(initial=0.0)))
    if w[0] < -thresh:
        raise NotPSDError(f"negative eigenvalue {w[0]:.3e} beyond tolerance")
    inv_w = np.where(w > thresh, 1.0, 0.0) / np.where(w > thresh, w, 1.0)
    return (v * inv_w) @ v.T


def is_pd_quadratic_form(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff x'Ax > 0 for every nonzero x.

    Equivalent to positive definiteness of the symmetric part (A + A')/2;
    A itself need not be symmetric.
    """
    a = _as_square(a)
    sym = (a + a.T) / 2.0
    w = np.linalg.eigvalsh(sym)
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    return bool(w[0] > tol.eig_zero * scale)


def rank_of(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank via singular values above a relative threshold."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    thresh = tol.eig_zero * max(1.0, float(sv[0]))
    return int(np.sum(sv > thresh))


def nullity_of(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    a = np.asarray(a, dtype=float)
    return min(a.shape) - rank_of(a, tol)
