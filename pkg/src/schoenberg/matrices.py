"""Dense matrix side of the zero/critical-point correspondence.

The central objects are the diagonal matrix D of the zeros, the rank
(n-1) projection S = I - J/n (J the all-ones matrix), and words in D,
D*, S.  The spectrum of D S is {0} union the critical points, which is
what ties matrix trace inequalities to polynomial geometry; traces of
explicit words serve as brute-force oracles for the closed-form bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UnsupportedSizeError
from .poly import as_zeros
from .rootfind import RootSolverSettings, critical_points, find_roots, match_multisets

__all__ = [
    "build_S",
    "build_D",
    "sds_matrix",
    "trace_word",
    "char_poly",
    "eigenvalues",
    "SpectrumComparison",
    "verify_spectrum",
    "is_normal",
]

# Conditioning guard for the characteristic-polynomial recurrence.
MAX_CHAR_POLY_ORDER = 32


def build_S(n: int) -> np.ndarray:
    """The projection S = I - J/n: 1 - 1/n on the diagonal, -1/n elsewhere."""
    if n < 1:
        raise InvalidInputError("matrix order must be at least 1")
    return np.eye(n, dtype=complex) - np.full((n, n), 1.0 / n, dtype=complex)


def build_D(zeros) -> np.ndarray:
    """Diagonal matrix of a root configuration."""
    z = as_zeros(zeros)
    if z.ndim != 1:
        raise InvalidInputError("build_D expects a single configuration")
    return np.diag(z)


def sds_matrix(zeros) -> np.ndarray:
    """The compressed product S D S whose normality encodes collinearity."""
    z = as_zeros(zeros)
    s = build_S(z.shape[0])
    return s @ build_D(z) @ s


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix entries must be finite")
    return a


def trace_word(factors) -> complex:
    """Trace of the left-to-right product of square matrices.

    Brute-force oracle: the product is carried out by explicit
    multiplication, no algebraic simplification.
    """
    mats = [_as_square(f) for f in factors]
    if not mats:
        raise InvalidInputError("trace_word needs at least one factor")
    n = mats[0].shape[0]
    if any(m.shape[0] != n for m in mats):
        raise InvalidInputError("all factors must have the same order")
    prod = mats[0]
    for m in mats[1:]:
        prod = prod @ m
    return complex(np.trace(prod))


def char_poly(matrix) -> np.ndarray:
    """Monic characteristic polynomial, ascending coefficients.

    Uses the Faddeev-LeVerrier recurrence, which is exact in rational
    arithmetic and adequate in double precision for small orders; orders
    above MAX_CHAR_POLY_ORDER are refused.
    """
    a = _as_square(matrix)
    n = a.shape[0]
    if n > MAX_CHAR_POLY_ORDER:
        raise UnsupportedSizeError(
            f"characteristic polynomial limited to order {MAX_CHAR_POLY_ORDER}, got {n}"
        )
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    eye = np.eye(n, dtype=complex)
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ mk) / k
    return coeffs


def eigenvalues(matrix, settings: RootSolverSettings | None = None) -> np.ndarray:
    """Eigenvalues as roots of the characteristic polynomial."""
    return find_roots(char_poly(matrix), settings)


@dataclass(frozen=True)
class SpectrumComparison:
    """Eigenvalues of a matrix against an expected multiset."""

    matrix_eigenvalues: np.ndarray
    expected: np.ndarray
    max_pair_distance: float


def verify_spectrum(zeros, settings: RootSolverSettings | None = None) -> SpectrumComparison:
    """Check that D(I - J/n) has spectrum {0} union the critical points.

    The expected side comes from the polynomial root finder applied to p',
    the matrix side from the characteristic polynomial of D S; the report
    carries the greedy multiset-pairing distance between the two.
    """
    z = as_zeros(zeros)
    if z.ndim != 1:
        raise InvalidInputError("verify_spectrum expects a single configuration")
    ds = build_D(z) @ build_S(z.shape[0])
    eigs = eigenvalues(ds, settings)
    expected = np.concatenate([np.zeros(1, dtype=complex), critical_points(z, settings)])
    return SpectrumComparison(eigs, expected, match_multisets(eigs, expected))


def is_normal(matrix, tol: float = 1e-10) -> bool:
    """Commutator test: ||M*M - MM*||_F <= tol * ||M||_F**2.

    For M = S D S this holds exactly when all zeros are collinear, which
    is the equality case of the even-order bounds.
    """
    m = _as_square(matrix)
    mh = m.conj().T
    comm = mh @ m - m @ mh
    scale = np.linalg.norm(m) ** 2
    return bool(np.linalg.norm(comm) <= tol * scale)
