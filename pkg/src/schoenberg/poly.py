"""Complex polynomials built from their zeros.

Conventions used throughout the library:

* a *root configuration* is a 1-D complex array ``z`` of length n >= 2,
  the zeros of the monic polynomial ``prod (x - z_j)``;
* polynomial coefficients are stored ascending, constant term first, so
  ``coeffs[k]`` multiplies ``x**k`` and ``coeffs[-1]`` is the leading
  coefficient (exactly 1 for polynomials built from roots);
* every function accepts a trailing batch: arrays of shape ``(..., n)``
  are treated as stacks of configurations and give stacked results.

All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

import numpy as np

from .config import TOL_CENTER
from .errors import InvalidInputError

__all__ = [
    "as_zeros",
    "from_roots",
    "derivative",
    "polyval",
    "elementary_symmetric",
    "elementary_symmetric_all",
    "recenter",
    "centroid_residual",
    "is_centered",
    "is_collinear",
]


def as_zeros(zeros, min_length: int = 2) -> np.ndarray:
    """Validate and return a root configuration as a complex array.

    Entries must be finite and the trailing axis must have length at least
    ``min_length`` (2 by default: a degree-1 polynomial has no critical
    point to study).
    """
    z = np.asarray(zeros, dtype=complex)
    if z.ndim == 0 or z.shape[-1] < min_length:
        raise InvalidInputError(
            f"need at least {min_length} zeros, got shape {np.shape(zeros)}"
        )
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("zeros must be finite (no NaN or infinity)")
    return z


def from_roots(zeros) -> np.ndarray:
    """Ascending coefficients of the monic polynomial with the given zeros.

    Multiplies the linear factors in input order (no sorting), so the
    result is deterministic; reordering the zeros changes the rounding by
    at most a few ulps.  The coefficient of ``x**(n-k)`` equals
    ``(-1)**k e_k(zeros)``.
    """
    z = as_zeros(zeros)
    n = z.shape[-1]
    batch = z.shape[:-1]
    coeffs = np.zeros(batch + (n + 1,), dtype=complex)
    coeffs[..., 0] = 1.0
    for j in range(n):
        prev = coeffs[..., : j + 1].copy()
        root = z[..., j, np.newaxis]
        coeffs[..., 1 : j + 2] = prev
        coeffs[..., 0] = 0.0
        coeffs[..., : j + 1] -= root * prev
    return coeffs


def derivative(coeffs) -> np.ndarray:
    """Term-by-term derivative; degree drops by exactly one.

    A constant polynomial returns the zero polynomial ``[0]`` (degenerate,
    there is nothing to differentiate).
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.shape[-1] <= 1:
        return np.zeros(c.shape[:-1] + (1,), dtype=complex)
    k = np.arange(1, c.shape[-1])
    return c[..., 1:] * k


def polyval(coeffs, x) -> np.ndarray:
    """Evaluate ascending-coefficient polynomials by Horner's rule.

    ``coeffs`` has shape ``(..., d+1)`` and ``x`` any shape broadcastable
    against the batch axes of ``coeffs``.
    """
    c = np.asarray(coeffs, dtype=complex)
    x = np.asarray(x, dtype=complex)
    out = np.broadcast_arrays(c[..., -1], x)[0].copy()
    for k in range(c.shape[-1] - 2, -1, -1):
        out = out * x + c[..., k]
    return out


def elementary_symmetric_all(values) -> np.ndarray:
    """All elementary symmetric functions e_0..e_m of the trailing axis.

    Uses the running product expansion of ``prod (1 + v_j t)`` (stable for
    mixed-magnitude inputs, unlike the Newton-identity route).  ``e_0`` is
    always 1.
    """
    v = np.asarray(values)
    if not np.iscomplexobj(v):
        v = v.astype(float)
    m = v.shape[-1]
    e = np.zeros(v.shape[:-1] + (m + 1,), dtype=v.dtype)
    e[..., 0] = 1.0
    for j in range(m):
        e[..., 1 : j + 2] = e[..., 1 : j + 2] + v[..., j, np.newaxis] * e[..., : j + 1]
    return e


def elementary_symmetric(values, k: int):
    """The k-th elementary symmetric function of a list of scalars."""
    v = np.asarray(values)
    m = v.shape[-1]
    if not 0 <= k <= m:
        raise InvalidInputError(f"elementary symmetric index {k} out of range 0..{m}")
    return elementary_symmetric_all(v)[..., k]


def recenter(zeros) -> np.ndarray:
    """Translate a configuration so its centroid sits at the origin.

    Idempotent up to round-off; the returned configuration has
    ``sum(z) == 0`` to machine precision.
    """
    z = as_zeros(zeros)
    return z - np.mean(z, axis=-1, keepdims=True)


def centroid_residual(zeros):
    """Scaled centroid magnitude ``|sum z| / max(1, max |z|)``.

    Gate for the inequalities that assume a centered configuration: values
    at or below ``config.TOL_CENTER`` count as centered.
    """
    z = as_zeros(zeros)
    scale = np.maximum(1.0, np.max(np.abs(z), axis=-1))
    res = np.abs(np.sum(z, axis=-1)) / scale
    return float(res) if np.isscalar(res) or res.ndim == 0 else res


def is_centered(zeros, tol: float = TOL_CENTER) -> bool:
    return bool(np.all(centroid_residual(zeros) <= tol))


def is_collinear(zeros, tol: float = 1e-10) -> bool:
    """True when all zeros lie on one straight line in the complex plane.

    Checks that every ratio ``(z_j - z_0) / (z_ref - z_0)`` is real to
    ``tol``, where ``z_ref`` is the point farthest from ``z_0``; a
    configuration of coincident points counts as collinear.
    """
    z = as_zeros(zeros)
    if z.ndim != 1:
        raise InvalidInputError("is_collinear expects a single configuration")
    d = z - z[0]
    scale = np.max(np.abs(z)) or 1.0
    ref = np.argmax(np.abs(d))
    if abs(d[ref]) <= tol * scale:
        return True
    r = d / d[ref]
    return bool(np.all(np.abs(r.imag) <= tol * np.maximum(1.0, np.abs(r))))
