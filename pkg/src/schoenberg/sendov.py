"""Sendov-conjecture instances: power means of critical-point distances.

An instance is a polynomial (z - a) * prod (z - z_j) with a real,
0 <= a <= 1 and every z_j in the closed unit disk (the rotated normal
form; :func:`normalized_instance` maps an arbitrary distinguished zero to
it).  The quantities of interest are the distances |w_k - a| from the
critical points to the distinguished zero:

* Sendov's conjecture says min_k |w_k - a| <= 1, i.e. M_{-inf} <= 1;
* under the centroid-like hypothesis Re sum z_j >= ((n-2)/2) a both
  sum |w_k - a|^(-2) > n - 1 (C1, equivalent to M_{-2} < 1) and
  sum |w_k - a|^2 < n - 1 (C2, equivalent to M_2 < 1) hold;
* without the hypothesis M_2 <= 1 fails (e.g. (z - a)(z + 1)^(n-1) with a
  near 1), while no configuration with M_{-2} > 1 is known.  Whether
  M_{-2} <= 1 always holds is open; the probe only reports candidates and
  asserts nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL_DISK
from .errors import InvalidInputError
from .poly import as_zeros
from .rootfind import RootSolverSettings, critical_points, critical_points_batch

__all__ = [
    "SendovInstance",
    "normalized_instance",
    "PowerMeanReport",
    "power_mean",
    "check_special_case",
    "probe_m_minus2",
    "probe_m_minus2_batch",
    "CRITICAL_HIT_TOL",
]

# |w_k - a| at or below this counts as a critical point sitting exactly on
# the distinguished zero, which settles the conjecture instance outright
# and would otherwise blow up the negative power means.
CRITICAL_HIT_TOL = 1e-11


@dataclass(frozen=True)
class SendovInstance:
    """Distinguished real zero a in [0, 1] plus the remaining unit-disk zeros."""

    a: float
    other_zeros: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise InvalidInputError(f"a must lie in [0, 1], got {self.a}")
        others = as_zeros(self.other_zeros, min_length=1)
        if others.ndim != 1:
            raise InvalidInputError("other_zeros must be a 1-D configuration")
        if np.max(np.abs(others)) > 1.0 + TOL_DISK:
            raise InvalidInputError("all other zeros must lie in the closed unit disk")
        object.__setattr__(self, "other_zeros", others)

    @property
    def n(self) -> int:
        return self.other_zeros.shape[0] + 1

    def zeros(self) -> np.ndarray:
        """Full configuration {a} union other_zeros."""
        return np.concatenate([[complex(self.a)], self.other_zeros])

    def hypothesis_margin(self) -> float:
        """Re sum z_j - ((n-2)/2) a; the special-case hypothesis is margin >= 0."""
        return float(np.sum(self.other_zeros.real) - 0.5 * (self.n - 2) * self.a)


def normalized_instance(a, other_zeros) -> SendovInstance:
    """Rotate an arbitrary distinguished zero onto the real segment [0, 1].

    A rotation of the plane preserves the zero/critical-point geometry, so
    any instance with |a| <= 1 has an equivalent with a real and
    nonnegative.
    """
    a = complex(a)
    rot = np.exp(-1j * np.angle(a)) if a != 0 else 1.0
    return SendovInstance(a=abs(a), other_zeros=np.asarray(other_zeros, dtype=complex) * rot)


def power_mean(values, p) -> float:
    """Power mean M_p = ((1/m) sum x_i**p)**(1/p) of positive reals.

    ``p = -inf`` gives the minimum and ``p = +inf`` the maximum; ``p = 0``
    is the geometric mean.  A zero value with p <= 0 is a domain error:
    callers are expected to treat exact critical-point hits separately.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise InvalidInputError("power mean of an empty list")
    if np.any(x < 0):
        raise InvalidInputError("power mean requires nonnegative values")
    p = float(p)
    if p <= 0 and np.any(x == 0):
        raise InvalidInputError("zero value with nonpositive exponent")
    if math.isinf(p):
        return float(x.min() if p < 0 else x.max())
    if p == 0:
        return float(np.exp(np.mean(np.log(x))))
    return float(np.mean(x**p) ** (1.0 / p))


@dataclass(frozen=True)
class PowerMeanReport:
    """Power means of |w_k - a| plus the special-case quantities.

    ``values[i]`` is M_{exponents[i]}; ``c1_value = sum |w_k - a|^-2`` and
    ``c2_value = sum |w_k - a|^2`` are the two sides compared against
    n - 1.  ``critical_hit`` marks an exact hit w_k = a (instance settled
    immediately; the negative-exponent means are reported as 0 by
    convention).
    """

    exponents: tuple
    values: tuple
    condition_holds: bool
    c1_value: float
    c2_value: float
    min_distance: float
    critical_hit: bool

    def sendov_holds(self) -> bool:
        """Whether the closed unit disk around a contains a critical point."""
        return self.critical_hit or self.min_distance <= 1.0


def _exact_hit(inst: SendovInstance) -> bool:
    # A zero repeated at a forces a critical point exactly at a, no matter
    # how much a root cluster smears the computed points.
    return bool(np.min(np.abs(inst.other_zeros - inst.a)) <= CRITICAL_HIT_TOL)


def _distance_report(inst: SendovInstance, dist: np.ndarray) -> PowerMeanReport:
    hit = bool(np.min(dist) <= CRITICAL_HIT_TOL) or _exact_hit(inst)
    exponents = (-math.inf, -2.0, 2.0)
    if hit:
        c1 = math.inf
        values = (0.0, 0.0, power_mean(dist, 2))
    else:
        c1 = float(np.sum(dist**-2.0))
        values = tuple(power_mean(dist, p) for p in exponents)
    return PowerMeanReport(
        exponents=exponents,
        values=values,
        condition_holds=inst.hypothesis_margin() >= 0.0,
        c1_value=c1,
        c2_value=float(np.sum(dist**2)),
        min_distance=float(np.min(dist)),
        critical_hit=hit,
    )


def check_special_case(inst: SendovInstance, settings: RootSolverSettings | None = None) -> PowerMeanReport:
    """Evaluate the special-case hypothesis and conclusions for one instance.

    When ``condition_holds`` the report should satisfy C1 strictly
    (c1_value > n - 1), C2 strictly (c2_value < n - 1) and
    min_distance < 1; an exact critical hit settles the instance
    immediately.
    """
    w = critical_points(inst.zeros(), settings)
    return _distance_report(inst, np.abs(w - inst.a))


def probe_m_minus2(inst: SendovInstance, settings: RootSolverSettings | None = None) -> float:
    """M_{-2} of the critical-point distances; candidates are re-verified.

    Returns 0.0 (by convention) when some critical point hits a exactly.
    A value above 1 would be a counterexample candidate for the open
    question, so it is recomputed at 100x tighter root tolerance before
    being reported.
    """
    settings = settings or RootSolverSettings()
    report = check_special_case(inst, settings)
    if report.critical_hit:
        return 0.0
    value = report.values[1]
    if value > 1.0:
        refined = check_special_case(inst, settings.tightened())
        value = 0.0 if refined.critical_hit else refined.values[1]
    return value


def probe_m_minus2_batch(a_values, other_zeros, settings: RootSolverSettings | None = None):
    """Vectorized M_{-2} over instances sharing one degree.

    ``a_values`` has shape (b,), ``other_zeros`` shape (b, n-1).  Returns
    ``(values, hits)`` where hits marks exact critical hits (value 0 by
    convention).  Candidates above 1 are individually re-verified at
    tightened tolerance.
    """
    settings = settings or RootSolverSettings()
    a = np.asarray(a_values, dtype=float)
    others = np.asarray(other_zeros, dtype=complex)
    full = np.concatenate([a[:, np.newaxis].astype(complex), others], axis=1)
    w = critical_points_batch(full, settings)
    dist = np.abs(w - a[:, np.newaxis])
    hits = (dist.min(axis=1) <= CRITICAL_HIT_TOL) | (
        np.abs(others - a[:, np.newaxis]).min(axis=1) <= CRITICAL_HIT_TOL
    )
    m = dist.shape[1]
    with np.errstate(divide="ignore"):
        values = np.where(hits, 0.0, (np.sum(dist**-2.0, axis=1) / m) ** -0.5)
    for i in np.flatnonzero(values > 1.0):
        values[i] = probe_m_minus2(SendovInstance(float(a[i]), others[i]), settings)
    return values, hits
