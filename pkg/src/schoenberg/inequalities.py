"""Closed-form evaluators for the zero/critical-point inequalities.

Each inequality bounds a power sum (or symmetric function) of the
critical-point moduli by an expression in the zeros.  Evaluators return
:class:`InequalityReport` values carrying both sides, the slack
``rhs - lhs``, and holds/equality flags; forms that assume a centered
configuration (zero centroid) carry the gating flags instead of silently
recentering, so callers decide how to treat off-center input.

Inequality identifiers
----------------------

==============  =============================================================
S0              order 2, centered:  sum|w|^2 <= ((n-2)/n) sum|z|^2
S               order 2, general: adds |sum z|^2 / n^2 to the S0 bound
BS              order 4, centered (de Bruin-Sharma form)
KT              order 4, centered, tighter (Kushel-Tyaglov form)
STAR            order 6, centered, from tr((A* A)^3) with A = SDS
STARSTAR        order 6, centered, tighter, from tr((A*)^3 A^3)
BSEN            order 1, general (de Bruijn-Springer / Erdos-Niven)
ST1             order 1, centered, sqrt((n-2)/n) factor; sharp
EK(k)           e_k(|w|) <= ((n-k)/n) e_k(|z|)
LOGMAJ(k)       weak log-majorization against the moduli polynomial
LXZ(r)          general order r >= 2 bound with (n-1)^(r-2) factors
IMPRO(r)        general order r >= 2 bound through the S right-hand side
==============  =============================================================

The order-6 right-hand sides also exist as brute-force matrix trace
oracles (:func:`star_trace_oracle`, :func:`starstar_trace_oracle`) for
independent verification of the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL_CENTER, TOL_EQ
from .errors import InvalidInputError, NumericConsistencyError
from .matrices import build_D, build_S, trace_word
from .poly import as_zeros, centroid_residual, elementary_symmetric_all, recenter
from .rootfind import (
    RootSolverSettings,
    critical_points,
    critical_points_batch,
    moduli_critical_points,
    moduli_critical_points_batch,
)

__all__ = [
    "InequalityReport",
    "make_report",
    "DEFAULT_ORDERS",
    "eval_order1",
    "eval_order2",
    "eval_order4",
    "eval_order6",
    "eval_symmetric",
    "eval_logmaj",
    "eval_general",
    "star_trace_oracle",
    "starstar_trace_oracle",
    "full_report",
    "evaluate_ensemble",
    "order6_bounds",
    "reports_from_table",
    "CENTERED_IDS",
]

# r exponents used by default for the general-order forms.
DEFAULT_ORDERS = (2.0, 2.5, 3.0, 4.0, 6.0)

# Forms whose right-hand side is only valid for centered configurations.
CENTERED_IDS = frozenset({"S0", "BS", "KT", "STAR", "STARSTAR", "ST1"})


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated inequality instance.

    ``slack = rhs - lhs``; ``holds`` allows slack down to
    ``-tol_eq * max(1, |rhs|)`` and ``equality`` flags ``|slack|`` within the
    same margin, so equality implies holds.  ``centered_required`` marks
    forms that assume a centered configuration and ``centered_satisfied``
    whether the evaluated configuration actually was; a report is
    *applicable* unless it required centering and did not have it.
    """

    inequality_id: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    equality: bool
    centered_required: bool = False
    centered_satisfied: bool = True
    aux: dict = field(default=None, repr=False)

    @property
    def applicable(self) -> bool:
        return self.centered_satisfied or not self.centered_required


def make_report(
    iid: str,
    lhs: float,
    rhs: float,
    tol_eq: float = TOL_EQ,
    centered_required: bool = False,
    centered_satisfied: bool = True,
    aux: dict | None = None,
) -> InequalityReport:
    """Assemble a report from the two sides, deriving slack and flags."""
    lhs = float(lhs)
    rhs = float(rhs)
    slack = rhs - lhs
    margin = tol_eq * max(1.0, abs(rhs))
    return InequalityReport(
        inequality_id=iid,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=slack >= -margin,
        equality=abs(slack) <= margin,
        centered_required=centered_required,
        centered_satisfied=centered_satisfied,
        aux=aux,
    )


def _param_id(base: str, value) -> str:
    return f"{base}({value:g})"


# ---------------------------------------------------------------------------
# power-sum kernels (batched over leading axes)

def _abs_pow_sum(v, r):
    """sum |v|**r along the trailing axis, with fast paths for r in 1,2,4,6."""
    a2 = v.real * v.real + v.imag * v.imag
    if r == 1:
        return np.sqrt(a2).sum(axis=-1)
    if r == 2:
        return a2.sum(axis=-1)
    if r == 4:
        return (a2 * a2).sum(axis=-1)
    if r == 6:
        return (a2 * a2 * a2).sum(axis=-1)
    return (a2 ** (r / 2.0)).sum(axis=-1)


@dataclass(frozen=True)
class _ZeroSums:
    n: int
    a1: np.ndarray  # sum |z|
    a2: np.ndarray  # sum |z|^2
    a4: np.ndarray  # sum |z|^4
    a6: np.ndarray  # sum |z|^6
    t1: np.ndarray  # sum z
    t2: np.ndarray  # sum z^2
    t3: np.ndarray  # sum z^3
    u: np.ndarray  # sum z |z|^2
    v: np.ndarray  # sum z^2 |z|^2


def _zero_sums(z) -> _ZeroSums:
    m2 = z.real * z.real + z.imag * z.imag
    z2 = z * z
    return _ZeroSums(
        n=z.shape[-1],
        a1=np.sqrt(m2).sum(axis=-1),
        a2=m2.sum(axis=-1),
        a4=(m2 * m2).sum(axis=-1),
        a6=(m2 * m2 * m2).sum(axis=-1),
        t1=z.sum(axis=-1),
        t2=z2.sum(axis=-1),
        t3=(z2 * z).sum(axis=-1),
        u=(z * m2).sum(axis=-1),
        v=(z2 * m2).sum(axis=-1),
    )


def _abs2(c):
    return c.real * c.real + c.imag * c.imag


def _rhs_order2_centered(s: _ZeroSums):
    return (s.n - 2.0) / s.n * s.a2


def _rhs_order2_general(s: _ZeroSums):
    return _rhs_order2_centered(s) + _abs2(s.t1) / s.n**2


def _rhs_order4_bs(s: _ZeroSums):
    return (s.n - 4.0) / s.n * s.a4 + 2.0 / s.n**2 * s.a2**2


def _rhs_order4_kt(s: _ZeroSums):
    return (s.n - 4.0) / s.n * s.a4 + (s.a2**2 + _abs2(s.t2)) / s.n**2


def _rhs_order6_star(s: _ZeroSums):
    n = s.n
    return (
        (n - 6.0) / n * s.a6
        + 6.0 / n**2 * s.a4 * s.a2
        + 3.0 / n**2 * _abs2(s.u)
        - 2.0 / n**3 * s.a2**3
    )


def _rhs_order6_starstar(s: _ZeroSums):
    n = s.n
    return (
        (n - 6.0) / n * s.a6
        + 2.0 / n**2 * s.a4 * s.a2
        + 4.0 / n**2 * (s.v * np.conj(s.t2)).real
        + 2.0 / n**2 * _abs2(s.u)
        + 1.0 / n**2 * _abs2(s.t3)
        - 2.0 / n**3 * s.a2 * _abs2(s.t2)
    )


def _rhs_order1_general(s: _ZeroSums):
    return (s.n - 1.0) / s.n * s.a1


def _rhs_order1_centered(s: _ZeroSums):
    return np.sqrt((s.n - 2.0) / s.n) * s.a1


def _rhs_general_lxz(s: _ZeroSums, r: float):
    n = s.n
    return (n - 1.0) ** (r - 2.0) / n**r * np.abs(s.t1) ** r + (
        (n - 1.0) ** (r - 2.0) * (n - 2.0) / n ** (r / 2.0)
    ) * s.a2 ** (r / 2.0)


def _rhs_general_impro(s: _ZeroSums, r: float):
    return _rhs_order2_general(s) ** (r / 2.0)


# ---------------------------------------------------------------------------
# single-configuration evaluators

def _checked_pair(zeros, critical):
    z = as_zeros(zeros)
    w = np.asarray(critical, dtype=complex)
    if z.ndim != 1 or w.ndim != 1:
        raise InvalidInputError("evaluators take one configuration; use evaluate_ensemble for batches")
    if w.shape[0] != z.shape[0] - 1:
        raise InvalidInputError(
            f"critical set must have length n-1 = {z.shape[0] - 1}, got {w.shape[0]}"
        )
    return z, w


def eval_order2(zeros, critical, *, tol_eq: float = TOL_EQ, tol_center: float = TOL_CENTER):
    """Order-2 reports (S0 centered form, S general form)."""
    z, w = _checked_pair(zeros, critical)
    s = _zero_sums(z)
    centered = centroid_residual(z) <= tol_center
    lhs = _abs_pow_sum(w, 2)
    s0 = make_report("S0", lhs, _rhs_order2_centered(s), tol_eq, True, centered)
    gen = make_report("S", lhs, _rhs_order2_general(s), tol_eq)
    return s0, gen


def eval_order4(zeros, critical, *, tol_eq: float = TOL_EQ, tol_center: float = TOL_CENTER):
    """Order-4 reports (BS, KT); both assume a centered configuration."""
    z, w = _checked_pair(zeros, critical)
    s = _zero_sums(z)
    centered = centroid_residual(z) <= tol_center
    lhs = _abs_pow_sum(w, 4)
    bs = make_report("BS", lhs, _rhs_order4_bs(s), tol_eq, True, centered)
    kt = make_report("KT", lhs, _rhs_order4_kt(s), tol_eq, True, centered)
    return bs, kt


def eval_order6(zeros, critical, *, tol_eq: float = TOL_EQ, tol_center: float = TOL_CENTER):
    """Order-6 reports (STAR, STARSTAR); both assume a centered configuration.

    STARSTAR is the tighter but more complicated bound; STARSTAR rhs <=
    STAR rhs always (a trace-inequality consequence), and both coincide
    with the left side exactly when the zeros are collinear.
    """
    z, w = _checked_pair(zeros, critical)
    s = _zero_sums(z)
    centered = centroid_residual(z) <= tol_center
    lhs = _abs_pow_sum(w, 6)
    star = make_report("STAR", lhs, _rhs_order6_star(s), tol_eq, True, centered)
    starstar = make_report("STARSTAR", lhs, _rhs_order6_starstar(s), tol_eq, True, centered)
    return star, starstar


def eval_order1(zeros, critical, *, tol_eq: float = TOL_EQ, tol_center: float = TOL_CENTER):
    """Order-1 reports (BSEN general, ST1 centered)."""
    z, w = _checked_pair(zeros, critical)
    s = _zero_sums(z)
    centered = centroid_residual(z) <= tol_center
    lhs = _abs_pow_sum(w, 1)
    bsen = make_report("BSEN", lhs, _rhs_order1_general(s), tol_eq)
    st1 = make_report("ST1", lhs, _rhs_order1_centered(s), tol_eq, True, centered)
    return bsen, st1


def eval_symmetric(zeros, critical, k: int, *, tol_eq: float = TOL_EQ):
    """Elementary-symmetric report EK(k): e_k(|w|) <= ((n-k)/n) e_k(|z|)."""
    z, w = _checked_pair(zeros, critical)
    n = z.shape[0]
    if not 1 <= k <= n - 1:
        raise InvalidInputError(f"k must be in 1..{n - 1}, got {k}")
    lhs = elementary_symmetric_all(np.abs(w))[k]
    rhs = (n - k) / n * elementary_symmetric_all(np.abs(z))[k]
    return make_report(_param_id("EK", k), lhs, rhs, tol_eq)


def eval_logmaj(zeros, critical, k: int, xi=None, *, tol_eq: float = TOL_EQ):
    """Weak log-majorization report LOGMAJ(k).

    Compares the product of the k largest critical-point moduli against
    the product of the k largest critical points of the moduli polynomial
    (both listed descending).  The report's ``aux`` carries the
    elementary-symmetric consequence e_k(|w|) <= e_k(xi).
    """
    z, w = _checked_pair(zeros, critical)
    n = z.shape[0]
    if not 1 <= k <= n - 1:
        raise InvalidInputError(f"k must be in 1..{n - 1}, got {k}")
    if xi is None:
        xi = moduli_critical_points(z)
    xi = np.asarray(xi, dtype=float)
    aw = np.sort(np.abs(w))[::-1]
    lhs = float(np.prod(aw[:k]))
    rhs = float(np.prod(xi[:k]))
    aux = {
        "esf_lhs": float(elementary_symmetric_all(np.abs(w))[k]),
        "esf_rhs": float(elementary_symmetric_all(xi)[k]),
    }
    return make_report(_param_id("LOGMAJ", k), lhs, rhs, tol_eq, aux=aux)


def eval_general(zeros, critical, r: float, *, tol_eq: float = TOL_EQ):
    """General-order reports (LXZ(r), IMPRO(r)) for any real r >= 2.

    IMPRO is the tighter bound for n >= 3; the two right-hand sides agree
    identically when n = 2 or r = 2.
    """
    z, w = _checked_pair(zeros, critical)
    if not r >= 2:
        raise InvalidInputError(f"order r must be >= 2, got {r}")
    s = _zero_sums(z)
    lhs = _abs_pow_sum(w, r)
    lxz = make_report(_param_id("LXZ", r), lhs, _rhs_general_lxz(s, r), tol_eq)
    impro = make_report(_param_id("IMPRO", r), lhs, _rhs_general_impro(s, r), tol_eq)
    return lxz, impro


# ---------------------------------------------------------------------------
# brute-force trace oracles for the order-6 right-hand sides

def _oracle_config(zeros, tol_center):
    z = as_zeros(zeros)
    if z.ndim != 1:
        raise InvalidInputError("trace oracles take a single configuration")
    if centroid_residual(z) > tol_center:
        raise InvalidInputError("trace oracles require a centered configuration")
    return z


def _real_trace(t: complex, scale: float) -> float:
    if abs(t.imag) > 1e-9 * scale:
        raise NumericConsistencyError(
            f"trace imaginary part {t.imag:.3e} exceeds 1e-9 * scale^6"
        )
    return t.real


def star_trace_oracle(zeros, *, tol_center: float = TOL_CENTER) -> float:
    """tr((S D* S D)^3) by explicit matrix products: the STAR right side."""
    z = _oracle_config(zeros, tol_center)
    s = build_S(z.shape[0])
    d = build_D(z)
    dh = d.conj().T
    t = trace_word([s, dh, s, d] * 3)
    return _real_trace(t, float(np.maximum(1.0, np.max(np.abs(z)))) ** 6)


def starstar_trace_oracle(zeros, *, tol_center: float = TOL_CENTER) -> float:
    """tr((A*)^3 A^3) with A = SDS by explicit products: the STARSTAR right side."""
    z = _oracle_config(zeros, tol_center)
    s = build_S(z.shape[0])
    d = build_D(z)
    dh = d.conj().T
    t = trace_word([s, dh, s, dh, s, dh, s, d, s, d, s, d])
    return _real_trace(t, float(np.maximum(1.0, np.max(np.abs(z)))) ** 6)


def order6_bounds(zs):
    """Batched closed-form order-6 right-hand sides ``(STAR, STARSTAR)``.

    Only valid for centered configurations; no critical points needed.
    """
    z = as_zeros(zs)
    if z.ndim == 1:
        z = z[np.newaxis, :]
    s = _zero_sums(z)
    return _rhs_order6_star(s), _rhs_order6_starstar(s)


# ---------------------------------------------------------------------------
# whole-suite evaluation

def full_report(
    zeros,
    settings: RootSolverSettings | None = None,
    *,
    orders=DEFAULT_ORDERS,
    recenter_centered: bool = False,
    tol_eq: float = TOL_EQ,
    tol_center: float = TOL_CENTER,
) -> list[InequalityReport]:
    """Every inequality report for one configuration, in a fixed order.

    With ``recenter_centered`` the centered-only forms are evaluated on the
    recentered configuration (fresh critical points included); otherwise
    they are evaluated as-is and flagged when the centroid is off origin.
    """
    z = as_zeros(zeros)
    if z.ndim != 1:
        raise InvalidInputError("full_report takes a single configuration")
    n = z.shape[0]
    w = critical_points(z, settings)
    if recenter_centered and centroid_residual(z) > tol_center:
        zc = recenter(z)
        wc = critical_points(zc, settings)
    else:
        zc, wc = z, w
    kw = {"tol_eq": tol_eq, "tol_center": tol_center}
    reports = [
        eval_order2(zc, wc, **kw)[0],
        eval_order2(z, w, **kw)[1],
        *eval_order4(zc, wc, **kw),
        *eval_order6(zc, wc, **kw),
        eval_order1(z, w, **kw)[0],
        eval_order1(zc, wc, **kw)[1],
    ]
    xi = moduli_critical_points(z)
    for k in range(1, n):
        reports.append(eval_symmetric(z, w, k, tol_eq=tol_eq))
    for k in range(1, n):
        reports.append(eval_logmaj(z, w, k, xi=xi, tol_eq=tol_eq))
    for r in orders:
        reports.extend(eval_general(z, w, r, tol_eq=tol_eq))
    return reports


def evaluate_ensemble(
    zs,
    settings: RootSolverSettings | None = None,
    *,
    orders=DEFAULT_ORDERS,
    recenter_centered: bool = True,
    tol_center: float = TOL_CENTER,
):
    """Batched two-sided evaluation over a (b, n) stack of configurations.

    Returns ``(table, centered_mask)`` where ``table`` maps each inequality
    id to ``(lhs, rhs, centered_required)`` arrays of length b, and
    ``centered_mask`` marks samples whose *original* configuration was
    centered.  With ``recenter_centered`` (the default) the centered-only
    forms are evaluated on recentered copies and are therefore valid for
    every sample; otherwise they use the raw configurations and are only
    meaningful where ``centered_mask`` holds.
    """
    z = as_zeros(zs)
    if z.ndim == 1:
        z = z[np.newaxis, :]
    n = z.shape[-1]
    w = critical_points_batch(z, settings)
    xi = moduli_critical_points_batch(z)
    centered_mask = np.asarray(centroid_residual(z) <= tol_center)

    if recenter_centered:
        zc = recenter(z)
        wc = critical_points_batch(zc, settings)
    else:
        zc, wc = z, w
    s_raw = _zero_sums(z)
    s_cen = _zero_sums(zc)

    table: dict[str, tuple[np.ndarray, np.ndarray, bool]] = {}

    def put(iid, lhs, rhs, centered_required=False):
        table[iid] = (np.atleast_1d(lhs), np.atleast_1d(rhs), centered_required)

    put("S0", _abs_pow_sum(wc, 2), _rhs_order2_centered(s_cen), True)
    put("S", _abs_pow_sum(w, 2), _rhs_order2_general(s_raw))
    put("BS", _abs_pow_sum(wc, 4), _rhs_order4_bs(s_cen), True)
    put("KT", _abs_pow_sum(wc, 4), _rhs_order4_kt(s_cen), True)
    put("STAR", _abs_pow_sum(wc, 6), _rhs_order6_star(s_cen), True)
    put("STARSTAR", _abs_pow_sum(wc, 6), _rhs_order6_starstar(s_cen), True)
    put("BSEN", _abs_pow_sum(w, 1), _rhs_order1_general(s_raw))
    put("ST1", _abs_pow_sum(wc, 1), _rhs_order1_centered(s_cen), True)

    ew = elementary_symmetric_all(np.abs(w))
    ez = elementary_symmetric_all(np.abs(z))
    for k in range(1, n):
        put(_param_id("EK", k), ew[..., k], (n - k) / n * ez[..., k])

    aw_desc = np.sort(np.abs(w), axis=-1)[..., ::-1]
    prod_w = np.cumprod(aw_desc, axis=-1)
    prod_xi = np.cumprod(xi, axis=-1)
    for k in range(1, n):
        put(_param_id("LOGMAJ", k), prod_w[..., k - 1], prod_xi[..., k - 1])

    for r in orders:
        put(_param_id("LXZ", r), _abs_pow_sum(w, r), _rhs_general_lxz(s_raw, r))
        put(_param_id("IMPRO", r), _abs_pow_sum(w, r), _rhs_general_impro(s_raw, r))

    return table, centered_mask


def reports_from_table(table, centered_mask, index: int, *, recentered: bool = True, tol_eq: float = TOL_EQ):
    """Materialize the reports of sample ``index`` from an ensemble table.

    ``recentered`` must match the ``recenter_centered`` flag the table was
    built with: it decides whether the centered-only rows were evaluated on
    a configuration that actually is centered.
    """
    out = []
    for iid, (lhs, rhs, centered_required) in table.items():
        satisfied = True if not centered_required else (recentered or bool(centered_mask[index]))
        out.append(make_report(iid, lhs[index], rhs[index], tol_eq, centered_required, satisfied))
    return out
