"""Real-interpolation norms from K curves.

The interpolation norm at parameters (theta, r) is

    || f ||_{theta,r} = ( int_0^inf (t^-theta K(t))^r dt/t )^(1/r)

with the sup over t when r = inf.  K is sampled on a dyadic log grid
and modeled as log-linear between nodes, which integrates each cell in
closed form and is exact wherever K is a power law.  Outside the
window K has reached its asymptotes (constant ||f||_A0 above, slope
||f||_A1 below), so the two tails integrate exactly; the window grows
automatically until the tail mass is negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffField
from .errors import NumericError, UsageError
from .grid import BesovIndex
from .kfunc import InterpQuery, _logcell_integral, k_dispatch, k_weighted_seq
from .norms import besov_norm, weighted_lq_norm

__all__ = [
    "QuadratureSpec",
    "InterpReport",
    "interp_norm",
    "interp_norm_report",
    "intermediate_index",
    "besov_identity_check",
    "reiteration_check",
]

_MAX_EXPANSIONS = 12
_EXPAND_STEP = 16.0  # binary decades added per side per expansion


@dataclass(frozen=True)
class QuadratureSpec:
    """Window and resolution for the interpolation integral.

    Exponents are binary: the grid spans [2^t_min_exp, 2^t_max_exp]
    with points_per_decade nodes per factor of 2.  tail_rel_tol bounds
    the admissible fraction of the integral carried by the closed-form
    tails; the window expands until the bound holds.
    """

    points_per_decade: int = 8
    t_min_exp: float = -20.0
    t_max_exp: float = 20.0
    tail_rel_tol: float = 1e-6

    def __post_init__(self):
        if self.points_per_decade <= 0:
            raise UsageError("points_per_decade must be positive")
        if not self.t_min_exp < self.t_max_exp:
            raise UsageError("need t_min_exp < t_max_exp")
        if not 0 < self.tail_rel_tol < 1:
            raise UsageError("tail_rel_tol must lie in (0, 1)")


@dataclass(frozen=True)
class InterpReport:
    """Value of one interpolation-norm computation plus how it was won."""

    value: float
    method: str
    t_min_exp: float
    t_max_exp: float
    n_points: int
    tail_low: float
    tail_high: float
    tail_fraction: float


def _window_grid(lo_exp: float, hi_exp: float, ppd: int) -> np.ndarray:
    count = int(round((hi_exp - lo_exp) * ppd)) + 1
    return np.logspace(lo_exp, hi_exp, count, base=2.0)


def _interp_from_kfun(kfun, theta: float, r: float, quad: QuadratureSpec,
                      method: str) -> InterpReport:
    """Quadrature driver shared by field-level and sequence-level norms.

    kfun maps t -> K(t).  Cells integrate in closed form under the
    log-linear model; tails use the exact asymptotics.  The window
    expands until the tails carry under tail_rel_tol of the total (for
    r = inf, until the sup detaches from the window edge).
    """
    lo_exp, hi_exp = quad.t_min_exp, quad.t_max_exp
    for _ in range(_MAX_EXPANSIONS):
        ts = _window_grid(lo_exp, hi_exp, quad.points_per_decade)
        ks = np.array([kfun(float(t)) for t in ts])
        if not ks.any():
            return InterpReport(0.0, method, lo_exp, hi_exp, len(ts),
                                0.0, 0.0, 0.0)
        slope1 = ks[0] / ts[0]      # K(t)/t at the low edge, tends to ||f||_A1
        level0 = float(ks[-1])      # K at the high edge, tends to ||f||_A0
        if math.isinf(r):
            vals = ts**-theta * ks
            imax = int(np.argmax(vals))
            if 0 < imax < len(ts) - 1:
                edge_lo = float(vals[0])
                edge_hi = float(vals[-1])
                peak = float(vals[imax])
                return InterpReport(peak, method, lo_exp, hi_exp, len(ts),
                                    edge_lo, edge_hi,
                                    max(edge_lo, edge_hi) / peak)
            lo_exp -= _EXPAND_STEP
            hi_exp += _EXPAND_STEP
            continue
        us = np.log(ts)
        gs = (ts**-theta * ks) ** r
        mid = sum(_logcell_integral(us[i], us[i + 1], float(gs[i]), float(gs[i + 1]))
                  for i in range(len(ts) - 1))
        e_lo = (1.0 - theta) * r
        e_hi = theta * r
        tail_lo = slope1**r * ts[0] ** e_lo / e_lo
        tail_hi = level0**r * ts[-1] ** -e_hi / e_hi
        total = mid + tail_lo + tail_hi
        if total == 0.0:
            return InterpReport(0.0, method, lo_exp, hi_exp, len(ts),
                                0.0, 0.0, 0.0)
        frac = (tail_lo + tail_hi) / total
        if frac <= quad.tail_rel_tol:
            return InterpReport(total ** (1.0 / r), method, lo_exp, hi_exp,
                                len(ts), tail_lo, tail_hi, frac)
        lo_exp -= _EXPAND_STEP
        hi_exp += _EXPAND_STEP
    raise NumericError(
        f"interpolation window grew to [2^{lo_exp}, 2^{hi_exp}] without "
        f"meeting tail tolerance {quad.tail_rel_tol}")


def _field_kfun(field, query, method, budget):
    if method == "formula":
        return lambda t: k_dispatch(field, query, t, budget=budget)[0]
    if method == "oracle":
        from .oracle import vertex_tables

        tables = vertex_tables(field, query.idx0, query.idx1, budget=budget)
        xi = query.xi
        return lambda t: tables.k(t, xi)
    raise UsageError(f"unknown method {method!r}; use 'formula' or 'oracle'")


def interp_norm_report(field: CoeffField, query: InterpQuery,
                       method: str = "formula",
                       quad: QuadratureSpec | None = None,
                       budget=None) -> InterpReport:
    """interp_norm plus window and tail diagnostics."""
    quad = quad or QuadratureSpec()
    kfun = _field_kfun(field, query, method, budget)
    return _interp_from_kfun(kfun, query.theta, query.r, quad, method)


def interp_norm(field: CoeffField, query: InterpQuery, method: str = "formula",
                quad: QuadratureSpec | None = None, budget=None) -> float:
    """Interpolation norm of the field for the query's couple and (theta, r).

    Evaluates K by the requested method on the quadrature window,
    integrates cells in closed form under log-linear K, adds the exact
    power-law tails, and widens the window until the tails carry less
    than quad.tail_rel_tol of the total (or, for r = inf, until the
    sup detaches from the window edge).
    """
    return interp_norm_report(field, query, method, quad, budget).value


def intermediate_index(query: InterpQuery) -> BesovIndex:
    """Besov index the (theta, r) interpolation space identifies with.

    Requires a shared p; smoothness interpolates linearly and the fine
    exponent becomes r.
    """
    i0, i1 = query.idx0, query.idx1
    if i0.p != i1.p:
        raise UsageError("intermediate index needs a shared p")
    if i0.s == i1.s:
        raise UsageError("intermediate index needs distinct smoothness")
    s_mid = (1.0 - query.theta) * i0.s + query.theta * i1.s
    return BesovIndex(s=s_mid, p=i0.p, q=query.r)


def besov_identity_check(field: CoeffField, query: InterpQuery,
                         quad: QuadratureSpec | None = None,
                         method: str = "formula", budget=None) -> float:
    """interp_norm divided by the Besov norm at the intermediate index.

    Bounded above and below by constants depending only on the
    exponents; a diagnostic ratio, not a hard assert.
    """
    target = intermediate_index(query)
    denom = besov_norm(field, target)
    if denom == 0.0:
        raise UsageError("zero field has no identity ratio")
    return interp_norm(field, query, method=method, quad=quad,
                       budget=budget) / denom


def reiteration_check(a, s_a: float, s_b: float, theta0: float, theta1: float,
                      eta: float, qs: tuple[float, float, float],
                      quad: QuadratureSpec | None = None) -> dict:
    """Compare both sides of reinterpolating two interpolation spaces.

    The two inner spaces of the weighted couple (l^{s_a,*}, l^{s_b,*})
    at parameters theta0, theta1 (fine exponents qs[0], qs[1]) are
    realized as the weighted spaces they identify with; the left side
    is then the (eta, qs[2]) interpolation norm of that realized
    couple, the right side the direct weighted norm at the composed
    smoothness (1-eta)*c0 + eta*c1.  Returns both norms and their
    ratio; constants are expected, not unit ratios.
    """
    if not (0 < theta0 < theta1 < 1) or not 0 < eta < 1:
        raise UsageError("need 0 < theta0 < theta1 < 1 and eta in (0, 1)")
    if s_a == s_b:
        raise UsageError("need distinct endpoint smoothness")
    q0, q1, q = qs
    quad = quad or QuadratureSpec()
    arr = np.asarray(a, dtype=float)
    c0 = (1.0 - theta0) * s_a + theta0 * s_b
    c1 = (1.0 - theta1) * s_a + theta1 * s_b
    s_final = (1.0 - eta) * c0 + eta * c1
    kfun = lambda t: k_weighted_seq(arr, c0, q0, c1, q1, t)
    lhs = _interp_from_kfun(kfun, eta, q, quad, "formula").value
    rhs = weighted_lq_norm(arr, s_final, q)
    if rhs == 0.0:
        raise UsageError("zero sequence has no reiteration ratio")
    return {"lhs": lhs, "rhs": rhs, "ratio": lhs / rhs,
            "s_composed": s_final}
