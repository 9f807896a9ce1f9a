import math

import numpy as np
import pytest

from besovk.coeffs import CoeffField
from besovk.grid import BesovIndex, GridSpec
from besovk.interp import (
    QuadratureSpec,
    besov_identity_check,
    intermediate_index,
    interp_norm,
    interp_norm_report,
    reiteration_check,
)
from besovk.kfunc import InterpQuery


def _field(layers, n=1):
    spec = GridSpec(n=n, J=len(layers), layer_sizes=tuple(len(v) for v in layers))
    return CoeffField(spec, [np.asarray(v, dtype=float) for v in layers])


def _unit_query(theta=0.5, r=1.0):
    idx = BesovIndex(0.0, 2.0, 2.0)
    return InterpQuery(idx, idx, theta=theta, r=r)


def test_single_coefficient_closed_form_4c():
    # K(t) = c*min(1,t); integral of t^{-1/2} min(1,t) dt/t is 4
    c = 1.3
    got = interp_norm(_field([(c,)]), _unit_query())
    assert got == pytest.approx(4.0 * c, rel=1e-4)


def test_single_coefficient_sup_form():
    c = 0.85
    got = interp_norm(_field([(c,)]), _unit_query(theta=0.4, r=math.inf))
    assert got == pytest.approx(c, rel=1e-9)


def test_report_fields_and_tail_control():
    rep = interp_norm_report(_field([(2.0,)]), _unit_query())
    assert rep.method == "formula"
    assert rep.value == pytest.approx(8.0, rel=1e-4)
    assert rep.n_points >= 1
    assert rep.tail_fraction <= QuadratureSpec().tail_rel_tol
    assert rep.t_min_exp < 0 < rep.t_max_exp


def test_formula_vs_oracle_methods_stay_in_band():
    field = _field([(1.0, 0.4), (0.8,)])
    i0 = BesovIndex(0.7, 1.5, 1.0)
    i1 = BesovIndex(-0.5, 1.5, 2.0)
    query = InterpQuery(i0, i1, theta=0.3, r=1.5)
    a = interp_norm(field, query, method="formula")
    b = interp_norm(field, query, method="oracle")
    assert 1.0 / 8.0 <= a / b <= 8.0


def test_interp_norm_homogeneous():
    field = _field([(1.0, 0.4), (0.8,)])
    query = InterpQuery(BesovIndex(0.6, 2.0, 1.0), BesovIndex(-0.6, 2.0, 1.0),
                        theta=0.25, r=2.0)
    base = interp_norm(field, query)
    assert interp_norm(field.scaled(3.0), query) == pytest.approx(
        3.0 * base, rel=1e-9)


def test_intermediate_index_interpolates_s():
    i0 = BesovIndex(1.0, 1.5, 1.0)
    i1 = BesovIndex(-1.0, 1.5, 3.0)
    mid = intermediate_index(InterpQuery(i0, i1, theta=0.25, r=2.0))
    assert mid.s == pytest.approx(0.5)
    assert mid.p == 1.5
    assert mid.q == 2.0


def test_identity_check_scale_invariant():
    field = _field([(0.9, 0.2), (0.5, 1.1)])
    query = InterpQuery(BesovIndex(1.0, 2.0, 1.0), BesovIndex(-1.0, 2.0, 1.0),
                        theta=0.4, r=2.0)
    r1 = besov_identity_check(field, query)
    r2 = besov_identity_check(field.scaled(7.0), query)
    assert math.isfinite(r1) and r1 > 0
    assert r2 == pytest.approx(r1, rel=1e-9)


def test_identity_check_single_spike_finite():
    field = _field([(1.0,), (0.0,)])
    query = InterpQuery(BesovIndex(1.0, 1.5, 1.0), BesovIndex(-1.0, 1.5, 1.0),
                        theta=0.5, r=1.0)
    ratio = besov_identity_check(field, query)
    assert 1.0 / 32.0 <= ratio <= 32.0


def test_reiteration_single_spike_ratio_and_homogeneity():
    a = np.array([1.0, 0.0, 0.0])
    rep = reiteration_check(a, s_a=-1.0, s_b=1.5, theta0=0.25, theta1=0.75,
                            eta=0.5, qs=(1.0, 1.0, 2.0))
    assert math.isfinite(rep["ratio"]) and rep["ratio"] > 0
    assert rep["s_composed"] == pytest.approx(-1.0 + 2.5 * 0.5)
    rep2 = reiteration_check(5.0 * a, s_a=-1.0, s_b=1.5, theta0=0.25,
                             theta1=0.75, eta=0.5, qs=(1.0, 1.0, 2.0))
    assert rep2["ratio"] == pytest.approx(rep["ratio"], rel=1e-9)


def test_window_expansion_controls_tails():
    # slow-decay exponent forces the window wider than the default
    field = _field([(1.0,)])
    query = _unit_query(theta=0.5, r=1.0)
    quad = QuadratureSpec(t_min_exp=-2.0, t_max_exp=2.0)
    rep = interp_norm_report(field, query, quad=quad)
    assert rep.t_max_exp > 2.0
    assert rep.tail_fraction <= quad.tail_rel_tol
    assert rep.value == pytest.approx(4.0, rel=1e-4)


def test_quadrature_spec_validation():
    with pytest.raises(Exception):
        QuadratureSpec(points_per_decade=0)
    with pytest.raises(Exception):
        QuadratureSpec(t_min_exp=5.0, t_max_exp=-5.0)
