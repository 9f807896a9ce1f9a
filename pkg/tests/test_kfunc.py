import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besovk.coeffs import CoeffField
from besovk.errors import NumericError, UsageError
from besovk.grid import BesovIndex, GridSpec
from besovk.kfunc import (
    CaseTag,
    InterpQuery,
    default_t_grid,
    k_curve,
    k_dispatch,
    k_general,
    k_layer,
    k_maingrid_W,
    k_p_equal,
    k_power_layer,
    k_q_equal,
    k_rearr_mainq,
    k_weighted_seq,
    solve_monotone,
)
from besovk.norms import besov_norm, lp_norm
from besovk.oracle import k_inf_vertex, k_vertex_exact


def _field(layers, n=1):
    spec = GridSpec(n=n, J=len(layers), layer_sizes=tuple(len(v) for v in layers))
    return CoeffField(spec, [np.asarray(v, dtype=float) for v in layers])


# --- case routing -----------------------------------------------------------

def test_case_tag_table():
    i = BesovIndex
    cases = [
        (i(0.0, 2.0, 2.0), i(0.0, 2.0, 2.0), CaseTag.DEGENERATE),
        (i(1.0, 2.0, 1.0), i(0.0, 2.0, 1.0), CaseTag.P_EQUAL_S_DIFF_Q_EQUAL),
        (i(1.0, 2.0, 1.0), i(0.0, 2.0, 2.0), CaseTag.P_EQUAL_S_DIFF_Q_DIFF),
        (i(1.0, 2.0, 1.0), i(1.0, 2.0, 2.0), CaseTag.P_EQUAL_S_EQUAL),
        (i(1.0, 1.0, 2.0), i(0.0, 2.0, 2.0), CaseTag.Q_EQUAL_P_DIFF),
        (i(1.0, 1.0, 1.0), i(0.0, 2.0, 2.0), CaseTag.GENERAL),
        (i(1.0, 1.0, math.inf), i(0.0, 2.0, 2.0), CaseTag.ORACLE_ONLY),
        (i(1.0, 1.0, 1.0), i(0.0, 2.0, math.inf), CaseTag.ORACLE_ONLY),
    ]
    for idx0, idx1, want in cases:
        assert InterpQuery(idx0, idx1).case is want


def test_query_validation():
    idx = BesovIndex(0.0, 2.0, 2.0)
    with pytest.raises(UsageError):
        InterpQuery(idx, idx, theta=0.0)
    with pytest.raises(UsageError):
        InterpQuery(idx, idx, theta=1.0)
    with pytest.raises(UsageError):
        InterpQuery(idx, idx, r=0.0)
    with pytest.raises(UsageError):
        InterpQuery(idx, idx, xi=0.5)


# --- scalar solver ----------------------------------------------------------

def test_solve_monotone_identity():
    assert solve_monotone(lambda t: t, 5.0) == pytest.approx(5.0, rel=1e-9)


def test_solve_monotone_square():
    assert solve_monotone(lambda t: t * t, 9.0) == pytest.approx(3.0, rel=1e-9)


def test_solve_monotone_plateau_insensitive():
    # g has a plateau exactly at the target; any plateau point is a
    # valid answer and the downstream K value is identical for all
    g = lambda t: min(max(t, 2.0), 5.0)
    root = solve_monotone(g, 2.0)
    assert g(root) == pytest.approx(2.0, rel=1e-9)


def test_solve_monotone_no_bracket():
    with pytest.raises(NumericError):
        solve_monotone(lambda t: 1.0 / (1.0 + 1.0 / t), 2.0)


def test_default_t_grid():
    g = default_t_grid()
    assert len(g) == 81
    assert g[0] == pytest.approx(2.0**-20)
    assert g[-1] == pytest.approx(2.0**20)


# --- layer-level K ----------------------------------------------------------

def test_k_layer_two_entry_partial_integral():
    # l^1 vs l^inf on (2,1) at t=1: partial integral up to T=1 of the
    # rearrangement is 2; the 4-subset vertex minimum agrees
    field = _field([(2.0, 1.0)])
    query = InterpQuery(BesovIndex(0.0, 1.0, 1.0), BesovIndex(0.0, math.inf, 1.0))
    assert k_layer(field, query, 0, 1.0) == pytest.approx(2.0, rel=1e-12)


def test_k_layer_single_coefficient():
    field = _field([(0.0,), (1.5,)])
    i0 = BesovIndex(0.5, 1.0, 1.0)
    i1 = BesovIndex(-1.0, 2.0, 1.0)
    w0 = 2.0 ** i0.weight_exponent(1)
    w1 = 2.0 ** i1.weight_exponent(1)
    query = InterpQuery(i0, i1)
    for t in (0.1, 2.0, 40.0):
        assert k_layer(field, query, 1, t) == pytest.approx(
            1.5 * min(w0, t * w1), rel=1e-12)


def test_k_layer_large_t_recovers_first_norm():
    field = _field([(1.0, 0.25, 0.5)])
    query = InterpQuery(BesovIndex(0.3, 1.5, 1.0), BesovIndex(0.0, 2.0, 1.0))
    big = k_layer(field, query, 0, 2.0**60)
    assert big == pytest.approx(lp_norm(field.layers[0], 1.5), rel=1e-12)


# --- shared-p routes --------------------------------------------------------

def test_k_maingrid_W_two_ones():
    assert k_maingrid_W(np.array([1.0, 1.0]), 0.0, 1.0, 1.0, 1.0) == pytest.approx(
        2.0, rel=1e-12)


def test_k_maingrid_W_single_spike():
    a = np.array([3.0, 0.0, 0.0])
    for t in (0.25, 1.0, 4.0):
        got = k_maingrid_W(a, 0.0, 1.0, 1.5, t)
        assert got == pytest.approx(3.0 * min(1.0, t), rel=1e-12)


@given(st.lists(st.floats(0.0, 5.0), min_size=1, max_size=6),
       st.floats(0.1, 10.0), st.floats(0.5, 3.0))
def test_k_maingrid_W_homogeneous(a, t, c):
    a = np.array(a)
    base = k_maingrid_W(a, 0.0, 0.75, 1.0, t)
    assert k_maingrid_W(c * a, 0.0, 0.75, 1.0, t) == pytest.approx(
        c * base, rel=1e-12, abs=1e-300)


def test_k_rearr_single_entry():
    for t in (0.2, 1.0, 5.0):
        assert k_rearr_mainq(np.array([2.7]), 1.0, 2.0, t) == pytest.approx(
            2.7 * min(1.0, t), rel=1e-12)


def test_k_rearr_two_entries_q1_qinf():
    got = k_rearr_mainq(np.array([2.0, 1.0]), 1.0, math.inf, 1.0)
    assert got == pytest.approx(2.0, rel=1e-12)


@given(st.lists(st.floats(0.001, 5.0), min_size=1, max_size=6),
       st.floats(0.05, 20.0))
def test_k_rearr_commutation_exact(a, t):
    a = np.array(a)
    fwd = k_rearr_mainq(a, 1.0, 2.0, t)
    rev = t * k_rearr_mainq(a, 2.0, 1.0, 1.0 / t)
    assert fwd == pytest.approx(rev, rel=1e-12)


def test_k_weighted_seq_routes_match_manual():
    a = np.array([1.0, 0.5, 0.25])
    t = 1.7
    # equal exponents, equal q: degenerate min(1,t)*norm
    want = min(1.0, t) * lp_norm(2.0 ** (np.arange(3) * 0.5) * a, 1.5)
    assert k_weighted_seq(a, 0.5, 1.5, 0.5, 1.5, t) == pytest.approx(want, rel=1e-12)
    # swapped smoothness reduces to the commuted W
    fwd = k_weighted_seq(a, 1.0, 1.0, 0.0, 1.0, t)
    rev = t * k_weighted_seq(a, 0.0, 1.0, 1.0, 1.0, 1.0 / t)
    assert fwd == pytest.approx(rev, rel=1e-12)


def test_holmstedt_route_band_vs_oracle():
    # shared p, different s and q: composed two-stage formula
    field = _field([(1.0, 0.3), (0.7,), (0.2, 0.9)])
    i0 = BesovIndex(0.8, 2.0, 1.0)
    i1 = BesovIndex(-0.6, 2.0, 3.0)
    query = InterpQuery(i0, i1)
    for t in 2.0 ** np.arange(-8.0, 9.0, 2.0):
        formula = k_p_equal(field, query, float(t))
        oracle = k_vertex_exact(field, i0, i1, float(t))
        ratio = formula / oracle
        assert 1.0 / 8.0 <= ratio <= 8.0


def test_p_equal_single_spike_matches_k_layer():
    field = _field([(0.0, 0.0), (2.2,)])
    i0 = BesovIndex(0.9, 1.5, 1.0)
    i1 = BesovIndex(-0.2, 1.5, 1.0)
    query = InterpQuery(i0, i1)
    for t in (0.3, 1.0, 6.0):
        assert k_p_equal(field, query, t) == pytest.approx(
            k_layer(field, query, 1, t), rel=1e-12)


def test_p_equal_rejects_distinct_p():
    field = _field([(1.0,)])
    query = InterpQuery(BesovIndex(0.0, 1.0, 1.0), BesovIndex(0.0, 2.0, 1.0))
    with pytest.raises(UsageError):
        k_p_equal(field, query, 1.0)


# --- shared-q route ---------------------------------------------------------

def test_q_equal_single_spike_matches_k_layer():
    field = _field([(0.0, 0.0), (1.4,)])
    i0 = BesovIndex(0.4, 1.0, 2.0)
    i1 = BesovIndex(-0.4, math.inf, 2.0)
    query = InterpQuery(i0, i1)
    for t in (0.2, 1.0, 11.0):
        assert k_q_equal(field, query, t) == pytest.approx(
            k_layer(field, query, 1, t), rel=1e-12)


def test_q_equal_two_layers_q1_sums():
    field = _field([(1.0, 0.5), (0.8,)])
    i0 = BesovIndex(0.6, 1.0, 1.0)
    i1 = BesovIndex(-0.3, 2.0, 1.0)
    query = InterpQuery(i0, i1)
    t = 1.3
    want = k_layer(field, query, 0, t) + k_layer(field, query, 1, t)
    assert k_q_equal(field, query, t) == pytest.approx(want, rel=1e-12)
    oracle = k_vertex_exact(field, i0, i1, t)
    assert 1.0 / 8.0 <= k_q_equal(field, query, t) / oracle <= 8.0


@given(st.floats(0.05, 20.0))
def test_q_equal_commutation_exact(t):
    field = _field([(1.0, 0.5), (0.8, 0.1)])
    i0 = BesovIndex(0.6, 1.0, 1.5)
    i1 = BesovIndex(-0.3, math.inf, 1.5)
    fwd = k_q_equal(field, InterpQuery(i0, i1), t)
    rev = t * k_q_equal(field, InterpQuery(i1, i0), 1.0 / t)
    assert fwd == pytest.approx(rev, rel=1e-12)


# --- general route ----------------------------------------------------------

def test_k_power_layer_single_coefficient():
    c = 1.9
    for q0, q1 in ((1.0, 2.0), (2.0, 0.5), (0.5, 3.0)):
        for s in (1e-6, 0.3, 1.0, 7.0, 1e8):
            got = k_power_layer(np.array([c]), 1.0, 2.0, q0, q1, s)
            assert got == pytest.approx(min(c**q0, s * c**q1), rel=1e-6)


def test_k_power_layer_zero():
    assert k_power_layer(np.zeros(3), 1.0, 2.0, 1.0, 2.0, 1.0) == 0.0


def test_k_power_layer_monotone_in_s():
    rng = np.random.default_rng(9)
    b = rng.uniform(0.1, 2.0, size=5)
    ss = np.logspace(-6, 6, 50)
    vals = [k_power_layer(b, 1.0, math.inf, 2.0, 1.0, float(s)) for s in ss]
    assert all(x <= y + 1e-12 * max(1.0, y) for x, y in zip(vals, vals[1:]))


def test_k_general_single_coefficient_collapse():
    field = _field([(0.0,), (0.0,), (1.1,)])
    i0 = BesovIndex(0.7, 1.0, 1.0)
    i1 = BesovIndex(-0.5, 2.0, 2.0)
    w0 = 2.0 ** (2 * i0.weight_exponent(1))
    w1 = 2.0 ** (2 * i1.weight_exponent(1))
    query = InterpQuery(i0, i1)
    for t in (0.05, 1.0, 17.0):
        assert k_general(field, query, t) == pytest.approx(
            1.1 * min(w0, t * w1), rel=1e-6)


def test_k_general_homogeneous():
    field = _field([(1.0, 0.4), (0.6,)])
    query = InterpQuery(BesovIndex(0.5, 1.0, 2.0), BesovIndex(-0.5, 2.0, 1.0))
    base = k_general(field, query, 1.3)
    got = k_general(field.scaled(2.7), query, 1.3)
    assert got == pytest.approx(2.7 * base, rel=1e-6)


def test_k_general_band_vs_max_form_oracle():
    rng = np.random.default_rng(10)
    field = _field([rng.uniform(0.1, 2.0, size=3), rng.uniform(0.1, 2.0, size=2)])
    i0 = BesovIndex(0.9, 1.0, 2.0)
    i1 = BesovIndex(-0.7, 2.0, 1.0)
    query = InterpQuery(i0, i1)
    ratios = []
    for t in 2.0 ** np.arange(-20.0, 21.0, 4.0):
        ratios.append(k_general(field, query, float(t))
                      / k_inf_vertex(field, i0, i1, float(t)))
    assert all(1.0 / 16.0 <= r <= 16.0 for r in ratios)
    assert max(ratios) / min(ratios) <= 16.0


# --- dispatch and curves ----------------------------------------------------

def test_dispatch_degenerate():
    field = _field([(1.0, 2.0), (0.5,)])
    idx = BesovIndex(0.25, 1.5, 2.0)
    query = InterpQuery(idx, idx)
    nrm = besov_norm(field, idx)
    for t in (0.2, 1.0, 30.0):
        val, tag = k_dispatch(field, query, t)
        assert tag == "formula:degenerate"
        assert val == pytest.approx(min(1.0, t) * nrm, rel=1e-12)


def test_dispatch_tags_follow_case():
    field = _field([(1.0,)])
    query = InterpQuery(BesovIndex(1.0, 2.0, 1.0), BesovIndex(0.0, 2.0, 1.0))
    _, tag = k_dispatch(field, query, 1.0)
    assert tag == "formula:p-equal:weighted-split"
    query = InterpQuery(BesovIndex(1.0, 1.0, math.inf), BesovIndex(0.0, 2.0, 2.0))
    _, tag = k_dispatch(field, query, 1.0)
    assert tag == "oracle:vertex-enumeration"


def test_k_curve_singleton():
    field = _field([(1.0,)])
    query = InterpQuery(BesovIndex(0.0, 2.0, 2.0), BesovIndex(0.0, 2.0, 2.0))
    curve = k_curve(field, query, ts=[1.5])
    assert len(curve.t) == 1 and len(curve.k) == 1


def test_k_curve_degenerate_rows():
    field = _field([(1.0, 2.0)])
    idx = BesovIndex(0.3, 2.0, 1.0)
    query = InterpQuery(idx, idx)
    curve = k_curve(field, query, ts=default_t_grid(-4, 4, 1.0))
    nrm = besov_norm(field, idx)
    for t, k in zip(curve.t, curve.k):
        assert k == pytest.approx(min(1.0, t) * nrm, rel=1e-12)


def test_k_curve_oracle_method_shape():
    field = _field([(1.0, 0.5), (0.7,)])
    query = InterpQuery(BesovIndex(0.5, 1.0, 1.0), BesovIndex(-0.5, 2.0, 2.0))
    curve = k_curve(field, query, ts=default_t_grid(-8, 8, 1.0), method="oracle")
    assert curve.method == "oracle:vertex-enumeration"
    assert (np.diff(curve.k) >= -1e-12).all()
    assert (np.diff(curve.k / curve.t) <= 1e-12).all()


def test_k_curve_rejects_bad_grid():
    field = _field([(1.0,)])
    idx = BesovIndex(0.0, 2.0, 2.0)
    with pytest.raises(UsageError):
        k_curve(field, InterpQuery(idx, idx), ts=[2.0, 1.0])


# --- cross-route properties -------------------------------------------------

_pool = st.sampled_from([0.5, 1.0, 1.5, 2.0, math.inf])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.floats(0.0, 3.0), min_size=1, max_size=3),
                min_size=1, max_size=3),
       st.floats(-1.5, 1.5), _pool, _pool, st.floats(-1.5, 1.5), _pool, _pool,
       st.floats(0.02, 50.0))
def test_formula_routes_commute(layers, s0, p0, q0, s1, p1, q1, t):
    field = _field(layers)
    i0, i1 = BesovIndex(s0, p0, q0), BesovIndex(s1, p1, q1)
    fwd_q = InterpQuery(i0, i1)
    if fwd_q.case is CaseTag.ORACLE_ONLY:
        return
    fwd, _ = k_dispatch(field, fwd_q, t)
    rev, _ = k_dispatch(field, fwd_q.swapped(), 1.0 / t)
    assert fwd == pytest.approx(t * rev, rel=1e-9, abs=1e-300)
