import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besovk.coeffs import CoeffField
from besovk.errors import BudgetError
from besovk.grid import BesovIndex, GridSpec
from besovk.norms import besov_norm
from besovk.oracle import (
    OracleBudget,
    k_cuboid_continuous,
    k_inf_vertex,
    k_vertex_exact,
    oracle_curve,
    vertex_tables,
)


def _field(layers, n=1):
    spec = GridSpec(n=n, J=len(layers), layer_sizes=tuple(len(v) for v in layers))
    return CoeffField(spec, [np.asarray(v, dtype=float) for v in layers])


def _subset_field(field, keep):
    """Field with coefficients outside `keep` zeroed (flat index order)."""
    layers, pos = [], 0
    for v in field.layers:
        out = np.zeros_like(v)
        for i in range(len(v)):
            if pos in keep:
                out[i] = v[i]
            pos += 1
        layers.append(out)
    return CoeffField(field.spec, layers)


def _hand_vertex(field, idx0, idx1, t, xi=1.0):
    """Independent exhaustive enumeration via whole-field norm calls."""
    total = field.spec.total_coeffs
    best = math.inf
    for keep in itertools.chain.from_iterable(
            itertools.combinations(range(total), k) for k in range(total + 1)):
        a = besov_norm(_subset_field(field, set(keep)), idx0)
        rest = set(range(total)) - set(keep)
        b = besov_norm(_subset_field(field, rest), idx1)
        if math.isinf(xi):
            val = max(a, t * b)
        else:
            val = (a**xi + (t * b) ** xi) ** (1.0 / xi)
        best = min(best, val)
    return best


def test_single_coefficient_is_min_of_weights():
    field = _field([(0.0,), (2.5,)])
    idx0 = BesovIndex(1.0, 1.0, 1.0)
    idx1 = BesovIndex(-0.5, 2.0, 2.0)
    w0 = 2.0 ** (1 * (1.0 + 0.5 - 1.0))
    w1 = 2.0 ** (1 * (-0.5 + 0.5 - 0.5))
    for t in (0.01, 1.0, 3.7, 250.0):
        got = k_vertex_exact(field, idx0, idx1, t)
        assert got == pytest.approx(2.5 * min(w0, t * w1), rel=1e-12)


def test_zero_field_is_zero():
    field = _field([(0.0, 0.0)])
    idx = BesovIndex(0.0, 1.0, 1.0)
    assert k_vertex_exact(field, idx, BesovIndex(0.0, 2.0, 2.0), 1.3) == 0.0


def test_two_coefficient_hand_enumeration():
    # splits of (3,1) between l^1 and t*l^2: min over
    # {0.7*sqrt(10), 3 + 0.7, 1 + 2.1, 4}
    field = _field([(3.0, 1.0)])
    idx0 = BesovIndex(0.0, 1.0, 1.0)
    idx1 = BesovIndex(0.0, 2.0, 2.0)
    got = k_vertex_exact(field, idx0, idx1, 0.7)
    assert got == pytest.approx(0.7 * math.sqrt(10.0), rel=1e-12)
    assert got == pytest.approx(_hand_vertex(field, idx0, idx1, 0.7), rel=1e-12)


def test_three_coefficient_max_form_hand_enumeration():
    field = _field([(2.0, 1.0), (3.0,)])
    idx0 = BesovIndex(0.5, 1.0, 1.0)
    idx1 = BesovIndex(-0.5, math.inf, math.inf)
    for t in (0.2, 1.0, 5.0):
        got = k_inf_vertex(field, idx0, idx1, t)
        want = _hand_vertex(field, idx0, idx1, t, xi=math.inf)
        assert got == pytest.approx(want, rel=1e-12)


def test_oracle_curve_shape_properties():
    field = _field([(1.0, 0.5, 2.0), (0.3, 1.1)])
    idx0 = BesovIndex(0.7, 1.5, 1.0)
    idx1 = BesovIndex(-0.2, 2.0, 3.0)
    ts = np.logspace(-6, 6, 49, base=2.0)
    ks = oracle_curve(field, idx0, idx1, ts)
    assert (np.diff(ks) >= -1e-12).all()
    assert (np.diff(ks / ts) <= 1e-12).all()


def test_budget_refusal():
    field = _field([(1.0, 1.0, 1.0), (1.0, 1.0, 1.0)])
    idx0 = BesovIndex(0.0, 1.0, 1.0)
    idx1 = BesovIndex(0.0, 2.0, 2.0)
    with pytest.raises(BudgetError):
        k_vertex_exact(field, idx0, idx1, 1.0,
                       budget=OracleBudget(max_total_coeffs=4))
    with pytest.raises(BudgetError):
        vertex_tables(field, idx0, idx1, OracleBudget(max_subsets=8))


def test_cuboid_single_coefficient():
    field = _field([(1.7,)])
    idx0 = BesovIndex(0.3, 2.0, 1.0)
    idx1 = BesovIndex(-0.3, 1.0, 2.0)
    for t in (0.1, 1.0, 9.0):
        want = k_vertex_exact(field, idx0, idx1, t)
        assert k_cuboid_continuous(field, idx0, idx1, t) == pytest.approx(
            want, rel=1e-8)


def test_cuboid_decoupled_closed_form():
    # p = q = 1 on both sides: the objective decouples per coordinate,
    # optimum = sum_j min(w0_j, t w1_j) * sum(layer j)
    field = _field([(0.5, 1.0), (2.0,), (0.25, 0.75)])
    idx0 = BesovIndex(1.0, 1.0, 1.0)
    idx1 = BesovIndex(-1.0, 1.0, 1.0)
    t = 1.9
    want = 0.0
    for j in range(3):
        w0 = 2.0 ** (j * idx0.weight_exponent(1))
        w1 = 2.0 ** (j * idx1.weight_exponent(1))
        want += min(w0, t * w1) * field.layers[j].sum()
    got = k_cuboid_continuous(field, idx0, idx1, t)
    assert got == pytest.approx(want, rel=1e-7)


def test_cuboid_vertex_band():
    rng = np.random.default_rng(12)
    for _ in range(5):
        field = _field([rng.uniform(0.1, 2.0, size=3), rng.uniform(0.1, 2.0, size=2)])
        idx0 = BesovIndex(0.8, 1.0, 2.0)
        idx1 = BesovIndex(-0.4, math.inf, 1.5)
        t = float(rng.uniform(0.2, 5.0))
        cont = k_cuboid_continuous(field, idx0, idx1, t)
        vert = k_vertex_exact(field, idx0, idx1, t)
        assert cont <= vert + 1e-9
        assert vert <= 2.0 * cont + 1e-9


_pool = st.sampled_from([0.5, 1.0, 1.5, 2.0, math.inf])
_small_fields = st.lists(
    st.lists(st.floats(0.0, 3.0), min_size=1, max_size=3), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(_small_fields, st.floats(-2, 2), _pool, _pool, st.floats(-2, 2),
       _pool, _pool, st.floats(0.01, 100.0))
def test_commutation_exact(layers, s0, p0, q0, s1, p1, q1, t):
    field = _field(layers)
    idx0, idx1 = BesovIndex(s0, p0, q0), BesovIndex(s1, p1, q1)
    fwd = k_vertex_exact(field, idx0, idx1, t)
    rev = t * k_vertex_exact(field, idx1, idx0, 1.0 / t)
    assert fwd == pytest.approx(rev, rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(_small_fields, st.floats(0.05, 20.0))
def test_sandwich(layers, t):
    field = _field(layers)
    idx0 = BesovIndex(0.5, 1.0, 2.0)
    idx1 = BesovIndex(-0.5, 2.0, 1.0)
    tabs = vertex_tables(field, idx0, idx1)
    k_inf, k_2, k_1 = tabs.k(t, math.inf), tabs.k(t, 2.0), tabs.k(t, 1.0)
    assert k_inf <= k_2 + 1e-12 * k_2
    assert k_2 <= k_1 + 1e-12 * k_1
    assert k_1 <= 2.0 ** (1 - 0.5) * k_2 * (1 + 1e-12) + 1e-300
