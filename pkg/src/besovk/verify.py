"""Randomized verification suites: formulas against enumeration oracles.

Each suite draws reproducible random instances, measures the documented
property (an identity, a band, or an exactness claim), and reports the
worst case observed.  The suites back the command-line `verify` command
and the acceptance tests; they are deterministic for a fixed seed.

Band limits are engineering tolerances for the equivalence constants,
not sharp theory constants.  Instance pools matter: the composed-split
route keeps its aggregation exponents at 1 or above because its
constants degrade rapidly below 1 (a single-spike computation already
shows a factor 81 at exponent 0.5), and random smoothness gaps stay at
0.5 or above so breakpoint hulls stay short.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .coeffs import CoeffField
from .grid import BesovIndex, GridSpec
from .interp import besov_identity_check, interp_norm, reiteration_check
from .kfunc import InterpQuery, k_dispatch, k_general, k_p_equal, k_q_equal
from .norms import besov_norm, main_grid_reduce
from .oracle import OracleBudget, k_cuboid_continuous, vertex_tables

__all__ = [
    "SUITES",
    "run_suite",
    "run_axioms",
    "run_vertex_band",
    "run_p_equal",
    "run_q_equal",
    "run_general",
    "run_identities",
    "run_endpoints",
]

_FULL_POOL = (0.5, 1.0, 1.5, 2.0, math.inf)
_CONVEX_POOL = (1.0, 1.5, 2.0, math.inf)
_T_GRID = 2.0 ** np.arange(-12, 13, 2)  # 13 points, log step 2


def _band(ratio: float) -> float:
    """Symmetric band factor: max(ratio, 1/ratio)."""
    if ratio <= 0 or math.isnan(ratio):
        return math.inf
    return max(ratio, 1.0 / ratio)


def _check(name: str, worst: float, limit: float) -> dict:
    return {"name": name, "worst": float(worst), "limit": float(limit),
            "passed": bool(worst <= limit)}


def _report(suite: str, seed: int, instances: int, checks: list[dict],
            t0: float) -> dict:
    return {
        "suite": suite,
        "seed": seed,
        "instances": instances,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }


def _rand_sizes(rng, max_total: int, j_max: int) -> tuple[int, ...]:
    J = int(rng.integers(1, j_max + 1))
    budget = max_total - J
    sizes = []
    for _ in range(J):
        extra = int(rng.integers(0, min(budget, 3) + 1)) if budget > 0 else 0
        sizes.append(1 + extra)
        budget -= extra
    return tuple(sizes)


def _rand_field(rng, max_total: int = 12, j_max: int = 3,
                n_pool=(1, 2), zero_prob: float = 0.15) -> CoeffField:
    sizes = _rand_sizes(rng, max_total, j_max)
    n = int(rng.choice(n_pool))
    layers = []
    for m in sizes:
        v = rng.uniform(0.1, 2.0, size=m)
        v[rng.random(m) < zero_prob] = 0.0
        layers.append(v)
    if not any(v.any() for v in layers):
        layers[0][0] = 1.0
    return CoeffField(GridSpec(n=n, J=len(sizes), layer_sizes=sizes), layers)


def _rand_index(rng, p_pool=_FULL_POOL, q_pool=_FULL_POOL,
                s_lo: float = -2.0, s_hi: float = 2.0) -> BesovIndex:
    return BesovIndex(s=float(rng.uniform(s_lo, s_hi)),
                      p=float(rng.choice(p_pool)),
                      q=float(rng.choice(q_pool)))


def _single_nonzero_field(rng, j_max: int = 3, n_pool=(1, 2)) -> CoeffField:
    sizes = _rand_sizes(rng, 6, j_max)
    n = int(rng.choice(n_pool))
    layers = [np.zeros(m) for m in sizes]
    j = int(rng.integers(0, len(sizes)))
    i = int(rng.integers(0, sizes[j]))
    layers[j][i] = float(rng.uniform(0.2, 3.0))
    return CoeffField(GridSpec(n=n, J=len(sizes), layer_sizes=sizes), layers)


def _single_min(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex,
                t: float) -> float:
    """min(w0, t*w1)*c for the unique nonzero coefficient."""
    from .grid import layer_weight

    for j, v in enumerate(field.layers):
        nz = np.flatnonzero(v)
        if len(nz):
            c = float(v[nz[0]])
            w0 = layer_weight(field.spec, idx0, j)
            w1 = layer_weight(field.spec, idx1, j)
            return c * min(w0, t * w1)
    return 0.0


# ---------------------------------------------------------------------------


def run_axioms(seed: int = 101, count: int = 500) -> dict:
    """Exact oracle axioms: commutation, homogeneity, monotonicity in t
    and in |f|, K/t antitonicity, and the xi sandwich, at 1e-9 relative."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = {k: 0.0 for k in (
        "commutativity", "homogeneity", "t-monotone", "k-over-t-antitone",
        "coordinate-monotone", "sandwich")}
    scale = 2.375
    for _ in range(count):
        field = _rand_field(rng)
        idx0 = _rand_index(rng)
        idx1 = _rand_index(rng)
        tabs = vertex_tables(field, idx0, idx1)
        swap = vertex_tables(field, idx1, idx0)
        scaled = vertex_tables(field.scaled(scale), idx0, idx1)
        bumped_layers = [v.copy() for v in field.layers]
        bj = int(rng.integers(0, field.spec.J))
        bi = int(rng.integers(0, len(bumped_layers[bj])))
        bumped_layers[bj][bi] += 0.5 * (1.0 + bumped_layers[bj][bi])
        bumped = vertex_tables(
            CoeffField(field.spec, bumped_layers), idx0, idx1)
        for t in 2.0 ** rng.uniform(-8.0, 8.0, size=3):
            t = float(t)
            k1 = tabs.k(t, 1.0)
            k2 = tabs.k(t, 2.0)
            kinf = tabs.k(t, math.inf)
            ref = max(k1, 1e-300)
            worst["commutativity"] = max(
                worst["commutativity"],
                abs(k1 - t * swap.k(1.0 / t, 1.0)) / ref,
                abs(kinf - t * swap.k(1.0 / t, math.inf)) / max(kinf, 1e-300))
            worst["homogeneity"] = max(
                worst["homogeneity"], abs(scaled.k(t, 1.0) - scale * k1) / (scale * ref))
            worst["coordinate-monotone"] = max(
                worst["coordinate-monotone"], (k1 - bumped.k(t, 1.0)) / ref)
            worst["sandwich"] = max(
                worst["sandwich"],
                (kinf - k2) / max(k2, 1e-300),
                (k2 - k1) / ref,
                (k1 - math.sqrt(2.0) * k2) / ref,
                (k1 - 2.0 * kinf) / ref)
        ts = np.sort(2.0 ** rng.uniform(-10.0, 10.0, size=6))
        ks = np.array([tabs.k(float(t), 1.0) for t in ts])
        kref = max(float(ks.max()), 1e-300)
        worst["t-monotone"] = max(worst["t-monotone"],
                                  float(-(np.diff(ks)).min()) / kref)
        ratios = ks / ts
        rref = max(float(ratios.max()), 1e-300)
        worst["k-over-t-antitone"] = max(worst["k-over-t-antitone"],
                                         float(np.diff(ratios).max()) / rref)
    checks = [_check(name, w, 1e-9) for name, w in worst.items()]
    return _report("axioms", seed, count, checks, t0)


def run_vertex_band(seed: int = 102, count: int = 200) -> dict:
    """Convex-regime band: continuous box minimum <= vertex minimum
    <= 2 * continuous minimum."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_upper = 0.0   # cont <= vert  (relative excess)
    worst_factor = 0.0  # vert <= 2*cont + 1e-9  (as a ratio to the bound)
    for _ in range(count):
        field = _rand_field(rng)
        idx0 = _rand_index(rng, p_pool=_CONVEX_POOL, q_pool=_CONVEX_POOL)
        idx1 = _rand_index(rng, p_pool=_CONVEX_POOL, q_pool=_CONVEX_POOL)
        for t in 2.0 ** rng.uniform(-6.0, 6.0, size=2):
            t = float(t)
            cont = k_cuboid_continuous(field, idx0, idx1, t)
            vert = vertex_tables(field, idx0, idx1).k(t, 1.0)
            worst_upper = max(worst_upper, (cont - vert) / max(vert, 1e-300))
            worst_factor = max(worst_factor, vert / (2.0 * cont + 1e-9))
    checks = [_check("continuous-below-vertex", worst_upper, 1e-9),
              _check("vertex-within-factor-two", worst_factor, 1.0)]
    return _report("vertex-band", seed, count, checks, t0)


def _ratio_sweep(field, query, formula_fun, xi: float = 1.0):
    """Formula/oracle ratios across the shared t grid."""
    tabs = vertex_tables(field, query.idx0, query.idx1)
    out = []
    for t in _T_GRID:
        t = float(t)
        oracle = tabs.k(t, xi)
        if oracle == 0.0:
            continue
        out.append(formula_fun(t) / oracle)
    return out


def run_p_equal(seed: int = 103, per_case: int = 100) -> dict:
    """Shared-p routes against the vertex oracle, per subcase, plus the
    exact decoupled check for the q = 1 split sum."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = {"weighted-split-band": 0.0, "composed-split-band": 0.0,
             "rearrangement-band": 0.0, "q1-decoupled-exact": 0.0}

    def couple(kind):
        p = float(rng.choice(_FULL_POOL))
        if kind == "weighted-split":
            q = float(rng.choice((0.5, 1.0, 2.0, math.inf)))
            q0 = q1 = q
        elif kind == "composed-split":
            q0, q1 = rng.choice((1.0, 1.5, 2.0, math.inf), size=2, replace=False)
        else:
            q0, q1 = rng.choice((0.5, 1.0, 2.0, math.inf), size=2, replace=False)
        if kind == "rearrangement":
            s0 = s1 = float(rng.uniform(-2.0, 2.0))
        else:
            while True:
                s0, s1 = rng.uniform(-2.0, 2.0, size=2)
                if abs(s0 - s1) >= 0.5:
                    break
        return (BesovIndex(float(s0), p, float(q0)),
                BesovIndex(float(s1), p, float(q1)))

    for kind, key in (("weighted-split", "weighted-split-band"),
                      ("composed-split", "composed-split-band"),
                      ("rearrangement", "rearrangement-band")):
        for i in range(per_case):
            field = _rand_field(rng, j_max=4)
            idx0, idx1 = couple(kind)
            if kind == "weighted-split" and i % 3 == 0:
                idx0 = BesovIndex(idx0.s, idx0.p, 1.0)
                idx1 = BesovIndex(idx1.s, idx1.p, 1.0)
            query = InterpQuery(idx0, idx1)
            for ratio in _ratio_sweep(field, query,
                                      lambda t: k_p_equal(field, query, t)):
                worst[key] = max(worst[key], _band(ratio))
            if kind == "weighted-split" and idx0.q == 1.0:
                n = field.spec.n
                a = main_grid_reduce(field, idx0.p)
                sa, sb = idx0.weight_exponent(n), idx1.weight_exponent(n)
                js = np.arange(len(a))
                for t in (0.125, 1.0, 7.3):
                    exact = float(np.sum(np.minimum(2.0 ** (js * sa),
                                                    t * 2.0 ** (js * sb)) * a))
                    got = k_p_equal(field, query, t)
                    if exact > 0:
                        worst["q1-decoupled-exact"] = max(
                            worst["q1-decoupled-exact"],
                            abs(got - exact) / exact)
    checks = [_check("weighted-split-band", worst["weighted-split-band"], 8.0),
              _check("composed-split-band", worst["composed-split-band"], 8.0),
              _check("rearrangement-band", worst["rearrangement-band"], 8.0),
              _check("q1-decoupled-exact", worst["q1-decoupled-exact"], 1e-9)]
    return _report("p-equal", seed, 3 * per_case, checks, t0)


def run_q_equal(seed: int = 104, count: int = 100) -> dict:
    """Shared-q layer-sum route against the vertex oracle, plus exact
    single-coefficient collapse."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_band = 0.0
    worst_single = 0.0
    for _ in range(count):
        field = _rand_field(rng)
        q = float(rng.choice(_FULL_POOL))
        p0, p1 = rng.choice(np.array((0.5, 1.0, 2.0, math.inf)), size=2,
                            replace=False)
        idx0 = BesovIndex(float(rng.uniform(-2, 2)), float(p0), q)
        idx1 = BesovIndex(float(rng.uniform(-2, 2)), float(p1), q)
        query = InterpQuery(idx0, idx1)
        for ratio in _ratio_sweep(field, query,
                                  lambda t: k_q_equal(field, query, t)):
            worst_band = max(worst_band, _band(ratio))
    for _ in range(20):
        field = _single_nonzero_field(rng)
        p0, p1 = rng.choice(np.array((0.5, 1.0, 2.0, math.inf)), size=2,
                            replace=False)
        q = float(rng.choice(_FULL_POOL))
        idx0 = BesovIndex(float(rng.uniform(-2, 2)), float(p0), q)
        idx1 = BesovIndex(float(rng.uniform(-2, 2)), float(p1), q)
        query = InterpQuery(idx0, idx1)
        for t in (0.03125, 1.0, 19.7):
            exact = _single_min(field, idx0, idx1, t)
            got = k_q_equal(field, query, t)
            worst_single = max(worst_single, abs(got - exact) / exact)
    checks = [_check("layer-sum-band", worst_band, 8.0),
              _check("single-coefficient-exact", worst_single, 1e-9)]
    return _report("q-equal", seed, count, checks, t0)


def run_general(seed: int = 105, count: int = 50) -> dict:
    """Power-composition route against the max-form vertex oracle:
    band, per-instance spread, and single-coefficient collapse."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_band = 0.0
    worst_spread = 0.0
    worst_single = 0.0
    for _ in range(count):
        field = _rand_field(rng, max_total=10)
        p0, p1 = rng.choice(np.array((1.0, 2.0, math.inf)), size=2, replace=False)
        q0, q1 = rng.choice(np.array((0.5, 1.0, 2.0, 3.0)), size=2, replace=False)
        idx0 = BesovIndex(float(rng.uniform(-2, 2)), float(p0), float(q0))
        idx1 = BesovIndex(float(rng.uniform(-2, 2)), float(p1), float(q1))
        query = InterpQuery(idx0, idx1)
        ratios = _ratio_sweep(field, query,
                              lambda t: k_general(field, query, t),
                              xi=math.inf)
        if not ratios:
            continue
        worst_band = max(worst_band, max(_band(r) for r in ratios))
        worst_spread = max(worst_spread, max(ratios) / min(ratios))
    for _ in range(10):
        field = _single_nonzero_field(rng)
        p0, p1 = rng.choice(np.array((1.0, 2.0, math.inf)), size=2, replace=False)
        q0, q1 = rng.choice(np.array((0.5, 1.0, 2.0, 3.0)), size=2, replace=False)
        idx0 = BesovIndex(float(rng.uniform(-2, 2)), float(p0), float(q0))
        idx1 = BesovIndex(float(rng.uniform(-2, 2)), float(p1), float(q1))
        query = InterpQuery(idx0, idx1)
        for t in (0.0625, 1.0, 11.3):
            exact = _single_min(field, idx0, idx1, t)
            got = k_general(field, query, t)
            worst_single = max(worst_single, abs(got - exact) / exact)
    checks = [_check("composition-band", worst_band, 16.0),
              _check("ratio-spread", worst_spread, 16.0),
              _check("single-coefficient-collapse", worst_single, 1e-6)]
    return _report("general", seed, count, checks, t0)


def run_endpoints(seed: int = 107, count: int = 100) -> dict:
    """Every formula route recovers ||f||_A0 at t = 2^40 and
    ||f||_A1 from K(t)/t at t = 2^-40, to 1e-6 relative."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    kinds = ("degenerate", "weighted-split", "composed-split",
             "rearrangement", "layer-sum", "general")
    worst = 0.0
    for i in range(count):
        kind = kinds[i % len(kinds)]
        field = _rand_field(rng, max_total=8, j_max=4, zero_prob=0.1)
        s0, s1 = rng.uniform(-2.0, 2.0, size=2)
        while kind in ("weighted-split", "composed-split") and abs(s0 - s1) < 0.5:
            s0, s1 = rng.uniform(-2.0, 2.0, size=2)
        if kind == "degenerate":
            idx0 = idx1 = _rand_index(rng)
        elif kind == "weighted-split":
            p = float(rng.choice(_FULL_POOL))
            q = float(rng.choice(_FULL_POOL))
            idx0, idx1 = BesovIndex(float(s0), p, q), BesovIndex(float(s1), p, q)
        elif kind == "composed-split":
            p = float(rng.choice(_FULL_POOL))
            q0, q1 = rng.choice(np.array((1.0, 1.5, 2.0, math.inf)), size=2,
                                replace=False)
            idx0 = BesovIndex(float(s0), p, float(q0))
            idx1 = BesovIndex(float(s1), p, float(q1))
        elif kind == "rearrangement":
            p = float(rng.choice(_FULL_POOL))
            q0, q1 = rng.choice(np.array((0.5, 1.0, 2.0, math.inf)), size=2,
                                replace=False)
            idx0 = BesovIndex(float(s0), p, float(q0))
            idx1 = BesovIndex(float(s0), p, float(q1))
        elif kind == "layer-sum":
            q = float(rng.choice(_FULL_POOL))
            p0, p1 = rng.choice(np.array((0.5, 1.0, 2.0, math.inf)), size=2,
                                replace=False)
            idx0 = BesovIndex(float(s0), float(p0), q)
            idx1 = BesovIndex(float(s1), float(p1), q)
        else:
            p0, p1 = rng.choice(np.array((1.0, 2.0, math.inf)), size=2,
                                replace=False)
            q0, q1 = rng.choice(np.array((0.5, 1.0, 2.0, 3.0)), size=2,
                                replace=False)
            idx0 = BesovIndex(float(s0), float(p0), float(q0))
            idx1 = BesovIndex(float(s1), float(p1), float(q1))
        query = InterpQuery(idx0, idx1)
        n0 = besov_norm(field, idx0)
        n1 = besov_norm(field, idx1)
        hi, _ = k_dispatch(field, query, 2.0**40)
        lo, _ = k_dispatch(field, query, 2.0**-40)
        worst = max(worst, abs(hi - n0) / n0, abs(lo * 2.0**40 - n1) / n1)
    checks = [_check("endpoint-recovery", worst, 1e-6)]
    return _report("endpoints", seed, count, checks, t0)


def run_identities(seed: int = 106, count: int = 100) -> dict:
    """Interpolation-norm identities: the exact single-coefficient
    closed form, the intermediate-space ratio spread, oracle-method
    swap symmetry, homogeneity, and the reiteration ratio spread."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)

    # 4c closed form: K(t) = c*min(1,t), theta=1/2, r=1
    c = 1.3
    single = CoeffField(GridSpec(n=1, J=1, layer_sizes=(1,)), [np.array([c])])
    idx = BesovIndex(0.0, 2.0, 2.0)
    q_single = InterpQuery(idx, idx, theta=0.5, r=1.0)
    got = interp_norm(single, q_single)
    worst_4c = abs(got - 4.0 * c) / (4.0 * c)

    # identity ratio spread over random fields (J <= 8, layer sizes up
    # to 16), shared-p couple
    idx0 = BesovIndex(1.0, 1.5, 1.0)
    idx1 = BesovIndex(-1.0, 1.5, 1.0)
    q_id = InterpQuery(idx0, idx1, theta=0.4, r=2.0)
    ratios = []
    for _ in range(count):
        sizes = tuple(int(m) for m in rng.integers(1, 17, size=rng.integers(1, 9)))
        layers = [rng.uniform(0.0, 2.0, size=m) for m in sizes]
        if not any(v.any() for v in layers):
            layers[0][0] = 1.0
        field = CoeffField(GridSpec(n=1, J=len(sizes), layer_sizes=sizes), layers)
        ratios.append(besov_identity_check(field, q_id))
    spread = max(ratios) / min(ratios)

    # oracle-method swap symmetry
    field = _rand_field(rng, max_total=8, j_max=2, zero_prob=0.0)
    q_swap = InterpQuery(BesovIndex(0.7, 1.0, 1.5), BesovIndex(-0.4, 2.5, 0.8),
                         theta=0.3, r=1.7)
    v_fwd = interp_norm(field, q_swap, method="oracle")
    v_bwd = interp_norm(field, q_swap.swapped(), method="oracle")
    worst_swap = abs(v_fwd - v_bwd) / v_fwd

    # homogeneity of the interpolation norm
    scaled = interp_norm(field.scaled(3.0), q_swap, method="oracle")
    worst_hom = abs(scaled - 3.0 * v_fwd) / (3.0 * v_fwd)

    # reiteration ratio spread on weighted sequences
    re_ratios = []
    for _ in range(30):
        J = int(rng.integers(2, 7))
        a = rng.uniform(0.1, 2.0, size=J)
        rep = reiteration_check(a, s_a=-1.0, s_b=1.5, theta0=0.25,
                                theta1=0.75, eta=0.5, qs=(1.0, 1.0, 2.0))
        re_ratios.append(rep["ratio"])
    re_spread = max(re_ratios) / min(re_ratios)

    checks = [_check("single-coefficient-4c", worst_4c, 1e-4),
              _check("identity-ratio-spread", spread, 32.0),
              _check("oracle-swap-symmetry", worst_swap, 1e-6),
              _check("interp-homogeneity", worst_hom, 1e-9),
              _check("reiteration-spread", re_spread, 32.0)]
    return _report("identities", seed, count, checks, t0)


SUITES = {
    "axioms": run_axioms,
    "vertex-band": run_vertex_band,
    "p-equal": run_p_equal,
    "q-equal": run_q_equal,
    "general": run_general,
    "identities": run_identities,
}


def run_suite(name: str, seed: int | None = None, **kwargs) -> dict:
    """Run a named suite; seed overrides the suite default."""
    from .errors import UsageError

    if name not in SUITES:
        raise UsageError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    if seed is not None:
        kwargs["seed"] = seed
    return SUITES[name](**kwargs)
