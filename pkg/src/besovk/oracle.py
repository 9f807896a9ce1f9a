"""Brute-force K-functional oracles.

Two independent references for the closed-form engine:

- k_vertex_exact: exhaustive minimum over all 2^N support splits of the
  grid (each coefficient goes wholly to one side).  Exact for the
  split-infimum functional; for the max-form aggregation (xi = inf) the
  split infimum IS the K-functional, so this oracle is exact there.
- k_cuboid_continuous: the continuous infimum over decompositions
  0 <= g <= f, by cyclic coordinate descent with golden-section line
  searches.  Valid in the convex regime (all indices >= 1).

Both refuse problems larger than their budget rather than truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffField
from .errors import BudgetError, UsageError
from .grid import BesovIndex, layer_weight

__all__ = [
    "OracleBudget",
    "VertexTables",
    "vertex_tables",
    "k_vertex_exact",
    "k_inf_vertex",
    "k_cuboid_continuous",
    "oracle_curve",
]


@dataclass(frozen=True)
class OracleBudget:
    max_total_coeffs: int = 20
    max_subsets: int = 2**20
    coord_descent_iters: int = 500


def _layer_norm_table(v: np.ndarray, p: float) -> np.ndarray:
    """l^p norm of every sub-multiset of v, indexed by bitmask."""
    m = len(v)
    masks = np.arange(2**m, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(m)) & 1
    if math.isinf(p):
        return np.max(bits * v[None, :], axis=1) if m else np.zeros(1)
    return (bits @ (v**p)) ** (1.0 / p)


class VertexTables:
    """Cached per-split norms ||f 1_S||_A0, ||f 1_S||_A1 over all masks.

    Bit gamma of a mask selects flat coefficient gamma (layers
    concatenated in order).  The complement of mask S is 2^N - 1 - S,
    so the A1 norms of complements are just the reversed table.
    """

    def __init__(self, field: CoeffField, idx0: BesovIndex, idx1: BesovIndex,
                 budget: OracleBudget | None = None):
        budget = budget or OracleBudget()
        N = field.spec.total_coeffs
        if N > budget.max_total_coeffs:
            raise BudgetError(
                f"{N} coefficients exceed the enumeration budget "
                f"({budget.max_total_coeffs}); refusing rather than truncating"
            )
        if 2**N > budget.max_subsets:
            raise BudgetError(
                f"2^{N} subsets exceed the enumeration budget ({budget.max_subsets})"
            )
        self.n_coeffs = N
        self.a = self._side_table(field, idx0)
        self.b = self._side_table(field, idx1)
        self.b_comp = self.b[::-1]

    @staticmethod
    def _side_table(field: CoeffField, idx: BesovIndex) -> np.ndarray:
        q = idx.q
        tot = None
        for j in range(field.spec.J):
            w = layer_weight(field.spec, idx, j)
            lp = _layer_norm_table(field.layers[j], idx.p)
            contrib = (w * lp) ** q if not math.isinf(q) else w * lp
            if tot is None:
                tot = contrib
            elif math.isinf(q):
                tot = np.maximum(contrib[:, None], tot[None, :]).ravel()
            else:
                tot = (contrib[:, None] + tot[None, :]).ravel()
        return tot ** (1.0 / q) if not math.isinf(q) else tot

    def k(self, t: float, xi: float = 1.0) -> float:
        if math.isinf(xi):
            vals = np.maximum(self.a, t * self.b_comp)
        else:
            vals = (self.a**xi + (t * self.b_comp) ** xi) ** (1.0 / xi)
        return float(vals.min())

    def best_split(self, t: float, xi: float = 1.0) -> int:
        if math.isinf(xi):
            vals = np.maximum(self.a, t * self.b_comp)
        else:
            vals = (self.a**xi + (t * self.b_comp) ** xi) ** (1.0 / xi)
        return int(vals.argmin())


def vertex_tables(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex,
                  budget: OracleBudget | None = None) -> VertexTables:
    return VertexTables(field, idx0, idx1, budget)


def k_vertex_exact(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex, t: float,
                   xi: float = 1.0, budget: OracleBudget | None = None) -> float:
    """Exhaustive split minimum of (||f 1_S||_A0^xi + t^xi ||f 1_Sc||_A1^xi)^(1/xi)."""
    if t < 0:
        raise UsageError(f"t must be nonnegative, got {t}")
    return vertex_tables(field, idx0, idx1, budget).k(t, xi)


def k_inf_vertex(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex, t: float,
                 budget: OracleBudget | None = None) -> float:
    """Max-form split infimum; exact for the xi = inf K-functional."""
    return k_vertex_exact(field, idx0, idx1, t, xi=math.inf, budget=budget)


def oracle_curve(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex, ts,
                 xi: float = 1.0, budget: OracleBudget | None = None) -> np.ndarray:
    """Vertex-exact K at each t, sharing one enumeration pass."""
    tables = vertex_tables(field, idx0, idx1, budget)
    return np.array([tables.k(float(t), xi) for t in np.asarray(ts, dtype=float)])


class _SideAccum:
    """Incremental one-sided Besov norm under single-coordinate edits."""

    def __init__(self, field: CoeffField, idx: BesovIndex, vecs):
        self.p, self.q = idx.p, idx.q
        self.w = [layer_weight(field.spec, idx, j) for j in range(field.spec.J)]
        self.vecs = [v.copy() for v in vecs]
        self._rebuild()

    def _layer_base(self, j: int) -> float:
        v = self.vecs[j]
        return float(v.max()) if math.isinf(self.p) else float(np.sum(v**self.p))

    def _term(self, j: int, base: float) -> float:
        lp = base if math.isinf(self.p) else base ** (1.0 / self.p)
        wlp = self.w[j] * lp
        return wlp if math.isinf(self.q) else wlp**self.q

    def _rebuild(self):
        self.base = [self._layer_base(j) for j in range(len(self.vecs))]
        self.terms = [self._term(j, b) for j, b in enumerate(self.base)]

    def norm(self) -> float:
        if math.isinf(self.q):
            return max(self.terms)
        return sum(self.terms) ** (1.0 / self.q)

    def prepare(self, j: int, i: int):
        """Stash layer-j state with coordinate i removed, for 1-D evals."""
        self._j, self._i = j, i
        v = self.vecs[j]
        if math.isinf(self.p):
            self._rest = float(np.max(np.delete(v, i))) if len(v) > 1 else 0.0
        else:
            self._rest = self.base[j] - float(v[i] ** self.p)
            if self._rest < 0.0:
                self._rest = 0.0
        if math.isinf(self.q):
            others = self.terms[:j] + self.terms[j + 1 :]
            self._agg_rest = max(others) if others else 0.0
        else:
            self._agg_rest = sum(self.terms) - self.terms[j]

    def eval_with(self, x: float) -> float:
        if math.isinf(self.p):
            base = max(self._rest, x)
        else:
            base = self._rest + x**self.p
        term = self._term(self._j, base)
        if math.isinf(self.q):
            return max(self._agg_rest, term)
        return (self._agg_rest + term) ** (1.0 / self.q)

    def commit(self, x: float):
        j = self._j
        self.vecs[j][self._i] = x
        if math.isinf(self.p):
            self.base[j] = float(self.vecs[j].max())
        else:
            self.base[j] = self._rest + x**self.p
        self.terms[j] = self._term(j, self.base[j])


def _golden_min(fun, lo: float, hi: float, xtol: float) -> float:
    """Golden-section minimizer of a unimodal fun on [lo, hi]; returns x*."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = invphi * invphi
    a, b = lo, hi
    h = b - a
    if h <= xtol:
        return 0.5 * (a + b)
    c = a + invphi2 * h
    d = a + invphi * h
    fc, fd = fun(c), fun(d)
    while h > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + invphi2 * h
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + invphi * h
            fd = fun(d)
    xs = [(a, fun(a)), (b, fun(b)), (c, fc), (d, fd)]
    return min(xs, key=lambda z: z[1])[0]


def k_cuboid_continuous(field: CoeffField, idx0: BesovIndex, idx1: BesovIndex, t: float,
                        budget: OracleBudget | None = None) -> float:
    """Continuous decomposition infimum over the box 0 <= g <= f.

    Convex regime only (all indices >= 1): the objective
    ||g||_A0 + t ||f - g||_A1 is then jointly convex and cyclic
    coordinate descent with exact line searches converges.  Descent is
    multi-started from g = 0, g = f, and the best vertex split (when
    enumeration fits the budget), so the returned value never exceeds
    the vertex minimum.
    """
    budget = budget or OracleBudget()
    for name, v in (("p0", idx0.p), ("q0", idx0.q), ("p1", idx1.p), ("q1", idx1.q)):
        if v < 1.0:
            raise UsageError(f"continuous oracle needs the convex regime; {name} = {v} < 1")
    if t < 0:
        raise UsageError(f"t must be nonnegative, got {t}")
    N = field.spec.total_coeffs
    if N > budget.max_total_coeffs:
        raise BudgetError(
            f"{N} coefficients exceed the descent budget ({budget.max_total_coeffs})"
        )

    starts = [tuple(np.zeros_like(v) for v in field.layers),
              tuple(v.copy() for v in field.layers)]
    if 2**N <= budget.max_subsets:
        tables = vertex_tables(field, idx0, idx1, budget)
        mask = tables.best_split(t, xi=1.0)
        g_layers, bit = [], 0
        for v in field.layers:
            g = np.array([v[i] if (mask >> (bit + i)) & 1 else 0.0 for i in range(len(v))])
            g_layers.append(g)
            bit += len(v)
        starts.append(tuple(g_layers))

    best = math.inf
    coords = [(j, i) for j in range(field.spec.J) for i in range(len(field.layers[j]))]
    for g0 in starts:
        side0 = _SideAccum(field, idx0, g0)
        side1 = _SideAccum(field, idx1, [f - g for f, g in zip(field.layers, g0)])
        val = side0.norm() + t * side1.norm()
        for _ in range(budget.coord_descent_iters):
            prev = val
            for j, i in coords:
                fi = float(field.layers[j][i])
                if fi == 0.0:
                    continue
                side0.prepare(j, i)
                side1.prepare(j, i)

                def obj(x, _fi=fi):
                    return side0.eval_with(x) + t * side1.eval_with(_fi - x)

                x_star = _golden_min(obj, 0.0, fi, 1e-10 * max(1.0, fi))
                side0.commit(x_star)
                side1.commit(fi - x_star)
            val = side0.norm() + t * side1.norm()
            if prev - val <= 1e-12 * max(1.0, abs(prev)):
                break
        best = min(best, val)
    return best
