"""Levi-Civita connection, curvature tensors and their covariant derivatives.

Sign conventions::

    R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
    R_{bd}    = R^a_{bad}
    R_{abcd}  = g_{ae} R^e_{bcd}

With these, a space of constant curvature K has
``R^a_{bcd} = K (delta^a_c g_{bd} - delta^a_d g_{bc})`` and ``R = n(n-1)K``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .expr import Expression, PoleError, expr_sum
from .geometry import (
    COV,
    CON,
    GeometryError,
    MetricField,
    TensorField,
    _full,
    _gauss_jordan,
    covariant_derivative,
    covariant_derivative_riemann_tail,
    einsum,
    raise_index,
)

__all__ = [
    "christoffel",
    "riemann",
    "ricci",
    "scalar",
    "weyl",
    "nabla_riemann",
    "nabla2_riemann",
    "riemann_operator",
    "CurvaturePack",
    "RiemannOperator",
]


def _sum(terms, names):
    if not terms:
        return Expression.zero(names)
    return terms[0] if len(terms) == 1 else expr_sum(terms, names)


def christoffel(m: MetricField) -> TensorField:
    """Christoffel symbols of the second kind, ``G[a, b, c] = G^a_{bc}``."""
    n = m.n
    names = m.chart.names
    dg = [[[m.g[i, j]._diff_index(k) for k in range(n)] for j in range(n)] for i in range(n)]
    # first kind: G_{r m v} = 1/2 (d_m g_{rv} + d_v g_{rm} - d_r g_{mv})
    first = {}
    half = Fraction(1, 2)
    for r in range(n):
        for mu in range(n):
            for nu in range(mu, n):
                e = dg[r][nu][mu] + dg[r][mu][nu] - dg[mu][nu][r]
                if not e.is_zero():
                    first[(r, mu, nu)] = e * half
    comps = _full((n, n, n), m.chart.zero())
    for a in range(n):
        inv_row = [(r, m.inverse[a, r]) for r in range(n) if not m.inverse[a, r].is_zero()]
        for mu in range(n):
            for nu in range(mu, n):
                terms = [gi * first[(r, mu, nu)] for r, gi in inv_row if (r, mu, nu) in first]
                e = _sum(terms, names)
                comps[a, mu, nu] = e
                comps[a, nu, mu] = e
    return TensorField(m.chart, (CON, COV, COV), comps)


def riemann(m: MetricField) -> TensorField:
    """Riemann tensor ``R[a, b, c, d] = R^a_{bcd}``."""
    return m.curvature.riemann


def ricci(m: MetricField) -> TensorField:
    return m.curvature.ricci


def scalar(m: MetricField) -> Expression:
    return m.curvature.scalar


def weyl(m: MetricField) -> TensorField:
    return m.curvature.weyl


def nabla_riemann(m: MetricField) -> TensorField:
    return m.curvature.nabla_riemann


def nabla2_riemann(m: MetricField) -> TensorField:
    return m.curvature.nabla2_riemann


def riemann_operator(m: MetricField) -> "RiemannOperator":
    return m.curvature.operator


def _compute_riemann(m: MetricField, gamma: TensorField) -> TensorField:
    n = m.n
    names = m.chart.names
    G = gamma.components
    nzG = [[[not G[a, b, c].is_zero() for c in range(n)] for b in range(n)] for a in range(n)]
    dG = {}
    for (a, b, c), e in gamma.nonzero():
        for k in range(n):
            d = e._diff_index(k)
            if not d.is_zero():
                dG[(a, b, c, k)] = d
    comps = _full((n,) * 4, m.chart.zero())
    for a, b in itertools.product(range(n), repeat=2):
        for c in range(n):
            for d in range(c + 1, n):
                terms = []
                x = dG.get((a, d, b, c))
                if x is not None:
                    terms.append(x)
                x = dG.get((a, c, b, d))
                if x is not None:
                    terms.append(-x)
                for e in range(n):
                    if nzG[a][c][e] and nzG[e][d][b]:
                        terms.append(G[a, c, e] * G[e, d, b])
                    if nzG[a][d][e] and nzG[e][c][b]:
                        terms.append(-(G[a, d, e] * G[e, c, b]))
                val = _sum(terms, names)
                if not val.is_zero():
                    comps[a, b, c, d] = val
                    comps[a, b, d, c] = -val
    return TensorField(m.chart, (CON, COV, COV, COV), comps)


@dataclass
class RiemannOperator:
    """Riemann tensor acting on 2-forms, ``matrix[(a,b)][(c,d)] = R^{ab}_{cd}`` for a<b, c<d."""

    pairs: list[tuple[int, int]]
    matrix: list[list[Expression]]
    det: Expression

    @property
    def dimension(self) -> int:
        return len(self.pairs)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.matrix for e in row)

    def generically_nonsingular(self) -> bool:
        """True when the determinant is not identically zero."""
        return not self.det.is_zero()

    def nonsingular_at(self, point) -> bool:
        return self.det.evaluate(point) != 0


class CurvaturePack:
    """All curvature objects of a metric, computed lazily and cached.

    Built once per :class:`MetricField` (see ``MetricField.curvature``).
    """

    def __init__(self, metric: MetricField):
        self.metric = metric
        self.chart = metric.chart
        self._nabla = {}

    @property
    def n(self) -> int:
        return self.metric.n

    @cached_property
    def christoffel(self) -> TensorField:
        return self.metric.christoffel

    @cached_property
    def riemann(self) -> TensorField:
        return _compute_riemann(self.metric, self.christoffel)

    @cached_property
    def riemann_lower(self) -> TensorField:
        r = einsum("ae,ebcd->abcd", self.metric.g_tensor, self.riemann)
        return TensorField(self.chart, r.valence, r.components)

    @cached_property
    def riemann_up(self) -> TensorField:
        """All-contravariant Riemann ``R^{abcd}``."""
        t = self.riemann
        for s in (1, 2, 3):
            t = raise_index(t, s, self.metric)
        return t

    @cached_property
    def ricci(self) -> TensorField:
        r = einsum("abad->bd", self.riemann)
        return TensorField(self.chart, r.valence, r.components)

    @cached_property
    def ricci_mixed(self) -> TensorField:
        """``R^a_b`` (first slot raised)."""
        return raise_index(self.ricci, 0, self.metric)

    @cached_property
    def ricci_up(self) -> TensorField:
        return raise_index(self.ricci_mixed, 1, self.metric)

    @cached_property
    def scalar(self) -> Expression:
        return einsum("aa->", self.ricci_mixed).scalar()

    @cached_property
    def weyl(self) -> TensorField:
        """Weyl tensor, all indices covariant."""
        n = self.n
        if n <= 2:
            raise GeometryError("the Weyl tensor needs n >= 3")
        g = self.metric.g
        Ric = self.ricci.components
        Rl = self.riemann_lower.components
        names = self.chart.names
        c1 = Fraction(1, n - 2)
        c2 = self.scalar * Fraction(1, (n - 1) * (n - 2))
        comps = _full((n,) * 4, self.chart.zero())
        for a in range(n):
            for b in range(a + 1, n):
                for l in range(n):
                    for mu in range(l + 1, n):
                        terms = [Rl[a, b, l, mu]]
                        ricci_part = (Ric[a, l] * g[b, mu] - Ric[a, mu] * g[b, l]
                                      - Ric[b, l] * g[a, mu] + Ric[b, mu] * g[a, l])
                        if not ricci_part.is_zero():
                            terms.append(-(ricci_part * c1))
                        if not c2.is_zero():
                            gg = g[a, l] * g[b, mu] - g[a, mu] * g[b, l]
                            if not gg.is_zero():
                                terms.append(c2 * gg)
                        val = _sum(terms, names)
                        if val.is_zero():
                            continue
                        comps[a, b, l, mu] = val
                        comps[b, a, l, mu] = -val
                        comps[a, b, mu, l] = -val
                        comps[b, a, mu, l] = val
        return TensorField(self.chart, (COV,) * 4, comps)

    @cached_property
    def weyl_mixed(self) -> TensorField:
        """``C^a_{bcd}``."""
        return raise_index(self.weyl, 0, self.metric)

    def nabla_k(self, k: int) -> TensorField:
        """k-th covariant derivative of the covariant Riemann tensor."""
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return self.riemann_lower
        t = self._nabla.get(k)
        if t is None:
            prev = self.nabla_k(k - 1)
            if prev.is_zero():
                t = TensorField.zeros(self.chart, (COV,) * (4 + k))
            else:
                t = covariant_derivative_riemann_tail(prev, self.metric)
            self._nabla[k] = t
        return t

    @property
    def nabla_riemann(self) -> TensorField:
        return self.nabla_k(1)

    @property
    def nabla2_riemann(self) -> TensorField:
        return self.nabla_k(2)

    @cached_property
    def nabla_ricci(self) -> TensorField:
        """``(nabla R)_{m a b} = nabla_m R_{ab}``."""
        return covariant_derivative(self.ricci, self.metric)

    @cached_property
    def nabla2_ricci(self) -> TensorField:
        return covariant_derivative(self.nabla_ricci, self.metric)

    @cached_property
    def nabla_weyl(self) -> TensorField:
        return covariant_derivative_riemann_tail(self.weyl, self.metric)

    @cached_property
    def nabla2_weyl(self) -> TensorField:
        return covariant_derivative_riemann_tail(self.nabla_weyl, self.metric)

    @cached_property
    def nabla_scalar(self) -> TensorField:
        s = self.scalar
        c = self.chart
        return TensorField(c, (COV,), np.array([s._diff_index(i) for i in range(c.n)] + [None], dtype=object)[:-1])

    @cached_property
    def operator(self) -> RiemannOperator:
        n = self.n
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        # R^{ab}_{cd} = g^{be} R^a_{ecd}
        mixed = raise_index(self.riemann, 1, self.metric).components
        matrix = [[mixed[a, b, c, d] for (c, d) in pairs] for (a, b) in pairs]
        _, det = _gauss_jordan(matrix, self.chart)
        return RiemannOperator(pairs, matrix, det)

    @cached_property
    def constant_curvature_residual(self) -> TensorField:
        """``R^a_{bcd} - K (delta^a_c g_{bd} - delta^a_d g_{bc})`` with ``K = R/(n(n-1))``."""
        n = self.n
        K = self.scalar * Fraction(1, n * (n - 1))
        g = self.metric.g
        R = self.riemann.components
        comps = R.copy()
        if not K.is_zero():
            for a, b, d in itertools.product(range(n), repeat=3):
                if a != d and not g[b, d].is_zero():
                    comps[a, b, a, d] = comps[a, b, a, d] - K * g[b, d]
                    comps[a, b, d, a] = comps[a, b, d, a] + K * g[b, d]
        return TensorField(self.chart, self.riemann.valence, comps)

    @cached_property
    def sectional_constant(self) -> Expression:
        return self.scalar * Fraction(1, self.n * (self.n - 1))
