"""Curvature concomitants, identity checks and superenergy tensors.

Degree counts powers of the curvature tensor only (metric factors do not
count); order counts covariant derivatives.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .classify import ClassificationError, antisym_leading, parallel_candidates, ricci_commutator
from .expr import Expression, PoleError
from .geometry import (
    COV,
    CON,
    GeometryError,
    MetricField,
    TensorField,
    antisym,
    covariant_derivative,
    einsum,
    outer,
    raise_index,
    signature_at,
    sym,
    with_valence,
)

__all__ = [
    "Concomitant",
    "scalar_invariants",
    "check_constancy",
    "ConstancyOutcome",
    "quadratic_vanishing_suite",
    "derivation_chain",
    "IdentityOutcome",
    "identity_suite",
    "SuperenergyTensor",
    "superenergy_ricci",
    "superenergy2",
    "superenergy2_closed_form",
    "DominantReport",
    "dominant_property_sample",
    "causal_frame",
]


@dataclass
class Concomitant:
    name: str
    rank: int
    degree: int
    order: int
    value: TensorField

    def __post_init__(self):
        if self.value.rank != self.rank:
            raise ValueError(f"{self.name}: declared rank {self.rank} but value has rank {self.value.rank}")

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero()

    @property
    def witness(self) -> tuple[int, ...] | None:
        return self.value.first_nonzero()

    @property
    def scalar(self) -> Expression:
        return self.value.scalar()


def _up(t: TensorField, m: MetricField, slots: Sequence[int]) -> TensorField:
    for s in slots:
        if t.valence[s] == COV:
            t = raise_index(t, s, m)
    return t


def _all_up(t: TensorField, m: MetricField) -> TensorField:
    return _up(t, m, range(t.rank))


def _full_contraction(a: TensorField, b: TensorField, m: MetricField) -> TensorField:
    labels = "abcdefgh"[: a.rank]
    return einsum(f"{labels},{labels}->", a, _all_up(b, m))


def scalar_invariants(m: MetricField, max_degree: int = 2) -> list[Concomitant]:
    """The listed scalar invariants up to quadratic degree."""
    if max_degree > 2:
        raise ValueError("only invariants up to degree 2 are supported")
    c = m.curvature
    out = [Concomitant("R", 0, 1, 0, TensorField(m.chart, (), np.array(c.scalar, dtype=object)))]
    if max_degree < 2:
        return out
    Rl = c.riemann_lower
    out += [
        Concomitant("Ric.Ric", 0, 2, 0, _full_contraction(c.ricci, c.ricci, m)),
        Concomitant("C.Riem", 0, 2, 0, _full_contraction(c.weyl, Rl, m)),
        Concomitant("Riem.Riem", 0, 2, 0, _full_contraction(Rl, Rl, m)),
        Concomitant("dR.dR", 0, 2, 2, _full_contraction(c.nabla_scalar, c.nabla_scalar, m)),
        Concomitant("dRic.dRic", 0, 2, 2, _full_contraction(c.nabla_ricci, c.nabla_ricci, m)),
        Concomitant("dRiem.dRiem", 0, 2, 2, _full_contraction(c.nabla_riemann, c.nabla_riemann, m)),
    ]
    return out


@dataclass
class ConstancyOutcome:
    name: str
    degree: int
    order: int
    constant: bool
    parallel_null: bool
    witness: tuple[int, ...] | None

    @property
    def ok(self) -> bool:
        return self.constant or self.parallel_null


def _require_two_symmetric(m: MetricField, what: str):
    if not m.curvature.nabla_k(2).is_zero():
        raise GeometryError(f"{what} needs a 2-symmetric metric")


def check_constancy(m: MetricField) -> list[ConstancyOutcome]:
    """Constancy of scalar invariants on a 2-symmetric metric.

    Each invariant of order ``k`` and degree up to ``k + 2`` must have zero
    gradient unless a parallel null 1-form is present.
    """
    _require_two_symmetric(m, "check_constancy")
    invs = scalar_invariants(m, 2)
    null_parallel = None
    out = []
    for inv in invs:
        if inv.degree > inv.order + 2:
            continue
        s = inv.scalar
        grad = [s._diff_index(i) for i in range(m.n)]
        wit = next(((i,) for i, g in enumerate(grad) if not g.is_zero()), None)
        constant = wit is None
        if not constant and null_parallel is None:
            null_parallel = any(f.null and f.parallel for f in parallel_candidates(m))
        out.append(ConstancyOutcome(inv.name, inv.degree, inv.order, constant,
                                    bool(null_parallel) if not constant else False, wit))
    return out


def quadratic_vanishing_suite(m: MetricField) -> list[Concomitant]:
    """The twelve quadratic concomitants that vanish on 2-symmetric metrics without a parallel null field."""
    c = m.curvature
    Ric_up = c.ricci_up
    Riem_up = c.riemann_up
    NRic = c.nabla_ricci  # N[m, a, b] = nabla_m R_ab
    NRiem = c.nabla_riemann
    NRic_duu = _up(NRic, m, (1, 2))
    NRic_uud = _up(NRic, m, (0, 1))
    NRic_uuu = _all_up(NRic, m)
    NRiem_duuuu = _up(NRiem, m, (1, 2, 3, 4))
    NRiem_up = _all_up(NRiem, m)
    items = [
        ("Ric^mn dRic_m_na", 1, 2, 1, einsum("mn,mna->a", Ric_up, NRic)),
        ("Riem^mnra dRic_m_nr", 1, 2, 1, einsum("mnra,mnr->a", Riem_up, NRic)),
        ("Riem^mnrs dRiem_m_nrsa", 1, 2, 1, einsum("mnrs,mnrsa->a", Riem_up, NRiem)),
        ("Riem^mnrs dRiem_a_mnrs", 1, 2, 1, einsum("mnrs,amnrs->a", Riem_up, NRiem)),
        ("dRic_a^mn dRic_b_mn", 2, 2, 2, einsum("amn,bmn->ab", NRic_duu, NRic)),
        ("dRic_m_nb dRic_a^mn", 2, 2, 2, einsum("mnb,amn->ab", NRic, NRic_duu)),
        ("dRic_m_na dRic^m^n_b", 2, 2, 2, einsum("mna,mnb->ab", NRic, NRic_uud)),
        ("dRic_m_na dRic^n^m_b", 2, 2, 2, einsum("mna,nmb->ab", NRic, NRic_uud)),
        ("dRic^m^nr dRiem_a_brmn", 2, 2, 2, einsum("mnr,abrmn->ab", NRic_uuu, NRiem)),
        ("dRic^m^nr dRiem_m_anbr", 2, 2, 2, einsum("mnr,manbr->ab", NRic_uuu, NRiem)),
        ("dRiem_a^mnrs dRiem_b_mnrs", 2, 2, 2, einsum("amnrs,bmnrs->ab", NRiem_duuuu, NRiem)),
        ("dRiem^s^mnra dRiem_s_mnrb", 2, 2, 2, einsum("smnra,smnrb->ab", NRiem_up, NRiem)),
    ]
    return [Concomitant(name, r, d, o, v) for name, r, d, o, v in items]


def derivation_chain(m: MetricField) -> list[Concomitant]:
    """``R^r_m d_r R``, ``dR.dR`` and ``R^mn d_a R_mn``, all zero on 2-symmetric metrics."""
    c = m.curvature
    dR = c.nabla_scalar
    return [
        Concomitant("Ric^r_m d_r R", 1, 2, 1, einsum("rm,r->m", c.ricci_mixed, dR)),
        Concomitant("d_n R d^n R", 0, 2, 2, _full_contraction(dR, dR, m)),
        Concomitant("Ric^mn dRic_a_mn", 1, 2, 1, einsum("mn,amn->a", c.ricci_up, c.nabla_ricci)),
    ]


def assert_degree_order(m: MetricField, concomitants: Sequence[Concomitant]) -> None:
    """On a 2-symmetric metric: nonzero concomitants have degree >= order, and degree == order ones are parallel."""
    _require_two_symmetric(m, "degree/order check")
    for cc in concomitants:
        if cc.is_zero:
            continue
        if cc.degree < cc.order:
            raise ClassificationError(f"{cc.name}: nonzero with degree {cc.degree} < order {cc.order}")
        if cc.degree == cc.order and not covariant_derivative(cc.value, m).is_zero():
            raise ClassificationError(f"{cc.name}: degree equals order but the concomitant is not parallel")


# identities ---------------------------------------------------------------


@dataclass
class IdentityOutcome:
    name: str
    group: str
    expected: bool  # preconditions satisfied
    holds: bool
    witness: tuple[int, ...] | None

    @property
    def status(self) -> str:
        if self.holds:
            return "pass"
        return "fail" if self.expected else "not-expected"


def curvature_action(t: TensorField, m: MetricField) -> TensorField:
    """``sum_i R^r_{a_i l m} t_{..r..}`` for covariant ``t``, slots ``(l, m, *t)``."""
    if any(v != COV for v in t.valence):
        raise GeometryError("curvature action is defined here for covariant tensors")
    return -ricci_commutator(t, m)


def _bianchi_block(m: MetricField) -> list[tuple[str, TensorField]]:
    c = m.curvature
    Rl = c.riemann_lower
    out = [
        ("riemann_antisym_first_pair", Rl + Rl.permute((1, 0, 2, 3))),
        ("riemann_antisym_second_pair", Rl + Rl.permute((0, 1, 3, 2))),
        ("riemann_pair_exchange", Rl - Rl.permute((2, 3, 0, 1))),
        ("first_bianchi", antisym(Rl, (1, 2, 3))),
        ("second_bianchi", antisym(c.nabla_riemann, (0, 1, 2))),
        ("contracted_bianchi",
         einsum("mmn->n", raise_index(c.nabla_ricci, 1, m)) - c.nabla_scalar * Fraction(1, 2)),
        ("metric_compatibility", covariant_derivative(m.g_tensor, m)),
    ]
    if m.n >= 3:
        out.append(("weyl_traceless", einsum("rbrm->bm", c.weyl_mixed)))
    return out


def _cc_identity(m: MetricField) -> TensorField:
    """Quadratic Weyl identity of semi-symmetric metrics, slots (a, b, g, d, l, m) with l, m upper."""
    c = m.curvature
    n = m.n
    C_ddu_u = _up(c.weyl, m, (2, 3))  # C_{r a}^{l m}
    Cm = c.weyl_mixed  # C^m_{b g d}
    Ric_du = c.ricci_mixed.permute((1, 0))  # R_a^l
    delta = m.delta  # delta^m_a
    P1 = einsum("ralm,rbgd->abgdlm", C_ddu_u, Cm)
    P2 = einsum("al,mbgd->abgdlm", Ric_du, Cm)
    P3 = einsum("rl,ma,rbgd->abgdlm", Ric_du, delta, Cm)
    P4 = einsum("la,mbgd->abgdlm", delta, Cm)

    def both(t):
        return antisym(antisym(t, (0, 1)), (4, 5))

    # the R_r^[l delta^m] term enters with a plus sign: substituting the Weyl
    # decomposition into the Ricci identity for C fixes it
    X = (antisym(P1, (0, 1)) * (n - 2) - both(P2) * 2 + both(P3) * 2
         + both(P4) * (c.scalar * Fraction(2, n - 1)))
    return X + X.permute((2, 3, 0, 1, 4, 5))


def _basic(dRiem_mixed: TensorField, dT: TensorField) -> TensorField:
    """``(nabla_n R^r_{t l m} + nabla_t R^r_{n l m}) nabla_r T``, slots (n, t, l, m, *T)."""
    labels = "abcdefgh"[: dT.rank - 1]
    X = einsum(f"nrtlm,r{labels}->ntlm{labels}", dRiem_mixed, dT)
    order = (1, 0) + tuple(range(2, X.rank))
    return X + X.permute(order)


def _identity_table(m) -> list[tuple[str, str, object]]:
    """``(name, group, builder)``; each builder maps a metric (or point view) to the identity tensor."""
    table = []

    def add(name, group):
        def deco(fn):
            table.append((name, group, fn))
            return fn
        return deco

    semi, two = "semi-symmetric", "2-symmetric"
    add("RicR", semi)(lambda v: curvature_action(v.curvature.riemann_lower, v))
    add("RR_sym_ricci_riemann", semi)(
        lambda v: sym(einsum("rm,rnab->mnab", v.curvature.ricci, v.curvature.riemann), (0, 1)))
    add("RR_cyclic_riemann_ricci", semi)(
        lambda v: antisym(einsum("rmab,gr->mabg", v.curvature.riemann, v.curvature.ricci), (1, 2, 3)))
    if m.n >= 3:
        add("RR_cyclic_weyl_ricci", semi)(
            lambda v: antisym(einsum("rmab,gr->mabg", v.curvature.weyl_mixed, v.curvature.ricci), (1, 2, 3)))
    add("RR_ricci_square", semi)(
        lambda v: einsum("rs,rmsn->mn", v.curvature.ricci_up, v.curvature.riemann_lower)
        - einsum("rm,rn->mn", v.curvature.ricci_mixed, v.curvature.ricci))
    if m.n >= 3:
        add("RicC", semi)(lambda v: curvature_action(v.curvature.weyl, v))
        add("CC", semi)(_cc_identity)

    def d_riem_mixed(v):
        return raise_index(v.curvature.nabla_riemann, 1, v)  # nabla_n R^r_{t l m}, slots (n, r, t, l, m)

    add("RicDR", two)(lambda v: curvature_action(v.curvature.nabla_riemann, v))
    add("eq4_riemann", two)(lambda v: _eq4(d_riem_mixed(v), v.curvature.riemann_lower, v.curvature.riemann,
                                           v.curvature.nabla_riemann))
    sources = [("riemann", lambda v: v.curvature.nabla_riemann)]
    if m.n >= 3:
        sources.append(("weyl", lambda v: v.curvature.nabla_weyl))
    sources.append(("ricci", lambda v: v.curvature.nabla_ricci))
    for label, src in sources:
        add(f"basicR_{label}", two)(lambda v, src=src: _basic(d_riem_mixed(v), src(v)))
    for label, src in sources:
        add(f"treq4a_{label}", two)(lambda v, src=src: _treq4(v, src(v))[0])
        add(f"treq4b_{label}", two)(lambda v, src=src: _treq4(v, src(v))[1])
    return table


def _treq4(v, dT: TensorField) -> tuple[TensorField, TensorField]:
    dRic_mixed = raise_index(v.curvature.nabla_ricci, 1, v)  # nabla_n R^r_m, slots (n, r, m)
    dRic_up0 = raise_index(v.curvature.nabla_ricci, 0, v)  # nabla^r R_mn, slots (r, m, n)
    labels = "abcdefgh"[: dT.rank - 1]
    A = einsum(f"nrm,r{labels}->nm{labels}", dRic_mixed, dT)
    swap = (1, 0) + tuple(range(2, A.rank))
    B = einsum(f"rmn,r{labels}->mn{labels}", dRic_up0, dT)
    return A - A.permute(swap), B - A.permute(swap) * 2


class _PointCurvature:
    """Curvature objects of a metric evaluated at one rational point, as constant tensors."""

    _FIELDS = ("riemann", "riemann_lower", "ricci", "ricci_mixed", "ricci_up", "weyl", "weyl_mixed",
               "nabla_riemann", "nabla_ricci", "nabla_weyl")

    def __init__(self, m: MetricField, point):
        self._pack = m.curvature
        self._point = point
        self._names = m.chart.names
        self._cache = {}
        self.scalar = Expression.constant(self._pack.scalar.evaluate(point), self._names)

    def __getattr__(self, name):
        if name not in _PointCurvature._FIELDS:
            raise AttributeError(name)
        if name not in self._cache:
            self._cache[name] = _at_point(getattr(self._pack, name), self._point)
        return self._cache[name]


def _at_point(t: TensorField, point) -> TensorField:
    names = t.chart.names
    comps = t.components.copy()
    zero = t.chart.zero()
    for idx, e in t.nonzero():
        v = e.evaluate(point)
        comps[idx] = Expression.constant(v, names) if v != 0 else zero
    return TensorField(t.chart, t.valence, comps)


class _PointMetric:
    """Duck-typed stand-in for a metric frozen at a point (enough for raising, lowering and contractions)."""

    def __init__(self, m: MetricField, point):
        self.n = m.n
        self.chart = m.chart
        self.g_tensor = _at_point(m.g_tensor, point)
        self.inverse_tensor = _at_point(m.inverse_tensor, point)
        self.delta = m.delta
        self.curvature = _PointCurvature(m, point)


def identity_suite(m: MetricField, *, raise_on_failure: bool = False) -> list[IdentityOutcome]:
    """Evaluate the curvature identities exactly.

    Groups: ``bianchi`` (always expected), ``semi-symmetric`` (expected when
    the antisymmetrized second derivative of the Riemann tensor vanishes)
    and ``2-symmetric`` (expected when ``nabla nabla R = 0``).  Identities
    whose preconditions fail are still evaluated and marked
    ``not-expected`` when they do not hold.

    Each identity is first evaluated at the probe point; a nonzero value
    there is an exact certificate that it does not hold.  Only identities
    that vanish at the probe point are expanded symbolically.
    """
    c = m.curvature
    n2 = c.nabla_k(2)
    expected = {"bianchi": True, "2-symmetric": n2.is_zero(), "semi-symmetric": antisym_leading(n2).is_zero()}
    results: list[IdentityOutcome] = []
    for name, t in _bianchi_block(m):
        results.append(IdentityOutcome(name, "bianchi", True, t.is_zero(), t.first_nonzero()))
    try:
        view = _PointMetric(m, m.probe)
    except PoleError:
        view = None
    for name, group, build in _identity_table(m):
        if view is not None:
            at_point = build(view)
            if not at_point.is_zero():
                results.append(IdentityOutcome(name, group, expected[group], False, at_point.first_nonzero()))
                continue
        t = build(m)
        results.append(IdentityOutcome(name, group, expected[group], t.is_zero(), t.first_nonzero()))
    if raise_on_failure:
        bad = [r for r in results if r.status == "fail"]
        if bad:
            raise ClassificationError("identity failed under satisfied preconditions: "
                                      + ", ".join(f"{r.name}@{r.witness}" for r in bad))
    return results


def _eq4(dRiem_mixed: TensorField, T: TensorField, Rmixed: TensorField, dT: TensorField) -> TensorField:
    """``sum_i nabla_n R^r_{a_i l m} T_{..r..} - R^r_{n l m} nabla_r T``, slots (n, l, m, *T)."""
    chart = T.chart
    q = T.rank
    labels = "abcdefgh"[:q]
    total = None
    for i in range(q):
        tl = labels[:i] + "r" + labels[i + 1:]
        term = einsum(f"nr{labels[i]}lm,{tl}->nlm{labels}", dRiem_mixed, T)
        total = term if total is None else total + term
    second = einsum(f"rnlm,r{labels}->nlm{labels}", Rmixed, dT)
    return total - second


# superenergy ----------------------------------------------------------------


@dataclass
class SuperenergyTensor:
    components: TensorField
    source: str

    @property
    def rank(self) -> int:
        return self.components.rank

    def is_zero(self) -> bool:
        return self.components.is_zero()

    def __neg__(self):
        return SuperenergyTensor(-self.components, "-(" + self.source + ")")


def superenergy_ricci(m: MetricField) -> SuperenergyTensor:
    """Basic superenergy tensor of the double (2,1)-form ``F_{a r l} = nabla_a R_{rl} - nabla_r R_{al}``."""
    c = m.curvature
    N = c.nabla_ricci
    F = N - N.permute((1, 0, 2))
    F_dud = raise_index(F, 1, m)  # F_b^r_m
    F_duu = raise_index(F_dud, 2, m)  # F_b^{rs}
    F_uud = raise_index(F_dud, 0, m)  # F^{sr}_m
    F_uuu = raise_index(F_uud, 2, m)
    g = m.g_tensor
    t1 = einsum("arl,brm->ablm", F, F_dud)
    t2 = einsum("arm,brl->ablm", F, F_dud)
    t3 = outer(g, einsum("srl,srm->lm", F, F_uud))
    t4 = einsum("ars,brs->ab", F, F_duu)
    t4 = outer(t4, g)  # slots (a, b, l, m) with g_{lm}
    t5 = einsum("srt,srt->", F, F_uuu).scalar()
    T = t1 + t2 - t3 * Fraction(1, 2) - t4
    if not t5.is_zero():
        T = T + outer(g, g) * (t5 * Fraction(1, 4))
    sym_ok = (T - T.permute((1, 0, 2, 3))).is_zero() and (T - T.permute((0, 1, 3, 2))).is_zero()
    if not sym_ok:
        raise ClassificationError("superenergy tensor lacks its pair symmetries")
    return SuperenergyTensor(T, "nabla_[a R_b]l")


def superenergy2(m: MetricField) -> SuperenergyTensor:
    """``T_{a b l m t n} = 4 nabla_a C_{l r t s} nabla_b C_m^r_n^s``."""
    dC = m.curvature.nabla_weyl
    dC_up = _up(dC, m, (2, 4))
    T = einsum("alrts,bmrns->ablmtn", dC, dC_up) * 4
    return SuperenergyTensor(T, "nabla C")


def superenergy2_closed_form(k: TensorField, B: TensorField, m: MetricField) -> TensorField:
    """``4 (B^{rs} B_{rs}) k^{(x)6}``."""
    BB = _full_contraction(B, B, m).scalar()
    kk = k
    for _ in range(5):
        kk = outer(kk, k)
    return kk * (BB * 4)


# dominant property ---------------------------------------------------------


def causal_frame(G: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact congruence diagonalization: rows ``e_i`` with ``e_i G e_j = d_i delta_ij``.

    The frame is reordered so that ``d_0 < 0`` (requires Lorentzian ``G``).
    """
    n = len(G)
    A = [list(map(Fraction, row)) for row in G]
    E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def combine(i, j, s):
        # e_i <- e_i + s e_j, applied as a congruence
        for k in range(n):
            E[i][k] += s * E[j][k]
        for k in range(n):
            A[i][k] += s * A[j][k]
        for k in range(n):
            A[k][i] += s * A[k][j]

    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
            if j is None:
                if any(A[i][k] != 0 for k in range(n)):
                    raise GeometryError("degenerate metric at the probe point")
                continue
            if A[j][j] != 0:
                # swap roles: bring a nonzero diagonal forward
                E[i], E[j] = E[j], E[i]
                A[i], A[j] = A[j], A[i]
                for row in A:
                    row[i], row[j] = row[j], row[i]
            else:
                combine(i, j, Fraction(1))
        p = A[i][i]
        if p == 0:
            raise GeometryError("degenerate metric at the probe point")
        for j in range(i + 1, n):
            if A[j][i] != 0:
                combine(j, i, -A[j][i] / p)
    d = [A[i][i] for i in range(n)]
    neg = [i for i in range(n) if d[i] < 0]
    if len(neg) != 1:
        raise GeometryError("metric is not Lorentzian at the probe point")
    order = neg + [i for i in range(n) if i != neg[0]]
    return [E[i] for i in order], [d[i] for i in order]


@dataclass
class DominantReport:
    samples: int
    minimum: Fraction | None
    negatives: int
    first_negative: int | None
    values: list[Fraction] = field(repr=False, default_factory=list)

    @property
    def passed(self) -> bool:
        return self.negatives == 0


def _random_rational(rng: random.Random, bound: int = 64) -> Fraction:
    return Fraction(rng.randint(-bound, bound), bound)


def dominant_property_sample(T: SuperenergyTensor | TensorField, m: MetricField, point: Sequence | None = None,
                             samples: int = 200, seed: int = 0) -> DominantReport:
    """Contract ``T`` with seeded future-pointing timelike vectors at a point, exactly.

    Vectors are ``V = t e_0 + sum s_i e_i`` in an exact diagonalizing frame
    with spatial weights ``s_i`` in ``[-1, 1]`` and
    ``t = 1 + sum (d_i/|d_0|) s_i^2``, which is always timelike and on the
    same side as ``e_0``.
    """
    comps = T.components if isinstance(T, SuperenergyTensor) else T
    if any(v != COV for v in comps.valence):
        raise GeometryError("dominant-property sampling needs a covariant tensor")
    point = tuple(Fraction(p) for p in (point if point is not None else m.probe))
    if signature_at(m.g, point) != (1, m.n - 1):
        raise GeometryError("metric is not Lorentzian at the probe point")
    Gp = [[m.g[i, j].evaluate(point) for j in range(m.n)] for i in range(m.n)]
    frame, d = causal_frame(Gp)
    Tp = [(idx, e.evaluate(point)) for idx, e in comps.nonzero()]
    Tp = [(idx, v) for idx, v in Tp if v != 0]
    Gf = np.array(Gp, dtype=float)
    rng = random.Random(seed)
    n = m.n
    values = []
    negatives = 0
    first_negative = None
    for s in range(samples):
        vecs = []
        for _ in range(comps.rank):
            sp = [_random_rational(rng) for _ in range(n - 1)]
            t = 1 + sum(d[i + 1] / -d[0] * sp[i] ** 2 for i in range(n - 1))
            coeffs = [t] + sp
            V = [sum(coeffs[a] * frame[a][k] for a in range(n)) for k in range(n)]
            Vf = np.array([float(x) for x in V])
            if not Vf @ Gf @ Vf < 1e-9 * max(1.0, float(Vf @ Vf)):
                raise ClassificationError("sampled vector is not timelike")
            vecs.append(V)
        total = Fraction(0)
        for idx, val in Tp:
            prod = val
            for slot, i in enumerate(idx):
                prod *= vecs[slot][i]
                if prod == 0:
                    break
            total += prod
        values.append(total)
        if total < 0:
            negatives += 1
            if first_negative is None:
                first_negative = s
    return DominantReport(samples, min(values) if values else None, negatives, first_negative, values)
