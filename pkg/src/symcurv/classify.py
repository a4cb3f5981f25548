"""Symmetry-hierarchy classification, recurrence, Segre types and parallel fields."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .expr import Expression, PoleError, expr_sum
from .geometry import (
    COV,
    CON,
    GeometryError,
    MetricField,
    TensorField,
    _full,
    covariant_derivative,
    covariant_derivative_riemann_tail,
    einsum,
    lower_index,
    outer,
    raise_index,
    signature_at,
)

__all__ = [
    "ClassificationError",
    "SegreError",
    "TypeNError",
    "TowerVerdict",
    "HierarchyVerdict",
    "classify_hierarchy",
    "detect_recurrence",
    "ricci_commutator",
    "SegreType",
    "segre_classify",
    "ParallelResult",
    "verify_parallel",
    "verify_homothetic",
    "TypeNDecomposition",
    "decompose_typeN",
    "parallel_candidates",
    "ParallelFinding",
    "theorem_checks",
]


class ClassificationError(RuntimeError):
    """An exact check contradicted a result that must hold (engine or convention bug)."""


class SegreError(ValueError):
    pass


class TypeNError(ValueError):
    def __init__(self, message: str, decomposition: "TypeNDecomposition | None" = None):
        super().__init__(message)
        self.decomposition = decomposition


# Ricci identity --------------------------------------------------------------


def ricci_commutator(t: TensorField, metric: MetricField) -> TensorField:
    """Curvature side of the Ricci identity, slots ``(l, m, *t)``.

    Equals ``nabla_l nabla_m t - nabla_m nabla_l t``: each covariant slot
    contributes ``-R^r_{a l m} t_{..r..}`` and each contravariant slot
    ``+R^a_{r l m} t^{..r..}``.
    """
    chart = t.chart
    n = chart.n
    R = metric.curvature.riemann
    by_lower: dict[int, list] = defaultdict(list)  # r -> (a, l, m, R^r_{alm}) for covariant slots
    by_upper: dict[int, list] = defaultdict(list)  # r -> (a, l, m, R^a_{rlm}) for contravariant slots
    for (a, b, l, m), e in R.nonzero():
        by_lower[a].append((b, l, m, e))
        by_upper[b].append((a, l, m, e))
    acc: dict[tuple, list] = defaultdict(list)
    for idx, x in t.nonzero():
        for s, kind in enumerate(t.valence):
            r = idx[s]
            if kind == COV:
                for a, l, m, e in by_lower.get(r, ()):
                    acc[(l, m) + idx[:s] + (a,) + idx[s + 1:]].append(-(e * x))
            else:
                for a, l, m, e in by_upper.get(r, ()):
                    acc[(l, m) + idx[:s] + (a,) + idx[s + 1:]].append(e * x)
    comps = _full((n,) * (t.rank + 2), chart.zero())
    for k, v in acc.items():
        s = v[0] if len(v) == 1 else expr_sum(v, chart.names)
        if not s.is_zero():
            comps[k] = s
    return TensorField(chart, (COV, COV) + t.valence, comps)


def antisym_leading(t: TensorField) -> TensorField:
    """``t[l, m, ...] - t[m, l, ...]`` (unnormalized commutator of the two leading slots)."""
    order = (1, 0) + tuple(range(2, t.rank))
    return t - t.permute(order)


# hierarchy ---------------------------------------------------------------------


@dataclass
class TowerVerdict:
    """Vanishing pattern of ``nabla^k X`` for one curvature object ``X``."""

    source: str
    vanishes: bool
    k_symmetric: int | None
    locally_symmetric: bool
    two_symmetric: bool
    semi_symmetric: bool
    recurrent: bool
    recurrence: TensorField | None
    kmax: int
    witnesses: dict[str, tuple[int, ...] | None] = field(default_factory=dict)


@dataclass
class HierarchyVerdict:
    constant_curvature: bool
    curvature_constant: Expression
    riemann: TowerVerdict
    weyl: TowerVerdict | None
    ricci: TowerVerdict
    einstein: bool
    generic_nonsingular: bool
    kmax: int

    @property
    def locally_symmetric(self) -> bool:
        return self.riemann.locally_symmetric

    @property
    def two_symmetric(self) -> bool:
        return self.riemann.two_symmetric

    @property
    def semi_symmetric(self) -> bool:
        return self.riemann.semi_symmetric

    @property
    def k_symmetric(self) -> int | None:
        return self.riemann.k_symmetric

    @property
    def recurrent(self) -> bool:
        return self.riemann.recurrent

    @property
    def recurrence(self) -> TensorField | None:
        return self.riemann.recurrence

    def chain(self) -> list[tuple[str, bool]]:
        return [
            ("constant_curvature", self.constant_curvature),
            ("locally_symmetric", self.locally_symmetric),
            ("2-symmetric", self.two_symmetric),
            ("semi_symmetric", self.semi_symmetric),
        ]


def _tower(source: str, base: TensorField, metric: MetricField, kmax: int, nabla, *, pair_tail: bool
           ) -> TowerVerdict:
    witnesses: dict[str, tuple[int, ...] | None] = {"base": base.first_nonzero()}
    if base.is_zero():
        return TowerVerdict(source, True, 1, True, True, True, True, TensorField.zeros(metric.chart, (COV,)),
                            kmax, witnesses)
    k_sym = None
    for k in range(1, kmax + 1):
        t = nabla(k)
        witnesses[f"nabla{k}"] = t.first_nonzero()
        if t.is_zero():
            k_sym = k
            break
    d1 = nabla(1)
    d2 = nabla(2)
    comm = antisym_leading(d2)
    witnesses["semi"] = comm.first_nonzero()
    rec = detect_recurrence(base, metric, nabla=d1)
    return TowerVerdict(
        source=source,
        vanishes=False,
        k_symmetric=k_sym,
        locally_symmetric=d1.is_zero(),
        two_symmetric=d2.is_zero(),
        semi_symmetric=comm.is_zero(),
        recurrent=rec is not None,
        recurrence=rec,
        kmax=kmax,
        witnesses=witnesses,
    )


def _generic_nabla(base: TensorField, metric: MetricField, pair_tail: bool):
    cache = {0: base}

    def nabla(k: int) -> TensorField:
        if k not in cache:
            prev = nabla(k - 1)
            if prev.is_zero():
                cache[k] = TensorField.zeros(base.chart, (COV,) + prev.valence)
            elif pair_tail:
                cache[k] = covariant_derivative_riemann_tail(prev, metric)
            else:
                cache[k] = covariant_derivative(prev, metric)
        return cache[k]

    return nabla


def classify_hierarchy(m: MetricField, kmax: int = 4) -> HierarchyVerdict:
    """Exact position of ``m`` in the curvature hierarchy.

    ``k_symmetric`` is the smallest ``k <= kmax`` with ``nabla^k R = 0``.
    Semi-symmetry is decided from the commutator of the two leading slots of
    ``nabla nabla R``.  Weyl and Ricci variants use ``C`` and ``Ric``.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    c = m.curvature
    riem = _tower("riemann", c.riemann_lower, m, kmax, c.nabla_k, pair_tail=True)
    weyl = None
    if m.n >= 3:
        weyl = _tower("weyl", c.weyl, m, kmax, _generic_nabla(c.weyl, m, True), pair_tail=True)
    ric = _tower("ricci", c.ricci, m, kmax, _generic_nabla(c.ricci, m, False), pair_tail=False)
    residual = c.constant_curvature_residual
    const_curv = residual.is_zero()
    einstein = (c.ricci - m.g_tensor * (c.scalar * Fraction(1, m.n))).is_zero()
    verdict = HierarchyVerdict(
        constant_curvature=const_curv,
        curvature_constant=c.sectional_constant,
        riemann=riem,
        weyl=weyl,
        ricci=ric,
        einstein=einstein,
        generic_nonsingular=c.operator.generically_nonsingular(),
        kmax=kmax,
    )
    _assert_monotone(verdict)
    return verdict


def _assert_monotone(v: HierarchyVerdict) -> None:
    chain = v.chain()
    for (name_a, a), (name_b, b) in zip(chain, chain[1:]):
        if a and not b:
            raise ClassificationError(f"hierarchy violated: {name_a} holds but {name_b} fails")
    if v.constant_curvature and not v.curvature_constant.is_constant():
        raise ClassificationError("constant-curvature residual vanishes but R/(n(n-1)) is not constant")
    if v.locally_symmetric and not v.recurrent:
        raise ClassificationError("locally symmetric metric without trivial recurrence")


def detect_recurrence(t: TensorField, metric: MetricField, *, nabla: TensorField | None = None
                      ) -> TensorField | None:
    """1-form ``A`` with ``nabla t = A (x) t``, or None.

    The first nonzero component of ``t`` in lexicographic order fixes the
    quotient; every component is then checked exactly.
    """
    if t.is_zero():
        raise GeometryError("recurrence of an identically zero tensor is undefined")
    if nabla is None:
        nabla = covariant_derivative(t, metric)
    idx, pivot = t.nonzero()[0]
    inv = pivot.inverse()
    A = TensorField(t.chart, (COV,),
                    np.array([nabla.components[(mu,) + idx] * inv for mu in range(t.n)] + [None],
                             dtype=object)[:-1])
    return A if (nabla - outer(A, t)).is_zero() else None


# Segre ----------------------------------------------------------------------


@dataclass
class SegreType:
    symbol: str
    eigenvalues: list  # Fractions, with a string marker for a complex pair
    blocks: list[tuple[object, int]]  # (eigenvalue, Jordan block size)
    timelike: object | None

    def __str__(self):
        vals = ";".join(str(e) for e in self.eigenvalues)
        return f"{self.symbol} eigenvalues={vals}"


def _sym_matrix(arr) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in arr])


def _to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _jordan_sizes(M: sympy.Matrix, lam) -> list[int]:
    """Jordan block sizes for eigenvalue ``lam`` from the rank sequence of powers of ``M - lam I``."""
    n = M.shape[0]
    N = M - lam * sympy.eye(n)
    ranks = [n]
    P = sympy.eye(n)
    while True:
        P = P * N
        ranks.append(P.rank())
        if ranks[-1] == ranks[-2]:
            break
    # blocks of size >= k: ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes = []
    for k in range(len(at_least) - 1):
        sizes.extend([k + 1] * (at_least[k] - at_least[k + 1]))
    return sorted(sizes, reverse=True)


def _group(count: int, inner: str = "1") -> str:
    return inner if count == 1 else "(" + inner * count + ")"


def segre_classify(h: TensorField, m: MetricField, point: Sequence | None = None) -> SegreType:
    """Segre type of a symmetric covariant 2-tensor at a rational point.

    Builds ``h^a_b`` exactly, factors its characteristic polynomial over the
    rationals and reads Jordan block sizes from ranks of powers.  Irrational
    real eigenvalues raise :class:`SegreError`.
    """
    if h.rank != 2:
        raise SegreError("Segre classification needs a rank-2 tensor")
    if h.valence != (COV, COV):
        h = TensorField(h.chart, (COV, COV), _lowered(h, m).components)
    if not all(h[i, j] == h[j, i] for i in range(h.n) for j in range(i)):
        raise SegreError("tensor is not symmetric")
    point = tuple(Fraction(p) for p in (point if point is not None else m.probe))
    if signature_at(m.g, point) != (1, m.n - 1):
        raise SegreError("metric is not Lorentzian at the probe point")
    n = m.n
    G = _sym_matrix(m.g_tensor.evaluate(point))
    H = _sym_matrix(h.evaluate(point))
    M = G.inv() * H  # h^a_b
    lam = sympy.Symbol("lam")
    cp = M.charpoly(lam).as_expr()
    _, factors = sympy.factor_list(cp, lam)
    real: list[tuple[Fraction, int]] = []
    complex_pair = None
    for f, mult in factors:
        p = sympy.Poly(f, lam)
        d = p.degree()
        if d == 1:
            c1, c0 = p.all_coeffs()
            real.append((_to_fraction(-c0 / c1), mult))
        elif d == 2:
            a2, a1, a0 = p.all_coeffs()
            disc = a1 * a1 - 4 * a2 * a0
            if disc < 0 and mult == 1 and complex_pair is None:
                complex_pair = (_to_fraction(a1 / a2), _to_fraction(a0 / a2))
            elif disc < 0:
                raise SegreError("repeated complex eigenvalues cannot occur for a Lorentzian metric")
            else:
                raise SegreError(f"unsupported algebraic eigenvalue (roots of {p.as_expr()} = 0)")
        else:
            raise SegreError(f"unsupported algebraic eigenvalue (irreducible factor of degree {d})")
    real.sort(key=lambda x: x[0])
    blocks: list[tuple[object, int]] = []
    sizes_by_value: dict[Fraction, list[int]] = {}
    for val, mult in real:
        sizes = _jordan_sizes(M, sympy.Rational(val.numerator, val.denominator))
        if sum(sizes) != mult:
            raise ClassificationError("Jordan block sizes do not add up to the multiplicity")
        sizes_by_value[val] = sizes
        blocks.extend((val, s) for s in sizes)
    big = [(v, s) for v, s in blocks if s > 1]
    if len(big) > 1 or any(s > 3 for _, s in big) or (big and complex_pair):
        raise SegreError(f"block structure {blocks} is not a Lorentzian Segre type")

    def spatial(values):
        return "".join(_group(len(sizes_by_value[v])) for v in values)

    if complex_pair is not None:
        p1, p0 = complex_pair
        poly = lam ** 2 + sympy.Rational(p1.numerator, p1.denominator) * lam + sympy.Rational(
            p0.numerator, p0.denominator)
        marker = "z: " + str(poly).replace("**", "^") + " = 0"
        body = "zz̄" + spatial([v for v, _ in real])
        return SegreType("[" + body + "]", [marker] + [v for v, _ in real], [("z", 1), ("z̄", 1)] + blocks, None)
    if big:
        v0, s0 = big[0]
        extra = len(sizes_by_value[v0]) - 1
        head = str(s0) if extra == 0 else "(" + str(s0) + "1" * extra + ")"
        rest = [v for v, _ in real if v != v0]
        return SegreType("[" + head + spatial(rest) + "]", [v0] + rest, blocks, v0)
    # diagonalizable: find the eigenvalue whose eigenspace contains the timelike direction
    timelike = None
    for val, mult in real:
        E = (M - sympy.Rational(val.numerator, val.denominator) * sympy.eye(n)).nullspace()
        B = sympy.Matrix.hstack(*E)
        gram = np.array((B.T * G * B).evalf(30).tolist(), dtype=float)
        if np.min(np.linalg.eigvalsh(gram)) < 0:
            if timelike is not None:
                raise ClassificationError("two timelike eigenspaces")
            timelike = val
    if timelike is None:
        raise ClassificationError("no timelike eigenspace for a diagonalizable Lorentzian operator")
    mt = len(sizes_by_value[timelike])
    head = "1," if mt == 1 else "(1," + "1" * (mt - 1) + ")"
    rest = [v for v, _ in real if v != timelike]
    return SegreType("[" + head + spatial(rest) + "]", [timelike] + rest, blocks, timelike)


def _lowered(t: TensorField, m: MetricField) -> TensorField:
    for s, v in enumerate(t.valence):
        if v == CON:
            t = lower_index(t, s, m)
    return t


# parallel and homothetic fields ------------------------------------------------


@dataclass
class ParallelResult:
    parallel: bool
    witness: tuple[int, ...] | None
    obstruction: bool | None  # True when the curvature integrability condition already fails
    obstruction_witness: tuple[int, ...] | None
    derivative: TensorField

    def __bool__(self):
        return self.parallel


def verify_parallel(t: TensorField, m: MetricField) -> ParallelResult:
    """Exact check of ``nabla t = 0``.

    When it fails, also evaluates the integrability condition (the algebraic
    curvature side of the Ricci identity applied to ``t``), which must vanish
    for any parallel field.
    """
    d = covariant_derivative(t, m)
    if d.is_zero():
        return ParallelResult(True, None, None, None, d)
    obs = ricci_commutator(t, m)
    return ParallelResult(False, d.first_nonzero(), not obs.is_zero(), obs.first_nonzero(), d)


def verify_homothetic(v: TensorField, m: MetricField) -> Fraction | None:
    """Constant ``c`` with ``nabla_b v_a = c g_{ab}``, or None.

    When ``c != 0`` on a 2-symmetric metric, the metric must be locally
    symmetric; a violation raises :class:`ClassificationError`.
    """
    if v.rank != 1:
        raise GeometryError("homothetic check needs a vector or covector field")
    w = lower_index(v, 0, m) if v.valence == (CON,) else v
    d = covariant_derivative(w, m)  # d[b, a] = nabla_b v_a
    idx = next((i for i, e in m.g_tensor.nonzero()), None)
    c = d[idx] * m.g[idx].inverse()
    if not c.is_constant():
        return None
    if not (d - m.g_tensor * c).is_zero():
        return None
    value = c.constant_value()
    if value != 0:
        curv = m.curvature
        if curv.nabla_k(2).is_zero() and not curv.nabla_k(1).is_zero():
            raise ClassificationError("proper homothety on a 2-symmetric, non-symmetric metric")
    return value


@dataclass
class ParallelFinding:
    name: str
    field: TensorField
    null: bool
    parallel: bool
    witness: tuple[int, ...] | None


def _norm(w: TensorField, m: MetricField) -> Expression:
    return einsum("ab,a,b->", m.inverse_tensor, w, w).scalar()


def parallel_candidates(m: MetricField, *, include_basis: bool = True) -> list[ParallelFinding]:
    """Check a finite candidate family for parallel 1-forms.

    Candidates: fields attached to the metric, coordinate covectors ``dx^i``,
    lowered coordinate vectors, and gradients of non-constant scalar
    curvature invariants.
    """
    chart = m.chart
    fields: list[tuple[str, TensorField]] = list(m.candidates.items())
    if include_basis:
        for i, name in enumerate(chart.names):
            fields.append((f"d{name}", TensorField.from_sparse(chart, (COV,), {(i,): chart.one()})))
            e = TensorField.from_sparse(chart, (CON,), {(i,): chart.one()})
            fields.append((f"g(d/d{name})", lower_index(e, 0, m)))
    R = m.curvature.scalar
    if not R.is_constant():
        fields.append(("dR", m.curvature.nabla_scalar))
    out = []
    seen: list[TensorField] = []
    for name, f in fields:
        if f.valence == (CON,):
            f = lower_index(f, 0, m)
        if f.is_zero() or any(f.equals(s) for s in seen):
            continue
        seen.append(f)
        res = verify_parallel(f, m)
        out.append(ParallelFinding(name, f, _norm(f, m).is_zero(), res.parallel, res.witness))
    return out


# type N ----------------------------------------------------------------------


@dataclass
class TypeNDecomposition:
    k: TensorField
    ell: TensorField
    B: TensorField
    residual: TensorField
    kB_zero: bool
    trace_zero: bool
    symmetric: bool

    @property
    def success(self) -> bool:
        return self.residual.is_zero()

    def reconstruct(self) -> TensorField:
        return typeN_form(self.k, self.B)


def typeN_form(k: TensorField, B: TensorField) -> TensorField:
    """``k_r (k_a k_c B_bd - k_b k_c B_ad - k_a k_d B_bc + k_b k_d B_ac)`` in slots (r, a, b, c, d)."""
    chart = k.chart
    n = chart.n
    kv = [k.components[i] for i in range(n)]
    Bc = B.components
    comps = _full((n,) * 5, chart.zero())
    nzk = [i for i in range(n) if not kv[i].is_zero()]
    for r in nzk:
        for a, b, c, d in itertools.product(range(n), repeat=4):
            terms = []
            if not kv[a].is_zero() and not kv[c].is_zero() and not Bc[b, d].is_zero():
                terms.append(kv[a] * kv[c] * Bc[b, d])
            if not kv[b].is_zero() and not kv[c].is_zero() and not Bc[a, d].is_zero():
                terms.append(-(kv[b] * kv[c] * Bc[a, d]))
            if not kv[a].is_zero() and not kv[d].is_zero() and not Bc[b, c].is_zero():
                terms.append(-(kv[a] * kv[d] * Bc[b, c]))
            if not kv[b].is_zero() and not kv[d].is_zero() and not Bc[a, c].is_zero():
                terms.append(kv[b] * kv[d] * Bc[a, c])
            if terms:
                s = expr_sum(terms, chart.names)
                if not s.is_zero():
                    comps[r, a, b, c, d] = kv[r] * s
    return TensorField(chart, (COV,) * 5, comps)


def transverse_null(k: TensorField, m: MetricField, t_index: int | None = None) -> TensorField:
    """Null vector ``l`` with ``l.k = -1`` built from ``k`` and a coordinate direction.

    ``l = a e + b k^#`` with ``e = d/dx^i``, where ``i`` is ``t_index`` or the
    first index with ``k_i != 0``.
    """
    chart = m.chart
    if t_index is None:
        t_index = next((i for i in range(m.n) if not k.components[i].is_zero()), None)
        if t_index is None:
            raise TypeNError("k is identically zero")
    tk = k.components[t_index]
    if tk.is_zero():
        raise TypeNError(f"the chosen direction is orthogonal to k")
    tt = m.g[t_index, t_index]
    a = -tk.inverse()
    b = -(a * tt) * (tk * 2).inverse()
    ksharp = raise_index(k, 0, m)
    comps = np.array([ksharp.components[i] * b for i in range(m.n)] + [None], dtype=object)[:-1]
    comps[t_index] = comps[t_index] + a
    return TensorField(chart, (CON,), comps)


def decompose_typeN(m: MetricField, k: TensorField | None = None, *, t_index: int | None = None
                    ) -> TypeNDecomposition:
    """Write ``nabla C`` as ``4 k_r k_[a B_b][d k_c]`` for a null ``k``.

    ``B_bd = -l^r l^a l^c nabla_r C_abcd`` with ``l`` from
    :func:`transverse_null`; the reconstruction is then checked exactly.
    Raises :class:`TypeNError` when the hypotheses fail or the residual is
    nonzero.
    """
    curv = m.curvature
    if not curv.ricci.is_zero():
        raise TypeNError("metric is not Ricci-flat")
    if not curv.nabla_k(2).is_zero():
        raise TypeNError("metric is not 2-symmetric")
    if k is None:
        if "k" not in m.candidates:
            raise TypeNError("no null candidate attached to the metric; pass k explicitly")
        k = m.candidates["k"]
    if k.valence == (CON,):
        k = lower_index(k, 0, m)
    if not _norm(k, m).is_zero():
        raise TypeNError("candidate k is not null")
    ell = transverse_null(k, m, t_index)
    dC = curv.nabla_weyl
    B = einsum("r,a,c,rabcd->bd", ell, ell, ell, dC) * -1
    recon = typeN_form(k, B)
    residual = dC - recon
    ksharp = raise_index(k, 0, m)
    kB = einsum("d,bd->b", ksharp, B)
    tr = einsum("bd,bd->", m.inverse_tensor, B).scalar()
    sym_ok = all(B[i, j] == B[j, i] for i in range(m.n) for j in range(i))
    dec = TypeNDecomposition(k, ell, B, residual, kB.is_zero(), tr.is_zero(), sym_ok)
    if not dec.success:
        raise TypeNError(f"reconstruction residual is nonzero at {residual.first_nonzero()}", dec)
    return dec


# theorem instances -------------------------------------------------------------


def theorem_checks(m: MetricField, verdict: HierarchyVerdict, findings: list[ParallelFinding] | None = None
                   ) -> list[tuple[str, str, str]]:
    """Evaluate the structural theorems on this metric.

    Returns ``(name, status, detail)`` with status ``pass``, ``fail`` or
    ``n/a`` (hypotheses not met).
    """
    out = []
    if verdict.semi_symmetric and verdict.generic_nonsingular:
        ok = verdict.constant_curvature
        out.append(("semi_symmetric_nonsingular_implies_constant_curvature", "pass" if ok else "fail",
                    "semi-symmetric with det != 0"))
    else:
        out.append(("semi_symmetric_nonsingular_implies_constant_curvature", "n/a",
                    "semi-symmetric" if verdict.semi_symmetric else "not semi-symmetric"))
    if m.lorentzian and verdict.two_symmetric and not verdict.locally_symmetric:
        if findings is None:
            findings = parallel_candidates(m)
        null_parallel = [f.name for f in findings if f.null and f.parallel]
        out.append(("two_symmetric_lorentzian_has_parallel_null",
                    "pass" if null_parallel else "fail",
                    ("verified " + ",".join(null_parallel)) if null_parallel else "no parallel null candidate"))
    else:
        out.append(("two_symmetric_lorentzian_has_parallel_null", "n/a",
                    "locally symmetric or not 2-symmetric" if m.lorentzian else "not Lorentzian"))
    return out
