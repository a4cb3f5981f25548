"""Charts, metrics and dense tensor fields with exact components.

Components live in numpy object arrays of :class:`~symcurv.expr.Expression`.
Every slot carries a valence flag: ``"d"`` (covariant, lower) or ``"u"``
(contravariant, upper).  The covariant derivative prepends its derivative
slot, so ``covariant_derivative(t)[m, ...]`` is the component with
derivative index ``m``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, Sequence

import numpy as np

from .expr import Expression, PoleError, expr_sum, parse

COV = "d"
CON = "u"

__all__ = [
    "COV",
    "CON",
    "Chart",
    "MetricField",
    "TensorField",
    "GeometryError",
    "einsum",
    "raise_index",
    "lower_index",
    "contract",
    "sym",
    "antisym",
    "covariant_derivative",
    "outer",
]

DEFAULT_PROBE = (
    Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), Fraction(1, 11), Fraction(1, 13),
    Fraction(1, 17), Fraction(1, 19), Fraction(1, 23), Fraction(1, 29), Fraction(1, 31),
)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 2:
            raise GeometryError("a chart needs at least two coordinates")
        if len(set(self.names)) != len(self.names):
            raise GeometryError(f"duplicate coordinate names in {self.names}")

    @property
    def n(self) -> int:
        return len(self.names)

    def zero(self) -> Expression:
        return _zero(self.names)

    def one(self) -> Expression:
        return Expression.one(self.names)

    def const(self, value) -> Expression:
        return Expression.constant(value, self.names)

    def coord(self, name: str) -> Expression:
        return Expression.variable(name, self.names)

    def parse(self, text: str) -> Expression:
        return parse(text, self.names)

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.n:
                raise GeometryError(f"coordinate index {name_or_index} out of range")
            return name_or_index
        return self.names.index(name_or_index)


_ZEROS: dict[tuple[str, ...], Expression] = {}


def _zero(names: tuple[str, ...]) -> Expression:
    z = _ZEROS.get(names)
    if z is None:
        z = _ZEROS[names] = Expression.zero(names)
    return z


def _full(shape, fill) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(fill)
    return arr


_SYMMETRY_CHECKS: dict[str, Callable[[np.ndarray], bool]] = {}


def _check_symmetric2(c):
    return c.ndim == 2 and all(c[i, j] == c[j, i] for i in range(c.shape[0]) for j in range(i))


def _check_antisymmetric2(c):
    return c.ndim == 2 and all(c[i, j] == -c[j, i] for i in range(c.shape[0]) for j in range(i + 1))


def _check_riemann(c):
    if c.ndim != 4:
        return False
    n = c.shape[0]
    for a, b, g, d in itertools.product(range(n), repeat=4):
        x = c[a, b, g, d]
        if x != -c[b, a, g, d] or x != -c[a, b, d, g] or x != c[g, d, a, b]:
            return False
        if (x + c[a, g, d, b] + c[a, d, b, g]).is_zero() is False:
            return False
    return True


_SYMMETRY_CHECKS.update(symmetric2=_check_symmetric2, antisymmetric2=_check_antisymmetric2, riemann=_check_riemann)


class TensorField:
    """Dense tensor field over a chart.

    ``valence`` is a tuple of ``"d"``/``"u"`` flags, one per slot.  An
    optional ``symmetry`` tag ("symmetric2", "antisymmetric2", "riemann") is
    checked exactly when the field is built.
    """

    __slots__ = ("chart", "valence", "components", "symmetry", "_nz")

    def __init__(self, chart: Chart, valence: Sequence[str], components, symmetry: str | None = None):
        valence = tuple(valence)
        if any(v not in (COV, CON) for v in valence):
            raise GeometryError(f"bad valence {valence}; use 'd' or 'u'")
        comps = np.asarray(components, dtype=object) if not isinstance(components, np.ndarray) else components
        if comps.shape != (chart.n,) * len(valence):
            raise GeometryError(f"component shape {comps.shape} does not match rank {len(valence)} on n={chart.n}")
        self.chart = chart
        self.valence = valence
        self.components = comps
        self.symmetry = symmetry
        self._nz = None
        if symmetry is not None:
            check = _SYMMETRY_CHECKS.get(symmetry)
            if check is None:
                raise GeometryError(f"unknown symmetry tag {symmetry!r}")
            if not check(comps):
                raise GeometryError(f"components do not have the declared {symmetry} symmetry")

    @classmethod
    def zeros(cls, chart: Chart, valence: Sequence[str]) -> "TensorField":
        return cls(chart, valence, _full((chart.n,) * len(valence), chart.zero()))

    @classmethod
    def from_function(cls, chart: Chart, valence: Sequence[str], fn) -> "TensorField":
        shape = (chart.n,) * len(valence)
        comps = np.empty(shape, dtype=object)
        for idx in itertools.product(range(chart.n), repeat=len(valence)):
            comps[idx] = fn(*idx)
        return cls(chart, valence, comps)

    @classmethod
    def from_sparse(cls, chart: Chart, valence: Sequence[str], entries: dict) -> "TensorField":
        comps = _full((chart.n,) * len(valence), chart.zero())
        for idx, value in entries.items():
            if not isinstance(value, Expression):
                value = chart.parse(value) if isinstance(value, str) else chart.const(value)
            comps[tuple(idx)] = value
        return cls(chart, valence, comps)

    @property
    def rank(self) -> int:
        return len(self.valence)

    @property
    def n(self) -> int:
        return self.chart.n

    def __getitem__(self, idx):
        return self.components[idx]

    def nonzero(self) -> list[tuple[tuple[int, ...], Expression]]:
        """Nonzero components as ``(index, value)`` in lexicographic index order."""
        if self._nz is None:
            if self.rank == 0:
                e = self.components[()]
                self._nz = [] if e.is_zero() else [((), e)]
            else:
                flat = self.components.ravel()
                shape = self.components.shape
                self._nz = [
                    (tuple(int(i) for i in np.unravel_index(k, shape)), e)
                    for k, e in enumerate(flat) if not e.is_zero()
                ]
        return self._nz

    def is_zero(self) -> bool:
        return not self.nonzero()

    def first_nonzero(self) -> tuple[int, ...] | None:
        nz = self.nonzero()
        return nz[0][0] if nz else None

    def scalar(self) -> Expression:
        if self.rank != 0:
            raise GeometryError("not a scalar")
        return self.components[()]

    def _check_same(self, other: "TensorField"):
        if not isinstance(other, TensorField):
            raise TypeError("expected a TensorField")
        if other.chart != self.chart or other.valence != self.valence:
            raise GeometryError(f"incompatible tensors: {self.valence} vs {other.valence}")

    def __add__(self, other):
        self._check_same(other)
        return TensorField(self.chart, self.valence, self.components + other.components)

    def __sub__(self, other):
        self._check_same(other)
        return TensorField(self.chart, self.valence, self.components - other.components)

    def __neg__(self):
        return TensorField(self.chart, self.valence, -self.components)

    def __mul__(self, factor):
        if isinstance(factor, TensorField):
            return outer(self, factor)
        if isinstance(factor, (int, Fraction)):
            if factor == 0:
                return TensorField.zeros(self.chart, self.valence)
            if factor == 1:
                return self
        return TensorField(self.chart, self.valence, _scale(self.components, factor))

    __rmul__ = __mul__

    def equals(self, other: "TensorField") -> bool:
        return (self - other).is_zero()

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return self.chart == other.chart and self.valence == other.valence and self.equals(other)

    __hash__ = None

    def map(self, fn) -> "TensorField":
        out = np.empty(self.components.shape, dtype=object)
        for idx in itertools.product(range(self.n), repeat=self.rank):
            out[idx] = fn(self.components[idx])
        return TensorField(self.chart, self.valence, out)

    def permute(self, order: Sequence[int]) -> "TensorField":
        """New tensor whose slot ``i`` is this tensor's slot ``order[i]``."""
        order = tuple(order)
        return TensorField(self.chart, tuple(self.valence[i] for i in order), self.components.transpose(order))

    def evaluate(self, point) -> np.ndarray:
        """Exact component values (Fractions) at a point."""
        out = np.empty(self.components.shape, dtype=object)
        for idx in itertools.product(range(self.n), repeat=self.rank):
            out[idx] = self.components[idx].evaluate(point)
        return out

    def __repr__(self):
        return f"TensorField(valence={''.join(self.valence)}, n={self.n}, nonzero={len(self.nonzero())})"


def _scale(comps: np.ndarray, factor) -> np.ndarray:
    out = np.empty(comps.shape, dtype=object)
    flat_in = comps.ravel()
    flat_out = out.ravel()
    for k, e in enumerate(flat_in):
        flat_out[k] = e if e.is_zero() else e * factor
    return out


def outer(a: TensorField, b: TensorField) -> TensorField:
    """Tensor product; slots of ``a`` come first."""
    if a.chart != b.chart:
        raise GeometryError("tensors live on different charts")
    zero = a.chart.zero()
    comps = _full((a.n,) * (a.rank + b.rank), zero)
    for ia, ea in a.nonzero():
        for ib, eb in b.nonzero():
            comps[ia + ib] = ea * eb
    return TensorField(a.chart, a.valence + b.valence, comps)


# einsum ---------------------------------------------------------------------


def _parse_subscripts(spec: str, nops: int):
    spec = spec.replace(" ", "")
    if "->" not in spec:
        raise GeometryError("einsum subscripts need an explicit '->' output")
    lhs, out = spec.split("->")
    ins = lhs.split(",")
    if len(ins) != nops:
        raise GeometryError(f"einsum expects {len(ins)} operands, got {nops}")
    return ins, out


def _trace_single(labels: str, t: TensorField):
    """Contract labels repeated within a single operand."""
    seen: dict[str, int] = {}
    pairs = []
    for i, lab in enumerate(labels):
        if lab in seen:
            pairs.append((seen.pop(lab), i))
        else:
            seen[lab] = i
    if not pairs:
        return labels, t.valence, t.nonzero()
    for i, j in pairs:
        if t.valence[i] == t.valence[j]:
            raise GeometryError(f"cannot trace two {t.valence[i]!r} slots ('{labels[i]}')")
    keep = [i for i in range(len(labels)) if all(i not in p for p in pairs)]
    acc: dict[tuple, list] = defaultdict(list)
    for idx, e in t.nonzero():
        if all(idx[i] == idx[j] for i, j in pairs):
            acc[tuple(idx[k] for k in keep)].append(e)
    entries = [(k, expr_sum(v, t.chart.names)) for k, v in acc.items()]
    entries = [(k, e) for k, e in entries if not e.is_zero()]
    return "".join(labels[k] for k in keep), tuple(t.valence[k] for k in keep), entries


def _pair(la, va, ea, lb, vb, eb, keep: set, names):
    shared = [c for c in la if c in lb]
    for c in shared:
        if c in keep:
            if va[la.index(c)] != vb[lb.index(c)]:
                raise GeometryError(f"label '{c}' kept with mixed valence")
        elif va[la.index(c)] == vb[lb.index(c)]:
            raise GeometryError(f"label '{c}' contracts two {va[la.index(c)]!r} slots")
    out_labels = [c for c in la if c in keep] + [c for c in lb if c in keep and c not in la]
    out_val = tuple(
        va[la.index(c)] if c in la else vb[lb.index(c)] for c in out_labels
    )
    a_sh = [la.index(c) for c in shared]
    b_sh = [lb.index(c) for c in shared]
    src = []  # for each out label: (operand, position)
    for c in out_labels:
        src.append((0, la.index(c)) if c in la else (1, lb.index(c)))
    buckets: dict[tuple, list] = defaultdict(list)
    for idx, e in eb:
        buckets[tuple(idx[k] for k in b_sh)].append((idx, e))
    acc: dict[tuple, list] = defaultdict(list)
    for ia, xa in ea:
        key = tuple(ia[k] for k in a_sh)
        for ib, xb in buckets.get(key, ()):
            oi = tuple(ia[p] if o == 0 else ib[p] for o, p in src)
            acc[oi].append(xa * xb)
    entries = []
    for k, v in acc.items():
        s = v[0] if len(v) == 1 else expr_sum(v, names)
        if not s.is_zero():
            entries.append((k, s))
    return "".join(out_labels), out_val, entries


def einsum(spec: str, *tensors: TensorField) -> TensorField:
    """Sparse exact Einstein summation, e.g. ``einsum("ab,bc->ac", g, h)``.

    Every contracted label must pair one ``"u"`` slot with one ``"d"`` slot;
    mismatched pairs raise :class:`GeometryError`.  Labels are single
    characters.
    """
    if not tensors:
        raise GeometryError("einsum needs at least one tensor")
    chart = tensors[0].chart
    if any(t.chart != chart for t in tensors):
        raise GeometryError("tensors live on different charts")
    ins, out = _parse_subscripts(spec, len(tensors))
    for labels, t in zip(ins, tensors):
        if len(labels) != t.rank:
            raise GeometryError(f"subscript '{labels}' does not match rank {t.rank}")
    ops = [_trace_single(l, t) for l, t in zip(ins, tensors)]
    lab, val, ent = ops[0]
    for i in range(1, len(ops)):
        later = set(out) | set("".join(o[0] for o in ops[i + 1:]))
        lb, vb, eb = ops[i]
        lab, val, ent = _pair(lab, val, ent, lb, vb, eb, later, chart.names)
    if sorted(lab) != sorted(out) or len(set(out)) != len(out):
        raise GeometryError(f"output '{out}' does not match free labels '{lab}'")
    perm = [lab.index(c) for c in out]
    comps = _full((chart.n,) * len(out), chart.zero())
    for idx, e in ent:
        comps[tuple(idx[p] for p in perm)] = e
    return TensorField(chart, tuple(val[p] for p in perm), comps)


# metric -------------------------------------------------------------------


def _gauss_jordan(mat: list[list[Expression]], chart: Chart):
    """Inverse and determinant of a square Expression matrix."""
    n = len(mat)
    a = [list(row) for row in mat]
    inv = [[chart.one() if i == j else chart.zero() for j in range(n)] for i in range(n)]
    det = chart.one()
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                if pivot is None or (a[r][col].is_constant() and not a[pivot][col].is_constant()):
                    pivot = r
        if pivot is None:
            return None, chart.zero()
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            det = -det
        p = a[col][col]
        det = det * p
        pinv = p.inverse()
        a[col] = [x if x.is_zero() else x * pinv for x in a[col]]
        inv[col] = [x if x.is_zero() else x * pinv for x in inv[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero():
                continue
            f = a[r][col]
            a[r] = [x - f * y if not y.is_zero() else x for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y if not y.is_zero() else x for x, y in zip(inv[r], inv[col])]
    return inv, det


def determinant(mat: list[list[Expression]], chart: Chart) -> Expression:
    return _gauss_jordan(mat, chart)[1]


def signature_at(g: np.ndarray, point) -> tuple[int, int]:
    """(negative, positive) eigenvalue counts of the metric at a rational point."""
    vals = np.array([[float(e.evaluate(point)) for e in row] for row in g], dtype=float)
    eig = np.linalg.eigvalsh(vals)
    if np.any(np.abs(eig) <= 1e-9 * max(1.0, float(np.max(np.abs(eig))))):
        raise GeometryError(f"metric is degenerate (to 1e-9) at the probe point {tuple(map(str, point))}")
    return int(np.sum(eig < 0)), int(np.sum(eig > 0))


class MetricField:
    """A nondegenerate symmetric metric with exact inverse and determinant.

    ``lorentzian=True`` asserts signature (-,+,...,+); it is checked at the
    probe point only.  ``candidates`` holds named covector fields that are
    natural parallel-field candidates (e.g. ``k = -du`` for Brinkmann
    metrics); ``blocks`` records a product structure when one is known.
    """

    def __init__(
        self,
        chart: Chart | Sequence[str],
        g,
        *,
        lorentzian: bool = True,
        probe: Sequence | None = None,
        name: str = "",
        candidates: dict[str, TensorField] | None = None,
        blocks: list[tuple[str, tuple[str, ...]]] | None = None,
        family: dict | None = None,
    ):
        if not isinstance(chart, Chart):
            chart = Chart(tuple(chart))
        self.chart = chart
        n = chart.n
        rows = []
        for row in g:
            rows.append([e if isinstance(e, Expression) else
                         (chart.parse(e) if isinstance(e, str) else chart.const(e)) for e in row])
        if len(rows) != n or any(len(r) != n for r in rows):
            raise GeometryError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise GeometryError(f"metric is not symmetric at ({i},{j})")
        self.g = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                self.g[i, j] = rows[i][j]
        inv, det = _gauss_jordan(rows, chart)
        if inv is None or det.is_zero():
            raise GeometryError("metric determinant vanishes identically")
        self.inverse = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                self.inverse[i, j] = inv[i][j]
        self.det = det
        self.lorentzian = lorentzian
        self.name = name
        self.candidates = dict(candidates or {})
        self.blocks = list(blocks or [])
        self.family = family
        self.probe, self.signature = self._probe(probe)
        if lorentzian and self.signature[0] != 1:
            raise GeometryError(
                f"metric declared Lorentzian but has signature {self.signature} at the probe point")

    def _probe(self, probe):
        n = self.chart.n
        tries = [tuple(Fraction(p) for p in probe)] if probe is not None else [
            tuple(DEFAULT_PROBE[i] * k for i in range(n)) for k in (1, 2, 3, 5)
        ]
        last = None
        for point in tries:
            if len(point) != n:
                raise GeometryError(f"probe point needs {n} coordinates")
            try:
                return point, signature_at(self.g, point)
            except (PoleError, GeometryError) as err:
                last = err
        raise GeometryError(f"no usable probe point: {last}")

    @property
    def n(self) -> int:
        return self.chart.n

    @cached_property
    def g_tensor(self) -> TensorField:
        return TensorField(self.chart, (COV, COV), self.g, symmetry="symmetric2")

    @cached_property
    def inverse_tensor(self) -> TensorField:
        return TensorField(self.chart, (CON, CON), self.inverse)

    @cached_property
    def delta(self) -> TensorField:
        c = self.chart
        return TensorField.from_function(c, (CON, COV), lambda i, j: c.one() if i == j else c.zero())

    @cached_property
    def christoffel(self) -> TensorField:
        from .curvature import christoffel

        return christoffel(self)

    @cached_property
    def curvature(self):
        from .curvature import CurvaturePack

        return CurvaturePack(self)

    def equals(self, other: "MetricField") -> bool:
        return self.chart == other.chart and all(
            self.g[i, j] == other.g[i, j] for i in range(self.n) for j in range(self.n))

    def components_text(self) -> dict[tuple[int, int], str]:
        """Lower-triangular nonzero components as expression strings."""
        return {(i, j): str(self.g[i, j]) for i in range(self.n) for j in range(i + 1)
                if not self.g[i, j].is_zero()}

    def __repr__(self):
        label = self.name or "metric"
        return f"MetricField({label}, coords={','.join(self.chart.names)})"


# index gymnastics ----------------------------------------------------------

_LABELS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _contract_slot(t: TensorField, slot: int, mat: TensorField) -> TensorField:
    if not 0 <= slot < t.rank:
        raise GeometryError(f"slot {slot} out of range for rank {t.rank}")
    labels = _LABELS[: t.rank]
    new = "Z"
    spec = f"{new}{labels[slot]},{labels}->{labels[:slot]}{new}{labels[slot + 1:]}"
    return einsum(spec, mat, t)


def raise_index(t: TensorField, slot: int, metric: MetricField) -> TensorField:
    if not 0 <= slot < t.rank:
        raise GeometryError(f"slot {slot} out of range for rank {t.rank}")
    if t.valence[slot] != COV:
        raise GeometryError(f"slot {slot} is already contravariant")
    return _contract_slot(t, slot, metric.inverse_tensor)


def lower_index(t: TensorField, slot: int, metric: MetricField) -> TensorField:
    if not 0 <= slot < t.rank:
        raise GeometryError(f"slot {slot} out of range for rank {t.rank}")
    if t.valence[slot] != CON:
        raise GeometryError(f"slot {slot} is already covariant")
    return _contract_slot(t, slot, metric.g_tensor)


def with_valence(t: TensorField, valence: Sequence[str], metric: MetricField) -> TensorField:
    """Raise/lower slots as needed to reach the requested valence."""
    valence = tuple(valence)
    if len(valence) != t.rank:
        raise GeometryError("valence length does not match rank")
    for s, (have, want) in enumerate(zip(t.valence, valence)):
        if have != want:
            t = raise_index(t, s, metric) if want == CON else lower_index(t, s, metric)
    return t


def contract(t: TensorField, slot_a: int, slot_b: int, metric: MetricField | None = None) -> TensorField:
    """Trace over two slots; same-valence pairs are traced through the metric."""
    if slot_a == slot_b or not (0 <= slot_a < t.rank and 0 <= slot_b < t.rank):
        raise GeometryError(f"invalid slot pair ({slot_a}, {slot_b})")
    if t.valence[slot_a] == t.valence[slot_b]:
        if metric is None:
            raise GeometryError("same-valence contraction needs a metric")
        t = raise_index(t, slot_a, metric) if t.valence[slot_a] == COV else lower_index(t, slot_a, metric)
    labels = list(_LABELS[: t.rank])
    labels[slot_b] = labels[slot_a]
    out = "".join(l for k, l in enumerate(labels) if k not in (slot_a, slot_b))
    return einsum("".join(labels) + "->" + out, t)


def _symmetrize(t: TensorField, slots: Sequence[int], signed: bool) -> TensorField:
    slots = list(slots)
    if len(set(slots)) != len(slots) or any(not 0 <= s < t.rank for s in slots):
        raise GeometryError(f"invalid slot set {slots}")
    if len({t.valence[s] for s in slots}) > 1:
        raise GeometryError("(anti)symmetrization over mixed-valence slots")
    k = len(slots)
    if k < 2:
        return t
    acc = None
    for perm in itertools.permutations(range(k)):
        axes = list(range(t.rank))
        for i, p in enumerate(perm):
            axes[slots[i]] = slots[p]
        arr = t.components.transpose(axes)
        if signed and _parity(perm):
            arr = -arr
        acc = arr.copy() if acc is None else acc + arr
    return TensorField(t.chart, t.valence, _scale(acc, Fraction(1, math.factorial(k))))


def _parity(perm) -> int:
    perm = list(perm)
    parity = 0
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            parity ^= 1
    return parity


def sym(t: TensorField, slots: Sequence[int]) -> TensorField:
    """Normalized symmetrization over the given slots (weight 1/k!)."""
    return _symmetrize(t, slots, signed=False)


def antisym(t: TensorField, slots: Sequence[int]) -> TensorField:
    """Normalized antisymmetrization over the given slots (weight 1/k!)."""
    return _symmetrize(t, slots, signed=True)


# covariant derivative -------------------------------------------------------


def _connection_tables(gamma: TensorField):
    """Index the nonzero Christoffels Γ^a_{mb} by their upper index and by their last lower index."""
    by_upper: dict[int, list] = defaultdict(list)
    by_lower: dict[int, list] = defaultdict(list)
    for (a, m, b), e in gamma.nonzero():
        by_upper[a].append((m, b, e))
        by_lower[b].append((a, m, e))
    return by_upper, by_lower


def covariant_derivative(t: TensorField, metric: MetricField) -> TensorField:
    """Levi-Civita covariant derivative with the derivative index first."""
    chart = t.chart
    n = chart.n
    names = chart.names
    gamma = metric.christoffel
    cache = getattr(metric, "_conn_tables", None)
    if cache is None:
        cache = _connection_tables(gamma)
        metric._conn_tables = cache
    by_upper, by_lower = cache
    acc: dict[tuple, list] = defaultdict(list)
    for idx, e in t.nonzero():
        for m in range(n):
            d = e._diff_index(m)
            if not d.is_zero():
                acc[(m,) + idx].append(d)
        for s, kind in enumerate(t.valence):
            r = idx[s]
            if kind == COV:
                # -Γ^r_{m a} t_{..r..} lands on slot value a
                for m, a, g in by_upper.get(r, ()):
                    acc[(m,) + idx[:s] + (a,) + idx[s + 1:]].append(-(g * e))
            else:
                # +Γ^a_{m r} t^{..r..} lands on slot value a
                for a, m, g in by_lower.get(r, ()):
                    acc[(m,) + idx[:s] + (a,) + idx[s + 1:]].append(g * e)
    comps = _full((n,) * (t.rank + 1), chart.zero())
    for k, v in acc.items():
        s = v[0] if len(v) == 1 else expr_sum(v, names)
        if not s.is_zero():
            comps[k] = s
    return TensorField(chart, (COV,) + t.valence, comps)


def _riemann_tail_canonical(n: int):
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return [(p + q) for i, p in enumerate(pairs) for q in pairs[i:]]


def _riemann_tail_images(idx):
    """Index images of a canonical tail ``(a,b,c,d)`` with their signs."""
    a, b, c, d = idx
    out = []
    for (p, q) in (((a, b), (c, d)), ((c, d), (a, b))):
        for s1, p2 in ((1, p), (-1, p[::-1])):
            for s2, q2 in ((1, q), (-1, q[::-1])):
                out.append((p2 + q2, s1 * s2))
    return out


def covariant_derivative_riemann_tail(t: TensorField, metric: MetricField) -> TensorField:
    """Covariant derivative of a covariant tensor whose last four slots have the Riemann pair symmetries.

    Only components with canonical tails are computed; the rest are filled by
    antisymmetry within each pair and symmetry under pair exchange.
    """
    chart = t.chart
    n = chart.n
    names = chart.names
    if t.rank < 4 or any(v != COV for v in t.valence):
        raise GeometryError("expected an all-covariant tensor of rank >= 4")
    gamma = metric.christoffel
    cache = getattr(metric, "_conn_gather", None)
    if cache is None:
        # (m, a) -> [(r, G^r_{ma})]
        cache = defaultdict(list)
        for (r, m, a), e in gamma.nonzero():
            cache[(m, a)].append((r, e))
        metric._conn_gather = cache
    comps_in = t.components
    head_rank = t.rank - 4
    tails = _riemann_tail_canonical(n)
    out = _full((n,) * (t.rank + 1), chart.zero())
    for head in itertools.product(range(n), repeat=head_rank + 1):
        m = head[0]
        rest = head[1:]
        for tail in tails:
            idx = rest + tail
            terms = []
            e = comps_in[idx]
            if not e.is_zero():
                d = e._diff_index(m)
                if not d.is_zero():
                    terms.append(d)
            for s in range(t.rank):
                for r, g in cache.get((m, idx[s]), ()):
                    x = comps_in[idx[:s] + (r,) + idx[s + 1:]]
                    if not x.is_zero():
                        terms.append(-(g * x))
            if not terms:
                continue
            val = terms[0] if len(terms) == 1 else expr_sum(terms, names)
            if val.is_zero():
                continue
            for img, sign in _riemann_tail_images(tail):
                out[head + img] = val if sign > 0 else -val
    return TensorField(chart, (COV,) + t.valence, out)


def gradient(f: Expression, chart: Chart) -> TensorField:
    return TensorField(chart, (COV,), np.array([f._diff_index(i) for i in range(chart.n)] + [None], dtype=object)[:-1])


def is_constant_field(f: Expression) -> bool:
    return all(f._diff_index(i).is_zero() for i in range(len(f.variables)))


def iter_indices(n: int, rank: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(n), repeat=rank)
