"""Constructors for the standard metric families.

All components are exact rational functions.  Coordinates default to
``(t, x1, ..., x_{n-1})`` for flat and constant-curvature metrics and to
``(u, v, x1, ..., x_{n-2})`` for Brinkmann metrics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .expr import Expression
from .geometry import COV, Chart, GeometryError, MetricField, TensorField

__all__ = [
    "ZooError",
    "flat",
    "brinkmann",
    "plane_wave",
    "constant_curvature",
    "product",
    "flat_extension",
    "FAMILIES",
]


class ZooError(GeometryError):
    pass


def _default_names(n: int, lorentzian: bool, prefix: str = "x") -> tuple[str, ...]:
    if lorentzian:
        return ("t",) + tuple(f"{prefix}{i}" for i in range(1, n))
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def _as_expr(value, chart: Chart) -> Expression:
    if isinstance(value, Expression):
        if value.variables != chart.names:
            return value.with_variables(chart.names)
        return value
    if isinstance(value, str):
        return chart.parse(value)
    return chart.const(Fraction(value))


def _zero_matrix(chart: Chart):
    return [[chart.zero() for _ in range(chart.n)] for _ in range(chart.n)]


def flat(n: int, *, lorentzian: bool = True, names: Sequence[str] | None = None) -> MetricField:
    """Minkowski space (or Euclidean space when ``lorentzian=False``)."""
    chart = Chart(tuple(names) if names else _default_names(n, lorentzian))
    if chart.n != n:
        raise ZooError("number of names does not match n")
    g = _zero_matrix(chart)
    for i in range(n):
        g[i][i] = chart.const(-1 if (lorentzian and i == 0) else 1)
    return MetricField(chart, g, lorentzian=lorentzian, name="flat",
                       family={"family": "flat", "n": n, "lorentzian": lorentzian})


def _brinkmann_names(n: int, names):
    if names:
        return tuple(names)
    return ("u", "v") + tuple(f"x{i}" for i in range(1, n - 1))


def brinkmann(n: int, H, W: Sequence | None = None, gij=None, *, names: Sequence[str] | None = None,
              probe=None, name: str = "brinkmann", family: dict | None = None) -> MetricField:
    """``ds^2 = -2 du (dv + H du + W_i dx^i) + g_ij dx^i dx^j``.

    Coordinates are ``(u, v, x^i)``.  ``H``, ``W`` and ``gij`` must not depend
    on ``v``.  The covector ``k = -du`` is attached as candidate ``"k"``.
    """
    if n < 3:
        raise ZooError("Brinkmann metrics need n >= 3")
    chart = Chart(_brinkmann_names(n, names))
    if chart.n != n:
        raise ZooError("number of names does not match n")
    m = n - 2
    H = _as_expr(H, chart)
    W = [_as_expr(w, chart) for w in (W if W is not None else [0] * m)]
    if len(W) != m:
        raise ZooError(f"W needs {m} components")
    if gij is None:
        gij = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    G = [[_as_expr(x, chart) for x in row] for row in gij]
    if len(G) != m or any(len(r) != m for r in G):
        raise ZooError(f"transverse metric must be {m}x{m}")
    data = [("H", H)] + [(f"W{i + 1}", w) for i, w in enumerate(W)] + [
        (f"g{i + 1}{j + 1}", G[i][j]) for i in range(m) for j in range(m)]
    for label, e in data:
        if not e._diff_index(1).is_zero():
            raise ZooError(f"{label} depends on {chart.names[1]}")
    for i in range(m):
        for j in range(i):
            if G[i][j] != G[j][i]:
                raise ZooError("transverse metric is not symmetric")
    g = _zero_matrix(chart)
    g[0][1] = g[1][0] = chart.const(-1)
    g[0][0] = H * -2
    for i in range(m):
        g[0][2 + i] = g[2 + i][0] = -W[i]
        for j in range(m):
            g[2 + i][2 + j] = G[i][j]
    k = TensorField.from_sparse(chart, (COV,), {(0,): chart.const(-1)})
    try:
        return MetricField(chart, g, lorentzian=True, probe=probe, name=name, candidates={"k": k},
                           family=family or {"family": "brinkmann", "n": n})
    except GeometryError as err:
        raise ZooError(str(err)) from err


def plane_wave(n: int, a, *, names: Sequence[str] | None = None, probe=None) -> MetricField:
    """Plane wave ``H = a_ij(u) x^i x^j`` with ``W = 0`` and flat transverse metric.

    ``a`` is a symmetric ``(n-2)x(n-2)`` matrix of polynomials in ``u``
    (strings, numbers or Expressions).
    """
    chart = Chart(_brinkmann_names(n, names))
    m = n - 2
    A = [[_as_expr(x, chart) for x in row] for row in a]
    if len(A) != m or any(len(r) != m for r in A):
        raise ZooError(f"a must be {m}x{m}")
    u = chart.names[0]
    for i in range(m):
        for j in range(m):
            e = A[i][j]
            if A[j][i] != e:
                raise ZooError("a is not symmetric")
            if not e.is_polynomial() or any(v != u for v in e.free_variables()):
                raise ZooError(f"a[{i}][{j}] must be a polynomial in {u} only")
    H = chart.zero()
    for i in range(m):
        for j in range(m):
            if not A[i][j].is_zero():
                H = H + A[i][j] * chart.coord(chart.names[2 + i]) * chart.coord(chart.names[2 + j])
    degrees = [A[i][j].degree_in(u) for i in range(m) for j in range(m) if not A[i][j].is_zero()]
    d = max(degrees) if degrees else -1
    fam = {
        "family": "plane_wave",
        "n": n,
        "a": [[str(x) for x in row] for row in A],
        "u_degree": d,
        "trace_free": (sum((A[i][i] for i in range(m)), chart.zero())).is_zero(),
    }
    return brinkmann(n, H, None, None, names=chart.names, probe=probe, name="plane_wave", family=fam)


def plane_wave_expected_symmetry(m: MetricField) -> int | None:
    """Smallest k with ``nabla^k R = 0`` implied by the u-degree of ``a``; None when flat."""
    fam = m.family or {}
    if fam.get("family") != "plane_wave":
        raise ZooError("not a plane wave")
    d = fam["u_degree"]
    return None if d < 0 else d + 1


def constant_curvature(n: int, K, *, lorentzian: bool = True, names: Sequence[str] | None = None,
                       probe=None) -> MetricField:
    """Conformally flat chart ``g = eta / (1 + K q / 4)^2`` with ``q = eta_ab x^a x^b``.

    Valid where ``1 + K q / 4 != 0``.  With ``lorentzian=False`` the flat
    metric ``eta`` is Euclidean.
    """
    chart = Chart(tuple(names) if names else _default_names(n, lorentzian))
    if chart.n != n:
        raise ZooError("number of names does not match n")
    K = Fraction(K)
    eta = [-1 if (lorentzian and i == 0) else 1 for i in range(n)]
    q = chart.zero()
    for i, s in enumerate(eta):
        x = chart.coord(chart.names[i])
        q = q + x * x * s
    omega = (chart.one() + q * (K / 4)) ** 2
    inv = omega.inverse()
    g = _zero_matrix(chart)
    for i, s in enumerate(eta):
        g[i][i] = inv * s
    return MetricField(chart, g, lorentzian=lorentzian, probe=probe, name="constant_curvature",
                       family={"family": "constant_curvature", "n": n, "K": str(K), "lorentzian": lorentzian})


def product(blocks: Sequence[MetricField], *, probe=None) -> MetricField:
    """Block-diagonal product metric on the concatenated chart."""
    if len(blocks) < 2:
        raise ZooError("a product needs at least two blocks")
    names: list[str] = []
    for b in blocks:
        clash = set(names) & set(b.chart.names)
        if clash:
            raise ZooError(f"coordinate name collision: {sorted(clash)}")
        names.extend(b.chart.names)
    timelike = [b for b in blocks if b.signature[0] > 0]
    if len(timelike) > 1:
        raise ZooError("more than one block carries a timelike direction")
    if timelike and timelike[0].signature[0] != 1:
        raise ZooError("the timelike block is not Lorentzian")
    chart = Chart(tuple(names))
    g = _zero_matrix(chart)
    offset = 0
    candidates = {}
    block_info = []
    probe_pt = []
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                g[offset + i][offset + j] = b.g[i, j].with_variables(chart.names)
        for key, c in b.candidates.items():
            entries = {(offset + idx[0],): e.with_variables(chart.names) for idx, e in c.nonzero()}
            candidates[key if key not in candidates else f"{key}@{b.name}"] = TensorField.from_sparse(
                chart, c.valence, entries)
        block_info.append((b.name or "block", b.chart.names))
        probe_pt.extend(b.probe)
        offset += b.n
    lorentzian = bool(timelike)
    fam = {"family": "product", "blocks": [b.family for b in blocks]}
    return MetricField(chart, g, lorentzian=lorentzian, probe=probe if probe is not None else probe_pt,
                       name="product", candidates=candidates, blocks=block_info, family=fam)


def flat_extension(block: MetricField, extra: int, *, timelike: bool = False,
                   names: Sequence[str] | None = None) -> MetricField:
    """Product of ``block`` with ``extra`` flat dimensions.

    With ``timelike=True`` the first extra coordinate is timelike, which
    requires ``block`` to be Riemannian.
    """
    if extra < 1:
        raise ZooError("extra must be positive")
    if names is None:
        names = [f"e{i}" for i in range(1, extra + 1)]
        if timelike:
            names[0] = "T"
    names = tuple(names)
    if len(names) != extra:
        raise ZooError("number of names does not match extra")
    chart = Chart(names) if extra >= 2 else None
    if chart is None:
        # a one-dimensional factor is not a Chart on its own; build the product directly
        return _extend_by_line(block, names[0], timelike)
    fl = flat(extra, lorentzian=timelike, names=names)
    return product([block, fl])


def _extend_by_line(block: MetricField, name: str, timelike: bool) -> MetricField:
    if name in block.chart.names:
        raise ZooError(f"coordinate name collision: {name}")
    if timelike and block.signature[0] > 0:
        raise ZooError("more than one block carries a timelike direction")
    chart = Chart(block.chart.names + (name,))
    n = chart.n
    g = _zero_matrix(chart)
    for i in range(block.n):
        for j in range(block.n):
            g[i][j] = block.g[i, j].with_variables(chart.names)
    g[n - 1][n - 1] = chart.const(-1 if timelike else 1)
    candidates = {}
    for key, c in block.candidates.items():
        candidates[key] = TensorField.from_sparse(
            chart, c.valence, {idx: e.with_variables(chart.names) for idx, e in c.nonzero()})
    lorentzian = timelike or block.signature[0] == 1
    return MetricField(chart, g, lorentzian=lorentzian, probe=tuple(block.probe) + (Fraction(1, 37),),
                       name="flat_extension", candidates=candidates,
                       blocks=[(block.name or "block", block.chart.names), ("flat", (name,))],
                       family={"family": "flat_extension", "block": block.family, "extra": 1,
                               "timelike": timelike})


FAMILIES = ("flat", "brinkmann", "plane_wave", "constant_curvature", "product", "flat_extension")
