import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symcurv import zoo
from symcurv.geometry import (
    CON,
    COV,
    Chart,
    GeometryError,
    MetricField,
    TensorField,
    antisym,
    contract,
    covariant_derivative,
    covariant_derivative_riemann_tail,
    einsum,
    gradient,
    lower_index,
    outer,
    raise_index,
    signature_at,
    sym,
)

from conftest import generic_metric


def test_chart_rejects_duplicates():
    with pytest.raises(GeometryError):
        Chart(("x", "x"))


def test_metric_inverse_exact(generic):
    prod = einsum("ab,bc->ca", generic.g_tensor, generic.inverse_tensor)
    assert prod.equals(generic.delta)


def test_metric_must_be_symmetric():
    with pytest.raises(GeometryError):
        MetricField(("t", "x"), [["-1", "x"], ["0", "1"]])


def test_degenerate_metric_rejected():
    with pytest.raises(GeometryError):
        MetricField(("t", "x"), [["1", "1"], ["1", "1"]], lorentzian=False)


def test_lorentzian_signature_checked():
    with pytest.raises(GeometryError):
        MetricField(("t", "x"), [["1", "0"], ["0", "1"]])
    m = MetricField(("t", "x"), [["1", "0"], ["0", "1"]], lorentzian=False)
    assert m.signature == (0, 2)


def test_signature_at_hand_case():
    # eigenvalues of [[0,1],[1,0]] are -1 and 1
    m = MetricField(("u", "v"), [["0", "1"], ["1", "0"]])
    assert signature_at(m.g, (Fraction(1, 3), Fraction(1, 5))) == (1, 1)


def test_raise_lower_round_trip(generic):
    c = generic.chart
    w = TensorField.from_function(c, (COV, COV), lambda i, j: c.parse(f"{c.names[i]}*{c.names[j]} + {i - j}"))
    up = raise_index(w, 1, generic)
    assert up.valence == (COV, CON)
    assert lower_index(up, 1, generic).equals(w)


def test_trace_of_delta_is_dimension(generic):
    assert einsum("aa->", generic.delta).scalar() == generic.chart.const(4)
    assert contract(generic.g_tensor, 0, 1, generic).scalar() == generic.chart.const(4)


def test_einsum_requires_valence_pairing(generic):
    with pytest.raises(GeometryError):
        einsum("ab,bc->ac", generic.g_tensor, generic.g_tensor)


def test_sym_antisym_split(generic):
    c = generic.chart
    t = TensorField.from_function(c, (COV, COV), lambda i, j: c.parse(f"{c.names[i]}^2 + {3 * i + j}"))
    assert (sym(t, (0, 1)) + antisym(t, (0, 1))).equals(t)
    assert antisym(sym(t, (0, 1)), (0, 1)).is_zero()


def test_outer_and_permute():
    c = Chart(("x", "y"))
    a = TensorField.from_sparse(c, (COV,), {(0,): c.coord("x")})
    b = TensorField.from_sparse(c, (COV,), {(1,): c.one()})
    ab = outer(a, b)
    assert ab[0, 1] == c.coord("x") and ab[1, 0].is_zero()
    assert ab.permute((1, 0))[1, 0] == c.coord("x")


@pytest.mark.parametrize("build", [generic_metric, lambda: zoo.constant_curvature(4, 1), lambda: zoo.plane_wave(
    4, [["u", "1"], ["1", "-u"]])])
def test_metric_compatibility(build):
    m = build()
    assert covariant_derivative(m.g_tensor, m).is_zero()
    assert covariant_derivative(m.inverse_tensor, m).is_zero()


def test_hessian_is_symmetric(generic):
    c = generic.chart
    f = c.parse("t^2*x + y/(1+z^2)")
    hess = covariant_derivative(gradient(f, c), generic)
    assert hess.equals(hess.permute((1, 0)))


def test_tail_derivative_matches_scatter(generic):
    R = generic.curvature.riemann_lower
    assert covariant_derivative_riemann_tail(R, generic).equals(covariant_derivative(R, generic))


def test_leibniz_for_covariant_derivative(generic):
    c = generic.chart
    a = gradient(c.parse("t*x"), c)
    b = gradient(c.parse("y^2 + z"), c)
    lhs = covariant_derivative(outer(a, b), generic)
    da, db = covariant_derivative(a, generic), covariant_derivative(b, generic)
    # outer(a, db) has slots (a, deriv, b); bring derivative slot first
    rhs = outer(da, b) + outer(a, db).permute((1, 0, 2))
    assert lhs.equals(rhs)


_entries = st.integers(-5, 5).filter(lambda k: k != 0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(_entries, st.integers(0, 3), st.integers(0, 3)), min_size=4, max_size=4),
       st.integers(0, 2**32))
def test_random_diagonal_metric_inverse(params, seed):
    names = ("t", "x", "y", "z")
    diag = []
    for i, (k, a, b) in enumerate(params):
        sign = "-" if i == 0 else ""
        diag.append(f"{sign}(1 + ({k})^2*{names[a]}^2*{names[b]}^2)")
    g = [[diag[i] if i == j else "0" for j in range(4)] for i in range(4)]
    m = MetricField(names, g)
    assert einsum("ab,bc->ca", m.g_tensor, m.inverse_tensor).equals(m.delta)
    rng = random.Random(seed)
    p = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
    prod = 1
    for i in range(4):
        prod *= m.g[i, i].evaluate(p)
    assert m.det.evaluate(p) == prod
