from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symcurv import classify as cl
from symcurv import zoo
from symcurv.geometry import CON, COV, TensorField, covariant_derivative, einsum, outer

from conftest import pw4


@pytest.fixture(scope="module")
def pw():
    return pw4()


@pytest.fixture(scope="module")
def minkowski():
    return zoo.flat(4)


def _diag(chart, *values):
    return TensorField.from_function(chart, (COV, COV),
                                     lambda i, j: chart.const(values[i]) if i == j else chart.zero())


# -- hierarchy ---------------------------------------------------------------


def test_linear_plane_wave_hierarchy(pw):
    v = cl.classify_hierarchy(pw, kmax=3)
    assert v.two_symmetric and not v.locally_symmetric and v.k_symmetric == 2
    assert v.semi_symmetric and not v.constant_curvature and not v.recurrent
    assert v.weyl.two_symmetric and v.ricci.vanishes
    names = [n for n, _ in v.chain()]
    assert names[0] == "constant_curvature"


def test_constant_curvature_hierarchy():
    m = zoo.constant_curvature(4, Fraction(-1, 2))
    v = cl.classify_hierarchy(m, kmax=2)
    assert v.constant_curvature and v.curvature_constant == m.chart.const(Fraction(-1, 2))
    assert v.locally_symmetric and v.semi_symmetric and v.einstein and v.generic_nonsingular
    assert v.k_symmetric == 1


def test_generic_metric_has_no_symmetry(generic):
    v = cl.classify_hierarchy(generic, kmax=2)
    assert not (v.constant_curvature or v.locally_symmetric or v.two_symmetric or v.semi_symmetric or v.recurrent)
    assert v.k_symmetric is None
    assert v.riemann.witnesses["nabla1"] is not None


def test_kmax_must_be_positive(pw):
    with pytest.raises(ValueError):
        cl.classify_hierarchy(pw, kmax=0)


def test_recurrent_plane_wave():
    # a_ij = u A_ij: nabla R = (1/u) du (x) R, by hand
    m = zoo.plane_wave(4, [["u", "0"], ["0", "-u"]])
    A = cl.detect_recurrence(m.curvature.riemann_lower, m)
    assert A is not None
    assert A[0] == m.chart.parse("1/u")
    assert all(A[i].is_zero() for i in range(1, 4))
    assert cl.classify_hierarchy(m, kmax=2).recurrent


def test_non_recurrent_returns_none(pw):
    assert cl.detect_recurrence(pw.curvature.riemann_lower, pw) is None


# -- parallel and homothetic fields -----------------------------------------------


def test_k_is_parallel_null(pw):
    res = cl.verify_parallel(pw.candidates["k"], pw)
    assert res.parallel and res.witness is None
    found = {f.name: f for f in cl.parallel_candidates(pw)}
    assert found["k"].parallel and found["k"].null


def test_du_dual_vector_not_parallel(pw):
    c = pw.chart
    e_u = TensorField.from_sparse(c, (CON,), {(0,): c.one()})
    res = cl.verify_parallel(e_u, pw)
    assert not res.parallel and res.obstruction


def test_homothety_and_killing(minkowski):
    c = minkowski.chart
    dil = TensorField.from_function(c, (CON,), lambda i: c.coord(c.names[i]))
    assert cl.verify_homothetic(dil, minkowski) == 1
    translation = TensorField.from_sparse(c, (CON,), {(0,): c.one()})
    assert cl.verify_homothetic(translation, minkowski) == 0
    # Killing but not of the form c g: nabla v is antisymmetric and nonzero
    boost = TensorField.from_sparse(c, (CON,), {(0,): c.coord("x1"), (1,): c.coord("t")})
    assert cl.verify_homothetic(boost, minkowski) is None
    shear = TensorField.from_sparse(c, (CON,), {(1,): c.parse("x1^2")})
    assert cl.verify_homothetic(shear, minkowski) is None


def test_theorem_checks(pw):
    v = cl.classify_hierarchy(pw, kmax=2)
    checks = dict((name, status) for name, status, _ in cl.theorem_checks(pw, v))
    assert checks["two_symmetric_lorentzian_has_parallel_null"] == "pass"
    assert checks["semi_symmetric_nonsingular_implies_constant_curvature"] == "n/a"
    cc = zoo.constant_curvature(4, 1)
    checks = dict((n, s) for n, s, _ in cl.theorem_checks(cc, cl.classify_hierarchy(cc, kmax=1)))
    assert checks["semi_symmetric_nonsingular_implies_constant_curvature"] == "pass"


# -- type N -----------------------------------------------------------------------


def test_typeN_decomposition(pw):
    dec = cl.decompose_typeN(pw)
    assert dec.success and dec.kB_zero and dec.trace_zero and dec.symmetric
    assert dec.reconstruct().equals(pw.curvature.nabla_weyl)
    ell = dec.ell
    assert einsum("ab,a,b->", pw.g_tensor, ell, ell).scalar().is_zero()
    assert einsum("a,a->", ell, dec.k).scalar() == pw.chart.const(-1)


def test_typeN_requires_ricci_flat():
    m = zoo.plane_wave(4, [["u", "0"], ["0", "u"]])
    with pytest.raises(cl.TypeNError):
        cl.decompose_typeN(m)


def test_typeN_rejects_non_null(pw):
    c = pw.chart
    x = TensorField.from_sparse(c, (COV,), {(2,): c.one()})
    with pytest.raises(cl.TypeNError):
        cl.decompose_typeN(pw, x)


# -- Segre ------------------------------------------------------------------------


def test_segre_metric_itself(minkowski):
    assert cl.segre_classify(minkowski.g_tensor, minkowski).symbol == "[(1,111)]"


def test_segre_null_dust(minkowski):
    c = minkowski.chart
    k = TensorField.from_sparse(c, (COV,), {(0,): c.const(-1), (1,): c.one()})
    st_ = cl.segre_classify(outer(k, k), minkowski)
    assert st_.symbol == "[(211)]" and st_.eigenvalues == [0]


@pytest.mark.parametrize("values, symbol, eigen", [
    ((2, 3, 3, 3), "[1,(111)]", [-2, 3]),
    ((5, 1, 2, 3), "[1,111]", [-5, 1, 2, 3]),
    ((-1, 1, 1, 2), "[(1,11)1]", [1, 2]),
    ((-1, 1, 2, 2), "[(1,1)(11)]", [1, 2]),
])
def test_segre_diagonal_hand_cases(minkowski, values, symbol, eigen):
    # h^a_b = eta^aa h_ab: the t-eigenvalue flips sign
    st_ = cl.segre_classify(_diag(minkowski.chart, *values), minkowski)
    assert st_.symbol == symbol and st_.eigenvalues == eigen


def test_segre_complex_pair(minkowski):
    c = minkowski.chart
    h = TensorField.from_sparse(c, (COV, COV), {(0, 1): c.one(), (1, 0): c.one(), (2, 2): c.const(3),
                                                (3, 3): c.const(3)})
    st_ = cl.segre_classify(h, minkowski)
    assert st_.symbol == "[zz̄(11)]"
    assert st_.eigenvalues[0] == "z: lam^2 + 1 = 0"


def test_segre_jordan_with_spacelike_blocks(minkowski):
    c = minkowski.chart
    k = TensorField.from_sparse(c, (COV,), {(0,): c.const(-1), (1,): c.one()})
    assert cl.segre_classify(outer(k, k) + _diag(c, 0, 0, 1, 2), minkowski).symbol == "[211]"


def test_segre_irrational_spectrum_rejected(minkowski):
    c = minkowski.chart
    entries = {(1, 2): c.one(), (2, 1): c.one(), (2, 3): c.one(), (3, 2): c.one(), (3, 3): c.one()}
    with pytest.raises(cl.SegreError):
        cl.segre_classify(TensorField.from_sparse(c, (COV, COV), entries), minkowski)


def test_segre_on_curved_metric(pw):
    assert cl.segre_classify(pw.g_tensor, pw).symbol == "[(1,111)]"
    k = pw.candidates["k"]
    assert cl.segre_classify(outer(k, k), pw).symbol == "[(211)]"


_lam = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=10, deadline=None)
@given(st.lists(_lam, min_size=3, max_size=3))
def test_segre_symbol_invariant_under_metric_shift(lams):
    m = zoo.flat(4)
    c = m.chart
    k = TensorField.from_sparse(c, (COV,), {(0,): c.const(-1), (1,): c.one()})
    for h in (_diag(c, 2, 3, 3, 3), _diag(c, 5, 1, 2, 3), outer(k, k) + _diag(c, 0, 0, 1, 2)):
        base = cl.segre_classify(h, m)
        for lam in lams:
            shifted = cl.segre_classify(h + m.g_tensor * lam, m)
            assert shifted.symbol == base.symbol
            assert shifted.eigenvalues == [e + lam for e in base.eigenvalues]


# -- Ricci identity helper ---------------------------------------------------------


def test_ricci_commutator_matches_explicit_commutator(generic):
    c = generic.chart
    w = TensorField.from_function(c, (COV,), lambda a: c.parse(f"{c.names[a]}^2*{c.names[(a + 1) % 4]}"))
    D2 = covariant_derivative(covariant_derivative(w, generic), generic)
    assert cl.antisym_leading(D2).equals(cl.ricci_commutator(w, generic))


def test_segre_three_block():
    # h = k p + p k with k null and p unit spacelike orthogonal to it
    m = zoo.flat(4)
    c = m.chart
    k = TensorField.from_sparse(c, (COV,), {(0,): c.const(-1), (1,): c.one()})
    p = TensorField.from_sparse(c, (COV,), {(2,): c.one()})
    h = outer(k, p) + outer(p, k)
    assert cl.segre_classify(h, m).symbol == "[(31)]"
    h5 = h + TensorField.from_sparse(c, (COV, COV), {(3, 3): c.const(5)})
    assert cl.segre_classify(h5, m).symbol == "[31]"
