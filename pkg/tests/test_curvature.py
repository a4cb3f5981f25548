"""Curvature engine against a float finite-difference oracle and exact identities.

The oracle only evaluates metric components; every derivative it needs is a
central difference taken in mpmath at 40 digits.
"""

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from symcurv import zoo
from symcurv.curvature import christoffel, riemann, ricci, riemann_operator, scalar, weyl
from symcurv.geometry import COV, TensorField, antisym, covariant_derivative, einsum, raise_index

from conftest import generic_metric, zoo_metrics

mpmath.mp.dps = 40
H = mpmath.mpf("1e-9")


def _g_at(m, x):
    # exact rational metric evaluated at an mpf point: substitute via Fraction of the mpf
    p = [Fraction(mpmath.nstr(v, 45)) if not isinstance(v, Fraction) else v for v in x]
    return mpmath.matrix([[mpmath.mpf(m.g[i, j].evaluate(p).numerator) / m.g[i, j].evaluate(p).denominator
                           for j in range(m.n)] for i in range(m.n)])


def _shift(x, k, s):
    y = list(x)
    y[k] = y[k] + s
    return y


def fd_christoffel(m, x):
    n = m.n
    g = _g_at(m, x)
    ginv = g ** -1
    dg = [None] * n
    for k in range(n):
        dg[k] = (_g_at(m, _shift(x, k, H)) - _g_at(m, _shift(x, k, -H))) / (2 * H)
    G = [[[mpmath.mpf(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                G[a][b][c] = sum(ginv[a, d] * (dg[b][d, c] + dg[c][d, b] - dg[d][b, c]) for d in range(n)) / 2
    return G


def fd_riemann(m, x):
    n = m.n
    G = fd_christoffel(m, x)
    dG = []
    for k in range(n):
        Gp = fd_christoffel(m, _shift(x, k, H * 1000))
        Gm = fd_christoffel(m, _shift(x, k, -H * 1000))
        dG.append([[[(Gp[a][b][c] - Gm[a][b][c]) / (2000 * H) for c in range(n)] for b in range(n)]
                   for a in range(n)])
    R = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    v = dG[c][a][d][b] - dG[d][a][c][b]
                    v += sum(G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b] for e in range(n))
                    R[a, b, c, d] = v
    return G, R


def _close(exact: Fraction, approx, rel=1e-6):
    e = mpmath.mpf(exact.numerator) / exact.denominator
    return abs(e - approx) <= rel * max(1, abs(e))


ORACLE_CASES = [
    ("generic", generic_metric),
    ("cc4_neg", lambda: zoo.constant_curvature(4, Fraction(-2))),
    ("pw5_quadratic", dict(zoo_metrics())["pw5_quadratic"]),
    ("brinkmann4", dict(zoo_metrics())["brinkmann4"]),
    ("product_ads2_s2", dict(zoo_metrics())["product_ads2_s2"]),
]


@pytest.mark.parametrize("label, build", ORACLE_CASES, ids=[c[0] for c in ORACLE_CASES])
def test_finite_difference_oracle(label, build):
    m = build()
    rng = random.Random(label)
    Gs, Rs = christoffel(m), riemann(m)
    for _ in range(5):
        point = [Fraction(rng.randint(-40, 40), 97) for _ in range(m.n)]
        G_fd, R_fd = fd_riemann(m, point)
        n = m.n
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    assert _close(Gs[a, b, c].evaluate(point), G_fd[a][b][c]), (label, "G", a, b, c)
                    for d in range(n):
                        assert _close(Rs[a, b, c, d].evaluate(point), R_fd[a, b, c, d]), (label, "R", a, b, c, d)


# -- hand cases --------------------------------------------------------------


def test_minkowski_is_flat():
    m = zoo.flat(4)
    assert christoffel(m).is_zero() and riemann(m).is_zero() and scalar(m).is_zero()
    assert m.curvature.nabla_riemann.is_zero() and m.curvature.nabla2_riemann.is_zero()
    op = riemann_operator(m)
    assert op.is_zero() and not op.generically_nonsingular()


def test_plane_wave_christoffel_pattern():
    m = zoo.plane_wave(5, [["u^2", "1", "0"], ["1", "-u", "u"], ["0", "u", "2"]])
    u, v = 0, 1
    for (a, b, c), _ in christoffel(m).nonzero():
        lower = tuple(sorted((b, c)))
        assert (a == v and u in lower) or (a >= 2 and lower == (u, u)), (a, b, c)


def test_plane_wave_ricci_is_trace_times_kk():
    a = [["u^2", "1", "0"], ["1", "-u", "u"], ["0", "u", "2"]]
    m = zoo.plane_wave(5, a)
    Ric = ricci(m)
    assert [idx for idx, _ in Ric.nonzero()] == [(0, 0)]
    trace = m.chart.parse("u^2 - u + 2")
    assert Ric[0, 0] == trace * 2
    assert scalar(m).is_zero()


@pytest.mark.parametrize("n, K", [(4, Fraction(1)), (4, Fraction(-2)), (5, Fraction(1, 3))])
def test_constant_curvature_values(n, K):
    m = zoo.constant_curvature(n, K)
    assert m.curvature.constant_curvature_residual.is_zero()
    assert scalar(m) == m.chart.const(n * (n - 1) * K)
    assert weyl(m).is_zero()
    assert riemann_operator(m).generically_nonsingular()


def test_ricci_flat_plane_wave_weyl_equals_riemann():
    m = zoo.plane_wave(4, [["u", "1"], ["1", "-u"]])
    assert ricci(m).is_zero()
    assert weyl(m).equals(m.curvature.riemann_lower)


def test_plane_wave_operator_degenerate():
    m = zoo.plane_wave(4, [["u", "1"], ["1", "-u"]])
    assert not riemann_operator(m).generically_nonsingular()
    assert riemann_operator(m).dimension == 6


def test_weyl_rejected_in_two_dimensions():
    from symcurv.geometry import GeometryError

    with pytest.raises(GeometryError):
        weyl(zoo.constant_curvature(2, 1, lorentzian=False, names=("p", "q")))


@pytest.mark.parametrize("a, nonzero, zero", [
    ([["1", "0"], ["0", "-1"]], 0, 1),
    ([["u", "1"], ["1", "-u"]], 1, 2),
    ([["u^2", "0"], ["0", "1"]], 2, 3),
])
def test_plane_wave_derivative_ladder(a, nonzero, zero):
    m = zoo.plane_wave(4, a)
    assert not m.curvature.nabla_k(nonzero).is_zero()
    assert m.curvature.nabla_k(zero).is_zero()


# -- identities on the negative control ---------------------------------------


@pytest.fixture(scope="module")
def gm():
    return generic_metric()


def test_riemann_symmetries_and_first_bianchi(gm):
    R = gm.curvature.riemann_lower
    assert (R + R.permute((1, 0, 2, 3))).is_zero()
    assert (R + R.permute((0, 1, 3, 2))).is_zero()
    assert R.equals(R.permute((2, 3, 0, 1)))
    assert antisym(R, (1, 2, 3)).is_zero()


def test_christoffel_symmetric(gm):
    G = christoffel(gm)
    assert G.equals(G.permute((0, 2, 1)))


def test_second_bianchi(gm):
    assert antisym(gm.curvature.nabla_riemann, (0, 1, 2)).is_zero()


def test_contracted_bianchi(gm):
    c = gm.curvature
    div = einsum("mmn->n", raise_index(c.nabla_ricci, 1, gm))
    half_dR = c.nabla_scalar * Fraction(1, 2)
    assert div.equals(half_dR)


def test_weyl_traceless(gm):
    assert einsum("rbrm->bm", gm.curvature.weyl_mixed).is_zero()


_coef = st.integers(-3, 3)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(_coef, st.integers(0, 3), st.integers(0, 3)), min_size=4, max_size=4),
       st.lists(_coef, min_size=16, max_size=16))
def test_ricci_identity_random_tensors(wcoef, hcoef):
    m = zoo.constant_curvature(4, Fraction(1, 2))
    names = m.chart.names
    chart = m.chart
    w = TensorField.from_function(chart, (COV,), lambda a: chart.parse(
        f"{wcoef[a][0]}*{names[wcoef[a][1]]}*{names[wcoef[a][2]]} + {a}"))
    h = TensorField.from_function(chart, (COV, COV), lambda a, b: chart.parse(
        f"{hcoef[4 * a + b]}*{names[a]}^2 + {names[b]}"))
    R = m.curvature.riemann
    for t, spec in ((w, "ralm,r->lma"), (h, None)):
        D2 = covariant_derivative(covariant_derivative(t, m), m)
        comm = D2 - D2.permute((1, 0) + tuple(range(2, D2.rank)))
        if spec:
            expected = -einsum(spec, R, t)
        else:
            # slots (l, m, a, b): -R^r_{alm} h_rb - R^r_{blm} h_ar
            expected = -(einsum("ralm,rb->lmab", R, t) + einsum("rblm,ar->lmab", R, t))
        assert comm.equals(expected)
