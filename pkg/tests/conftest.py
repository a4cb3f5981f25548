import sys
from fractions import Fraction

import pytest

from symcurv import zoo
from symcurv.geometry import MetricField

# negative control: no symmetry at all
GENERIC = [
    ["-1-x^2", "0", "0", "0"],
    ["0", "1+t*y", "0", "0"],
    ["0", "0", "1+z^2", "0"],
    ["0", "0", "0", "1+x*t"],
]


def generic_metric() -> MetricField:
    return MetricField(("t", "x", "y", "z"), GENERIC, name="generic")


def pw4(a=(("u", "1"), ("1", "-u"))):
    return zoo.plane_wave(4, [list(r) for r in a])


def zoo_metrics():
    """(label, builder) pairs covering every family at n = 4 and n = 5."""
    return [
        ("flat4", lambda: zoo.flat(4)),
        ("flat5_riemannian", lambda: zoo.flat(5, lorentzian=False)),
        ("cc4_pos", lambda: zoo.constant_curvature(4, 1)),
        ("cc4_neg", lambda: zoo.constant_curvature(4, Fraction(-2))),
        ("cc5", lambda: zoo.constant_curvature(5, Fraction(1, 3))),
        ("pw4_linear", lambda: pw4()),
        ("pw5_quadratic", lambda: zoo.plane_wave(5, [["u^2", "1", "0"], ["1", "-u", "u"], ["0", "u", "2"]])),
        ("brinkmann4", lambda: zoo.brinkmann(4, "x1^3 + x2*u^2", W=["u*x2", "0"])),
        ("product_pw_sphere", lambda: zoo.product([pw4(), zoo.constant_curvature(
            2, 1, lorentzian=False, names=("y1", "y2"))])),
        ("product_ads2_s2", lambda: zoo.product([zoo.constant_curvature(2, -1, names=("t", "r")),
                                                 zoo.constant_curvature(2, 1, lorentzian=False,
                                                                        names=("p", "q"))])),
        ("pw4_flat_ext", lambda: zoo.flat_extension(pw4(), 1)),
    ]


@pytest.fixture(scope="session")
def generic():
    return generic_metric()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
