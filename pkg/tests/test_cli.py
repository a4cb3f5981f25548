from pathlib import Path

import pytest

from symcurv import cli
from symcurv import concomitants as cc
from symcurv import zoo
from symcurv.metricfile import MetricFileError, build_metric, emit_metric_file, parse_metric_file

METRICS = Path(__file__).resolve().parent.parent / "metrics"

MINKOWSKI = """\
[chart]
coordinates = t, x, y, z

[metric]
g[t][t] = "-1"
g[x][x] = "1"
g[y][y] = "1"
g[z][z] = "1"
"""


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def machine(out: str) -> dict[str, str]:
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "schema=1"
    return dict(ln.split("=", 1) for ln in lines[1:])


@pytest.fixture
def write(tmp_path):
    def _write(text, name="m.metric"):
        p = tmp_path / name
        p.write_text(text)
        return p
    return _write


def test_classify_plane_wave_summary(capsys):
    code, out, _ = run(capsys, "classify", METRICS / "plane_wave4.metric")
    assert code == 0
    assert "# 2-symmetric: yes; locally symmetric: no; parallel null field: k = -du verified" in out
    rep = machine(out)
    assert rep["hierarchy.two_symmetric"] == "true" and rep["parallel.k"] == "null"
    assert rep["theorem.two_symmetric_lorentzian_has_parallel_null"] == "pass"


def test_full_minkowski(capsys, write):
    code, out, _ = run(capsys, "full", write(MINKOWSKI))
    assert code == 0
    rep = machine(out)
    assert rep["status"] == "ok"
    assert not any(v == "fail" for v in rep.values())
    values = {k: v for k, v in rep.items()
              if k.startswith("invariant.") and not k.endswith((".rank_degree_order", ".constant", ".at_probe"))}
    assert values and all(v == "0" for v in values.values())


def test_identities_on_negative_control(capsys):
    code, out, _ = run(capsys, "identities", METRICS / "generic.metric")
    assert code == 0
    rep = machine(out)
    semi = {k: v for k, v in rep.items() if k.startswith("identity.semi-symmetric.") and k.count(".") == 2}
    assert semi and all(v == "not-expected" for v in semi.values())
    bianchi = {k: v for k, v in rep.items() if k.startswith("identity.bianchi.") and k.count(".") == 2}
    assert bianchi and all(v == "pass" for v in bianchi.values())
    # each failing entry carries a witness index
    for k, v in semi.items():
        assert rep[k + ".witness"] != "none"


def test_machine_flag_drops_summary(capsys):
    _, out, _ = run(capsys, "classify", METRICS / "plane_wave4.metric", "--machine")
    assert not any(ln.startswith("#") for ln in out.splitlines())


def test_full_is_deterministic(capsys):
    args = ("full", METRICS / "plane_wave4.metric", "--machine", "--seed", "3", "--samples", "20")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second


@pytest.mark.parametrize("text, line, col, fragment", [
    ('[chart]\ncoordinates = t, x\n\n[metric]\ng[t][t] = "-1 + (x"\ng[x][x] = "1"\n', 5, 19, "expected ')'"),
    ('[chart]\ncoordinates = t, x\n\n[metric]\ng[t][t] = "-1 + w"\ng[x][x] = "1"\n', 5, 17, "unknown variable"),
    ('[chart]\ncoordinates = t, x\n[bogus]\n', 3, 2, "unknown section"),
    ('[chart]\ncoordinates = t, x\n\n[metric]\ng[t][t] = "-1\n', 5, 11, "string"),
    ('[chart]\ncoordinates = t, x\n[metric]\ng[t][t] = "-1"\ng[x][x] = "1"\n[zoo]\nfamily = flat\n', 0, 0, ""),
])
def test_input_errors_report_position(capsys, write, text, line, col, fragment):
    code, out, err = run(capsys, "classify", write(text))
    assert code == 2 and out == ""
    if line:
        assert f":{line}:{col}:" in err and fragment in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "classify", tmp_path / "nope.metric")
    assert code == 2 and "cannot read" in err


def test_pole_at_probe_is_input_error(capsys, write):
    text = '[chart]\ncoordinates = t, x\n\n[metric]\ng[t][t] = "-1"\ng[x][x] = "1/x"\n\n[options]\nprobe = 1/2, 0\n'
    code, _, err = run(capsys, "classify", write(text))
    assert code == 2 and "probe" in err


def test_bad_probe_flag(capsys):
    code, _, err = run(capsys, "classify", METRICS / "plane_wave4.metric", "--probe", "1/2,abc")
    assert code == 2


UNSUPPORTED_TENSOR = MINKOWSKI + """
[tensor]
h[x][y] = "1"
h[y][z] = "1"
h[z][z] = "1"
"""


def test_unsupported_segre_spectrum(capsys, write):
    p = write(UNSUPPORTED_TENSOR)
    code, out, _ = run(capsys, "segre", p)
    assert code == 2 and machine(out)["segre.tensor"] == "unsupported"
    code, out, _ = run(capsys, "full", p, "--kmax", "1", "--samples", "5")
    assert code == 0 and machine(out)["segre.tensor"] == "unsupported"


def test_verification_failure_exit_code(capsys, monkeypatch):
    real = cc.identity_suite

    def broken(m, **kw):
        out = real(m, **kw)
        out[0] = cc.IdentityOutcome(out[0].name, out[0].group, True, False, (0, 0, 0, 0))
        return out

    monkeypatch.setattr(cc, "identity_suite", broken)
    code, out, _ = run(capsys, "identities", METRICS / "plane_wave4.metric")
    assert code == 1
    rep = machine(out)
    assert rep["status"] == "fail" and rep["identity.bianchi.riemann_antisym_first_pair.witness"] == "0,0,0,0"


@pytest.mark.parametrize("build", [
    lambda: zoo.plane_wave(4, [["u", "1"], ["1", "-u"]]),
    lambda: zoo.constant_curvature(4, -2),
    lambda: zoo.product([zoo.constant_curvature(2, 1, names=("t", "r")),
                         zoo.constant_curvature(2, 1, lorentzian=False, names=("p", "q"))]),
])
def test_round_trip(build):
    m = build()
    text = emit_metric_file(m)
    back = build_metric(parse_metric_file(text, "<emitted>"))
    assert back.chart.names == m.chart.names
    assert back.equals(m)
    assert back.probe == m.probe


PRODUCT = """\
[zoo]
family = product
blocks = a, b

[zoo.a]
family = constant_curvature
n = 2
K = 1
coordinates = t, r

[zoo.b]
family = constant_curvature
n = 2
K = 1
lorentzian = false
coordinates = {second}
"""


def test_product_file(write):
    m = build_metric(parse_metric_file(PRODUCT.format(second="p, q")))
    assert m.chart.names == ("t", "r", "p", "q") and m.signature == (1, 3)
    assert m.equals(zoo.product([zoo.constant_curvature(2, 1, names=("t", "r")),
                                 zoo.constant_curvature(2, 1, lorentzian=False, names=("p", "q"))]))
    with pytest.raises(MetricFileError):
        build_metric(parse_metric_file(PRODUCT.format(second="t, q")))


def test_export_command(capsys):
    code, out, _ = run(capsys, "export", METRICS / "de_sitter.metric")
    assert code == 0 and out.startswith("[chart]")
    assert build_metric(parse_metric_file(out)).equals(zoo.constant_curvature(4, 1))
