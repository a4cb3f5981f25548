"""Command-line driver: ``symcurv <command> METRIC_FILE [flags]``.

Commands: classify, identities, invariants, superenergy, segre, full, export.
Exit status is 0 on completion, 1 when a check fails although its
preconditions hold, and 2 on input errors.

Output is a flat ``key=value`` report starting with ``schema=1``; lines
starting with ``#`` form the human summary (timings live only there).
``--machine`` suppresses the summary.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import classify as cl
from . import concomitants as cc
from .expr import Expression, PoleError
from .geometry import COV, GeometryError, MetricField, TensorField, outer
from .metricfile import MetricFileError, build_metric, build_tensor, emit_metric_file, load_metric_file, options

SCHEMA = 1
COMMANDS = ("classify", "identities", "invariants", "superenergy", "segre", "full", "export")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


@dataclass
class Report:
    entries: list[tuple[str, str]] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    input_errors: list[str] = field(default_factory=list)

    def put(self, key: str, value) -> None:
        self.entries.append((key, _fmt(value)))

    def note(self, line: str) -> None:
        self.summary.append(line)

    def fail(self, key: str) -> None:
        self.failures.append(key)

    @property
    def exit_code(self) -> int:
        if self.input_errors:
            return EXIT_INPUT
        return EXIT_FAIL if self.failures else EXIT_OK

    def machine(self) -> str:
        lines = [f"schema={SCHEMA}"] + [f"{k}={v}" for k, v in self.entries]
        status = "input-error" if self.input_errors else ("fail" if self.failures else "ok")
        lines.append(f"status={status}")
        if self.failures:
            lines.append("failures=" + ",".join(self.failures))
        return "\n".join(lines) + "\n"

    def render(self, machine_only: bool = False) -> str:
        text = self.machine()
        if not machine_only and self.summary:
            text += "".join(f"# {s}\n" for s in self.summary)
        return text


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, (list,)):
        return ";".join(str(v) for v in value)
    return str(value).replace("\n", " ")


def _yes(b: bool) -> str:
    return "yes" if b else "no"


MAX_EXPR = 160


def _expr_text(e: Expression) -> str:
    s = str(e)
    return s if len(s) <= MAX_EXPR else f"<{len(s)} chars>"


def _at_probe(e: Expression, m: MetricField) -> str:
    try:
        return str(e.evaluate(m.probe))
    except PoleError:
        return "pole"


def covector_text(w: TensorField) -> str:
    """``-du``-style rendering of a covector with constant or rational components."""
    parts = []
    for (i,), e in w.nonzero():
        name = "d" + w.chart.names[i]
        s = str(e)
        if s == "1":
            parts.append(f"+ {name}")
        elif s == "-1":
            parts.append(f"- {name}")
        elif e.is_constant() and e.constant_value() < 0:
            parts.append(f"- {str(-e)}*{name}")
        else:
            parts.append(f"+ ({s})*{name}")
    text = " ".join(parts)
    if text.startswith("+ "):
        text = text[2:]
    elif text.startswith("- "):
        text = "-" + text[2:]
    return text or "0"


# sections ---------------------------------------------------------------------


def section_metric(r: Report, m: MetricField) -> None:
    r.put("metric.name", m.name or "metric")
    r.put("metric.coordinates", tuple(m.chart.names))
    r.put("metric.n", m.n)
    r.put("metric.lorentzian", m.lorentzian)
    r.put("metric.signature", m.signature)
    r.put("metric.probe", tuple(m.probe))
    if m.blocks:
        r.put("metric.blocks", ["+".join(names) for _, names in m.blocks])


def section_classify(r: Report, m: MetricField, kmax: int) -> cl.HierarchyVerdict:
    v = cl.classify_hierarchy(m, kmax)
    r.put("hierarchy.kmax", kmax)
    r.put("hierarchy.constant_curvature", v.constant_curvature)
    if v.constant_curvature:
        r.put("hierarchy.curvature_constant", v.curvature_constant)
    r.put("hierarchy.locally_symmetric", v.locally_symmetric)
    r.put("hierarchy.two_symmetric", v.two_symmetric)
    r.put("hierarchy.k_symmetric", v.k_symmetric)
    r.put("hierarchy.semi_symmetric", v.semi_symmetric)
    r.put("hierarchy.recurrent", v.recurrent)
    if v.recurrent and v.recurrence is not None:
        r.put("hierarchy.recurrence_form", [str(e) for e in v.recurrence.components])
    for k, wit in v.riemann.witnesses.items():
        if wit is not None and k != "base":
            r.put(f"hierarchy.witness.{k}", wit)
    for label, tower in (("weyl", v.weyl), ("ricci", v.ricci)):
        if tower is None:
            continue
        r.put(f"hierarchy.{label}.vanishes", tower.vanishes)
        r.put(f"hierarchy.{label}.locally_symmetric", tower.locally_symmetric)
        r.put(f"hierarchy.{label}.two_symmetric", tower.two_symmetric)
        r.put(f"hierarchy.{label}.k_symmetric", tower.k_symmetric)
        r.put(f"hierarchy.{label}.semi_symmetric", tower.semi_symmetric)
        r.put(f"hierarchy.{label}.recurrent", tower.recurrent)
    r.put("hierarchy.einstein", v.einstein)
    r.put("operator.det_generic_nonzero", v.generic_nonsingular)
    try:
        r.put("operator.det_at_probe_nonzero", m.curvature.operator.nonsingular_at(m.probe))
    except PoleError:
        r.put("operator.det_at_probe_nonzero", "pole")
    findings = cl.parallel_candidates(m)
    for f in findings:
        if f.parallel:
            r.put(f"parallel.{f.name}", "null" if f.null else "non-null")
    null_parallel = [f for f in findings if f.parallel and f.null]
    r.put("parallel.null_found", bool(null_parallel))
    for name, status, detail in cl.theorem_checks(m, v, findings):
        r.put(f"theorem.{name}", status)
        if status == "fail":
            r.fail(f"theorem.{name}")
    if m.family and m.family.get("family") == "plane_wave":
        d = m.family["u_degree"]
        expected = None if d < 0 else d + 1
        r.put("plane_wave.u_degree", d)
        if expected is not None and expected <= kmax:
            ok = v.k_symmetric == expected
            r.put("plane_wave.ladder", "pass" if ok else "fail")
            if not ok:
                r.fail("plane_wave.ladder")
    r.note(
        f"2-symmetric: {_yes(v.two_symmetric)}; locally symmetric: {_yes(v.locally_symmetric)}; "
        + ("parallel null field: " + ", ".join(
            f"{f.name} = {covector_text(f.field)} verified" for f in null_parallel[:1])
           if null_parallel else "parallel null field: none among candidates")
    )
    r.note(f"constant curvature: {_yes(v.constant_curvature)}; semi-symmetric: {_yes(v.semi_symmetric)}; "
           f"k-symmetric: {v.k_symmetric if v.k_symmetric is not None else f'no (k <= {kmax})'}; "
           f"recurrent: {_yes(v.recurrent)}")
    if m.blocks:
        r.note("block structure: " + " x ".join(f"{name}({','.join(c)})" for name, c in m.blocks))
    return v


def section_identities(r: Report, m: MetricField) -> None:
    results = cc.identity_suite(m)
    counts = {"pass": 0, "fail": 0, "not-expected": 0}
    for res in results:
        r.put(f"identity.{res.group}.{res.name}", res.status)
        if not res.holds:
            r.put(f"identity.{res.group}.{res.name}.witness", res.witness)
        counts[res.status] += 1
        if res.status == "fail":
            r.fail(f"identity.{res.name}")
    r.note(f"identities: {counts['pass']} pass, {counts['fail']} fail, "
           f"{counts['not-expected']} not expected to hold")


def section_invariants(r: Report, m: MetricField) -> None:
    r.put("invariants.degree_convention", "curvature-powers")
    invs = cc.scalar_invariants(m, 2)
    for inv in invs:
        key = f"invariant.{inv.name}"
        r.put(key, _expr_text(inv.scalar))
        r.put(key + ".at_probe", _at_probe(inv.scalar, m))
        r.put(key + ".rank_degree_order", (inv.rank, inv.degree, inv.order))
        r.put(key + ".constant", all(inv.scalar._diff_index(i).is_zero() for i in range(m.n)))
    two_sym = m.curvature.nabla_k(2).is_zero()
    null_parallel = None
    if two_sym:
        outcomes = cc.check_constancy(m)
        for o in outcomes:
            r.put(f"constancy.{o.name}", "constant" if o.constant else (
                "parallel-null-exception" if o.parallel_null else "nonconstant"))
            if not o.ok:
                r.fail(f"constancy.{o.name}")
        null_parallel = any(f.null and f.parallel for f in cl.parallel_candidates(m))
    quad = cc.quadratic_vanishing_suite(m)
    expected = two_sym and not null_parallel
    for i, q in enumerate(quad, 1):
        key = f"quadratic.{i:02d}"
        r.put(key + ".expr", q.name)
        r.put(key, "zero" if q.is_zero else "nonzero")
        if not q.is_zero:
            r.put(key + ".witness", q.witness)
            if expected:
                r.fail(key)
    chain = cc.derivation_chain(m)
    for i, q in enumerate(chain, 1):
        key = f"chain.{i:02d}"
        r.put(key + ".expr", q.name)
        r.put(key, "zero" if q.is_zero else "nonzero")
        if not q.is_zero and two_sym:
            r.fail(key)
    if two_sym:
        try:
            cc.assert_degree_order(m, invs + quad + chain)
            r.put("concomitants.degree_order_lemma", "pass")
        except cl.ClassificationError as err:
            r.put("concomitants.degree_order_lemma", "fail")
            r.fail("concomitants.degree_order_lemma")
            r.note(str(err))
    nz = sum(1 for q in quad if not q.is_zero)
    r.note(f"quadratic list: {len(quad) - nz} of {len(quad)} vanish"
           + (" (expected all)" if expected else " (observational)"))


def section_superenergy(r: Report, m: MetricField, seed: int, samples: int, probe) -> None:
    T = cc.superenergy_ricci(m)
    r.put("superenergy.ricci.zero", T.is_zero())
    r.put("superenergy.ricci.pair_symmetric", True)
    rep = cc.dominant_property_sample(T, m, probe, samples, seed)
    r.put("superenergy.ricci.dominant", "pass" if rep.passed else "fail")
    r.put("superenergy.ricci.dominant.samples", rep.samples)
    r.put("superenergy.ricci.dominant.seed", seed)
    r.put("superenergy.ricci.dominant.minimum", rep.minimum)
    if rep.first_negative is not None:
        r.put("superenergy.ricci.dominant.first_negative", rep.first_negative)
    if not rep.passed:
        r.fail("superenergy.ricci.dominant")
    r.note(f"superenergy: T {'vanishes' if T.is_zero() else 'nonzero'}, dominant property "
           f"{'holds' if rep.passed else 'VIOLATED'} on {rep.samples} samples")
    c = m.curvature
    if m.n < 3:
        return
    T2 = cc.superenergy2(m)
    r.put("superenergy2.zero", T2.is_zero())
    ricci_flat = c.ricci.is_zero()
    two_sym = c.nabla_k(2).is_zero()
    if ricci_flat and two_sym and m.lorentzian:
        k = m.candidates.get("k")
        if k is None:
            nulls = [f.field for f in cl.parallel_candidates(m) if f.null and f.parallel]
            k = nulls[0] if nulls else None
        if k is None:
            if not T2.is_zero():
                r.put("typeN.status", "no-candidate")
            else:
                r.put("typeN.status", "trivial")
            return
        try:
            dec = cl.decompose_typeN(m, k)
        except cl.TypeNError as err:
            r.put("typeN.status", "fail")
            r.fail("typeN")
            r.note(f"type N decomposition failed: {err}")
            return
        r.put("typeN.status", "pass")
        r.put("typeN.k", covector_text(k))
        r.put("typeN.kB_zero", dec.kB_zero)
        r.put("typeN.trace_zero", dec.trace_zero)
        closed = cc.superenergy2_closed_form(dec.k, dec.B, m)
        match = T2.components.equals(closed)
        r.put("superenergy2.closed_form", "match" if match else "mismatch")
        if not match:
            r.fail("superenergy2.closed_form")
        if not (dec.kB_zero and dec.trace_zero and dec.symmetric):
            r.fail("typeN.properties")
    else:
        r.put("typeN.status", "n/a")


def section_segre(r: Report, m: MetricField, tensor: TensorField | None, probe, strict: bool) -> None:
    targets = [("g", m.g_tensor), ("ricci", m.curvature.ricci)]
    for name, f in m.candidates.items():
        if f.valence == (COV,):
            targets.append((f"{name}{name}", outer(f, f)))
    if tensor is not None:
        targets.append(("tensor", tensor))
    for name, h in targets:
        try:
            st = cl.segre_classify(h, m, probe)
        except cl.SegreError as err:
            r.put(f"segre.{name}", "unsupported")
            r.note(f"segre {name}: {err}")
            if strict and name == "tensor":
                r.input_errors.append(f"segre.{name}")
            continue
        r.put(f"segre.{name}", st.symbol)
        r.put(f"segre.{name}.eigenvalues", [str(e) for e in st.eigenvalues])
        if name == "g" and st.symbol != "[(1," + "1" * (m.n - 1) + ")]":
            r.fail("segre.g")
        if name == "ricci" and st.symbol.startswith("[(3"):
            # the associated spacelike parallel fields are not constructed, only candidates are checked
            r.put("segre.ricci.parallel_fields", "not-constructed")
            r.note("segre ricci: type [(31...1)] noted; parallel fields beyond the candidates are not built")
    if m.lorentzian:
        r.note("segre: " + "; ".join(f"{k[6:]}={v}" for k, v in r.entries if k.startswith("segre.")
                                     and "." not in k[6:]))


# driver -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symcurv", description="Exact curvature hierarchy classification.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="metric definition file")
    p.add_argument("--kmax", type=int, default=None, help="highest derivative order probed (default 4)")
    p.add_argument("--probe", default=None, help="probe point, comma-separated rationals")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    p.add_argument("--samples", type=int, default=None, help="dominant-property samples (default 200)")
    p.add_argument("--machine", action="store_true", help="print only the key=value report")
    return p


def _probe_flag(text: str):
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid --probe value {text!r}") from None


def run(command: str, path: str, *, kmax=None, probe=None, seed=None, samples=None) -> tuple[Report, str | None]:
    """Run one command; returns the report and, for ``export``, the emitted file text."""
    r = Report()
    r.put("command", command)
    mf = load_metric_file(path)
    opts = options(mf)
    kmax = kmax if kmax is not None else opts.get("kmax", 4)
    seed = seed if seed is not None else opts.get("seed", 0)
    samples = samples if samples is not None else opts.get("samples", 200)
    if kmax < 1 or samples < 0:
        raise InputError("kmax must be >= 1 and samples >= 0")
    probe = probe if probe is not None else opts.get("probe")
    m = build_metric(mf, probe)
    if probe is not None and len(probe) != m.n:
        raise InputError(f"probe point needs {m.n} coordinates")
    tensor = build_tensor(mf, m)
    section_metric(r, m)
    if command == "export":
        return r, emit_metric_file(m)
    timings = []

    def timed(label, fn, *args):
        t0 = time.perf_counter()
        fn(r, m, *args)
        timings.append(f"{label} {time.perf_counter() - t0:.2f}s")

    if command in ("classify", "full"):
        timed("classify", section_classify, kmax)
    if command in ("identities", "full"):
        timed("identities", section_identities)
    if command in ("invariants", "full"):
        timed("invariants", section_invariants)
    if command in ("superenergy", "full"):
        timed("superenergy", section_superenergy, seed, samples, m.probe)
    if command in ("segre", "full"):
        timed("segre", section_segre, tensor, m.probe, command == "segre")
    r.note("timing: " + ", ".join(timings))
    return r, None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        probe = _probe_flag(args.probe) if args.probe else None
        report, exported = run(args.command, args.file, kmax=args.kmax, probe=probe, seed=args.seed,
                               samples=args.samples)
    except MetricFileError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, GeometryError, PoleError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except cl.ClassificationError as err:
        print(f"verification failure: {err}", file=sys.stderr)
        return EXIT_FAIL
    if exported is not None:
        sys.stdout.write(exported)
        return EXIT_OK
    sys.stdout.write(report.render(machine_only=args.machine))
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
