"""Line-oriented metric definition files.

Example::

    [chart]
    coordinates = t, x, y, z

    [metric]
    g[t][t] = "-1"
    g[1][1] = "1 + x^2"

    [options]
    kmax = 4
    probe = 1/3, 1/5, 1/7, 1/11

Zoo families replace ``[metric]`` with a ``[zoo]`` section
(``family = plane_wave`` plus parameters); products refer to further
``[zoo.<name>]`` sections.  ``[tensor]`` holds an optional symmetric
covariant tensor ``h[i][j]`` for Segre classification.  Lower-triangular
entries suffice; symmetry is implied.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import zoo
from .expr import ParseError, parse
from .geometry import COV, Chart, GeometryError, MetricField, TensorField

__all__ = ["MetricFileError", "MetricFile", "Entry", "parse_metric_file", "load_metric_file", "build_metric",
           "build_tensor", "emit_metric_file"]

SECTIONS = ("chart", "metric", "zoo", "options", "tensor")
OPTION_KEYS = ("kmax", "probe", "seed", "samples", "lorentzian")


class MetricFileError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}" if line else f"{source}: {message}")


@dataclass
class Entry:
    key: str
    indices: tuple[str, ...]
    value: str
    line: int
    column: int  # 1-based column of the first character of the value text
    quoted: bool
    key_column: int = 1


@dataclass
class MetricFile:
    sections: dict[str, list[Entry]] = field(default_factory=dict)
    section_lines: dict[str, int] = field(default_factory=dict)
    source: str = "<input>"

    def get(self, section: str, key: str) -> Entry | None:
        for e in self.sections.get(section, []):
            if e.key == key and not e.indices:
                return e
        return None

    def indexed(self, section: str, key: str) -> list[Entry]:
        return [e for e in self.sections.get(section, []) if e.key == key and e.indices]

    def error(self, message: str, entry: Entry | None = None, offset: int = 0, at_key: bool = False
              ) -> MetricFileError:
        if entry is None:
            return MetricFileError(message, source=self.source)
        column = entry.key_column if at_key else entry.column + offset
        return MetricFileError(message, entry.line, column, self.source)


_HEADER = re.compile(r"^\s*\[\s*([A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?)\s*\]\s*$")
_KEY = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)((?:\s*\[\s*[A-Za-z0-9_]+\s*\])*)\s*=")
_INDEX = re.compile(r"\[\s*([A-Za-z0-9_]+)\s*\]")


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def parse_metric_file(text: str, source: str = "<input>") -> MetricFile:
    mf = MetricFile(source=source)
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise MetricFileError("malformed section header", lineno, line.index("[") + 1, source)
            name = m.group(1)
            base = name.split(".")[0]
            if base not in SECTIONS or (base != "zoo" and "." in name):
                raise MetricFileError(f"unknown section [{name}]", lineno, line.index("[") + 2, source)
            if name in mf.sections:
                raise MetricFileError(f"duplicate section [{name}]", lineno, line.index("[") + 2, source)
            mf.sections[name] = []
            mf.section_lines[name] = lineno
            current = name
            continue
        m = _KEY.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise MetricFileError("expected 'key = value'", lineno, col, source)
        if current is None:
            raise MetricFileError("entry outside of any section", lineno, m.start(1) + 1, source)
        key = m.group(1)
        indices = tuple(_INDEX.findall(m.group(2)))
        rest = line[m.end():]
        lead = len(rest) - len(rest.lstrip())
        vstart = m.end() + lead
        value = rest.strip()
        if not value:
            raise MetricFileError("missing value", lineno, m.end() + 1, source)
        quoted = False
        if value.startswith('"'):
            if len(value) < 2 or not value.endswith('"') or '"' in value[1:-1]:
                raise MetricFileError("unterminated or malformed string", lineno, vstart + 1, source)
            value = value[1:-1]
            vstart += 1
            quoted = True
        mf.sections[current].append(Entry(key, indices, value, lineno, vstart + 1, quoted, m.start(1) + 1))
    return mf


def load_metric_file(path: str | Path) -> MetricFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as err:
        raise MetricFileError(f"cannot read file: {err.strerror}", source=str(path)) from err
    return parse_metric_file(text, str(path))


# value helpers -----------------------------------------------------------


def _expr(mf: MetricFile, entry: Entry, names):
    try:
        return parse(entry.value, names)
    except ParseError as err:
        raise mf.error(str(err.args[0]), entry, err.position) from err


def _int(mf: MetricFile, entry: Entry | None, default: int | None = None) -> int:
    if entry is None:
        if default is None:
            raise mf.error("missing integer parameter")
        return default
    try:
        return int(entry.value)
    except ValueError:
        raise mf.error(f"expected an integer, got {entry.value!r}", entry) from None


def _bool(mf: MetricFile, entry: Entry | None, default: bool) -> bool:
    if entry is None:
        return default
    v = entry.value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise mf.error(f"expected true/false, got {entry.value!r}", entry)


def _rational(mf: MetricFile, entry: Entry, text: str | None = None, offset: int = 0) -> Fraction:
    t = (entry.value if text is None else text).strip()
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise mf.error(f"expected a rational number, got {t!r}", entry, offset) from None


def _list(entry: Entry) -> list[tuple[str, int]]:
    out = []
    pos = 0
    for part in entry.value.split(","):
        stripped = part.strip()
        out.append((stripped, pos + (len(part) - len(part.lstrip()))))
        pos += len(part) + 1
    return out


def parse_probe(mf: MetricFile, entry: Entry) -> tuple[Fraction, ...]:
    return tuple(_rational(mf, entry, t, off) for t, off in _list(entry))


def _coordinates(mf: MetricFile, section: str) -> tuple[str, ...] | None:
    e = mf.get(section, "coordinates")
    if e is None:
        return None
    names = []
    for name, off in _list(e):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise mf.error(f"invalid coordinate name {name!r}", e, off)
        if name in names:
            raise mf.error(f"duplicate coordinate {name!r}", e, off)
        names.append(name)
    if len(names) < 2:
        raise mf.error("a chart needs at least two coordinates", e)
    return tuple(names)


def _index(mf: MetricFile, entry: Entry, token: str, names: tuple[str, ...], size: int) -> int:
    if token.isdigit():
        i = int(token)
    elif token in names:
        i = names.index(token)
    else:
        raise mf.error(f"unknown index {token!r}", entry, at_key=True)
    if not 0 <= i < size:
        raise mf.error(f"index {token} out of range", entry, at_key=True)
    return i


def _matrix(mf: MetricFile, section: str, key: str, names, size: int, index_names=None, default=None):
    """Symmetric matrix from ``key[i][j]`` entries; missing entries are zero (or ``default``)."""
    index_names = names if index_names is None else index_names
    got: dict[tuple[int, int], tuple] = {}
    for e in mf.indexed(section, key):
        if len(e.indices) != 2:
            raise mf.error(f"{key} needs two indices", e, at_key=True)
        i = _index(mf, e, e.indices[0], index_names, size)
        j = _index(mf, e, e.indices[1], index_names, size)
        val = _expr(mf, e, names)
        for p in ((i, j), (j, i)):
            if p in got and got[p][0] != val:
                raise mf.error(f"conflicting values for {key}[{p[0]}][{p[1]}]", e)
            got[p] = (val, e)
    M = []
    for i in range(size):
        row = []
        for j in range(size):
            if (i, j) in got:
                row.append(got[(i, j)][0])
            else:
                row.append(default(i, j) if default else 0)
        M.append(row)
    return M


# builders ---------------------------------------------------------------


def _zoo_from_section(mf: MetricFile, section: str, depth: int = 0, probe=None) -> MetricField:
    if depth > 8:
        raise mf.error("product nesting too deep")
    fam_e = mf.get(section, "family")
    if fam_e is None:
        raise MetricFileError(f"[{section}] needs a 'family' entry", mf.section_lines.get(section, 0), 1, mf.source)
    family = fam_e.value.strip()
    names = _coordinates(mf, section) or (_coordinates(mf, "chart") if section == "zoo" else None)
    n_e = mf.get(section, "n")
    try:
        if family == "flat":
            n = _int(mf, n_e, len(names) if names else None)
            return zoo.flat(n, lorentzian=_bool(mf, mf.get(section, "lorentzian"), True), names=names)
        if family == "constant_curvature":
            n = _int(mf, n_e, len(names) if names else None)
            k_e = mf.get(section, "K")
            if k_e is None:
                raise mf.error("constant_curvature needs K", fam_e)
            return zoo.constant_curvature(n, _rational(mf, k_e), lorentzian=_bool(mf, mf.get(section, "lorentzian"), True),
                                          names=names, probe=probe)
        if family in ("plane_wave", "brinkmann"):
            n = _int(mf, n_e, len(names) if names else None)
            bnames = names or tuple(["u", "v"] + [f"x{i}" for i in range(1, n - 1)])
            if len(bnames) != n:
                raise mf.error("coordinates do not match n", n_e or fam_e)
            tnames = bnames[2:]
            if family == "plane_wave":
                a = _matrix(mf, section, "a", bnames, n - 2, index_names=tnames)
                return zoo.plane_wave(n, a, names=bnames, probe=probe)
            H_e = mf.get(section, "H")
            H = _expr(mf, H_e, bnames) if H_e else 0
            W = [0] * (n - 2)
            for e in mf.indexed(section, "W"):
                W[_index(mf, e, e.indices[0], tnames, n - 2)] = _expr(mf, e, bnames)
            h = _matrix(mf, section, "h", bnames, n - 2, index_names=tnames,
                        default=lambda i, j: 1 if i == j else 0)
            return zoo.brinkmann(n, H, W, h, names=bnames, probe=probe)
        if family == "product":
            b_e = mf.get(section, "blocks")
            if b_e is None:
                raise mf.error("product needs 'blocks'", fam_e)
            blocks = []
            for name, off in _list(b_e):
                sec = f"zoo.{name}"
                if sec not in mf.sections:
                    raise mf.error(f"no section [{sec}]", b_e, off)
                blocks.append(_zoo_from_section(mf, sec, depth + 1))
            return zoo.product(blocks, probe=probe)
        if family == "flat_extension":
            b_e = mf.get(section, "block")
            if b_e is None:
                raise mf.error("flat_extension needs 'block'", fam_e)
            sec = f"zoo.{b_e.value.strip()}"
            if sec not in mf.sections:
                raise mf.error(f"no section [{sec}]", b_e)
            block = _zoo_from_section(mf, sec, depth + 1)
            extra = _int(mf, mf.get(section, "extra"), 1)
            return zoo.flat_extension(block, extra, timelike=_bool(mf, mf.get(section, "timelike"), False),
                                      names=names)
    except zoo.ZooError as err:
        raise mf.error(str(err), fam_e) from err
    raise mf.error(f"unknown family {family!r}; expected one of {', '.join(zoo.FAMILIES)}", fam_e)


def build_metric(mf: MetricFile, probe=None) -> MetricField:
    has_metric = "metric" in mf.sections
    has_zoo = "zoo" in mf.sections
    if has_metric == has_zoo:
        raise mf.error("exactly one of [metric] or [zoo] is required")
    if probe is None:
        pe = mf.get("options", "probe")
        probe = parse_probe(mf, pe) if pe else None
    if has_zoo:
        try:
            return _zoo_from_section(mf, "zoo", probe=probe)
        except GeometryError as err:
            raise mf.error(str(err), mf.get("zoo", "family")) from err
    names = _coordinates(mf, "chart")
    if names is None:
        raise MetricFileError("[chart] needs 'coordinates'", mf.section_lines.get("chart", 0), 1, mf.source)
    g = _matrix(mf, "metric", "g", names, len(names))
    lorentzian = _bool(mf, mf.get("options", "lorentzian"), True)
    try:
        return MetricField(Chart(names), g, lorentzian=lorentzian, probe=probe, name="explicit")
    except GeometryError as err:
        first = (mf.sections.get("metric") or [None])[0]
        raise mf.error(str(err), first) from err


def build_tensor(mf: MetricFile, m: MetricField) -> TensorField | None:
    if "tensor" not in mf.sections:
        return None
    names = m.chart.names
    h = _matrix(mf, "tensor", "h", names, m.n)
    comps = [[x if not isinstance(x, int) else m.chart.const(x) for x in row] for row in h]
    return TensorField(m.chart, (COV, COV), comps, symmetry="symmetric2")


def options(mf: MetricFile) -> dict:
    out = {}
    for e in mf.sections.get("options", []):
        if e.key not in OPTION_KEYS or e.indices:
            raise mf.error(f"unknown option {e.key!r}", e)
    if (e := mf.get("options", "kmax")) is not None:
        out["kmax"] = _int(mf, e)
    if (e := mf.get("options", "seed")) is not None:
        out["seed"] = _int(mf, e)
    if (e := mf.get("options", "samples")) is not None:
        out["samples"] = _int(mf, e)
    if (e := mf.get("options", "probe")) is not None:
        out["probe"] = parse_probe(mf, e)
    return out


def emit_metric_file(m: MetricField) -> str:
    """Explicit-component metric file for ``m``."""
    lines = ["[chart]", "coordinates = " + ", ".join(m.chart.names), "", "[metric]"]
    for i in range(m.n):
        for j in range(i + 1):
            if not m.g[i, j].is_zero():
                lines.append(f'g[{i}][{j}] = "{m.g[i, j]}"')
    lines += ["", "[options]", f"lorentzian = {'true' if m.lorentzian else 'false'}",
              "probe = " + ", ".join(str(p) for p in m.probe), ""]
    return "\n".join(lines)
