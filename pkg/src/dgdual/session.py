"""Evaluate parsed sessions into JSON-serializable reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources

from . import lab
from .derived import Derived, Settings, derived_tensor, exact, hochschild, rhom
from .dsl import Command, SessionAST, parse_session, parse_window
from .duality import check_rigidity, omega_smooth, rigid_dualizing, shriek
from .errors import DGError
from .poly.groebner import buchberger
from .poly.ring import format_poly
from .resolution import DEFAULT_FLOOR_CAP, semifree_resolution

DEFAULT_WINDOW = (-6, 6)
SCHEMA_VERSION = "1.0"
CONNECTED_NOTE = "Spec H0(B) is assumed connected; this is not checked"
RHO_NOTE = "rigidity compared on cohomology only; the rigidifying isomorphism is not tracked"
_SHRIEK_FAMILIES = {"finite", "smooth", "base_change", "compose"}


@dataclass
class Options:
    window: tuple | None = None       # overrides the default, not explicit window= options
    floor_cap: int = DEFAULT_FLOOR_CAP
    depth: int = 0
    only: set | None = None           # restrict to these command names / verify families


@dataclass
class Report:
    index: int
    line: int
    command: str
    operation: str
    inputs: list
    window: list | None
    status: str = "ok"                # ok | fail | error
    fingerprint: dict | None = None
    result: dict = dc_field(default_factory=dict)
    provenance: list = dc_field(default_factory=list)
    warnings: list = dc_field(default_factory=list)
    error: dict | None = None
    timing: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        return json.loads(json.dumps({
            "index": self.index, "line": self.line, "command": self.command,
            "operation": self.operation, "inputs": self.inputs, "window": self.window,
            "status": self.status, "fingerprint": self.fingerprint, "result": self.result,
            "provenance": self.provenance, "warnings": self.warnings, "error": self.error,
            "timing": round(self.timing, 4),
        }, default=str))


def _window(cmd: Command, opts: Options) -> tuple:
    if "window" in cmd.options:
        return parse_window(cmd.options["window"])
    return opts.window or DEFAULT_WINDOW


def _settings(cmd: Command, opts: Options) -> Settings:
    depth = int(cmd.options.get("depth", opts.depth))
    return Settings(depth=depth, cap=opts.floor_cap)


def _fp(X: Derived, window) -> dict:
    return X.fingerprint(window).to_json()


def _derived_result(X: Derived) -> dict:
    return {"certified": X.cert_json(), "exact": X.exact}


# ------------------------------------------------------------ operations

def _op_gb(cmd, objs, window, settings, rep):
    target = objs[0]
    if isinstance(target, tuple):
        ring, gens = target
    else:
        ring, gens = target, list(target.ideal_gb)
    order = cmd.options.get("order", ring.poly.order.kind)
    basis = buchberger(gens, order) if gens else []
    rep.window = None
    rep.result = {"order": order, "basis": [format_poly(g) for g in basis], "size": len(basis)}


def _op_resolve(cmd, objs, window, settings, rep):
    M = objs[0]
    floor = int(cmd.options.get("floor", window[0]))
    res = semifree_resolution(M.module, floor, cap=settings.cap)
    rep.window = None
    rep.result = res.to_json()
    rep.result["generators_total"] = res.complex.ngens


def _op_cohomology(cmd, objs, window, settings, rep):
    M = objs[0]
    if len(objs) > 1:
        window = (objs[1], objs[1])
        rep.window = list(window)
    rep.fingerprint = _fp(M, window)
    rep.result = _derived_result(M)


def _op_rhom(cmd, objs, window, settings, rep):
    X = rhom(objs[0], objs[1], window, settings)
    rep.fingerprint = _fp(X, window)
    rep.result = _derived_result(X)
    rep.provenance = X.provenance


def _op_tensor(cmd, objs, window, settings, rep):
    X = derived_tensor(objs[0], objs[1], window, settings)
    rep.fingerprint = _fp(X, window)
    rep.result = _derived_result(X)
    rep.provenance = X.provenance


def _op_hochschild(cmd, objs, window, settings, rep):
    X = hochschild(objs[0], objs[1], objs[2], window, settings)
    rep.fingerprint = _fp(X, window)
    rep.result = _derived_result(X)
    rep.provenance = X.provenance


def _op_rigid(cmd, objs, window, settings, rep):
    datum = rigid_dualizing(objs[0])
    check = check_rigidity(objs[0], datum, window, settings)
    rep.fingerprint = check["R"].to_json()
    rep.result = datum.to_json()
    rep.result["rigidity"] = {"hochschild": check["hochschild"].to_json(), "pass": check["pass"]}
    rep.provenance = list(datum.trace)
    rep.warnings.append(RHO_NOTE)
    if not check["pass"]:
        rep.status = "fail"


def _op_omega(cmd, objs, window, settings, rep):
    om = omega_smooth(objs[0])
    m = -om.gmax
    rep.fingerprint = _fp(exact(om), window)
    rep.result = {"omega": f"B[{m}]", "relative_dimension": m}
    rep.warnings.append(CONNECTED_NOTE)


def _op_shriek(cmd, objs, window, settings, rep):
    X = shriek(objs[0], objs[1], window, settings)
    rep.fingerprint = _fp(X, window)
    rep.result = _derived_result(X)
    rep.provenance = X.provenance
    rep.warnings.append(CONNECTED_NOTE)


def _op_verify(cmd, objs, window, settings, rep):
    fam = cmd.args[0]
    fn = getattr(lab, f"verify_{fam}")
    if fam == "unit":
        vr = fn(objs[0], window, samples=objs[1:], settings=settings)
    else:
        vr = fn(*objs, window, settings=settings)
    rep.result = vr.to_json()
    rep.fingerprint = vr.left.to_json() if vr.left else None
    if not vr.passed:
        rep.status = "fail"
    rep.warnings.append(vr.caveat)
    if fam in _SHRIEK_FAMILIES:
        rep.warnings.append(CONNECTED_NOTE)


_OPS = {
    "gb": _op_gb, "resolve": _op_resolve, "cohomology": _op_cohomology, "rhom": _op_rhom,
    "tensor": _op_tensor, "hochschild": _op_hochschild, "rigid": _op_rigid, "omega": _op_omega,
    "shriek": _op_shriek, "verify": _op_verify,
}


# ------------------------------------------------------------ expectations

def _nonzero(fp: dict | None) -> dict:
    if not fp:
        return {}
    return {i: r for i, r in fp["degrees"].items() if r != {"dim": 0}}


def check_expectation(rep: Report, exp: dict) -> list:
    """Mismatches between a report and an expected-value record."""
    problems = []
    if "status" in exp and exp["status"] != rep.status:
        problems.append(f"status {rep.status}, expected {exp['status']}")
    if "verdict" in exp and rep.result.get("verdict") != exp["verdict"]:
        problems.append(f"verdict {rep.result.get('verdict')}, expected {exp['verdict']}")
    checks = [("fingerprint", rep.fingerprint)]
    if rep.operation == "verify":
        checks = [("left", rep.result.get("left")), ("right", rep.result.get("right"))]
    for key, got in checks:
        if key in exp and _nonzero(got) != exp[key]:
            problems.append(f"{key} {_nonzero(got)}, expected {exp[key]}")
    if "rigidity" in exp and rep.result.get("rigidity", {}).get("pass") != exp["rigidity"]:
        problems.append(f"rigidity {rep.result.get('rigidity', {}).get('pass')}, expected {exp['rigidity']}")
    for key in ("generators", "exact", "basis"):
        if key in exp and rep.result.get(key) != exp[key]:
            problems.append(f"{key} {rep.result.get(key)}, expected {exp[key]}")
    return problems


# ------------------------------------------------------------ running

def _selected(cmd: Command, opts: Options) -> bool:
    if opts.only is None:
        return True
    if cmd.name == "verify":
        return "verify" in opts.only or (cmd.args and cmd.args[0] in opts.only)
    return cmd.name in opts.only


def run_command(cmd: Command, index: int, opts: Options, expected: dict | None = None) -> Report:
    objs = getattr(cmd, "_objects", [])
    window = None
    rep = Report(index, cmd.span.line if cmd.span else 0, cmd.text,
                 cmd.args[0] if cmd.name == "verify" and cmd.args else cmd.name,
                 [a for a in cmd.args if cmd.name != "verify" or a != cmd.args[0]], None)
    if cmd.name == "verify":
        rep.operation = "verify"
        rep.result = {"family": cmd.args[0]}
    t0 = time.perf_counter()
    try:
        window = _window(cmd, opts)
        rep.window = list(window)
        _OPS[cmd.name](cmd, objs, window, _settings(cmd, opts), rep)
    except (DGError, ValueError, ArithmeticError, KeyError, TypeError) as e:
        rep.status = "error"
        rep.error = {"type": type(e).__name__, "message": str(e)}
    rep.timing = time.perf_counter() - t0
    if expected is not None and rep.status != "error":
        problems = check_expectation(rep, expected)
        rep.result["expected"] = {"provenance": expected.get("provenance"), "match": not problems}
        if problems:
            rep.status = "fail"
            rep.warnings += [f"expectation mismatch: {p}" for p in problems]
    return rep


def run_session(ast: SessionAST, opts: Options | None = None, expectations: dict | None = None) -> list:
    """Run the commands in order; one failing command does not stop the others.

    ``expectations`` maps the rendered command text to an expected-value record.
    """
    opts = opts or Options()
    reports = []
    for k, cmd in enumerate(ast.commands):
        if not _selected(cmd, opts):
            continue
        exp = None if expectations is None else expectations.get(cmd.text)
        reports.append(run_command(cmd, k, opts, exp))
    return reports


def run_text(text: str, opts: Options | None = None, expectations: dict | None = None) -> list:
    return run_session(parse_session(text), opts, expectations)


def document(reports: list, source: str | None = None, extra: dict | None = None) -> dict:
    counts = {"ok": 0, "fail": 0, "error": 0}
    for r in reports:
        counts[r.status] += 1
    doc = {
        "schema_version": SCHEMA_VERSION,
        "source": source,
        "reports": [r.to_json() for r in reports],
        "summary": {"total": len(reports), **counts, "passed": counts["fail"] == counts["error"] == 0},
    }
    if extra:
        doc.update(extra)
    return doc


def schema() -> dict:
    return json.loads(resources.files("dgdual").joinpath("report.schema.json").read_text())


# ------------------------------------------------------------ text rendering

def _fmt_record(i, r) -> str:
    if "dim" in r:
        return f"H^{i}: dim {r['dim']}"
    return f"H^{i}: {r['gens']} gen(s), ann ({', '.join(r['ann']) or '0'})"


def _fmt_fp(fp: dict | None) -> str:
    if not fp:
        return "-"
    nz = _nonzero(fp)
    if not nz:
        return f"0 on [{fp['window'][0]}, {fp['window'][1]}]"
    return "; ".join(_fmt_record(i, r) for i, r in sorted(nz.items(), key=lambda t: int(t[0])))


def render_text(doc: dict) -> str:
    """Human-readable form of a report document; uses nothing but the JSON."""
    lines = []
    if doc.get("source"):
        lines.append(f"== {doc['source']}")
    for r in doc["reports"]:
        where = f"line {r['line']}: " if r['line'] else ""
        head = f"[{r['status'].upper():5}] {where}{r['command']}"
        if r.get("window"):
            head += f"  window {r['window'][0]}..{r['window'][1]}"
        lines.append(head + f"  ({r['timing']:.3f}s)")
        if r["error"]:
            lines.append(f"        error {r['error']['type']}: {r['error']['message']}")
        res = r["result"]
        if r["operation"] == "verify" and "left" in res:
            lines.append(f"        left:  {_fmt_fp(res['left'])}")
            lines.append(f"        right: {_fmt_fp(res['right'])}")
            lines.append(f"        verdict: {res['verdict']}")
            for d in res.get("details", []):
                lines.append(f"        {d}")
        elif r["fingerprint"]:
            lines.append(f"        {_fmt_fp(r['fingerprint'])}")
        if r["operation"] == "gb" and "basis" in res:
            lines.append(f"        basis ({res['order']}): {', '.join(res['basis']) or '0'}")
        if r["operation"] == "resolve" and "generators" in res:
            gens = ", ".join(f"deg {d}: {c}" for d, c in res["generators"].items()) or "none"
            lo, hi = res["cert_window"]
            lines.append(f"        generators {gens}; exact {res['exact']}; "
                         f"certified {'-inf' if lo is None else lo}..{hi}")
        if r["operation"] == "rigid" and "rigidity" in res:
            lines.append(f"        rigidity: {'pass' if res['rigidity']['pass'] else 'fail'}")
        if r["operation"] == "omega" and "omega" in res:
            lines.append(f"        Omega = {res['omega']}")
        if "certified" in res:
            lo, hi = res["certified"]
            lines.append(f"        certified {'-inf' if lo is None else lo}..{'inf' if hi is None else hi}")
        if "expected" in res:
            lines.append(f"        expected {res['expected']['provenance']}: "
                         f"{'match' if res['expected']['match'] else 'MISMATCH'}")
        for w in r["warnings"]:
            lines.append(f"        note: {w}")
    s = doc["summary"]
    lines.append(f"-- {s['total']} command(s): {s['ok']} ok, {s['fail']} fail, {s['error']} error")
    for key in ("instances",):
        for inst in doc.get(key, []):
            lines.append(f"   instance {inst['name']}: {inst['status']}")
    return "\n".join(lines) + "\n"
