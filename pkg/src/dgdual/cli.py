"""``dgd``: run sessions, verify the corpus, and one-off computations.

Exit codes: 0 when every command is ok, 1 when any command errors or a
check fails, 2 on a parse error (session file or command line).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .dsl import COMMANDS, VERIFY_SIGNATURES, DSLError, SessionAST, parse_session, parse_window
from .poly.groebner import buchberger
from .poly.ring import ExprSyntaxError, format_poly, parse_poly, poly_ring
from .resolution import DEFAULT_FLOOR_CAP
from .session import Options, Report, document, render_text, run_session

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


def default_corpus() -> Path:
    return Path(str(resources.files("dgdual").joinpath("corpus")))


def _window_arg(text: str) -> tuple:
    try:
        return parse_window(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--window", type=_window_arg, default=None, metavar="a..b",
                   help="cohomological window (default -6..6)")
    p.add_argument("--floor-cap", type=int, default=DEFAULT_FLOOR_CAP, metavar="N",
                   help="maximum span of any resolution")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--corpus", type=Path, default=None, metavar="PATH",
                   help="corpus directory (default: the shipped corpus)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="dgd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", parents=[common], help="run a session file")
    p.add_argument("file", type=Path)

    p = sub.add_parser("verify", parents=[common], help="verify corpus instances")
    p.add_argument("family", choices=("all",) + tuple(VERIFY_SIGNATURES))
    p.add_argument("--instance", action="append", default=None,
                   help="restrict to a corpus instance (repeatable)")

    p = sub.add_parser("gb", parents=[common], help="reduced Groebner basis")
    p.add_argument("polys", help="comma-separated generators")
    p.add_argument("--vars", required=True, help="comma-separated variable names")
    p.add_argument("--order", default="grevlex", choices=("lex", "grevlex", "deglex"))
    p.add_argument("--field", default=None, help="a prime p or QQ (default 32003)")

    shortcuts = {
        "resolve": ["module"], "cohomology": ["module"], "rhom": ["source", "target"],
        "tensor": ["left", "right"], "hochschild": ["ring", "left", "right"],
        "rigid": ["ring"], "shriek": ["map", "module"], "omega": ["map"],
    }
    for name, args in shortcuts.items():
        p = sub.add_parser(name, parents=[common], help=f"{name} on names from a session file")
        for a in args:
            p.add_argument(a)
        p.add_argument("--session", type=Path, required=True,
                       help="session file with the declarations")
        if name == "resolve":
            p.add_argument("--floor", type=int, default=None)
        if name == "cohomology":
            p.add_argument("--degree", type=int, default=None)
    return parser


def _normalize_argv(argv: list) -> list:
    """``--window -6..6`` -> ``--window=-6..6`` (argparse reads -6..6 as a flag)."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--window" and i + 1 < len(argv):
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _options(args, only=None) -> Options:
    return Options(window=args.window, floor_cap=args.floor_cap, only=only)


def _emit(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(render_text(doc))


def _exit_code(reports: list) -> int:
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _parse_error_doc(source: str, err: DSLError) -> dict:
    doc = document([], source)
    doc["summary"]["passed"] = False
    doc["parse_error"] = err.to_json()
    return doc


def _emit_parse_error(source: str, err: DSLError, fmt: str, out) -> int:
    if fmt == "json":
        _emit(_parse_error_doc(source, err), fmt, out)
    else:
        out.write(f"{source}: {err.kind} at {err}\n")
    return EXIT_PARSE


# ------------------------------------------------------------ subcommands

def cmd_run(args, out) -> int:
    text = args.file.read_text(encoding="utf-8")
    try:
        ast = parse_session(text)
    except DSLError as e:
        return _emit_parse_error(str(args.file), e, args.format, out)
    reports = run_session(ast, _options(args))
    _emit(document(reports, str(args.file)), args.format, out)
    return _exit_code(reports)


def load_instance(path: Path):
    """(ast, expectations, problem) for one corpus file."""
    exp_path = path.with_suffix(".expected.json")
    ast = parse_session(path.read_text(encoding="utf-8"))
    if not exp_path.exists():
        return ast, None, f"missing expected-value file {exp_path.name}"
    try:
        data = json.loads(exp_path.read_text(encoding="utf-8"))
        records = {}
        for rec in data["expected"]:
            if not isinstance(rec, dict) or "command" not in rec or "provenance" not in rec:
                raise ValueError("every expected record needs 'command' and 'provenance'")
            records[rec["command"]] = rec
    except (ValueError, KeyError, TypeError) as e:
        return ast, None, f"unreadable expected-value file {exp_path.name}: {e}"
    return ast, records, None


def cmd_verify(args, out) -> int:
    corpus = args.corpus or default_corpus()
    files = sorted(corpus.glob("*.dgd"))
    if args.instance:
        names = set(args.instance)
        files = [f for f in files if f.stem in names]
        missing = names - {f.stem for f in files}
        if missing:
            out.write(f"unknown instance(s): {', '.join(sorted(missing))}\n")
            return EXIT_FAIL
    if not files:
        out.write(f"no corpus instances under {corpus}\n")
        return EXIT_FAIL
    only = None if args.family == "all" else {args.family}
    all_reports, instances = [], []
    parse_failed = False
    for path in files:
        try:
            ast, records, problem = load_instance(path)
        except DSLError as e:
            parse_failed = True
            instances.append({"name": path.stem, "status": "error", "error": f"{e.kind}: {e}"})
            continue
        if problem:
            instances.append({"name": path.stem, "status": "error", "error": problem})
            continue
        reports = run_session(ast, _options(args, only), records)
        for r in reports:
            r.result.setdefault("instance", path.stem)
            if records is not None and r.command not in records:
                r.status = "fail" if r.status == "ok" else r.status
                r.warnings.append("no expected value recorded for this command")
        if only is None:
            seen = {r.command for r in reports}
            for cmd_text in records:
                if cmd_text not in seen:
                    reports.append(Report(len(reports), 0, cmd_text, "verify", [], None, "fail",
                                          warnings=["expected value has no matching command"]))
        status = "ok" if all(r.ok for r in reports) else "fail"
        if reports or only is None:
            instances.append({"name": path.stem, "status": status, "error": None})
        all_reports += reports
    if only is not None and not all_reports and not any(i["status"] == "error" for i in instances):
        out.write(f"no '{args.family}' checks in the selected instances\n")
        return EXIT_FAIL
    doc = document(all_reports, str(corpus), {"instances": instances})
    doc["summary"]["passed"] = doc["summary"]["passed"] and all(i["status"] == "ok" for i in instances)
    _emit(doc, args.format, out)
    if parse_failed:
        return EXIT_PARSE
    return EXIT_OK if doc["summary"]["passed"] else EXIT_FAIL


def cmd_gb(args, out) -> int:
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    try:
        P = poly_ring(names, args.field if args.field is None or args.field.upper() in ("QQ", "Q")
                      else int(args.field), args.order)
        gens = [parse_poly(t, P) for t in _split_top(args.polys)]
    except (ExprSyntaxError, ValueError) as e:
        out.write(f"parse error: {e}\n")
        return EXIT_PARSE
    basis = buchberger([g for g in gens if g], args.order) if any(gens) else []
    rep = Report(0, 0, f"gb {args.polys}", "gb", names, None,
                 result={"order": args.order, "basis": [format_poly(g) for g in basis],
                         "size": len(basis)})
    _emit(document([rep], None), args.format, out)
    return EXIT_OK


def _split_top(text: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def cmd_shortcut(args, out) -> int:
    text = args.session.read_text(encoding="utf-8")
    names = {
        "resolve": ["module"], "cohomology": ["module"], "rhom": ["source", "target"],
        "tensor": ["left", "right"], "hochschild": ["ring", "left", "right"],
        "rigid": ["ring"], "shriek": ["map", "module"], "omega": ["map"],
    }[args.cmd]
    line = " ".join([args.cmd] + [getattr(args, n) for n in names])
    if args.cmd == "resolve" and args.floor is not None:
        line += f" floor={args.floor}"
    if args.cmd == "cohomology" and args.degree is not None:
        line += f" {args.degree}"
    try:
        ast = parse_session(text)
        decls = SessionAST(list(ast.declarations), ast.env, ast.kinds)
        parse_session(line, into=decls, first_line=len(text.splitlines()) + 1)
    except DSLError as e:
        return _emit_parse_error(str(args.session), e, args.format, out)
    reports = run_session(decls, _options(args))
    _emit(document(reports, str(args.session)), args.format, out)
    return _exit_code(reports)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        if args.cmd == "run":
            return cmd_run(args, out)
        if args.cmd == "verify":
            return cmd_verify(args, out)
        if args.cmd == "gb":
            return cmd_gb(args, out)
        if args.cmd in COMMANDS:
            return cmd_shortcut(args, out)
    except FileNotFoundError as e:
        out.write(f"error: {e}\n")
        return EXIT_FAIL
    parser.error(f"unknown command {args.cmd}")
    return EXIT_PARSE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
