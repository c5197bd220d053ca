"""Command-line front end.

Exit status is 0 when a check passes, 1 when it fails with a witness and 2 on
any input error. Errors print as one ``ClassName: message`` line on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import fixtures
from .dsl import (
    Workspace, format_state, format_update, format_view, format_view_state,
    parse_workspace,
)
from .errors import CCViewError, InvalidView, ParseError, ResolutionError
from .relcore import DatabaseSchema, DatabaseState, Update, enumerate_states
from .translate import TranslatorReport, check_translator, classify_join, translate
from .verify import CorrespondenceReport, correspondence, delete_all_heuristic
from .views import Label, Product, Tabulated, complement_of, evaluate, output_schema


class UsageError(CCViewError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# structured output

def rows_json(rows, table) -> list:
    return [list(r) for r in table.sorted_rows(rows)]


def state_json(s: DatabaseState, schema: DatabaseSchema) -> dict:
    return {t.name: rows_json(rows, t) for t, rows in zip(schema.tables, s.tables)}


def update_json(u: Update, schema: DatabaseSchema) -> dict:
    return {
        t.name: {"add": rows_json(a, t), "delete": rows_json(d, t)}
        for t, a, d in zip(schema.tables, u.add, u.delete)
    }


def view_state_json(vs, view, schema: DatabaseSchema):
    if isinstance(view, Product):
        return [view_state_json(vs[0], view.left, schema), view_state_json(vs[1], view.right, schema)]
    if isinstance(vs, Label):
        return vs.name
    return state_json(vs, output_schema(view, schema))


class _Output:
    """Formats values of a workspace in the chosen format."""

    def __init__(self, ws: Workspace, view=None, fmt: str = "text"):
        self.schema = ws.schema
        self.view = view
        self.vschema = output_schema(view, self.schema) if view is not None else None
        self.json = fmt == "json"

    def _schema(self, side: str) -> DatabaseSchema:
        return self.schema if side == "base" else self.vschema

    def value(self, side: str, v):
        schema = self._schema(side)
        if isinstance(v, Update):
            return update_json(v, schema) if self.json else format_update(v, schema)
        if self.json:
            return state_json(v, schema)
        return format_state(v, schema)

    def witness(self, w) -> object:
        if self.json:
            return {"note": w.note, "items": [[lbl, self.value(side, v)] for lbl, side, v in w.items]}
        return [w.note] + [f"{lbl}: {self.value(side, v)}" for lbl, side, v in w.items]


def translator_output(report: TranslatorReport, out: _Output):
    if out.json:
        return {
            "ok": report.ok,
            "laws": [
                {"law": law.name, "ok": law.ok,
                 "witness": out.witness(law.witness) if law.witness else None}
                for law in report.laws
            ],
            "translations": report.translations,
            "compositions": report.compositions,
            "untranslatable": report.untranslatable,
        }
    lines = []
    for law in report.laws:
        lines.append(f"{law.name}: {'pass' if law.ok else 'FAIL'}")
        if law.witness:
            lines.extend("  " + line for line in out.witness(law.witness))
    lines.append(f"translations: {report.translations}, compositions: {report.compositions}, "
                 f"untranslatable: {report.untranslatable}")
    lines.append("translator: " + ("pass" if report.ok else "FAIL"))
    return "\n".join(lines)


def correspondence_output(report: CorrespondenceReport, complement, schema, fmt: str):
    if fmt == "json":
        if report.ok:
            return {"ok": True, "blocks": [
                {"block": b, "complement": view_state_json(v, complement, schema)}
                for b, v in report.witness]}
        note, s1, s2 = report.violation
        return {"ok": False, "note": note,
                "states": [state_json(s1, schema), state_json(s2, schema)]}
    if report.ok:
        lines = ["correspondence: pass"]
        lines += [f"  block {b} -> {format_view_state(v, complement, schema)}"
                  for b, v in report.witness]
    else:
        note, s1, s2 = report.violation
        lines = ["correspondence: FAIL", f"  {note}",
                 f"  s1: {format_state(s1, schema)}", f"  s2: {format_state(s2, schema)}"]
    return "\n".join(lines)


# commands

def _load(args) -> Workspace:
    ws = Workspace()
    for name in args.fixture or ():
        if name not in fixtures.NAMES:
            raise ResolutionError(f"no fixture named {name!r}")
        parse_workspace(fixtures.text(name), ws)
    for path in args.input or ():
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        try:
            parse_workspace(text, ws)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from None
    if len(ws.schema) == 0:
        raise ResolutionError("workspace declares no tables")
    return ws


def _operator_view(ws: Workspace, name: str):
    view = ws.get("views", name)
    if isinstance(view, (Product, Tabulated)) or output_schema(view, ws.schema) is None:
        raise InvalidView(f"view {name!r} has no relational view states to update")
    return view


def cmd_eval(args, ws):
    view = ws.get("views", args.view)
    vs = evaluate(view, ws.get("states", args.state), ws.schema)
    if args.format == "json":
        return view_state_json(vs, view, ws.schema), 0
    return format_view_state(vs, view, ws.schema), 0


def cmd_translate(args, ws):
    view = _operator_view(ws, args.view)
    u = ws.get("updates", args.update).bind(output_schema(view, ws.schema))
    t = translate(view, ws.get("strategies", args.strategy), u, ws.get("states", args.state), ws.schema)
    if args.format == "json":
        return update_json(t, ws.schema), 0
    return format_update(t, ws.schema), 0


def cmd_check(args, ws):
    view = _operator_view(ws, args.view)
    report = check_translator(view, ws.get("strategies", args.strategy), ws.schema)
    return translator_output(report, _Output(ws, view, args.format)), 0 if report.ok else 1


def cmd_complement(args, ws):
    comp = complement_of(ws.get("views", args.view), ws.schema)
    text = format_view(comp, ws)
    return ({"view": args.view, "complement": text} if args.format == "json" else text), 0


def cmd_correspond(args, ws):
    view = _operator_view(ws, args.view)
    comp = ws.get("views", args.complement)
    report = correspondence(view, ws.get("strategies", args.strategy), comp, ws.schema)
    return correspondence_output(report, comp, ws.schema, args.format), 0 if report.ok else 1


def cmd_classify(args, ws):
    kind = classify_join(ws.schema, ws.get("views", args.join)).value
    return ({"join": args.join, "kind": kind} if args.format == "json" else kind), 0


def cmd_enumerate(args, ws):
    states = enumerate_states(ws.schema, max_tuples=args.max_tuples)
    if args.format == "json":
        return [state_json(s, ws.schema) for s in states], 0
    return "\n".join(f"{i}: {format_state(s, ws.schema)}" for i, s in enumerate(states)), 0


def cmd_heuristic(args, ws):
    view = _operator_view(ws, args.view)
    r = delete_all_heuristic(view, ws.get("strategies", args.strategy),
                             ws.get("states", args.state), ws.schema)
    return (state_json(r, ws.schema) if args.format == "json" else format_state(r, ws.schema)), 0


def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite flags given before the subcommand
        p = _Parser(add_help=False, argument_default=argparse.SUPPRESS if suppress else None)
        p.add_argument("--input", action="append", metavar="FILE",
                       help="document to load; repeatable; '-' reads stdin")
        p.add_argument("--fixture", action="append", metavar="NAME",
                       help=f"shipped document to load: {', '.join(fixtures.NAMES)}")
        p.add_argument("--format", choices=("text", "json"),
                       **({} if suppress else {"default": "text"}))
        return p

    parser = _Parser(prog="ccview", parents=[common(False)],
                     description="Constant-complement view update toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, *flags):
        p = sub.add_parser(name, help=help_, parents=[common(True)])
        for flag in flags:
            p.add_argument(f"--{flag}", required=True)
        p.set_defaults(func=func)
        return p

    add("eval", cmd_eval, "print a view state", "view", "state")
    add("translate", cmd_translate, "translate a view update", "view", "strategy", "update", "state")
    add("check", cmd_check, "check the translator laws", "view", "strategy")
    add("complement", cmd_complement, "print the constructive complement", "view")
    add("correspond", cmd_correspond, "compare induced and complement partitions",
        "view", "strategy", "complement")
    add("classify", cmd_classify, "classify a join", "join")
    p = add("enumerate", cmd_enumerate, "list all states in canonical order")
    p.add_argument("--max-tuples", type=int, default=12)
    add("heuristic", cmd_heuristic, "residual state after deleting every view row",
        "view", "strategy", "state")
    return parser


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        ws = _load(args)
        result, code = args.func(args, ws)
    except (CCViewError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"{type(exc).__name__}: {message}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(result, indent=2))
    else:
        print(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
