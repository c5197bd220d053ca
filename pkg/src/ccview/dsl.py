"""Text format for schemas, states, views, updates and strategies.

One statement per line; newlines inside brackets are ignored and ``#`` starts a
comment::

    domain V = {a, b}
    domain A = {a1, a2} null nil        # nil is appended and is the null value
    table T(V)
    table P(K, D) key(0)
    table C(K, N) key(0, 1) fk(0 -> P.0) check not isnull c1
    state ab = {(a), (b)}               # shorthand for single-table schemas
    state s1 = P{(A, AAA)} C{}
    view f = select T where c0 = a
    view h = tabulated {ab -> b, a -> ab, b -> ab, empty -> empty}
    update u = +{(b)} -{(a)}            # or per table: C +{(A, 1)}
    strategy sel = selection

Columns are 0-based (``c0``). View and predicate syntax::

    select T where <pred>           project T cols 0, 1 [dropnull 1]
    union T U                       hierjoin parent=P child=C on 0=0
    fkjoin local=L foreign=F on 1=0 antijoin parent=P child=C on 0=0
    join T U on 1>=1, 2>=2          product (<view>) (<view>)
    tabulated {<state> -> <label>}  zero | one | <view name>

    <pred> := c<i> <op> (<value> | c<j>) | isnull c<i> | notnull c<i>
            | not <pred> | <pred> and <pred> | <pred> or <pred> | (<pred>)
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import predicate as P
from .errors import InvalidView, ParseError, ResolutionError, SchemaError
from .relcore import DatabaseSchema, DatabaseState, Domain, ForeignKey, TableSchema, Update
from .translate import KINDS, UNION_POLICIES, Strategy
from .views import (
    AntiJoin, FKJoin, HierJoin, One, Product, Projection, Selection, Tabulated, ThetaJoin,
    Union, Zero, output_schema,
)

KEYWORDS = {
    "select", "where", "project", "cols", "dropnull", "union", "hierjoin", "fkjoin",
    "antijoin", "join", "product", "tabulated", "zero", "one", "on", "and", "or", "not",
    "isnull", "notnull", "parent", "child", "local", "foreign",
}
VIEW_WORDS = {"select", "project", "union", "hierjoin", "fkjoin", "antijoin", "join", "product",
              "tabulated", "zero", "one"}
_BARE = re.compile(r"[A-Za-z0-9_]+\Z")
_COLUMN = re.compile(r"c(\d+)\Z")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<comment>\#[^\n]*) | (?P<nl>\n)
  | (?P<string>'(?:[^'\n]|'')*')
  | (?P<op>->|<=|>=|!=|<>|=|<|>)
  | (?P<punct>[{}(),.:+\-;*])
  | (?P<atom>[A-Za-z0-9_]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # atom, string, op, punct, nl, eof
    text: str
    line: int
    col: int

    @property
    def value(self) -> str:
        if self.kind == "string":
            return self.text[1:-1].replace("''", "'")
        return self.text


def tokenize(text: str) -> list:
    tokens, depth, line, start, pos = [], 0, 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind, tok = m.lastgroup, m.group()
        col = pos - start + 1
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("nl", "\n", line, col))
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            if kind == "op" and tok == "<>":
                tok = "!="
            if tok in "({":
                depth += 1
            elif tok in ")}":
                depth = max(0, depth - 1)
            tokens.append(Token(kind, tok, line, col))
        pos = m.end()
    tokens.append(Token("nl", "\n", line, pos - start + 1))
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


def quote(value) -> str:
    v = str(value)
    if _BARE.match(v) and v not in KEYWORDS and not _COLUMN.match(v):
        return v
    return "'" + v.replace("'", "''") + "'"


@dataclass(frozen=True)
class RawUpdate:
    """Update literal before binding to a (view) schema: ``(table or None, sign, rows)``."""

    items: tuple = ()

    def bind(self, schema: DatabaseSchema) -> Update:
        add = [set() for _ in schema.tables]
        dele = [set() for _ in schema.tables]
        for table, sign, rows in self.items:
            if table is None:
                if len(schema) != 1:
                    raise ResolutionError("update without table name on a multi-table schema")
                i = 0
            else:
                try:
                    i = schema.index(table)
                except KeyError:
                    raise ResolutionError(f"update names unknown table {table!r}") from None
            (add if sign == "+" else dele)[i].update(rows)
        return Update(tuple(add), tuple(dele))


@dataclass
class Workspace:
    domains: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)
    states: dict = field(default_factory=dict)
    views: dict = field(default_factory=dict)
    updates: dict = field(default_factory=dict)
    strategies: dict = field(default_factory=dict)
    _schema: Optional[DatabaseSchema] = None
    _raw_tables: list = field(default_factory=list)

    @property
    def schema(self) -> DatabaseSchema:
        if self._schema is None:
            self._freeze()
        return self._schema

    @property
    def frozen(self) -> bool:
        return self._schema is not None

    def _freeze(self) -> None:
        names = [name for name, *_ in self._raw_tables]
        tables = []
        for name, cols, key, fks, check in self._raw_tables:
            resolved = []
            for col, tname, fcol in fks:
                if tname not in names:
                    raise ResolutionError(f"foreign key of {name} references unknown table {tname!r}")
                resolved.append(ForeignKey(col, names.index(tname), fcol))
            try:
                tables.append(TableSchema(name, cols, key, tuple(resolved), check))
            except (SchemaError, InvalidView) as exc:
                raise ResolutionError(str(exc)) from None
        try:
            self._schema = DatabaseSchema(tuple(tables))
        except SchemaError as exc:
            raise ResolutionError(str(exc)) from None
        self.tables = list(tables)

    def state_name(self, s: DatabaseState) -> str:
        for name, value in self.states.items():
            if value == s:
                return name
        raise ResolutionError("tabulated view refers to an unnamed state")

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise ResolutionError(f"no {kind[:-1]} named {name!r}")
        return table[name]


class _Parser:
    def __init__(self, text: str, ws: Workspace):
        self.toks = tokenize(text)
        self.i = 0
        self.ws = ws

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("atom", "op", "punct") and self.tok.text == text

    def take(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text.strip() or self.tok.kind
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.take()

    def name(self) -> str:
        if self.tok.kind != "atom":
            raise self.error("expected a name")
        return self.take().text

    def value(self) -> str:
        if self.tok.kind not in ("atom", "string"):
            raise self.error("expected a value")
        return self.take().value

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "atom" or not tok.text.isdigit():
            raise self.error("expected a column number")
        self.i += 1
        return int(tok.text)

    def int_list(self) -> tuple:
        out = [self.integer()]
        while self.accept(","):
            out.append(self.integer())
        return tuple(out)

    def end_of_statement(self) -> None:
        if self.tok.kind != "nl":
            raise self.error(f"unexpected {self.tok.text!r}")
        self.i += 1

    # statements
    def parse(self) -> Workspace:
        while self.tok.kind != "eof":
            if self.tok.kind == "nl":
                self.i += 1
                continue
            head = self.tok
            handler = getattr(self, f"stmt_{head.text}", None)
            if head.kind != "atom" or handler is None:
                raise self.error(f"unknown statement {head.text!r}")
            self.i += 1
            handler(head)
            self.end_of_statement()
        return self.ws

    def _define(self, kind: str, name: str, value, tok: Token) -> None:
        table = getattr(self.ws, kind)
        if name in table:
            raise ResolutionError(f"line {tok.line}: duplicate {kind[:-1]} name {name!r}")
        table[name] = value

    def _schema_statement(self, tok: Token) -> None:
        if self.ws.frozen:
            raise self.error("domains and tables must precede states, views and updates", tok)

    def stmt_domain(self, head: Token) -> None:
        self._schema_statement(head)
        tok = self.tok
        name = self.name()
        self.expect("=")
        self.expect("{")
        values = []
        if not self.at("}"):
            values.append(self.value())
            while self.accept(","):
                values.append(self.value())
        self.expect("}")
        null = None
        if self.accept("null"):
            null = self.value()
            if null not in values:
                values.append(null)
        try:
            dom = Domain(name, tuple(values), null)
        except SchemaError as exc:
            raise self.error(str(exc), tok) from None
        self._define("domains", name, dom, tok)

    def stmt_table(self, head: Token) -> None:
        self._schema_statement(head)
        tok = self.tok
        name = self.name()
        if any(t[0] == name for t in self.ws._raw_tables):
            raise ResolutionError(f"line {tok.line}: duplicate table name {name!r}")
        self.expect("(")
        cols = [self.domain_ref()]
        while self.accept(","):
            cols.append(self.domain_ref())
        self.expect(")")
        key, fks, check = None, [], None
        while self.tok.kind == "atom":
            if self.accept("key"):
                self.expect("(")
                key = self.int_list()
                self.expect(")")
            elif self.accept("fk"):
                self.expect("(")
                while True:
                    col = self.integer()
                    self.expect("->")
                    tname = self.name()
                    self.expect(".")
                    fks.append((col, tname, self.integer()))
                    if not self.accept(","):
                        break
                self.expect(")")
            elif self.accept("check"):
                check = self.predicate()
            else:
                raise self.error(f"unexpected {self.tok.text!r} in table declaration")
        self.ws._raw_tables.append((name, tuple(cols), key, tuple(fks), check))

    def domain_ref(self) -> Domain:
        tok = self.tok
        name = self.name()
        if name not in self.ws.domains:
            raise ResolutionError(f"line {tok.line}: unknown domain {name!r}")
        return self.ws.domains[name]

    def table_ref(self) -> int:
        tok = self.tok
        name = self.name()
        try:
            return self.ws.schema.index(name)
        except KeyError:
            raise ResolutionError(f"line {tok.line}: unknown table {name!r}") from None

    def rows(self) -> frozenset:
        self.expect("{")
        rows = []
        while not self.at("}"):
            self.expect("(")
            row = [self.value()]
            while self.accept(","):
                row.append(self.value())
            self.expect(")")
            rows.append(tuple(row))
            if not self.accept(","):
                break
        self.expect("}")
        return frozenset(rows)

    def stmt_state(self, head: Token) -> None:
        tok = self.tok
        name = self.name()
        self.expect("=")
        schema = self.ws.schema
        tables = [frozenset() for _ in schema.tables]
        if self.at("{"):
            if len(schema) != 1:
                raise self.error("unnamed table rows in a multi-table schema")
            tables[0] = self.rows()
        else:
            while self.tok.kind == "atom":
                i = self.table_ref()
                tables[i] = self.rows()
        s = DatabaseState(tuple(tables))
        for t, rows in zip(schema.tables, s.tables):
            for r in rows:
                if not t.is_valid_row(r):
                    raise self.error(f"row {r} is not a valid tuple of table {t.name}", tok)
        self._define("states", name, s, tok)

    def stmt_view(self, head: Token) -> None:
        tok = self.tok
        name = self.name()
        if name in VIEW_WORDS:
            raise self.error(f"{name!r} is reserved", tok)
        self.expect("=")
        self.ws.schema
        self._define("views", name, self.view(), tok)

    def stmt_update(self, head: Token) -> None:
        tok = self.tok
        name = self.name()
        self.expect("=")
        items = []
        while self.tok.kind != "nl":
            table = self.name() if self.tok.kind == "atom" else None
            sign = self.take()
            if sign.text not in "+-" or sign.kind != "punct":
                raise self.error("expected '+' or '-'", sign)
            items.append((table, sign.text, self.rows()))
        self._define("updates", name, RawUpdate(tuple(items)), tok)

    def stmt_strategy(self, head: Token) -> None:
        tok = self.tok
        name = self.name()
        self.expect("=")
        kind_tok = self.tok
        kind = self.name()
        if kind not in KINDS:
            raise self.error(f"unknown strategy kind {kind!r}", kind_tok)
        policy = "both"
        if self.tok.kind == "atom":
            policy_tok = self.tok
            policy = self.name()
            if kind != "union" or policy not in UNION_POLICIES:
                raise self.error(f"unexpected policy {policy!r}", policy_tok)
        self._define("strategies", name, Strategy(kind, policy), tok)

    # views
    def join_pairs(self) -> tuple:
        pairs = []
        while True:
            i = self.integer()
            self.expect("=")
            pairs.append((i, self.integer()))
            if not self.accept(","):
                return tuple(pairs)

    def named_table(self, label: str) -> int:
        self.expect(label)
        self.expect("=")
        return self.table_ref()

    def view(self):
        tok = self.tok
        word = self.name()
        if word == "select":
            t = self.table_ref()
            self.expect("where")
            return Selection(t, self.predicate())
        if word == "project":
            t = self.table_ref()
            self.expect("cols")
            cols = self.int_list()
            drop = self.int_list() if self.accept("dropnull") else ()
            return Projection(t, cols, drop)
        if word == "union":
            return Union(self.table_ref(), self.table_ref())
        if word in ("hierjoin", "antijoin"):
            p = self.named_table("parent")
            c = self.named_table("child")
            self.expect("on")
            return (HierJoin if word == "hierjoin" else AntiJoin)(p, c, self.join_pairs())
        if word == "fkjoin":
            l = self.named_table("local")
            f = self.named_table("foreign")
            self.expect("on")
            return FKJoin(l, f, self.join_pairs())
        if word == "join":
            l, r = self.table_ref(), self.table_ref()
            self.expect("on")
            conds = []
            while True:
                i = self.integer()
                op = self.take()
                if op.kind != "op" or op.text not in P.OPS:
                    raise self.error("expected a comparison", op)
                conds.append((i, op.text, self.integer()))
                if not self.accept(","):
                    break
            return ThetaJoin(l, r, tuple(conds))
        if word == "product":
            self.expect("(")
            left = self.view()
            self.expect(")")
            self.expect("(")
            right = self.view()
            self.expect(")")
            return Product(left, right)
        if word == "tabulated":
            self.expect("{")
            entries = []
            while not self.at("}"):
                stok = self.tok
                sname = self.value()
                if sname not in self.ws.states:
                    raise ResolutionError(f"line {stok.line}: unknown state {sname!r}")
                self.expect("->")
                entries.append((self.ws.states[sname], self.value()))
                if not self.accept(","):
                    break
            self.expect("}")
            return Tabulated(tuple(entries))
        if word == "zero":
            return Zero()
        if word == "one":
            return One()
        if word in self.ws.views:
            return self.ws.views[word]
        raise ResolutionError(f"line {tok.line}: unknown view {word!r}")

    # predicates
    def predicate(self):
        left = self.conjunction()
        while self.accept("or"):
            left = P.Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.negation()
        while self.accept("and"):
            left = P.And(left, self.negation())
        return left

    def negation(self):
        if self.accept("not"):
            return P.Not(self.negation())
        return self.primary()

    def column(self) -> int:
        tok = self.tok
        m = _COLUMN.match(tok.text) if tok.kind == "atom" else None
        if m is None:
            raise self.error("expected a column reference like c0")
        self.i += 1
        return int(m.group(1))

    def primary(self):
        if self.accept("("):
            inner = self.predicate()
            self.expect(")")
            return inner
        if self.accept("isnull"):
            return P.IsNull(self.column())
        if self.accept("notnull"):
            return P.NotNull(self.column())
        col = self.column()
        op = self.take()
        if op.kind != "op" or op.text not in P.OPS:
            raise self.error("expected a comparison operator", op)
        if self.tok.kind == "atom" and _COLUMN.match(self.tok.text):
            return P.CompareColumns(col, op.text, self.column())
        return P.Compare(col, op.text, self.value())


def parse_workspace(text: str, workspace: Optional[Workspace] = None) -> Workspace:
    """Parse a document, extending ``workspace`` if given."""
    ws = workspace if workspace is not None else Workspace()
    _Parser(text, ws).parse()
    return ws


def parse_view(text: str, ws: Workspace):
    p = _Parser(text, ws)
    v = p.view()
    p.end_of_statement()
    if p.tok.kind != "eof":
        raise p.error("trailing input")
    return v


def parse_predicate(text: str) -> P.Predicate:
    p = _Parser(text, Workspace())
    pred = p.predicate()
    p.end_of_statement()
    if p.tok.kind != "eof":
        raise p.error("trailing input")
    return pred


# printing

def format_predicate(pred) -> str:
    if isinstance(pred, P.Compare):
        return f"c{pred.column} {pred.op} {quote(pred.value)}"
    if isinstance(pred, P.CompareColumns):
        return f"c{pred.column} {pred.op} c{pred.other}"
    if isinstance(pred, P.IsNull):
        return f"isnull c{pred.column}"
    if isinstance(pred, P.NotNull):
        return f"notnull c{pred.column}"
    if isinstance(pred, P.Not):
        inner = format_predicate(pred.operand)
        return f"not ({inner})" if isinstance(pred.operand, (P.And, P.Or)) else f"not {inner}"
    if isinstance(pred, P.And):
        left, right = format_predicate(pred.left), format_predicate(pred.right)
        if isinstance(pred.left, P.Or):
            left = f"({left})"
        if isinstance(pred.right, (P.And, P.Or)):
            right = f"({right})"
        return f"{left} and {right}"
    if isinstance(pred, P.Or):
        right = format_predicate(pred.right)
        if isinstance(pred.right, P.Or):
            right = f"({right})"
        return f"{format_predicate(pred.left)} or {right}"
    raise TypeError(pred)


def _pairs(on) -> str:
    return ", ".join(f"{i}={j}" for i, j in on)


def format_view(view, ws: Workspace) -> str:
    tname = lambda i: ws.schema.tables[i].name  # noqa: E731
    if isinstance(view, Selection):
        return f"select {tname(view.table)} where {format_predicate(view.predicate)}"
    if isinstance(view, Projection):
        text = f"project {tname(view.table)} cols {', '.join(map(str, view.columns))}"
        if view.dropnull:
            text += f" dropnull {', '.join(map(str, view.dropnull))}"
        return text
    if isinstance(view, Union):
        return f"union {tname(view.left)} {tname(view.right)}"
    if isinstance(view, HierJoin):
        return f"hierjoin parent={tname(view.parent)} child={tname(view.child)} on {_pairs(view.on)}"
    if isinstance(view, AntiJoin):
        return f"antijoin parent={tname(view.parent)} child={tname(view.child)} on {_pairs(view.on)}"
    if isinstance(view, FKJoin):
        return f"fkjoin local={tname(view.local)} foreign={tname(view.foreign)} on {_pairs(view.on)}"
    if isinstance(view, ThetaJoin):
        conds = ", ".join(f"{i}{op}{j}" for i, op, j in view.on)
        return f"join {tname(view.left)} {tname(view.right)} on {conds}"
    if isinstance(view, Product):
        return f"product ({format_view(view.left, ws)}) ({format_view(view.right, ws)})"
    if isinstance(view, Tabulated):
        body = ", ".join(f"{quote(ws.state_name(s))} -> {quote(l)}" for s, l in view.entries)
        return f"tabulated {{{body}}}"
    if isinstance(view, Zero):
        return "zero"
    if isinstance(view, One):
        return "one"
    raise TypeError(view)


def format_rows(rows, table: TableSchema) -> str:
    body = ", ".join(
        "(" + ", ".join(quote(v) for v in r) + ")" for r in table.sorted_rows(rows))
    return "{" + body + "}"


def format_state(s: DatabaseState, schema: DatabaseSchema) -> str:
    if len(schema) == 0:
        return "0"
    if len(schema) == 1:
        return format_rows(s.tables[0], schema.tables[0])
    return " ".join(f"{t.name}{format_rows(rows, t)}" for t, rows in zip(schema.tables, s.tables))


def format_update(u: Update, schema: DatabaseSchema) -> str:
    if len(schema) == 0:
        return "id"
    parts = []
    for t, add, dele in zip(schema.tables, u.add, u.delete):
        if len(schema) > 1 and not add and not dele:
            continue
        prefix = "" if len(schema) == 1 else f"{t.name} "
        parts.append(f"{prefix}+{format_rows(add, t)} -{format_rows(dele, t)}")
    if not parts:
        t = schema.tables[0]
        return f"{t.name} +{{}} -{{}}"
    return " ".join(parts)


def format_view_state(vs, view, schema: DatabaseSchema) -> str:
    if isinstance(view, Product):
        return (f"({format_view_state(vs[0], view.left, schema)}, "
                f"{format_view_state(vs[1], view.right, schema)})")
    if isinstance(view, Tabulated):
        return quote(vs.name)
    return format_state(vs, output_schema(view, schema))


def _raw_update(raw: RawUpdate) -> str:
    parts = []
    for table, sign, rows in raw.items:
        body = ", ".join("(" + ", ".join(quote(v) for v in r) + ")" for r in sorted(rows))
        parts.append(("" if table is None else f"{table} ") + f"{sign}{{{body}}}")
    return " ".join(parts)


def serialize_workspace(ws: Workspace) -> str:
    lines = []
    for d in ws.domains.values():
        vals = ", ".join(quote(v) for v in d.values)
        lines.append(f"domain {d.name} = {{{vals}}}" + (f" null {quote(d.null)}" if d.null else ""))
    schema = ws.schema if ws._raw_tables else DatabaseSchema(())
    for t in schema.tables:
        text = f"table {t.name}({', '.join(d.name for d in t.columns)})"
        if t.key is not None:
            text += f" key({', '.join(map(str, t.key))})"
        if t.foreign_keys:
            refs = ", ".join(
                f"{fk.column} -> {schema.tables[fk.table].name}.{fk.foreign_column}"
                for fk in t.foreign_keys)
            text += f" fk({refs})"
        if t.check is not None:
            text += f" check {format_predicate(t.check)}"
        lines.append(text)
    for name, s in ws.states.items():
        lines.append(f"state {name} = {format_state(s, schema)}")
    for name, v in ws.views.items():
        lines.append(f"view {name} = {format_view(v, ws)}")
    for name, raw in ws.updates.items():
        lines.append(f"update {name} = {_raw_update(raw)}")
    for name, st in ws.strategies.items():
        policy = f" {st.union_policy}" if st.kind == "union" else ""
        lines.append(f"strategy {name} = {st.kind}{policy}")
    return "\n".join(lines) + "\n"
