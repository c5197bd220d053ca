"""Finite domains, schemas, database states and the algebra of updates.

Columns are positional. A table state is a frozenset of tuples; a database
state is a tuple of table states in schema order. An :class:`Update` is a pair
of per-table add/delete sets. Between any two states of a schema there is
exactly one *normalized* update (adds disjoint from the source, deletes
contained in it), computed by :func:`diff`.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import NotApplicable, SchemaError, SchemaMismatch, StateSpaceTooLarge
from .predicate import Predicate, validate as validate_predicate

Row = tuple
TableState = frozenset

DEFAULT_MAX_TUPLES = 12
DEFAULT_MAX_STATES = 1 << 16


@dataclass(frozen=True)
class Domain:
    """An ordered finite set of atomic values, optionally with a null member."""

    name: str
    values: tuple
    null: Optional[str] = None

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise SchemaError(f"domain {self.name} is empty")
        if len(set(values)) != len(values):
            raise SchemaError(f"domain {self.name} has duplicate values")
        if self.null is not None and self.null not in values:
            raise SchemaError(f"null value {self.null!r} is not a member of domain {self.name}")
        object.__setattr__(self, "_order", {v: i for i, v in enumerate(values)})

    def __contains__(self, value) -> bool:
        return value in self._order

    def __len__(self) -> int:
        return len(self.values)

    def index(self, value) -> int:
        return self._order[value]

    def is_null(self, value) -> bool:
        return self.null is not None and value == self.null

    @property
    def nullable(self) -> bool:
        return self.null is not None


@dataclass(frozen=True)
class ForeignKey:
    """Column ``column`` references column ``foreign_column`` of table ``table``.

    Entries of one table that point at the same foreign table form a single
    composite reference.
    """

    column: int
    table: int
    foreign_column: int


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple
    key: Optional[tuple] = None
    foreign_keys: tuple = ()
    check: Optional[Predicate] = None

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "foreign_keys", tuple(self.foreign_keys))
        if self.key is not None:
            object.__setattr__(self, "key", tuple(self.key))
        if not self.columns:
            raise SchemaError(f"table {self.name} has no columns")
        width = len(self.columns)
        for c in self.key or ():
            if not 0 <= c < width:
                raise SchemaError(f"key column {c} outside table {self.name}")
        for fk in self.foreign_keys:
            if not 0 <= fk.column < width:
                raise SchemaError(f"foreign key column {fk.column} outside table {self.name}")
        if self.check is not None:
            validate_predicate(self.check, self)

    @property
    def width(self) -> int:
        return len(self.columns)

    def row_key(self, row: Row) -> tuple:
        """Sort key giving the canonical lexicographic order of rows."""
        return tuple(d.index(v) for d, v in zip(self.columns, row))

    def is_valid_row(self, row) -> bool:
        return (
            isinstance(row, tuple)
            and len(row) == len(self.columns)
            and all(v in d for d, v in zip(self.columns, row))
        )

    def tuple_space(self) -> list:
        """All rows admitted by the domains and the check constraint, in canonical order."""
        rows = itertools.product(*(d.values for d in self.columns))
        if self.check is None:
            return list(rows)
        return [r for r in rows if self.check.holds(r, self)]

    def sorted_rows(self, rows: Iterable[Row]) -> list:
        return sorted(rows, key=self.row_key)


@dataclass(frozen=True)
class DatabaseSchema:
    tables: tuple

    def __post_init__(self):
        tables = tuple(self.tables)
        object.__setattr__(self, "tables", tables)
        names = [t.name for t in tables]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate table names")
        for t in tables:
            for fk in t.foreign_keys:
                if not 0 <= fk.table < len(tables):
                    raise SchemaError(f"foreign key of {t.name} references missing table {fk.table}")
                target = tables[fk.table]
                if not 0 <= fk.foreign_column < target.width:
                    raise SchemaError(
                        f"foreign key of {t.name} references column {fk.foreign_column} "
                        f"outside table {target.name}"
                    )
                if target.columns[fk.foreign_column] != t.columns[fk.column]:
                    raise SchemaError(f"foreign key of {t.name} joins different domains")

    def __len__(self) -> int:
        return len(self.tables)

    def index(self, name: str) -> int:
        for i, t in enumerate(self.tables):
            if t.name == name:
                return i
        raise KeyError(name)

    def has_keys(self, table: int) -> bool:
        t = self.tables[table]
        return t.key is not None or bool(t.foreign_keys)


@dataclass(frozen=True)
class DatabaseState:
    tables: tuple

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(frozenset(t) for t in self.tables))

    def __len__(self) -> int:
        return len(self.tables)

    def __getitem__(self, i: int) -> frozenset:
        return self.tables[i]

    def replace(self, i: int, rows: Iterable[Row]) -> "DatabaseState":
        tables = list(self.tables)
        tables[i] = frozenset(rows)
        return DatabaseState(tuple(tables))


@dataclass(frozen=True)
class Update:
    """Per-table sets of rows to add and to delete."""

    add: tuple
    delete: tuple

    def __post_init__(self):
        object.__setattr__(self, "add", tuple(frozenset(t) for t in self.add))
        object.__setattr__(self, "delete", tuple(frozenset(t) for t in self.delete))
        if len(self.add) != len(self.delete):
            raise SchemaMismatch("add and delete arrays have different lengths")

    def __len__(self) -> int:
        return len(self.add)

    @property
    def is_identity(self) -> bool:
        return not any(self.add) and not any(self.delete)


def state(schema: DatabaseSchema, *tables: Iterable[Row]) -> DatabaseState:
    """Build a state from per-table rows, padding missing tables with empty sets."""
    if len(tables) > len(schema):
        raise SchemaMismatch(f"{len(tables)} tables given for a schema of {len(schema)}")
    full = list(tables) + [()] * (len(schema) - len(tables))
    s = DatabaseState(tuple(frozenset(tuple(r) for r in t) for t in full))
    validate_state(schema, s)
    return s


def validate_state(schema: DatabaseSchema, s: DatabaseState) -> None:
    """Raise SchemaError unless every row is a valid tuple of its table."""
    if len(s) != len(schema):
        raise SchemaMismatch(f"state has {len(s)} tables, schema has {len(schema)}")
    for t, rows in zip(schema.tables, s.tables):
        for r in rows:
            if not t.is_valid_row(r):
                raise SchemaError(f"row {r!r} is not a valid tuple of table {t.name}")


def _key_ok(t: TableSchema, rows: Iterable[Row]) -> bool:
    if t.key is None:
        return True
    seen = set()
    for r in rows:
        k = tuple(r[c] for c in t.key)
        if k in seen:
            return False
        seen.add(k)
    return True


def _references(t: TableSchema) -> dict:
    """Group foreign key entries by referenced table."""
    refs: dict = {}
    for fk in t.foreign_keys:
        refs.setdefault(fk.table, []).append(fk)
    return refs


def _foreign_keys_ok(schema: DatabaseSchema, s: DatabaseState) -> bool:
    for i, t in enumerate(schema.tables):
        for target, fks in _references(t).items():
            present = {tuple(r[fk.foreign_column] for fk in fks) for r in s.tables[target]}
            for r in s.tables[i]:
                if tuple(r[fk.column] for fk in fks) not in present:
                    return False
    return True


def satisfies_constraints(schema: DatabaseSchema, s: DatabaseState) -> bool:
    """Check constraints, unique keys and foreign keys (rows assumed well-typed)."""
    for t, rows in zip(schema.tables, s.tables):
        if t.check is not None and not all(t.check.holds(r, t) for r in rows):
            return False
        if not _key_ok(t, rows):
            return False
    return _foreign_keys_ok(schema, s)


def _check_same(a, b) -> None:
    if len(a) != len(b):
        raise SchemaMismatch(f"{len(a)} tables vs {len(b)} tables")


def diff(a: DatabaseState, b: DatabaseState) -> Update:
    """The unique normalized update carrying ``a`` to ``b``."""
    _check_same(a, b)
    return Update(
        tuple(tb - ta for ta, tb in zip(a.tables, b.tables)),
        tuple(ta - tb for ta, tb in zip(a.tables, b.tables)),
    )


def is_applicable(s: DatabaseState, u: Update) -> bool:
    if len(s) != len(u):
        return False
    return all(
        add.isdisjoint(rows) and dele <= rows
        for rows, add, dele in zip(s.tables, u.add, u.delete)
    )


def apply(s: DatabaseState, u: Update) -> DatabaseState:
    _check_same(s, u)
    for i, (rows, add, dele) in enumerate(zip(s.tables, u.add, u.delete)):
        if not add.isdisjoint(rows):
            raise NotApplicable(f"table {i}: added rows already present: {sorted(add & rows)}")
        if not dele <= rows:
            raise NotApplicable(f"table {i}: deleted rows absent: {sorted(dele - rows)}")
    return DatabaseState(
        tuple((rows | add) - dele for rows, add, dele in zip(s.tables, u.add, u.delete))
    )


def normalize(u: Update, source: DatabaseState) -> Update:
    """Drop adds of rows already in ``source`` and deletes of rows not in it."""
    _check_same(source, u)
    return Update(
        tuple(add - rows for rows, add in zip(source.tables, u.add)),
        tuple(dele & rows for rows, dele in zip(source.tables, u.delete)),
    )


def compose_closed_form(v: Update, u: Update) -> Update:
    """``vu`` (u first) by the set formulas, without reference to a source state."""
    _check_same(v, u)
    return Update(
        tuple((va | ua) - vd for va, ua, vd in zip(v.add, u.add, v.delete)),
        tuple((vd | ud) - va for vd, ud, va in zip(v.delete, u.delete, v.add)),
    )


def compose(v: Update, u: Update, source: DatabaseState) -> Update:
    """The update doing ``u`` then ``v`` starting from ``source``."""
    middle = apply(source, u)
    if not is_applicable(middle, v):
        raise NotApplicable("second update is not applicable after the first")
    return normalize(compose_closed_form(v, u), source)


def invert(u: Update) -> Update:
    return Update(u.delete, u.add)


def identity(schema: Union[DatabaseSchema, int]) -> Update:
    n = schema if isinstance(schema, int) else len(schema)
    empty = tuple(frozenset() for _ in range(n))
    return Update(empty, empty)


def _mask_subsets(universe: Sequence[Row], limit: int) -> list:
    n = len(universe)
    if (1 << n) > limit:
        raise StateSpaceTooLarge(f"{n} tuples give {1 << n} table states (limit {limit})")
    return [
        frozenset(universe[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)
    ]


def _keyed_subsets(t: TableSchema, universe: Sequence[Row], limit: int) -> list:
    position = {r: i for i, r in enumerate(universe)}
    groups: dict = {}
    for r in universe:
        groups.setdefault(tuple(r[c] for c in t.key), []).append(r)
    count = 1
    for g in groups.values():
        count *= len(g) + 1
    if count > limit:
        raise StateSpaceTooLarge(f"table {t.name} admits {count} states (limit {limit})")
    choices = [[None] + g for g in groups.values()]
    subsets = []
    for pick in itertools.product(*choices):
        rows = [r for r in pick if r is not None]
        mask = sum(1 << position[r] for r in rows)
        subsets.append((mask, frozenset(rows)))
    subsets.sort(key=lambda x: x[0])
    return [rows for _, rows in subsets]


def table_states(t: TableSchema, max_tuples: int = DEFAULT_MAX_TUPLES) -> list:
    """All states of one table in bitmask order over its canonical tuple space.

    A table admits at most ``2 ** max_tuples`` states; for unkeyed tables this is
    the bound on the tuple space itself.
    """
    universe = t.tuple_space()
    limit = 1 << max_tuples
    if t.key is None:
        return _mask_subsets(universe, limit)
    return _keyed_subsets(t, universe, limit)


def enumerate_states(
    schema: DatabaseSchema,
    max_tuples: int = DEFAULT_MAX_TUPLES,
    max_states: int = DEFAULT_MAX_STATES,
) -> list:
    """Every state of ``schema`` satisfying its constraints, in canonical order.

    Order is the cross product of per-table orders with the first table varying
    slowest.
    """
    per_table = [table_states(t, max_tuples) for t in schema.tables]
    total = 1
    for states in per_table:
        total *= len(states)
    if total > max_states:
        raise StateSpaceTooLarge(f"{total} candidate database states (limit {max_states})")
    out = []
    needs_fk = any(t.foreign_keys for t in schema.tables)
    for combo in itertools.product(*per_table):
        s = DatabaseState(combo)
        if needs_fk and not _foreign_keys_ok(schema, s):
            continue
        out.append(s)
    return out


@dataclass
class CompleteSetReport:
    ok: bool
    states: int
    pairs: int
    triples: int
    law: Optional[str] = None
    counterexample: Optional[tuple] = None

    def summary(self) -> str:
        status = "pass" if self.ok else f"fail ({self.law})"
        return f"complete set: {status}; {self.states} states, {self.pairs} pairs, {self.triples} triples"


def _triples(states: list) -> Iterator[tuple]:
    for a in states:
        for b in states:
            for c in states:
                yield a, b, c


def check_complete_set(
    schema: DatabaseSchema,
    states: Optional[list] = None,
    max_states: int = 64,
    deadline: Optional[float] = None,
) -> CompleteSetReport:
    """Exhaustively check that normalized updates form a complete set.

    Over all pairs: ``diff`` is the unique update between two states (distinct
    targets give distinct updates), it carries source to target, and its
    inverse carries target back. Identities exist at every state. Over all
    triples: the composite of two consecutive updates equals the update between
    the endpoints, both in closed form and by application.

    ``deadline`` is a ``time.monotonic()`` instant; past it the check stops with
    law ``"deadline"`` and the counts reached so far.
    """
    if states is None:
        states = enumerate_states(schema)
    n = len(states)
    if n > max_states:
        raise StateSpaceTooLarge(f"{n} states; exhaustive triple check limited to {max_states}")

    def fail(law, *example):
        return CompleteSetReport(False, n, pairs, triples, law, example)

    pairs = triples = 0
    ident = identity(schema)
    for a in states:
        if deadline is not None and time.monotonic() > deadline:
            return fail("deadline")
        if diff(a, a) != ident or apply(a, ident) != a:
            return fail("identity", a)
        seen = {}
        for b in states:
            pairs += 1
            u = diff(a, b)
            if not is_applicable(a, u) or apply(a, u) != b:
                return fail("diff", a, b)
            if u in seen:
                return fail("uniqueness", a, seen[u], b)
            seen[u] = b
            if apply(b, invert(u)) != a or invert(invert(u)) != u:
                return fail("local inverse", a, b)
    for a, b, c in _triples(states):
        triples += 1
        if deadline is not None and not triples & 0x3FF and time.monotonic() > deadline:
            return fail("deadline")
        u, v = diff(a, b), diff(b, c)
        w = compose(v, u, a)
        if w != diff(a, c) or apply(a, w) != c:
            return fail("composition", a, b, c)
    return CompleteSetReport(True, n, pairs, triples)
