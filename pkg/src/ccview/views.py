"""View definitions, evaluation and the partition lattice of views.

A view maps database states to view states. Operator views produce a
:class:`~ccview.relcore.DatabaseState` over a derived output schema, so view
updates reuse the base update algebra unchanged. ``Zero`` produces the empty
zero-table state (a constant), ``One`` the base state itself, ``Tabulated`` an
opaque :class:`Label` and ``Product`` an ordered pair.
"""
from __future__ import annotations

import enum
import typing
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from . import predicate as pred
from .errors import InvalidView, NoConstructiveComplement
from .relcore import DatabaseSchema, DatabaseState, TableSchema, enumerate_states


@dataclass(frozen=True)
class Label:
    """Opaque view state of a tabulated view."""

    name: str


@dataclass(frozen=True)
class Selection:
    table: int
    predicate: pred.Predicate


@dataclass(frozen=True)
class Projection:
    table: int
    columns: tuple
    dropnull: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "dropnull", tuple(self.dropnull))


@dataclass(frozen=True)
class Union:
    left: int
    right: int


@dataclass(frozen=True)
class HierJoin:
    parent: int
    child: int
    on: tuple

    def __post_init__(self):
        object.__setattr__(self, "on", tuple(tuple(p) for p in self.on))


@dataclass(frozen=True)
class FKJoin:
    local: int
    foreign: int
    on: tuple

    def __post_init__(self):
        object.__setattr__(self, "on", tuple(tuple(p) for p in self.on))


@dataclass(frozen=True)
class AntiJoin:
    """Parent rows that join with no child row."""

    parent: int
    child: int
    on: tuple

    def __post_init__(self):
        object.__setattr__(self, "on", tuple(tuple(p) for p in self.on))


@dataclass(frozen=True)
class ThetaJoin:
    """Join on arbitrary comparisons ``(left column, op, right column)``."""

    left: int
    right: int
    on: tuple

    def __post_init__(self):
        object.__setattr__(self, "on", tuple(tuple(p) for p in self.on))


@dataclass(frozen=True)
class Product:
    left: "ViewDef"
    right: "ViewDef"


@dataclass(frozen=True)
class Tabulated:
    """Explicit table from base states to labels."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((s, str(l)) for s, l in self.entries))

    @cached_property
    def table(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


ViewDef = typing.Union[
    Selection, Projection, Union, HierJoin, FKJoin, AntiJoin, ThetaJoin,
    Product, Tabulated, Zero, One,
]

JOINS = (HierJoin, FKJoin, AntiJoin, ThetaJoin)


def _join_sides(view) -> tuple:
    if isinstance(view, HierJoin):
        return view.parent, view.child
    if isinstance(view, FKJoin):
        return view.local, view.foreign
    if isinstance(view, AntiJoin):
        return view.parent, view.child
    return view.left, view.right


def _table(schema: DatabaseSchema, i: int) -> TableSchema:
    if not 0 <= i < len(schema):
        raise InvalidView(f"table index {i} outside schema of {len(schema)} tables")
    return schema.tables[i]


def validate_view(view, schema: DatabaseSchema) -> None:
    """Raise InvalidView unless ``view`` is well formed for ``schema``."""
    if isinstance(view, Selection):
        pred.validate(view.predicate, _table(schema, view.table))
    elif isinstance(view, Projection):
        t = _table(schema, view.table)
        if not view.columns:
            raise InvalidView("projection keeps no columns")
        for c in view.columns + view.dropnull:
            if not 0 <= c < t.width:
                raise InvalidView(f"column {c} outside table {t.name}")
        if len(set(view.columns)) != len(view.columns):
            raise InvalidView("projection repeats a column")
    elif isinstance(view, Union):
        l, r = _table(schema, view.left), _table(schema, view.right)
        if l.columns != r.columns:
            raise InvalidView(f"union of {l.name} and {r.name} with different table schemas")
    elif isinstance(view, JOINS):
        a, b = (_table(schema, i) for i in _join_sides(view))
        if not view.on:
            raise InvalidView("join without join columns")
        for term in view.on:
            if isinstance(view, ThetaJoin):
                i, op, j = term
                if op not in pred.OPS:
                    raise InvalidView(f"unknown comparison {op!r}")
            else:
                i, j = term
            if not (0 <= i < a.width and 0 <= j < b.width):
                raise InvalidView(f"join columns {i}, {j} out of range")
            if a.columns[i] != b.columns[j]:
                raise InvalidView(f"join columns {a.name}.{i} and {b.name}.{j} have different domains")
    elif isinstance(view, Product):
        validate_view(view.left, schema)
        validate_view(view.right, schema)
    elif isinstance(view, (Tabulated, Zero, One)):
        pass
    else:
        raise InvalidView(f"not a view: {view!r}")


def output_schema(view, schema: DatabaseSchema) -> Optional[DatabaseSchema]:
    """Schema of the view states; None for Product and Tabulated views."""
    if isinstance(view, (Selection, Projection, Union, AntiJoin)):
        i = view.parent if isinstance(view, AntiJoin) else (
            view.left if isinstance(view, Union) else view.table)
        t = _table(schema, i)
        cols = t.columns
        if isinstance(view, Projection):
            cols = tuple(t.columns[c] for c in view.columns)
        return DatabaseSchema((TableSchema(t.name, cols),))
    if isinstance(view, (HierJoin, FKJoin, ThetaJoin)):
        a, b = (_table(schema, i) for i in _join_sides(view))
        return DatabaseSchema((TableSchema(f"{a.name}*{b.name}", a.columns + b.columns),))
    if isinstance(view, Zero):
        return DatabaseSchema(())
    if isinstance(view, One):
        return schema
    return None


def _compare_values(dom, op: str, x, y) -> bool:
    if op not in ("=", "!=") and (dom.is_null(x) or dom.is_null(y)):
        return False
    return pred._compare(op, dom.index(x), dom.index(y))


def evaluate(view, s: DatabaseState, schema: DatabaseSchema):
    """The view state of ``view`` at base state ``s``."""
    if isinstance(view, Selection):
        t = _table(schema, view.table)
        p = view.predicate
        return DatabaseState((frozenset(r for r in s.tables[view.table] if p.holds(r, t)),))
    if isinstance(view, Projection):
        t = _table(schema, view.table)
        drop = [(c, t.columns[c]) for c in view.dropnull]
        rows = frozenset(
            tuple(r[c] for c in view.columns)
            for r in s.tables[view.table]
            if not any(d.is_null(r[c]) for c, d in drop)
        )
        return DatabaseState((rows,))
    if isinstance(view, Union):
        return DatabaseState((s.tables[view.left] | s.tables[view.right],))
    if isinstance(view, (HierJoin, FKJoin)):
        a, b = _join_sides(view)
        return DatabaseState((frozenset(
            p + c
            for p in s.tables[a]
            for c in s.tables[b]
            if all(p[i] == c[j] for i, j in view.on)
        ),))
    if isinstance(view, AntiJoin):
        children = s.tables[view.child]
        return DatabaseState((frozenset(
            p for p in s.tables[view.parent]
            if not any(all(p[i] == c[j] for i, j in view.on) for c in children)
        ),))
    if isinstance(view, ThetaJoin):
        ta = _table(schema, view.left)
        return DatabaseState((frozenset(
            p + c
            for p in s.tables[view.left]
            for c in s.tables[view.right]
            if all(_compare_values(ta.columns[i], op, p[i], c[j]) for i, op, j in view.on)
        ),))
    if isinstance(view, Product):
        return (evaluate(view.left, s, schema), evaluate(view.right, s, schema))
    if isinstance(view, Tabulated):
        try:
            return Label(view.table[s])
        except KeyError:
            raise InvalidView("tabulated view has no entry for this state") from None
    if isinstance(view, Zero):
        return DatabaseState(())
    if isinstance(view, One):
        return s
    raise InvalidView(f"not a view: {view!r}")


@dataclass(frozen=True)
class Partition:
    """Block ids over an enumerated state list, numbered by first occurrence."""

    states: tuple
    blocks: tuple

    @classmethod
    def from_keys(cls, states, keys) -> "Partition":
        ids: dict = {}
        blocks = tuple(ids.setdefault(k, len(ids)) for k in keys)
        return cls(tuple(states), blocks)

    @property
    def size(self) -> int:
        return len(set(self.blocks))

    def classes(self) -> list:
        """Blocks as lists of states, in block-id order."""
        out: list = [[] for _ in range(self.size)]
        for s, b in zip(self.states, self.blocks):
            out[b].append(s)
        return out

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside one block of ``other``."""
        if self.states != other.states:
            raise ValueError("partitions over different state lists")
        image: dict = {}
        for b, o in zip(self.blocks, other.blocks):
            if image.setdefault(b, o) != o:
                return False
        return True

    @property
    def is_discrete(self) -> bool:
        return self.size == len(self.states)


def _states(schema, states):
    return enumerate_states(schema) if states is None else states


def partition(view, schema: DatabaseSchema, states=None) -> Partition:
    states = _states(schema, states)
    return Partition.from_keys(states, (evaluate(view, s, schema) for s in states))


class Ordering(str, enum.Enum):
    GREATER_EQUAL = "greater-or-equal"
    LESS_EQUAL = "less-or-equal"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


def compare(f, g, schema: DatabaseSchema, states=None) -> Ordering:
    """Order views by refinement of their induced partitions."""
    states = _states(schema, states)
    pf, pg = partition(f, schema, states), partition(g, schema, states)
    ge, le = pf.refines(pg), pg.refines(pf)
    if ge and le:
        return Ordering.EQUIVALENT
    if ge:
        return Ordering.GREATER_EQUAL
    if le:
        return Ordering.LESS_EQUAL
    return Ordering.INCOMPARABLE


def is_complement(f, c, schema: DatabaseSchema, states=None) -> bool:
    return partition(Product(f, c), schema, states).is_discrete


def complement_of(view, schema: DatabaseSchema):
    """The constructive complement of a Selection, Union, Projection or join view."""
    if isinstance(view, Selection):
        return Selection(view.table, pred.negate(view.predicate))
    if isinstance(view, Union):
        return Zero()
    if isinstance(view, Projection):
        t = _table(schema, view.table)
        hidden = tuple(c for c in range(t.width) if c not in view.columns)
        key = t.key if t.key is not None else tuple(
            c for c in view.columns if c not in view.dropnull)
        return Projection(view.table, tuple(sorted(set(key) | set(hidden))), hidden)
    if isinstance(view, HierJoin):
        return AntiJoin(view.parent, view.child, view.on)
    if isinstance(view, FKJoin):
        return Projection(view.foreign, tuple(range(_table(schema, view.foreign).width)))
    raise NoConstructiveComplement(f"no constructive complement for {type(view).__name__}")


def view_tables(vs) -> list:
    """Flatten a view state into its row sets."""
    if isinstance(vs, DatabaseState):
        return list(vs.tables)
    if isinstance(vs, tuple):
        return [t for part in vs for t in view_tables(part)]
    return []


def perfect_decomposition(f, c, schema: DatabaseSchema, states=None) -> bool:
    """True iff no state has a row shared by an output table of ``f`` and one of ``c``.

    Rows of different arity never compare equal, so tables of different widths
    are disjoint by construction.
    """
    for s in _states(schema, states):
        for a in view_tables(evaluate(f, s, schema)):
            for b in view_tables(evaluate(c, s, schema)):
                if not a.isdisjoint(b):
                    return False
    return True
