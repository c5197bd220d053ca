"""Row predicates over a single table.

Comparisons use the declared value order of the column's domain. Any
ordering comparison (``<``, ``<=``, ``>``, ``>=``) that involves a null value
is false; ``=`` and ``!=`` compare values directly, so the null value equals
itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InvalidView

OPS = ("=", "!=", "<", "<=", ">", ">=")
_NEGATED = {"=": "!=", "!=": "="}


def _compare(op: str, i: int, j: int) -> bool:
    if op == "=":
        return i == j
    if op == "!=":
        return i != j
    if op == "<":
        return i < j
    if op == "<=":
        return i <= j
    if op == ">":
        return i > j
    return i >= j


@dataclass(frozen=True)
class Compare:
    """``c<column> <op> <constant>``"""

    column: int
    op: str
    value: str

    def holds(self, row, table) -> bool:
        dom = table.columns[self.column]
        left = row[self.column]
        if self.op not in ("=", "!=") and dom.is_null(left):
            return False
        if self.op not in ("=", "!=") and dom.is_null(self.value):
            return False
        return _compare(self.op, dom.index(left), dom.index(self.value))


@dataclass(frozen=True)
class CompareColumns:
    """``c<column> <op> c<other>``; both columns must share a domain."""

    column: int
    op: str
    other: int

    def holds(self, row, table) -> bool:
        dom = table.columns[self.column]
        left, right = row[self.column], row[self.other]
        if self.op not in ("=", "!=") and (dom.is_null(left) or dom.is_null(right)):
            return False
        return _compare(self.op, dom.index(left), dom.index(right))


@dataclass(frozen=True)
class IsNull:
    column: int

    def holds(self, row, table) -> bool:
        return table.columns[self.column].is_null(row[self.column])


@dataclass(frozen=True)
class NotNull:
    column: int

    def holds(self, row, table) -> bool:
        return not table.columns[self.column].is_null(row[self.column])


@dataclass(frozen=True)
class And:
    left: "Predicate"
    right: "Predicate"

    def holds(self, row, table) -> bool:
        return self.left.holds(row, table) and self.right.holds(row, table)


@dataclass(frozen=True)
class Or:
    left: "Predicate"
    right: "Predicate"

    def holds(self, row, table) -> bool:
        return self.left.holds(row, table) or self.right.holds(row, table)


@dataclass(frozen=True)
class Not:
    operand: "Predicate"

    def holds(self, row, table) -> bool:
        return not self.operand.holds(row, table)


Predicate = Union[Compare, CompareColumns, IsNull, NotNull, And, Or, Not]


def negate(pred: Predicate) -> Predicate:
    """Logical negation, folding ``=``/``!=`` leaves and double negation."""
    if isinstance(pred, Not):
        return pred.operand
    if isinstance(pred, Compare) and pred.op in _NEGATED:
        return Compare(pred.column, _NEGATED[pred.op], pred.value)
    if isinstance(pred, CompareColumns) and pred.op in _NEGATED:
        return CompareColumns(pred.column, _NEGATED[pred.op], pred.other)
    if isinstance(pred, IsNull):
        return NotNull(pred.column)
    if isinstance(pred, NotNull):
        return IsNull(pred.column)
    return Not(pred)


def validate(pred: Predicate, table) -> None:
    """Raise InvalidView unless every column and constant fits ``table``."""
    width = len(table.columns)

    def col(i: int) -> None:
        if not 0 <= i < width:
            raise InvalidView(f"column c{i} outside table {table.name} of width {width}")

    if isinstance(pred, Compare):
        col(pred.column)
        if pred.op not in OPS:
            raise InvalidView(f"unknown comparison {pred.op!r}")
        if pred.value not in table.columns[pred.column]:
            raise InvalidView(
                f"constant {pred.value!r} not in domain {table.columns[pred.column].name}"
            )
    elif isinstance(pred, CompareColumns):
        col(pred.column)
        col(pred.other)
        if pred.op not in OPS:
            raise InvalidView(f"unknown comparison {pred.op!r}")
        if table.columns[pred.column] != table.columns[pred.other]:
            raise InvalidView(f"c{pred.column} and c{pred.other} have different domains")
    elif isinstance(pred, (IsNull, NotNull)):
        col(pred.column)
    elif isinstance(pred, (And, Or)):
        validate(pred.left, table)
        validate(pred.right, table)
    elif isinstance(pred, Not):
        validate(pred.operand, table)
    else:
        raise InvalidView(f"not a predicate: {pred!r}")
