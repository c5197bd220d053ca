"""View update translation and the translator laws.

A strategy turns a view update ``u`` at base state ``s`` into a base update.
Every rule builds the target base state and returns ``diff(s, target)``, so the
result is always normalized. Targets that violate the schema's constraints are
rejected with :class:`NotTranslatable`.

The laws are checked exhaustively over the enumerated base states and the
universe of view updates: all normalized updates between view states that are
images of some base state. A strategy may decline a view update at a base state
(``NotTranslatable``); such pairs are counted but not held against the laws,
provided declining is consistent along composites.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Union as TUnion

from .errors import (
    InvalidStrategy,
    InvalidViewUpdate,
    MissingKeyMetadata,
    NotTranslatable,
    NullNotSupported,
    TranslationError,
)
from .relcore import (
    DatabaseSchema,
    DatabaseState,
    Update,
    apply,
    compose,
    diff,
    enumerate_states,
    is_applicable,
    satisfies_constraints,
)
from .views import (
    FKJoin,
    HierJoin,
    One,
    Projection,
    Selection,
    ThetaJoin,
    Union,
    Zero,
    _join_sides,
    evaluate,
    output_schema,
)

UNION_POLICIES = ("both", "left", "right")

_VIEW_FOR_KIND = {
    "selection": (Selection,),
    "union": (Union,),
    "projection": (Projection,),
    "hierjoin": (HierJoin,),
    "fkjoin": (FKJoin,),
    "combined": (FKJoin,),
    "identity": (One, Zero),
}
KINDS = tuple(_VIEW_FOR_KIND)


@dataclass(frozen=True)
class Strategy:
    """Operator kind plus policy.

    ``combined`` is the one-to-many strategy that deletes like a foreign-key
    join but inserts missing foreign rows. It is not a translator and exists so
    the checker can reject it.
    """

    kind: str
    union_policy: str = "both"

    def __post_init__(self):
        if self.kind not in _VIEW_FOR_KIND:
            raise InvalidStrategy(f"unknown strategy kind {self.kind!r}")
        if self.union_policy not in UNION_POLICIES:
            raise InvalidStrategy(f"unknown union policy {self.union_policy!r}")
        if self.kind != "union" and self.union_policy != "both":
            raise InvalidStrategy("union policy given for a non-union strategy")

    def accepts(self, view) -> bool:
        return isinstance(view, _VIEW_FOR_KIND[self.kind])


def _children(prow, rows, on) -> list:
    return [c for c in rows if all(prow[i] == c[j] for i, j in on)]


def _selection(view, strategy, u, s, schema):
    t = schema.tables[view.table]
    for r in u.add[0]:
        if not view.predicate.holds(r, t):
            raise InvalidViewUpdate(f"added row {r} does not satisfy the selection predicate")
    return s.replace(view.table, (s[view.table] | u.add[0]) - u.delete[0])


def _union(view, strategy, u, s, schema):
    left, right = set(s[view.left]), set(s[view.right])
    left -= u.delete[0]
    right -= u.delete[0]
    if strategy.union_policy in ("both", "left"):
        left |= u.add[0]
    if strategy.union_policy in ("both", "right"):
        right |= u.add[0]
    return s.replace(view.left, left).replace(view.right, right)


def _projection(view, strategy, u, s, schema):
    t = schema.tables[view.table]
    kept = view.columns
    key = t.key if t.key is not None else tuple(c for c in kept if c not in view.dropnull)
    if not set(key) <= set(kept):
        raise NotTranslatable(f"key columns {key} of {t.name} are not all in the view")
    nonkey = [c for c in range(t.width) if c not in key]
    where = {c: k for k, c in enumerate(kept)}

    def null_of(c):
        dom = t.columns[c]
        if not dom.nullable:
            raise NullNotSupported(f"column {c} of {t.name} has non-nullable domain {dom.name}")
        return dom.null

    def visible(row):
        return not any(t.columns[c].is_null(row[c]) for c in view.dropnull)

    rows = set(s[view.table])
    for vr in u.delete[0]:
        for row in [r for r in rows if visible(r) and tuple(r[c] for c in kept) == vr]:
            rows.discard(row)
            if not view.dropnull:
                continue
            padded = tuple(null_of(c) if c in view.dropnull else v for c, v in enumerate(row))
            if all(t.columns[c].is_null(padded[c]) for c in nonkey):
                continue  # no information left in the row
            rows.add(padded)
    for vr in u.add[0]:
        k = tuple(vr[where[c]] for c in key)
        holes = [r for r in rows if not visible(r) and tuple(r[c] for c in key) == k]
        if holes:
            for row in holes:
                rows.discard(row)
                rows.add(tuple(vr[where[c]] if c in where else v for c, v in enumerate(row)))
        else:
            rows.add(tuple(vr[where[c]] if c in where else null_of(c) for c in range(t.width)))
    return s.replace(view.table, rows)


def _hierjoin(view, strategy, u, s, schema):
    pw = schema.tables[view.parent].width
    old_parents, old_children = s[view.parent], s[view.child]
    parents, children = set(old_parents), set(old_children)
    gone = {r[pw:] for r in u.delete[0]}
    children -= gone
    for p in old_parents:
        ch = _children(p, old_children, view.on)
        if ch and gone.issuperset(ch):
            parents.discard(p)
    for r in u.add[0]:
        p, c = r[:pw], r[pw:]
        if p in parents:
            if p in old_parents and not _children(p, old_children, view.on):
                # the parent is part of the complement; giving it a child would change it
                raise NotTranslatable(f"parent row {p} is childless")
        else:
            parents.add(p)
        children.add(c)
    return s.replace(view.parent, parents).replace(view.child, children)


def _fkjoin(view, strategy, u, s, schema):
    lw = schema.tables[view.local].width
    local, foreign = set(s[view.local]), set(s[view.foreign])
    local -= {r[:lw] for r in u.delete[0]}
    for r in u.add[0]:
        lrow, frow = r[:lw], r[lw:]
        if frow not in foreign:
            if strategy.kind != "combined":
                raise NotTranslatable(f"foreign row {frow} does not exist")
            foreign.add(frow)
        local.add(lrow)
    return s.replace(view.local, local).replace(view.foreign, foreign)


def _identity(view, strategy, u, s, schema):
    if isinstance(view, Zero):
        return s
    return apply(s, u)


_RULES = {
    "selection": _selection,
    "union": _union,
    "projection": _projection,
    "hierjoin": _hierjoin,
    "fkjoin": _fkjoin,
    "combined": _fkjoin,
    "identity": _identity,
}


def check_view_update(view, u: Update, current, schema: DatabaseSchema) -> None:
    """Raise InvalidViewUpdate unless ``u`` is a well-typed update applicable to ``current``."""
    vschema = output_schema(view, schema)
    if vschema is None:
        raise InvalidViewUpdate(f"{type(view).__name__} views have no table-valued updates")
    if len(u) != len(vschema):
        raise InvalidViewUpdate(f"update has {len(u)} tables, view has {len(vschema)}")
    for t, add, dele in zip(vschema.tables, u.add, u.delete):
        for r in add | dele:
            if not t.is_valid_row(r):
                raise InvalidViewUpdate(f"row {r!r} is not a valid view row")
    if not is_applicable(current, u):
        raise InvalidViewUpdate("view update is not applicable to the current view state")


def translate(view, strategy: Strategy, u: Update, s: DatabaseState, schema: DatabaseSchema) -> Update:
    """Translate view update ``u`` at base state ``s`` into a base update."""
    if not strategy.accepts(view):
        raise InvalidStrategy(f"strategy {strategy.kind} does not apply to {type(view).__name__}")
    check_view_update(view, u, evaluate(view, s, schema), schema)
    target = _RULES[strategy.kind](view, strategy, u, s, schema)
    if not satisfies_constraints(schema, target):
        raise NotTranslatable("translated state violates the schema's constraints")
    return diff(s, target)


@dataclass(frozen=True)
class Witness:
    """A reproducible counterexample: labelled base/view states and updates."""

    note: str
    items: tuple = ()


@dataclass
class LawResult:
    name: str
    ok: bool = True
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, note: str, *items) -> None:
        if self.ok:
            self.ok = False
            self.witness = Witness(note, tuple(items))


@dataclass
class TranslatorReport:
    commutativity: LawResult = field(default_factory=lambda: LawResult("commutativity"))
    identity: LawResult = field(default_factory=lambda: LawResult("identity"))
    composition: LawResult = field(default_factory=lambda: LawResult("composition"))
    translations: int = 0
    compositions: int = 0
    untranslatable: int = 0

    @property
    def laws(self) -> list:
        return [self.commutativity, self.identity, self.composition]

    @property
    def ok(self) -> bool:
        return all(law.ok for law in self.laws)


class TranslationSpace:
    """Enumerated base states, view images and memoized translations."""

    def __init__(self, view, strategy: Strategy, schema: DatabaseSchema, states=None):
        self.view, self.strategy, self.schema = view, strategy, schema
        self.states = list(enumerate_states(schema) if states is None else states)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.images = [evaluate(view, s, schema) for s in self.states]
        self.universe = list(dict.fromkeys(self.images))
        self.vindex = {w: i for i, w in enumerate(self.universe)}
        self._cache: dict = {}
        self.report: Optional["TranslatorReport"] = None  # set by check_translator

    def view_update(self, si: int, wi: int) -> Update:
        return diff(self.images[si], self.universe[wi])

    def translation(self, si: int, wi: int):
        """The base update, or the TranslationError the strategy raised."""
        key = (si, wi)
        if key not in self._cache:
            try:
                self._cache[key] = translate(
                    self.view, self.strategy, self.view_update(si, wi), self.states[si], self.schema)
            except TranslationError as exc:
                self._cache[key] = exc
        return self._cache[key]

    def pairs(self):
        for si in range(len(self.states)):
            for wi in range(len(self.universe)):
                yield si, wi


def check_translator(view, strategy: Strategy, schema: DatabaseSchema, states=None,
                     space: Optional[TranslationSpace] = None) -> TranslatorReport:
    """Exhaustively check commutativity, identity and composition preservation.

    Composition is checked state-wise: translating ``vu`` at ``s`` must equal
    the translation of ``u`` at ``s`` followed by the translation of ``v`` at the
    resulting state. The round trip ``v = u⁻¹`` is tried first for every ``u``,
    so the first composition witness is a local-inverse failure when one exists.
    """
    sp = space or TranslationSpace(view, strategy, schema, states)
    report = TranslatorReport()
    comm, ident, comp = report.commutativity, report.identity, report.composition
    for si, wi in sp.pairs():
        s, u = sp.states[si], sp.view_update(si, wi)
        t = sp.translation(si, wi)
        if isinstance(t, NotTranslatable):
            report.untranslatable += 1
            continue
        report.translations += 1
        if isinstance(t, TranslationError):
            comm.fail(f"{type(t).__name__}: {t}", ("state", "base", s), ("u", "view", u))
            continue
        if not is_applicable(s, t):
            comm.fail("translation is not applicable", ("state", "base", s), ("u", "view", u),
                      ("T(u)", "base", t))
            continue
        s1 = apply(s, t)
        if evaluate(view, s1, schema) != sp.universe[wi]:
            comm.fail("view of translated state differs from updated view",
                      ("state", "base", s), ("u", "view", u), ("T(u)", "base", t))
        if u.is_identity and not t.is_identity:
            ident.fail("identity view update translated to a non-identity",
                       ("state", "base", s), ("T(id)", "base", t))
        if s1 not in sp.index:
            comm.fail("translated state leaves the state space",
                      ("state", "base", s), ("u", "view", u), ("T(u)", "base", t))
            continue
        s1i = sp.index[s1]
        home = sp.vindex[sp.images[si]]
        for w2 in [home] + [w for w in range(len(sp.universe)) if w != home]:
            report.compositions += 1
            t2 = sp.translation(s1i, w2)
            whole = sp.translation(si, w2)
            v = sp.view_update(s1i, w2)
            defined2 = not isinstance(t2, TranslationError)
            defined = not isinstance(whole, TranslationError)
            if defined2 != defined:
                comp.fail("translatability differs between T(vu) and T(v)T(u)",
                          ("state", "base", s), ("u", "view", u), ("v", "view", v))
                continue
            if not defined:
                continue
            if not is_applicable(s1, t2):
                continue  # reported under commutativity for s1
            if compose(t2, t, s) != whole:
                comp.fail(
                    "T(vu) != T(v)T(u)" + (" with v = u^-1" if w2 == home else ""),
                    ("state", "base", s), ("u", "view", u), ("v", "view", v),
                    ("T(vu)", "base", whole), ("T(v)T(u)", "base", compose(t2, t, s)),
                )
    sp.report = report
    return report


def is_translation(view, u: Update, t: TUnion[Update, Callable[[DatabaseState], Update]],
                   schema: DatabaseSchema, states=None) -> LawResult:
    """Check that ``t`` translates ``u`` at every state where ``u`` applies to the view.

    ``t`` is either a fixed base update or a function from base state to base
    update.
    """
    result = LawResult("translation")
    for s in enumerate_states(schema) if states is None else states:
        current = evaluate(view, s, schema)
        if not is_applicable(current, u):
            continue
        try:
            ts = t(s) if callable(t) else t
        except TranslationError as exc:
            result.fail(f"{type(exc).__name__}: {exc}", ("state", "base", s), ("u", "view", u))
            return result
        if not is_applicable(s, ts):
            result.fail("translation is not applicable", ("state", "base", s), ("t", "base", ts))
            return result
        if evaluate(view, apply(s, ts), schema) != apply(current, u):
            result.fail("f(T(u)(s)) != u(f(s))", ("state", "base", s), ("u", "view", u),
                        ("t", "base", ts))
            return result
        if u.is_identity and not ts.is_identity:
            result.fail("identity view update moves the base state", ("state", "base", s),
                        ("t", "base", ts))
            return result
    return result


class JoinKind(str, enum.Enum):
    HIERARCHICAL = "Hierarchical"
    FOREIGN_KEY = "ForeignKey"
    COMPUTATIONAL = "Computational"


def _is_prefix(cols, key) -> bool:
    return key is not None and set(key[: len(cols)]) == set(cols)


def _hierarchical(schema, parent, child, pairs) -> bool:
    p, c = schema.tables[parent], schema.tables[child]
    pcols = [i for i, _ in pairs]
    ccols = [j for _, j in pairs]
    return p.key is not None and set(pcols) == set(p.key) and _is_prefix(ccols, c.key)


def _foreign_key(schema, local, foreign, pairs) -> bool:
    l, f = schema.tables[local], schema.tables[foreign]
    declared = {(fk.column, fk.foreign_column) for fk in l.foreign_keys if fk.table == foreign}
    lcols = {i for i, _ in pairs}
    return (
        f.key is not None
        and {j for _, j in pairs} == set(f.key)
        and all(pair in declared for pair in pairs)
        and not lcols <= set(l.key or ())
    )


def classify_join(schema: DatabaseSchema, join) -> JoinKind:
    """Classify a join by the key metadata of the joined tables."""
    if not isinstance(join, (HierJoin, FKJoin, ThetaJoin)):
        raise InvalidStrategy(f"not a join: {type(join).__name__}")
    a, b = _join_sides(join)
    if not (schema.has_keys(a) or schema.has_keys(b)):
        raise MissingKeyMetadata(
            f"no keys declared for {schema.tables[a].name} or {schema.tables[b].name}")
    if isinstance(join, ThetaJoin):
        if any(op != "=" for _, op, _ in join.on):
            return JoinKind.COMPUTATIONAL
        pairs = tuple((i, j) for i, _, j in join.on)
    else:
        pairs = join.on
    swapped = tuple((j, i) for i, j in pairs)
    if _hierarchical(schema, a, b, pairs) or _hierarchical(schema, b, a, swapped):
        return JoinKind.HIERARCHICAL
    if _foreign_key(schema, a, b, pairs) or _foreign_key(schema, b, a, swapped):
        return JoinKind.FOREIGN_KEY
    return JoinKind.COMPUTATIONAL

