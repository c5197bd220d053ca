"""Brute-force oracles for complements induced by translation strategies.

The induced equivalence relates two base states when one translated view
update carries one to the other. Its classes are compared block-for-block with
the partition of a proposed complement view.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotATranslator, TranslationError
from .relcore import DatabaseSchema, DatabaseState, Update, apply
from .translate import LawResult, Strategy, TranslationSpace, check_translator, translate
from .views import Partition, evaluate, partition


@dataclass
class InducedEquivalence:
    partition: Partition
    edges: int
    symmetric: bool
    transitive: bool

    @property
    def is_equivalence(self) -> bool:
        return self.symmetric and self.transitive


def _successors(space: TranslationSpace) -> list:
    succ = [set() for _ in space.states]
    for si, wi in space.pairs():
        t = space.translation(si, wi)
        if isinstance(t, TranslationError):
            continue
        target = space.index.get(apply(space.states[si], t))
        if target is not None:
            succ[si].add(target)
    return succ


def induced_partition(view, strategy: Strategy, schema: DatabaseSchema, states=None,
                      require_translator: bool = True,
                      space: Optional[TranslationSpace] = None) -> InducedEquivalence:
    """Connected components of the one-step reachability graph of translated updates.

    The component partition is only meaningful when one-step reachability is
    already symmetric and transitive; both are checked and reported, and a
    strategy failing the translator laws is rejected unless
    ``require_translator`` is False.
    """
    sp = space or TranslationSpace(view, strategy, schema, states)
    if require_translator:
        report = sp.report or check_translator(view, strategy, schema, space=sp)
        if not report.ok:
            bad = next(law for law in report.laws if not law.ok)
            raise NotATranslator(f"{strategy.kind} fails {bad.name}: {bad.witness.note}")
    succ = _successors(sp)
    parent = list(range(len(sp.states)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edges = 0
    for i, targets in enumerate(succ):
        for j in targets:
            edges += 1
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    symmetric = all(i in succ[j] for i, targets in enumerate(succ) for j in targets)
    transitive = all(succ[j] <= succ[i] for i, targets in enumerate(succ) for j in targets)
    if require_translator and not (symmetric and transitive):
        raise NotATranslator("one-step reachability is not an equivalence relation")
    part = Partition.from_keys(sp.states, (find(i) for i in range(len(sp.states))))
    return InducedEquivalence(part, edges, symmetric, transitive)


@dataclass
class CorrespondenceReport:
    ok: bool
    witness: tuple = ()  # (block id, shared complement state) pairs when ok
    violation: Optional[tuple] = None  # (note, state, state) when not ok


def correspondence(view, strategy: Strategy, complement, schema: DatabaseSchema,
                   states=None, space: Optional[TranslationSpace] = None) -> CorrespondenceReport:
    """Pass iff the complement's partition equals the induced partition."""
    induced = induced_partition(view, strategy, schema, states, space=space).partition
    comp = partition(complement, schema, induced.states)
    values = [evaluate(complement, s, schema) for s in induced.states]
    if induced.blocks == comp.blocks:
        first: dict = {}
        for b, v in zip(induced.blocks, values):
            first.setdefault(b, v)
        return CorrespondenceReport(True, tuple(sorted(first.items(), key=lambda x: x[0])))
    n = len(induced.states)
    for i in range(n):
        for j in range(i + 1, n):
            same_block = induced.blocks[i] == induced.blocks[j]
            same_value = values[i] == values[j]
            if same_block and not same_value:
                note = "states in one induced class have different complement states"
            elif same_value and not same_block:
                note = "states with equal complement states lie in different induced classes"
            else:
                continue
            return CorrespondenceReport(False, violation=(note, induced.states[i], induced.states[j]))
    raise AssertionError("partitions differ but no violating pair found")


def lagerak_check(view, strategy: Strategy, schema: DatabaseSchema, states=None,
                  space: Optional[TranslationSpace] = None) -> LawResult:
    """No view update sends two distinct states with the same view to one state."""
    sp = space or TranslationSpace(view, strategy, schema, states)
    result = LawResult("non-collision")
    groups: dict = {}
    for si, img in enumerate(sp.images):
        groups.setdefault(img, []).append(si)
    for members in groups.values():
        if len(members) < 2:
            continue
        for wi in range(len(sp.universe)):
            landed: dict = {}
            for si in members:
                t = sp.translation(si, wi)
                if isinstance(t, TranslationError):
                    continue
                after = apply(sp.states[si], t)
                if after in landed:
                    result.fail(
                        "two states with one view state collide",
                        ("s1", "base", sp.states[landed[after]]), ("s2", "base", sp.states[si]),
                        ("u", "view", sp.view_update(si, wi)), ("T_u(s)", "base", after),
                    )
                    return result
                landed[after] = si
    return result


def delete_all_heuristic(view, strategy: Strategy, s: DatabaseState,
                         schema: DatabaseSchema) -> DatabaseState:
    """Base state left after translating the view update that deletes every view row."""
    current = evaluate(view, s, schema)
    u = Update(tuple(frozenset() for _ in current.tables), current.tables)
    return apply(s, translate(view, strategy, u, s, schema))
