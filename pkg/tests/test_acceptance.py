"""Acceptance gate: twelve criteria, one PASS/FAIL line each.

Lines print as the criteria run (visible with ``-s``) and are repeated in the
terminal summary. Criteria 2 and 4 are known to fail for the reasons given in
their xfail markers; they are implemented as stated and checked strictly, so an
unexpected pass would also turn the suite red.
"""
import os
import subprocess
import sys
import time

import pytest

from ccview import fixtures
from ccview.cli import main
from ccview.errors import NotATranslator, NotTranslatable, TranslationError
from ccview.relcore import (
    DatabaseSchema, Domain, TableSchema, apply, check_complete_set, compose, enumerate_states,
    invert,
)
from ccview.translate import JoinKind, check_translator, classify_join, translate
from ccview.verify import correspondence, delete_all_heuristic, induced_partition, lagerak_check
from ccview.views import (
    Ordering, Zero, compare, is_complement, output_schema, partition, perfect_decomposition,
)

from cli_cases import CASES
from conftest import ACCEPTANCE, space, workspace
from oracles import partition_sets


def record(n, title, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    return ok


def laws(report):
    return ", ".join(f"{law.name} {'ok' if law.ok else 'FAIL'}" for law in report.laws)


def checked(name, view, strategy):
    sp = space(name, view, strategy)
    return sp, check_translator(sp.view, sp.strategy, sp.schema, space=sp)


def corresponds(name, view, strategy, comp):
    sp = space(name, view, strategy)
    w = workspace(name)
    return correspondence(sp.view, sp.strategy, w.views[comp], w.schema, space=sp).ok


def test_criterion_01_two_valued_fixture():
    start = time.perf_counter()
    w = fixtures.load("two_valued")
    states = enumerate_states(w.schema)
    names = {s: n for n, s in w.states.items()}

    def named(view):
        return {frozenset(names[s] for s in b) for b in partition_sets(partition(view, w.schema, states))}

    f, c, h = w.views["f"], w.views["c"], w.views["h"]
    results = {
        "4 states": len(states) == 4,
        "partition(f)": named(f) == {frozenset({"ab", "a"}), frozenset({"b", "empty"})},
        "partition(c)": named(c) == {frozenset({"ab", "b"}), frozenset({"a", "empty"})},
        "f,c complements": is_complement(f, c, w.schema, states),
        "f,h complements": is_complement(f, h, w.schema, states),
        "c,h incomparable": compare(c, h, w.schema, states) is Ordering.INCOMPARABLE,
    }
    elapsed = time.perf_counter() - start
    ok = all(results.values()) and elapsed < 1.0
    bad = [k for k, v in results.items() if not v]
    record(1, "two-valued fixture reproduction", ok,
           f"{elapsed:.3f}s" + (f"; failed: {', '.join(bad)}" if bad else ""))
    assert ok


def _layout(sizes):
    tables = []
    for i, n in enumerate(sizes):
        dom = Domain(f"D{i}", tuple(f"v{j}" for j in range(n)))
        tables.append(TableSchema(f"T{i}", (dom,)))
    return DatabaseSchema(tuple(tables))


def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


@pytest.mark.xfail(strict=True, reason=(
    "all pairs and triples over a 12-tuple space is 4096^3 triples; the exhaustive "
    "check cannot finish inside the 5 s bound"))
def test_criterion_02_update_algebra():
    start = time.monotonic()
    deadline = start + 5.0
    done, stop = 0, None
    for n in range(13):
        for sizes in _compositions(n):
            report = check_complete_set(_layout(sizes), max_states=1 << 12, deadline=deadline)
            if not report.ok:
                stop = (sizes, report)
                break
            done += 1
        if stop:
            break
    elapsed = time.monotonic() - start
    ok = stop is None and elapsed < 5.0
    if stop is None:
        detail = f"{done} layouts up to 12 tuples in {elapsed:.2f}s"
    else:
        sizes, report = stop
        detail = (f"{done} layouts passed; stopped at table sizes {sizes} with "
                  f"{report.law} after {report.pairs} pairs, {report.triples} of "
                  f"{report.states ** 3} triples, {elapsed:.2f}s")
    record(2, "update algebra exhaustive up to 12 tuples", ok, detail)
    assert ok


def test_criterion_03_selection():
    results = []
    for name in ("two_valued", "selection_null"):
        _, report = checked(name, "f", "sel")
        results.append(report.ok and corresponds(name, "f", "sel", "c"))
    ok = all(results)
    record(3, "selection translator and complement correspondence", ok,
           "two-valued and null fixtures")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "a union view is not injective, so with a constant empty complement no strategy "
    "preserves composition: deleting a row and re-inserting it moves it to both tables"))
def test_criterion_04_union():
    sp, report = checked("union", "u", "both")
    try:
        induced = induced_partition(sp.view, sp.strategy, sp.schema, space=sp)
        single = induced.partition.size == 1
        note = ""
    except NotATranslator as exc:
        relaxed = induced_partition(sp.view, sp.strategy, sp.schema, space=sp,
                                    require_translator=False)
        single = False
        note = (f"; induced partition undefined ({exc}); relaxed reachability has "
                f"{relaxed.partition.size} component(s), symmetric={relaxed.symmetric}")
    zero = partition(Zero(), sp.schema, sp.states).size == 1
    ok = report.ok and single and zero
    record(4, "union both-policy translator with empty complement", ok, laws(report) + note)
    assert ok


def test_criterion_05_projection():
    w = workspace("projection")
    _, report = checked("projection", "p", "pad")
    corr = corresponds("projection", "p", "pad", "kb")
    # (k2, a2, nil): removing a2 leaves no information, so the row is deleted
    u = w.updates["del_k2"].bind(output_schema(w.views["p"], w.schema))
    t = translate(w.views["p"], w.strategies["pad"], u, w.states["s1"], w.schema)
    rule = not t.add[0] and t.delete[0] == {("k2", "a2", "nil")}
    ok = report.ok and corr and rule
    record(5, "projection null padding", ok,
           f"{laws(report)}; correspondence {corr}; all-null delete rule {rule}")
    assert ok


def test_criterion_06_hierarchical_join():
    _, report = checked("hierjoin", "j", "hier")
    corr = corresponds("hierjoin", "j", "hier", "childless")
    w = workspace("invoice")
    residual = delete_all_heuristic(w.views["j"], w.strategies["hier"], w.states["s"], w.schema)
    heur = residual.tables == (frozenset({("C", "CCC")}), frozenset())
    ok = report.ok and corr and heur
    record(6, "hierarchical join", ok,
           f"{laws(report)}; correspondence {corr}; heuristic leaves childless parents {heur}")
    assert ok


def test_criterion_07_foreign_key_join():
    sp, report = checked("fkjoin", "j", "fk")
    touched = 0
    for si, wi in sp.pairs():
        t = sp.translation(si, wi)
        if not isinstance(t, TranslationError) and (t.add[1] or t.delete[1]):
            touched += 1
    corr = corresponds("fkjoin", "j", "fk", "foreign")
    w = workspace("fkjoin")
    u = w.updates["add_2q"].bind(output_schema(w.views["j"], w.schema))
    try:
        translate(w.views["j"], w.strategies["fk"], u, w.states["s1"], w.schema)
        refused = False
    except NotTranslatable:
        refused = True
    ok = report.ok and touched == 0 and corr and refused
    record(7, "foreign-key join", ok,
           f"{laws(report)}; {report.translations} translations, {touched} touch the foreign "
           f"table; correspondence {corr}; unknown foreign part refused {refused}")
    assert ok


def test_criterion_08_combined_rejected():
    sp, report = checked("fkjoin", "combined_fixture", "combined")
    comp = report.composition
    ok = not comp.ok
    if ok:
        items = {label: value for label, _, value in comp.witness.items}
        s, u, v = items["state"], items["u"], items["v"]
        # recompute the witness from scratch
        tu = translate(sp.view, sp.strategy, u, s, sp.schema)
        tv = translate(sp.view, sp.strategy, v, apply(s, tu), sp.schema)
        whole = translate(sp.view, sp.strategy, compose(v, u, sp.images[sp.index[s]]), s, sp.schema)
        ok = v == invert(u) and whole.is_identity and compose(tv, tu, s) != whole
    record(8, "combined strategy rejected", ok,
           comp.witness.note if comp.witness else "no composition witness")
    assert ok


def test_criterion_09_non_collision():
    candidates = [("two_valued", "f", "sel"), ("selection_null", "f", "sel"),
                  ("union", "u", "both"), ("projection", "p", "pad"),
                  ("hierjoin", "j", "hier"), ("fkjoin", "j", "fk")]
    results, skipped = [], []
    for args in candidates:
        sp, report = checked(*args)
        if not report.ok:
            skipped.append(args[0])
            continue
        results.append(lagerak_check(sp.view, sp.strategy, sp.schema, space=sp).ok)
    ok = bool(results) and all(results)
    detail = f"{sum(results)}/{len(results)} translators pass"
    if skipped:
        detail += f"; not translators, so not applicable: {', '.join(skipped)}"
    record(9, "non-collision", ok, detail)
    assert ok


def test_criterion_10_perfect_decomposition():
    pairs = [("two_valued", "f", "c"), ("selection_null", "f", "c"), ("union", "u", "z"),
             ("hierjoin", "j", "childless"), ("fkjoin", "j", "foreign")]
    results = {}
    for name, view, comp in pairs:
        w = workspace(name)
        results[f"{name}:{view}/{comp}"] = perfect_decomposition(w.views[view], w.views[comp], w.schema)
    ok = all(results.values())
    record(10, "perfect decomposition", ok, f"{sum(results.values())}/{len(results)} pairs")
    assert ok


def test_criterion_11_join_classification():
    w = workspace("joins")
    got = {name: classify_join(w.schema, w.views[name]) for name in
           ("invoice_lines", "line_parts", "best_fit")}
    ok = got == {"invoice_lines": JoinKind.HIERARCHICAL, "line_parts": JoinKind.FOREIGN_KEY,
                 "best_fit": JoinKind.COMPUTATIONAL}
    record(11, "join classification", ok, ", ".join(f"{k}={v.value}" for k, v in got.items()))
    assert ok


def _subprocess(argv, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run([sys.executable, "-m", "ccview.cli", *argv], capture_output=True, env=env)
    return proc.returncode, proc.stdout, proc.stderr


def test_criterion_12_determinism(capsys):
    mismatched = []
    for name, argv, _ in CASES:
        outputs = []
        for _ in range(2):
            code = main(argv)
            outputs.append((code, capsys.readouterr()))
        if outputs[0] != outputs[1]:
            mismatched.append(name)
    # one command per kind in fresh interpreters with different hash seeds
    kinds = {}
    for name, argv, _ in CASES:
        kinds.setdefault(next(a for a in argv if not a.startswith("-")), (name, argv))
    for name, argv in kinds.values():
        if _subprocess(argv, 1) != _subprocess(argv, 2):
            mismatched.append(f"{name} (separate processes)")
    ok = not mismatched
    record(12, "CLI determinism", ok,
           f"{len(CASES)} invocations in-process, {len(kinds)} across processes"
           + (f"; differing: {', '.join(mismatched)}" if mismatched else ""))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
