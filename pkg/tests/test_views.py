import pytest

from ccview.errors import InvalidView, NoConstructiveComplement
from ccview.predicate import Compare
from ccview.relcore import DatabaseSchema, DatabaseState, enumerate_states
from ccview.views import (
    AntiJoin, FKJoin, HierJoin, Label, One, Ordering, Partition, Product, Projection,
    Selection, Tabulated, ThetaJoin, Union, Zero, compare, complement_of, evaluate,
    is_complement, output_schema, partition, perfect_decomposition, validate_view,
)

from oracles import blocks, partition_sets


def named(ws, part):
    names = {s: n for n, s in ws.states.items()}
    return {frozenset(names[s] for s in block) for block in partition_sets(part)}


# two-valued fixture: four states, views f, c, g, h

def test_two_valued_partitions(ws):
    w = ws("two_valued")
    assert len(enumerate_states(w.schema)) == 4
    assert named(w, partition(w.views["f"], w.schema)) == {
        frozenset({"ab", "a"}), frozenset({"b", "empty"})}
    assert named(w, partition(w.views["c"], w.schema)) == {
        frozenset({"ab", "b"}), frozenset({"a", "empty"})}
    assert named(w, partition(w.views["h"], w.schema)) == {
        frozenset({"ab"}), frozenset({"a", "b"}), frozenset({"empty"})}


def test_two_valued_complements_and_order(ws):
    w = ws("two_valued")
    f, c, g, h = (w.views[k] for k in "fcgh")
    assert is_complement(f, c, w.schema)
    assert is_complement(f, h, w.schema)
    assert is_complement(f, g, w.schema)
    assert compare(c, h, w.schema) is Ordering.INCOMPARABLE
    assert compare(g, h, w.schema) is Ordering.INCOMPARABLE
    assert compare(f, f, w.schema) is Ordering.EQUIVALENT
    assert compare(One(), f, w.schema) is Ordering.GREATER_EQUAL
    assert compare(Zero(), f, w.schema) is Ordering.LESS_EQUAL
    assert not is_complement(f, f, w.schema)


def test_top_and_bottom_partitions(ws):
    w = ws("two_valued")
    assert partition(One(), w.schema).is_discrete
    assert partition(Zero(), w.schema).size == 1
    assert is_complement(w.views["f"], Product(w.views["c"], Zero()), w.schema)


def test_eval_examples(ws):
    w = ws("two_valued")
    ab = w.states["ab"]
    assert evaluate(w.views["f"], ab, w.schema) == DatabaseState(({("a",)},))
    assert evaluate(w.views["h"], w.states["a"], w.schema) == Label("ab")
    assert evaluate(Zero(), ab, w.schema) == DatabaseState(())
    assert evaluate(One(), ab, w.schema) == ab
    pair = evaluate(Product(w.views["f"], w.views["c"]), ab, w.schema)
    assert pair == (DatabaseState(({("a",)},)), DatabaseState(({("b",)},)))


def test_tabulated_missing_entry(ws):
    w = ws("two_valued")
    partial = Tabulated(((w.states["a"], "x"),))
    with pytest.raises(InvalidView):
        evaluate(partial, w.states["b"], w.schema)


# operator semantics against direct set computations

def test_selection_with_nulls(ws):
    w = ws("selection_null")
    s = w.states["all"]
    assert evaluate(w.views["f"], s, w.schema).tables[0] == {("a",)}
    # the complement keeps nulls: null != a holds
    assert evaluate(w.views["c"], s, w.schema).tables[0] == {("b",), ("nil",)}


def test_projection_excludes_nulls(ws):
    w = ws("projection")
    s = w.states["s1"]
    assert evaluate(w.views["p"], s, w.schema).tables[0] == {("k1", "a1"), ("k2", "a2")}
    assert evaluate(w.views["kb"], s, w.schema).tables[0] == {("k1", "b1")}


def test_joins(ws):
    w = ws("invoice")
    s = w.states["s"]
    rows = evaluate(w.views["j"], s, w.schema).tables[0]
    parent, child = s.tables
    assert rows == {p + c for p in parent for c in child if p[0] == c[0]}
    assert evaluate(w.views["childless"], s, w.schema).tables[0] == {("C", "CCC")}


def test_theta_join_respects_order(ws):
    w = ws("joins")
    item, box = w.schema.index("Item"), w.schema.index("Box")
    tables = [frozenset() for _ in w.schema.tables]
    tables[item] = frozenset({("i1", "1", "2", "3")})
    tables[box] = frozenset({("i1", "1", "3", "3"), ("i2", "2", "1", "3")})
    s = DatabaseState(tuple(tables))
    rows = evaluate(w.views["best_fit"], s, w.schema).tables[0]
    assert rows == {("i1", "1", "2", "3", "i1", "1", "3", "3")}


def test_output_schemas(ws):
    w = ws("invoice")
    out = output_schema(w.views["j"], w.schema)
    assert out.tables[0].name == "Parent*Child" and out.tables[0].width == 5
    assert output_schema(Zero(), w.schema) == DatabaseSchema(())
    assert output_schema(One(), w.schema) == w.schema
    assert output_schema(Product(Zero(), One()), w.schema) is None


def test_validate_view(ws):
    w = ws("union")
    validate_view(w.views["u"], w.schema)
    with pytest.raises(InvalidView):
        validate_view(Selection(5, Compare(0, "=", "a")), w.schema)
    with pytest.raises(InvalidView):
        validate_view(Projection(0, ()), w.schema)
    with pytest.raises(InvalidView):
        validate_view(Projection(0, (0, 0)), w.schema)
    w2 = ws("invoice")
    with pytest.raises(InvalidView):
        validate_view(HierJoin(0, 1, ((0, 1),)), w2.schema)
    with pytest.raises(InvalidView):
        validate_view(ThetaJoin(0, 1, ((0, "~", 0),)), w2.schema)


# partitions

def test_partition_refinement():
    states = ("w", "x", "y", "z")
    fine = Partition.from_keys(states, [0, 1, 2, 2])
    coarse = Partition.from_keys(states, ["p", "p", "q", "q"])
    assert fine.refines(coarse) and not coarse.refines(fine)
    assert fine.blocks == (0, 1, 2, 2)
    with pytest.raises(ValueError):
        fine.refines(Partition.from_keys(("w",), [0]))


# constructive complements

@pytest.mark.parametrize("name,view,expected", [
    ("two_valued", "f", "c"),
    ("selection_null", "f", "c"),
    ("projection", "p", "kb"),
    ("hierjoin", "j", "childless"),
    ("fkjoin", "j", "foreign"),
])
def test_complement_of_fixture_views(ws, name, view, expected):
    w = ws(name)
    comp = complement_of(w.views[view], w.schema)
    assert partition(comp, w.schema).blocks == partition(w.views[expected], w.schema).blocks
    assert is_complement(w.views[view], comp, w.schema)


def test_complement_shapes(ws):
    w = ws("hierjoin")
    assert complement_of(w.views["j"], w.schema) == AntiJoin(0, 1, ((0, 0),))
    assert complement_of(Union(0, 0), w.schema) == Zero()
    f = ws("fkjoin")
    assert complement_of(FKJoin(0, 1, ((1, 0),)), f.schema) == Projection(1, (0, 1))
    with pytest.raises(NoConstructiveComplement):
        complement_of(One(), w.schema)


def test_union_complement_zero_is_not_a_complement(ws):
    # a union of two tables loses which side a row came from
    w = ws("union")
    assert not is_complement(w.views["u"], Zero(), w.schema)


@pytest.mark.parametrize("name,view,comp", [
    ("two_valued", "f", "c"),
    ("selection_null", "f", "c"),
    ("union", "u", "z"),
    ("hierjoin", "j", "childless"),
    ("fkjoin", "j", "foreign"),
])
def test_perfect_decompositions(ws, name, view, comp):
    w = ws(name)
    assert perfect_decomposition(w.views[view], w.views[comp], w.schema)


def test_overlapping_views_are_not_perfect(ws):
    w = ws("two_valued")
    assert not perfect_decomposition(w.views["f"], One(), w.schema)


def test_selection_partition_matches_oracle(ws):
    w = ws("selection_null")
    states = enumerate_states(w.schema)
    expected = blocks(states, lambda s: frozenset(r for r in s.tables[0] if r[0] == "a"))
    assert partition_sets(partition(w.views["f"], w.schema, states)) == expected
