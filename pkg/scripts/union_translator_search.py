"""Search every translation table for a union view on a tiny schema.

R and S each hold at most one row ``(a)``. A candidate assigns, to every base
state and every target view state, a base state with that view (so each
candidate satisfies commutativity by construction, and identity updates are
fixed to stay put). A candidate is a translator when it also preserves
composition state-wise: translating to w2 directly equals translating to w1
and then to w2. The search finds none, for any insert policy.
"""
import argparse
import itertools
from dataclasses import dataclass

from ccview.relcore import DatabaseSchema, Domain, TableSchema, enumerate_states
from ccview.views import Union, evaluate


@dataclass
class Config:
    values: tuple = ("a",)
    max_candidates: int = 1_000_000


def run(cfg: Config) -> None:
    dom = Domain("V", cfg.values)
    schema = DatabaseSchema((TableSchema("R", (dom,)), TableSchema("S", (dom,))))
    view = Union(0, 1)
    states = enumerate_states(schema)
    image = {s: evaluate(view, s, schema) for s in states}
    views = list(dict.fromkeys(image.values()))
    fibre = {w: [s for s in states if image[s] == w] for w in views}
    # free choices: (state, target view) with target != current view
    slots = [(s, w) for s in states for w in views if w != image[s]]
    options = [fibre[w] for _, w in slots]
    space = 1
    for o in options:
        space *= len(o)
    print(f"{len(states)} base states, {len(views)} view states, {len(slots)} free slots")
    if space > cfg.max_candidates:
        print(f"{space:,} candidates exceed the limit of {cfg.max_candidates:,}")
        return
    total = found = 0
    for choice in itertools.product(*options):
        total += 1
        table = dict(zip(slots, choice))

        def T(s, w):
            return s if w == image[s] else table[(s, w)]

        if all(T(T(s, w1), w2) == T(s, w2) for s in states for w1 in views for w2 in views):
            found += 1
    print(f"candidates: {total}, translators: {found}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--values", nargs="+", default=["a"])
    parser.add_argument("--max-candidates", type=int, default=1_000_000)
    args = parser.parse_args()
    run(Config(tuple(args.values), args.max_candidates))
