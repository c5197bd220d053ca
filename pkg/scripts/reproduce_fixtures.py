"""Run every shipped fixture through the translator, correspondence and
non-collision checks and print one row per (view, strategy) pair."""
import argparse
import time
from dataclasses import dataclass

from ccview import fixtures
from ccview.cli import _Output
from ccview.errors import CCViewError
from ccview.translate import TranslationSpace, check_translator
from ccview.verify import correspondence, lagerak_check
from ccview.views import perfect_decomposition


@dataclass
class Config:
    cases: tuple = (
        ("two_valued", "f", "sel", "c"),
        ("selection_null", "f", "sel", "c"),
        ("union", "u", "both", "z"),
        ("union", "u", "left", "z"),
        ("union", "u", "right", "z"),
        ("projection", "p", "pad", "kb"),
        ("hierjoin", "j", "hier", "childless"),
        ("fkjoin", "j", "fk", "foreign"),
        ("fkjoin", "combined_fixture", "combined", "foreign"),
    )
    witnesses: bool = False


def run(cfg: Config) -> None:
    header = f"{'fixture':15} {'view':17} {'strategy':9} {'states':>6} {'laws':5} {'corr':5} {'noncoll':7} {'perfect':7} {'time':>6}"
    print(header)
    print("-" * len(header))
    for name, view, strategy, comp in cfg.cases:
        ws = fixtures.load(name)
        start = time.perf_counter()
        sp = TranslationSpace(ws.views[view], ws.strategies[strategy], ws.schema)
        report = check_translator(sp.view, sp.strategy, ws.schema, space=sp)
        try:
            corr = correspondence(sp.view, sp.strategy, ws.views[comp], ws.schema, space=sp).ok
        except CCViewError as exc:
            corr = type(exc).__name__
        noncoll = lagerak_check(sp.view, sp.strategy, ws.schema, space=sp).ok
        perfect = perfect_decomposition(ws.views[view], ws.views[comp], ws.schema, sp.states)
        elapsed = time.perf_counter() - start
        print(f"{name:15} {view:17} {strategy:9} {len(sp.states):6} {str(report.ok):5} "
              f"{str(corr)[:5]:5} {str(noncoll):7} {str(perfect):7} {elapsed:5.2f}s")
        if cfg.witnesses and not report.ok:
            law = next(l for l in report.laws if not l.ok)
            print(f"    {law.name}:")
            for line in _Output(ws, sp.view).witness(law.witness):
                print(f"      {line}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--witnesses", action="store_true", help="print failing witnesses")
    args = parser.parse_args()
    run(Config(witnesses=args.witnesses))
