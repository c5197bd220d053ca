"""Time the exhaustive complete-set check as the tuple space grows.

Pairs grow as 4^n and triples as 8^n for a tuple space of n rows, so the
measured rate is extrapolated to n = 12.
"""
import argparse
import time
from dataclasses import dataclass

from ccview.relcore import DatabaseSchema, Domain, TableSchema, check_complete_set


@dataclass
class Config:
    max_tuples: int = 6
    target: int = 12


def run(cfg: Config) -> None:
    rate = None
    print(f"{'tuples':>6} {'states':>7} {'triples':>10} {'seconds':>8}")
    for n in range(cfg.max_tuples + 1):
        dom = Domain("D", tuple(f"v{j}" for j in range(n))) if n else None
        schema = DatabaseSchema((TableSchema("T", (dom,)),)) if n else DatabaseSchema(())
        start = time.perf_counter()
        report = check_complete_set(schema, max_states=1 << cfg.max_tuples)
        elapsed = time.perf_counter() - start
        assert report.ok, report
        print(f"{n:6} {report.states:7} {report.triples:10} {elapsed:8.3f}")
        if report.triples:
            rate = report.triples / elapsed
    if rate:
        triples = 8 ** cfg.target
        print(f"~{rate:,.0f} triples/s; {cfg.target} tuples need {triples:,} triples, "
              f"about {triples / rate / 86400:,.1f} days")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-tuples", type=int, default=6)
    parser.add_argument("--target", type=int, default=12)
    args = parser.parse_args()
    run(Config(args.max_tuples, args.target))
