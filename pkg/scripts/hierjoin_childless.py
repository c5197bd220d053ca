"""Show why inserting a child under an existing childless parent is refused.

The literal insert rule adds the child row whenever its parent exists. On a
childless parent that changes the childless-parent complement, and the
translator check finds a composition failure. The shipped rule refuses such
inserts instead.
"""
import argparse
from dataclasses import dataclass

from ccview import fixtures
from ccview.cli import _Output
import ccview.translate as tr
from ccview.translate import check_translator


@dataclass
class Config:
    fixture: str = "hierjoin"


def literal_rule(view, strategy, u, s, schema):
    pw = schema.tables[view.parent].width
    parents, children = set(s[view.parent]), set(s[view.child])
    gone = {r[pw:] for r in u.delete[0]}
    children -= gone
    for p in s[view.parent]:
        ch = tr._children(p, s[view.child], view.on)
        if ch and gone.issuperset(ch):
            parents.discard(p)
    for r in u.add[0]:
        parents.add(r[:pw])
        children.add(r[pw:])
    return s.replace(view.parent, parents).replace(view.child, children)


def run(cfg: Config) -> None:
    ws = fixtures.load(cfg.fixture)
    view, strategy = ws.views["j"], ws.strategies["hier"]
    shipped = check_translator(view, strategy, ws.schema)
    saved = tr._RULES["hierjoin"]
    tr._RULES["hierjoin"] = literal_rule
    try:
        literal = check_translator(view, strategy, ws.schema)
    finally:
        tr._RULES["hierjoin"] = saved
    for label, report in (("shipped", shipped), ("literal", literal)):
        print(f"{label}: " + ", ".join(f"{l.name} {'ok' if l.ok else 'FAIL'}" for l in report.laws))
        for law in report.laws:
            if law.witness:
                print(f"  {law.name}:")
                for line in _Output(ws, view).witness(law.witness):
                    print(f"    {line}")
                break


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture", default="hierjoin")
    run(Config(**vars(parser.parse_args())))
