"""Example documents shipped with the package."""
from importlib import resources

from ..dsl import Workspace, parse_workspace

NAMES = ("two_valued", "selection_null", "union", "projection", "hierjoin", "invoice",
         "fkjoin", "joins")


def path(name: str):
    return resources.files(__name__) / f"{name}.ccv"


def text(name: str) -> str:
    return path(name).read_text()


def load(name: str) -> Workspace:
    return parse_workspace(text(name))
