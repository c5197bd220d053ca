"""Constant-complement view updates over finite relational databases."""
from .dsl import Workspace, parse_workspace, serialize_workspace
from .errors import CCViewError
from .relcore import (
    DatabaseSchema, DatabaseState, Domain, ForeignKey, TableSchema, Update, apply, compose,
    diff, enumerate_states, invert,
)
from .translate import JoinKind, Strategy, check_translator, classify_join
from .verify import correspondence, delete_all_heuristic, induced_partition, lagerak_check
from .views import compare, complement_of, evaluate, is_complement, partition

__version__ = "0.1.0"
