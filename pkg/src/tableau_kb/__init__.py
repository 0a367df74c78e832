"""Description-logic knowledge bases with a tableau reasoner.

The package reads knowledge bases in a textual DL syntax or an OWL 2 Turtle
subset, checks consistency and subsumption with a tableau, materializes
DL-safe rules over named individuals, and ships a finite-model oracle used
to test the reasoner.
"""

from .dlsyntax import parse_axiom, parse_concept, parse_dl, serialize_dl
from .model import KnowledgeBase, signature_of
from .normalize import check_regularity, compile_chains_to_rules, gci_disjunctions, nnf, role_closure
from .oracle import find_model, satisfies
from .reasoner import classify, entails, realize
from .rules import make_safe, materialize
from .tableau import is_consistent, is_satisfiable_concept, subsumes
from .turtle import from_turtle, to_turtle
from .validation import validate

__all__ = [
    "KnowledgeBase",
    "check_regularity",
    "classify",
    "compile_chains_to_rules",
    "entails",
    "find_model",
    "from_turtle",
    "gci_disjunctions",
    "is_consistent",
    "is_satisfiable_concept",
    "make_safe",
    "materialize",
    "nnf",
    "parse_axiom",
    "parse_concept",
    "parse_dl",
    "realize",
    "role_closure",
    "satisfies",
    "serialize_dl",
    "signature_of",
    "subsumes",
    "to_turtle",
    "validate",
]
