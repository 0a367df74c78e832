"""Admissibility checks for knowledge bases, reported as data."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonRegularRBoxError, UnsupportedConstructError
from .model import (
    AsymmetricRole,
    AtLeast,
    AtMost,
    DisjointRoles,
    IrreflexiveRole,
    KnowledgeBase,
    NegatedRoleAssertion,
    SelfRestriction,
    UniversalRole,
    axiom_concepts,
    axiom_roles,
    concept_roles,
    walk,
)
from .normalize import check_regularity, role_closure

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error or warning
    code: str
    message: str
    line: int | None = None
    column: int | None = None

    def render(self, source: str = "") -> str:
        loc = ""
        if self.line is not None:
            loc = f"{self.line}:{self.column}: "
        if source:
            loc = f"{source}:{loc}" if loc else f"{source}: "
        return f"{loc}{self.severity}: {self.message} [{self.code}]"


def _simple_uses(ax):
    """Roles that the axiom requires to be simple."""
    out = []
    if isinstance(ax, (DisjointRoles,)):
        out += [ax.r, ax.s]
    elif isinstance(ax, (IrreflexiveRole, AsymmetricRole)):
        out.append(ax.role)
    elif isinstance(ax, NegatedRoleAssertion):
        out.append(ax.role)
    for c in axiom_concepts(ax):
        for sub in walk(c):
            if isinstance(sub, (AtLeast, AtMost, SelfRestriction)):
                out.append(sub.role)
    return out


def validate(kb: KnowledgeBase, strict_rules: bool = False) -> list:
    """Diagnostics for everything that makes ``kb`` inadmissible.

    An empty list means the role inclusions are regular, roles that must be
    simple are simple, the universal role is not used by reasoning, and every
    rule is DL-safe (after automatic guarding unless ``strict_rules``).
    """
    from .rules import unsafe_variables

    diags = []
    try:
        check_regularity(kb.rbox)
    except NonRegularRBoxError as e:
        diags.append(Diagnostic(ERROR, "non-regular", str(e)))
    except UnsupportedConstructError as e:
        diags.append(Diagnostic(ERROR, "universal-role", str(e)))

    for ax in kb.axioms:
        roles = list(axiom_roles(ax))
        for c in axiom_concepts(ax):
            roles += list(concept_roles(c))
        if any(isinstance(r, UniversalRole) for r in roles):
            diags.append(
                Diagnostic(ERROR, "universal-role", f"universal role is not supported in reasoning: {ax}")
            )

    closure = role_closure(kb)
    reported = set()
    for ax in kb.axioms:
        for r in _simple_uses(ax):
            if isinstance(r, UniversalRole) or closure.is_simple(r):
                continue
            key = (str(r), str(ax))
            if key not in reported:
                reported.add(key)
                diags.append(
                    Diagnostic(
                        ERROR,
                        "non-simple-role",
                        f"role {r} must be simple in '{ax}' but is implied by a role chain or transitivity",
                    )
                )

    for i, rule in enumerate(kb.rules):
        missing = unsafe_variables(rule)
        if missing and strict_rules:
            names = ", ".join(map(str, missing))
            diags.append(
                Diagnostic(ERROR, "unsafe-rule", f"rule {i + 1} '{rule}' is not DL-safe: {names} unguarded")
            )
    return diags


def errors_only(diags) -> list:
    return [d for d in diags if d.severity == ERROR]
