"""Reader and printer for the ASCII DL text syntax.

One statement per ``.``; ``#`` starts a comment. Examples::

    liveAction SUBCLASS Movie.
    Narrator EQUIV Lector.
    activeActor SUBCLASS lives SOME Actor AND lives ONLY canAct.
    partOf o starredIn SUBROLE co-starredWith.
    Unforgiven directedBy ClintEastwood.
    AwardWinnerActor(?x) <- won(?x, ?y).

Concept operators bind, from loosest to tightest: ``OR``, ``AND``, then the
prefix forms (``NOT``, ``MIN``/``MAX``, ``r SOME``/``r ONLY``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ArityError, DLSyntaxError, NameClashError
from .model import (
    BOTTOM,
    INDIVIDUAL_PREDICATE,
    MAX_CARDINALITY,
    TOP,
    UNIVERSAL,
    And,
    AsymmetricRole,
    AtLeast,
    Atomic,
    AtMost,
    Bottom,
    ComplexRoleInclusion,
    ConceptAssertion,
    ConceptAtom,
    ConceptEquivalence,
    ConceptInclusion,
    Constant,
    DifferentIndividuals,
    DisjointRoles,
    DlSafeRule,
    Domain,
    Exists,
    ForAll,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    Literal,
    NegatedRoleAssertion,
    Nominal,
    NonDlAtom,
    Not,
    Or,
    Range,
    ReflexiveRole,
    Role,
    RoleAssertion,
    RoleAtom,
    RoleEquivalence,
    RoleInclusion,
    SameIndividual,
    SelfRestriction,
    Top,
    TransitiveRole,
    UniversalRole,
    Variable,
    compute_signature,
    conj,
    disj,
)

KEYWORDS = frozenset(
    """SUBCLASS EQUIV DOMAIN RANGE NOT SAME DIFF SUBROLE EQUIVROLE TRANS DIS ASY
    REF IRR INV UNIVERSAL TOP BOTTOM AND OR SOME ONLY MIN MAX SELF ONEOF o""".split()
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*"(?:\^\^[A-Za-z_][\w-]*(?::[\w-]+)?|@[A-Za-z]+(?:-[A-Za-z0-9]+)*)?)
  | (?P<arrow><-)
  | (?P<number>\d+)
  | (?P<ident>[^\W\d][\w-]*)
  | (?P<punct>[().,:?{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, kw, number, string, punct, arrow, eof
    text: str
    line: int
    column: int

    def describe(self):
        return "end of statement" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DLSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(
                Token("kw" if m.group() in KEYWORDS else "ident", m.group(), line, col)
            )
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _split_statements(tokens):
    stmt = []
    for tok in tokens:
        if tok.kind == "eof":
            if stmt:
                raise DLSyntaxError(
                    "statement is not terminated", tok.line, tok.column, expected=["'.'"]
                )
            return
        if tok.kind == "punct" and tok.text == ".":
            if not stmt:
                raise DLSyntaxError("empty statement", tok.line, tok.column)
            stmt.append(Token("eof", ".", tok.line, tok.column))
            yield stmt
            stmt = []
        else:
            stmt.append(tok)


def _unescape(body):
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), body)


def parse_literal(text: str) -> Literal:
    m = re.fullmatch(r'"((?:[^"\\]|\\.)*)"(?:\^\^(.+)|@(.+))?', text, re.S)
    lexical = _unescape(m.group(1))
    if m.group(3):
        return Literal(lexical, "rdf:langString", m.group(3))
    return Literal(lexical, m.group(2) or "xsd:string")


class _StatementParser:
    def __init__(self, tokens, owner):
        self.toks = tokens
        self.i = 0
        self.owner = owner

    # -- token helpers
    @property
    def cur(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind, text=None, tok=None):
        tok = tok or self.cur
        return tok.kind == kind and (text is None or tok.text == text)

    def advance(self):
        tok = self.cur
        self.i += 1
        return tok

    def fail(self, expected, message=None):
        tok = self.cur
        raise DLSyntaxError(
            message or f"unexpected {tok.describe()}", tok.line, tok.column, expected
        )

    def expect(self, kind, text=None, label=None):
        if not self.at(kind, text):
            self.fail([label or (repr(text) if text else kind)])
        return self.advance()

    def end(self):
        if self.cur.kind != "eof":
            self.fail(["'.'"])

    def ident(self, kind):
        tok = self.expect("ident", label="identifier")
        self.owner.use(tok.text, kind, tok)
        return tok.text

    # -- roles and concepts
    def role(self):
        if self.at("kw", "INV"):
            self.advance()
            self.expect("punct", "(")
            name = self.ident("role")
            self.expect("punct", ")")
            return InverseRole(name)
        if self.at("kw", "UNIVERSAL"):
            self.advance()
            return UNIVERSAL
        if self.at("ident"):
            return Role(self.ident("role"))
        self.fail(["identifier", "'INV'", "'UNIVERSAL'"])

    def chain(self):
        roles = [self.role()]
        while self.at("kw", "o"):
            self.advance()
            roles.append(self.role())
        return roles

    def concept(self):
        ops = [self.conjunction()]
        while self.at("kw", "OR"):
            self.advance()
            ops.append(self.conjunction())
        return ops[0] if len(ops) == 1 else self._combine(disj, ops)

    def conjunction(self):
        ops = [self.unary()]
        while self.at("kw", "AND"):
            self.advance()
            ops.append(self.unary())
        return ops[0] if len(ops) == 1 else self._combine(conj, ops)

    @staticmethod
    def _combine(fn, ops):
        return fn(*ops)

    def _starts_role_restriction(self):
        if self.at("kw", "INV") or self.at("kw", "UNIVERSAL"):
            return True
        return self.at("ident") and self.peek().kind == "kw" and self.peek().text in (
            "SOME",
            "ONLY",
            "SELF",
        )

    def cardinality(self):
        tok = self.expect("number", label="non-negative integer")
        n = int(tok.text)
        if n > MAX_CARDINALITY:
            raise DLSyntaxError("cardinality exceeds 2^31-1", tok.line, tok.column)
        return n

    def unary(self):
        tok = self.cur
        if self.at("kw", "NOT"):
            self.advance()
            return Not(self.unary())
        if self.at("kw", "MIN") or self.at("kw", "MAX"):
            self.advance()
            n = self.cardinality()
            r = self.role()
            filler = self.unary()
            return (AtLeast if tok.text == "MIN" else AtMost)(n, r, filler)
        if self._starts_role_restriction():
            r = self.role()
            if self.at("kw", "SOME"):
                self.advance()
                return Exists(r, self.unary())
            if self.at("kw", "ONLY"):
                self.advance()
                return ForAll(r, self.unary())
            if self.at("kw", "SELF"):
                self.advance()
                return SelfRestriction(r)
            self.fail(["'SOME'", "'ONLY'", "'SELF'"])
        if self.at("kw", "TOP"):
            self.advance()
            return TOP
        if self.at("kw", "BOTTOM"):
            self.advance()
            return BOTTOM
        if self.at("kw", "ONEOF"):
            self.advance()
            self.expect("punct", "{")
            names = [self.ident("individual")]
            while self.at("punct", ","):
                self.advance()
                names.append(self.ident("individual"))
            self.expect("punct", "}")
            return Nominal(frozenset(names))
        if self.at("punct", "("):
            self.advance()
            c = self.concept()
            self.expect("punct", ")")
            return c
        if self.at("ident"):
            return Atomic(self.ident("concept"))
        self.fail(
            ["identifier", "'('", "'NOT'", "'MIN'", "'MAX'", "'TOP'", "'BOTTOM'", "'ONEOF'", "'INV'"]
        )

    # -- statements
    def statement(self):
        kinds = [(t.kind, t.text) for t in self.toks]
        first = self.cur
        if first.kind == "kw" and first.text in ("TRANS", "ASY", "REF", "IRR"):
            self.advance()
            r = self.role()
            self.end()
            cls = {
                "TRANS": TransitiveRole,
                "ASY": AsymmetricRole,
                "REF": ReflexiveRole,
                "IRR": IrreflexiveRole,
            }[first.text]
            return cls(r)
        if first.kind == "kw" and first.text == "DIS":
            self.advance()
            r, s = self.role(), self.role()
            self.end()
            return DisjointRoles(r, s)
        if ("arrow", "<-") in kinds:
            return self.rule()
        if ("kw", "SUBROLE") in kinds:
            chain = self.chain()
            self.expect("kw", "SUBROLE")
            sup = self.role()
            self.end()
            if len(chain) == 1:
                return RoleInclusion(chain[0], sup)
            if len(chain) == 2 and chain[0] == chain[1] == sup:
                # r o r SUBROLE r is how transitivity is written in DL notation
                return TransitiveRole(sup)
            return ComplexRoleInclusion(tuple(chain), sup)
        if ("kw", "EQUIVROLE") in kinds:
            a = self.role()
            self.expect("kw", "EQUIVROLE")
            b = self.role()
            self.end()
            return RoleEquivalence(a, b)
        for kw, cls in (("DOMAIN", Domain), ("RANGE", Range)):
            if ("kw", kw) in kinds:
                r = self.role()
                self.expect("kw", kw)
                c = self.concept()
                self.end()
                return cls(r, c)
        for kw, cls in (("SUBCLASS", ConceptInclusion), ("EQUIV", ConceptEquivalence)):
            if ("kw", kw) in kinds:
                a = self.concept()
                self.expect("kw", kw)
                b = self.concept()
                self.end()
                return cls(a, b)
        second = self.peek()
        if first.kind == "ident":
            if self.at("punct", ":", second):
                ind = self.ident("individual")
                self.advance()
                c = self.concept()
                self.end()
                return ConceptAssertion(c, ind)
            if second.kind == "kw" and second.text in ("SAME", "DIFF"):
                a = self.ident("individual")
                self.advance()
                b = self.ident("individual")
                self.end()
                return (SameIndividual if second.text == "SAME" else DifferentIndividuals)(a, b)
            if second.kind == "kw" and second.text == "NOT":
                a = self.ident("individual")
                self.advance()
                r = self.role()
                b = self.ident("individual")
                self.end()
                return NegatedRoleAssertion(r, a, b)
            if second.kind == "ident" or self.at("kw", "INV", second):
                a = self.ident("individual")
                r = self.role()
                if self.at("string"):
                    b = parse_literal(self.advance().text)
                else:
                    b = self.ident("individual")
                self.end()
                return RoleAssertion(r, a, b)
        self.fail(
            ["concept", "role", "individual", "'TRANS'", "'DIS'", "'ASY'", "'REF'", "'IRR'"],
            f"cannot parse statement starting with {first.describe()}",
        )

    def raw_atom(self):
        tok = self.expect("ident", label="predicate name")
        self.expect("punct", "(")
        terms = [self.term()]
        while self.at("punct", ","):
            self.advance()
            terms.append(self.term())
        self.expect("punct", ")")
        return _RawAtom(tok, tuple(terms))

    def term(self):
        if self.at("punct", "?"):
            self.advance()
            if self.at("kw"):  # keywords are fine as variable names
                return Variable(self.advance().text)
            return Variable(self.expect("ident", label="variable name").text)
        tok = self.expect("ident", label="term")
        return Constant(tok.text)

    def rule(self):
        head = self.raw_atom()
        self.expect("arrow")
        body = []
        if not self.at("eof"):
            body.append(self.raw_atom())
            while self.at("punct", ","):
                self.advance()
                body.append(self.raw_atom())
        self.end()
        return _RawRule(head, tuple(body), self.toks[0])


@dataclass(frozen=True)
class _RawAtom:
    tok: Token
    terms: tuple


@dataclass(frozen=True)
class _RawRule:
    head: _RawAtom
    body: tuple
    tok: Token


class _Reader:
    def __init__(self):
        self.uses = {}

    def use(self, name, kind, tok):
        prev = self.uses.get(name)
        if prev is None:
            self.uses[name] = (kind, tok)
        elif prev[0] != kind:
            raise NameClashError(
                f"name {name!r} is used as {kind} here but as {prev[0]} "
                f"at {prev[1].line}:{prev[1].column}",
                tok.line,
                tok.column,
            )

    def read(self, text):
        statements = []
        for stmt in _split_statements(tokenize(text)):
            statements.append(_StatementParser(stmt, self).statement())
        axioms = [s for s in statements if not isinstance(s, _RawRule)]
        raw_rules = [s for s in statements if isinstance(s, _RawRule)]
        rules = self._classify_rules(raw_rules)
        return KnowledgeBase(tuple(axioms), tuple(rules))

    def _classify_rules(self, raw_rules):
        # A predicate is a DL predicate if the axioms mention it or a proper
        # rule derives it; everything else (and O) is a non-DL predicate.
        dl_names = {n for n, (k, _) in self.uses.items() if k in ("concept", "role")}
        for r in raw_rules:
            if r.body or any(isinstance(t, Variable) for t in r.head.terms):
                dl_names.add(r.head.tok.text)
        arities = {}
        rules = []
        for r in raw_rules:
            atoms = [self._atom(a, dl_names, arities) for a in (r.head,) + r.body]
            try:
                rules.append(DlSafeRule(atoms[0], tuple(atoms[1:])))
            except ValueError as exc:
                raise DLSyntaxError(str(exc), r.tok.line, r.tok.column) from None
        return rules

    def _atom(self, raw, dl_names, arities):
        name, tok = raw.tok.text, raw.tok
        arity = len(raw.terms)
        if arity > 2:
            raise ArityError(f"atom {name} has {arity} arguments; at most 2 allowed", tok.line, tok.column)
        prev = arities.setdefault(name, (arity, tok))
        if prev[0] != arity:
            raise ArityError(
                f"predicate {name} used with {arity} arguments here but {prev[0]} "
                f"at {prev[1].line}:{prev[1].column}",
                tok.line,
                tok.column,
            )
        for t in raw.terms:
            if isinstance(t, Constant):
                self.use(t.name, "individual", tok)
        if name == INDIVIDUAL_PREDICATE:
            if arity != 1:
                raise ArityError(f"{INDIVIDUAL_PREDICATE} takes exactly one argument", tok.line, tok.column)
            return NonDlAtom(name, raw.terms)
        if name in dl_names:
            kind = self.uses.get(name, (None,))[0]
            wanted = "concept" if arity == 1 else "role"
            if kind is not None and kind != wanted:
                raise ArityError(
                    f"{kind} {name} used with {arity} argument(s)", tok.line, tok.column
                )
            self.use(name, wanted, tok)
            if arity == 1:
                return ConceptAtom(name, raw.terms[0])
            return RoleAtom(name, *raw.terms)
        self.use(name, "predicate", tok)
        return NonDlAtom(name, raw.terms)


def parse_dl(text: str) -> KnowledgeBase:
    """Parse DL text into a :class:`KnowledgeBase`.

    Raises :class:`DLSyntaxError` (with line, column and the expected-token
    set), :class:`ArityError` or :class:`NameClashError`.
    """
    return _Reader().read(text)


def parse_concept(text: str) -> "Concept":
    """Parse a single concept expression (no trailing ``.``)."""
    tokens = tokenize(text)
    p = _StatementParser(tokens, _Reader())
    c = p.concept()
    p.end()
    return c


def parse_axiom(text: str):
    kb = parse_dl(text if text.rstrip().endswith(".") else text + " .")
    if len(kb.axioms) != 1 or kb.rules:
        raise DLSyntaxError("expected exactly one axiom")
    return kb.axioms[0]


# --------------------------------------------------------------------------
# Printer

_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def format_role(r) -> str:
    if isinstance(r, Role):
        return r.name
    if isinstance(r, InverseRole):
        return f"INV({r.name})"
    if isinstance(r, UniversalRole):
        return "UNIVERSAL"
    raise TypeError(f"not a role: {r!r}")


def _prec(c):
    if isinstance(c, Or):
        return _PREC_OR
    if isinstance(c, And):
        return _PREC_AND
    return _PREC_UNARY


def _fmt(c, need):
    text = _format(c)
    return f"({text})" if _prec(c) < need else text


def _format(c) -> str:
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Top):
        return "TOP"
    if isinstance(c, Bottom):
        return "BOTTOM"
    if isinstance(c, Not):
        return "NOT " + _fmt(c.operand, _PREC_UNARY)
    if isinstance(c, And):
        return " AND ".join(_fmt(o, _PREC_UNARY) for o in c.operands)
    if isinstance(c, Or):
        return " OR ".join(_fmt(o, _PREC_AND) for o in c.operands)
    if isinstance(c, Exists):
        return f"{format_role(c.role)} SOME {_fmt(c.filler, _PREC_UNARY)}"
    if isinstance(c, ForAll):
        return f"{format_role(c.role)} ONLY {_fmt(c.filler, _PREC_UNARY)}"
    if isinstance(c, AtLeast):
        return f"MIN {c.n} {format_role(c.role)} {_fmt(c.filler, _PREC_UNARY)}"
    if isinstance(c, AtMost):
        return f"MAX {c.n} {format_role(c.role)} {_fmt(c.filler, _PREC_UNARY)}"
    if isinstance(c, SelfRestriction):
        return f"{format_role(c.role)} SELF"
    if isinstance(c, Nominal):
        return "ONEOF{" + ", ".join(sorted(c.individuals)) + "}"
    raise TypeError(f"not a concept: {c!r}")


def format_concept(c) -> str:
    return _format(c)


def format_literal(lit: Literal) -> str:
    body = lit.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    if lit.lang:
        return f'"{body}"@{lit.lang}'
    return f'"{body}"^^{lit.datatype}'


def _fmt_ind(i):
    return format_literal(i) if isinstance(i, Literal) else i


def format_axiom(ax) -> str:
    f, r = format_concept, format_role
    if isinstance(ax, ConceptInclusion):
        return f"{f(ax.sub)} SUBCLASS {f(ax.sup)}."
    if isinstance(ax, ConceptEquivalence):
        return f"{f(ax.a)} EQUIV {f(ax.b)}."
    if isinstance(ax, Domain):
        return f"{r(ax.role)} DOMAIN {f(ax.concept)}."
    if isinstance(ax, Range):
        return f"{r(ax.role)} RANGE {f(ax.concept)}."
    if isinstance(ax, ConceptAssertion):
        return f"{ax.individual} : {f(ax.concept)}."
    if isinstance(ax, RoleAssertion):
        return f"{ax.subject} {r(ax.role)} {_fmt_ind(ax.object)}."
    if isinstance(ax, NegatedRoleAssertion):
        return f"{ax.subject} NOT {r(ax.role)} {ax.object}."
    if isinstance(ax, SameIndividual):
        return f"{ax.a} SAME {ax.b}."
    if isinstance(ax, DifferentIndividuals):
        return f"{ax.a} DIFF {ax.b}."
    if isinstance(ax, RoleInclusion):
        return f"{r(ax.sub)} SUBROLE {r(ax.sup)}."
    if isinstance(ax, RoleEquivalence):
        return f"{r(ax.a)} EQUIVROLE {r(ax.b)}."
    if isinstance(ax, ComplexRoleInclusion):
        return " o ".join(map(r, ax.chain)) + f" SUBROLE {r(ax.sup)}."
    if isinstance(ax, DisjointRoles):
        return f"DIS {r(ax.r)} {r(ax.s)}."
    for cls, kw in (
        (TransitiveRole, "TRANS"),
        (AsymmetricRole, "ASY"),
        (ReflexiveRole, "REF"),
        (IrreflexiveRole, "IRR"),
    ):
        if isinstance(ax, cls):
            return f"{kw} {r(ax.role)}."
    raise TypeError(f"not an axiom: {ax!r}")


def format_atom(atom) -> str:
    return f"{atom.predicate}({', '.join(map(str, atom.terms))})"


def format_rule(rule: DlSafeRule) -> str:
    text = format_atom(rule.head) + " <-"
    if rule.body:
        text += " " + ", ".join(format_atom(a) for a in rule.body)
    return text + "."


def serialize_dl(kb: KnowledgeBase) -> str:
    """Print ``kb`` in DL text syntax; ``parse_dl`` reads it back unchanged."""
    lines = [format_axiom(a) for a in kb.axioms]
    lines += [format_rule(r) for r in kb.rules]
    return "".join(line + "\n" for line in lines)
