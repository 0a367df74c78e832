"""Translation between knowledge bases and a subset of OWL 2 in Turtle.

Names in the knowledge base become prefixed names in the default ``:``
namespace. Complex concepts use the usual OWL 2 blank-node encodings
(``owl:Restriction``, ``owl:intersectionOf`` and friends); role chains and
disjointness member lists use RDF collections.

Reading is done in two passes: the document is parsed into triples, and the
triples are then read back as axioms. Triples outside the supported
vocabulary are reported as diagnostics rather than dropped silently.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedListError, TurtleSyntaxError, UnsupportedConstructError
from .model import (
    BOTTOM,
    TOP,
    And,
    AsymmetricRole,
    AtLeast,
    Atomic,
    AtMost,
    Bottom,
    ComplexRoleInclusion,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    DifferentIndividuals,
    DisjointRoles,
    Domain,
    Exists,
    ForAll,
    InverseRole,
    IrreflexiveRole,
    KnowledgeBase,
    Literal,
    NegatedRoleAssertion,
    Nominal,
    Not,
    Or,
    Range,
    ReflexiveRole,
    Role,
    RoleAssertion,
    RoleEquivalence,
    RoleInclusion,
    SameIndividual,
    SelfRestriction,
    Top,
    TransitiveRole,
    UniversalRole,
    inverse,
)
from .validation import WARNING, Diagnostic

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
DEFAULT_NAMESPACE = "http://example.org/kb#"

STANDARD_PREFIXES = (("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD))


# --------------------------------------------------------------------------
# Emission


_PN_LOCAL = re.compile(r"[\w](?:[\w.-]*[\w-])?\Z")


class _Writer:
    def __init__(self):
        pass

    def name(self, local: str) -> str:
        if _PN_LOCAL.match(local):
            return ":" + local
        return "<" + DEFAULT_NAMESPACE + local + ">"

    def role(self, r, ax) -> str:
        if isinstance(r, Role):
            return self.name(r.name)
        if isinstance(r, InverseRole):
            return f"[ owl:inverseOf {self.name(r.name)} ]"
        raise UnsupportedConstructError(f"the universal role has no Turtle mapping: {ax}")

    def literal(self, lit: Literal) -> str:
        body = (
            lit.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
        )
        if lit.lang:
            return f'"{body}"@{lit.lang}'
        dt = lit.datatype
        if ":" in dt:
            prefix = dt.split(":", 1)[0]
            if prefix not in dict(STANDARD_PREFIXES):
                raise UnsupportedConstructError(f"datatype prefix {prefix!r} is not declared")
            return f'"{body}"^^{dt}'
        return f'"{body}"^^{self.name(dt)}'

    def individual(self, ind) -> str:
        return self.literal(ind) if isinstance(ind, Literal) else self.name(ind)

    def concept(self, c, ax) -> str:
        if isinstance(c, Atomic):
            return self.name(c.name)
        if isinstance(c, Top):
            return "owl:Thing"
        if isinstance(c, Bottom):
            return "owl:Nothing"
        if isinstance(c, Not):
            return f"[ owl:complementOf {self.concept(c.operand, ax)} ]"
        if isinstance(c, And):
            return f"[ owl:intersectionOf {self.collection(c.operands, ax)} ]"
        if isinstance(c, Or):
            return f"[ owl:unionOf {self.collection(c.operands, ax)} ]"
        if isinstance(c, Nominal):
            members = " ".join(self.name(i) for i in sorted(c.individuals))
            return f"[ owl:oneOf ({members}) ]"
        head = f"[ a owl:Restriction ; owl:onProperty {self.role(c.role, ax)} ; "
        if isinstance(c, SelfRestriction):
            return head + "owl:hasSelf true ]"
        if isinstance(c, Exists):
            return head + f"owl:someValuesFrom {self.concept(c.filler, ax)} ]"
        if isinstance(c, ForAll):
            return head + f"owl:allValuesFrom {self.concept(c.filler, ax)} ]"
        if isinstance(c, (AtLeast, AtMost)):
            kind = "min" if isinstance(c, AtLeast) else "max"
            return (
                head
                + f'owl:{kind}QualifiedCardinality "{c.n}"^^xsd:nonNegativeInteger ; '
                + f"owl:onClass {self.concept(c.filler, ax)} ]"
            )
        raise TypeError(f"not a concept: {c!r}")

    def collection(self, items, ax) -> str:
        return "(" + " ".join(self.concept(c, ax) for c in items) + ")"

    def axiom(self, ax) -> str:
        c, r, n = self.concept, self.role, self.name
        if isinstance(ax, ConceptInclusion):
            return f"{c(ax.sub, ax)} rdfs:subClassOf {c(ax.sup, ax)} ."
        if isinstance(ax, ConceptEquivalence):
            return f"{c(ax.a, ax)} owl:equivalentClass {c(ax.b, ax)} ."
        if isinstance(ax, Domain):
            return f"{r(ax.role, ax)} rdfs:domain {c(ax.concept, ax)} ."
        if isinstance(ax, Range):
            return f"{r(ax.role, ax)} rdfs:range {c(ax.concept, ax)} ."
        if isinstance(ax, ConceptAssertion):
            return f"{n(ax.individual)} a {c(ax.concept, ax)} ."
        if isinstance(ax, RoleAssertion):
            if isinstance(ax.role, UniversalRole):
                r(ax.role, ax)
            return f"{n(ax.subject)} {n(ax.role.name)} {self.individual(ax.object)} ."
        if isinstance(ax, NegatedRoleAssertion):
            if isinstance(ax.role, UniversalRole):
                r(ax.role, ax)
            return (
                f"[] a owl:NegativePropertyAssertion ; owl:sourceIndividual {n(ax.subject)} ; "
                f"owl:assertionProperty {n(ax.role.name)} ; owl:targetIndividual {n(ax.object)} ."
            )
        if isinstance(ax, SameIndividual):
            return f"{n(ax.a)} owl:sameAs {n(ax.b)} ."
        if isinstance(ax, DifferentIndividuals):
            return f"{n(ax.a)} owl:differentFrom {n(ax.b)} ."
        if isinstance(ax, RoleInclusion):
            return f"{r(ax.sub, ax)} rdfs:subPropertyOf {r(ax.sup, ax)} ."
        if isinstance(ax, RoleEquivalence):
            if isinstance(ax.a, Role) and isinstance(ax.b, InverseRole):
                return f"{n(ax.a.name)} owl:inverseOf {n(ax.b.name)} ."
            return f"{r(ax.a, ax)} owl:equivalentProperty {r(ax.b, ax)} ."
        if isinstance(ax, ComplexRoleInclusion):
            chain = " ".join(r(x, ax) for x in ax.chain)
            return f"{r(ax.sup, ax)} owl:propertyChainAxiom ({chain}) ."
        if isinstance(ax, DisjointRoles):
            return f"[] a owl:AllDisjointProperties ; owl:members ({r(ax.r, ax)} {r(ax.s, ax)}) ."
        for cls, kind in (
            (TransitiveRole, "Transitive"),
            (AsymmetricRole, "Asymmetric"),
            (ReflexiveRole, "Reflexive"),
            (IrreflexiveRole, "Irreflexive"),
        ):
            if isinstance(ax, cls):
                return f"{r(ax.role, ax)} a owl:{kind}Property ."
        raise UnsupportedConstructError(f"no Turtle mapping for axiom: {ax}")


def prefix_block() -> str:
    lines = [f"@prefix : <{DEFAULT_NAMESPACE}> ."]
    lines += [f"@prefix {p}: <{iri}> ." for p, iri in STANDARD_PREFIXES]
    return "\n".join(lines) + "\n"


def axiom_to_turtle(ax) -> str:
    """The triple group for one axiom, without prefixes."""
    return _Writer().axiom(ax)


def to_turtle(kb: KnowledgeBase) -> str:
    """Serialize the axioms of ``kb`` in input order, one group per line.

    Rules have no Turtle form and are left out.
    """
    w = _Writer()
    body = "".join(w.axiom(ax) + "\n" for ax in kb.axioms)
    return prefix_block() + ("\n" + body if body else "")


# --------------------------------------------------------------------------
# Tokenizer and triple parser


@dataclass(frozen=True)
class IRI:
    value: str


@dataclass(frozen=True)
class BNode:
    id: str


@dataclass(frozen=True)
class Lit:
    lexical: str
    datatype: str  # full IRI
    lang: str | None = None


@dataclass(frozen=True)
class Triple:
    s: object
    p: object
    o: object
    line: int
    column: int


_TTL_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtmark>\^\^)
  | (?P<bnode>_:[\w](?:[\w.-]*[\w-])?)
  | (?P<pname>(?:[^\W\d_](?:[\w.-]*[\w-])?)?:(?:[\w:%-](?:[\w.:%-]*[\w:%-])?)?)
  | (?P<number>[+-]?(?:\d+\.\d+|\d+))
  | (?P<word>[A-Za-z]+)
  | (?P<punct>[\[\](),;.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text):
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TTL_TOKEN.match(text, pos)
        if m is None:
            raise TurtleSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(_Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(body, tok):
    def sub(m):
        s = m.group(1)
        if s[0] in "uU":
            return chr(int(s[1:], 16))
        if s in _ESCAPES:
            return _ESCAPES[s]
        raise TurtleSyntaxError(f"invalid escape \\{s}", tok.line, tok.column)

    return re.sub(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", sub, body)


class _TripleParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes = {}
        self.triples = []
        self.bnodes = 0
        self.labels = {}
        self.positions = {}

    @property
    def cur(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.cur
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise TurtleSyntaxError(f"unexpected {what}", tok.line, tok.column, expected=expected)

    def is_punct(self, p):
        return self.cur.kind == "punct" and self.cur.text == p

    def expect_punct(self, p):
        if not self.is_punct(p):
            self.fail([repr(p)])
        return self.advance()

    def fresh(self, tok):
        self.bnodes += 1
        b = BNode(f"b{self.bnodes}")
        self.positions[b] = (tok.line, tok.column)
        return b

    def parse(self):
        while self.cur.kind != "eof":
            tok = self.cur
            if tok.kind == "lang" and tok.text == "@prefix":
                self.advance()
                self.prefix_decl()
                self.expect_punct(".")
            elif tok.kind == "word" and tok.text.upper() == "PREFIX":
                self.advance()
                self.prefix_decl()
            elif tok.kind in ("lang", "word") and tok.text.lower() in ("@base", "base"):
                raise TurtleSyntaxError("base IRIs are not supported", tok.line, tok.column)
            else:
                self.triples_stmt()
                self.expect_punct(".")
        return self.triples

    def prefix_decl(self):
        tok = self.cur
        if tok.kind != "pname" or not tok.text.endswith(":") or tok.text.count(":") != 1:
            self.fail(["prefix name"])
        self.advance()
        iri = self.cur
        if iri.kind != "iri":
            self.fail(["IRI"])
        self.advance()
        self.prefixes[tok.text[:-1]] = iri.text[1:-1]

    def emit(self, s, p, o, tok):
        self.triples.append(Triple(s, p, o, tok.line, tok.column))

    def triples_stmt(self):
        tok = self.cur
        if self.is_punct("["):
            subj = self.bnode_property_list()
            if self.is_punct("."):
                return
        else:
            subj = self.subject()
        self.predicate_object_list(subj)

    def subject(self):
        tok = self.cur
        if tok.kind in ("iri", "pname"):
            return self.iri()
        if tok.kind == "bnode":
            return self.labelled()
        if self.is_punct("("):
            return self.collection()
        self.fail(["IRI", "blank node", "'['", "'('"])

    def iri(self):
        tok = self.advance()
        if tok.kind == "iri":
            return IRI(tok.text[1:-1])
        prefix, local = tok.text.split(":", 1)
        if prefix not in self.prefixes:
            raise TurtleSyntaxError(f"undeclared prefix {prefix + ':'!r}", tok.line, tok.column)
        local = re.sub(r"\\(.)", r"\1", local)
        return IRI(self.prefixes[prefix] + local)

    def labelled(self):
        tok = self.advance()
        b = self.labels.get(tok.text)
        if b is None:
            b = self.fresh(tok)
            self.labels[tok.text] = b
        return b

    def predicate_object_list(self, subj):
        while True:
            tok = self.cur
            if tok.kind == "word" and tok.text == "a":
                self.advance()
                pred = IRI(RDF + "type")
            elif tok.kind in ("iri", "pname"):
                pred = self.iri()
            else:
                self.fail(["predicate", "'a'"])
            while True:
                obj = self.object()
                self.emit(subj, pred, obj, tok)
                if not self.is_punct(","):
                    break
                self.advance()
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.advance()
            if self.is_punct(".") or self.is_punct("]"):
                return

    def object(self):
        tok = self.cur
        if tok.kind in ("iri", "pname"):
            return self.iri()
        if tok.kind == "bnode":
            return self.labelled()
        if self.is_punct("["):
            return self.bnode_property_list()
        if self.is_punct("("):
            return self.collection()
        if tok.kind == "string":
            return self.literal()
        if tok.kind == "number":
            self.advance()
            dt = "decimal" if "." in tok.text else "integer"
            return Lit(tok.text, XSD + dt)
        if tok.kind == "word" and tok.text in ("true", "false"):
            self.advance()
            return Lit(tok.text, XSD + "boolean")
        self.fail(["IRI", "blank node", "literal", "'['", "'('"])

    def literal(self):
        tok = self.advance()
        lexical = _unescape(tok.text[1:-1], tok)
        if self.cur.kind == "lang":
            lang = self.advance().text[1:]
            return Lit(lexical, RDF + "langString", lang)
        if self.cur.kind == "dtmark":
            self.advance()
            if self.cur.kind not in ("iri", "pname"):
                self.fail(["datatype IRI"])
            return Lit(lexical, self.iri().value)
        return Lit(lexical, XSD + "string")

    def bnode_property_list(self):
        open_tok = self.expect_punct("[")
        b = self.fresh(open_tok)
        if not self.is_punct("]"):
            self.predicate_object_list(b)
        self.expect_punct("]")
        return b

    def collection(self):
        open_tok = self.expect_punct("(")
        items = []
        while not self.is_punct(")"):
            if self.cur.kind == "eof":
                self.fail(["')'"])
            items.append(self.object())
        self.advance()
        if not items:
            return IRI(RDF + "nil")
        nodes = [self.fresh(open_tok) for _ in items]
        for k, (node, item) in enumerate(zip(nodes, items)):
            self.emit(node, IRI(RDF + "first"), item, open_tok)
            rest = nodes[k + 1] if k + 1 < len(nodes) else IRI(RDF + "nil")
            self.emit(node, IRI(RDF + "rest"), rest, open_tok)
        return nodes[0]


def parse_triples(text: str):
    """Parse a Turtle document into ``(triples, prefixes)``."""
    p = _TripleParser(text)
    triples = p.parse()
    return triples, dict(p.prefixes)


# --------------------------------------------------------------------------
# Triples to axioms


def _v(ns, local):
    return IRI(ns + local)


TYPE = _v(RDF, "type")
FIRST, REST, NIL = _v(RDF, "first"), _v(RDF, "rest"), _v(RDF, "nil")

_STRUCTURAL = {
    _v(OWL, n)
    for n in (
        "onProperty someValuesFrom allValuesFrom minQualifiedCardinality maxQualifiedCardinality "
        "onClass hasSelf intersectionOf unionOf complementOf oneOf members sourceIndividual "
        "assertionProperty targetIndividual targetValue"
    ).split()
} | {FIRST, REST}

_ROLE_TYPES = {
    _v(OWL, "TransitiveProperty"): TransitiveRole,
    _v(OWL, "AsymmetricProperty"): AsymmetricRole,
    _v(OWL, "ReflexiveProperty"): ReflexiveRole,
    _v(OWL, "IrreflexiveProperty"): IrreflexiveRole,
}

_DECLARATIONS = {
    _v(OWL, n) for n in ("Class", "ObjectProperty", "NamedIndividual", "DatatypeProperty", "Ontology")
} | {_v(RDFS, "Class"), _v(RDF, "Property")}

_VOCAB_NAMESPACES = (RDF, RDFS, OWL, XSD)


class _Reader:
    def __init__(self, triples, positions):
        self.triples = triples
        self.positions = positions
        self.by_subject = {}
        for t in triples:
            self.by_subject.setdefault(t.s, []).append(t)
        self.axioms = []
        self.diagnostics = []

    def warn(self, code, message, t=None):
        line, col = (t.line, t.column) if t is not None else (None, None)
        self.diagnostics.append(Diagnostic(WARNING, code, message, line, col))

    def where(self, term):
        pos = self.positions.get(term)
        if pos is None:
            ts = self.by_subject.get(term)
            pos = (ts[0].line, ts[0].column) if ts else (None, None)
        return pos

    def props(self, node, pred):
        return [t.o for t in self.by_subject.get(node, ()) if t.p == pred]

    def one(self, node, pred, required=True):
        vals = self.props(node, pred)
        if len(vals) > 1 or (required and not vals):
            line, col = self.where(node)
            short = pred.value.rsplit("#", 1)[-1]
            raise UnsupportedConstructError(
                f"{line}:{col}: expected exactly one {short} on blank node"
            )
        return vals[0] if vals else None

    # -- terms
    def local(self, iri: IRI) -> str:
        value = iri.value
        for sep in ("#", "/"):
            if sep in value:
                return value.rsplit(sep, 1)[1]
        return value.rsplit(":", 1)[-1]

    def name(self, term, what):
        if isinstance(term, IRI):
            if any(term.value.startswith(ns) for ns in _VOCAB_NAMESPACES):
                line, col = self.where(term)
                raise UnsupportedConstructError(f"vocabulary term {term.value} used as {what} name")
            return self.local(term)
        line, col = self.where(term)
        raise UnsupportedConstructError(f"{line}:{col}: a {what} must be named, found {term}")

    def individual(self, term):
        if isinstance(term, Lit):
            return self.literal(term)
        return self.name(term, "individual")

    def literal(self, lit: Lit) -> Literal:
        if lit.lang is not None:
            return Literal(lit.lexical, "rdf:langString", lit.lang)
        for prefix, ns in STANDARD_PREFIXES:
            if lit.datatype.startswith(ns):
                return Literal(lit.lexical, prefix + ":" + lit.datatype[len(ns):])
        return Literal(lit.lexical, self.local(IRI(lit.datatype)))

    def items(self, node):
        out = []
        seen = set()
        start = node
        while node != NIL:
            if not isinstance(node, BNode) or node in seen:
                line, col = self.where(start)
                raise MalformedListError("malformed RDF list", line, col)
            seen.add(node)
            firsts = self.props(node, FIRST)
            rests = self.props(node, REST)
            if len(firsts) != 1 or len(rests) != 1:
                line, col = self.where(node)
                raise MalformedListError(
                    "malformed RDF list: each cell needs one rdf:first and one rdf:rest", line, col
                )
            out.append(firsts[0])
            node = rests[0]
        return out

    def role(self, term):
        if isinstance(term, BNode):
            inv = self.props(term, _v(OWL, "inverseOf"))
            if len(inv) == 1:
                return inverse(self.role(inv[0]))
            line, col = self.where(term)
            raise UnsupportedConstructError(f"{line}:{col}: unsupported property expression")
        return Role(self.name(term, "role"))

    def concept(self, term):
        if term == _v(OWL, "Thing"):
            return TOP
        if term == _v(OWL, "Nothing"):
            return BOTTOM
        if not isinstance(term, BNode):
            return Atomic(self.name(term, "concept"))
        owl = lambda n: _v(OWL, n)  # noqa: E731
        for pred, cls in ((owl("intersectionOf"), And), (owl("unionOf"), Or)):
            lst = self.one(term, pred, required=False)
            if lst is not None:
                ops = [self.concept(x) for x in self.items(lst)]
                if len(set(ops)) < 2:
                    return ops[0] if ops else (TOP if cls is And else BOTTOM)
                return cls(tuple(ops))
        comp = self.one(term, owl("complementOf"), required=False)
        if comp is not None:
            return Not(self.concept(comp))
        one_of = self.one(term, owl("oneOf"), required=False)
        if one_of is not None:
            return Nominal(frozenset(self.individual(x) for x in self.items(one_of)))
        prop = self.one(term, owl("onProperty"), required=False)
        if prop is None:
            line, col = self.where(term)
            raise UnsupportedConstructError(f"{line}:{col}: unsupported class expression")
        role = self.role(prop)
        some = self.one(term, owl("someValuesFrom"), required=False)
        if some is not None:
            return Exists(role, self.concept(some))
        only = self.one(term, owl("allValuesFrom"), required=False)
        if only is not None:
            return ForAll(role, self.concept(only))
        if self.one(term, owl("hasSelf"), required=False) is not None:
            return SelfRestriction(role)
        for kind, cls in (("min", AtLeast), ("max", AtMost)):
            n = self.one(term, owl(f"{kind}QualifiedCardinality"), required=False)
            if n is not None:
                on = self.one(term, owl("onClass"), required=False)
                filler = TOP if on is None else self.concept(on)
                if not isinstance(n, Lit) or not n.lexical.isdigit():
                    line, col = self.where(term)
                    raise UnsupportedConstructError(f"{line}:{col}: cardinality must be a non-negative integer")
                return cls(int(n.lexical), role, filler)
        line, col = self.where(term)
        raise UnsupportedConstructError(f"{line}:{col}: unsupported restriction")

    # -- statements
    def read(self):
        for t in self.triples:
            self.statement(t)
        return self.axioms

    def statement(self, t):
        s, p, o = t.s, t.p, t.o
        add = self.axioms.append
        if p in _STRUCTURAL or (p == _v(OWL, "inverseOf") and isinstance(s, BNode)):
            if not isinstance(s, BNode):
                self.warn("misplaced-vocabulary", f"{p.value} on a named subject is ignored", t)
            return
        if p == TYPE:
            if o in _ROLE_TYPES:
                add(_ROLE_TYPES[o](self.role(s)))
            elif o == _v(OWL, "AllDisjointProperties"):
                members = [self.role(x) for x in self.items(self.one(s, _v(OWL, "members")))]
                for i, a in enumerate(members):
                    for b in members[i + 1:]:
                        add(DisjointRoles(a, b))
            elif o == _v(OWL, "NegativePropertyAssertion"):
                add(
                    NegatedRoleAssertion(
                        self.role(self.one(s, _v(OWL, "assertionProperty"))),
                        self.individual(self.one(s, _v(OWL, "sourceIndividual"))),
                        self.individual(self.one(s, _v(OWL, "targetIndividual"))),
                    )
                )
            elif o == _v(OWL, "Restriction") and isinstance(s, BNode):
                return
            elif o == _v(OWL, "SymmetricProperty"):
                self.warn("unsupported-vocabulary", "owl:SymmetricProperty is not supported; triple ignored", t)
            elif o in _DECLARATIONS:
                if not (isinstance(s, BNode) and o == _v(OWL, "Class")):
                    self.warn("declaration", f"declaration {o.value} carries no axiom; ignored", t)
            elif isinstance(o, IRI) and any(o.value.startswith(ns) for ns in _VOCAB_NAMESPACES) and o not in (
                _v(OWL, "Thing"),
                _v(OWL, "Nothing"),
            ):
                self.warn("unsupported-vocabulary", f"unsupported type {o.value}; triple ignored", t)
            else:
                add(ConceptAssertion(self.concept(o), self.individual(s)))
            return
        simple = {
            _v(RDFS, "subClassOf"): lambda: ConceptInclusion(self.concept(s), self.concept(o)),
            _v(OWL, "equivalentClass"): lambda: ConceptEquivalence(self.concept(s), self.concept(o)),
            _v(RDFS, "subPropertyOf"): lambda: RoleInclusion(self.role(s), self.role(o)),
            _v(OWL, "equivalentProperty"): lambda: RoleEquivalence(self.role(s), self.role(o)),
            _v(OWL, "inverseOf"): lambda: RoleEquivalence(self.role(s), inverse(self.role(o))),
            _v(RDFS, "domain"): lambda: Domain(self.role(s), self.concept(o)),
            _v(RDFS, "range"): lambda: Range(self.role(s), self.concept(o)),
            _v(OWL, "sameAs"): lambda: SameIndividual(self.individual(s), self.individual(o)),
            _v(OWL, "sameIndividualAs"): lambda: SameIndividual(self.individual(s), self.individual(o)),
            _v(OWL, "differentFrom"): lambda: DifferentIndividuals(self.individual(s), self.individual(o)),
            _v(OWL, "propertyDisjointWith"): lambda: DisjointRoles(self.role(s), self.role(o)),
            _v(OWL, "propertyChainAxiom"): lambda: self.chain(s, o),
        }
        if p in simple:
            add(simple[p]())
            return
        if any(p.value.startswith(ns) for ns in _VOCAB_NAMESPACES):
            self.warn("unsupported-vocabulary", f"unsupported predicate {p.value}; triple ignored", t)
            return
        if isinstance(s, BNode):
            self.warn("anonymous-individual", "assertions about blank nodes are not supported; triple ignored", t)
            return
        add(RoleAssertion(Role(self.local(p)), self.individual(s), self.individual(o)))

    def chain(self, s, o):
        roles = tuple(self.role(x) for x in self.items(o))
        if len(roles) < 2:
            line, col = self.where(o) if isinstance(o, BNode) else (None, None)
            raise MalformedListError("a property chain needs at least two roles", line, col)
        return ComplexRoleInclusion(roles, self.role(s))


def read_turtle(text: str):
    """Parse Turtle text into ``(KnowledgeBase, diagnostics)``."""
    p = _TripleParser(text)
    triples = p.parse()
    reader = _Reader(triples, p.positions)
    axioms = reader.read()
    return KnowledgeBase(tuple(axioms)), reader.diagnostics


def from_turtle(text: str) -> KnowledgeBase:
    return read_turtle(text)[0]
