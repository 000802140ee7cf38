"""Parse terminologies, signatures, and ABoxes; render concepts and reports.

The terminology grammar is a KRSS-style s-expression dialect::

    form    ::= "(define-concept" NAME concept ")"
              | "(define-primitive-concept" NAME concept ")"
              | "(define-primitive-role" NAME [":parent" NAME] ")"
              | "(range" NAME concept ")"
              | "(domain" NAME concept ")"
    concept ::= "top" | NAME | "(and" concept+ ")" | "(some" NAME concept ")"

Comments run from ';' to end of line.  Names match [A-Za-z0-9_.:-]+ and must
not start with '@' (reserved for generated names).  Concept rendering extends
the grammar with ``(ran r)``, ``(some-all (r1 .. rk) C)`` and ``(some-u C)``
for the richer concept families; the concept parser accepts those forms too.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .model import (
    ABox, Atom, Axiom, Concept, ConceptAssert, Conj, DomainRestr, EqAtom,
    Exists, ExistsRoles, ExistsUniversal, ModelError, Ran, RangeRestr,
    RoleAssert, RoleIncl, Signature, SubAtom, Terminology, Top, TOP,
    conj, exists_roles,
)

_NAME_RE = re.compile(r"[A-Za-z0-9_.:-]+")


@dataclass(frozen=True)
class SourceLocation:
    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, location: SourceLocation):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass(frozen=True)
class _Token:
    kind: str  # 'open' | 'close' | 'name' | 'keyword'
    text: str
    location: SourceLocation


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "(":
            yield _Token("open", "(", SourceLocation(line, col))
            col += 1
            i += 1
        elif c == ")":
            yield _Token("close", ")", SourceLocation(line, col))
            col += 1
            i += 1
        elif c == ":":
            loc = SourceLocation(line, col)
            m = _NAME_RE.match(text, i + 1)
            if not m:
                raise ParseError("bare ':'", loc)
            word = m.group(0)
            yield _Token("keyword", ":" + word, loc)
            col += 1 + len(word)
            i = m.end()
        else:
            loc = SourceLocation(line, col)
            m = _NAME_RE.match(text, i)
            if not m or c == "@":
                raise ParseError(f"unexpected character {c!r}", loc)
            word = m.group(0)
            yield _Token("name", word, loc)
            col += len(word)
            i = m.end()


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> _Token:
        if self.at_end():
            last = self.tokens[-1].location if self.tokens else SourceLocation(1, 1)
            raise ParseError("unexpected end of input", last)
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text!r}", tok.location)
        return tok

    def name(self) -> _Token:
        tok = self.expect("name")
        if tok.text == "top" or tok.text.startswith("@"):
            raise ParseError(f"{tok.text!r} is not a legal name here", tok.location)
        return tok

    def concept(self) -> Concept:
        tok = self.next()
        if tok.kind == "name":
            if tok.text == "top":
                return TOP
            return Atom(tok.text)
        if tok.kind != "open":
            raise ParseError(f"expected a concept, found {tok.text!r}", tok.location)
        head = self.expect("name")
        if head.text == "and":
            parts = [self.concept()]
            while self.peek().kind != "close":
                parts.append(self.concept())
            self.expect("close")
            return conj(parts)
        if head.text == "some":
            role = self.name()
            filler = self.concept()
            self.expect("close")
            return Exists(role.text, filler)
        if head.text == "ran":
            role = self.name()
            self.expect("close")
            return Ran(role.text)
        if head.text == "some-all":
            self.expect("open")
            roles = [self.name().text]
            while self.peek().kind != "close":
                roles.append(self.name().text)
            self.expect("close")
            filler = self.concept()
            self.expect("close")
            return exists_roles(roles, filler)
        if head.text == "some-u":
            filler = self.concept()
            self.expect("close")
            return ExistsUniversal(filler)
        raise ParseError(f"unknown concept form {head.text!r}", head.location)


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    if not p.at_end():
        raise ParseError("trailing input after concept", p.peek().location)
    return c


def parse_terminology(text: str) -> Terminology:
    p = _Parser(text)
    axioms: list[Axiom] = []
    seen_lhs: dict[str, SourceLocation] = {}
    while not p.at_end():
        p.expect("open")
        head = p.expect("name")
        form = head.text
        if form in ("define-concept", "define-primitive-concept"):
            lhs = p.name()
            if lhs.text in seen_lhs:
                raise ParseError(f"concept name defined twice: {lhs.text}", lhs.location)
            seen_lhs[lhs.text] = lhs.location
            rhs = p.concept()
            p.expect("close")
            cls = EqAtom if form == "define-concept" else SubAtom
            try:
                axioms.append(cls(lhs.text, rhs))
                Terminology([axioms[-1]])
            except ModelError as e:
                raise ParseError(str(e), head.location) from None
        elif form == "define-primitive-role":
            sub = p.name()
            if p.peek().kind == "keyword":
                kw = p.next()
                if kw.text != ":parent":
                    raise ParseError(f"unknown keyword {kw.text!r}", kw.location)
                sup = p.name()
                axioms.append(RoleIncl(sub.text, sup.text))
            p.expect("close")
        elif form in ("range", "domain"):
            role = p.name()
            rhs = p.concept()
            p.expect("close")
            cls = RangeRestr if form == "range" else DomainRestr
            try:
                axioms.append(cls(role.text, rhs))
                Terminology([axioms[-1]])
            except ModelError as e:
                raise ParseError(str(e), head.location) from None
        else:
            raise ParseError(f"unknown form {form!r}", head.location)
    return Terminology(axioms)


def parse_signature(text: str) -> Signature:
    concepts: set = set()
    roles: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("concept", "role"):
            raise ParseError("expected 'concept NAME' or 'role NAME'",
                             SourceLocation(lineno, 1))
        kind, name = parts
        if not _NAME_RE.fullmatch(name) or name.startswith("@") or name == "top":
            raise ParseError(f"illegal name {name!r}", SourceLocation(lineno, len(kind) + 2))
        (concepts if kind == "concept" else roles).add(name)
    clash = concepts & roles
    if clash:
        raise ParseError(f"name used both as concept and role: {sorted(clash)[0]}",
                         SourceLocation(1, 1))
    return Signature(frozenset(concepts), frozenset(roles))


def parse_abox(text: str) -> ABox:
    p = _Parser(text)
    assertions: list = []
    while not p.at_end():
        p.expect("open")
        head = p.expect("name")
        if head.text == "instance":
            indiv = p.name()
            tok = p.next()
            if tok.kind != "name":
                raise ParseError("expected a concept name or top", tok.location)
            name = None if tok.text == "top" else tok.text
            assertions.append(ConceptAssert(name, indiv.text))
        elif head.text == "related":
            subj = p.name()
            obj = p.name()
            role = p.name()
            assertions.append(RoleAssert(role.text, subj.text, obj.text))
        else:
            raise ParseError(f"unknown assertion form {head.text!r}", head.location)
        p.expect("close")
    try:
        return ABox(assertions)
    except ModelError as e:
        raise ParseError(str(e), SourceLocation(1, 1)) from None


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_concept(c: Concept) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Ran):
        return f"(ran {c.role})"
    if isinstance(c, Exists):
        return f"(some {c.role} {render_concept(c.filler)})"
    if isinstance(c, ExistsRoles):
        return f"(some-all ({' '.join(c.roles)}) {render_concept(c.filler)})"
    if isinstance(c, ExistsUniversal):
        return f"(some-u {render_concept(c.filler)})"
    return "(and " + " ".join(render_concept(p) for p in c.parts) + ")"


def render_axiom(ax: Axiom) -> str:
    if isinstance(ax, EqAtom):
        return f"(define-concept {ax.lhs} {render_concept(ax.rhs)})"
    if isinstance(ax, SubAtom):
        return f"(define-primitive-concept {ax.lhs} {render_concept(ax.rhs)})"
    if isinstance(ax, RangeRestr):
        return f"(range {ax.role} {render_concept(ax.rhs)})"
    if isinstance(ax, DomainRestr):
        return f"(domain {ax.role} {render_concept(ax.rhs)})"
    return f"(define-primitive-role {ax.sub} :parent {ax.sup})"


def render_terminology(t: Terminology) -> str:
    return "\n".join(render_axiom(ax) for ax in t.axioms) + ("\n" if t.axioms else "")


def render_signature(sig: Signature) -> str:
    lines = [f"concept {n}" for n in sorted(sig.concept_names)]
    lines += [f"role {r}" for r in sorted(sig.role_names)]
    return "\n".join(lines) + ("\n" if lines else "")


def render_report(report, fmt: str = "text") -> str:
    """Render a witness report; fmt is ``text`` or ``tsv``.

    The tsv form emits one record per witness: direction, mode, category,
    name(s), example.  When an example was requested but exceeded the size
    cap, the example field carries the marker ``!overflow``.
    """
    if fmt == "tsv":
        return _render_tsv(report)
    if fmt == "text":
        return _render_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


_CATEGORIES = ("role", "rhs", "lhs-atomic", "lhs-dom", "lhs-ran")


def _records(report):
    for direction in report.directions():
        for mode in report.modes:
            ms = report.sets(direction, mode)
            for r, s in sorted(ms.role_wtn):
                yield direction, mode, "role", f"{r} {s}", ms.example_text(("role", r, s))
            for a in sorted(ms.rhs_wtn):
                yield direction, mode, "rhs", a, ms.example_text(("rhs", a))
            for a in sorted(ms.lhs_atomic):
                yield direction, mode, "lhs-atomic", a, ms.example_text(("lhs-atomic", a))
            for r in sorted(ms.lhs_dom):
                yield direction, mode, "lhs-dom", r, ms.example_text(("lhs-dom", r))
            for r in sorted(ms.lhs_ran):
                yield direction, mode, "lhs-ran", r, ms.example_text(("lhs-ran", r))


def _render_tsv(report) -> str:
    lines = ["\t".join(("direction", "mode", "category", "name", "example"))]
    for rec in _records(report):
        lines.append("\t".join(rec))
    return "\n".join(lines) + "\n"


def _render_text(report) -> str:
    out: list[str] = []
    for direction in report.directions():
        out.append(f"== direction {direction} ==")
        any_here = False
        for mode in report.modes:
            ms = report.sets(direction, mode)
            if ms.empty():
                continue
            any_here = True
            out.append(f"  mode {mode}:")
            for d, m, cat, name, ex in _records(report):
                if d != direction or m != mode:
                    continue
                line = f"    {cat}: {name}"
                if ex:
                    line += f"    {ex}"
                out.append(line)
        if not any_here:
            out.append("  no difference")
    return "\n".join(out) + "\n"
