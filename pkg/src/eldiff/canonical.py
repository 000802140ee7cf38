"""Canonical models of knowledge bases and their concept evaluation.

A knowledge base pairs a terminology with an ABox.  Its canonical model has
one element per ABox individual plus range-and-filler elements ``Aux(r, D)``
standing for an anonymous element in the range of r that satisfies D; the
canonical model keeps exactly the aux elements reachable from the named
ones through generated successors.  ``build_generating`` instead
materializes the full aux grid (every role paired with every subconcept of
the terminology), which is quadratic and meant for inspection and tests.

Membership and instance queries over the canonical model decide entailment,
which is what ``reasoner.entails_subsumption`` builds on, together with the
concept-to-ABox translation and its inverse neighbourhood extraction here.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .model import (
    ABox, Atom, Concept, Conj, ConceptAssert, DomainRestr, EqAtom, Exists,
    ExistsRoles, ExistsUniversal, ModelError, Ran, RangeRestr, RoleAssert,
    SubAtom, Terminology, Top, TOP, canonicalize, conj, conjuncts,
    is_ran_concept, is_roleconj_u_concept, signature_of, sort_key,
    subconcepts,
)
from .normalize import NormalizedTerminology
from .reasoner import FamilyError, Saturation, SubsumptionIndex, classify


class UnknownIndividualError(ModelError):
    pass


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class Aux:
    role: str
    filler: Concept


@dataclass(frozen=True)
class KnowledgeBase:
    terminology: object  # Terminology | NormalizedTerminology
    abox: ABox

    def plain_terminology(self) -> Terminology:
        t = self.terminology
        return t.terminology if isinstance(t, NormalizedTerminology) else t


class Interpretation:
    """A finite interpretation with precomputed adjacency."""

    def __init__(self, domain: Iterable, type_map: dict, edges: Iterable,
                 individual_map: Optional[dict] = None):
        self.domain = frozenset(domain)
        self.types = {d: frozenset(type_map.get(d, ())) for d in self.domain}
        self.individual_map = dict(individual_map or {})
        concept_ext: dict[str, set] = {}
        for d, names in self.types.items():
            for n in names:
                concept_ext.setdefault(n, set()).add(d)
        self.concept_ext = {n: frozenset(s) for n, s in concept_ext.items()}
        out: dict[object, dict] = {d: {} for d in self.domain}
        role_ext: dict[str, set] = {}
        for d, e, labels in edges:
            labels = frozenset(labels)
            out[d][e] = out[d].get(e, frozenset()) | labels
            for r in labels:
                role_ext.setdefault(r, set()).add((d, e))
        self.out = out
        self.role_ext = {r: frozenset(s) for r, s in role_ext.items()}

    def successors(self, d, role: str):
        return [e for e, labels in self.out[d].items() if role in labels]

    def __len__(self) -> int:
        return len(self.domain)


def _aux_element(ctx) -> Aux:
    if ctx[0] == "ran":
        return Aux(ctx[1], TOP)
    return Aux(ctx[1], ctx[2])


def _individual_contexts(idx: SubsumptionIndex, abox: ABox) -> dict:
    sat = idx.saturation
    probe = ("ind", abox, next(iter(abox.obj)))
    if probe in sat.S:
        return {a: ("ind", abox, a) for a in abox.obj}
    return sat.add_individuals(abox, abox)


def build_canonical(kb: KnowledgeBase, idx: Optional[SubsumptionIndex] = None) -> Interpretation:
    """The reachable canonical model of a knowledge base."""
    idx = idx or classify(kb.plain_terminology())
    sat = idx.saturation
    ctxs = _individual_contexts(idx, kb.abox)

    elements: dict[tuple, object] = {}
    edges: list = []
    seen: set = set()
    stack = []
    for a, ctx in ctxs.items():
        elements[ctx] = Named(a)
        seen.add(ctx)
        stack.append(ctx)
    while stack:
        ctx = stack.pop()
        for role, child in sat.succ[ctx]:
            if child not in seen:
                seen.add(child)
                elements[child] = _aux_element(child)
                stack.append(child)
            labels = sat.supers.get(role, frozenset((role,)))
            edges.append((elements[ctx], elements[child], labels))

    type_map = {el: sat.names_of(ctx) for ctx, el in elements.items()}
    individual_map = {a: elements[ctx] for a, ctx in ctxs.items()}
    return Interpretation(elements.values(), type_map, edges, individual_map)


def terminology_subconcepts(t: Terminology) -> frozenset:
    """Subconcepts of the concepts used in the terminology's axioms."""
    subs: set = set()
    for ax in t.axioms:
        if isinstance(ax, (SubAtom, EqAtom)):
            subs.add(Atom(ax.lhs))
            subs.update(subconcepts(ax.rhs))
        elif isinstance(ax, (RangeRestr, DomainRestr)):
            subs.update(subconcepts(ax.rhs))
            if isinstance(ax, DomainRestr):
                subs.add(Exists(ax.role, TOP))
                subs.add(TOP)
    return frozenset(subs)


def build_generating(kb: KnowledgeBase, idx: Optional[SubsumptionIndex] = None) -> Interpretation:
    """The full generating interpretation, aux grid included."""
    idx = idx or classify(kb.plain_terminology())
    sat = idx.saturation
    t = kb.plain_terminology()
    ctxs = _individual_contexts(idx, kb.abox)
    roles = sorted(sat.supers)
    subs = sorted(terminology_subconcepts(t), key=sort_key)

    grid: dict[tuple, Aux] = {}
    for r in roles:
        for d in subs:
            ctx = sat.ensure(sat.child_ctx(r, canonicalize(d)))
            grid.setdefault(ctx, Aux(r, canonicalize(d)))

    elements: dict[tuple, object] = {ctx: Named(a) for a, ctx in ctxs.items()}
    elements.update(grid)

    edges: list = []
    for ra in kb.abox.role_assertions():
        labels = sat.supers.get(ra.role, frozenset((ra.role,)))
        edges.append((Named(ra.subj), Named(ra.obj), labels))
    for a, ctx in ctxs.items():
        for gctx, el in grid.items():
            s, d = el.role, el.filler
            if sat.satisfies(ctx, Exists(s, d)):
                edges.append((Named(a), el, sat.supers.get(s, frozenset((s,)))))
    for gctx1, el1 in grid.items():
        for gctx2, el2 in grid.items():
            s2, d2 = el2.role, el2.filler
            if sat.satisfies(gctx1, Exists(s2, d2)):
                edges.append((el1, el2, sat.supers.get(s2, frozenset((s2,)))))

    type_map = {el: sat.names_of(ctx) for ctx, el in elements.items()}
    individual_map = {a: elements[ctx] for a, ctx in ctxs.items()}
    return Interpretation(elements.values(), type_map, edges, individual_map)


def eval_concept(i: Interpretation, c: Concept) -> frozenset:
    """The extension of a concept of any family on an interpretation."""
    if isinstance(c, Top):
        return i.domain
    if isinstance(c, Atom):
        return i.concept_ext.get(c.name, frozenset())
    if isinstance(c, Conj):
        result = i.domain
        for p in c.parts:
            result &= eval_concept(i, p)
        return result
    if isinstance(c, Exists):
        filler = eval_concept(i, c.filler)
        pairs = i.role_ext.get(c.role, frozenset())
        return frozenset(d for d, e in pairs if e in filler)
    if isinstance(c, Ran):
        return frozenset(e for _, e in i.role_ext.get(c.role, frozenset()))
    if isinstance(c, ExistsRoles):
        filler = eval_concept(i, c.filler)
        result = set()
        for d in i.domain:
            for e, labels in i.out[d].items():
                if e in filler and set(c.roles) <= labels:
                    result.add(d)
                    break
        return frozenset(result)
    if isinstance(c, ExistsUniversal):
        return i.domain if eval_concept(i, c.filler) else frozenset()
    raise ModelError(f"cannot evaluate {c!r}")


@lru_cache(maxsize=4096)
def _canonical_cached(t: Terminology, abox: ABox) -> Interpretation:
    return build_canonical(KnowledgeBase(t, abox), classify(t))


def canonical_model(kb: KnowledgeBase) -> Interpretation:
    return _canonical_cached(kb.plain_terminology(), kb.abox)


def instance_check(kb: KnowledgeBase, idx: Optional[SubsumptionIndex],
                   c: Concept, a: str) -> bool:
    """Certain membership of an individual in a query-family concept."""
    if a not in kb.abox.obj:
        raise UnknownIndividualError(f"unknown individual {a!r}")
    c = canonicalize(c)
    if not (is_roleconj_u_concept(c) or isinstance(c, Ran)):
        raise FamilyError(f"not an instance-checkable concept: {c!r}")
    model = canonical_model(kb)
    return model.individual_map[a] in eval_concept(model, c)


# ---------------------------------------------------------------------------
# Concept <-> ABox translations
# ---------------------------------------------------------------------------

A_RAN = "nran"


def concept_to_abox(c: Concept) -> tuple:
    """The tree ABox of a range-family concept, with its root individual.

    One individual per occurrence path; no structure sharing; range
    conjuncts become incoming edges from a shared source individual.
    """
    c = canonicalize(c)
    if not is_ran_concept(c):
        raise FamilyError(f"not a range-family concept: {c!r}")
    assertions: list = []
    counter = [0]

    def walk(node: Concept, indiv: str) -> None:
        parts = conjuncts(node)
        if isinstance(node, Top) or not parts:
            assertions.append(ConceptAssert(None, indiv))
            return
        for p in parts:
            if isinstance(p, Atom):
                assertions.append(ConceptAssert(p.name, indiv))
            elif isinstance(p, Ran):
                assertions.append(RoleAssert(p.role, A_RAN, indiv))
            elif isinstance(p, Exists):
                counter[0] += 1
                child = f"n{counter[0]}"
                assertions.append(RoleAssert(p.role, indiv, child))
                walk(p.filler, child)
            else:
                raise FamilyError(f"not a range-family concept: {c!r}")

    root = "n0"
    walk(c, root)
    return ABox(assertions), root


def abox_neighborhood_concept(abox: ABox, a: str, n: int) -> Concept:
    """The depth-bounded most specific range concept of an individual."""
    if a not in abox.obj:
        raise UnknownIndividualError(f"unknown individual {a!r}")
    incoming: dict[str, list] = {}
    outgoing: dict[str, list] = {}
    for ra in abox.role_assertions():
        incoming.setdefault(ra.obj, []).append(ra.role)
        outgoing.setdefault(ra.subj, []).append((ra.role, ra.obj))

    def build(b: str, depth: int) -> Concept:
        parts: list = [Atom(name) for name in abox.concept_assertions(b)]
        parts += [Ran(r) for r in incoming.get(b, ())]
        if depth > 0:
            parts += [Exists(r, build(target, depth - 1))
                      for r, target in outgoing.get(b, ())]
        return conj(parts)

    return build(a, n)


def most_specific_entailment_bound(model: Interpretation, c: Concept) -> int:
    """Search bound for the neighbourhood-concept entailment loop."""
    from .model import role_depth
    return len(model.domain) * (1 + role_depth(c)) + 1
