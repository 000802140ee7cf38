"""Polynomial-time classification and subsumption for EL-family terminologies.

The engine saturates *contexts*, one per left-hand entity of interest:

* ``('atom', A)``      -- the singleton type of a concept name
* ``('dom', r)``       -- an element with some r-successor
* ``('ran', r)``       -- an element in the range of r
* ``('randc', r, D)``  -- an element in the range of r satisfying D
* ``('ind', tag, a)``  -- a named ABox individual (added by the canonical
  model builder)

Each context accumulates the concept names (and, for definitions with
complex right sides, subconcept tokens) that are entailed for it, plus the
existential successors generated by axioms.  Contexts are created lazily:
a generated successor ``(some r D)`` points at the ``('randc', r, D)``
context, mirroring the range-and-filler elements of canonical models.
The fixpoint is a worklist closure; every rule is sound for arbitrary
terminologies, not only normalized ones.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Optional, Union

from .model import (
    ABox, Atom, Concept, Conj, ConceptAssert, DomainRestr, EqAtom, Exists,
    ExistsRoles, ExistsUniversal, ModelError, Ran, RangeRestr, RoleAssert,
    RoleIncl, Signature, SubAtom, Terminology, Top, TOP, canonicalize,
    conjuncts, is_ran_concept, is_roleconj_u_concept, signature_of, sort_key,
)
from .normalize import NormalizedTerminology


class FamilyError(ModelError):
    """A concept argument is outside the family an operation accepts."""


CtxKey = tuple


def _fact_key(filler: Concept) -> object:
    """A filler criterion as a fact: names are strings, the rest tokens."""
    if isinstance(filler, Atom):
        return filler.name
    return filler


class Saturation:
    """Worklist closure over contexts for one terminology."""

    def __init__(self, t: Terminology):
        self.t = t
        self.supers = _role_closure(t)
        self.subs: dict[str, set] = {}
        for r, sups in self.supers.items():
            for s in sups:
                self.subs.setdefault(s, set()).add(r)

        self.lhs_axioms: dict[str, list] = {}
        self.dom_axioms: list = []
        self.ran_axioms: list = []
        self.eq_trigger: dict[object, list] = {}
        self.conj_watch: dict[object, list] = {}
        self.exists_watch: list = []
        self.exists_watch_by_fact: dict[object, list] = {}
        self._watched: set = set()
        for ax in t.axioms:
            if isinstance(ax, (SubAtom, EqAtom)):
                self.lhs_axioms.setdefault(ax.lhs, []).append(ax.rhs)
            elif isinstance(ax, DomainRestr):
                self.dom_axioms.append((ax.role, ax.rhs))
            elif isinstance(ax, RangeRestr):
                self.ran_axioms.append((ax.role, ax.rhs))
            if isinstance(ax, EqAtom):
                self.eq_trigger.setdefault(_fact_key(ax.rhs), []).append(ax.lhs)
                self._watch(ax.rhs)

        self.S: dict[CtxKey, set] = {}
        self.R: dict[CtxKey, frozenset] = {}
        self.gen: dict[CtxKey, set] = {}        # generated (role, filler)
        self.succ: dict[CtxKey, list] = {}      # (role, child ctx)
        self.parents: dict[CtxKey, set] = {}    # (parent ctx, link role)
        self._queue: deque = deque()
        self._names_cache: dict[CtxKey, tuple] = {}

    # -- axiom indexing ----------------------------------------------------

    def _watch(self, w: Concept) -> None:
        if isinstance(w, (Atom, Top)) or w in self._watched:
            return
        self._watched.add(w)
        if isinstance(w, Conj):
            for p in w.parts:
                self.conj_watch.setdefault(_fact_key(p), []).append(w)
                self._watch(p)
        elif isinstance(w, Exists):
            self.exists_watch.append(w)
            self.exists_watch_by_fact.setdefault(_fact_key(w.filler), []).append(w)
            self._watch(w.filler)
        else:
            raise ModelError(f"cannot watch {w!r}")

    # -- context construction ----------------------------------------------

    def role_leq(self, r: str, s: str) -> bool:
        return r == s or s in self.supers.get(r, ())

    def child_ctx(self, role: str, filler: Concept) -> CtxKey:
        if isinstance(filler, Top):
            return ("ran", role)
        return ("randc", role, filler)

    def ensure(self, ctx: CtxKey) -> CtxKey:
        if ctx in self.S:
            return ctx
        self.S[ctx] = set()
        self.gen[ctx] = set()
        self.succ[ctx] = []
        self.parents.setdefault(ctx, set())
        kind = ctx[0]
        if kind == "atom":
            self.R[ctx] = frozenset()
            self._add_fact(ctx, ctx[1])
        elif kind == "dom":
            self.R[ctx] = frozenset()
            self._add_gen(ctx, ctx[1], TOP)
        elif kind == "ran":
            self.R[ctx] = frozenset(self.supers.get(ctx[1], {ctx[1]}))
            self._fire_ran_axioms(ctx)
        elif kind == "randc":
            self.R[ctx] = frozenset(self.supers.get(ctx[1], {ctx[1]}))
            self._fire_ran_axioms(ctx)
            self._assert_rhs(ctx, ctx[2])
        else:
            raise ModelError(f"unknown context {ctx!r}")
        self._drain()
        return ctx

    def _fire_ran_axioms(self, ctx: CtxKey) -> None:
        for role, rhs in self.ran_axioms:
            if role in self.R[ctx]:
                self._assert_rhs(ctx, rhs)

    # -- fact and link insertion --------------------------------------------

    def _add_fact(self, ctx: CtxKey, fact: object) -> None:
        s = self.S[ctx]
        if fact not in s:
            s.add(fact)
            self._queue.append(("fact", ctx, fact))

    def _add_gen(self, ctx: CtxKey, role: str, filler: Concept) -> None:
        pair = (role, filler)
        if pair not in self.gen[ctx]:
            self.gen[ctx].add(pair)
            child = self.child_ctx(role, filler)
            self._add_link(ctx, role, child)

    def _add_link(self, ctx: CtxKey, role: str, child: CtxKey) -> None:
        self.succ[ctx].append((role, child))
        self.parents.setdefault(child, set()).add((ctx, role))
        self._queue.append(("link", ctx, role, child))

    def _assert_rhs(self, ctx: CtxKey, rhs: Concept) -> None:
        for p in conjuncts(rhs):
            if isinstance(p, Atom):
                self._add_fact(ctx, p.name)
            elif isinstance(p, Exists):
                self._add_gen(ctx, p.role, p.filler)
            elif not isinstance(p, Top):
                raise ModelError(f"not a plain right-hand side: {rhs!r}")

    def _present(self, criterion: Concept, ctx: CtxKey) -> bool:
        if isinstance(criterion, Top):
            return True
        return _fact_key(criterion) in self.S[ctx]

    # -- the closure --------------------------------------------------------

    def _drain(self) -> None:
        queue = self._queue
        while queue:
            item = queue.popleft()
            if item[0] == "fact":
                _, ctx, fact = item
                if isinstance(fact, str):
                    for rhs in self.lhs_axioms.get(fact, ()):
                        self._assert_rhs(ctx, rhs)
                for w in self.conj_watch.get(fact, ()):
                    if w not in self.S[ctx] and all(
                            self._present(p, ctx) for p in w.parts):
                        self._add_fact(ctx, w)
                for lhs in self.eq_trigger.get(fact, ()):
                    self._add_fact(ctx, lhs)
                watchers = self.exists_watch_by_fact.get(fact, ())
                if watchers:
                    for parent, role in self.parents.get(ctx, ()):
                        for w in watchers:
                            if w not in self.S[parent] and self.role_leq(role, w.role):
                                self._add_fact(parent, w)
            else:
                _, ctx, role, child = item
                self.ensure(child)
                for dom_role, rhs in self.dom_axioms:
                    if self.role_leq(role, dom_role):
                        self._assert_rhs(ctx, rhs)
                for w in self.exists_watch:
                    if w not in self.S[ctx] and self.role_leq(role, w.role) \
                            and self._present(w.filler, child):
                        self._add_fact(ctx, w)

    # -- ABox individuals ---------------------------------------------------

    def add_individuals(self, abox: ABox, tag: object) -> dict:
        """Create one context per individual; returns name -> context."""
        ctxs = {a: ("ind", tag, a) for a in abox.obj}
        incoming: dict[str, set] = {a: set() for a in abox.obj}
        asserted: dict[str, list] = {a: [] for a in abox.obj}
        role_facts = []
        for fact in abox.assertions:
            if isinstance(fact, ConceptAssert):
                if fact.name:
                    asserted[fact.indiv].append(fact.name)
            else:
                role_facts.append(fact)
                incoming[fact.obj].update(self.supers.get(fact.role, {fact.role}))
        for a, ctx in ctxs.items():
            self.S[ctx] = set()
            self.gen[ctx] = set()
            self.succ[ctx] = []
            self.parents.setdefault(ctx, set())
            self.R[ctx] = frozenset(incoming[a])
        for a, ctx in ctxs.items():
            self._fire_ran_axioms(ctx)
            for name in asserted[a]:
                self._add_fact(ctx, name)
        for ra in role_facts:
            self._add_link(ctxs[ra.subj], ra.role, ctxs[ra.obj])
        self._drain()
        return ctxs

    # -- queries -------------------------------------------------------------

    def names_of(self, ctx: CtxKey) -> frozenset:
        self.ensure(ctx)
        s = self.S[ctx]
        cached = self._names_cache.get(ctx)
        if cached is not None and cached[0] == len(s):
            return cached[1]
        result = frozenset(f for f in s if isinstance(f, str))
        self._names_cache[ctx] = (len(s), result)
        return result

    def satisfies(self, ctx: CtxKey, c: Concept) -> bool:
        """Entailment of a range-family concept at a context."""
        if isinstance(c, Top):
            return True
        if isinstance(c, Atom):
            return c.name in self.S[ctx] or (ctx[0] == "atom" and ctx[1] == c.name)
        if isinstance(c, Ran):
            return c.role in self.R[ctx]
        if isinstance(c, Conj):
            return all(self.satisfies(ctx, p) for p in c.parts)
        if isinstance(c, Exists):
            return any(self.role_leq(role, c.role) and self.satisfies(child, c.filler)
                       for role, child in self.succ[ctx])
        raise FamilyError(f"cannot evaluate {c!r} on a context")


def _role_closure(t: Terminology) -> dict:
    """Reflexive-transitive supers of each occurring role."""
    direct: dict[str, set] = {}
    roles: set = set(signature_of(t).role_names)
    for ax in t.axioms:
        if isinstance(ax, RoleIncl):
            direct.setdefault(ax.sub, set()).add(ax.sup)
            roles.add(ax.sub)
            roles.add(ax.sup)
    closure: dict[str, set] = {}

    def supers_of(r: str) -> set:
        if r in closure:
            return closure[r]
        closure[r] = {r}  # guards cyclic role hierarchies
        result = {r}
        for s in direct.get(r, ()):
            result |= supers_of(s)
        closure[r] = result
        return result

    for r in roles:
        supers_of(r)
    return closure


class SubsumptionIndex:
    """Classification result: atomic, domain, range, and role entailments."""

    def __init__(self, source):
        self.source: NormalizedTerminology = (
            source if isinstance(source, NormalizedTerminology)
            else NormalizedTerminology(source, frozenset(), {}))
        t = self.source.terminology
        self.saturation = Saturation(t)
        sig = signature_of(t)
        self._names = frozenset(sig.concept_names) | frozenset(
            n for n in t.definition_of)
        self._roles = frozenset(self.saturation.supers)
        for a in self._names:
            self.saturation.ensure(("atom", a))
        for r in self._roles:
            self.saturation.ensure(("dom", r))
            self.saturation.ensure(("ran", r))

    @property
    def terminology(self) -> Terminology:
        return self.source.terminology

    def atom_subs(self, a: str, b: str) -> bool:
        """T entails a-is-subsumed-by-b."""
        if a == b:
            return True
        return b in self.saturation.names_of(("atom", a))

    def dom_subs(self, r: str, a: str) -> bool:
        if r not in self._roles:
            return False
        return a in self.saturation.names_of(("dom", r))

    def ran_subs(self, r: str, a: str) -> bool:
        if r not in self._roles:
            return False
        return a in self.saturation.names_of(("ran", r))

    def role_subs(self, r: str, s: str) -> bool:
        return self.saturation.role_leq(r, s)

    def subsumers(self, a: str) -> frozenset:
        return self.saturation.names_of(("atom", a)) | {a}

    def pre_sets(self, sigma: Signature, a: str) -> tuple:
        """Signature-restricted subsumee sets targeted at one name."""
        pre_c = frozenset(b for b in sigma.concept_names if self.atom_subs(b, a))
        pre_dom = frozenset(r for r in sigma.role_names if self.dom_subs(r, a))
        pre_ran = frozenset(r for r in sigma.role_names if self.ran_subs(r, a))
        return pre_c, pre_dom, pre_ran

    def pre_role(self, sigma: Signature, r: str) -> frozenset:
        return frozenset(s for s in sigma.role_names if self.role_subs(s, r))


@lru_cache(maxsize=512)
def _classify_cached(t: Terminology) -> SubsumptionIndex:
    return SubsumptionIndex(t)


def classify(t) -> SubsumptionIndex:
    """Classify a terminology; results are cached per terminology value."""
    return _classify_cached(_plain(t))


def entails_role(t, r: str, s: str) -> bool:
    """Membership in the reflexive-transitive closure of role inclusions."""
    return classify(_plain(t)).role_subs(r, s)


def _plain(t) -> Terminology:
    return t.terminology if isinstance(t, NormalizedTerminology) else t


def entails_subsumption(t, lhs: Concept, rhs: Concept) -> bool:
    """Decide a subsumption between a range concept and a query concept.

    The left side is turned into its tree ABox, and the right side is
    evaluated at the root of the canonical model of the resulting
    knowledge base.
    """
    lhs = canonicalize(lhs)
    rhs = canonicalize(rhs)
    if not is_ran_concept(lhs):
        raise FamilyError(f"left side outside the range family: {lhs!r}")
    if not is_roleconj_u_concept(rhs):
        raise FamilyError(f"right side outside the query family: {rhs!r}")
    if isinstance(rhs, Top):
        return True
    idx = classify(_plain(t))
    if isinstance(lhs, Atom) and isinstance(rhs, Atom):
        return idx.atom_subs(lhs.name, rhs.name)
    from .canonical import KnowledgeBase, concept_to_abox, instance_check
    abox, root = concept_to_abox(lhs)
    return instance_check(KnowledgeBase(idx.source, abox), idx, rhs, root)
