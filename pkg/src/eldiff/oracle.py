"""Brute-force witness search and random terminology generation.

The brute-force route enumerates canonical signature concepts up to a role
depth and a conjunction width and tests every primitive witness shape by
direct entailment checks.  It is exponential and exists as an independent
oracle for the polynomial algorithms; every witness it finds must appear
in the computed sets.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Optional

from .model import (
    ABox, Atom, Concept, ConceptAssert, Conj, EqAtom, Exists, ExistsRoles,
    ExistsUniversal, Ran, RangeRestr, DomainRestr, RoleAssert, RoleIncl,
    Signature, SubAtom, Terminology, Top, TOP, conj, exists_roles, is_acyclic,
    sort_key,
)
from .canonical import (
    KnowledgeBase, canonical_model, concept_to_abox, eval_concept,
)
from .diff import ModeSets
from .reasoner import classify, entails_role, entails_subsumption


def enumerate_concepts(sigma: Signature, depth_cap: int, conj_cap: int,
                       with_ran: bool = False, with_roleconj: bool = False,
                       with_universal: bool = False) -> tuple:
    """Canonical signature concepts up to the given depth and width."""
    atoms: list = [Atom(a) for a in sorted(sigma.concept_names)]
    if with_ran:
        atoms = atoms + [Ran(r) for r in sorted(sigma.role_names)]
    levels: list = []
    prev: list = [TOP]
    for depth in range(depth_cap + 1):
        pool = list(atoms)
        if depth > 0:
            for r in sorted(sigma.role_names):
                pool += [Exists(r, c) for c in prev]
            if with_roleconj and len(sigma.role_names) >= 2:
                for rs in itertools.combinations(sorted(sigma.role_names), 2):
                    pool += [ExistsRoles(rs, c) for c in prev]
            if with_universal:
                pool += [ExistsUniversal(c) for c in prev]
        here: set = {TOP}
        for k in range(1, conj_cap + 1):
            for combo in itertools.combinations(pool, k):
                here.add(conj(combo))
        prev = sorted(here, key=sort_key)
        levels.append(prev)
    out: list = []
    seen: set = set()
    for level in levels:
        for c in level:
            if c not in seen:
                seen.add(c)
                out.append(c)
    return tuple(out)


def _eval_memo(model, c: Concept, memo: dict) -> frozenset:
    cached = memo.get(c)
    if cached is not None:
        return cached
    if isinstance(c, Conj):
        result = model.domain
        for p in c.parts:
            result &= _eval_memo(model, p, memo)
    elif isinstance(c, Exists):
        filler = _eval_memo(model, c.filler, memo)
        pairs = model.role_ext.get(c.role, frozenset())
        result = frozenset(d for d, e in pairs if e in filler)
    elif isinstance(c, ExistsUniversal):
        result = model.domain if _eval_memo(model, c.filler, memo) else frozenset()
    else:
        result = eval_concept(model, c)
    memo[c] = result
    return result


def _shared_forest_abox(pool: tuple) -> tuple:
    """One ABox whose nodes realize each pool concept, shared per subtree.

    Nodes are keyed by (concept, access role); range conjuncts become
    incoming edges from one shared source.  Returns the ABox and the map
    from pool concepts to their root individuals.
    """
    from .model import conjuncts as _conjuncts

    assertions: list = []
    keys: dict = {}
    ran_source = "q!ran"

    def node(c: Concept, access) -> str:
        key = (c, access)
        indiv = keys.get(key)
        if indiv is not None:
            return indiv
        indiv = f"q{len(keys)}"
        keys[key] = indiv
        empty = True
        for p in _conjuncts(c):
            empty = False
            if isinstance(p, Atom):
                assertions.append(ConceptAssert(p.name, indiv))
            elif isinstance(p, Ran):
                assertions.append(RoleAssert(p.role, ran_source, indiv))
            elif isinstance(p, Exists):
                assertions.append(RoleAssert(p.role, indiv, node(p.filler, p.role)))
            else:
                raise ValueError(f"not a range-family concept: {c!r}")
        if empty:
            assertions.append(ConceptAssert(None, indiv))
        return indiv

    root_of = {c: node(c, None) for c in pool}
    return ABox(assertions), root_of


def brute_force_witnesses(t1n, t2n, idx1, idx2, sigma: Signature,
                          depth_cap: int = 2, conj_cap: int = 2,
                          modes: tuple = ("concept", "instance", "query")) -> dict:
    """Every witness found by exhaustive search, per semantics.

    One canonical model over the disjoint union of all enumerated tree
    ABoxes answers every right-hand question in a single saturation; the
    left-hand questions evaluate the enumerated concepts on two small
    models with shared-subconcept memoization.
    """
    t1 = t1n.terminology if hasattr(t1n, "terminology") else t1n
    t2 = t2n.terminology if hasattr(t2n, "terminology") else t2n
    roles = sorted(sigma.role_names)
    names = sorted(sigma.concept_names)
    role_set = frozenset(
        (r, s) for r in roles for s in roles
        if r != s and entails_role(t1n, r, s) and not entails_role(t2n, r, s))

    el = enumerate_concepts(sigma, depth_cap, conj_cap)
    ran_lhs = enumerate_concepts(sigma, depth_cap, conj_cap, with_ran=True)
    el_top_ran = tuple(dict.fromkeys(
        tuple(el) + tuple(conj([Ran(r), c]) for r in roles for c in el)))
    query_rhs = enumerate_concepts(sigma, depth_cap, conj_cap,
                                   with_roleconj=True, with_universal=True)

    # one knowledge base holds ABoxes for every left-hand candidate, with
    # equal subtrees shared per access role (types are invariant under the
    # merge: merged nodes simulate their tree originals both ways), so a
    # single saturation per terminology answers all right-hand queries
    rhs_pool = tuple(dict.fromkeys(ran_lhs + el_top_ran))
    combined, root_of = _shared_forest_abox(rhs_pool)
    rhs_m1 = canonical_model(KnowledgeBase(t1, combined))
    rhs_m2 = canonical_model(KnowledgeBase(t2, combined))

    def rhs_set(pool: tuple) -> frozenset:
        found: set = set()
        missing = set(names)
        for c in pool:
            if not missing:
                break
            root = root_of[c]
            sep = ((rhs_m1.types[rhs_m1.individual_map[root]] & missing)
                   - rhs_m2.types[rhs_m2.individual_map[root]])
            found |= sep
            missing -= sep
        return frozenset(found)

    def lhs_found(abox: ABox, point: str, pool: tuple) -> bool:
        m1 = canonical_model(KnowledgeBase(t1, abox))
        m2 = canonical_model(KnowledgeBase(t2, abox))
        p1, p2 = m1.individual_map[point], m2.individual_map[point]
        memo1: dict = {}
        memo2: dict = {}
        return any(p1 in _eval_memo(m1, d, memo1)
                   and p2 not in _eval_memo(m2, d, memo2) for d in pool)

    def lhs_sets(pool: tuple) -> tuple:
        atomic = frozenset(
            a for a in names
            if lhs_found(ABox([ConceptAssert(a, "o0")]), "o0", pool))
        dom = frozenset(
            r for r in roles
            if lhs_found(ABox([RoleAssert(r, "o0", "o1")]), "o0", pool))
        rng = frozenset(
            r for r in roles
            if lhs_found(ABox([RoleAssert(r, "o0", "o1")]), "o1", pool))
        return atomic, dom, rng

    out: dict = {}
    inst_rhs: frozenset = frozenset()
    if "instance" in modes or "query" in modes:
        inst_rhs = rhs_set(ran_lhs)
    plain_lhs = None
    if "instance" in modes or "concept" in modes:
        plain_lhs = lhs_sets(el)
    if "instance" in modes:
        a, d, r = plain_lhs
        out["instance"] = ModeSets(role_set, inst_rhs, a, d, r)
    if "concept" in modes:
        a, d, r = plain_lhs
        out["concept"] = ModeSets(role_set, rhs_set(el_top_ran), a, d, r)
    if "query" in modes:
        a, d, r = lhs_sets(query_rhs)
        out["query"] = ModeSets(role_set, inst_rhs, a, d, r)
    return out


def generate_random_terminology(num_defined: int, num_roles: int,
                                eq_ratio: float, exists_ratio: float,
                                max_conj: int, seed: int,
                                range_ratio: float = 0.0,
                                domain_ratio: float = 0.0,
                                role_incl_ratio: float = 0.0) -> Terminology:
    """An acyclic terminology drawn top-down over a fresh name pool.

    Equations versus inclusions and existentials versus conjunctions are
    chosen per the two ratios, in expectation.  The optional ratios add
    range restrictions, domain restrictions, and a role hierarchy on top
    of the concept definitions.  Deterministic per seed.
    """
    if num_defined < 1 or num_roles < 1 or max_conj < 2:
        raise ValueError("need at least one defined name, one role, width two")
    rng = random.Random(seed)
    defined = [f"D{i}" for i in range(num_defined)]
    primitives = [f"P{i}" for i in range(max(2, num_defined // 2))]
    roles = [f"r{i}" for i in range(num_roles)]

    def some_name(allowed: list) -> str:
        return rng.choice(allowed)

    def gen_part(allowed: list) -> Concept:
        if rng.random() < exists_ratio:
            return Exists(rng.choice(roles), Atom(some_name(allowed)))
        return Atom(some_name(allowed))

    def gen_rhs(allowed: list) -> Concept:
        if rng.random() < exists_ratio:
            return Exists(rng.choice(roles), Atom(some_name(allowed)))
        k = rng.randint(2, max_conj)
        c = conj(gen_part(allowed) for _ in range(k))
        if isinstance(c, Top):
            return Atom(some_name(allowed))
        return c

    axioms: list = []
    for i, name in enumerate(defined):
        allowed = defined[i + 1:] + primitives
        rhs = gen_rhs(allowed)
        if rng.random() < eq_ratio:
            axioms.append(EqAtom(name, rhs))
        else:
            axioms.append(SubAtom(name, rhs))
    pool = defined + primitives
    for r in roles:
        if rng.random() < range_ratio:
            axioms.append(RangeRestr(r, gen_rhs(pool)))
        if rng.random() < domain_ratio:
            axioms.append(DomainRestr(r, gen_rhs(pool)))
        if rng.random() < role_incl_ratio and len(roles) >= 2:
            other = rng.choice([s for s in roles if s != r])
            axioms.append(RoleIncl(r, other))
    t = Terminology(axioms)
    if not is_acyclic(t):
        raise AssertionError("generator produced a cyclic terminology")
    return t
