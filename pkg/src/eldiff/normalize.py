"""Normalization of terminologies into the restricted axiom shapes.

A normalized terminology contains only axioms of these forms (A, B, B'
concept names, E a name, ``(some s top)`` or ``(ran s)``, F a nonempty
conjunction of names that are all non-conjunctive):

* ``A = (some r B)`` or ``A = F``
* ``E < (some r B)``, ``E < (some r top)``, or ``E < F``

plus role inclusions, which pass through untouched.  The construction is
a five-step rewrite; fresh names, all prefixed ``@N``, abbreviate the
subconcepts they replace and never enter any user signature.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    Atom, Axiom, Concept, Conj, DomainRestr, EqAtom, Exists, FRESH_PREFIX,
    ModelError, RangeRestr, RoleIncl, SubAtom, Terminology, Top, TOP,
    atomic_conjuncts, conj, conjuncts, is_acyclic,
)


@dataclass
class NormalizedTerminology:
    terminology: Terminology
    fresh: frozenset
    origin: dict  # fresh name -> the concept it abbreviates

    @property
    def axioms(self) -> tuple:
        return self.terminology.axioms


class _FreshNames:
    def __init__(self) -> None:
        self.count = 0
        self.origin: dict[str, Concept] = {}

    def make(self, abbreviates: Concept) -> str:
        self.count += 1
        name = f"{FRESH_PREFIX}{self.count}"
        self.origin[name] = abbreviates
        return name


def _flatten_fillers(c: Concept, fresh: _FreshNames, out: list) -> Concept:
    """Step 1: only names or top under existential restrictions."""
    if isinstance(c, (Top, Atom)):
        return c
    if isinstance(c, Exists):
        filler = _flatten_fillers(c.filler, fresh, out)
        if isinstance(filler, (Atom, Top)):
            return Exists(c.role, filler)
        name = fresh.make(filler)
        out.append(EqAtom(name, filler))
        return Exists(c.role, Atom(name))
    if isinstance(c, Conj):
        return conj(_flatten_fillers(p, fresh, out) for p in c.parts)
    raise ModelError(f"not a plain concept: {c!r}")


def _split_mixed_rhs(rhs: Concept, fresh: _FreshNames, out: list) -> Concept:
    """Step 2: a right-hand side is a single existential or names only."""
    parts = conjuncts(rhs)
    existentials = [p for p in parts if isinstance(p, Exists)]
    if not existentials or (len(parts) == 1 and len(existentials) == 1):
        return rhs
    new_parts = []
    for p in parts:
        if isinstance(p, Exists):
            name = fresh.make(p)
            out.append(EqAtom(name, p))
            new_parts.append(Atom(name))
        else:
            new_parts.append(p)
    return conj(new_parts)


def _break_conjunctive_cycles(axioms: list) -> list:
    """Step 4: no equation cycles through conjunctions of names.

    Every cycle is cut by demoting the equation of its structurally
    smallest name to an inclusion, with the conjunction unfolded along
    the cycle and the name itself removed.
    """
    def conj_eqs(axs: Iterable[Axiom]) -> dict:
        result = {}
        for ax in axs:
            if isinstance(ax, EqAtom) and not isinstance(ax.rhs, Exists):
                result[ax.lhs] = ax.rhs
        return result

    while True:
        eqs = conj_eqs(axioms)
        graph = {a: [b for b in atomic_conjuncts(rhs) if b in eqs]
                 for a, rhs in eqs.items()}
        cycle = _find_cycle(graph)
        if cycle is None:
            return axioms
        rep = min(cycle)
        i = cycle.index(rep)
        chain = cycle[i:] + cycle[:i]  # rep, B0, .., B(n-1); B(n-1) uses rep
        unfolded = conj(p for p in conjuncts(eqs[chain[-1]])
                        if not (isinstance(p, Atom) and p.name == rep))
        # substitute backwards along the chain: rhs of chain[k] has chain[k+1]
        for k in range(len(chain) - 2, -1, -1):
            hole = chain[k + 1]
            parts = [unfolded if isinstance(p, Atom) and p.name == hole else p
                     for p in conjuncts(eqs[chain[k]])]
            unfolded = conj(parts)
        new_rhs = unfolded
        if isinstance(new_rhs, Top):
            # the cycle was the whole definition; drop the axiom entirely
            axioms = [ax for ax in axioms
                      if not (isinstance(ax, EqAtom) and ax.lhs == rep)]
        else:
            axioms = [SubAtom(rep, new_rhs)
                      if isinstance(ax, EqAtom) and ax.lhs == rep else ax
                      for ax in axioms]


def _find_cycle(graph: dict) -> Optional[list]:
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(n: str) -> Optional[list]:
        state[n] = 1
        stack.append(n)
        for m in graph.get(n, ()):
            st = state.get(m)
            if st == 1:
                return stack[stack.index(m):]
            if st is None:
                found = visit(m)
                if found:
                    return found
        stack.pop()
        state[n] = 2
        return None

    for n in sorted(graph):
        if n not in state:
            found = visit(n)
            if found:
                return found
    return None


def _expand_conjunctive(axioms: list) -> list:
    """Step 5: conjuncts of name-conjunction right sides are non-conjunctive."""
    t = Terminology(axioms)
    expanded: dict[str, Concept] = {}

    def expansion(name: str) -> Concept:
        if name in expanded:
            return expanded[name]
        rhs = t.equation_rhs(name)
        if rhs is None or isinstance(rhs, Exists):
            return Atom(name)
        expanded[name] = Atom(name)  # guards stray cycles; none after step 4
        result = conj(expansion(p.name) if isinstance(p, Atom) else p
                      for p in conjuncts(rhs))
        expanded[name] = result
        return result

    def rewrite(rhs: Concept) -> Concept:
        if isinstance(rhs, Exists):
            return rhs
        return conj(expansion(p.name) if isinstance(p, Atom) else p
                    for p in conjuncts(rhs))

    out = []
    for ax in axioms:
        if isinstance(ax, EqAtom) and not isinstance(ax.rhs, Exists):
            new_rhs = expansion(ax.lhs)
            out.append(EqAtom(ax.lhs, new_rhs if not isinstance(new_rhs, Top) else ax.rhs))
        elif isinstance(ax, (SubAtom, RangeRestr, DomainRestr)) and not isinstance(ax.rhs, Exists):
            new_rhs = rewrite(ax.rhs)
            if isinstance(new_rhs, Top):
                continue
            out.append(type(ax)(ax.lhs if isinstance(ax, SubAtom) else ax.role, new_rhs))
        else:
            out.append(ax)
    return out


def normalize(t: Terminology) -> NormalizedTerminology:
    fresh = _FreshNames()
    step2: list[Axiom] = []
    for ax in t.axioms:
        if isinstance(ax, RoleIncl):
            step2.append(ax)
            continue
        extra: list[Axiom] = []
        rhs = _flatten_fillers(ax.rhs, fresh, extra)
        rhs = _split_mixed_rhs(rhs, fresh, extra)
        queue = list(extra)
        extra = []
        for e in queue:  # fresh definitions from step 1 may still be mixed
            e_rhs = _split_mixed_rhs(e.rhs, fresh, extra)
            extra.append(EqAtom(e.lhs, e_rhs))
        if isinstance(ax, SubAtom):
            step2.append(SubAtom(ax.lhs, rhs))
        elif isinstance(ax, EqAtom):
            step2.append(EqAtom(ax.lhs, rhs))
        elif isinstance(ax, RangeRestr):
            step2.append(RangeRestr(ax.role, rhs))
        else:
            step2.append(DomainRestr(ax.role, rhs))
        step2.extend(extra)

    step3: list[Axiom] = []
    for ax in step2:
        if isinstance(ax, EqAtom) and isinstance(ax.rhs, Exists) and isinstance(ax.rhs.filler, Top):
            step3.append(SubAtom(ax.lhs, ax.rhs))
            step3.append(DomainRestr(ax.rhs.role, Atom(ax.lhs)))
        else:
            step3.append(ax)

    step4 = _break_conjunctive_cycles(step3)
    step5 = _expand_conjunctive(step4)

    result = Terminology(step5)
    validate_normalized(result)
    return NormalizedTerminology(result, frozenset(fresh.origin), dict(fresh.origin))


def validate_normalized(t: Terminology) -> None:
    """Raise unless every axiom matches a normalized shape."""
    for ax in t.axioms:
        if isinstance(ax, RoleIncl):
            continue
        rhs = ax.rhs
        if isinstance(rhs, Exists):
            if not isinstance(rhs.filler, (Atom, Top)):
                raise ModelError(f"not normalized (nested filler): {ax!r}")
            if isinstance(ax, EqAtom) and isinstance(rhs.filler, Top):
                raise ModelError(f"not normalized (equation with top filler): {ax!r}")
            continue
        parts = conjuncts(rhs)
        if not parts or not all(isinstance(p, Atom) for p in parts):
            raise ModelError(f"not normalized (mixed conjunction): {ax!r}")
        for p in parts:
            if t.is_conjunctive(p.name):
                raise ModelError(f"not normalized (conjunctive conjunct {p.name}): {ax!r}")


def is_normalized(t: Terminology) -> bool:
    try:
        validate_normalized(t)
    except ModelError:
        return False
    return True


def ensure_normalized(t) -> NormalizedTerminology:
    """Accept a terminology or an already normalized one."""
    if isinstance(t, NormalizedTerminology):
        return t
    if is_normalized(t):
        return NormalizedTerminology(t, frozenset(), {})
    return normalize(t)
