"""Simulation checks between pointed structures, with counterexamples.

Three flavours, all decided by greatest-fixpoint refinement:

* plain signature simulation between interpretations (transfers plain
  concepts),
* range simulation between pointed ABoxes (transfers range concepts;
  adds a condition on incoming edges), and
* global intersection-preserving simulation between interpretations
  (transfers role-conjunction and universal-role concepts; successor
  steps must match the whole signature label set at once, and every
  left element needs an image).

On failure a distinguishing concept is extracted from the refinement
trace: it holds at the left point and fails at the right point, is built
over the given signature only, and is greedily pruned.  Concepts larger
than the size cap are dropped and flagged instead of truncated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .model import (
    ABox, Atom, Concept, Conj, Exists, ExistsRoles, ExistsUniversal,
    InternalError, Ran, Signature, Top, TOP, concept_size, conj, conjuncts,
    exists_roles, sort_key,
)
from .canonical import Aux, Interpretation, Named, eval_concept

DEFAULT_WITNESS_CAP = 64


@dataclass
class SimulationResult:
    holds: bool
    witness_concept: Optional[Concept] = None
    witness_overflow: bool = False


def _el_key(el) -> tuple:
    if isinstance(el, Named):
        return (0, el.name)
    if isinstance(el, Aux):
        return (1, el.role, repr(el.filler))
    return (2, repr(el))


class _Refinement:
    """Synchronous refinement with per-pair removal reasons."""

    def __init__(self, left: list, right: list):
        self.left = sorted(left, key=_el_key)
        self.right = sorted(right, key=_el_key)
        self.alive: dict = {x: set() for x in self.left}
        self.removed: dict = {}  # (x, y) -> (round, reason)

    def seed(self, compatible: Callable, reason: Callable) -> None:
        for x in self.left:
            for y in self.right:
                if compatible(x, y):
                    self.alive[x].add(y)
                else:
                    self.removed[(x, y)] = (0, reason(x, y))

    def refine(self, violations: Callable) -> None:
        rnd = 0
        while True:
            rnd += 1
            doomed = []
            for x in self.left:
                for y in sorted(self.alive[x], key=_el_key):
                    why = violations(x, y, self.alive)
                    if why is not None:
                        doomed.append((x, y, why))
            if not doomed:
                return
            for x, y, why in doomed:
                self.alive[x].discard(y)
                self.removed[(x, y)] = (rnd, why)

    def simulated(self, x, y) -> bool:
        return y in self.alive.get(x, ())


def _succ(i: Interpretation, d, role: str) -> list:
    return sorted((e for e, labels in i.out[d].items() if role in labels),
                  key=_el_key)


# ---------------------------------------------------------------------------
# Plain signature simulation on interpretations
# ---------------------------------------------------------------------------

def sigma_simulation(i1: Interpretation, d, i2: Interpretation, e,
                     sigma: Signature, max_witness_size: int = DEFAULT_WITNESS_CAP
                     ) -> SimulationResult:
    names = sigma.concept_names
    roles = sorted(sigma.role_names)
    ref = _Refinement(list(i1.domain), list(i2.domain))

    def compatible(x, y) -> bool:
        return i1.types[x] & names <= i2.types[y]

    def atom_reason(x, y):
        bad = sorted(i1.types[x] & names - i2.types[y])
        return ("atom", bad[0])

    def violations(x, y, alive):
        for r in roles:
            for x2 in _succ(i1, x, r):
                if not any(y2 in alive[x2] for y2 in _succ(i2, y, r)):
                    return ("role", r, x2)
        return None

    ref.seed(compatible, atom_reason)
    ref.refine(violations)
    if ref.simulated(d, e):
        return SimulationResult(True)

    def build(x, y) -> Concept:
        rnd, why = ref.removed[(x, y)]
        if why[0] == "atom":
            return Atom(why[1])
        _, r, x2 = why
        parts = [build(x2, y2) for y2 in _succ(i2, y, r)]
        return Exists(r, conj(parts))

    witness = build(d, e)
    witness = _prune(witness,
                     lambda w: d in eval_concept(i1, w) and e not in eval_concept(i2, w))
    if concept_size(witness) > max_witness_size:
        return SimulationResult(False, None, True)
    return SimulationResult(False, witness)


# ---------------------------------------------------------------------------
# Range simulation on ABoxes
# ---------------------------------------------------------------------------

class _ABoxView:
    def __init__(self, abox: ABox):
        from .model import ConceptAssert
        self.obj = sorted(abox.obj)
        types: dict[str, set] = {a: set() for a in abox.obj}
        self.succ: dict[tuple, list] = {}
        self.in_labels: dict[str, set] = {a: set() for a in abox.obj}
        for fact in abox.assertions:
            if isinstance(fact, ConceptAssert):
                if fact.name:
                    types[fact.indiv].add(fact.name)
            else:
                self.succ.setdefault((fact.subj, fact.role), []).append(fact.obj)
                self.in_labels[fact.obj].add(fact.role)
        self.types = {a: frozenset(s) for a, s in types.items()}
        for key in self.succ:
            self.succ[key] = sorted(self.succ[key])

    def satisfies(self, a: str, c: Concept) -> bool:
        if isinstance(c, Top):
            return True
        if isinstance(c, Atom):
            return c.name in self.types[a]
        if isinstance(c, Ran):
            return c.role in self.in_labels[a]
        if isinstance(c, Conj):
            return all(self.satisfies(a, p) for p in c.parts)
        if isinstance(c, Exists):
            return any(self.satisfies(b, c.filler)
                       for b in self.succ.get((a, c.role), ()))
        raise ValueError(f"not a range-family concept: {c!r}")


def range_simulation(a1: ABox, ind1: str, a2: ABox, ind2: str,
                     sigma: Signature, max_witness_size: int = DEFAULT_WITNESS_CAP
                     ) -> SimulationResult:
    names = sigma.concept_names
    roles = sorted(sigma.role_names)
    v1, v2 = _ABoxView(a1), _ABoxView(a2)
    ref = _Refinement(v1.obj, v2.obj)

    def compatible(x, y) -> bool:
        if not (v1.types[x] & names <= v2.types[y]):
            return False
        return (v1.in_labels[x] & set(roles)) <= v2.in_labels[y]

    def reason(x, y):
        bad_atoms = sorted(v1.types[x] & names - v2.types[y])
        if bad_atoms:
            return ("atom", bad_atoms[0])
        bad_roles = sorted(v1.in_labels[x] & set(roles) - v2.in_labels[y])
        return ("rs", bad_roles[0])

    def violations(x, y, alive):
        for r in roles:
            for x2 in v1.succ.get((x, r), ()):
                if not any(y2 in alive[x2] for y2 in v2.succ.get((y, r), ())):
                    return ("role", r, x2)
        return None

    ref.seed(compatible, reason)
    ref.refine(violations)
    if ref.simulated(ind1, ind2):
        return SimulationResult(True)

    def build(x, y) -> Concept:
        rnd, why = ref.removed[(x, y)]
        if why[0] == "atom":
            return Atom(why[1])
        if why[0] == "rs":
            return Ran(why[1])
        _, r, x2 = why
        parts = [build(x2, y2) for y2 in v2.succ.get((y, r), ())]
        return Exists(r, conj(parts))

    witness = build(ind1, ind2)
    witness = _prune(witness,
                     lambda w: v1.satisfies(ind1, w) and not v2.satisfies(ind2, w))
    if concept_size(witness) > max_witness_size:
        return SimulationResult(False, None, True)
    return SimulationResult(False, witness)


# ---------------------------------------------------------------------------
# Global intersection-preserving simulation
# ---------------------------------------------------------------------------

def global_intersection_simulation(i1: Interpretation, d, i2: Interpretation, e,
                                   sigma: Signature,
                                   max_witness_size: int = DEFAULT_WITNESS_CAP
                                   ) -> SimulationResult:
    names = sigma.concept_names
    roles = frozenset(sigma.role_names)
    ref = _Refinement(list(i1.domain), list(i2.domain))

    def labelled_succ1(x) -> list:
        out = []
        for x2, labels in i1.out[x].items():
            r = labels & roles
            if r:
                out.append((x2, frozenset(r)))
        return sorted(out, key=lambda p: (_el_key(p[0]), tuple(sorted(p[1]))))

    def rset_succ2(y, rset: frozenset) -> list:
        return sorted((y2 for y2, labels in i2.out[y].items() if rset <= labels),
                      key=_el_key)

    def compatible(x, y) -> bool:
        return i1.types[x] & names <= i2.types[y]

    def atom_reason(x, y):
        bad = sorted(i1.types[x] & names - i2.types[y])
        return ("atom", bad[0])

    def violations(x, y, alive):
        for x2, rset in labelled_succ1(x):
            if not any(y2 in alive[x2] for y2 in rset_succ2(y, rset)):
                return ("roles", rset, x2)
        return None

    ref.seed(compatible, atom_reason)
    ref.refine(violations)

    def build(x, y) -> Concept:
        rnd, why = ref.removed[(x, y)]
        if why[0] == "atom":
            return Atom(why[1])
        _, rset, x2 = why
        parts = [build(x2, y2) for y2 in rset_succ2(y, rset)]
        return exists_roles(rset, conj(parts))

    def separates(w: Concept) -> bool:
        return d in eval_concept(i1, w) and e not in eval_concept(i2, w)

    if not ref.simulated(d, e):
        witness = _prune(build(d, e), separates)
        if concept_size(witness) > max_witness_size:
            return SimulationResult(False, None, True)
        return SimulationResult(False, witness)

    unmatched = [x for x in sorted(i1.domain, key=_el_key) if not ref.alive[x]]
    if unmatched:
        x0 = unmatched[0]
        body = conj(build(x0, y) for y in sorted(i2.domain, key=_el_key))
        witness = _prune(ExistsUniversal(body), separates)
        if concept_size(witness) > max_witness_size:
            return SimulationResult(False, None, True)
        return SimulationResult(False, witness)
    return SimulationResult(True)


# ---------------------------------------------------------------------------
# Witness pruning
# ---------------------------------------------------------------------------

def _prune(witness: Concept, separates: Callable) -> Concept:
    """Drop and shrink conjuncts as long as the concept still separates."""
    if not separates(witness):
        raise InternalError("extracted concept does not separate the points")

    def shrink(c: Concept, rebuild: Callable) -> Concept:
        parts = list(conjuncts(c))
        i = 0
        while i < len(parts):
            trial = parts[:i] + parts[i + 1:]
            if separates(rebuild(conj(trial))):
                parts = trial
            else:
                i += 1
        for i, p in enumerate(list(parts)):
            if isinstance(p, (Exists, ExistsRoles, ExistsUniversal)):
                def rebuild_child(new_filler, i=i, p=p):
                    new_p = type(p)(*_with_filler(p, new_filler))
                    return rebuild(conj(parts[:i] + [new_p] + parts[i + 1:]))
                new_filler = shrink(p.filler, rebuild_child)
                parts[i] = type(p)(*_with_filler(p, new_filler))
        return conj(parts)

    return shrink(witness, lambda w: w)


def _with_filler(p: Concept, filler: Concept) -> tuple:
    if isinstance(p, Exists):
        return (p.role, filler)
    if isinstance(p, ExistsRoles):
        return (p.roles, filler)
    return (filler,)
