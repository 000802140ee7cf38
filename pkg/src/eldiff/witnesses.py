"""Right-hand witness machinery: covers, not-witness tables, witness ABoxes.

Deciding whether a name A gains a new subsumer-of-something difference
reduces to asking whether some signature concept is subsumed by A in one
terminology but not the other.  Three devices make that finite:

* ``noimply_cover``: for each depth bound, a small set of signature
  concepts covering everything the second terminology does not map
  below A (used as a test oracle here).
* ``build_witness_abox``: an ABox encoding all those covers at once,
  so witnesshood becomes a single instance check.  The plain variant
  handles terminologies without range and domain restrictions; the full
  variant adds incoming edges capped by range entailments and outgoing
  edges capped by domain entailments.
* ``notwitness_el`` / ``notwitness_elhr``: dynamic programs over acyclic
  terminologies computing, per defined name, the set of names no
  signature concept can separate.

``role_splitting_unfold`` rewrites an ABox so no individual is in the
range of two distinct roles, the bridge from instance-level to
subsumption-level right-hand witnesses.
"""
from __future__ import annotations

from typing import Optional

from .model import (
    ABox, Atom, Concept, ConceptAssert, EqAtom, Exists, ModelError,
    RoleAssert, Signature, Top, TOP, conj, conjuncts, is_acyclic, non_conj,
    signature_of, sort_key,
)
from .normalize import NormalizedTerminology
from .reasoner import SubsumptionIndex

ALL = "@All"  # fresh marker name: 'no signature concept reaches this'

XI_SIGMA = "xi!all"


def xi(name: str) -> str:
    """The witness-ABox individual standing for a non-conjunctive name."""
    return f"xi!{name}"


class CyclicityError(ModelError):
    pass


# ---------------------------------------------------------------------------
# Covers
# ---------------------------------------------------------------------------

def all_concepts_cover(sigma: Signature, n: int) -> Concept:
    """The most specific signature concept of the given depth."""
    atoms = [Atom(a) for a in sorted(sigma.concept_names)]
    c: Concept = conj(atoms)
    for _ in range(n):
        c = conj(atoms + [Exists(s, c) for s in sorted(sigma.role_names)])
    return c


def noimply_cover(t2n, idx2: SubsumptionIndex, sigma: Signature,
                  a: str, n: int) -> tuple:
    """Cover of the depth-n signature concepts not subsumed by the name."""
    t2 = t2n.terminology if isinstance(t2n, NormalizedTerminology) else t2n

    def pre(name: str) -> frozenset:
        return frozenset(b for b in sigma.concept_names if idx2.atom_subs(b, name))

    def names_part(name: str) -> list:
        return [Atom(b) for b in sorted(sigma.concept_names - pre(name))]

    def cover(name: str, depth: int) -> tuple:
        if t2.is_conjunctive(name):
            rhs = t2.equation_rhs(name)
            out: list = []
            for b in sorted(set(p.name for p in rhs.parts) if hasattr(rhs, "parts")
                            else {rhs.name}):
                out.extend(cover(b, depth))
            return tuple(dict.fromkeys(out))
        if depth == 0:
            return (conj(names_part(name)),)
        defn = t2.equation_rhs(name)
        if defn is None or not isinstance(defn, Exists):
            # pseudo-primitive
            inner = all_concepts_cover(sigma, depth - 1)
            parts = names_part(name) + [Exists(s, inner)
                                        for s in sorted(sigma.role_names)]
            return (conj(parts),)
        r, b = defn.role, defn.filler
        inner = all_concepts_cover(sigma, depth - 1)
        parts = names_part(name)
        parts += [Exists(s, inner) for s in sorted(sigma.role_names) if s != r]
        if r in sigma.role_names:
            filler_name = b.name if isinstance(b, Atom) else None
            if filler_name is None:
                raise ModelError(f"not normalized: {defn!r}")
            parts += [Exists(r, e) for e in cover(filler_name, depth - 1)]
        return (conj(parts),)

    return cover(a, n)


# ---------------------------------------------------------------------------
# Witness ABoxes
# ---------------------------------------------------------------------------

def _xi_pool(t, sigma: Signature) -> list:
    """Non-conjunctive concept names of the terminology and signature."""
    names = set(sigma.concept_names)
    names.update(signature_of(t).concept_names)
    names.update(t.definition_of)
    return sorted(n for n in names if not t.is_conjunctive(n))


def build_witness_abox(tn, idx: SubsumptionIndex, sigma: Signature,
                       style: str = "full") -> ABox:
    """The signature ABox whose individuals encode the noimply covers.

    ``style='plain'`` is the construction for terminologies without range
    and domain restrictions: no incoming edges at the name individuals.
    ``style='full'`` adds range-capped incoming and domain-capped outgoing
    edges and is sound for every terminology.
    """
    if style not in ("plain", "full"):
        raise ValueError(f"unknown style {style!r}")
    t = tn.terminology if isinstance(tn, NormalizedTerminology) else tn
    snames = sorted(sigma.concept_names)
    sroles = sorted(sigma.role_names)
    assertions: list = []
    assertions += [ConceptAssert(a, XI_SIGMA) for a in snames]
    assertions += [RoleAssert(s, XI_SIGMA, XI_SIGMA) for s in sroles]

    for b in _xi_pool(t, sigma):
        me = xi(b)
        mine: list = []
        pre_c, pre_dom, pre_ran = idx.pre_sets(sigma, b)
        mine += [ConceptAssert(a, me) for a in snames if a not in pre_c]
        if style == "full":
            mine += [RoleAssert(s, XI_SIGMA, me) for s in sroles if s not in pre_ran]
        defn = t.equation_rhs(b)
        if defn is None or not isinstance(defn, Exists):
            out_roles = [s for s in sroles
                         if style == "plain" or s not in pre_dom]
            mine += [RoleAssert(s, me, XI_SIGMA) for s in out_roles]
        else:
            r, filler = defn.role, defn.filler
            if not isinstance(filler, (Atom, Top)):
                raise ModelError(f"not normalized: {defn!r}")
            if style == "plain":
                pre_role = frozenset((r,)) & frozenset(sroles)
                mine += [RoleAssert(s, me, XI_SIGMA) for s in sroles if s != r]
                targets = (non_conj(t, filler.name) if isinstance(filler, Atom)
                           else frozenset())
                if r in sigma.role_names:
                    if isinstance(filler, Top):
                        mine += [RoleAssert(r, me, XI_SIGMA)]
                    else:
                        mine += [RoleAssert(r, me, xi(b2)) for b2 in sorted(targets)]
            else:
                pre_role = idx.pre_role(sigma, r)
                mine += [RoleAssert(s, me, XI_SIGMA) for s in sroles
                         if s not in pre_role and s not in pre_dom]
                if isinstance(filler, Top):
                    mine += [RoleAssert(s, me, XI_SIGMA) for s in sorted(pre_role)
                             if s not in pre_dom]
                else:
                    for b2 in sorted(non_conj(t, filler.name)):
                        _, _, ran_b2 = idx.pre_sets(sigma, b2)
                        mine += [RoleAssert(s, me, xi(b2)) for s in sorted(pre_role)
                                 if s not in pre_dom and s not in ran_b2]
        if not mine:
            mine = [ConceptAssert(None, me)]
        assertions += mine
    if not assertions:
        assertions = [ConceptAssert(None, XI_SIGMA)]
    return ABox(assertions)


def role_splitting_unfold(abox: ABox) -> ABox:
    """Copy each individual per role so no element has two incoming labels."""
    roles = sorted(signature_of(abox).role_names)
    if not roles:
        raise ModelError("role-splitting unfolding needs a role in the ABox")
    assertions: list = []
    for a in abox.assertions:
        if isinstance(a, ConceptAssert):
            assertions += [ConceptAssert(a.name, f"{a.indiv}@{r}") for r in roles]
        else:
            assertions += [RoleAssert(a.role, f"{a.subj}@{s}", f"{a.obj}@{a.role}")
                           for s in roles]
    return ABox(assertions)


def split_name(indiv: str, role: str) -> str:
    return f"{indiv}@{role}"


# ---------------------------------------------------------------------------
# NotWitness dynamic programs
# ---------------------------------------------------------------------------

class NotWitnessTable:
    """Memoized name -> subset-of-Xi map with the absorbing ALL marker.

    ALL in an entry means no signature concept reaches that name at all,
    which absorbs every ordinary member.  Entries are bitmasks over the
    Xi order; they materialize to sets on request.
    """

    def __init__(self, xi_sorted: list):
        self.xi_sorted = xi_sorted
        self.xi_set = frozenset(xi_sorted)
        self.bit = {a: 1 << i for i, a in enumerate(xi_sorted)}
        self.full = (1 << len(xi_sorted)) - 1
        self.masks: dict[str, int] = {}
        self._aux = None  # per-pair precomputation, set by the builder

    def contains(self, e: str, a: str) -> bool:
        mask = self.masks[e]
        return bool(mask & self.bit[ALL]) or bool(mask & self.bit[a])

    def entry(self, e: str) -> frozenset:
        mask = self.masks[e]
        return frozenset(a for a in self.xi_sorted if mask & self.bit[a])

    def as_sets(self) -> dict:
        return {e: self.entry(e) for e in self.masks}


class _NotWitnessAux:
    """Pre-set masks shared by every entry computation of one table."""

    def __init__(self, table, t2, idx1, idx2, sigma, elhr):
        self.pre1: dict[str, tuple] = {}
        self.pre2: dict[str, tuple] = {}
        self.pre_role1: dict[str, frozenset] = {}
        self.pre_role2: dict[str, frozenset] = {}
        self.idx1, self.idx2, self.sigma = idx1, idx2, sigma
        self.elhr = elhr
        mask_c: dict[str, int] = {}
        mask_dom: dict[str, int] = {}
        mask_ran: dict[str, int] = {}
        pp_bits = 0
        exist_eqs = []
        for a in table.xi_sorted:
            if a == ALL:
                continue
            bit = table.bit[a]
            c2, d2, r2 = self.p2(a)
            for b in c2:
                mask_c[b] = mask_c.get(b, 0) | bit
            for r in d2:
                mask_dom[r] = mask_dom.get(r, 0) | bit
            for r in r2:
                mask_ran[r] = mask_ran.get(r, 0) | bit
            defn2 = t2.equation_rhs(a)
            if isinstance(defn2, Exists):
                if not isinstance(defn2.filler, Atom):
                    raise ModelError(f"not normalized: {defn2!r}")
                exist_eqs.append((a, bit, defn2.role, defn2.filler.name))
            else:
                pp_bits |= bit
        self.mask_c, self.mask_dom, self.mask_ran = mask_c, mask_dom, mask_ran
        self.pp_bits = pp_bits
        self.exist_eqs = exist_eqs

    def p1(self, name: str) -> tuple:
        got = self.pre1.get(name)
        if got is None:
            got = self.pre1[name] = self.idx1.pre_sets(self.sigma, name)
        return got

    def p2(self, name: str) -> tuple:
        got = self.pre2.get(name)
        if got is None:
            if name == ALL:
                got = (frozenset(), frozenset(), frozenset())
            else:
                got = self.idx2.pre_sets(self.sigma, name)
            self.pre2[name] = got
        return got

    def r1(self, role: str) -> frozenset:
        got = self.pre_role1.get(role)
        if got is None:
            got = self.pre_role1[role] = self.idx1.pre_role(self.sigma, role)
        return got

    def r2(self, role: str) -> frozenset:
        got = self.pre_role2.get(role)
        if got is None:
            got = self.pre_role2[role] = self.idx2.pre_role(self.sigma, role)
        return got

    def aux_pp_mask(self, table, name: str) -> int:
        c1, d1, r1 = self.p1(name)
        m = table.full
        for b in c1:
            m &= self.mask_c.get(b, 0)
        if self.elhr:
            for r in d1:
                m &= self.mask_dom.get(r, 0)
            for r in r1:
                m &= self.mask_ran.get(r, 0)
        if not c1 and (not self.elhr or (not d1 and not r1)):
            m |= table.bit[ALL]
        return m


def _notwitness(t1n, t2n, idx1: SubsumptionIndex, idx2: SubsumptionIndex,
                sigma: Signature, e: str, elhr: bool,
                table: Optional[NotWitnessTable] = None) -> NotWitnessTable:
    t1 = t1n.terminology if isinstance(t1n, NormalizedTerminology) else t1n
    t2 = t2n.terminology if isinstance(t2n, NormalizedTerminology) else t2n
    for t, which in ((t1, "first"), (t2, "second")):
        if not is_acyclic(t):
            raise CyclicityError(f"the {which} terminology is cyclic; "
                                 "the not-witness route needs acyclic inputs")
    if table is None:
        table = NotWitnessTable([ALL] + _xi_pool(t2, sigma))
    if table._aux is None:
        table._aux = _NotWitnessAux(table, t2, idx1, idx2, sigma, elhr)
    aux = table._aux

    def covered(e3: str, b2: str) -> bool:
        compute(e3)
        return table.contains(e3, b2)

    def compute(name: str) -> int:
        got = table.masks.get(name)
        if got is not None:
            return got
        table.masks[name] = 0  # acyclic inputs; guards reentry
        defn = t1.equation_rhs(name)
        if defn is None:
            result = aux.aux_pp_mask(table, name)
        elif not isinstance(defn, Exists):
            result = 0
            for part in conjuncts(defn):
                if not isinstance(part, Atom):
                    raise ModelError(f"not normalized: {defn!r}")
                result |= compute(part.name)
        else:
            r, filler = defn.role, defn.filler
            if not isinstance(filler, Atom):
                raise ModelError(f"not normalized: {defn!r}")
            e2 = filler.name
            sub_entry = compute(e2)
            pre_role1 = aux.r1(r) if elhr else (
                frozenset((r,)) & frozenset(sigma.role_names))
            if not pre_role1 or sub_entry & table.bit[ALL]:
                result = aux.aux_pp_mask(table, name)
            else:
                chosen = 0
                if elhr:
                    prim = aux.pp_bits
                    for s in pre_role1:
                        prim &= aux.mask_dom.get(s, 0)
                    chosen |= prim
                for a, bit, t_role, b_name in aux.exist_eqs:
                    if not elhr:
                        if t_role == r and all(covered(e2, b2)
                                               for b2 in non_conj(t2, b_name)):
                            chosen |= bit
                        continue
                    pre_role2 = aux.r2(t_role)
                    pre_dom2a = aux.p2(a)[1]
                    if not pre_role1 <= (pre_role2 | pre_dom2a):
                        continue
                    ok = True
                    for s in sorted(pre_role1 & pre_role2):
                        if s in pre_dom2a:
                            continue
                        for b2 in sorted(non_conj(t2, b_name)):
                            if s in aux.p2(b2)[2]:
                                continue
                            if not any(covered(e3, b2) and s not in aux.p1(e3)[2]
                                       for e3 in sorted(non_conj(t1, e2))):
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        chosen |= bit
                result = chosen & aux.aux_pp_mask(table, name)
        table.masks[name] = result
        return result

    compute(e)
    return table


def notwitness_el(t1n, t2n, idx1, idx2, sigma: Signature, e: str) -> frozenset:
    """The not-witness entry of a name for range-and-domain-free inputs."""
    return _notwitness(t1n, t2n, idx1, idx2, sigma, e, elhr=False).entry(e)


def notwitness_elhr(t1n, t2n, idx1, idx2, sigma: Signature, e: str) -> frozenset:
    """The not-witness entry of a name, full construction."""
    return _notwitness(t1n, t2n, idx1, idx2, sigma, e, elhr=True).entry(e)


def notwitness_table(t1n, t2n, idx1, idx2, sigma: Signature,
                     names, elhr: bool = True) -> NotWitnessTable:
    table: Optional[NotWitnessTable] = None
    for e in names:
        table = _notwitness(t1n, t2n, idx1, idx2, sigma, e, elhr, table)
    if table is None:
        t2 = t2n.terminology if isinstance(t2n, NormalizedTerminology) else t2n
        table = NotWitnessTable([ALL] + _xi_pool(t2, sigma))
    return table
