"""Combinatorial chambers of Tits cone intersections.

For a fixed I, a chamber is a pair (x, J) with |J| = |I|, x minimal in
x W_J and W_I x = x W_J.  These are in bijection with the core (I, J)-cosets
with J varying, via p -> (min p, J).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .atoms import atom_cosets_from
from .coxeter import CoxeterSystem, Element, bits, popcount
from .cosets import DoubleCoset, coset_of
from .errors import CoxeterError
from .poset import CorePoset, enumerate_core


@dataclass(frozen=True)
class CombinatorialChamber:
    x: Element
    J: int

    @property
    def key(self):
        return (self.x.key, self.J)

    def format(self) -> str:
        S = self.x.system
        return f"({S.format_word(self.x.word)}, {S.format_subset(self.J)})"


def _conjugates_into(system: CoxeterSystem, x: Element, I: int, J: int) -> bool:
    """x^{-1} alpha_i lies in the root subsystem of J for every i in I."""
    inv = x.inverse()
    for i in bits(I):
        if system.root_support(inv.perm[i]) & ~J:
            return False
    return True


def chambers_brute_force(system: CoxeterSystem, I: int) -> list[CombinatorialChamber]:
    """Direct search over all group elements and all J with |J| = |I|."""
    k = popcount(I)
    subsets = [sum(1 << g for g in c) for c in combinations(range(system.rank), k)]
    npos = system.npos
    out = []
    for x in system.elements:
        for J in subsets:
            if any(x.perm[j] >= npos for j in bits(J)):
                continue
            if _conjugates_into(system, x, I, J) and _conjugates_into(system, x.inverse(), J, I):
                if not coset_of(system, I, x, J).is_core():
                    raise CoxeterError("chamber condition did not give a core coset")
                out.append(CombinatorialChamber(x, J))
    return out


def chambers_from_cosets(system: CoxeterSystem, I: int, poset: CorePoset | None = None) -> list[CombinatorialChamber]:
    if poset is None:
        poset = enumerate_core(system, I, side="right")
    return [CombinatorialChamber(p.min, p.right) for p in poset.elements]


def chambers(system: CoxeterSystem, I: int, cross_check: bool = True) -> list[CombinatorialChamber]:
    """All I-chambers, from the core cosets; with ``cross_check`` the brute
    force search runs too and the two must agree."""
    found = chambers_from_cosets(system, I)
    if cross_check:
        brute = chambers_brute_force(system, I)
        if {c.key for c in brute} != {c.key for c in found}:
            raise CoxeterError("chamber enumerations disagree")
    return found


def chamber_to_coset(system: CoxeterSystem, I: int, c: CombinatorialChamber) -> DoubleCoset:
    return coset_of(system, I, c.x, c.J)


def chamber_adjacency(system: CoxeterSystem, I: int) -> tuple[list[CombinatorialChamber], list[tuple[int, int]]]:
    """Chambers and the pairs differing by one reduced atom on the right."""
    poset = enumerate_core(system, I, side="right")
    cells = chambers_from_cosets(system, I, poset)
    edges = sorted(poset.cover_pairs())
    return cells, edges


def adjacency_dot(cells, edges) -> str:
    lines = ["graph chambers {"]
    for i, c in enumerate(cells):
        lines.append(f'  c{i} [label="{c.format()}"];')
    for a, b in edges:
        lines.append(f"  c{a} -- c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def subset_classes(system: CoxeterSystem) -> list[list[int]]:
    """Classes of subsets under K ~ L when an atomic (K, L)-coset exists."""
    parent = list(range(1 << system.rank))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for L in range(1 << system.rank):
        for a in atom_cosets_from(system, L):
            ra, rb = find(a.left), find(a.right)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for L in range(1 << system.rank):
        groups.setdefault(find(L), []).append(L)
    return sorted(groups.values())


def class_census(system: CoxeterSystem, cls) -> tuple[int, int]:
    """(number of chambers over I in the class by direct search, number of
    core cosets with right set in the class).  Both count the core morphisms
    inside the class, so they must agree."""
    chambers_total = sum(len(chambers_brute_force(system, I)) for I in cls)
    cosets_total = sum(len(enumerate_core(system, J)) for J in cls)
    return chambers_total, cosets_total
