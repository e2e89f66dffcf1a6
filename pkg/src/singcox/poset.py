"""Posets of core cosets with one side fixed, their weak orders, rex counts,
the anti-involution, and the corank-2 dihedral classification."""
from __future__ import annotations

from dataclasses import dataclass, field

from .atoms import Atom, AtomicExpression, atom_cosets_to, rotation_sequence
from .coxeter import CoxeterSystem, bits, popcount
from .cosets import DoubleCoset, compose, coset_of, identity_coset
from .errors import BarMismatch, Budget, CoxeterError, WrongCorank


@dataclass
class CorePoset:
    """Core cosets with one side fixed.

    ``side == "left"`` means the left set varies and the right set is
    ``fixed``; covers are (lower, upper, atom) with upper = atom . lower.
    ``side == "right"`` is the mirror image: upper = lower . atom.
    """

    system: CoxeterSystem
    fixed: int
    side: str
    elements: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    covers: list = field(default_factory=list)
    rex_counts: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: DoubleCoset) -> bool:
        return p.key in self.index

    def position(self, p: DoubleCoset) -> int:
        return self.index[p.key]

    @property
    def max_length(self) -> int:
        return max(self.levels)

    @property
    def histogram(self) -> list[int]:
        out = [0] * (self.max_length + 1)
        for lv in self.levels:
            out[lv] += 1
        return out

    def rex_counts_by_length(self) -> list[list[int]]:
        out = [[] for _ in range(self.max_length + 1)]
        for lv, c in zip(self.levels, self.rex_counts):
            out[lv].append(c)
        return [sorted(x) for x in out]

    @property
    def maximum(self) -> DoubleCoset:
        top = [i for i, lv in enumerate(self.levels) if lv == self.max_length]
        if len(top) != 1:
            raise CoxeterError("poset has no unique maximum")
        return self.elements[top[0]]

    def upper_covers(self, i: int) -> list[int]:
        return [b for a, b, _ in self.covers if a == i]

    def cover_pairs(self) -> set[tuple[int, int]]:
        return {(a, b) for a, b, _ in self.covers}

    def below(self, i: int, j: int) -> bool:
        """i <= j in the weak order (reachability along covers)."""
        if i == j:
            return True
        up = {}
        for a, b, _ in self.covers:
            up.setdefault(a, set()).add(b)
        stack, seen = [i], {i}
        while stack:
            for b in up.get(stack.pop(), ()):
                if b == j:
                    return True
                if b not in seen and self.levels[b] < self.levels[j]:
                    seen.add(b)
                    stack.append(b)
        return False

    def label(self, i: int) -> str:
        p = self.elements[i]
        S = self.system
        return f"{S.format_subset(p.left)} {S.format_word(p.min.word)} {S.format_subset(p.right)}"

    def to_json(self) -> dict:
        return {
            "fixed": self.system.subset_names(self.fixed),
            "side": self.side,
            "size": len(self),
            "max_length": self.max_length,
            "histogram": self.histogram,
            "elements": [
                {"id": i, "coset": p.to_json(), "length": lv, "rex_count": c}
                for i, (p, lv, c) in enumerate(zip(self.elements, self.levels, self.rex_counts))
            ],
            "covers": [[a, b] for a, b, _ in self.covers],
        }

    def hasse_dot(self) -> str:
        """Hasse diagram aligned by atomic length, vertices labelled by rex counts."""
        lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=circle];"]
        for lv in range(self.max_length + 1):
            ids = [i for i, x in enumerate(self.levels) if x == lv]
            nodes = " ".join(f"n{i};" for i in ids)
            lines.append(f"  {{ rank=same; {nodes} }}")
        for i, c in enumerate(self.rex_counts):
            lines.append(f'  n{i} [label="{c}", tooltip="{self.label(i)}"];')
        for a, b in sorted(self.cover_pairs()):
            lines.append(f"  n{a} -> n{b} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _enumerate_left(system: CoxeterSystem, J: int, budget: int) -> CorePoset:
    poset = CorePoset(system, J, "left")
    start = identity_coset(system, J)
    poset.elements.append(start)
    poset.levels.append(0)
    poset.rex_counts.append(1)
    poset.index[start.key] = 0
    frontier = [0]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for qi in frontier:
            q = poset.elements[qi]
            for a in atom_cosets_to(system, q.left):
                p, reduced = compose(a.coset, q)
                if not reduced:
                    continue
                pi = poset.index.get(p.key)
                if pi is None:
                    if len(poset.elements) >= budget:
                        raise Budget(f"core poset exceeds {budget} elements")
                    pi = len(poset.elements)
                    poset.index[p.key] = pi
                    poset.elements.append(p)
                    poset.levels.append(level)
                    poset.rex_counts.append(0)
                    nxt.append(pi)
                elif poset.levels[pi] != level:
                    raise CoxeterError("atomic lengths are not well defined")
                poset.covers.append((qi, pi, a))
                poset.rex_counts[pi] += poset.rex_counts[qi]
        frontier = nxt
    return poset


def enumerate_core(system: CoxeterSystem, J: int, side: str = "left", budget: int = 1_000_000) -> CorePoset:
    """All core cosets with right set J (side="left", left set varies) or
    with left set J (side="right", right set varies)."""
    if side in ("left", "left-varying"):
        return _enumerate_left(system, J, budget)
    if side not in ("right", "right-varying"):
        raise ValueError("side must be 'left' or 'right'")
    mirror = _enumerate_left(system, J, budget)
    poset = CorePoset(system, J, "right")
    for p, lv, c in zip(mirror.elements, mirror.levels, mirror.rex_counts):
        q = p.inverse()
        poset.index[q.key] = len(poset.elements)
        poset.elements.append(q)
        poset.levels.append(lv)
        poset.rex_counts.append(c)
    poset.covers = [(a, b, atom.inverse()) for a, b, atom in mirror.covers]
    return poset


def maximal_element(system: CoxeterSystem, J: int) -> DoubleCoset:
    """W_{bar J} w_S W_J."""
    return coset_of(system, system.bar_mask(J), system.longest, J)


def complement_in_maximum(p: DoubleCoset) -> DoubleCoset:
    """The unique (bar J, I)-coset q with q * p = p_J reduced."""
    S = p.system
    top = maximal_element(S, p.right)
    q = coset_of(S, top.left, S.multiply(top.min, p.min.inverse()), p.left)
    r, reduced = compose(q, p)
    if not reduced or r != top:
        raise CoxeterError(f"no reduced complement of {p!r} in the maximum")
    return q


def anti_involution(system: CoxeterSystem, J: int, poset: CorePoset | None = None) -> dict[int, int]:
    """p -> (the q with q * p = p_J)^-1 as a map on poset positions; needs bar(J) = J."""
    if system.bar_mask(J) != J:
        raise BarMismatch(f"bar({system.format_subset(J)}) != {system.format_subset(J)}")
    if poset is None:
        poset = enumerate_core(system, J)
    out = {}
    for i, p in enumerate(poset.elements):
        out[i] = poset.position(complement_in_maximum(p).inverse())
    return out


def anti_isomorphism(system: CoxeterSystem, J: int, poset: CorePoset | None = None, target: CorePoset | None = None):
    """p -> q with q * p = p_J, from the left-varying poset for J to the
    right-varying poset for bar(J); returned as a map on positions."""
    if poset is None:
        poset = enumerate_core(system, J)
    if target is None:
        target = enumerate_core(system, system.bar_mask(J), side="right")
    return {i: target.position(complement_in_maximum(p)) for i, p in enumerate(poset.elements)}


# corank two


@dataclass
class DihedralClassification:
    J: int
    s1: int
    s2: int
    d: int
    m: int
    words: list  # dihedral words (tuples over "a", "b")
    expressions: list  # matching atomic expressions (the E(i, k))
    cosets: list
    braid: tuple  # (E(1, m), E(2, m))

    def bijection(self) -> dict:
        """Dihedral element (named by one reduced word) -> core coset; the
        longest element appears once, under its word ending in "a"."""
        out = {}
        for w, c in zip(self.words, self.cosets):
            out.setdefault(c.key, ("".join(w) or "e", c))
        return dict(out.values())


def dihedral_expression(system: CoxeterSystem, J: int, last: int, k: int) -> AtomicExpression:
    """The unique atomic expression of atomic length k ending in [J last, J]
    with no inverse-adjacent pair of atoms, built right to left."""
    if k == 0:
        return AtomicExpression(system, J, ())
    atoms: list[Atom] = []
    R = J
    forbidden_down = None
    # first (rightmost) atom removes ``last``
    K = R | (1 << last)
    a = Atom(system, K, system.bar(last, K))
    atoms.append(a)
    forbidden_down = a.s
    R = a.left
    while len(atoms) < k:
        choices = [b for b in atom_cosets_to(system, R) if b.t != forbidden_down]
        if len(choices) != 1:
            raise CoxeterError("corank-2 atom choice is not unique")
        a = choices[0]
        atoms.append(a)
        forbidden_down = a.s
        R = a.left
    return AtomicExpression.from_atoms(system, reversed(atoms))


def dihedral_classify(system: CoxeterSystem, J: int) -> DihedralClassification:
    rest = system.full & ~J
    if popcount(rest) != 2:
        raise WrongCorank(f"|S \\ J| = {popcount(rest)}, expected 2")
    s1, s2 = bits(rest)
    d = rotation_sequence(system, system.full, system.bar(s1), s2).d
    m = d + 1
    words = [()]
    exprs = [AtomicExpression(system, J, ())]
    for k in range(1, m + 1):
        for last, letter in ((s1, "a"), (s2, "b")):
            other = "b" if letter == "a" else "a"
            words.append(tuple(reversed([letter if j % 2 == 0 else other for j in range(k)])))
            exprs.append(dihedral_expression(system, J, last, k))
    cosets = []
    for e in exprs:
        ev = e.evaluate()
        if not ev.reduced:
            raise CoxeterError(f"{e.format()} is not reduced")
        cosets.append(ev.coset)
    if cosets[-1] != cosets[-2]:
        raise CoxeterError("the two longest expressions differ")
    return DihedralClassification(J, s1, s2, d, m, words, exprs, cosets, (exprs[-2], exprs[-1]))
