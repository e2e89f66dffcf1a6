"""Parabolic double cosets and singular expressions.

A double coset W_I w W_J is stored by its left set, its minimal element and
its right set.  Everything else (maximal element, redundancies) is derived
from the minimal element through root permutations, so nothing here needs
the whole group to be enumerated.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .coxeter import CoxeterSystem, Element, bits
from .errors import MalformedExpression, MismatchedMiddle


class DoubleCoset:

    def __init__(self, system: CoxeterSystem, left: int, minimal: Element, right: int, maximal: Element | None = None):
        self.system = system
        self.left = left
        self.min = minimal
        self.right = right
        self._max = maximal
        self._lred = None
        self._rred = None

    @property
    def key(self):
        return (self.left, self.min.key, self.right)

    def __eq__(self, other) -> bool:
        return isinstance(other, DoubleCoset) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        S = self.system
        return f"DoubleCoset({S.format_subset(self.left)}, {S.format_word(self.min.word)}, {S.format_subset(self.right)})"

    @property
    def max(self) -> Element:
        if self._max is None:
            S = self.system
            self._max = S.star(S.star(S.longest_element(self.left), self.min), S.longest_element(self.right))
        return self._max

    @property
    def left_red(self) -> int:
        if self._lred is None:
            S = self.system
            red = 0
            for j in bits(self.right):
                i = S.conjugate_generator(self.min, j)
                if i is not None and (self.left >> i) & 1:
                    red |= 1 << i
            self._lred = red
        return self._lred

    @property
    def right_red(self) -> int:
        if self._rred is None:
            S = self.system
            inv = self.min.inverse()
            red = 0
            for i in bits(self.left):
                j = S.conjugate_generator(inv, i)
                if j is not None and (self.right >> j) & 1:
                    red |= 1 << j
            self._rred = red
        return self._rred

    def redundancy(self, side: str = "left") -> int:
        if side == "left":
            return self.left_red
        if side == "right":
            return self.right_red
        raise ValueError("side must be 'left' or 'right'")

    def is_core(self) -> bool:
        return self.left_red == self.left and self.right_red == self.right

    def core(self) -> "DoubleCoset":
        if self.is_core():
            return self
        return DoubleCoset(self.system, self.left_red, self.min, self.right_red)

    def inverse(self) -> "DoubleCoset":
        """The (J, I)-coset of inverses."""
        return DoubleCoset(self.system, self.right, self.min.inverse(), self.left, self.max.inverse())

    def is_identity(self) -> bool:
        return self.left == self.right and self.min.length == 0

    def size(self) -> int:
        """Number of group elements, by the Howlett count."""
        S = self.system
        return S.parabolic_order(self.left) * S.parabolic_order(self.right) // S.parabolic_order(self.left_red)

    def to_json(self) -> dict:
        S = self.system
        return {
            "left": S.subset_names(self.left),
            "min_word": [S.names[s] for s in self.min.word],
            "right": S.subset_names(self.right),
        }

    @classmethod
    def from_json(cls, system: CoxeterSystem, data: dict) -> "DoubleCoset":
        return coset_of(system, system.mask(data["left"]), system.element(data["min_word"]), system.mask(data["right"]))


def coset_of(system: CoxeterSystem, I: int, w: Element, J: int) -> DoubleCoset:
    """The (I, J)-coset containing w."""
    npos = system.npos
    left = list(bits(I))
    right = list(bits(J))
    changed = True
    while changed:
        changed = False
        for s in right:
            if w.perm[s] >= npos:
                w = system.right_mul_gen(w, s)
                changed = True
        for s in left:
            if w.inverse().perm[s] >= npos:
                w = system.left_mul_gen(s, w)
                changed = True
    return DoubleCoset(system, I, w, J)


def identity_coset(system: CoxeterSystem, I: int, J: int | None = None) -> DoubleCoset:
    """The coset W_I e W_J (J defaults to I); for I ⊆ J or J ⊆ I this is a one-step coset."""
    if J is None:
        J = I
    return DoubleCoset(system, I, system.identity, J)


def redundancy(p: DoubleCoset, side: str = "left") -> int:
    return p.redundancy(side)


def is_core(p: DoubleCoset) -> bool:
    return p.is_core()


def core_of(p: DoubleCoset) -> DoubleCoset:
    return p.core()


def compose(p: DoubleCoset, q: DoubleCoset) -> tuple[DoubleCoset, bool]:
    """Star composition p * q and whether it is reduced."""
    if p.right != q.left:
        raise MismatchedMiddle(f"{p!r} does not compose with {q!r}")
    S = p.system
    wJ = S.longest_element(p.right)
    a = S.multiply(p.max, wJ)
    reduced = S.multiply(a, q.max).length == a.length + q.max.length
    top = S.star(p.max, q.max)
    return coset_of(S, p.left, top, q.right), reduced


_SIGNS = {"+": 1, "-": -1, "−": -1, "–": -1}


@dataclass(frozen=True)
class SingularExpression:
    """[I_0, I_1, ..., I_m] with consecutive subsets differing by one generator.

    Stored as the starting subset and a tuple of signed steps (+1/-1, s).
    """

    start: int
    steps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        cur = self.start
        for sign, s in self.steps:
            present = (cur >> s) & 1
            if sign == 1 and present:
                raise MalformedExpression(f"cannot add generator {s}: already present")
            if sign == -1 and not present:
                raise MalformedExpression(f"cannot remove generator {s}: not present")
            if sign not in (1, -1):
                raise MalformedExpression("step sign must be +1 or -1")
            cur ^= 1 << s

    @classmethod
    def from_subsets(cls, subsets) -> "SingularExpression":
        subsets = list(subsets)
        if not subsets:
            raise MalformedExpression("empty expression")
        steps = []
        for a, b in zip(subsets, subsets[1:]):
            diff = a ^ b
            if diff == 0 or diff & (diff - 1):
                raise MalformedExpression("consecutive subsets must differ by exactly one generator")
            s = diff.bit_length() - 1
            steps.append((1 if b & diff else -1, s))
        return cls(subsets[0], tuple(steps))

    @cached_property
    def subsets(self) -> tuple[int, ...]:
        out = [self.start]
        for _, s in self.steps:
            out.append(out[-1] ^ (1 << s))
        return tuple(out)

    @property
    def end(self) -> int:
        return self.subsets[-1]

    @property
    def width(self) -> int:
        return len(self.steps)

    def __add__(self, other: "SingularExpression") -> "SingularExpression":
        if self.end != other.start:
            raise MismatchedMiddle("expressions do not concatenate")
        return SingularExpression(self.start, self.steps + other.steps)

    def reversed(self) -> "SingularExpression":
        return SingularExpression(self.end, tuple((-sign, s) for sign, s in reversed(self.steps)))

    def format(self, system: CoxeterSystem) -> str:
        parts = [system.format_subset(self.start)]
        parts += [("+" if sign == 1 else "-") + system.names[s] for sign, s in self.steps]
        return "[" + " ".join(parts) + "]"


def parse_expression(system: CoxeterSystem, text: str) -> SingularExpression:
    """Parse "[{s1,s3} +s2 -s2]", "[s1,s3+s2-s2]" or a subset list "[{s1},{s1,s2}]"."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise MalformedExpression(f"expression must be bracketed: {text!r}")
    body = body[1:-1].strip()
    try:
        if body.startswith("{") and re.fullmatch(r"(\{[^{}]*\}\s*,?\s*)+", body):
            return SingularExpression.from_subsets(system.mask(g) for g in re.findall(r"\{([^{}]*)\}", body))
        m = re.search(r"[+\-−–]", body)
        head, tail = (body, "") if m is None else (body[: m.start()], body[m.start() :])
        head = head.strip().strip("{}").replace("∅", "")
        start = system.mask(head)
        steps = []
        for sign, name in re.findall(r"([+\-−–])\s*([^\s+\-−–]+)", tail):
            steps.append((_SIGNS[sign], system.gen(name)))
        if re.sub(r"[+\-−–]\s*[^\s+\-−–]+", "", tail).strip():
            raise MalformedExpression(f"cannot parse steps in {text!r}")
        return SingularExpression(start, tuple(steps))
    except MalformedExpression:
        raise
    except Exception as exc:
        raise MalformedExpression(f"cannot parse {text!r}: {exc}") from None


class Evaluation:
    """Result of folding a singular expression: the coset, reducedness and
    the index of the first non-reduced step (None when reduced)."""

    __slots__ = ("coset", "reduced", "first_bad")

    def __init__(self, coset: DoubleCoset, reduced: bool, first_bad):
        self.coset = coset
        self.reduced = reduced
        self.first_bad = first_bad

    def __iter__(self):
        return iter((self.coset, self.reduced))


def _fold(system: CoxeterSystem, expr: SingularExpression, stop_at_bad: bool = False):
    """Yield (step index, current max, reduced-so-far) along the fold."""
    top = system.longest_element(expr.start)
    cur = expr.start
    ok = True
    for k, (sign, s) in enumerate(expr.steps):
        new = cur ^ (1 << s)
        if sign == 1:
            low = system.multiply(top, system.longest_element(cur))
            wK = system.longest_element(new)
            if system.multiply(low, wK).length != low.length + wK.length:
                if ok:
                    ok = False
                    yield k, None, False
                    if stop_at_bad:
                        return
            top = system.star(top, wK)
        cur = new
        yield k, top, ok


def evaluate(system: CoxeterSystem, expr: SingularExpression) -> Evaluation:
    """Fold the expression by star composition, tracking reducedness."""
    top = system.longest_element(expr.start)
    first_bad = None
    for k, t, ok in _fold(system, expr):
        if t is None:
            first_bad = k
        else:
            top = t
    return Evaluation(coset_of(system, expr.start, top, expr.end), first_bad is None, first_bad)


def evaluate_prefixes(system: CoxeterSystem, expr: SingularExpression) -> list[tuple[DoubleCoset, bool]]:
    """Coset and reducedness of every prefix [I_0, ..., I_k], k = 0..m."""
    subsets = expr.subsets
    out = [(identity_coset(system, expr.start), True)]
    for k, t, ok in _fold(system, expr):
        if t is not None:
            out.append((coset_of(system, expr.start, t, subsets[k + 1]), ok))
    return out


def is_reduced(system: CoxeterSystem, expr: SingularExpression) -> bool:
    for _, t, ok in _fold(system, expr, stop_at_bad=True):
        if not ok:
            return False
    return True
