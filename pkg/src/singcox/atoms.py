"""Atoms, rotation sequences, switchback and atomic braid relations, and
atomic factorization of core cosets."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .coxeter import CoxeterSystem, bits
from .cosets import (
    DoubleCoset,
    SingularExpression,
    coset_of,
    evaluate,
    evaluate_prefixes,
    identity_coset,
    is_reduced,
    parse_expression,
)
from .errors import BadDescent, BarObstruction, MalformedExpression, MismatchedMiddle, NotCore


@dataclass(frozen=True)
class Atom:
    """The atomic coset [K\\s + s - t] with t = w_K s w_K."""

    system: CoxeterSystem
    K: int
    s: int

    def __post_init__(self):
        if not (self.K >> self.s) & 1:
            raise MalformedExpression("atom generator must lie in K")

    @property
    def t(self) -> int:
        return self.system.bar(self.s, self.K)

    @property
    def left(self) -> int:
        return self.K & ~(1 << self.s)

    @property
    def right(self) -> int:
        return self.K & ~(1 << self.t)

    @cached_property
    def coset(self) -> DoubleCoset:
        S = self.system
        return coset_of(S, self.left, S.longest_element(self.K), self.right)

    def expression(self) -> "AtomicExpression":
        return AtomicExpression(self.system, self.left, (self.s,))

    def inverse(self) -> "Atom":
        return Atom(self.system, self.K, self.t)

    def format(self) -> str:
        return f"a({self.system.format_subset(self.K)},{self.system.names[self.s]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Atom) and (self.K, self.s) == (other.K, other.s)

    def __hash__(self) -> int:
        return hash((self.K, self.s))


def atom(system: CoxeterSystem, K: int, s: int) -> Atom:
    return Atom(system, K, s)


class AtomicExpression:
    """A composition of atoms, stored as its starting subset and the
    generator added by each atom (the removed one is forced by the atom)."""

    __slots__ = ("system", "start", "ups", "_downs")

    def __init__(self, system: CoxeterSystem, start: int, ups=()) -> None:
        self.system = system
        self.start = start
        self.ups = tuple(ups)
        self._downs = None

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomicExpression) and (self.start, self.ups) == (other.start, other.ups)

    def __hash__(self) -> int:
        return hash((self.start, self.ups))

    def __len__(self) -> int:
        return len(self.ups)

    def __repr__(self) -> str:
        return f"AtomicExpression({self.format()})"

    @property
    def downs(self) -> tuple[int, ...]:
        if self._downs is None:
            S = self.system
            L = self.start
            downs = []
            for x in self.ups:
                if (L >> x) & 1:
                    raise MalformedExpression(f"{S.names[x]} already in {S.format_subset(L)}")
                K = L | (1 << x)
                y = S.bar(x, K)
                downs.append(y)
                L = K & ~(1 << y)
            self._downs = tuple(downs)
        return self._downs

    @property
    def boundaries(self) -> list[int]:
        """The subsets L_0, L_1, ..., L_m between atoms."""
        out = [self.start]
        for x, y in zip(self.ups, self.downs):
            out.append((out[-1] | (1 << x)) & ~(1 << y))
        return out

    @property
    def end(self) -> int:
        return self.boundaries[-1]

    @property
    def width(self) -> int:
        return 2 * len(self.ups)

    @property
    def atoms(self) -> list[Atom]:
        return [Atom(self.system, L | (1 << x), x) for L, x in zip(self.boundaries, self.ups)]

    def singular(self) -> SingularExpression:
        steps = []
        for x, y in zip(self.ups, self.downs):
            steps += [(1, x), (-1, y)]
        return SingularExpression(self.start, tuple(steps))

    def evaluate(self):
        return evaluate(self.system, self.singular())

    def is_reduced(self) -> bool:
        return is_reduced(self.system, self.singular())

    def is_admissible(self) -> bool:
        prefixes = evaluate_prefixes(self.system, self.singular())
        return all(c.is_core() for c, _ in prefixes[::2])

    def reversed(self) -> "AtomicExpression":
        """The expression read backwards: the inverse coset."""
        return AtomicExpression(self.system, self.end, tuple(reversed(self.downs)))

    def __add__(self, other: "AtomicExpression") -> "AtomicExpression":
        if self.end != other.start:
            raise MismatchedMiddle("atomic expressions do not concatenate")
        return AtomicExpression(self.system, self.start, self.ups + other.ups)

    def slice(self, i: int, j: int) -> "AtomicExpression":
        return AtomicExpression(self.system, self.boundaries[i], self.ups[i:j])

    def format(self) -> str:
        return self.singular().format(self.system)

    def format_chain(self) -> str:
        if not self.ups:
            return f"id({self.system.format_subset(self.start)})"
        return "∘".join(a.format() for a in self.atoms)

    @classmethod
    def from_singular(cls, system: CoxeterSystem, expr: SingularExpression) -> "AtomicExpression":
        steps = expr.steps
        if len(steps) % 2 or any(steps[k][0] != (1 if k % 2 == 0 else -1) for k in range(len(steps))):
            raise MalformedExpression("atomic expressions alternate +s -t")
        out = cls(system, expr.start, tuple(s for _, s in steps[::2]))
        if out.downs != tuple(s for _, s in steps[1::2]):
            raise MalformedExpression("a step pair is not atomic")
        return out

    @classmethod
    def from_atoms(cls, system: CoxeterSystem, atoms, start: int | None = None) -> "AtomicExpression":
        atoms = list(atoms)
        if not atoms:
            if start is None:
                raise MalformedExpression("empty atom chain needs a starting subset")
            return cls(system, start, ())
        for a, b in zip(atoms, atoms[1:]):
            if a.right != b.left:
                raise MismatchedMiddle("atoms do not compose")
        return cls(system, atoms[0].left, tuple(a.s for a in atoms))


_ATOM_RE = re.compile(r"a\(\s*\{([^{}]*)\}\s*,\s*([^\s()]+)\s*\)")


def parse_atomic(system: CoxeterSystem, text: str) -> AtomicExpression:
    """Parse either "[K +a -b ...]" or an atom chain "a({..},s)∘a({..},s)"."""
    text = text.strip()
    if text.startswith("["):
        return AtomicExpression.from_singular(system, parse_expression(system, text))
    m = re.fullmatch(r"id\(\s*\{([^{}]*)\}\s*\)", text)
    if m:
        return AtomicExpression(system, system.mask(m.group(1)), ())
    pieces = [p for p in re.split(r"\s*[∘*]\s*", text) if p]
    atoms = []
    for piece in pieces:
        m = _ATOM_RE.fullmatch(piece)
        if not m:
            raise MalformedExpression(f"cannot parse atom {piece!r}")
        atoms.append(Atom(system, system.mask(m.group(1)), system.gen(m.group(2))))
    return AtomicExpression.from_atoms(system, atoms)


# rotation sequences


class RotationSequence:
    """u_i for (S, s, t): u_0 = s, u_{-1} = bar(t), u_{i+1} = w_{I_i} u_{i-1} w_{I_i}
    with I_i = S \\ u_i.  Terms are computed on demand in both directions."""

    def __init__(self, system: CoxeterSystem, S: int, s: int, t: int) -> None:
        for g in (s, t):
            if not (S >> g) & 1:
                raise BarObstruction(f"{system.names[g]} is not in {system.format_subset(S)}")
        if s == system.bar(t, S):
            raise BarObstruction(f"s = bar(t) for s={system.names[s]}, t={system.names[t]}")
        self.system = system
        self.S = S
        self.s = s
        self.t = t
        self._u = {0: s, -1: system.bar(t, S)}
        self._d = None

    def __getitem__(self, i: int) -> int:
        u = self._u
        bar = self.system.bar
        S = self.S
        while i not in u:
            hi = max(u)
            lo = min(u)
            if i > hi:
                u[hi + 1] = bar(u[hi - 1], S & ~(1 << u[hi]))
            else:
                u[lo - 1] = bar(u[lo + 1], S & ~(1 << u[lo]))
        return u[i]

    def window(self, lo: int, hi: int) -> dict[int, int]:
        return {i: self[i] for i in range(lo, hi + 1)}

    def I(self, i: int) -> int:
        return self.S & ~(1 << self[i])

    def L(self, i: int) -> int:
        return self.I(i) & ~(1 << self[i - 1])

    def atom(self, i: int) -> Atom:
        """[L_i + u_{i-1} - u_{i+1}]."""
        return Atom(self.system, self.I(i), self[i - 1])

    def chain(self, k: int) -> AtomicExpression:
        """[L_0 + u_{-1} - u_1 + u_0 - ... + u_{k-1} - u_{k+1}]: atoms 0..k."""
        return AtomicExpression(self.system, self.L(0), tuple(self[i - 1] for i in range(k + 1)))

    @property
    def d(self) -> int:
        if self._d is None:
            S = self.system
            expr = self.chain(0)
            steps = list(expr.singular().steps)
            k = 0
            limit = 2 * S.longest.length + 4
            while k <= limit:
                nxt = k + 1
                steps += [(1, self[nxt - 1]), (-1, self[nxt + 1])]
                if not is_reduced(S, SingularExpression(expr.start, tuple(steps))):
                    break
                k = nxt
            self._d = k
        return self._d


_ROTATION_CACHE: dict = {}


def rotation_sequence(system: CoxeterSystem, S: int, s: int, t: int, lo: int | None = None, hi: int | None = None):
    """Memoized rotation sequence; with a window, returns {i: u_i} for lo <= i <= hi."""
    key = (id(system), S, s, t)
    seq = _ROTATION_CACHE.get(key)
    if seq is None or seq.system is not system:
        seq = RotationSequence(system, S, s, t)
        _ROTATION_CACHE[key] = seq
    if lo is None and hi is None:
        return seq
    return seq.window(lo if lo is not None else -1, hi if hi is not None else seq.d + 1)


def switchback_depth(system: CoxeterSystem, S: int, s: int, t: int) -> int:
    return rotation_sequence(system, S, s, t).d


def switchback(system: CoxeterSystem, S: int, s: int, t: int) -> tuple[SingularExpression, SingularExpression]:
    """([I_0 + s - t], [I_0 - u_1 + u_0 - u_2 + u_1 ... - u_d + u_{d-1}])."""
    u = rotation_sequence(system, S, s, t)
    d = u.d
    I0 = S & ~(1 << s)
    lhs = SingularExpression(I0, ((1, s), (-1, t)))
    steps = []
    for i in range(1, d + 1):
        steps += [(-1, u[i]), (1, u[i - 1])]
    return lhs, SingularExpression(I0, tuple(steps))


def atomic_braid(system: CoxeterSystem, S: int, s: int, t: int) -> tuple[AtomicExpression, AtomicExpression]:
    """The two width-(2d+2) atomic expressions of the braid relation for (S, s, t)."""
    u = rotation_sequence(system, S, s, t)
    d = u.d
    K = u.L(0)
    lhs = AtomicExpression(system, K, tuple(u[i] for i in range(-1, d)))
    rhs = AtomicExpression(system, K, tuple(system.bar(u[i], S) for i in range(d + 1, 0, -1)))
    return lhs, rhs


# factorization


def _strip_left_descents_outside(system: CoxeterSystem, p: DoubleCoset) -> int:
    return system.descents(p.max, "left") & ~p.left


def atomic_factorize(p: DoubleCoset, s: int | None = None) -> AtomicExpression:
    """A reduced atomic expression of the core coset p beginning with [I + s - ...].

    When s is omitted the smallest admissible first generator is used.
    """
    S = p.system
    if not p.is_core():
        raise NotCore(repr(p))
    if s is not None:
        if (p.left >> s) & 1 or not p.max.is_left_descent(s):
            raise BadDescent(f"{S.names[s]} is not a left descent of the maximal element outside the left set")
    start = p.left
    ups = []
    q = p
    guard = S.longest.length + 1
    while True:
        choices = _strip_left_descents_outside(S, q)
        if not choices:
            break
        if s is None:
            s = (choices & -choices).bit_length() - 1
        Is = q.left | (1 << s)
        n = coset_of(S, Is, q.max, q.right)
        t = S.bar(s, Is)
        if (n.left_red >> t) & 1:
            raise NotCore("factorization step failed; coset is not core")
        ups.append(s)
        q = DoubleCoset(S, Is & ~(1 << t), n.min, q.right)
        s = None
        guard -= 1
        if guard < 0:
            raise NotCore("factorization did not terminate")
    if q.left != q.right or q.min.length:
        raise NotCore(repr(p))
    return AtomicExpression(S, start, tuple(ups))


def atomic_factorize_right(p: DoubleCoset, s: int | None = None) -> AtomicExpression:
    """A reduced atomic expression of the core coset p ending with [... + u - s]."""
    return atomic_factorize(p.inverse(), s).reversed()


def atom_cosets_from(system: CoxeterSystem, L: int):
    """All atoms with left set L, one per generator outside L."""
    return [Atom(system, L | (1 << x), x) for x in bits(system.full & ~L)]


def atom_cosets_to(system: CoxeterSystem, R: int):
    """All atoms with right set R."""
    out = []
    for y in bits(system.full & ~R):
        K = R | (1 << y)
        out.append(Atom(system, K, system.bar(y, K)))
    return out


def identity_expression(system: CoxeterSystem, I: int) -> AtomicExpression:
    return AtomicExpression(system, I, ())


def trivial_coset(system: CoxeterSystem, I: int) -> DoubleCoset:
    return identity_coset(system, I)
