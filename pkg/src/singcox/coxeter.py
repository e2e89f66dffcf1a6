"""Finite Coxeter systems realized as permutations of their root systems.

Roots live in the geometric representation with exact coordinates in
Z[2cos(pi/N)].  Group elements are permutations of the (finite) root set;
an element is determined by the images of the simple roots, which is what
we hash on.  Whole-group enumeration is lazy, so systems such as E8 can be
worked with one element at a time.

Generators are the integers 0..rank-1 in the user-supplied order; subsets of
generators are bitmasks.
"""
from __future__ import annotations

import json
import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import InvalidMatrix, NonFinite, NotAGenerator
from .ring import CyclotomicRealRing

INF = math.inf

DEFAULT_CAP = 1_200_000
DEFAULT_ROOT_CAP = 20_000


def bits(mask: int):
    """Yield the generators in a subset mask, in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class CoxeterMatrix:
    labels: tuple[tuple, ...]
    names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise InvalidMatrix("rank must be positive")
        if len(self.names) != n or len(set(self.names)) != n:
            raise InvalidMatrix("need one distinct name per generator")
        for name in self.names:
            if not name or re.search(r"[\s,+\-{}\[\]()*∘]", name):
                raise InvalidMatrix(f"bad generator name {name!r}")
        for i, row in enumerate(self.labels):
            if len(row) != n:
                raise InvalidMatrix("matrix is not square")
            for j, m in enumerate(row):
                if m != self.labels[j][i]:
                    raise InvalidMatrix(f"matrix is not symmetric at ({i}, {j})")
                if i == j:
                    if m != 1:
                        raise InvalidMatrix("diagonal entries must be 1")
                elif not (m == INF or (isinstance(m, int) and m >= 2)):
                    raise InvalidMatrix(f"off-diagonal label {m!r} at ({i}, {j})")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @classmethod
    def from_labels(cls, labels, names=None) -> "CoxeterMatrix":
        rows = tuple(tuple(INF if m == 0 or m == INF else int(m) for m in row) for row in labels)
        if names is None:
            names = tuple(f"s{i + 1}" for i in range(len(rows)))
        return cls(rows, tuple(names))

    @classmethod
    def from_edges(cls, rank: int, edges: dict, names=None) -> "CoxeterMatrix":
        """Build from {(i, j): m} with 1-based indices; unlisted pairs commute."""
        rows = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), m in edges.items():
            rows[i - 1][j - 1] = rows[j - 1][i - 1] = m
        return cls.from_labels(rows, names)

    @classmethod
    def from_json(cls, data) -> "CoxeterMatrix":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        try:
            rank = int(data["rank"])
            labels = data["labels"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidMatrix(f"bad matrix file: {exc}") from None
        if len(labels) != rank:
            raise InvalidMatrix("rank does not match labels")
        return cls.from_labels(labels, data.get("names"))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "labels": [[0 if m == INF else m for m in row] for row in self.labels],
            "names": list(self.names),
        }

    def reordered(self, order) -> "CoxeterMatrix":
        """Same system with generators listed in ``order`` (names or indices)."""
        idx = [self.names.index(g) if isinstance(g, str) else int(g) for g in order]
        if sorted(idx) != list(range(self.rank)):
            raise InvalidMatrix("generator order must be a permutation")
        return CoxeterMatrix(
            tuple(tuple(self.labels[i][j] for j in idx) for i in idx),
            tuple(self.names[i] for i in idx),
        )


_PRESET_RE = re.compile(r"^([A-IA-Z])(\d+)$|^I2\((\d+)\)$")


def preset(name: str) -> CoxeterMatrix:
    """Coxeter matrix of a finite irreducible type, with Bourbaki labelling."""
    m = _PRESET_RE.match(name.strip())
    if not m:
        raise InvalidMatrix(f"unknown preset {name!r}")
    if m.group(3) is not None:
        k = int(m.group(3))
        if k < 2:
            raise InvalidMatrix("I2(m) needs m >= 2")
        return CoxeterMatrix.from_edges(2, {(1, 2): k})
    kind, n = m.group(1), int(m.group(2))
    path = {(i, i + 1): 3 for i in range(1, n)}
    if kind == "A" and n >= 1:
        return CoxeterMatrix.from_edges(n, path)
    if kind in "BC" and n >= 2:
        path[(n - 1, n)] = 4
        return CoxeterMatrix.from_edges(n, path)
    if kind == "D" and n >= 4:
        edges = {(i, i + 1): 3 for i in range(1, n - 1)}
        edges[(n - 2, n)] = 3
        return CoxeterMatrix.from_edges(n, edges)
    if kind == "E" and n in (6, 7, 8):
        edges = {(1, 3): 3, (2, 4): 3}
        edges.update({(i, i + 1): 3 for i in range(3, n)})
        return CoxeterMatrix.from_edges(n, edges)
    if kind == "F" and n == 4:
        return CoxeterMatrix.from_edges(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3})
    if kind == "G" and n == 2:
        return CoxeterMatrix.from_edges(2, {(1, 2): 6})
    if kind == "H" and n in (2, 3, 4):
        edges = dict(path)
        edges[(n - 1, n)] = 5
        return CoxeterMatrix.from_edges(n, edges)
    raise InvalidMatrix(f"unknown preset {name!r}")


def preset_aliases(name: str) -> dict[str, str]:
    """Extra generator names accepted on the command line ("c" = D-type hub)."""
    m = _PRESET_RE.match(name.strip())
    if m and m.group(1) == "D":
        return {"c": f"s{int(m.group(2)) - 2}"}
    return {}


class Element:
    """A group element, stored as a permutation of root indices."""

    __slots__ = ("system", "perm", "key", "_length", "_inverse", "_word")

    def __init__(self, system: "CoxeterSystem", perm: tuple[int, ...]) -> None:
        self.system = system
        self.perm = perm
        self.key = perm[: system.rank]
        self._length = None
        self._inverse = None
        self._word = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.key == other.key and self.system is other.system

    def __hash__(self) -> int:
        return hash(self.key)

    def __mul__(self, other: "Element") -> "Element":
        return self.system.multiply(self, other)

    def __repr__(self) -> str:
        return f"Element({self.system.format_word(self.word)})"

    @property
    def length(self) -> int:
        if self._length is None:
            npos = self.system.npos
            self._length = sum(1 for v in self.perm[:npos] if v >= npos)
        return self._length

    @property
    def word(self) -> tuple[int, ...]:
        """ShortLex-minimal reduced word."""
        if self._word is None:
            self._word = self.system._shortlex_word(self)
        return self._word

    def inverse(self) -> "Element":
        if self._inverse is None:
            inv = [0] * len(self.perm)
            for i, v in enumerate(self.perm):
                inv[v] = i
            self._inverse = Element(self.system, tuple(inv))
            self._inverse._inverse = self
        return self._inverse

    def is_right_descent(self, s: int) -> bool:
        return self.perm[s] >= self.system.npos

    def is_left_descent(self, s: int) -> bool:
        return self.inverse().perm[s] >= self.system.npos


class CoxeterSystem:
    """A finite Coxeter system.

    Construction computes the root system and the simple reflections.  The
    full element list is built on first access of :attr:`elements`.
    """

    def __init__(self, matrix: CoxeterMatrix, cap: int = DEFAULT_CAP, root_cap: int = DEFAULT_ROOT_CAP) -> None:
        for row in matrix.labels:
            if INF in row:
                raise NonFinite("matrix has an infinite label")
        self.matrix = matrix
        self.cap = cap
        self.rank = matrix.rank
        self.names = matrix.names
        self.full = (1 << self.rank) - 1
        labels = {m for row in matrix.labels for m in row if m != 1}
        self.ring = CyclotomicRealRing.for_labels(labels)
        self._build_roots(root_cap)
        self._longest_cache: dict[int, Element] = {}
        self._bar_cache: dict[tuple[int, int], int] = {}
        self._aliases: dict[str, int] = {}

    # construction

    def _build_roots(self, root_cap: int) -> None:
        n = self.rank
        R = self.ring
        twocos = [[R.two_cos(self.matrix.labels[i][j]) if i != j else None for j in range(n)] for i in range(n)]

        def reflect(i, root):
            new = R.neg(root[i])
            for j in range(n):
                if j != i and any(root[j]):
                    new = R.add(new, R.mul(twocos[i][j], root[j]))
            return root[:i] + (new,) + root[i + 1 :]

        simple = []
        for i in range(n):
            simple.append(tuple(R.one if j == i else R.zero for j in range(n)))
        positive = list(simple)
        index = {r: k for k, r in enumerate(positive)}
        queue = deque(positive)
        while queue:
            root = queue.popleft()
            for i in range(n):
                if root == simple[i]:
                    continue
                img = reflect(i, root)
                if img not in index:
                    if len(positive) >= root_cap:
                        raise NonFinite(f"more than {root_cap} positive roots")
                    index[img] = len(positive)
                    positive.append(img)
                    queue.append(img)
        npos = len(positive)
        self.npos = npos
        self.nroots = 2 * npos
        self.roots = positive + [tuple(R.neg(c) for c in r) for r in positive]
        root_index = {r: k for k, r in enumerate(self.roots)}
        self.root_index = root_index
        gens = []
        for i in range(n):
            gens.append(tuple(root_index[reflect(i, r)] for r in self.roots))
        self._gen_perms = gens
        self.identity = Element(self, tuple(range(self.nroots)))
        self.generators = [Element(self, p) for p in gens]

    # names and subsets

    def add_aliases(self, aliases: dict[str, str]) -> None:
        for alias, target in aliases.items():
            self._aliases[alias] = self.names.index(target)

    def gen(self, name) -> int:
        if isinstance(name, int):
            if 0 <= name < self.rank:
                return name
            raise NotAGenerator(name)
        name = name.strip()
        if name in self.names:
            return self.names.index(name)
        if name in self._aliases:
            return self._aliases[name]
        if name.isdigit() and 1 <= int(name) <= self.rank:
            return int(name) - 1
        raise NotAGenerator(f"unknown generator {name!r}")

    def mask(self, gens) -> int:
        if isinstance(gens, int):
            return gens
        if isinstance(gens, str):
            gens = [g for g in re.split(r"[,\s{}]+", gens) if g]
        m = 0
        for g in gens:
            m |= 1 << self.gen(g)
        return m

    def subset_names(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def format_subset(self, mask: int) -> str:
        return "{" + ",".join(self.subset_names(mask)) + "}"

    def format_word(self, word) -> str:
        return "*".join(self.names[s] for s in word) if word else "e"

    # element arithmetic

    def element(self, word=()) -> Element:
        perm = self.identity.perm
        for s in word:
            g = self._gen_perms[self.gen(s)]
            perm = tuple(perm[i] for i in g)
        return Element(self, perm)

    def multiply(self, x: Element, y: Element) -> Element:
        xp = x.perm
        return Element(self, tuple(xp[i] for i in y.perm))

    def right_mul_gen(self, x: Element, s: int) -> Element:
        xp = x.perm
        return Element(self, tuple(xp[i] for i in self._gen_perms[s]))

    def left_mul_gen(self, s: int, x: Element) -> Element:
        g = self._gen_perms[s]
        return Element(self, tuple(g[i] for i in x.perm))

    def star(self, x: Element, y: Element) -> Element:
        """Demazure product: fold the letters of y onto x, skipping descents."""
        npos = self.npos
        perm = x.perm
        for s in y.word:
            if perm[s] < npos:
                perm = tuple(perm[i] for i in self._gen_perms[s])
        return Element(self, perm)

    def star_many(self, *xs: Element) -> Element:
        out = self.identity
        for x in xs:
            out = self.star(out, x)
        return out

    def is_reduced_product(self, x: Element, y: Element) -> bool:
        return self.multiply(x, y).length == x.length + y.length

    def descents(self, x: Element, side: str = "right") -> int:
        if side == "left":
            x = x.inverse()
        elif side != "right":
            raise ValueError("side must be 'left' or 'right'")
        npos = self.npos
        return sum(1 << s for s in range(self.rank) if x.perm[s] >= npos)

    def _shortlex_word(self, x: Element) -> tuple[int, ...]:
        npos = self.npos
        v = x.inverse().perm
        word = []
        while True:
            for s in range(self.rank):
                if v[s] >= npos:
                    word.append(s)
                    v = tuple(v[i] for i in self._gen_perms[s])
                    break
            else:
                return tuple(word)

    def longest_element(self, mask: int) -> Element:
        """The longest element w_K of the parabolic subgroup W_K."""
        w = self._longest_cache.get(mask)
        if w is None:
            npos = self.npos
            perm = self.identity.perm
            gens = list(bits(mask))
            grew = True
            while grew:
                grew = False
                for s in gens:
                    if perm[s] < npos:
                        perm = tuple(perm[i] for i in self._gen_perms[s])
                        grew = True
            w = Element(self, perm)
            self._longest_cache[mask] = w
        return w

    @property
    def longest(self) -> Element:
        return self.longest_element(self.full)

    def conjugate_generator(self, w: Element, s: int):
        """The generator t with w s w^-1 = t, or None if w s w^-1 is not simple."""
        r = w.perm[s]
        if r < self.rank:
            return r
        if self.npos <= r < self.npos + self.rank:
            return r - self.npos
        return None

    def bar(self, s: int, mask: int | None = None) -> int:
        """w_K s w_K for s in K (K defaults to the whole generating set)."""
        if mask is None:
            mask = self.full
        key = (s, mask)
        b = self._bar_cache.get(key)
        if b is None:
            if not (mask >> s) & 1:
                raise NotAGenerator(f"{self.names[s]} is not in {self.format_subset(mask)}")
            b = self.conjugate_generator(self.longest_element(mask), s)
            if b is None or not (mask >> b) & 1:
                raise NotAGenerator("conjugate by longest element is not a generator")
            self._bar_cache[key] = b
        return b

    def bar_mask(self, mask: int, within: int | None = None) -> int:
        return sum(1 << self.bar(s, within) for s in bits(mask))

    def root_support(self, r: int) -> int:
        return sum(1 << j for j, c in enumerate(self.roots[r]) if any(c))

    # enumeration

    @cached_property
    def elements(self) -> list[Element]:
        """All elements in breadth-first (length-graded) order."""
        elems = [self.identity]
        index = {self.identity.key: 0}
        frontier = [self.identity]
        gens = self._gen_perms
        rank = self.rank
        while frontier:
            nxt = []
            for x in frontier:
                xp = x.perm
                for g in gens:
                    key = tuple(xp[g[i]] for i in range(rank))
                    if key not in index:
                        if len(elems) >= self.cap:
                            raise NonFinite(f"group has more than {self.cap} elements")
                        y = Element(self, tuple(xp[i] for i in g))
                        index[key] = len(elems)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        self._index = index
        return elems

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_id(self, x: Element) -> int:
        self.elements
        return self._index[x.key]

    def parabolic_elements(self, mask: int) -> list[Element]:
        """All elements of W_K by breadth-first search inside the parabolic."""
        seen = {self.identity.key: self.identity}
        frontier = [self.identity]
        gens = list(bits(mask))
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.right_mul_gen(x, s)
                    if y.key not in seen:
                        if len(seen) >= self.cap:
                            raise NonFinite("parabolic subgroup exceeds cap")
                        seen[y.key] = y
                        nxt.append(y)
            frontier = nxt
        return list(seen.values())

    def parabolic_order(self, mask: int) -> int:
        return len(self.parabolic_elements(mask))


def build_system(matrix: CoxeterMatrix, cap: int = DEFAULT_CAP) -> CoxeterSystem:
    """Build a system and enumerate the whole group (raises NonFinite past cap)."""
    system = CoxeterSystem(matrix, cap=cap)
    system.elements
    return system


def load_system(spec: str, order=None, cap: int = DEFAULT_CAP, eager: bool = False) -> CoxeterSystem:
    """A system from a preset name or a JSON matrix file path."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        matrix = CoxeterMatrix.from_json(path)
        aliases = {}
    else:
        matrix = preset(spec)
        aliases = preset_aliases(spec)
    if order:
        matrix = matrix.reordered(order)
    system = build_system(matrix, cap) if eager else CoxeterSystem(matrix, cap=cap)
    system.add_aliases({a: t for a, t in aliases.items() if t in system.names and a not in system.names})
    return system
