"""Rewriting on singular and atomic expressions: rex graphs, Matsumoto
checks, the reduction engine for admissible expressions, and the
nilCoxeter (zero on non-reduced) composition."""
from __future__ import annotations

import hashlib
import weakref
from collections import deque
from dataclasses import dataclass, field

from .atoms import AtomicExpression, atomic_braid, atomic_factorize, switchback
from .coxeter import CoxeterSystem, bits
from .cosets import DoubleCoset, SingularExpression, compose, evaluate, evaluate_prefixes
from .errors import Budget, CoxeterError, MismatchedMiddle, NotAdmissible, NotCore

DEFAULT_BUDGET = 1_000_000


# atomic braid moves


_BRAID_CACHE: "weakref.WeakKeyDictionary[CoxeterSystem, dict]" = weakref.WeakKeyDictionary()


def _braids_from(system: CoxeterSystem, L: int, x: int) -> list:
    """(lhs, rhs) for every braid relation whose left side starts at [L + x ...],
    one per generator z outside L and x; trivial relations are dropped."""
    cache = _BRAID_CACHE.get(system)
    if cache is None:
        cache = _BRAID_CACHE[system] = {}
    rels = cache.get((L, x))
    if rels is None:
        rels = []
        for z in bits(system.full & ~L & ~(1 << x)):
            S = L | (1 << x) | (1 << z)
            lhs, rhs = atomic_braid(system, S, z, system.bar(x, S))
            if lhs.ups != rhs.ups:
                rels.append((lhs, rhs))
        cache[(L, x)] = rels
    return rels


def braid_moves(expr: AtomicExpression):
    """Yield (position, relation lhs, relation rhs, new expression) for every applicable move."""
    S = expr.system
    ups = expr.ups
    bounds = expr.boundaries
    n = len(ups)
    for j in range(n):
        for lhs, rhs in _braids_from(S, bounds[j], ups[j]):
            k = len(lhs.ups)
            if j + k <= n and ups[j : j + k] == lhs.ups:
                yield j, lhs, rhs, AtomicExpression(S, expr.start, ups[:j] + rhs.ups + ups[j + k :])


def neighbors(expr: AtomicExpression) -> list[tuple[AtomicExpression, str]]:
    """Expressions one atomic braid move away, labelled by relation and position."""
    out = []
    for j, lhs, rhs, new in braid_moves(expr):
        out.append((new, f"atomic-braid@{j}"))
    return out


@dataclass
class RexGraph:
    root: DoubleCoset
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (i, j, label)
    index: dict = field(default_factory=dict)
    formatter: object = None

    def add_vertex(self, v) -> int:
        i = self.index.get(v)
        if i is None:
            i = len(self.vertices)
            self.index[v] = i
            self.vertices.append(v)
        return i

    def __len__(self) -> int:
        return len(self.vertices)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = [[] for _ in self.vertices]
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for b in adj[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == len(self.vertices)

    def labels(self) -> list[str]:
        fmt = self.formatter or (lambda v: v.format())
        return [fmt(v) for v in self.vertices]

    def to_dot(self) -> str:
        lines = ["graph rex {"]
        labels = self.labels()
        for lab in labels:
            lines.append(f'  "{vertex_id(lab)}" [label="{lab}"];')
        for a, b, lab in self.edges:
            lines.append(f'  "{vertex_id(labels[a])}" -- "{vertex_id(labels[b])}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        labels = self.labels()
        return {
            "coset": self.root.to_json(),
            "vertices": [{"id": vertex_id(lab), "expression": lab} for lab in sorted(labels)],
            "edges": sorted(
                ({"source": vertex_id(labels[a]), "target": vertex_id(labels[b]), "label": lab} for a, b, lab in self.edges),
                key=lambda e: (e["source"], e["target"], e["label"]),
            ),
        }


def vertex_id(label: str) -> str:
    return hashlib.sha1(label.encode()).hexdigest()[:12]


def _closure(start_vertices, step, root, budget: int) -> RexGraph:
    graph = RexGraph(root)
    queue = deque()
    for v in start_vertices:
        if v not in graph.index:
            graph.add_vertex(v)
            queue.append(v)
    seen_edges = set()
    while queue:
        v = queue.popleft()
        i = graph.index[v]
        for w, label in step(v):
            if w not in graph.index:
                if len(graph.vertices) >= budget:
                    raise Budget(f"rex graph exceeds {budget} vertices")
                graph.add_vertex(w)
                queue.append(w)
            j = graph.index[w]
            key = (min(i, j), max(i, j), label)
            if key not in seen_edges:
                seen_edges.add(key)
                graph.edges.append((i, j, label))
    return graph


def atomic_rex_graph(p: DoubleCoset, budget: int = DEFAULT_BUDGET, check: bool = True) -> RexGraph:
    """Closure of the atomic reduced expressions of p under atomic braid moves.

    The closure starts from one factorization; every other factorization
    (one per choice of first generator) must land in it, and all widths must
    agree, otherwise CoxeterError is raised.
    """
    if not p.is_core():
        raise NotCore(repr(p))
    S = p.system
    first = atomic_factorize(p)
    graph = _closure([first], neighbors, p, budget)
    if check:
        for s in bits(S.descents(p.max, "left") & ~p.left):
            alt = atomic_factorize(p, s)
            if alt not in graph.index:
                raise CoxeterError(f"factorization {alt.format()} is not braid-connected to {first.format()}")
        widths = {v.width for v in graph.vertices}
        if len(widths) > 1:
            raise CoxeterError(f"rex widths differ: {sorted(widths)}")
    return graph


def atomic_length(p: DoubleCoset) -> int:
    if not p.is_core():
        raise NotCore(repr(p))
    return len(atomic_factorize(p))


def enumerate_atomic_rexes(p: DoubleCoset, budget: int = DEFAULT_BUDGET) -> set[AtomicExpression]:
    """All atomic reduced expressions of p by exhaustive search (no braid moves).

    A reduced prefix q of a rex of p has its maximal element as a prefix of
    p's maximal element in the right weak order; that prunes the search.
    The reachable suffixes depend only on (current right set, current
    maximal element), so they are memoized on that state.
    """
    S = p.system
    top = p.max
    top_len = top.length
    inv_top = top.inverse()
    memo: dict = {}
    count = [0]

    def suffixes(L: int, cur_max) -> list[tuple]:
        key = (L, cur_max.key)
        if key in memo:
            return memo[key]
        out = [()] if (L == p.right and cur_max == top) else []
        wL = S.longest_element(L)
        low = S.multiply(cur_max, wL)
        for x in bits(S.full & ~L):
            K = L | (1 << x)
            wK = S.longest_element(K)
            if S.multiply(low, wK).length != low.length + wK.length:
                continue
            new_max = S.star(cur_max, wK)
            if S.multiply(inv_top, new_max).length != top_len - new_max.length:
                continue
            y = S.bar(x, K)
            out.extend((x,) + rest for rest in suffixes(K & ~(1 << y), new_max))
        count[0] += len(out)
        if count[0] > budget:
            raise Budget("too many reduced expressions")
        memo[key] = out
        return out

    return {AtomicExpression(S, p.left, ups) for ups in suffixes(p.left, S.longest_element(p.left))}


# singular rex graph


def singular_moves(system: CoxeterSystem, expr: SingularExpression):
    """(new expression, label) for upup, downdown and switchback moves in both directions."""
    steps = expr.steps
    subsets = expr.subsets
    n = len(steps)
    out = []
    for j in range(n - 1):
        (a_sign, a), (b_sign, b) = steps[j], steps[j + 1]
        if a_sign == b_sign and a != b:
            label = "upup" if a_sign == 1 else "downdown"
            out.append((SingularExpression(expr.start, steps[:j] + ((b_sign, b), (a_sign, a)) + steps[j + 2 :]), f"{label}@{j}"))
    for j in range(n - 1):
        (a_sign, s), (b_sign, t) = steps[j], steps[j + 1]
        if a_sign == 1 and b_sign == -1:
            Sl = subsets[j + 1]
            if t != system.bar(s, Sl):
                _, rhs = switchback(system, Sl, s, t)
                out.append((SingularExpression(expr.start, steps[:j] + rhs.steps + steps[j + 2 :]), f"switchback@{j}"))
        if a_sign == -1 and b_sign == 1:
            # right-hand side of a switchback [I_0 - u_1 + u_0 ...] with u_0 = t here
            Sl = subsets[j] | (1 << t)
            for tt in bits(Sl):
                if tt == system.bar(t, Sl):
                    continue
                lhs, rhs = switchback(system, Sl, t, tt)
                k = len(rhs.steps)
                if steps[j : j + k] == rhs.steps:
                    out.append((SingularExpression(expr.start, steps[:j] + lhs.steps + steps[j + k :]), f"switchback@{j}"))
    return out


def singular_rex_graph(system: CoxeterSystem, expr: SingularExpression, budget: int = DEFAULT_BUDGET) -> RexGraph:
    """Closure of a reduced singular expression under the generating relations."""
    ev = evaluate(system, expr)
    if not ev.reduced:
        raise CoxeterError("singular rex graph needs a reduced expression")

    def step(v):
        return singular_moves(system, v)

    graph = _closure([expr], step, ev.coset, budget)
    graph.formatter = lambda v: v.format(system)
    return graph


# reduction of admissible expressions


@dataclass(frozen=True)
class Move:
    kind: str  # "braid", "quadratic" or "cubic"
    position: int
    before: str
    after: str


def _search_rex_ending(expr: AtomicExpression, last_down: int, budget: int, suffix: AtomicExpression | None = None):
    """Breadth-first braid search from a reduced expression to one whose
    final atom removes ``last_down``.  Returns the expression and the moves,
    with the moves shown on ``expr + suffix``."""
    if expr.downs and expr.downs[-1] == last_down:
        return expr, []

    def show(v):
        return (v + suffix).format() if suffix is not None else v.format()

    parent = {expr: None}
    queue = deque([expr])
    while queue:
        v = queue.popleft()
        for j, lhs, rhs, w in braid_moves(v):
            if w in parent:
                continue
            parent[w] = (v, j)
            if len(parent) > budget:
                raise Budget("braid search budget exceeded")
            if w.downs[-1] == last_down:
                path = []
                cur = w
                while parent[cur] is not None:
                    prev, pos = parent[cur]
                    path.append(Move("braid", pos, show(prev), show(cur)))
                    cur = prev
                return w, path[::-1]
            queue.append(w)
    raise CoxeterError(f"no braid-equivalent expression of {expr.format()} ends in -{expr.system.names[last_down]}")


def _first_bad_atom(expr: AtomicExpression):
    ev = evaluate(expr.system, expr.singular())
    if ev.reduced:
        return None
    return ev.first_bad // 2


def _shrink_step(expr: AtomicExpression, m: int, budget: int, trace: list):
    """Atoms 0..m-1 are reduced and atom m breaks reducedness.  Braid the
    prefix until a quadratic or cubic move applies, then apply it.

    Returns (shrunk expression, expression just before the shrinking move,
    index k of the inverse pair a_k a_{k+1} in that expression)."""
    S = expr.system
    prefix = expr.slice(0, m)
    tail = expr.slice(m, len(expr))
    s_m, t_m = tail.ups[0], tail.downs[0]
    M, moves = _search_rex_ending(prefix, s_m, budget, tail)
    trace.extend(moves)
    if s_m == t_m:
        # [+s -s +s -s] -> [+s -s]
        cur = M + tail
        new = AtomicExpression(S, cur.start, cur.ups[: m - 1] + cur.ups[m:])
        trace.append(Move("quadratic", m - 1, cur.format(), new.format()))
        return new, cur, m - 1
    # [+s -t +t -s +s -t] -> [+s -t]
    head, last = M.slice(0, m - 1), M.slice(m - 1, m)
    N, moves = _search_rex_ending(head, t_m, budget, last + tail)
    trace.extend(moves)
    cur = N + last + tail
    new = AtomicExpression(S, cur.start, cur.ups[: m - 2] + cur.ups[m:])
    trace.append(Move("cubic", m - 2, cur.format(), new.format()))
    return new, cur, m - 2


def apply_shrinking_moves(expr: AtomicExpression) -> tuple[AtomicExpression, list[Move]]:
    """Apply quadratic [+s -s +s -s] -> [+s -s] and cubic
    [+s -t +t -s +s -t] -> [+s -t] wherever they literally occur, leftmost first."""
    S = expr.system
    trace: list[Move] = []
    cur = expr
    while True:
        ups, downs = cur.ups, cur.downs
        for k in range(len(ups) - 1):
            s, t = ups[k], downs[k]
            if s == t and ups[k + 1] == s and downs[k + 1] == s:
                new = AtomicExpression(S, cur.start, ups[:k] + ups[k + 1 :])
                trace.append(Move("quadratic", k, cur.format(), new.format()))
                break
            if (
                s != t
                and k + 2 < len(ups)
                and (ups[k + 1], downs[k + 1], ups[k + 2], downs[k + 2]) == (t, s, s, t)
            ):
                new = AtomicExpression(S, cur.start, ups[:k] + ups[k + 2 :])
                trace.append(Move("cubic", k, cur.format(), new.format()))
                break
        else:
            return cur, trace
        cur = new


def reduce_admissible(expr: AtomicExpression, budget: int = 100_000) -> tuple[AtomicExpression, list[Move]]:
    """Rewrite an admissible atomic expression into a reduced one using atomic
    braid moves (both ways) and shrinking quadratic and cubic moves only."""
    if not expr.is_admissible():
        raise NotAdmissible(expr.format())
    trace: list[Move] = []
    cur = expr
    while True:
        m = _first_bad_atom(cur)
        if m is None:
            return cur, trace
        cur, _, _ = _shrink_step(cur, m, budget, trace)


# nilCoxeter composition


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO = _Zero()


@dataclass(frozen=True)
class NilMorphism:
    """The Demazure-type morphism attached to a double coset."""

    coset: DoubleCoset

    @property
    def source(self) -> int:
        return self.coset.left

    @property
    def target(self) -> int:
        return self.coset.right


def nil_compose(ms) -> "NilMorphism | _Zero":
    """Compose left to right; zero as soon as a composition is not reduced."""
    ms = list(ms)
    if not ms:
        raise ValueError("nothing to compose")
    if any(m is ZERO for m in ms):
        for a, b in zip(ms, ms[1:]):
            if a is not ZERO and b is not ZERO and a.target != b.source:
                raise MismatchedMiddle("boundary subsets do not match")
        return ZERO
    cur = ms[0].coset
    zero = False
    for m in ms[1:]:
        cur, reduced = compose(cur, m.coset)
        zero = zero or not reduced
    return ZERO if zero else NilMorphism(cur)


def presentation_witness(atoms, budget: int = 100_000) -> tuple[AtomicExpression, int]:
    """For a chain of atoms composing to zero, a braid-equivalent chain with
    a_k a_{k+1} = a a^{-1}.  Accepts an AtomicExpression or a list of atoms."""
    if isinstance(atoms, AtomicExpression):
        expr = atoms
    else:
        atoms = list(atoms)
        expr = AtomicExpression.from_atoms(atoms[0].system, atoms)
    if nil_compose([NilMorphism(a.coset) for a in expr.atoms]) is not ZERO:
        raise CoxeterError("composition is not zero")
    k = _inverse_pair(expr)
    if k is not None:
        return expr, k
    prefixes = evaluate_prefixes(expr.system, expr.singular())
    n = len(expr)
    # longest admissible prefix a_0 .. a_k
    k = 0
    while k + 1 < n and prefixes[2 * (k + 2)][0].is_core():
        k += 1
    q, rest = expr.slice(0, k + 1), expr.slice(k + 1, n)
    m = _first_bad_atom(q)
    if m is None:
        # q reduced, q a_{k+1} not core: make q end with the inverse of a_{k+1}
        Q, _ = _search_rex_ending(q, rest.ups[0], budget)
        return Q + rest, k
    _, before, pos = _shrink_step(q, m, budget, [])
    return before + rest, pos


def _inverse_pair(expr: AtomicExpression):
    ups, downs = expr.ups, expr.downs
    for k in range(len(ups) - 1):
        if ups[k + 1] == downs[k] and downs[k + 1] == ups[k]:
            return k
    return None
