"""Exact arithmetic in the ring Z[2cos(pi/N)].

Elements are integer coefficient tuples in the power basis 1, z, ..., z^(D-1)
of z = 2cos(pi/N), reduced modulo the minimal polynomial of z.  This is all
the arithmetic a finite Coxeter system needs: every off-diagonal entry of the
doubled bilinear form is -2cos(pi/m) for a label m dividing N.
"""
from __future__ import annotations

import math
from functools import lru_cache, reduce


def _poly_trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p: list[int], q: list[int]) -> list[int]:
    n = max(len(p), len(q))
    return _poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _poly_scale_shift(p: list[int], c: int, k: int) -> list[int]:
    return [0] * k + [c * a for a in p]


def _chebyshev_sums(degree: int) -> list[list[int]]:
    """Integer polynomials C_k with C_k(z + 1/z) = z^k + z^-k."""
    cs = [[2], [0, 1]]
    for k in range(2, degree + 1):
        cs.append(_poly_add(_poly_scale_shift(cs[k - 1], 1, 1), _poly_scale_shift(cs[k - 2], -1, 0)))
    return cs[: degree + 1]


@lru_cache(maxsize=None)
def minimal_polynomial(n: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of 2cos(pi/n), lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (2, 1)  # z = -2
    from sympy import Poly, cyclotomic_poly, symbols

    x = symbols("x")
    # Phi_{2n}(z) = z^d * P(z + 1/z) with d = deg/2; Phi is palindromic.
    phi = [int(c) for c in reversed(Poly(cyclotomic_poly(2 * n, x), x).all_coeffs())]
    d = (len(phi) - 1) // 2
    cs = _chebyshev_sums(d)
    result = [phi[d]]
    for k in range(1, d + 1):
        result = _poly_add(result, [phi[d + k] * c for c in cs[k]])
    return tuple(result)


class CyclotomicRealRing:
    """The ring Z[2cos(pi/n)] with coefficient-tuple elements."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.minpoly = minimal_polynomial(n)
        self.degree = len(self.minpoly) - 1
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)

    @classmethod
    def for_labels(cls, labels) -> "CyclotomicRealRing":
        # m = 2 and m = 3 contribute 0 and 1, which are already integers
        big = [m for m in labels if m >= 4]
        return cls(reduce(math.lcm, big, 1))

    def __repr__(self) -> str:
        return f"CyclotomicRealRing({self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclotomicRealRing) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("ring", self.n))

    def reduce(self, coeffs) -> tuple[int, ...]:
        c = list(coeffs)
        mp = self.minpoly
        deg = self.degree
        for i in range(len(c) - 1, deg - 1, -1):
            a = c[i]
            if a:
                for j in range(deg):
                    c[i - deg + j] -= a * mp[j]
                c[i] = 0
        c = c[:deg]
        return tuple(c) + (0,) * (deg - len(c))

    def from_int(self, k: int) -> tuple[int, ...]:
        return (k,) + (0,) * (self.degree - 1)

    def add(self, a, b) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b) -> tuple[int, ...]:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a) -> tuple[int, ...]:
        return tuple(-x for x in a)

    def mul(self, a, b) -> tuple[int, ...]:
        out = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self.reduce(out)

    def two_cos(self, m: int) -> tuple[int, ...]:
        """2cos(pi/m) as a ring element; m must divide n (or be 2 or 3)."""
        if m == 2:
            return self.zero
        if m == 3:
            return self.one
        if self.n % m:
            raise ValueError(f"2cos(pi/{m}) is not in Z[2cos(pi/{self.n})]")
        # 2cos(k x) = C_k(2cos x) with k = n / m
        z = self.reduce([0, 1])
        prev, cur = self.from_int(2), z
        for _ in range(self.n // m - 1):
            prev, cur = cur, self.sub(self.mul(z, cur), prev)
        return cur

    def to_float(self, a) -> float:
        z = 2 * math.cos(math.pi / self.n)
        return sum(c * z**i for i, c in enumerate(a))

    def scalar(self, coeffs) -> "RingScalar":
        return RingScalar(self, self.reduce(coeffs))


class RingScalar:
    """Operator-friendly wrapper around a ring element (used at API edges)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CyclotomicRealRing, coeffs) -> None:
        self.ring = ring
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, RingScalar):
            if other.ring != self.ring:
                raise ValueError("ring mismatch")
            return other.coeffs
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingScalar(self.ring, self.ring.add(self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingScalar(self.ring, self.ring.sub(self.coeffs, o))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RingScalar(self.ring, self.ring.neg(self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingScalar(self.ring, self.ring.mul(self.coeffs, o))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return o is not NotImplemented and self.coeffs == o

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __float__(self) -> float:
        return self.ring.to_float(self.coeffs)

    def __repr__(self) -> str:
        return f"RingScalar({self.ring.n}, {self.coeffs})"
