"""Independent pure-Python tower arithmetic used as a test oracle.

Elements are nested tuples of coefficients (little-endian in both layers),
with nothing shared with the package except the index convention.
"""

from __future__ import annotations


class PrimePoly:
    """F_p[X] / (f) with f monic of degree n; elements are length-n tuples."""

    def __init__(self, p, f):
        self.p, self.f, self.n = p, list(f), len(f) - 1

    def zero(self):
        return (0,) * self.n

    def one(self):
        return (1,) + (0,) * (self.n - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p, n = self.p, self.n
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(len(prod) - 1, n - 1, -1):
            c = prod[d]
            if c:
                for i in range(n + 1):
                    prod[d - n + i] = (prod[d - n + i] - c * self.f[i]) % p
        return tuple(prod[:n])

    def elements(self):
        # Index order: little-endian base p.
        return [tuple((i // self.p**k) % self.p for k in range(self.n)) for i in range(self.p**self.n)]

    def index(self, a):
        return sum(x * self.p**k for k, x in enumerate(a))


class Tower:
    """F_q[Y] / (g) over a :class:`PrimePoly` F_q."""

    def __init__(self, inner: PrimePoly, g):
        self.F, self.g, self.m = inner, list(g), len(g) - 1
        self.q = inner.p**inner.n
        self._inner = inner.elements()

    def elem(self, idx):
        return tuple(self._inner[(idx // self.q**k) % self.q] for k in range(self.m))

    def index(self, a):
        return sum(self.F.index(c) * self.q**k for k, c in enumerate(a))

    def add(self, a, b):
        return tuple(self.F.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        F, m = self.F, self.m
        prod = [F.zero()] * (2 * m - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        g = [self._inner[c] for c in self.g]
        for d in range(len(prod) - 1, m - 1, -1):
            c = prod[d]
            if any(c):
                for i in range(m + 1):
                    prod[d - m + i] = F.add(prod[d - m + i], F.neg(F.mul(c, g[i])))
        return tuple(prod[:m])

    def pow(self, a, e):
        out = tuple([self.F.one()] + [self.F.zero()] * (self.m - 1))
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def imul(self, x, y):
        return self.index(self.mul(self.elem(x), self.elem(y)))

    def iadd(self, x, y):
        return self.index(self.add(self.elem(x), self.elem(y)))

    def ipow(self, x, e):
        return self.index(self.pow(self.elem(x), e))


def _is_field(mul, size):
    """Brute force: no zero divisors among nonzero elements."""
    return all(mul(a, b) != 0 for a in range(1, size) for b in range(a, size))


def canonical_prime_modulus(p, n):
    """Smallest monic irreducible of degree n over F_p (lower coefficients as a base-p integer)."""
    if n == 1:
        return [0, 1]
    for low in range(p**n):
        f = [(low // p**k) % p for k in range(n)] + [1]
        R = PrimePoly(p, f)
        els = R.elements()
        if _is_field(lambda a, b: R.index(R.mul(els[a], els[b])), p**n):
            return f
    raise AssertionError("no irreducible")


def canonical_tower_modulus(p, n, m):
    inner = PrimePoly(p, canonical_prime_modulus(p, n))
    q = p**n
    for low in range(q**m):
        g = [(low // q**k) % q for k in range(m)] + [1]
        T = Tower(inner, g)
        if _is_field(T.imul, q**m):
            return g
    raise AssertionError("no irreducible")


def reference_tower(p, n, m) -> Tower:
    return Tower(PrimePoly(p, canonical_prime_modulus(p, n)), canonical_tower_modulus(p, n, m))


def multiplicative_order(T: Tower, x: int) -> int:
    one = T.index(T.pow(T.elem(0), 0))
    acc, k = x, 1
    while acc != one:
        acc = T.imul(acc, x)
        k += 1
    return k
