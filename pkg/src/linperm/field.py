"""Exact arithmetic in the tower F_p < F_q = F_{p^n} < F_{q^m}.

An element of the top field is stored as its canonical integer index.
Writing x = sum_j d_j Y^j (mod g_mod) with every d_j = sum_i c_ij X^i
(mod f_mod), the index is sum_j index(d_j) q^j where index(d_j) =
sum_i c_ij p^i.  Both layers are little-endian, so the subfield F_q sits
at indices 0 .. q-1 and embedding/projection is the identity on indices.

Two arithmetic paths exist.  The reference path multiplies coefficient
polynomials and reduces by the moduli; it is used to build the tables and
as an oracle in the tests.  The table path (log/exp for products, base-p
digits for sums) serves every hot loop, scalar or vectorised over numpy
index arrays.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Callable, Sequence

import numpy as np

DEFAULT_MAX_SIZE = 65536
MAX_SIZE_ENV = "LINPERM_MAX_SIZE"


class FieldError(ValueError):
    """Invalid field parameters or elements from different fields."""


class FieldSizeError(FieldError):
    """The requested field is larger than the configured table bound."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def max_size_from_env() -> int:
    raw = os.environ.get(MAX_SIZE_ENV)
    return int(raw) if raw else DEFAULT_MAX_SIZE


# ---------------------------------------------------------------------------
# Polynomials over a small field whose elements are the ints 0 .. s-1.
# Coefficient lists are little-endian; divisors are always monic.
# ---------------------------------------------------------------------------

Op = Callable[[int, int], int]


def _digits(k: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        k, r = divmod(k, base)
        out.append(r)
    return out


def _poly_rem(a: list[int], b: Sequence[int], add: Op, mul: Op, neg: Callable[[int], int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    for top in range(len(a) - 1, db - 1, -1):
        c = a[top]
        if c == 0:
            continue
        shift = top - db
        for i, bi in enumerate(b):
            if bi:
                a[shift + i] = add(a[shift + i], neg(mul(c, bi)))
    return a[:db]


def _is_irreducible(poly: Sequence[int], s: int, add: Op, mul: Op, neg: Callable[[int], int]) -> bool:
    # Trial division by every monic polynomial of degree <= deg/2.
    d = len(poly) - 1
    for e in range(1, d // 2 + 1):
        for k in range(s**e):
            divisor = _digits(k, s, e) + [1]
            if not any(_poly_rem(list(poly), divisor, add, mul, neg)):
                return False
    return True


def _canonical_irreducible(d: int, s: int, add: Op, mul: Op, neg: Callable[[int], int]) -> tuple[int, ...]:
    for k in range(s**d):
        poly = _digits(k, s, d) + [1]
        if _is_irreducible(poly, s, add, mul, neg):
            return tuple(poly)
    raise RuntimeError(f"no irreducible polynomial of degree {d} over a field of size {s}")


class _InnerReference:
    """Reference arithmetic in F_q = F_p[X]/(f_mod) on canonical indices."""

    def __init__(self, p: int, n: int, f_mod: Sequence[int]):
        self.p, self.n, self.q = p, n, p**n
        self.f_mod = tuple(f_mod)
        self._mul_cache: dict[tuple[int, int], int] | None = {} if self.q <= 256 else None

    def coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.n)

    def index(self, c: Sequence[int]) -> int:
        out = 0
        for ci in reversed(c):
            out = out * self.p + ci % self.p
        return out

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, scale = 0, 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * scale
            scale *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        cache = self._mul_cache
        if cache is not None:
            hit = cache.get((a, b))
            if hit is not None:
                return hit
        p, n = self.p, self.n
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if self.n == 1:
            # f_mod = X: F_p itself; the product already lives in prod[0].
            out = prod[0]
        else:
            out = self.index(
                _poly_rem(prod, self.f_mod, lambda u, v: (u + v) % p, lambda u, v: u * v % p, lambda u: -u % p)
            )
        if cache is not None:
            cache[(a, b)] = out
        return out


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldCtx:
    """Immutable description of the tower F_p < F_q < F_{q^m}.

    ``f_mod`` is a little-endian coefficient tuple over F_p (monic, degree n);
    ``g_mod`` is a little-endian tuple of F_q indices (monic, degree m).
    Build instances with :func:`make_field`.
    """

    p: int
    n: int
    m: int
    f_mod: tuple[int, ...]
    g_mod: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def size(self) -> int:
        return self.q**self.m

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, m={self.m})"

    def describe(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "size": self.size,
            "f_mod": list(self.f_mod),
            "g_mod": list(self.g_mod),
        }

    # -- reference (polynomial) arithmetic --------------------------------

    @cached_property
    def inner_ref(self) -> _InnerReference:
        return _InnerReference(self.p, self.n, self.f_mod)

    def coords(self, x: int) -> list[int]:
        """F_q coordinates (d_0, ..., d_{m-1}) of ``x`` in the power basis of Y."""
        return _digits(x, self.q, self.m)

    def from_coords(self, d: Sequence[int]) -> int:
        out = 0
        for dj in reversed(d):
            out = out * self.q + dj
        return out

    def coeffs(self, x: int) -> list[list[int]]:
        """Nested coefficient form [[c_00 .. c_0(n-1)], ...] of ``x``."""
        ref = self.inner_ref
        return [ref.coeffs(d) for d in self.coords(x)]

    def from_coeffs(self, nested: Sequence[Sequence[int]]) -> int:
        if len(nested) != self.m or any(len(c) != self.n for c in nested):
            raise FieldError(f"expected {self.m} coefficient vectors of length {self.n}")
        ref = self.inner_ref
        return self.from_coords([ref.index(c) for c in nested])

    def mul_reference(self, x: int, y: int) -> int:
        """Schoolbook product of the Y-polynomials reduced by ``g_mod``."""
        ref = self.inner_ref
        m = self.m
        a, b = self.coords(x), self.coords(y)
        prod = [0] * (2 * m - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    if v:
                        prod[i + j] = ref.add(prod[i + j], ref.mul(u, v))
        if m == 1:
            # g_mod = Y, so the field is F_q itself.
            return prod[0]
        return self.from_coords(_poly_rem(prod, self.g_mod, ref.add, ref.mul, ref.neg))

    def pow_reference(self, x: int, e: int) -> int:
        """Square-and-multiply with the reference product."""
        if e < 0:
            if x == 0:
                raise ZeroDivisionError("zero has no inverse")
            e %= self.size - 1
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul_reference(result, base)
            base = self.mul_reference(base, base)
            e >>= 1
        return result

    def add_reference(self, x: int, y: int) -> int:
        ref = self.inner_ref
        return self.from_coords([ref.add(u, v) for u, v in zip(self.coords(x), self.coords(y))])

    # -- tables ------------------------------------------------------------

    @cached_property
    def primitive(self) -> int:
        """Smallest index whose multiplicative order is q^m - 1."""
        big = self.size - 1
        if big == 1:
            return 1
        exps = [big // r for r in prime_factors(big)]
        for x in range(2, self.size):
            if all(self.pow_reference(x, e) != 1 for e in exps):
                return x
        raise RuntimeError("no primitive element found")

    @cached_property
    def _tables(self) -> "_Tables":
        return _Tables(self)

    # -- scalar table arithmetic on indices ---------------------------------

    def add(self, x: int, y: int) -> int:
        p = self.p
        if p == 2:
            return x ^ y
        out, scale = 0, 1
        while x or y:
            x, rx = divmod(x, p)
            y, ry = divmod(y, p)
            r = rx + ry
            if r >= p:
                r -= p
            out += r * scale
            scale *= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        if p == 2:
            return x
        out, scale = 0, 1
        while x:
            x, r = divmod(x, p)
            if r:
                out += (p - r) * scale
            scale *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        t = self._tables
        return t.exp_list[t.log_list[x] + t.log_list[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        t = self._tables
        return t.exp_list[(self.size - 1 - t.log_list[x]) % (self.size - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("zero has no multiplicative inverse")
        t = self._tables
        return t.exp_list[(t.log_list[x] * e) % (self.size - 1)]

    def frob(self, x: int, i: int = 1) -> int:
        """x^(q^i)."""
        return self.pow(x, self.q ** (i % self.m))

    def trace(self, x: int) -> int:
        """Relative trace to F_q; the result is an index below q."""
        return int(self._tables.trace[x])

    def log(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return self._tables.log_list[x]

    def order(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        big = self.size - 1
        return big // gcd(self.log(x), big)

    def scalar(self, c: int) -> int:
        """The F_p-multiple c*1 as an index (for integer constants)."""
        return c % self.p

    # -- vectorised table arithmetic ---------------------------------------

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def subfield(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def vadd(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        return self._tables.add(x, y)

    def translate(self, y: int) -> np.ndarray:
        """Table of x -> x + y over all elements."""
        return self._tables.translate(int(y))

    def vneg(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x
        return self._tables.neg[x]

    def vsub(self, x, y) -> np.ndarray:
        return self.vadd(x, self.vneg(y))

    def vmul(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        t = self._tables
        return t.exp[t.log[x] + t.log[y]]

    def vinv(self, x) -> np.ndarray:
        """Elementwise inverse; zero entries map to zero."""
        x = np.asarray(x, dtype=np.int64)
        t = self._tables
        big = self.size - 1
        return np.where(x == 0, 0, t.exp[(big - t.log[x] % big) % big])

    def vfrob(self, x, i: int = 1) -> np.ndarray:
        out = np.asarray(x, dtype=np.int64)
        frob1 = self._tables.frob
        for _ in range(i % self.m):
            out = frob1[out]
        return out

    def vtrace(self, x) -> np.ndarray:
        return self._tables.trace[np.asarray(x, dtype=np.int64)]

    def vcoords(self, x) -> np.ndarray:
        """Array of F_q coordinates, shape (len(x), m)."""
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // (self.q ** np.arange(self.m, dtype=np.int64))) % self.q


class _Tables:
    """Log/exp, digit, Frobenius and trace tables for one field."""

    def __init__(self, ctx: FieldCtx):
        size, p = ctx.size, ctx.p
        self.p = p
        big = size - 1
        width = ctx.n * ctx.m
        g = ctx.primitive
        # Powers of g by doubling: multiplication by the fixed element
        # g^(2^j) is F_p-linear, so each round extends the known block of
        # powers with one matrix product on base-p digits.
        weights = p ** np.arange(width, dtype=np.int64)
        powers = np.array([1], dtype=np.int64)
        step = g
        while powers.size < big:
            images = np.array([ctx.mul_reference(int(w), step) for w in weights], dtype=np.int64)
            image_digits = (images[:, None] // weights) % p
            digits = (powers[:, None] // weights) % p
            powers = np.concatenate((powers, ((digits @ image_digits) % p) @ weights))
            step = ctx.mul_reference(step, step)
        powers = powers[:big]
        if ctx.mul_reference(int(powers[-1]), g) != 1 or np.unique(powers).size != big:
            raise RuntimeError("primitive element does not generate the multiplicative group")
        exp = powers.tolist() * 2
        log = [0] * size
        for k, x in enumerate(exp[:big]):
            log[x] = k
        self.exp_list = exp
        self.log_list = log
        # ``exp`` is padded with 2*big + 1 zeros and log[0] = 2*big, so any
        # log sum involving a zero lands in the padding and multiplies to 0.
        self.exp = np.array(exp + [0] * (2 * big + 1), dtype=np.int64)
        log_arr = np.array(log, dtype=np.int64)
        log_arr[0] = 2 * big
        self.log = log_arr

        idx = np.arange(size, dtype=np.int64)
        self.weights = p ** np.arange(width, dtype=np.int64)
        self.digits = (idx[:, None] // self.weights) % p
        self.neg = ((p - self.digits) % p) @ self.weights

        # Digit-wise addition in chunks of h base-p digits, one lookup per
        # chunk in a c x c table (c = p^h, table at most 2^17 entries).
        h = 1
        while h < width and p ** (2 * (h + 1)) <= 1 << 17:
            h += 1
        c = p**h
        pair = np.arange(c * c, dtype=np.int64)
        lo, hi = pair % c, pair // c
        cw = p ** np.arange(h, dtype=np.int64)
        self.chunk = c
        self.chunks = -(-width // h)
        self.chunk_add = (((lo[:, None] // cw) % p + (hi[:, None] // cw) % p) % p) @ cw

        frob = np.zeros(size, dtype=np.int64)
        frob[1:] = self.exp[(log_arr[1:] * ctx.q) % big]
        self.frob = frob
        # frob_basis[i, j] = (Y^j)^(q^i), the images that fix a linearized
        # polynomial's matrix on the power basis.
        fb = np.empty((ctx.m, ctx.m), dtype=np.int64)
        fb[0] = ctx.q ** np.arange(ctx.m, dtype=np.int64)
        for i in range(1, ctx.m):
            fb[i] = frob[fb[i - 1]]
        self.frob_basis = fb

        acc = idx.copy()
        cur = idx.copy()
        for _ in range(1, ctx.m):
            cur = frob[cur]
            acc = self.add(acc, cur)
        if np.any(acc >= ctx.q):
            raise ArithmeticError("trace left the subfield; arithmetic tables are inconsistent")
        self.trace = acc


    @cached_property
    def _index_chunks(self) -> list[np.ndarray]:
        c = self.chunk
        idx = np.arange(self.neg.size, dtype=np.int64)
        return [(idx // c**i) % c for i in range(self.chunks)]

    def translate(self, y: int) -> np.ndarray:
        if self.p == 2:
            return np.arange(self.neg.size, dtype=np.int64) ^ y
        c, table = self.chunk, self.chunk_add
        out = None
        for i, part in enumerate(self._index_chunks):
            row = table[((y // c**i) % c) * c : ((y // c**i) % c + 1) * c]
            term = row[part] * c**i if i else row[part]
            out = term if out is None else out + term
        return out

    def add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        c, table = self.chunk, self.chunk_add
        if self.chunks == 1:
            return table[x * c + y]
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.chunks):
            out += table[(x % c) * c + (y % c)] * scale
            x, y = x // c, y // c
            scale *= c
        return out


@lru_cache(maxsize=None)
def _build_field(p: int, n: int, m: int) -> FieldCtx:
    f_mod = _canonical_irreducible(n, p, lambda a, b: (a + b) % p, lambda a, b: a * b % p, lambda a: -a % p)
    inner = _InnerReference(p, n, f_mod)
    g_mod = _canonical_irreducible(m, p**n, inner.add, inner.mul, inner.neg)
    return FieldCtx(p, n, m, f_mod, g_mod)


def make_field(p: int, n: int, m: int, max_size: int | None = None) -> FieldCtx:
    """Return the canonical context for F_{(p^n)^m}.

    The moduli are the monic irreducibles minimising the index of their
    lower coefficients, so (p, n, m) determines the context.  Fields with
    more than ``max_size`` elements are refused (default: the
    ``LINPERM_MAX_SIZE`` environment variable, else 65536).
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"p={p!r} is not prime")
    if n < 1 or m < 1:
        raise FieldError("n and m must be positive")
    cap = max_size_from_env() if max_size is None else max_size
    if p ** (n * m) > cap:
        raise FieldSizeError(f"field of size {p}^{n * m} exceeds the table bound {cap}")
    return _build_field(p, n, m)


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


def _check_same(a: "Element | SubElement", b: "Element | SubElement") -> None:
    if a.ctx != b.ctx:
        raise FieldError("elements belong to different fields")


@dataclass(frozen=True)
class SubElement:
    """An element of the subfield F_q, identified by its index below q."""

    ctx: FieldCtx
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.ctx.q:
            raise FieldError(f"index {self.index} outside F_{self.ctx.q}")

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.inner_ref.coeffs(self.index)

    def _wrap(self, v: int) -> "SubElement":
        return SubElement(self.ctx, v)

    def __add__(self, other: "SubElement") -> "SubElement":
        _check_same(self, other)
        return self._wrap(self.ctx.add(self.index, other.index))

    def __sub__(self, other: "SubElement") -> "SubElement":
        _check_same(self, other)
        return self._wrap(self.ctx.sub(self.index, other.index))

    def __mul__(self, other: "SubElement") -> "SubElement":
        _check_same(self, other)
        return self._wrap(self.ctx.mul(self.index, other.index))

    def __neg__(self) -> "SubElement":
        return self._wrap(self.ctx.neg(self.index))

    def __pow__(self, e: int) -> "SubElement":
        return self._wrap(self.ctx.pow(self.index, e))

    def inverse(self) -> "SubElement":
        return self._wrap(self.ctx.inv(self.index))

    def __int__(self) -> int:
        return self.index


@dataclass(frozen=True)
class Element:
    """An element of F_{q^m}, identified by its canonical index."""

    ctx: FieldCtx
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.ctx.size:
            raise FieldError(f"index {self.index} outside F_{self.ctx.size}")

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, nested: Sequence[Sequence[int]]) -> "Element":
        return cls(ctx, ctx.from_coeffs(nested))

    @property
    def coeffs(self) -> list[list[int]]:
        return self.ctx.coeffs(self.index)

    def _wrap(self, v: int) -> "Element":
        return Element(self.ctx, v)

    def __add__(self, other: "Element") -> "Element":
        _check_same(self, other)
        return self._wrap(self.ctx.add(self.index, other.index))

    def __sub__(self, other: "Element") -> "Element":
        _check_same(self, other)
        return self._wrap(self.ctx.sub(self.index, other.index))

    def __mul__(self, other: "Element") -> "Element":
        _check_same(self, other)
        return self._wrap(self.ctx.mul(self.index, other.index))

    def __truediv__(self, other: "Element") -> "Element":
        _check_same(self, other)
        return self._wrap(self.ctx.div(self.index, other.index))

    def __neg__(self) -> "Element":
        return self._wrap(self.ctx.neg(self.index))

    def __pow__(self, e: int) -> "Element":
        return self._wrap(self.ctx.pow(self.index, e))

    def inverse(self) -> "Element":
        return self._wrap(self.ctx.inv(self.index))

    def __int__(self) -> int:
        return self.index


def arith(op: str, x: Element, y: "Element | int | None" = None) -> Element:
    """Dispatch one of add/sub/mul/inv/neg/pow on tower elements."""
    if op == "inv":
        return x.inverse()
    if op == "neg":
        return -x
    if op == "pow":
        if not isinstance(y, int):
            raise TypeError("pow takes an integer exponent")
        return x**y
    if not isinstance(y, Element):
        raise TypeError(f"{op} takes two elements")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def frobenius_q(x: Element, i: int) -> Element:
    """x^(q^i)."""
    return Element(x.ctx, x.ctx.frob(x.index, i))


def rel_trace(x: Element) -> SubElement:
    """Tr(x) = x + x^q + ... + x^(q^(m-1)), computed by repeated Frobenius."""
    ctx = x.ctx
    acc = 0
    for i in range(ctx.m):
        acc = ctx.add(acc, ctx.frob(x.index, i))
    if acc >= ctx.q:
        raise ArithmeticError(f"trace of {x.index} has a non-constant part")
    return SubElement(ctx, acc)


def embed(c: SubElement) -> Element:
    return Element(c.ctx, c.index)


def project(x: Element) -> SubElement:
    if x.index >= x.ctx.q:
        raise FieldError(f"element {x.index} is not in the subfield F_{x.ctx.q}")
    return SubElement(x.ctx, x.index)


def find_primitive(ctx: FieldCtx, level: str = "outer") -> Element:
    """Smallest-index generator of F_{q^m}^* (outer) or of F_q^* (inner, embedded)."""
    if level == "outer":
        return Element(ctx, ctx.primitive)
    if level != "inner":
        raise ValueError("level must be 'inner' or 'outer'")
    target = ctx.q - 1
    for c in range(1, ctx.q):
        if ctx.order(c) == target:
            return Element(ctx, c)
    raise RuntimeError("no primitive element of the subfield")
