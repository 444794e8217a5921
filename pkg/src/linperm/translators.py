"""Linear translators of maps F_{q^m} -> F_q.

A nonzero alpha is an a-linear translator of f when
f(x + u*alpha) - f(x) = u*a for every x in F_{q^m} and every u in F_q.
Maps are always held as full tables indexed by canonical element index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .field import FieldCtx, FieldError
from .linalg import FqMatrix
from .linearized import LinearizedPoly, SubspaceBasis


class TranslatorError(ValueError):
    """gamma_i is not a linear translator of f_j (1-based indices)."""

    def __init__(self, i: int, j: int):
        super().__init__(f"gamma_{i} is not a linear translator of f_{j}")
        self.i, self.j = i, j


@dataclass(frozen=True, eq=False)
class SelfMap:
    """A map H: F_{q^m} -> F_{q^m}."""

    ctx: FieldCtx
    table: np.ndarray
    description: dict | None = None

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.shape != (self.ctx.size,):
            raise FieldError(f"a self-map of F_{self.ctx.size} needs {self.ctx.size} values")
        if t.size and (t.min() < 0 or t.max() >= self.ctx.size):
            raise FieldError("self-map values outside the field")
        object.__setattr__(self, "table", t)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "SelfMap":
        return cls(ctx, np.zeros(ctx.size, dtype=np.int64), {"kind": "zero"})

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "SelfMap":
        return cls(ctx, ctx.elements(), {"kind": "identity"})

    @classmethod
    def random(cls, ctx: FieldCtx, seed: int) -> "SelfMap":
        rng = np.random.default_rng(seed)
        return cls(ctx, rng.integers(0, ctx.size, ctx.size), {"kind": "random", "seed": seed})

    @classmethod
    def polynomial(cls, ctx: FieldCtx, coeffs: Sequence[int]) -> "SelfMap":
        """x -> sum_i coeffs[i] x^i, evaluated by Horner's rule."""
        xs = ctx.elements()
        acc = np.zeros_like(xs)
        for c in reversed(list(coeffs)):
            acc = ctx.vadd(ctx.vmul(acc, xs), c)
        return cls(ctx, acc, {"kind": "poly", "coeffs": [int(c) for c in coeffs]})

    @classmethod
    def linear(cls, ctx: FieldCtx, beta: int) -> "SelfMap":
        return cls(ctx, ctx.vmul(ctx.elements(), beta), {"kind": "poly", "coeffs": [0, int(beta)]})

    def __call__(self, x: int) -> int:
        return int(self.table[x])


@dataclass(frozen=True, eq=False)
class FqMap:
    """A map f: F_{q^m} -> F_q, optionally described as Tr(beta x + H(L(x)))."""

    ctx: FieldCtx
    table: np.ndarray
    description: dict | None = field(default=None)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.shape != (self.ctx.size,):
            raise FieldError(f"a map on F_{self.ctx.size} needs {self.ctx.size} values")
        if t.size and (t.min() < 0 or t.max() >= self.ctx.q):
            raise FieldError(f"map values outside F_{self.ctx.q}")
        object.__setattr__(self, "table", t)
        d = self.description
        if d is not None and "beta" in d:
            expected = _translator_table(self.ctx, d["beta"], d["H"], d["L"])
            if not np.array_equal(expected, t):
                raise FieldError("table does not match its Tr(beta x + H(L(x))) description")

    @classmethod
    def trace(cls, ctx: FieldCtx) -> "FqMap":
        return cls(ctx, ctx.vtrace(ctx.elements()))

    @classmethod
    def trace_linear(cls, ctx: FieldCtx, beta: int) -> "FqMap":
        """x -> Tr(beta x)."""
        return cls(ctx, ctx.vtrace(ctx.vmul(ctx.elements(), beta)))

    def __call__(self, x: int) -> int:
        return int(self.table[x])


@dataclass(frozen=True)
class TranslatorCertificate:
    alpha: int
    a: int


def _translator_table(ctx: FieldCtx, beta: int, H: SelfMap, L: LinearizedPoly) -> np.ndarray:
    xs = ctx.elements()
    return ctx.vtrace(ctx.vadd(ctx.vmul(beta, xs), H.table[L.table]))


def _shifts(ctx: FieldCtx, basis_only: bool) -> list[int]:
    # The F_p-basis X^0 .. X^(n-1) of F_q has indices p^i.
    if basis_only:
        return [ctx.p**i for i in range(ctx.n)]
    return list(range(1, ctx.q))


def translator_coefficient(f: FqMap, alpha: int, basis_only: bool = False) -> int | None:
    """The a making ``alpha`` an a-linear translator of ``f``, or None.

    With ``basis_only`` the defining identity is checked for u in an
    F_p-basis of F_q only, which is equivalent since the differences
    telescope; the default checks every u.
    """
    ctx = f.ctx
    if alpha == 0:
        raise ValueError("a linear translator must be nonzero")
    t = f.table
    a = ctx.sub(int(t[alpha]), int(t[0]))
    for u in _shifts(ctx, basis_only):
        moved = t[ctx.translate(ctx.mul(u, alpha))]
        target = ctx.vadd(t, ctx.mul(u, a))
        if not np.array_equal(moved, target):
            return None
    return a


def all_translators(f: FqMap, basis_only: bool = False) -> list[TranslatorCertificate]:
    """Every translator of ``f`` in ascending index order.

    The translators together with 0 form an F_q-subspace on which
    alpha -> a is F_q-linear; both facts are asserted before returning.
    """
    ctx = f.ctx
    found = []
    for alpha in range(1, ctx.size):
        a = translator_coefficient(f, alpha, basis_only)
        if a is not None:
            found.append(TranslatorCertificate(alpha, a))
    coef = {0: 0}
    coef.update({c.alpha: c.a for c in found})
    for c in found:
        for u in range(1, ctx.q):
            s = ctx.mul(u, c.alpha)
            assert coef.get(s) == ctx.mul(u, c.a), "translator set not closed under scaling"
        for d in found:
            s = ctx.add(c.alpha, d.alpha)
            assert coef.get(s) == ctx.add(c.a, d.a), "translator set not closed under addition"
    return found


def make_translator_map(beta: int, H: SelfMap, L: LinearizedPoly, verify: bool = True) -> FqMap:
    """f(x) = Tr(beta x + H(L(x))) for a non-bijective L.

    Every nonzero kernel element alpha of L is a Tr(alpha beta)-translator
    of f; with ``verify`` this is checked on a kernel basis (the translator
    set is a subspace with linear coefficients, so a basis suffices).
    """
    ctx = L.ctx
    s = L.structure
    if s.bijective:
        raise ValueError("L is bijective; translator maps need a non-trivial kernel")
    f = FqMap(ctx, _translator_table(ctx, beta, H, L), {"beta": int(beta), "H": H, "L": L})
    if verify:
        for alpha in s.kernel.vectors:
            a = translator_coefficient(f, alpha, basis_only=True)
            if a != ctx.trace(ctx.mul(alpha, beta)):
                raise AssertionError(f"kernel element {alpha} is not a Tr(alpha beta)-translator")
    return f


def translator_matrix(
    gammas: SubspaceBasis | Sequence[int], fs: Sequence[FqMap], basis_only: bool = True
) -> FqMatrix:
    """B[i][j] = b such that gamma_i is a b-linear translator of f_j.

    Shifts are checked over an F_p-basis of F_q by default (equivalent to
    checking every u, and n rather than q - 1 table comparisons).
    """
    vectors = gammas.vectors if isinstance(gammas, SubspaceBasis) else tuple(gammas)
    if not fs:
        raise ValueError("no maps given")
    ctx = fs[0].ctx
    rows = []
    for i, g in enumerate(vectors):
        row = []
        for j, f in enumerate(fs):
            a = translator_coefficient(f, g, basis_only)
            if a is None:
                raise TranslatorError(i + 1, j + 1)
            row.append(a)
        rows.append(row)
    return FqMatrix.from_rows(ctx, rows, len(fs))


def describe_map(f: FqMap | SelfMap) -> dict[str, Any] | None:
    """JSON-friendly form of a map description."""
    d = f.description
    if d is None:
        return None
    if "beta" in d:
        return {
            "beta": d["beta"],
            "H": d["H"].description,
            "L": list(d["L"].coeffs),
        }
    return dict(d)
