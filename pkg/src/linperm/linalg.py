"""Dense exact linear algebra over the subfield F_q of a :class:`FieldCtx`.

Entries are F_q indices (ints below q); arithmetic goes through the
context's scalar table operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import FieldCtx


@dataclass(frozen=True)
class FqMatrix:
    ctx: FieldCtx
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")
        q = self.ctx.q
        for r in self.entries:
            for v in r:
                if not 0 <= v < q:
                    raise ValueError(f"entry {v} is not an element of F_{q}")

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FqMatrix":
        entries = tuple(tuple(int(v) for v in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(ctx, len(entries), cols, entries)

    @classmethod
    def identity(cls, ctx: FieldCtx, k: int) -> "FqMatrix":
        return cls.from_rows(ctx, [[1 if i == j else 0 for j in range(k)] for i in range(k)], k)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "FqMatrix":
        return cls.from_rows(ctx, [[0] * cols for _ in range(rows)], cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "FqMatrix":
        return FqMatrix.from_rows(self.ctx, [list(c) for c in zip(*self.entries)] or [], self.rows)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        add = self.ctx.add
        return FqMatrix.from_rows(
            self.ctx,
            [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.cols,
        )

    def scale(self, c: int) -> "FqMatrix":
        mul = self.ctx.mul
        return FqMatrix.from_rows(self.ctx, [[mul(c, a) for a in r] for r in self.entries], self.cols)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ctx = self.ctx
        out = []
        for r in self.entries:
            row = []
            for j in range(other.cols):
                acc = 0
                for k, a in enumerate(r):
                    if a:
                        acc = ctx.add(acc, ctx.mul(a, other.entries[k][j]))
                row.append(acc)
            out.append(row)
        return FqMatrix.from_rows(ctx, out, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix-vector product M v."""
        ctx = self.ctx
        out = []
        for r in self.entries:
            acc = 0
            for a, x in zip(r, v):
                if a and x:
                    acc = ctx.add(acc, ctx.mul(a, x))
            out.append(acc)
        return out


def _rows(M: FqMatrix) -> list[list[int]]:
    return [list(r) for r in M.entries]


def det(M: FqMatrix) -> int:
    """Determinant by elimination; pivots are the first nonzero entry down each column."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    ctx = M.ctx
    a = _rows(M)
    k = M.rows
    result = 1
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = ctx.neg(result)
        pv = a[col][col]
        result = ctx.mul(result, pv)
        inv = ctx.inv(pv)
        for r in range(col + 1, k):
            f = a[r][col]
            if f:
                f = ctx.neg(ctx.mul(f, inv))
                row, prow = a[r], a[col]
                for c in range(col, k):
                    if prow[c]:
                        row[c] = ctx.add(row[c], ctx.mul(f, prow[c]))
    return result


def rref(M: FqMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    ctx = M.ctx
    a = _rows(M)
    pivots: list[int] = []
    r = 0
    for col in range(M.cols):
        if r == M.rows:
            break
        piv = next((i for i in range(r, M.rows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ctx.inv(a[r][col])
        a[r] = [ctx.mul(inv, v) for v in a[r]]
        for i in range(M.rows):
            f = a[i][col]
            if i != r and f:
                nf = ctx.neg(f)
                a[i] = [ctx.add(v, ctx.mul(nf, w)) for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return a, pivots


def rank(M: FqMatrix) -> int:
    return len(rref(M)[1])


def null_space(M: FqMatrix) -> list[list[int]]:
    """Basis of {v : M v = 0}, one vector per free column in ascending order.

    Each vector has a 1 at its free column and zeros at the other free
    columns, so the basis is in reduced echelon form.
    """
    ctx = M.ctx
    R, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [0] * M.cols
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = ctx.neg(R[row][free])
        basis.append(v)
    return basis


def row_space(vectors: Iterable[Sequence[int]], ctx: FieldCtx, width: int) -> list[list[int]]:
    """Reduced echelon basis of the span of ``vectors``."""
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    R, pivots = rref(FqMatrix.from_rows(ctx, rows, width))
    return R[: len(pivots)]


def solve(M: FqMatrix, b: Sequence[int]) -> list[int] | None:
    """One solution of M x = b (free variables zero), or None if inconsistent."""
    ctx = M.ctx
    aug = FqMatrix.from_rows(ctx, [list(r) + [v] for r, v in zip(M.entries, b)], M.cols + 1)
    R, pivots = rref(aug)
    if M.cols in pivots:
        return None
    x = [0] * M.cols
    for row, pc in enumerate(pivots):
        x[pc] = R[row][M.cols]
    return x


def batch_rref(ctx: FieldCtx, mats: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced row echelon forms of a stack of F_q matrices, shape (b, r, c).

    Gauss-Jordan elimination runs in lockstep over the stack with the same
    pivoting rule as :func:`rref` (first nonzero entry at or below the
    current row), so each slice matches the scalar result.  Returns
    (R, ranks, pivot mask of shape (b, c)).
    """
    M = np.array(mats, dtype=np.int64, copy=True)
    b, r, c = M.shape
    rk = np.zeros(b, dtype=np.int64)
    pivots = np.zeros((b, c), dtype=bool)
    rows = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= rk[:, None])
        has = np.flatnonzero(cand.any(axis=1))
        if has.size == 0:
            continue
        piv = np.argmax(cand[has], axis=1)
        top = rk[has]
        swap = M[has, piv].copy()
        M[has, piv] = M[has, top]
        pivot_row = ctx.vmul(swap, ctx.vinv(swap[:, col])[:, None])
        factors = M[has, :, col].copy()
        factors[np.arange(has.size), top] = 0
        M[has] = ctx.vsub(M[has], ctx.vmul(factors[:, :, None], pivot_row[:, None, :]))
        M[has, top] = pivot_row
        rk[has] += 1
        pivots[has, col] = True
    return M, rk, pivots


def batch_rank(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of F_q matrices, shape (b, r, c)."""
    return batch_rref(ctx, mats)[1]


def batch_matmul(ctx: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Products of two stacks of F_q matrices, (b, r, s) @ (b, s, c)."""
    n, p = ctx.n, ctx.p
    terms = ctx.vmul(np.asarray(A)[:, :, :, None], np.asarray(B)[:, None, :, :])
    digits = ctx._tables.digits[terms][..., :n].sum(axis=2) % p
    return digits @ (p ** np.arange(n, dtype=np.int64))
