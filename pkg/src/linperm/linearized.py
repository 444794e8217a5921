"""Linearized polynomials L(x) = sum_i a_i x^(q^i) over F_{q^m}.

L is an F_q-linear map of F_{q^m}; we study it through its m x m matrix
on the power basis 1, Y, ..., Y^(m-1).  Bijectivity is decided by the
kernel being trivial (only root 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .field import FieldCtx, FieldError
from .linalg import FqMatrix, batch_matmul, batch_rank, batch_rref, rank


class UnsatisfiableError(RuntimeError):
    """Rejection sampling ran out of retries."""


@dataclass(frozen=True)
class LinearizedPoly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.m:
            raise FieldError(f"a linearized polynomial over F_{self.ctx.size} has {self.ctx.m} coefficients")

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[int, int]) -> "LinearizedPoly":
        """Build from {q-exponent: coefficient}; exponents reduce mod m."""
        coeffs = [0] * ctx.m
        for e, a in terms.items():
            coeffs[e % ctx.m] = ctx.add(coeffs[e % ctx.m], a)
        return cls(ctx, tuple(coeffs))

    def __call__(self, x: int) -> int:
        return eval_lin(self, x)

    @cached_property
    def table(self) -> np.ndarray:
        """L evaluated on every element, indexed by canonical index."""
        ctx = self.ctx
        xs = ctx.elements()
        acc = np.zeros_like(xs)
        cur = xs
        for i, a in enumerate(self.coeffs):
            if i:
                cur = ctx.vfrob(cur, 1)
            if a:
                acc = ctx.vadd(acc, ctx.vmul(a, cur))
        return acc

    @cached_property
    def structure(self) -> "Structure":
        return structure(self)


@dataclass(frozen=True)
class SubspaceBasis:
    """F_q-linearly independent elements of F_{q^m}."""

    ctx: FieldCtx
    vectors: tuple[int, ...]

    def __post_init__(self):
        if self.vectors and rank(self.coord_matrix()) != len(self.vectors):
            raise FieldError("basis vectors are linearly dependent over F_q")

    @classmethod
    def _trusted(cls, ctx: FieldCtx, vectors: tuple[int, ...]) -> "SubspaceBasis":
        """Skip the independence check for vectors read off an echelon form."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "vectors", vectors)
        return obj

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coord_matrix(self) -> FqMatrix:
        """Rows are the F_q coordinates of the vectors."""
        return FqMatrix.from_rows(self.ctx, [self.ctx.coords(v) for v in self.vectors], self.ctx.m)

    def combine(self, coeffs: Sequence[int]) -> int:
        ctx = self.ctx
        acc = 0
        for c, v in zip(coeffs, self.vectors):
            if c:
                acc = ctx.add(acc, ctx.mul(c, v))
        return acc

    def span(self) -> np.ndarray:
        """All q^dim elements of the span, ordered by coefficient index."""
        ctx = self.ctx
        out = np.zeros(1, dtype=np.int64)
        for v in self.vectors:
            multiples = ctx.vmul(ctx.subfield(), v)
            out = ctx.vadd(multiples[:, None], out[None, :]).reshape(-1)
        return out

    def contains(self, x: int) -> bool:
        if x == 0:
            return True
        rows = [self.ctx.coords(v) for v in self.vectors] + [self.ctx.coords(x)]
        return rank(FqMatrix.from_rows(self.ctx, rows, self.ctx.m)) == self.dim


def independent(ctx: FieldCtx, elements: Sequence[int]) -> bool:
    if not elements:
        return True
    rows = [ctx.coords(v) for v in elements]
    return rank(FqMatrix.from_rows(ctx, rows, ctx.m)) == len(elements)


@dataclass(frozen=True)
class Structure:
    matrix: FqMatrix
    kernel: SubspaceBasis
    image: SubspaceBasis
    bijective: bool
    trivial_intersection: bool


def eval_lin(L: LinearizedPoly, x: int) -> int:
    ctx = L.ctx
    acc = 0
    for i, a in enumerate(L.coeffs):
        if a:
            acc = ctx.add(acc, ctx.mul(a, ctx.frob(x, i)))
    return acc


def lin_matrix(L: LinearizedPoly) -> FqMatrix:
    """Column j holds the F_q coordinates of L(Y^j)."""
    ctx = L.ctx
    return FqMatrix.from_rows(ctx, coord_matrices(ctx, np.array([L.coeffs]))[0].tolist(), ctx.m)


def structure(L: LinearizedPoly) -> Structure:
    return structures(L.ctx, np.array([L.coeffs]))[0]


def structures(ctx: FieldCtx, coeffs: np.ndarray) -> list[Structure]:
    """Kernel, image and intersection data for a stack of polynomials.

    The kernel basis has one vector per free column of the reduced matrix
    (ascending); the image basis is the reduced row space of the transpose.
    Ker(L) and Im(L) meet only in 0 exactly when rank(M^2) = rank(M).
    """
    m = ctx.m
    mats = coord_matrices(ctx, coeffs)
    R, ranks, pivots = batch_rref(ctx, mats)
    RT, _, _ = batch_rref(ctx, mats.transpose(0, 2, 1))
    square_ranks = batch_rank(ctx, batch_matmul(ctx, mats, mats))
    powers = ctx.q ** np.arange(m, dtype=np.int64)
    out = []
    for t in range(len(mats)):
        piv = np.flatnonzero(pivots[t])
        free = np.flatnonzero(~pivots[t])
        kern = np.zeros((free.size, m), dtype=np.int64)
        kern[np.arange(free.size), free] = 1
        kern[:, piv] = ctx.vneg(R[t][: piv.size][:, free]).T
        image = RT[t][: ranks[t]]
        out.append(
            Structure(
                matrix=FqMatrix.from_rows(ctx, mats[t].tolist(), m),
                kernel=SubspaceBasis._trusted(ctx, tuple(int(v) for v in kern @ powers)),
                image=SubspaceBasis._trusted(ctx, tuple(int(v) for v in image @ powers)),
                bijective=bool(ranks[t] == m),
                trivial_intersection=bool(square_ranks[t] == ranks[t]),
            )
        )
    return out


def special_linearized(ctx: FieldCtx, kind: str, **params) -> LinearizedPoly:
    """The named polynomials used by the constructions.

    ``trace``: x + x^q + ... + x^(q^(m-1)).
    ``diff_k``: x - x^(q^k), requires m = 2k.
    ``cor29_N``: x^(q^3) + a x^(q^2) + b x^q + c x with roots 1, alpha, alpha^2;
    ``alpha`` must be primitive and m > 3.
    ``cor27_M``: x^(q^2) - (1 + d^(q-1)) x^q + d^(q-1) x with d = gamma^q - gamma,
    vanishing on 1 and gamma; requires gamma outside F_q.
    ``zero``: the zero map.
    """
    q, m = ctx.q, ctx.m
    if kind == "trace":
        return LinearizedPoly(ctx, (1,) * m)
    if kind == "zero":
        return LinearizedPoly(ctx, (0,) * m)
    if kind == "diff_k":
        k = params.get("k", m // 2)
        if m != 2 * k:
            raise FieldError(f"x - x^(q^k) needs m = 2k, got m={m}, k={k}")
        return LinearizedPoly.from_terms(ctx, {0: 1, k: ctx.neg(1)})
    if kind == "cor29_N":
        if m <= 3:
            raise FieldError("N(x) needs m > 3")
        alpha = params.get("alpha", ctx.primitive)
        if alpha == 0 or ctx.order(alpha) != ctx.size - 1:
            raise FieldError(f"alpha={alpha} is not primitive")
        a, b, c = cor29_coefficients(ctx, alpha)
        return LinearizedPoly.from_terms(ctx, {3: 1, 2: a, 1: b, 0: c})
    if kind == "cor27_M":
        gamma = params["gamma"]
        if gamma < q:
            raise FieldError("gamma must lie outside F_q")
        d = ctx.sub(ctx.frob(gamma, 1), gamma)
        e = ctx.pow(d, q - 1)
        # from_terms would drop the x^(q^2) term onto x when m = 2; sum instead
        coeffs = [0] * m
        for exp_, coef in ((2, 1), (1, ctx.neg(ctx.add(1, e))), (0, e)):
            coeffs[exp_ % m] = ctx.add(coeffs[exp_ % m], coef)
        return LinearizedPoly(ctx, tuple(coeffs))
    raise ValueError(f"unknown linearized polynomial kind {kind!r}")


def cor29_coefficients(ctx: FieldCtx, alpha: int) -> tuple[int, int, int]:
    """(a, b, c) with c = -1 - a - b, from the printed closed forms."""
    q = ctx.q
    f = ctx.frob
    a1, a2, a3 = f(alpha, 1), f(alpha, 2), f(alpha, 3)
    den = ctx.sub(a2, a1)
    if den == 0:
        raise FieldError("alpha^(q^2) - alpha^q vanishes")
    a = ctx.div(ctx.mul(ctx.sub(alpha, a3), ctx.pow(ctx.sub(a2, alpha), q - 1)), den)
    b = ctx.div(ctx.mul(ctx.sub(a3, alpha), ctx.pow(ctx.sub(alpha, a1), q * q - 1)), den)
    c = ctx.sub(ctx.neg(1), ctx.add(a, b))
    return a, b, c


def coord_matrices(ctx: FieldCtx, coeffs: np.ndarray) -> np.ndarray:
    """Matrices of a stack of linearized polynomials, shape (b, m, m).

    ``coeffs`` has shape (b, m); entry [t, r, j] is the r-th F_q coordinate
    of L_t(Y^j).
    """
    t = ctx._tables
    m, n, p = ctx.m, ctx.n, ctx.p
    terms = ctx.vmul(np.asarray(coeffs, dtype=np.int64)[:, :, None], t.frob_basis[None, :, :])
    digits = t.digits[terms].sum(axis=1) % p  # (b, j, m*n): digits of L(Y^j)
    coords = digits.reshape(len(terms), m, m, n) @ (p ** np.arange(n, dtype=np.int64))
    return coords.transpose(0, 2, 1)


def kernel_dims(ctx: FieldCtx, coeffs: np.ndarray) -> np.ndarray:
    """dim Ker(L) for each row of a (b, m) array of coefficient indices."""
    return ctx.m - batch_rank(ctx, coord_matrices(ctx, coeffs))


def sample_linearized(
    ctx: FieldCtx,
    rng: np.random.Generator,
    count: int,
    kernel_dim: int | None = None,
    trivial_intersection: bool = False,
    min_kernel_dim: int = 0,
    max_kernel_dim: int | None = None,
    max_tries: int = 10000,
    stats: dict | None = None,
) -> list[LinearizedPoly]:
    """``count`` independent rejection samples with uniform coefficients.

    Candidates are drawn in vectorised batches and screened in draw order,
    so the result is the same as drawing one at a time and keeping every
    candidate that meets the requirements.  Any single acceptance needing
    more than ``max_tries`` draws raises :class:`UnsatisfiableError`.
    ``stats``, when given, receives the number of rejected draws.
    """
    m = ctx.m
    kept: list[np.ndarray] = []
    misses = rejected = 0
    drawn = accepted = 0
    while len(kept) < count:
        rate = (accepted + 1) / (drawn + 2)
        size = int(min(max((count - len(kept)) / rate * 1.25, 16), 4096))
        coeffs = rng.integers(0, ctx.size, (size, m))
        mats = coord_matrices(ctx, coeffs)
        ranks = batch_rank(ctx, mats)
        dims = m - ranks
        ok = dims >= min_kernel_dim
        if kernel_dim is not None:
            ok &= dims == kernel_dim
        if max_kernel_dim is not None:
            ok &= dims <= max_kernel_dim
        if trivial_intersection and ok.any():
            sub = mats[ok]
            ok[ok] = batch_rank(ctx, batch_matmul(ctx, sub, sub)) == ranks[ok]
        drawn += size
        accepted += int(ok.sum())
        prev = -1
        for pos in np.flatnonzero(ok):
            misses += pos - prev - 1
            rejected += pos - prev - 1
            if misses >= max_tries:
                break
            kept.append(coeffs[pos])
            misses, prev = 0, pos
            if len(kept) == count:
                break
        else:
            misses += size - prev - 1
            rejected += size - prev - 1
        if stats is not None:
            stats["rejected"] = int(rejected)
        if misses >= max_tries:
            raise UnsatisfiableError(
                f"no linearized polynomial with kernel dim {kernel_dim} "
                f"(trivial intersection={trivial_intersection}) over F_{ctx.size} in {max_tries} draws"
            )
    arr = np.array(kept, dtype=np.int64).reshape(-1, m)
    out = []
    for row, st in zip(arr, structures(ctx, arr)):
        L = LinearizedPoly(ctx, tuple(int(v) for v in row))
        L.__dict__["structure"] = st
        out.append(L)
    return out


def random_linearized(
    ctx: FieldCtx,
    rng: np.random.Generator,
    kernel_dim: int | None = None,
    trivial_intersection: bool = False,
    min_kernel_dim: int = 0,
    max_tries: int = 10000,
) -> LinearizedPoly:
    """Uniform coefficients, redrawn until the kernel requirements hold."""
    return sample_linearized(
        ctx,
        rng,
        1,
        kernel_dim=kernel_dim,
        trivial_intersection=trivial_intersection,
        min_kernel_dim=min_kernel_dim,
        max_tries=max_tries,
    )[0]


def random_subspace_basis(basis: SubspaceBasis, count: int, rng: np.random.Generator) -> SubspaceBasis:
    """``count`` random independent vectors inside span(basis)."""
    ctx = basis.ctx
    if count > basis.dim:
        raise ValueError("more vectors requested than the subspace dimension")
    chosen: list[int] = []
    while len(chosen) < count:
        v = basis.combine([int(c) for c in rng.integers(0, ctx.q, basis.dim)])
        if v and independent(ctx, chosen + [v]):
            chosen.append(v)
    return SubspaceBasis(ctx, tuple(chosen))
