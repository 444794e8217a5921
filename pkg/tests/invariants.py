"""Exhaustive invariant suites over small fields.

Each suite returns a list of failure strings (empty means pass) so the
acceptance script can report them and the unit tests can assert on them.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np

from linperm.field import FieldCtx, make_field
from linperm.linearized import kernel_dims, structures
from linperm.oracle import fiber_histogram, is_permutation
from linperm.sweep import sweep_fields

SMALL = 256


def small_fields(limit: int = SMALL) -> list[FieldCtx]:
    return [make_field(*f) for f in sweep_fields(limit, min_m=1)]


def field_axioms(ctx: FieldCtx) -> list[str]:
    """Commutativity, associativity, distributivity, identities and inverses on all tuples."""
    xs = ctx.elements()
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    add, mul = ctx.vadd, ctx.vmul
    bad = []
    if not np.array_equal(add(X, Y), add(Y, X)):
        bad.append("addition not commutative")
    if not np.array_equal(mul(X, Y), mul(Y, X)):
        bad.append("multiplication not commutative")
    if not np.array_equal(add(xs, 0), xs) or not np.array_equal(mul(xs, 1), xs):
        bad.append("identity elements")
    if np.any(add(xs, ctx.vneg(xs)) != 0):
        bad.append("additive inverse")
    if np.any(mul(xs[1:], ctx.vinv(xs[1:])) != 1):
        bad.append("multiplicative inverse")
    XY_add, XY_mul = add(X, Y), mul(X, Y)
    for z in xs:
        if not np.array_equal(add(XY_add, z), add(X, add(Y, z))):
            bad.append(f"addition not associative at z={z}")
            break
        if not np.array_equal(mul(XY_mul, z), mul(X, mul(Y, z))):
            bad.append(f"multiplication not associative at z={z}")
            break
        if not np.array_equal(mul(XY_add, z), add(mul(X, z), mul(Y, z))):
            bad.append(f"not distributive at z={z}")
            break
    return bad


def frobenius_suite(ctx: FieldCtx) -> list[str]:
    """x -> x^q is a ring automorphism fixing exactly F_q, of order m."""
    xs = ctx.elements()
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    fr = ctx.vfrob(xs, 1)
    bad = []
    if not is_permutation(fr):
        bad.append("Frobenius not bijective")
    if not np.array_equal(fr[ctx.vadd(X, Y)], ctx.vadd(fr[X], fr[Y])):
        bad.append("Frobenius not additive")
    if not np.array_equal(fr[ctx.vmul(X, Y)], ctx.vmul(fr[X], fr[Y])):
        bad.append("Frobenius not multiplicative")
    if not np.array_equal(np.flatnonzero(fr == xs), np.arange(ctx.q)):
        bad.append("fixed points differ from F_q")
    if not np.array_equal(ctx.vfrob(xs, ctx.m), xs):
        bad.append("x^(q^m) != x")
    return bad


def trace_suite(ctx: FieldCtx) -> list[str]:
    """Tr is F_q-linear, onto F_q and Frobenius-invariant."""
    xs = ctx.elements()
    tr = ctx.vtrace(xs)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    bad = []
    if tr.max() >= ctx.q:
        bad.append("trace leaves F_q")
    if not np.array_equal(tr[ctx.vadd(X, Y)], ctx.vadd(tr[X], tr[Y])):
        bad.append("trace not additive")
    C, Z = np.meshgrid(ctx.subfield(), xs, indexing="ij")
    if not np.array_equal(tr[ctx.vmul(C, Z)], ctx.vmul(C, tr[Z])):
        bad.append("trace not F_q-homogeneous")
    if set(np.unique(tr).tolist()) != set(range(ctx.q)):
        bad.append("trace not onto F_q")
    if not np.array_equal(tr[ctx.vfrob(xs, 1)], tr):
        bad.append("Tr(x^q) != Tr(x)")
    return bad


# Every L is enumerated when there are at most this many; otherwise a seeded sample.
ALL_L_LIMIT = 1 << 16
SAMPLED_L = 1500


def linearized_population(ctx: FieldCtx, seed: int = 0) -> np.ndarray:
    if ctx.size**ctx.m <= ALL_L_LIMIT:
        return np.array(list(itertools.product(range(ctx.size), repeat=ctx.m)), dtype=np.int64)
    rng = np.random.default_rng([seed, ctx.p, ctx.n, ctx.m])
    return rng.integers(0, ctx.size, (SAMPLED_L, ctx.m))


def _tables(ctx: FieldCtx, coeffs: np.ndarray) -> np.ndarray:
    """L_t(x) for every row t of coeffs and every x."""
    xs = ctx.elements()
    frobs = [xs]
    for _ in range(1, ctx.m):
        frobs.append(ctx.vfrob(frobs[-1], 1))
    out = np.zeros((coeffs.shape[0], ctx.size), dtype=np.int64)
    for i in range(ctx.m):
        out = ctx.vadd(out, ctx.vmul(coeffs[:, i : i + 1], frobs[i][None, :]))
    return out


def rank_nullity(ctx: FieldCtx, detailed: int = 64) -> list[str]:
    """dim Ker + dim Im = m, checked against root and image counts of the tables.

    Kernel dimensions come from the batched rank; |roots| and |image| come
    from evaluating L everywhere.  The first ``detailed`` polynomials also
    have their full structure cross-checked.
    """
    coeffs = linearized_population(ctx)
    bad = []
    for start in range(0, coeffs.shape[0], 2048):
        block = coeffs[start : start + 2048]
        dims = kernel_dims(ctx, block)
        T = _tables(ctx, block)
        roots = (T == 0).sum(axis=1)
        S = np.sort(T, axis=1)
        image = 1 + (np.diff(S, axis=1) != 0).sum(axis=1)
        want_roots = ctx.q**dims
        want_image = ctx.q ** (ctx.m - dims)
        wrong = np.flatnonzero((roots != want_roots) | (image != want_image))
        if wrong.size:
            bad.append(f"rank-nullity fails for L={block[wrong[0]].tolist()}")
            break
    for st, row in zip(structures(ctx, coeffs[:detailed]), coeffs[:detailed]):
        if st.kernel.dim + st.image.dim != ctx.m:
            bad.append(f"structure dims do not add up for L={row.tolist()}")
        if st.bijective != (st.kernel.dim == 0):
            bad.append(f"bijective flag wrong for L={row.tolist()}")
    return bad


def histogram_suite(ctx: FieldCtx, seed: int = 0, random_maps: int = 64) -> list[str]:
    """Mass conservation on every power map and random maps; x^t bijective iff gcd(t, size-1) = 1."""
    xs = ctx.elements()
    bad = []
    rng = np.random.default_rng([seed, ctx.size])
    cur = np.ones_like(xs)
    for t in range(ctx.size):
        table = cur.copy()
        cur = ctx.vmul(cur, xs)
        hist = fiber_histogram(table)
        expect_perm = t > 0 and gcd(t, ctx.size - 1) == 1
        if sum(hist.values()) != ctx.size or sum(s * c for s, c in hist.items()) != ctx.size:
            bad.append(f"histogram mass of x^{t}")
        if is_permutation(table) != (hist == {1: ctx.size}) or is_permutation(table) != expect_perm:
            bad.append(f"x^{t}: permutation test disagrees with gcd rule")
    for _ in range(random_maps):
        table = rng.integers(0, ctx.size, ctx.size)
        if rng.random() < 0.25:
            table = rng.permutation(ctx.size)
        hist = fiber_histogram(table)
        if sum(hist.values()) != ctx.size or sum(s * c for s, c in hist.items()) != ctx.size:
            bad.append("histogram mass of a random map")
        if is_permutation(table) != (hist == {1: ctx.size}):
            bad.append("permutation test disagrees with histogram")
    return bad


SUITES = {
    "field-axioms": field_axioms,
    "frobenius": frobenius_suite,
    "trace-linearity": trace_suite,
    "rank-nullity": rank_nullity,
    "histogram-conservation": histogram_suite,
}


def run_all(limit: int = SMALL) -> dict[str, list[str]]:
    out = {name: [] for name in SUITES}
    for ctx in small_fields(limit):
        for name, suite in SUITES.items():
            out[name].extend(f"F_{ctx.size} ({ctx.p},{ctx.n},{ctx.m}): {msg}" for msg in suite(ctx))
    return out
