"""Brute-force ground truth: permutation tests and fiber histograms.

Nothing here knows about translators or criteria; a map is just its table.
"""

from __future__ import annotations

import itertools
from typing import Any

import numpy as np


def _table(F: Any) -> np.ndarray:
    return np.asarray(getattr(F, "table", F), dtype=np.int64)


def is_permutation(F: Any) -> bool:
    """True iff the table values are pairwise distinct."""
    t = _table(F)
    seen = np.zeros(t.size, dtype=bool)
    if t.size and (t.min() < 0 or t.max() >= t.size):
        return False
    seen[t] = True
    return bool(seen.all())


def fiber_histogram(F: Any) -> dict[int, int]:
    """{fiber size s: number of codomain points with exactly s preimages}.

    The codomain is the field itself, so the counts sum to its size, as do
    the products s * counts[s].
    """
    t = _table(F)
    fibers = np.bincount(t, minlength=t.size)
    sizes, counts = np.unique(fibers, return_counts=True)
    hist = {int(s): int(c) for s, c in zip(sizes, counts)}
    assert sum(hist.values()) == t.size
    assert sum(s * c for s, c in hist.items()) == t.size
    return hist


def is_uniform_fibers(hist: dict[int, int], fiber: int, points: int, size: int) -> bool:
    """Exactly ``points`` codomain points of fiber size ``fiber``, all others empty."""
    expected = {fiber: points}
    if size > points:
        expected[0] = size - points
    return hist == expected


# ---------------------------------------------------------------------------
# Exhaustive checks of the translator representation Tr(beta x + H(L(x)))
# ---------------------------------------------------------------------------

# Largest number of maps H enumerated per (L, beta).
MAX_H_CHOICES = 1 << 16


def _nonbijective(ctx) -> list:
    from .linearized import LinearizedPoly

    out = []
    for coeffs in itertools.product(range(ctx.size), repeat=ctx.m):
        L = LinearizedPoly(ctx, coeffs)
        if not L.structure.bijective:
            out.append(L)
    return out


def _all_maps(domain: int, codomain: int) -> np.ndarray:
    """Every map {0..domain-1} -> {0..codomain-1}, one per row."""
    grid = np.indices((codomain,) * domain).reshape(domain, -1).T
    return grid.astype(np.int64)


def lemma21_forward_exhaustive(ctx, restrict_to_image: bool | None = None) -> dict:
    """Check that every nonzero root alpha of a non-bijective L is a
    Tr(alpha beta)-translator of Tr(beta x + H(L(x))), for every beta, L
    and H, over all shifts u in F_q.

    f sees H only through its values on Im(L), so enumerating the maps
    Im(L) -> F covers every f.  That restriction is used when the full
    space of maps H: F -> F is too large (or when asked for).
    """
    size = ctx.size
    if restrict_to_image is None:
        restrict_to_image = size**size > MAX_H_CHOICES
    xs = ctx.elements()
    cases = 0
    failures = []
    for L in _nonbijective(ctx):
        domain = np.unique(L.table) if restrict_to_image else xs
        if size ** domain.size > MAX_H_CHOICES:
            raise ValueError(f"too many maps H over F_{size}")
        pos = np.searchsorted(domain, L.table)
        H_traces = ctx.vtrace(_all_maps(domain.size, size))[:, pos]
        kernel = [int(a) for a in L.structure.kernel.span()[1:]]
        for beta in range(size):
            f = ctx.vadd(ctx.vtrace(ctx.vmul(beta, xs))[None, :], H_traces)
            cases += f.shape[0]
            for alpha in kernel:
                a = ctx.trace(ctx.mul(alpha, beta))
                for u in range(1, ctx.q):
                    shifted = ctx.translate(ctx.mul(u, alpha))
                    bad = np.flatnonzero((f[:, shifted] != ctx.vadd(f, ctx.mul(u, a))).any(axis=1))
                    if bad.size:
                        failures.append({"L": list(L.coeffs), "beta": beta, "alpha": alpha, "u": u, "H_rows": bad[:5].tolist()})
    return {
        "field": ctx.describe(),
        "cases": cases,
        "H_domain": "image of L" if restrict_to_image else "whole field",
        "failures": failures,
        "holds": not failures,
    }


def lemma21_converse_exhaustive(ctx) -> dict:
    """Compare "has a linear translator" with "is Tr(beta x + H(L(x)))
    for some beta, H and non-bijective L" over every f: F -> F_q."""
    from .translators import FqMap, all_translators

    size, q = ctx.size, ctx.q
    if q**size > MAX_H_CHOICES or size**size > MAX_H_CHOICES:
        raise ValueError(f"exhaustive converse check needs a tiny field, got F_{size}")
    xs = ctx.elements()
    H_traces = ctx.vtrace(_all_maps(size, size))
    representable: set[tuple[int, ...]] = set()
    for L in _nonbijective(ctx):
        composed = H_traces[:, L.table]
        for beta in range(size):
            f = ctx.vadd(ctx.vtrace(ctx.vmul(beta, xs))[None, :], composed)
            representable.update(map(tuple, np.unique(f, axis=0).tolist()))
    unrepresentable, spurious = [], []
    with_translator = 0
    for table in itertools.product(range(q), repeat=size):
        has = bool(all_translators(FqMap(ctx, np.array(table, dtype=np.int64))))
        with_translator += has
        rep = table in representable
        if has and not rep:
            unrepresentable.append(list(table))
        if rep and not has:
            spurious.append(list(table))
    return {
        "field": ctx.describe(),
        "functions": q**size,
        "with_translator": with_translator,
        "representable": len(representable),
        "unrepresentable": unrepresentable,
        "representable_without_translator": spurious,
        "holds": not unrepresentable and not spurious,
    }
