import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linperm.field import FieldError, make_field
from linperm.linearized import LinearizedPoly, special_linearized, structure
from linperm.translators import (
    FqMap,
    SelfMap,
    TranslatorError,
    all_translators,
    make_translator_map,
    translator_coefficient,
    translator_matrix,
)

import invariants

ALPHA = 3


def brute_coefficient(f, alpha):
    """Definition check over every x and every u, written out directly."""
    ctx = f.ctx
    a = ctx.sub(f(alpha), f(0))
    for u in range(ctx.q):
        for x in range(ctx.size):
            if ctx.sub(f(ctx.add(x, ctx.mul(u, alpha))), f(x)) != ctx.mul(u, a):
                return None
    return a


def trace_square(ctx):
    xs = ctx.elements()
    return FqMap(ctx, ctx.vtrace(ctx.vmul(xs, xs)))


def test_coefficient_examples(F9):
    tr = FqMap.trace(F9)
    assert brute_coefficient(tr, 1) == 2 and translator_coefficient(tr, 1) == 2
    assert brute_coefficient(tr, ALPHA) == 0 and translator_coefficient(tr, ALPHA) == 0
    sq = trace_square(F9)
    assert brute_coefficient(sq, 1) is None and translator_coefficient(sq, 1) is None


def test_zero_alpha_rejected(F9):
    with pytest.raises(ValueError):
        translator_coefficient(FqMap.trace(F9), 0)


def test_all_translators_examples(F9):
    tr = all_translators(FqMap.trace(F9))
    assert [c.alpha for c in tr] == list(range(1, 9))
    assert all(c.a == F9.trace(c.alpha) for c in tr)
    zero = all_translators(FqMap(F9, np.zeros(9, dtype=np.int64)))
    assert len(zero) == 8 and all(c.a == 0 for c in zero)
    assert all_translators(trace_square(F9)) == []


def test_make_translator_map_examples(F9):
    L = special_linearized(F9, "diff_k", k=1)
    f = make_translator_map(ALPHA, SelfMap.zero(F9), L)
    assert np.array_equal(f.table, FqMap.trace_linear(F9, ALPHA).table)
    assert translator_coefficient(f, 1) == 0
    g = make_translator_map(1, SelfMap.random(F9, 7), L)
    assert translator_coefficient(g, 1) == 2
    z = make_translator_map(0, SelfMap.zero(F9), L)
    assert not z.table.any()
    assert translator_coefficient(z, 1) == 0 and translator_coefficient(z, 2) == 0


def test_make_translator_map_rejects_bijective(F9):
    with pytest.raises(ValueError):
        make_translator_map(1, SelfMap.zero(F9), LinearizedPoly(F9, (1, 0)))


def test_translator_matrix_examples(F9):
    tr = FqMap.trace(F9)
    assert translator_matrix([1], [tr]).to_lists() == [[2]]
    assert translator_matrix([ALPHA], [tr]).to_lists() == [[0]]
    with pytest.raises(TranslatorError) as info:
        translator_matrix([1], [trace_square(F9)])
    assert (info.value.i, info.value.j) == (1, 1)


def test_table_validation(F9):
    with pytest.raises(FieldError):
        FqMap(F9, np.zeros(8, dtype=np.int64))
    with pytest.raises(FieldError):
        FqMap(F9, np.full(9, 5))
    with pytest.raises(FieldError):
        SelfMap(F9, np.full(9, 9))


@pytest.mark.parametrize("params", [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (3, 2, 1), (5, 1, 2)])
def test_basis_check_equals_full_check(params):
    ctx = make_field(*params)
    rng = np.random.default_rng(4)
    maps = [FqMap(ctx, rng.integers(0, ctx.q, ctx.size)) for _ in range(3)]
    s = structure(special_linearized(ctx, "trace"))
    if not s.bijective:
        L = special_linearized(ctx, "trace")
        maps += [make_translator_map(int(b), SelfMap.random(ctx, int(b)), L) for b in rng.integers(0, ctx.size, 5)]
    maps.append(FqMap.trace(ctx))
    for f in maps:
        for alpha in range(1, ctx.size):
            full = translator_coefficient(f, alpha)
            assert translator_coefficient(f, alpha, basis_only=True) == full
            if ctx.size <= 25:
                assert brute_coefficient(f, alpha) == full


FIELDS = [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 3), (5, 1, 2)]


@st.composite
def nonbijective(draw):
    ctx = make_field(*draw(st.sampled_from(FIELDS)))
    while True:
        L = LinearizedPoly(ctx, tuple(draw(st.integers(0, ctx.size - 1)) for _ in range(ctx.m)))
        if not L.structure.bijective:
            return L


@settings(max_examples=100, deadline=None)
@given(nonbijective(), st.data())
def test_lemma21_forward_random(L, data):
    ctx = L.ctx
    beta = data.draw(st.integers(0, ctx.size - 1))
    H = SelfMap.random(ctx, data.draw(st.integers(0, 2**31)))
    f = make_translator_map(beta, H, L, verify=False)
    found = {c.alpha: c.a for c in all_translators(f, basis_only=True)}
    for alpha in L.structure.kernel.span()[1:]:
        assert found.get(int(alpha)) == ctx.trace(ctx.mul(int(alpha), beta))


@pytest.mark.parametrize("ctx", invariants.small_fields(64), ids=lambda c: f"{c.p},{c.n},{c.m}")
def test_translator_subspace_closed(ctx):
    # all_translators asserts closure and linearity itself; exercise it on
    # maps with a known translator subspace of every dimension.
    rng = np.random.default_rng(ctx.size)
    for _ in range(3):
        coeffs = tuple(int(v) for v in rng.integers(0, ctx.size, ctx.m))
        L = LinearizedPoly(ctx, coeffs)
        if L.structure.bijective:
            continue
        f = make_translator_map(int(rng.integers(ctx.size)), SelfMap.random(ctx, 1), L)
        found = all_translators(f, basis_only=True)
        alphas = {c.alpha for c in found} | {0}
        assert set(L.structure.kernel.span().tolist()) <= alphas
        assert len(alphas) in {ctx.q**d for d in range(ctx.m + 1)}
