import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linperm.field import FieldError, make_field
from linperm.linearized import (
    LinearizedPoly,
    SubspaceBasis,
    UnsatisfiableError,
    eval_lin,
    kernel_dims,
    random_linearized,
    random_subspace_basis,
    sample_linearized,
    special_linearized,
    structure,
    structures,
)
from linperm.oracle import is_permutation

import invariants

ALPHA = 3  # class of X in F_9 = F_3[X]/(X^2+1)


def brute_structure(L):
    """Kernel and image as sets, straight from the value table."""
    t = L.table
    kernel = set(np.flatnonzero(t == 0).tolist())
    image = set(np.unique(t).tolist())
    return kernel, image


def span_set(basis):
    return set(basis.span().tolist())


def test_eval_examples(F9):
    L = LinearizedPoly(F9, (1, F9.neg(1)))
    assert eval_lin(L, ALPHA) == F9.mul(2, ALPHA)
    rng = np.random.default_rng(0)
    for coeffs in rng.integers(0, 9, (10, 2)):
        assert eval_lin(LinearizedPoly(F9, tuple(int(c) for c in coeffs)), 0) == 0
    ident = LinearizedPoly(F9, (1, 0))
    assert all(eval_lin(ident, x) == x for x in range(9))


def test_structure_x_minus_xq(F9):
    L = special_linearized(F9, "diff_k", k=1)
    assert L.coeffs == (1, 2)
    kernel, image = brute_structure(L)
    assert kernel == {0, 1, 2}
    assert image == {0, ALPHA, F9.mul(2, ALPHA)}
    s = structure(L)
    assert s.kernel.vectors == (1,)
    assert s.image.vectors == (ALPHA,)
    assert s.trivial_intersection and not s.bijective


def test_structure_identity(F9):
    s = structure(LinearizedPoly(F9, (1, 0)))
    assert s.kernel.dim == 0 and s.bijective


def test_structure_trace(F9):
    L = special_linearized(F9, "trace")
    assert L.coeffs == (1, 1)
    kernel, image = brute_structure(L)
    assert kernel == {0, ALPHA, F9.mul(2, ALPHA)} and image == {0, 1, 2}
    s = structure(L)
    assert s.kernel.vectors == (ALPHA,)
    assert s.image.vectors == (1,)


def test_cor29_roots(F81):
    alpha = F81.primitive
    N = special_linearized(F81, "cor29_N", alpha=alpha)
    a, b, c = N.coeffs[2], N.coeffs[1], N.coeffs[0]
    assert N.coeffs[3] == 1
    assert F81.add(F81.add(1, a), F81.add(b, c)) == 0
    for root in (1, alpha, F81.mul(alpha, alpha)):
        assert eval_lin(N, root) == 0
    assert structure(N).kernel.dim == 3


def test_cor29_rejects(F9, F81):
    with pytest.raises(FieldError):
        special_linearized(F9, "cor29_N")
    with pytest.raises(FieldError):
        special_linearized(F81, "cor29_N", alpha=1)


def test_cor27_vanishes_on_1_and_gamma():
    ctx = make_field(3, 1, 3)
    gamma = ctx.q + 1
    M = special_linearized(ctx, "cor27_M", gamma=gamma)
    assert eval_lin(M, 1) == 0 and eval_lin(M, gamma) == 0
    with pytest.raises(FieldError):
        special_linearized(ctx, "cor27_M", gamma=2)


def test_diff_k_requires_even_m():
    with pytest.raises(FieldError):
        special_linearized(make_field(3, 1, 3), "diff_k", k=1)


def test_coefficient_count_enforced(F9):
    with pytest.raises(FieldError):
        LinearizedPoly(F9, (1,))


def test_subspace_basis_rejects_dependent(F9):
    with pytest.raises(FieldError):
        SubspaceBasis(F9, (1, 2))
    assert SubspaceBasis(F9, (1, ALPHA)).contains(7)


FIELDS = [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (3, 1, 3), (2, 1, 4), (3, 2, 2)]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_linearity(params, data):
    ctx = make_field(*params)
    L = LinearizedPoly(ctx, tuple(data.draw(st.integers(0, ctx.size - 1)) for _ in range(ctx.m)))
    x, y = (data.draw(st.integers(0, ctx.size - 1)) for _ in range(2))
    u = data.draw(st.integers(0, ctx.q - 1))
    assert eval_lin(L, ctx.add(x, ctx.mul(u, y))) == ctx.add(eval_lin(L, x), ctx.mul(u, eval_lin(L, y)))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_structure_against_tables(params, data):
    ctx = make_field(*params)
    L = LinearizedPoly(ctx, tuple(data.draw(st.integers(0, ctx.size - 1)) for _ in range(ctx.m)))
    s = structure(L)
    kernel, image = brute_structure(L)
    assert span_set(s.kernel) == kernel
    assert span_set(s.image) == image
    assert s.kernel.dim + s.image.dim == ctx.m
    assert s.bijective == is_permutation(L.table)
    assert s.trivial_intersection == (kernel & image == {0})


@pytest.mark.parametrize("params", [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)])
def test_bijective_flag_exhaustive(params):
    ctx = make_field(*params)
    coeffs = invariants.linearized_population(ctx)
    for row, s in zip(coeffs, structures(ctx, coeffs)):
        L = LinearizedPoly(ctx, tuple(int(v) for v in row))
        assert s.bijective == is_permutation(L.table)


@pytest.mark.parametrize("ctx", invariants.small_fields(), ids=lambda c: f"{c.p},{c.n},{c.m}")
def test_rank_nullity(ctx):
    assert invariants.rank_nullity(ctx) == []


@pytest.mark.parametrize("params", [(3, 1, 2), (5, 1, 2), (3, 1, 4), (7, 1, 2), (3, 2, 2), (5, 1, 4)])
def test_diff_k_trivial_intersection_odd_p(params):
    ctx = make_field(*params)
    L = special_linearized(ctx, "diff_k", k=ctx.m // 2)
    assert structure(L).trivial_intersection
    kernel, image = brute_structure(L)
    assert kernel & image == {0}


@pytest.mark.parametrize("params", [(2, 1, 3), (3, 1, 2), (2, 1, 5), (5, 1, 3), (3, 1, 4), (2, 2, 3)])
def test_trace_kernel_misses_subfield(params):
    ctx = make_field(*params)
    kernel = span_set(structure(special_linearized(ctx, "trace")).kernel)
    assert kernel & set(range(ctx.q)) == {0}


def test_batched_structures_match_scalar():
    for params in FIELDS:
        ctx = make_field(*params)
        rng = np.random.default_rng(3)
        coeffs = rng.integers(0, ctx.size, (40, ctx.m))
        coeffs[::4, 1:] = 0
        for row, s in zip(coeffs, structures(ctx, coeffs)):
            L = LinearizedPoly(ctx, tuple(int(v) for v in row))
            ref_kernel, ref_image = brute_structure(L)
            assert span_set(s.kernel) == ref_kernel and span_set(s.image) == ref_image
        dims = kernel_dims(ctx, coeffs)
        assert dims.tolist() == [s.kernel.dim for s in structures(ctx, coeffs)]


def test_sampling_meets_requirements_and_is_deterministic():
    ctx = make_field(3, 1, 3)
    stats = {}
    Ls = sample_linearized(ctx, np.random.default_rng(5), 30, kernel_dim=1, trivial_intersection=True, stats=stats)
    assert len(Ls) == 30 and stats["rejected"] > 0
    for L in Ls:
        kernel, image = brute_structure(L)
        assert len(kernel) == 3 and kernel & image == {0}
    again = sample_linearized(ctx, np.random.default_rng(5), 30, kernel_dim=1, trivial_intersection=True)
    assert [L.coeffs for L in again] == [L.coeffs for L in Ls]
    one = random_linearized(ctx, np.random.default_rng(5), kernel_dim=1, trivial_intersection=True)
    assert one.coeffs == Ls[0].coeffs


def test_sampling_cap():
    ctx = make_field(2, 1, 6)
    with pytest.raises(UnsatisfiableError):
        sample_linearized(ctx, np.random.default_rng(0), 1, kernel_dim=6, max_tries=50)


def test_random_subspace_basis(F81):
    basis = structure(special_linearized(F81, "trace")).kernel
    sub = random_subspace_basis(basis, 2, np.random.default_rng(0))
    assert sub.dim == 2 and all(basis.contains(v) for v in sub.vectors)
