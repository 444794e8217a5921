"""Permutation-polynomial constructions and their exact criteria.

Every builder materialises the constructed map F as a table, evaluates the
algebraic criterion (a determinant, a rank, or a finite quantifier scan)
and, unless told otherwise, checks the verdict against the brute-force
oracle.  A disagreement is never a valid result: it raises
:class:`OracleDisagreement` carrying the full certificate.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Sequence

import numpy as np

from .field import FieldCtx, FieldError
from .linalg import FqMatrix, det, rank
from .linearized import LinearizedPoly, SubspaceBasis, eval_lin, independent, special_linearized
from .oracle import fiber_histogram, is_uniform_fibers
from .translators import FqMap, SelfMap, TranslatorError, describe_map, make_translator_map, translator_matrix
from .wire import encode_element, encode_matrix


class HypothesisError(ValueError):
    """The inputs violate a hypothesis of the construction."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class OracleDisagreement(RuntimeError):
    """Criterion and brute force disagree; always an implementation bug."""

    def __init__(self, certificate: "Certificate"):
        super().__init__(f"criterion and oracle disagree for {certificate.construction.get('kind')}")
        self.certificate = certificate


# ---------------------------------------------------------------------------
# Permutations of F_q
# ---------------------------------------------------------------------------


def _dickson(t: int, x, add, sub, mul, two):
    # D_0 = 2, D_1 = x, D_t = x D_{t-1} - D_{t-2}
    if t == 0:
        return two
    prev, cur = two, x
    for _ in range(t - 1):
        prev, cur = cur, sub(mul(x, cur), prev)
    return cur


def dickson_eval(ctx: FieldCtx, t: int, x: int) -> int:
    """D_t(x, 1) for x in the subfield F_q."""
    if t < 0:
        raise ValueError("Dickson degree must be non-negative")
    return _dickson(t, x, ctx.add, ctx.sub, ctx.mul, ctx.scalar(2))


def dickson_vec(ctx: FieldCtx, t: int, xs: np.ndarray) -> np.ndarray:
    """D_t(x, 1) evaluated elementwise in the top field."""
    two = np.full_like(np.asarray(xs, dtype=np.int64), ctx.scalar(2))
    return _dickson(t, np.asarray(xs, dtype=np.int64), ctx.vadd, ctx.vsub, ctx.vmul, two)


@dataclass(frozen=True, eq=False)
class FqPermSpec:
    """A permutation h of F_q: x^t, D_t(x, 1), or an explicit table."""

    ctx: FieldCtx
    kind: str
    t: int | None = None
    table: tuple[int, ...] | None = None
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        ctx, q = self.ctx, self.ctx.q
        if self.kind == "power":
            if self.t is None or self.t < 1 or gcd(self.t, q - 1) != 1:
                raise HypothesisError("h_j not a permutation", f"x^{self.t} needs gcd(t, q-1) = 1")
            vals = [ctx.pow(c, self.t) for c in range(q)]
        elif self.kind == "dickson":
            if self.t is None or self.t < 1 or gcd(self.t, q * q - 1) != 1:
                raise HypothesisError("h_j not a permutation", f"D_{self.t} needs gcd(t, q^2-1) = 1")
            vals = dickson_vec(ctx, self.t, np.arange(q))
        elif self.kind == "table":
            if self.table is None or sorted(self.table) != list(range(q)):
                raise HypothesisError("h_j not a permutation", "table is not a bijection of F_q")
            vals = list(self.table)
        else:
            raise ValueError(f"unknown permutation kind {self.kind!r}")
        object.__setattr__(self, "values", np.array(vals, dtype=np.int64))

    def __call__(self, c: int) -> int:
        return int(self.values[c])

    def describe(self) -> dict:
        if self.kind == "table":
            return {"kind": "table", "table": list(self.table)}
        return {"kind": self.kind, "t": self.t}


def fq_perm_eval(h: FqPermSpec, c: int) -> int:
    return h(c)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConstructedMap:
    ctx: FieldCtx
    table: np.ndarray
    description: dict


@dataclass
class Certificate:
    field: dict
    construction: dict
    criterion: dict
    oracle: dict | None = None
    notes: list[str] = field(default_factory=list)
    config: dict | None = None
    F: ConstructedMap | None = field(default=None, repr=False)

    @property
    def verdict(self) -> bool:
        return bool(self.criterion["verdict"])

    @property
    def histogram(self) -> dict[int, int] | None:
        return None if self.oracle is None else self.oracle["histogram"]

    def to_dict(self) -> dict:
        out = {
            "field": self.field,
            "construction": self.construction,
            "criterion": _jsonable(self.criterion),
            "oracle": None,
            "notes": list(self.notes),
        }
        if self.oracle is not None:
            o = dict(self.oracle)
            o["histogram"] = {str(k): v for k, v in sorted(o["histogram"].items())}
            out["oracle"] = o
        if self.config is not None:
            out["config"] = self.config
        return out


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, FqMatrix):
        return encode_matrix(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def table_digest(table: np.ndarray) -> str:
    return hashlib.sha256(np.asarray(table, dtype="<i8").tobytes()).hexdigest()


def _elements(ctx: FieldCtx, xs: Sequence[int]) -> list:
    return [encode_element(ctx, x) for x in xs]


def _map_desc(f: FqMap | SelfMap) -> Any:
    d = describe_map(f)
    if d is None:
        return {"table_sha256": table_digest(f.table)}
    if "H" in d and d["H"] is None:
        d = dict(d, H={"table_sha256": table_digest(f.description["H"].table)})
    return d


def _run_oracle(cert: Certificate, table: np.ndarray, expect: bool, extra_ok: bool = True, extra: dict | None = None) -> None:
    hist = fiber_histogram(table)
    size = table.size
    permutes = hist == {1: size}
    cert.oracle = {
        "verdict": permutes,
        "histogram": hist,
        "table_sha256": table_digest(table),
        **(extra or {}),
    }
    if permutes != expect or not extra_ok:
        raise OracleDisagreement(cert)


def _as_basis(ctx: FieldCtx, gammas: SubspaceBasis | Sequence[int]) -> SubspaceBasis:
    if isinstance(gammas, SubspaceBasis):
        return gammas
    try:
        return SubspaceBasis(ctx, tuple(int(g) for g in gammas))
    except FieldError as exc:
        raise HypothesisError("gammas not linearly independent", str(exc)) from None


def _matrix_or_hypothesis(gammas: SubspaceBasis, fs: Sequence[FqMap]) -> FqMatrix:
    try:
        return translator_matrix(gammas, fs)
    except TranslatorError as exc:
        raise HypothesisError("missing translator", f"(i, j) = ({exc.i}, {exc.j})") from None


# ---------------------------------------------------------------------------
# L(x) + sum_j gamma_j h_j(f_j(x)),  criterion det(b_ij) != 0
# ---------------------------------------------------------------------------


def thm21(
    L: LinearizedPoly,
    gammas: SubspaceBasis | Sequence[int],
    hs: Sequence[FqPermSpec],
    fs: Sequence[FqMap],
    oracle: bool = True,
) -> Certificate:
    ctx = L.ctx
    s = L.structure
    k = s.kernel.dim
    if k == 0:
        raise HypothesisError("kernel dimension mismatch", "L is bijective")
    if not s.trivial_intersection:
        raise HypothesisError("nontrivial intersection", "Ker(L) and Im(L) meet outside 0")
    gammas = _as_basis(ctx, gammas)
    if gammas.dim != k:
        raise HypothesisError("kernel dimension mismatch", f"{gammas.dim} gammas for a {k}-dimensional kernel")
    for i, g in enumerate(gammas.vectors, 1):
        if eval_lin(L, g) != 0:
            raise HypothesisError("not a basis of Ker(L)", f"gamma_{i} is not a root of L")
    if len(hs) != k or len(fs) != k:
        raise HypothesisError("wrong number of maps", f"need {k} h_j and {k} f_j")
    B = _matrix_or_hypothesis(gammas, fs)

    table = L.table
    for g, h, f in zip(gammas.vectors, hs, fs):
        table = ctx.vadd(table, ctx.vmul(g, h.values[f.table]))
    d = det(B)
    cert = Certificate(
        field=ctx.describe(),
        construction={
            "kind": "thm2.1",
            "L": _elements(ctx, L.coeffs),
            "gammas": _elements(ctx, gammas.vectors),
            "hs": [h.describe() for h in hs],
            "fs": [_map_desc(f) for f in fs],
        },
        criterion={"form": "det", "matrix": B, "value": d, "verdict": d != 0},
    )
    cert.F = ConstructedMap(ctx, table, cert.construction)
    if oracle:
        _run_oracle(cert, table, d != 0)
    return cert


# ---------------------------------------------------------------------------
# x + sum_j gamma_j f_j(x),  criterion rank(I + A) = k
# ---------------------------------------------------------------------------


def _x_plus_sum(ctx: FieldCtx, gammas: SubspaceBasis, fs: Sequence[FqMap], scale: int = 1) -> np.ndarray:
    table = ctx.vmul(ctx.elements(), scale)
    for g, f in zip(gammas.vectors, fs):
        table = ctx.vadd(table, ctx.vmul(g, f.table))
    return table


def _check_thm22_inputs(ctx: FieldCtx, gammas, fs) -> tuple[SubspaceBasis, FqMatrix]:
    gammas = _as_basis(ctx, gammas)
    if gammas.dim == 0:
        raise HypothesisError("empty gamma family")
    if len(fs) != gammas.dim:
        raise HypothesisError("wrong number of maps", f"need {gammas.dim} f_j")
    return gammas, _matrix_or_hypothesis(gammas, fs)


def thm22(gammas: SubspaceBasis | Sequence[int], fs: Sequence[FqMap], oracle: bool = True) -> Certificate:
    """F(x) = x + sum gamma_j f_j(x): a permutation iff rank(I+A) = k,
    and q^l-to-1 when rank(I+A) = k - l."""
    ctx = fs[0].ctx if fs else None
    if ctx is None:
        raise HypothesisError("wrong number of maps", "no f_j given")
    gammas, A = _check_thm22_inputs(ctx, gammas, fs)
    k = gammas.dim
    IA = FqMatrix.identity(ctx, k) + A
    r = rank(IA)
    l = k - r
    table = _x_plus_sum(ctx, gammas, fs)
    cert = Certificate(
        field=ctx.describe(),
        construction={
            "kind": "thm2.2",
            "gammas": _elements(ctx, gammas.vectors),
            "fs": [_map_desc(f) for f in fs],
        },
        criterion={
            "form": "rank",
            "matrix": IA,
            "translator_matrix": A,
            "value": r,
            "k": k,
            "verdict": r == k,
            "predicted_fiber_size": ctx.q**l,
            "predicted_image_size": ctx.q ** (ctx.m - l),
        },
    )
    cert.F = ConstructedMap(ctx, table, cert.construction)
    if oracle:
        hist = fiber_histogram(table)
        uniform = is_uniform_fibers(hist, ctx.q**l, ctx.q ** (ctx.m - l), ctx.size)
        _run_oracle(cert, table, r == k, extra_ok=uniform, extra={"fibers_as_predicted": uniform})
    return cert


def complete_mapping(gammas: SubspaceBasis | Sequence[int], fs: Sequence[FqMap], oracle: bool = True) -> Certificate:
    """F = x + sum gamma_j f_j is complete iff rank(I+A) = rank(2I+A) = k (p odd)."""
    if not fs:
        raise HypothesisError("wrong number of maps", "no f_j given")
    ctx = fs[0].ctx
    if ctx.p == 2:
        raise HypothesisError("p must be odd", "complete-mapping criterion assumes odd characteristic")
    gammas, A = _check_thm22_inputs(ctx, gammas, fs)
    k = gammas.dim
    I = FqMatrix.identity(ctx, k)
    IA = I + A
    I2A = I.scale(ctx.scalar(2)) + A
    r1, r2 = rank(IA), rank(I2A)
    verdict = r1 == k and r2 == k
    table = _x_plus_sum(ctx, gammas, fs)
    shifted = ctx.vadd(table, ctx.elements())
    cert = Certificate(
        field=ctx.describe(),
        construction={
            "kind": "cor2.10",
            "gammas": _elements(ctx, gammas.vectors),
            "fs": [_map_desc(f) for f in fs],
        },
        criterion={
            "form": "rank-pair",
            "matrix": IA,
            "matrix_2I": I2A,
            "value": [r1, r2],
            "k": k,
            "verdict": verdict,
        },
    )
    cert.F = ConstructedMap(ctx, table, cert.construction)
    if oracle:
        hist2 = fiber_histogram(shifted)
        plus_id = hist2 == {1: ctx.size}
        hist = fiber_histogram(table)
        both = hist == {1: ctx.size} and plus_id
        cert.oracle = {
            "verdict": both,
            "F_permutes": hist == {1: ctx.size},
            "F_plus_x_permutes": plus_id,
            "histogram": hist,
            "histogram_plus_x": {str(k_): v for k_, v in sorted(hist2.items())},
            "table_sha256": table_digest(table),
        }
        if both != verdict:
            raise OracleDisagreement(cert)
    return cert


# ---------------------------------------------------------------------------
# L(x) + sum_i gamma_i Tr(h_i(x)),  trace-difference criterion
# ---------------------------------------------------------------------------


def thm31(
    L: LinearizedPoly,
    gammas: SubspaceBasis | Sequence[int],
    hs: Sequence[SelfMap],
    oracle: bool = True,
) -> Certificate:
    """Criterion: for every eps in Ker(L)\\{0} and every x some i has
    Tr(h_i(x+eps) - h_i(x)) != 0.  The quantifiers are taken in this
    order; the certificate also reports whether the stronger form with
    one i serving all (x, eps) holds."""
    ctx = L.ctx
    s = L.structure
    if not s.trivial_intersection:
        raise HypothesisError("nontrivial intersection", "Ker(L) and Im(L) meet outside 0")
    gammas = _as_basis(ctx, gammas)
    l = gammas.dim
    if l == 0:
        raise HypothesisError("empty gamma family")
    if l > s.kernel.dim:
        raise HypothesisError("kernel dimension mismatch", f"{l} gammas exceed dim Ker(L) = {s.kernel.dim}")
    for i, g in enumerate(gammas.vectors, 1):
        if eval_lin(L, g) != 0:
            raise HypothesisError("gamma not in Ker(L)", f"gamma_{i} is not a root of L")
    if len(hs) != l:
        raise HypothesisError("wrong number of maps", f"need {l} h_i")

    traces = [ctx.vtrace(h.table) for h in hs]
    table = L.table
    for g, t in zip(gammas.vectors, traces):
        table = ctx.vadd(table, ctx.vmul(g, t))

    kernel = s.kernel.span()
    witness = None
    separating = np.ones(l, dtype=bool)
    for eps in kernel[1:]:
        shifted = ctx.translate(int(eps))
        moved = np.stack([t[shifted] != t for t in traces])
        separating &= moved.all(axis=1)
        ok = moved.any(axis=0)
        if witness is None and not ok.all():
            x = int(np.flatnonzero(~ok)[0])
            witness = {"epsilon": encode_element(ctx, int(eps)), "x": encode_element(ctx, x)}
            if not oracle:
                break
    verdict = witness is None
    cert = Certificate(
        field=ctx.describe(),
        construction={
            "kind": "thm3.1",
            "L": _elements(ctx, L.coeffs),
            "gammas": _elements(ctx, gammas.vectors),
            "hs": [_map_desc(h) for h in hs],
        },
        criterion={
            "form": "forall-exists",
            "criterion_form": "forall-exists",
            "kernel_size": int(kernel.size),
            "witness": witness,
            "value": verdict,
            "verdict": verdict,
            "single_index_form_holds": bool(separating.any()) if witness is None or oracle else None,
        },
    )
    cert.F = ConstructedMap(ctx, table, cert.construction)
    if oracle:
        _run_oracle(cert, table, verdict)
    return cert


# ---------------------------------------------------------------------------
# Corollary and example assemblers
# ---------------------------------------------------------------------------


def _trace_matrix(ctx: FieldCtx, rows: Sequence[int], cols: Sequence[int]) -> FqMatrix:
    """(Tr(rows_i * cols_j))_ij."""
    return FqMatrix.from_rows(ctx, [[ctx.trace(ctx.mul(r, c)) for c in cols] for r in rows], len(cols))


def subfield_primitive(ctx: FieldCtx, k: int) -> int:
    """Smallest-index generator of F_{q^k}^* inside F_{q^m} (k | m)."""
    if ctx.m % k:
        raise FieldError(f"F_q^{k} is not a subfield of F_q^{ctx.m}")
    sub_order = ctx.q**k - 1
    for x in range(1, ctx.size):
        if ctx.order(x) == sub_order:
            return x
    raise RuntimeError("no subfield generator")


def _maps_from(ctx: FieldCtx, L: LinearizedPoly, betas: Sequence[int], Hs: Sequence[SelfMap]) -> list[FqMap]:
    if len(betas) != len(Hs):
        raise HypothesisError("wrong number of maps", "betas and Hs differ in length")
    if L.structure.bijective:
        raise HypothesisError("L is bijective")
    return [make_translator_map(b, H, L) for b, H in zip(betas, Hs)]


def _check_predicted(cert: Certificate, predicted: FqMatrix, generic: FqMatrix, label: str) -> None:
    cert.criterion["corollary_form"] = label
    cert.criterion["corollary_matrix"] = predicted
    same = predicted.entries == generic.entries
    cert.criterion["corollary_matches_generic"] = same
    if not same:
        raise OracleDisagreement(cert)


def corollary_build(variant: str, ctx: FieldCtx, oracle: bool = True, **params) -> Certificate:
    """Assemble one of the corollary families and delegate to the theorem.

    Parameters by variant (all maps are built as Tr(beta x + H(L(x)))):

    ``2.1``  L = trace, gcd(p, m) = 1; ``hs``; either ``fs`` or ``betas``/``Hs``.
    ``2.2``  p odd, m = 2k, L = x - x^(q^k); ``hs``; ``fs`` or ``betas``/``Hs``.
    ``2.3``  as 2.1 with f_j = Tr(H_j(Tr x) + beta_j x); predicted (Tr(gamma_i beta_j)).
    ``2.4``  as 2.2 with gamma_j = alpha^(j-1), alpha generating F_(q^k)^*.
    ``2.8``  ``L`` given; F = x + sum theta_j f_j; predicted I + (Tr(theta_i beta_j)).
    ``2.9``  m > 3, N from the primitive ``alpha``; gammas 1, alpha, alpha^2;
             ``betas`` play the role of the printed gamma_j.
    ``3.1``  L = trace, gcd(p, m) = 1; ``gammas`` in Ker(Tr); ``hs`` self-maps.
    ``3.2``  p odd, m = 2k, L = x - x^(q^k); ``gammas``; ``hs`` self-maps.

    ``gammas`` defaults to the echelon kernel basis of L where that is the
    theorem's requirement.
    """
    p, m = ctx.p, ctx.m
    notes: list[str] = []

    def need(cond: bool, reason: str, detail: str = "") -> None:
        if not cond:
            raise HypothesisError(reason, detail)

    if variant in ("2.1", "2.3", "3.1"):
        need(m >= 2 and gcd(p, m) == 1, "gcd(p, m) must be 1", f"p={p}, m={m}")
        L = special_linearized(ctx, "trace")
    elif variant in ("2.2", "2.4", "3.2"):
        need(p % 2 == 1, "p must be odd")
        need(m % 2 == 0, "m must be even", f"m={m}")
        L = special_linearized(ctx, "diff_k", k=m // 2)
    elif variant == "2.8":
        L = params["L"]
    elif variant == "2.9":
        need(m > 3, "m must exceed 3", f"m={m}")
        alpha = params.get("alpha", ctx.primitive)
        need(alpha != 0 and ctx.order(alpha) == ctx.size - 1, "alpha not primitive")
        L = special_linearized(ctx, "cor29_N", alpha=alpha)
    else:
        raise ValueError(f"unknown corollary {variant!r}")

    kernel = L.structure.kernel

    if variant in ("3.1", "3.2"):
        gammas = _as_basis(ctx, params.get("gammas", kernel.vectors))
        if variant == "3.1":
            need(gammas.dim < m, "need l < m")
            need(all(g >= ctx.q for g in gammas.vectors), "gammas must lie outside F_q")
        cert = thm31(L, gammas, params["hs"], oracle=oracle)
        cert.construction["corollary"] = variant
        return cert

    if variant == "2.4":
        k = m // 2
        alpha = params.get("alpha") or subfield_primitive(ctx, k)
        need(ctx.order(alpha) == ctx.q**k - 1, "alpha must generate F_(q^k)^*")
        gammas = _as_basis(ctx, [ctx.pow(alpha, j) for j in range(k)])
    elif variant == "2.9":
        gammas = _as_basis(ctx, [1, alpha, ctx.mul(alpha, alpha)])
    else:
        gammas = _as_basis(ctx, params.get("gammas", kernel.vectors))
    if variant in ("2.1", "2.3"):
        need(all(g >= ctx.q for g in gammas.vectors), "gammas must lie outside F_q")

    betas = params.get("betas")
    if "fs" in params and variant in ("2.1", "2.2"):
        fs = list(params["fs"])
        betas = None
    else:
        need(betas is not None and "Hs" in params, "betas and Hs required")
        fs = _maps_from(ctx, L, betas, params["Hs"])

    if variant in ("2.8", "2.9"):
        cert = thm22(gammas, fs, oracle=oracle)
        predicted = FqMatrix.identity(ctx, gammas.dim) + _trace_matrix(ctx, gammas.vectors, betas)
        label = "I + (Tr(theta_i beta_j))" if variant == "2.8" else "I + (Tr(alpha^(i-1) gamma_j))"
        cert.criterion["det"] = det(predicted)
        if variant == "2.9":
            cert.criterion["printed_form_matrix"] = _cor29_printed(ctx, alpha, betas)
            notes.append(
                "printed matrix repeats gamma_2 in the third column of rows 2 and 3; "
                "the general form with gamma_3 is used for the verdict"
            )
            cert.construction["N"] = _elements(ctx, L.coeffs)
        _check_predicted(cert, predicted, cert.criterion["matrix"], label)
    else:
        cert = thm21(L, gammas, params["hs"], fs, oracle=oracle)
        if betas is not None:
            label = "(Tr(alpha^(i-1) beta_j))" if variant == "2.4" else "(Tr(gamma_i beta_j))"
            _check_predicted(cert, _trace_matrix(ctx, gammas.vectors, betas), cert.criterion["matrix"], label)
    cert.construction["corollary"] = variant
    cert.notes.extend(notes)
    return cert


def _cor29_printed(ctx: FieldCtx, alpha: int, g: Sequence[int]) -> FqMatrix:
    tr, mul = ctx.trace, ctx.mul
    a2 = mul(alpha, alpha)
    one = lambda v: ctx.add(1, v)  # noqa: E731
    rows = [
        [one(tr(g[0])), tr(g[1]), tr(g[2])],
        [tr(mul(alpha, g[0])), one(tr(mul(alpha, g[1]))), tr(mul(alpha, g[1]))],
        [tr(mul(a2, g[0])), tr(mul(a2, g[1])), one(tr(mul(a2, g[1])))],
    ]
    return FqMatrix.from_rows(ctx, rows, 3)


def example_assemble(which: str, ctx: FieldCtx, oracle: bool = True, **params) -> Certificate:
    """Build the two worked examples over F_{q^4} and compare their printed determinants.

    ``2.1``: F = x^(q^2) - x + sum_j gamma_j f_j(x)^(t_j), gamma = (1, alpha) with
    alpha in F_(q^2) outside F_q, f_j = Tr(H_j(x^(q^2) - x) + beta_j x).
    ``2.2``: F = Tr(x) + sum_i alpha^i D_(t_i)(f_i(x), 1) with alpha primitive,
    f_i = Tr(H_i(Tr x) + beta_i x).

    Parameters: ``betas``, ``Hs``, ``ts`` and optionally ``alpha``.
    """
    if ctx.p == 2:
        raise HypothesisError("p must be odd")
    if ctx.m != 4:
        raise HypothesisError("examples live in F_(q^4)", f"m={ctx.m}")
    betas, Hs, ts = list(params["betas"]), list(params["Hs"]), list(params["ts"])
    q = ctx.q
    if which == "2.1":
        if len(betas) != 2:
            raise HypothesisError("Example 2.1 takes two betas")
        alpha = params.get("alpha") or _quadratic_nonbase(ctx)
        if alpha < q or ctx.frob(alpha, 2) != alpha:
            raise HypothesisError("alpha must lie in F_(q^2) outside F_q")
        L = LinearizedPoly.from_terms(ctx, {2: 1, 0: ctx.neg(1)})
        hs = [FqPermSpec(ctx, "power", t=t) for t in ts]
        fs = [make_translator_map(b, H, L) for b, H in zip(betas, Hs)]
        gammas = [1, alpha]
        direct = L.table
        for g, t, f in zip(gammas, ts, fs):
            direct = ctx.vadd(direct, ctx.vmul(g, _vpow(ctx, f.table, t)))
        printed = FqMatrix.from_rows(
            ctx,
            [[ctx.trace(b) for b in betas], [ctx.trace(ctx.mul(alpha, b)) for b in betas]],
            2,
        )
        cert = thm21(L, gammas, hs, fs, oracle=oracle)
        if not np.array_equal(direct, cert.F.table):
            raise AssertionError("example table differs from the theorem's construction")
        d = det(printed)
        cert.criterion["printed_matrix"] = printed
        cert.criterion["printed_det"] = d
        cert.criterion["printed_verdict"] = d != 0
        cert.construction.update(kind="example2.1", alpha=encode_element(ctx, alpha), ts=ts)
        if (d != 0) != cert.verdict:
            raise OracleDisagreement(cert)
        return cert

    if which == "2.2":
        if len(betas) != 3:
            raise HypothesisError("Example 2.2 takes three betas")
        alpha = params.get("alpha") or ctx.primitive
        if ctx.order(alpha) != ctx.size - 1:
            raise HypothesisError("alpha not primitive")
        gammas = [ctx.pow(alpha, i) for i in (1, 2, 3)]
        if not independent(ctx, gammas):
            raise HypothesisError("alpha, alpha^2, alpha^3 not independent")
        # The determinant test treats alpha^i as translators of the f_j, which
        # needs alpha^i in Ker(Tr).
        outside = [i for i, g in zip((1, 2, 3), gammas) if ctx.trace(g) != 0]
        if outside:
            raise HypothesisError("not a basis of Ker(L)", f"Tr(alpha^{outside[0]}) != 0")
        L = special_linearized(ctx, "trace")
        hs = [FqPermSpec(ctx, "dickson", t=t) for t in ts]
        fs = [make_translator_map(b, H, L) for b, H in zip(betas, Hs)]
        direct = L.table
        for g, t, f in zip(gammas, ts, fs):
            direct = ctx.vadd(direct, ctx.vmul(g, dickson_vec(ctx, t, f.table)))
        cert = thm21(L, gammas, hs, fs, oracle=oracle)
        if not np.array_equal(direct, cert.F.table):
            raise AssertionError("example table differs from the theorem's construction")
        printed = _trace_matrix(ctx, gammas, betas)
        d = det(printed)
        cert.criterion["printed_matrix"] = printed
        cert.criterion["printed_det"] = d
        cert.criterion["printed_verdict"] = d != 0
        cert.construction.update(kind="example2.2", alpha=encode_element(ctx, alpha), ts=ts)
        if (d != 0) != cert.verdict:
            raise OracleDisagreement(cert)
        return cert
    raise ValueError(f"unknown example {which!r}")


def _vpow(ctx: FieldCtx, xs: np.ndarray, t: int) -> np.ndarray:
    t_ = ctx._tables
    xs = np.asarray(xs, dtype=np.int64)
    out = t_.exp[(t_.log[xs] * t) % (ctx.size - 1)]
    return np.where(xs == 0, 0, out)


def _quadratic_nonbase(ctx: FieldCtx) -> int:
    """Smallest element of F_(q^2) outside F_q."""
    for x in range(ctx.q, ctx.size):
        if ctx.frob(x, 2) == x:
            return x
    raise RuntimeError("F_(q^2) is not a subfield")
