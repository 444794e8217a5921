"""Randomised criterion-versus-oracle agreement sweeps.

Each trial draws a random instance satisfying a theorem's hypotheses, runs
the construction with the oracle switched on and records any disagreement.
Trials alternate between untargeted draws and draws steered towards a
positive or a negative criterion verdict, so both directions of every
equivalence are exercised.  A trial's randomness depends only on
(seed, theorem, field, trial index), which keeps reports reproducible
whatever the execution order.
"""

from __future__ import annotations

import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .constructions import Certificate, FqPermSpec, OracleDisagreement, complete_mapping, thm21, thm22, thm31
from .field import FieldCtx, make_field
from .linalg import FqMatrix, det, null_space, solve
from .linearized import LinearizedPoly, SubspaceBasis, UnsatisfiableError, random_subspace_basis, sample_linearized
from .translators import SelfMap, make_translator_map

THEOREMS = ("2.1", "2.2", "3.1", "2.10")

# Largest kernel searched exhaustively by the trace-difference criterion.
MAX_KERNEL_SIZE = 729


@dataclass
class SweepReport:
    trials: int = 0
    agreements: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    seed: int = 0
    elapsed: float = 0.0
    redrawn: int = 0
    classes: dict[str, dict[str, int]] = field(default_factory=dict)
    # theorem -> "p,n,m" -> verdict counts
    field_classes: dict[str, dict[str, dict[str, int]]] = field(default_factory=dict)
    unsatisfiable: list[str] = field(default_factory=list)

    def to_dict(self, timing: bool = False) -> dict:
        """JSON form; wall time is left out unless asked for so that
        reports for the same seed serialize identically."""
        out = {
            "trials": self.trials,
            "agreements": self.agreements,
            "counterexamples": self.counterexamples,
            "seed": self.seed,
            "redrawn": self.redrawn,
            "classes": self.classes,
            "field_classes": self.field_classes,
            "unsatisfiable": self.unsatisfiable,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def sweep_fields(max_size: int = 6561, primes: Iterable[int] = (2, 3, 5), min_m: int = 2) -> list[tuple[int, int, int]]:
    """All (p, n, m) with m >= min_m and (p^n)^m <= max_size."""
    out = []
    for p in primes:
        total = 1
        while p ** (total + 1) <= max_size:
            total += 1
        for N in range(1, total + 1):
            for m in range(min_m, N + 1):
                if N % m == 0:
                    out.append((p, N // m, m))
    return out


# ---------------------------------------------------------------------------
# Random building blocks
# ---------------------------------------------------------------------------


def _random_matrix(ctx: FieldCtx, rng: np.random.Generator, k: int) -> list[list[int]]:
    return [[int(v) for v in rng.integers(0, ctx.q, k)] for _ in range(k)]


def _nonsingular(ctx: FieldCtx, rng: np.random.Generator, k: int) -> list[list[int]]:
    while True:
        M = _random_matrix(ctx, rng, k)
        if det(FqMatrix.from_rows(ctx, M, k)):
            return M


def _singular(ctx: FieldCtx, rng: np.random.Generator, k: int) -> list[list[int]]:
    """Random matrix whose column ``j`` is a combination of the others."""
    M = _random_matrix(ctx, rng, k)
    j = int(rng.integers(k))
    coeffs = [int(v) for v in rng.integers(0, ctx.q, k)]
    for i in range(k):
        acc = 0
        for c in range(k):
            if c != j:
                acc = ctx.add(acc, ctx.mul(coeffs[c], M[i][c]))
        M[i][j] = acc
    return M


def _shift(ctx: FieldCtx, M: list[list[int]], c: int) -> list[list[int]]:
    """M - c*I."""
    return [[ctx.sub(v, c) if i == j else v for j, v in enumerate(row)] for i, row in enumerate(M)]


def _betas_for(ctx: FieldCtx, rng: np.random.Generator, gammas: Sequence[int], B: list[list[int]]) -> list[int]:
    """Random beta_j with Tr(gamma_i beta_j) = B[i][j]."""
    T = FqMatrix.from_rows(
        ctx, [[ctx.trace(ctx.mul(g, ctx.q**c)) for c in range(ctx.m)] for g in gammas], ctx.m
    )
    free = null_space(T)
    betas = []
    for j in range(len(B[0])):
        coords = solve(T, [B[i][j] for i in range(len(gammas))])
        assert coords is not None, "trace form is non-degenerate"
        for v in free:
            c = int(rng.integers(ctx.q))
            if c:
                coords = [ctx.add(a, ctx.mul(c, b)) for a, b in zip(coords, v)]
        betas.append(ctx.from_coords(coords))
    return betas


def _random_perm_spec(ctx: FieldCtx, rng: np.random.Generator) -> FqPermSpec:
    q = ctx.q
    roll = rng.integers(3)
    if roll == 0:
        ts = [t for t in range(1, min(2 * q, 64)) if np.gcd(t, q - 1) == 1]
        return FqPermSpec(ctx, "power", t=int(rng.choice(ts)))
    if roll == 1 and ctx.p > 2:
        ts = [t for t in range(1, min(2 * q + 2, 64)) if np.gcd(t, q * q - 1) == 1]
        return FqPermSpec(ctx, "dickson", t=int(rng.choice(ts)))
    return FqPermSpec(ctx, "table", table=tuple(int(v) for v in rng.permutation(q)))


def _random_selfmap(ctx: FieldCtx, rng: np.random.Generator) -> SelfMap:
    return SelfMap(ctx, rng.integers(0, ctx.size, ctx.size), {"kind": "random"})


def _requirements(theorem: str, ctx: FieldCtx) -> dict:
    """Kernel requirements on L for each theorem's instances."""
    if theorem in ("2.1", "3.1"):
        req = {"trivial_intersection": True, "min_kernel_dim": 1}
        if theorem == "3.1":
            dim = 0
            while ctx.q ** (dim + 1) <= MAX_KERNEL_SIZE:
                dim += 1
            req["max_kernel_dim"] = dim
        return req
    return {"min_kernel_dim": 1}


def _target(trial: int) -> bool | None:
    return (None, True, False)[trial % 3]


# ---------------------------------------------------------------------------
# Instance generators: each returns the certificate of one checked instance
# ---------------------------------------------------------------------------


def _instance_thm21(L: LinearizedPoly, rng: np.random.Generator, target: bool | None) -> Certificate:
    ctx = L.ctx
    kernel = L.structure.kernel
    gammas = random_subspace_basis(kernel, kernel.dim, rng)
    k = gammas.dim
    if target is None:
        betas = [int(v) for v in rng.integers(0, ctx.size, k)]
    else:
        B = _nonsingular(ctx, rng, k) if target else _singular(ctx, rng, k)
        betas = _betas_for(ctx, rng, gammas.vectors, B)
    fs = [make_translator_map(b, _random_selfmap(ctx, rng), L, verify=False) for b in betas]
    hs = [_random_perm_spec(ctx, rng) for _ in range(k)]
    return thm21(L, gammas, hs, fs)


def _thm22_gammas(L: LinearizedPoly, rng: np.random.Generator) -> SubspaceBasis:
    kernel = L.structure.kernel
    k = int(rng.integers(1, kernel.dim + 1))
    return random_subspace_basis(kernel, k, rng)


def _instance_thm22(L: LinearizedPoly, rng: np.random.Generator, target: bool | None) -> Certificate:
    ctx = L.ctx
    gammas = _thm22_gammas(L, rng)
    k = gammas.dim
    if target is None:
        betas = [int(v) for v in rng.integers(0, ctx.size, k)]
    else:
        C = _nonsingular(ctx, rng, k) if target else _singular(ctx, rng, k)
        betas = _betas_for(ctx, rng, gammas.vectors, _shift(ctx, C, 1))
    fs = [make_translator_map(b, _random_selfmap(ctx, rng), L, verify=False) for b in betas]
    return thm22(gammas, fs)


def _instance_cm(L: LinearizedPoly, rng: np.random.Generator, target: bool | None) -> Certificate:
    ctx = L.ctx
    gammas = _thm22_gammas(L, rng)
    k = gammas.dim
    if target is None:
        betas = [int(v) for v in rng.integers(0, ctx.size, k)]
    else:
        if target:
            for _ in range(1000):
                A = _random_matrix(ctx, rng, k)
                if det(FqMatrix.from_rows(ctx, _shift(ctx, A, ctx.neg(1)), k)) and det(
                    FqMatrix.from_rows(ctx, _shift(ctx, A, ctx.neg(2)), k)
                ):
                    break
        else:
            shift = 1 if rng.integers(2) else 2
            A = _shift(ctx, _singular(ctx, rng, k), shift)
        betas = _betas_for(ctx, rng, gammas.vectors, A)
    fs = [make_translator_map(b, _random_selfmap(ctx, rng), L, verify=False) for b in betas]
    return complete_mapping(gammas, fs)


def _trace_one(ctx: FieldCtx) -> int:
    """An element with trace 1."""
    for y in range(1, ctx.size):
        t = ctx.trace(y)
        if t:
            return ctx.div(y, t)
    raise RuntimeError("trace is identically zero")


def _hs_with_traces(ctx: FieldCtx, rng: np.random.Generator, traces: Sequence[np.ndarray]) -> list[SelfMap]:
    """Random self-maps h_i with Tr(h_i(x)) = traces[i][x]."""
    c = _trace_one(ctx)
    out = []
    for t in traces:
        r = rng.integers(0, ctx.size, ctx.size)
        kernel_part = ctx.vsub(r, ctx.vmul(ctx.vtrace(r), c))
        out.append(SelfMap(ctx, ctx.vadd(ctx.vmul(t, c), kernel_part), {"kind": "random-trace-pattern"}))
    return out


def _instance_thm31(L: LinearizedPoly, rng: np.random.Generator, target: bool | None) -> Certificate:
    ctx = L.ctx
    kernel = L.structure.kernel
    k = kernel.dim
    if target is None:
        l = int(rng.integers(1, k + 1))
        gammas = random_subspace_basis(kernel, l, rng)
        return thm31(L, gammas, [_random_selfmap(ctx, rng) for _ in range(l)])
    # The criterion only sees the trace patterns tau_i = Tr(h_i); F permutes
    # iff (tau_1..tau_l) is injective on every coset of Ker(L), which needs
    # l = k.  Build a bijection per coset (cosets are the fibres of L), then
    # break one coset for the negative class.
    gammas = random_subspace_basis(kernel, k, rng)
    coset = L.table
    order = np.lexsort((rng.random(ctx.size), coset))
    ranks = np.empty(ctx.size, dtype=np.int64)
    sizes = np.bincount(coset)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    ranks[order] = np.arange(ctx.size) - np.repeat(starts, sizes)[np.arange(ctx.size)]
    if not target:
        victim = int(rng.choice(np.flatnonzero(sizes)))
        members = np.flatnonzero(coset == victim)
        a, b = rng.choice(members, 2, replace=False)
        ranks[a] = ranks[b]
    traces = [(ranks // ctx.q**i) % ctx.q for i in range(k)]
    return thm31(L, gammas, _hs_with_traces(ctx, rng, traces))


GENERATORS = {
    "2.1": _instance_thm21,
    "2.2": _instance_thm22,
    "2.10": _instance_cm,
    "3.1": _instance_thm31,
}


def _rng(seed: int, theorem: str, params: tuple[int, int, int], *extra: int) -> np.random.Generator:
    key = [seed, zlib.crc32(theorem.encode()), *params, *extra]
    return np.random.default_rng(np.random.SeedSequence(key))


def run_trial(
    theorem: str, params: tuple[int, int, int], seed: int, trial: int, L: LinearizedPoly | Sequence[int]
) -> dict:
    """One trial on a given L (or its coefficients); returns a small record
    that carries the certificate only on disagreement."""
    if not isinstance(L, LinearizedPoly):
        L = LinearizedPoly(make_field(*params), tuple(int(c) for c in L))
    rng = _rng(seed, theorem, params, 1, trial)
    try:
        cert = GENERATORS[theorem](L, rng, _target(trial))
        return {"ok": True, "verdict": cert.verdict}
    except OracleDisagreement as exc:
        return {"ok": False, "verdict": exc.certificate.verdict, "certificate": exc.certificate.to_dict()}


def _run_chunk(jobs: list[tuple]) -> list[dict]:
    return [run_trial(*j) for j in jobs]


def agreement_sweep(
    theorems: Iterable[str] = THEOREMS,
    fields: Iterable[tuple[int, int, int]] | None = None,
    trials: int = 200,
    seed: int = 0,
    workers: int = 1,
) -> SweepReport:
    """Run ``trials`` random instances per (theorem, field).

    The linearized polynomials for one (theorem, field) pair come from a
    single rejection-sampling stream; every other parameter of a trial is
    drawn from a stream keyed by the trial index.  The complete-mapping
    criterion only applies in odd characteristic, so even-characteristic
    fields are skipped for it.
    """
    start = time.perf_counter()
    fields = [tuple(f) for f in (fields if fields is not None else sweep_fields())]
    report = SweepReport(seed=seed)
    jobs = []
    for th in theorems:
        if th not in GENERATORS:
            raise ValueError(f"unknown theorem {th!r}")
        for params in fields:
            if trials <= 0 or (th == "2.10" and params[0] == 2):
                continue
            ctx = make_field(*params)
            stats: dict = {}
            try:
                Ls = sample_linearized(ctx, _rng(seed, th, params, 0), trials, stats=stats, **_requirements(th, ctx))
            except UnsatisfiableError as exc:
                report.unsatisfiable.append(f"{th} {params}: {exc}")
                continue
            finally:
                report.redrawn += stats.get("rejected", 0)
            # Workers get coefficients; in-process trials reuse the sampled
            # polynomials and the structures computed while screening them.
            jobs.extend((th, params, seed, t, L.coeffs if workers > 1 else L) for t, L in enumerate(Ls))
    if workers > 1 and jobs:
        chunks = [jobs[i : i + 64] for i in range(0, len(jobs), 64)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for part in pool.map(_run_chunk, chunks) for r in part]
    else:
        results = [run_trial(*j) for j in jobs]

    for (th, params, *_), res in zip(jobs, results):
        report.trials += 1
        key = "true" if res["verdict"] else "false"
        report.classes.setdefault(th, {"true": 0, "false": 0})[key] += 1
        per_field = report.field_classes.setdefault(th, {})
        per_field.setdefault(",".join(map(str, params)), {"true": 0, "false": 0})[key] += 1
        if res["ok"]:
            report.agreements += 1
        else:
            report.counterexamples.append(res["certificate"])
    report.elapsed = time.perf_counter() - start
    return report
