"""Command-line interface.

Exit codes for ``construct`` and ``verify``:
0 permutation (criterion true, oracle agrees), 1 valid negative result,
2 invalid input or hypothesis violation, 3 criterion/oracle disagreement.
``verify`` returns 0 when every certificate rebuilds identically (whatever
its verdict), 3 on disagreement and 5 when a rebuilt certificate differs.
``reproduce`` returns 4 when it did not see both verdict classes.
``sweep`` returns 0 iff there are no counterexamples.

JSON goes to standard output (sorted keys, one document per line) and is
identical across runs with the same arguments; timings and diagnostics go
to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import numpy as np

from .config import ConfigError, build, parse_fqmap, parse_L
from .constructions import HypothesisError, OracleDisagreement, example_assemble
from .field import FieldError, make_field, max_size_from_env, prime_factors
from .linearized import SubspaceBasis, independent
from .sweep import THEOREMS, _betas_for, _nonsingular, _singular, agreement_sweep, sweep_fields
from .translators import FqMap, SelfMap, TranslatorError, all_translators

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_DISAGREE, EXIT_CLASSES, EXIT_MISMATCH = 0, 1, 2, 3, 4, 5


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _emit(obj: Any) -> None:
    sys.stdout.write(_dump(obj) + "\n")


def _err(msg: str) -> None:
    sys.stderr.write(msg.rstrip("\n") + "\n")


def _read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _describe_error(exc: Exception) -> str:
    if isinstance(exc, HypothesisError):
        return f"hypothesis violated: {exc}"
    return f"invalid input: {exc}"


INVALID = (HypothesisError, TranslatorError, FieldError, ConfigError, ValueError, KeyError, TypeError)


# ---------------------------------------------------------------------------
# field-info
# ---------------------------------------------------------------------------


def cmd_field_info(args) -> int:
    ctx = make_field(args.p, args.n, args.m)
    info = ctx.describe()
    info["primitive"] = ctx.primitive
    info["primitive_coeffs"] = ctx.coeffs(ctx.primitive)
    info["trace_of_primitive"] = ctx.trace(ctx.primitive)
    _emit(info)
    return EXIT_OK


# ---------------------------------------------------------------------------
# construct / verify
# ---------------------------------------------------------------------------


def _construct_one(cfg: Any, max_size: int | None) -> tuple[int, dict | None]:
    try:
        cert = build(cfg, max_size)
    except OracleDisagreement as exc:
        exc.certificate.config = cfg
        _err("criterion and oracle disagree")
        return EXIT_DISAGREE, exc.certificate.to_dict()
    except INVALID as exc:
        _err(_describe_error(exc))
        return EXIT_INVALID, None
    return (EXIT_OK if cert.verdict else EXIT_NEGATIVE), cert.to_dict()


def cmd_construct(args) -> int:
    cfg = _read_json(args.config)
    if args.no_oracle:
        cfg = [dict(c, oracle=False) for c in cfg] if isinstance(cfg, list) else dict(cfg, oracle=False)
    configs = cfg if isinstance(cfg, list) else [cfg]
    worst = EXIT_OK
    for c in configs:
        code, cert = _construct_one(c, args.max_size)
        if cert is not None:
            _emit(cert)
        worst = max(worst, code)
    return worst


def cmd_verify(args) -> int:
    doc = _read_json(args.certificate)
    certs = doc if isinstance(doc, list) else [doc]
    worst = EXIT_OK
    for given in certs:
        cfg = given.get("config") if isinstance(given, dict) else None
        if cfg is None:
            _err("certificate carries no config to rebuild from")
            worst = max(worst, EXIT_INVALID)
            continue
        # Verification always consults the oracle.
        code, rebuilt = _construct_one(dict(cfg, oracle=True), args.max_size)
        if rebuilt is None:
            worst = max(worst, code)
            continue
        stored = json.loads(_dump(given))
        rebuilt["config"] = cfg
        if cfg.get("oracle", True) is False:
            rebuilt["oracle"] = None
        same = json.loads(_dump(rebuilt)) == stored
        _emit({"verified": same and code in (EXIT_OK, EXIT_NEGATIVE), "verdict": rebuilt["criterion"]["verdict"]})
        if code == EXIT_DISAGREE:
            worst = max(worst, code)
        elif not same:
            _err("rebuilt certificate differs from the one given")
            worst = max(worst, EXIT_MISMATCH)
    return worst


# ---------------------------------------------------------------------------
# search-translators
# ---------------------------------------------------------------------------


def _function_from_args(ctx, args) -> FqMap:
    if args.table:
        return FqMap(ctx, np.array(_read_json(args.table), dtype=np.int64))
    if args.f_config:
        spec = _read_json(args.f_config)
        L = parse_L(ctx, spec["L"]) if isinstance(spec.get("L"), (dict, list)) else None
        return parse_fqmap(ctx, spec, L)
    xs = ctx.elements()
    builtin = args.builtin or "trace"
    if builtin == "trace":
        return FqMap.trace(ctx)
    if builtin == "zero":
        return FqMap(ctx, np.zeros(ctx.size, dtype=np.int64))
    if builtin == "trace-square":
        return FqMap(ctx, ctx.vtrace(ctx.vmul(xs, xs)))
    raise ConfigError(f"unknown builtin function {builtin!r}")


def cmd_search_translators(args) -> int:
    ctx = make_field(args.p, args.n, args.m)
    f = _function_from_args(ctx, args)
    found = all_translators(f)
    # Echelon basis of the translator subspace.
    basis: list[int] = []
    for c in found:
        if independent(ctx, basis + [c.alpha]):
            basis.append(c.alpha)
    dim = SubspaceBasis(ctx, tuple(basis)).dim
    _emit(
        {
            "field": ctx.describe(),
            "translators": [{"alpha": c.alpha, "a": c.a} for c in found],
            "count": len(found),
            "subspace": {"dimension": dim, "basis": basis, "whole_field": dim == ctx.m},
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    factors = prime_factors(q) if q > 1 else []
    if len(factors) != 1:
        raise ConfigError(f"q={q} is not a prime power")
    p = factors[0]
    n = 0
    while q > 1:
        q //= p
        n += 1
    return p, n


def _example_draw(ctx, which: str, rng: np.random.Generator, target: bool | None, alpha: int) -> dict:
    q = ctx.q
    if which == "2.1":
        ts_ok = [t for t in range(1, 2 * q) if np.gcd(t, q - 1) == 1]
        gammas, k = [1, alpha], 2
    else:
        ts_ok = [t for t in range(1, 2 * q + 2) if np.gcd(t, q * q - 1) == 1]
        gammas, k = [ctx.pow(alpha, i) for i in (1, 2, 3)], 3
    if target is None:
        betas = [int(v) for v in rng.integers(0, ctx.size, k)]
    else:
        B = _nonsingular(ctx, rng, k) if target else _singular(ctx, rng, k)
        betas = _betas_for(ctx, rng, gammas, B)
    return {
        "betas": betas,
        "Hs": [SelfMap.random(ctx, int(rng.integers(2**31))) for _ in range(k)],
        "ts": [int(rng.choice(ts_ok)) for _ in range(k)],
        "alpha": alpha,
    }


def cmd_reproduce(args) -> int:
    try:
        p, n = _prime_power(args.q)
        if p == 2:
            raise HypothesisError("p must be odd", f"q={args.q}")
        ctx = make_field(p, n, 4, max_size=args.max_size)
        if args.example == "2.1":
            alpha = next(x for x in range(ctx.q, ctx.size) if ctx.frob(x, 2) == x)
        else:
            alpha = ctx.primitive
    except INVALID as exc:
        _err(_describe_error(exc))
        return EXIT_INVALID
    rng = np.random.default_rng(args.seed)
    classes = {"true": 0, "false": 0}
    disagreements = []
    for t in range(args.trials):
        # Cycle untargeted, nonsingular and singular draws so both verdict
        # classes turn up even on fields where one of them is rare.
        params = _example_draw(ctx, args.example, rng, (None, True, False)[t % 3], alpha)
        try:
            cert = example_assemble(args.example, ctx, **params)
        except OracleDisagreement as exc:
            disagreements.append(exc.certificate.to_dict())
            continue
        except INVALID as exc:
            _err(_describe_error(exc))
            return EXIT_INVALID
        classes["true" if cert.criterion["printed_verdict"] else "false"] += 1
    summary = {
        "example": args.example,
        "q": args.q,
        "field": ctx.describe(),
        "trials": args.trials,
        "seed": args.seed,
        "agreements": args.trials - len(disagreements),
        "disagreements": disagreements,
        "classes": classes,
    }
    _emit(summary)
    if disagreements:
        return EXIT_DISAGREE
    if not (classes["true"] and classes["false"]):
        _err("both verdict classes were not observed")
        return EXIT_CLASSES
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_fields(text: str) -> list[tuple[int, int, int]]:
    out = []
    for part in text.split(";"):
        bits = [int(b) for b in part.split(",")]
        if len(bits) != 3:
            raise ConfigError(f"field {part!r} is not p,n,m")
        out.append(tuple(bits))
    return out


def cmd_sweep(args) -> int:
    theorems = [t.strip() for t in args.theorems.split(",") if t.strip()]
    unknown = [t for t in theorems if t not in THEOREMS]
    if unknown:
        _err(f"invalid input: unknown theorem(s) {', '.join(unknown)}")
        return EXIT_INVALID
    if args.fields:
        fields = _parse_fields(args.fields)
    else:
        fields = sweep_fields(args.max_size, min_m=args.min_m)
    cap = max_size_from_env()
    too_big = [f for f in fields if (f[0] ** f[1]) ** f[2] > cap]
    if too_big:
        _err(f"invalid input: fields above the size cap {cap}: {too_big}")
        return EXIT_INVALID
    report = agreement_sweep(theorems, fields, args.trials, args.seed, workers=args.workers)
    _emit(report.to_dict())
    _err(f"{report.trials} trials, {len(report.counterexamples)} counterexamples, {report.elapsed:.2f}s")
    return EXIT_OK if not report.counterexamples else EXIT_DISAGREE


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, required=True, help="characteristic")
    p.add_argument("--n", type=int, default=1, help="F_q = F_(p^n)")
    p.add_argument("--m", type=int, required=True, help="extension degree of F_(q^m) over F_q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linperm", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="canonical moduli and primitive element of a tower")
    _field_args(p)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("construct", help="build a map from a JSON config and print its certificate")
    p.add_argument("config", help="config file (a single config or a list), '-' for stdin")
    p.add_argument("--no-oracle", action="store_true", help="skip the brute-force check")
    p.add_argument("--max-size", type=int, default=None, help="field size cap")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="rebuild certificates from their configs and compare")
    p.add_argument("certificate", help="certificate file (one or a list), '-' for stdin")
    p.add_argument("--max-size", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search-translators", help="list every linear translator of f: F_(q^m) -> F_q")
    _field_args(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=("trace", "zero", "trace-square"))
    src.add_argument("--table", help="JSON list of q^m values in F_q")
    src.add_argument("--f-config", help='JSON map spec such as {"beta": 1, "H": {...}, "L": {...}}')
    p.set_defaults(func=cmd_search_translators)

    p = sub.add_parser("reproduce", help="check a worked example's determinant test against the oracle")
    p.add_argument("--example", choices=("2.1", "2.2"), required=True)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", type=int, default=None)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="criterion-versus-oracle agreement sweep")
    p.add_argument("--theorems", default=",".join(THEOREMS), help="comma list from " + ",".join(THEOREMS))
    p.add_argument("--max-size", type=int, default=6561, help="largest q^m swept")
    p.add_argument("--min-m", type=int, default=2, help="smallest extension degree swept")
    p.add_argument("--fields", help="explicit towers 'p,n,m;p,n,m' (overrides --max-size)")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("trials", "workers"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name} must be non-negative")
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        _err(f"invalid input: {exc}")
        return EXIT_INVALID
    except INVALID as exc:
        _err(_describe_error(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
