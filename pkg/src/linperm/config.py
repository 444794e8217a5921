"""JSON construction configs: parsing and dispatch to the constructions.

A config names a theorem (or a corollary/example family), a field and the
ingredients.  Elements may be written as canonical indices, nested
coefficient lists or {"index": ...} objects (see :mod:`linperm.wire`).

    {"theorem": "2.1", "field": {"p": 3, "n": 1, "m": 2},
     "L": {"kind": "diff_k", "k": 1}, "gammas": "kernel",
     "hs": [{"kind": "power", "t": 1}],
     "fs": [{"beta": 1, "H": {"kind": "random", "seed": 42}, "L": "same"}],
     "oracle": true}
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .constructions import (
    Certificate,
    FqPermSpec,
    HypothesisError,
    complete_mapping,
    corollary_build,
    example_assemble,
    thm21,
    thm22,
    thm31,
)
from .field import FieldCtx, FieldError, make_field
from .linearized import LinearizedPoly, special_linearized
from .translators import FqMap, SelfMap, make_translator_map
from .wire import decode_element, decode_sub

THEOREMS = ("2.1", "2.2", "2.10", "3.1", "corollary", "example")


class ConfigError(ValueError):
    """The config is malformed (as opposed to violating a hypothesis)."""


def _require(cfg: dict, key: str) -> Any:
    if key not in cfg:
        raise ConfigError(f"missing key {key!r}")
    return cfg[key]


def parse_field(obj: Any, max_size: int | None = None) -> FieldCtx:
    if not isinstance(obj, dict):
        raise ConfigError("field must be an object with p, n, m")
    try:
        return make_field(int(obj["p"]), int(obj.get("n", 1)), int(obj["m"]), max_size=max_size)
    except KeyError as exc:
        raise ConfigError(f"field is missing {exc.args[0]!r}") from None


def parse_L(ctx: FieldCtx, spec: Any) -> LinearizedPoly:
    """{"kind": name, ...params} or {"coeffs": [...]} or a bare coefficient list."""
    if isinstance(spec, list):
        return LinearizedPoly(ctx, tuple(decode_element(ctx, a) for a in spec))
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot read a linearized polynomial from {spec!r}")
    if "coeffs" in spec:
        return LinearizedPoly(ctx, tuple(decode_element(ctx, a) for a in spec["coeffs"]))
    kind = _require(spec, "kind")
    params = {}
    if "k" in spec:
        params["k"] = int(spec["k"])
    for key in ("alpha", "gamma"):
        if key in spec:
            params[key] = decode_element(ctx, spec[key])
    try:
        return special_linearized(ctx, kind, **params)
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise HypothesisError("invalid linearized polynomial", str(exc)) from None
        raise ConfigError(str(exc)) from None


def parse_selfmap(ctx: FieldCtx, spec: Any) -> SelfMap:
    """Kinds: zero, identity, random (seed), poly (coeffs), table."""
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot read a map from {spec!r}")
    kind = _require(spec, "kind")
    if kind == "zero":
        return SelfMap.zero(ctx)
    if kind == "identity":
        return SelfMap.identity(ctx)
    if kind == "random":
        return SelfMap.random(ctx, int(_require(spec, "seed")))
    if kind == "poly":
        return SelfMap.polynomial(ctx, [decode_element(ctx, c) for c in _require(spec, "coeffs")])
    if kind == "table":
        table = np.array([decode_element(ctx, v) for v in _require(spec, "table")], dtype=np.int64)
        return SelfMap(ctx, table, {"kind": "table", "table": table.tolist()})
    raise ConfigError(f"unknown map kind {kind!r}")


def parse_perm(ctx: FieldCtx, spec: Any) -> FqPermSpec:
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot read a permutation of F_q from {spec!r}")
    kind = _require(spec, "kind")
    if kind in ("power", "dickson"):
        return FqPermSpec(ctx, kind, t=int(_require(spec, "t")))
    if kind == "table":
        return FqPermSpec(ctx, "table", table=tuple(decode_sub(ctx, v) for v in _require(spec, "table")))
    raise ConfigError(f"unknown permutation kind {kind!r}")


def parse_fqmap(ctx: FieldCtx, spec: Any, L: LinearizedPoly | None) -> FqMap:
    """{"beta", "H", "L"} (L may be "same"), {"kind": "trace"} or {"table": [...]}."""
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot read a map to F_q from {spec!r}")
    if "table" in spec:
        return FqMap(ctx, np.array([decode_sub(ctx, v) for v in spec["table"]], dtype=np.int64))
    if spec.get("kind") == "trace":
        return FqMap.trace_linear(ctx, decode_element(ctx, spec.get("beta", 1)))
    beta = decode_element(ctx, _require(spec, "beta"))
    H = parse_selfmap(ctx, spec.get("H", {"kind": "zero"}))
    Lspec = spec.get("L", "same")
    if Lspec == "same":
        if L is None:
            raise ConfigError('"L": "same" needs a top-level L')
        own = L
    else:
        own = parse_L(ctx, Lspec)
    try:
        return make_translator_map(beta, H, own)
    except ValueError as exc:
        raise HypothesisError("L is bijective", str(exc)) from None


def _gammas(ctx: FieldCtx, cfg: dict, L: LinearizedPoly | None) -> list[int] | None:
    spec = cfg.get("gammas")
    if spec is None:
        return None
    if spec == "kernel":
        if L is None:
            raise ConfigError('"gammas": "kernel" needs an L')
        return list(L.structure.kernel.vectors)
    return [decode_element(ctx, g) for g in spec]


def build(cfg: dict, max_size: int | None = None) -> Certificate:
    """Run the construction a config describes; the certificate embeds the config."""
    if not isinstance(cfg, dict):
        raise ConfigError("a config must be a JSON object")
    theorem = str(_require(cfg, "theorem"))
    if theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    ctx = parse_field(_require(cfg, "field"), max_size)
    oracle = bool(cfg.get("oracle", True))
    L = parse_L(ctx, cfg["L"]) if "L" in cfg else None
    gammas = _gammas(ctx, cfg, L)

    if theorem == "2.1":
        if L is None or gammas is None:
            raise ConfigError("theorem 2.1 needs L and gammas")
        hs = [parse_perm(ctx, h) for h in _require(cfg, "hs")]
        fs = [parse_fqmap(ctx, f, L) for f in _require(cfg, "fs")]
        cert = thm21(L, gammas, hs, fs, oracle=oracle)
    elif theorem in ("2.2", "2.10"):
        if gammas is None:
            raise ConfigError(f"theorem {theorem} needs gammas")
        fs = [parse_fqmap(ctx, f, L) for f in _require(cfg, "fs")]
        cert = (thm22 if theorem == "2.2" else complete_mapping)(gammas, fs, oracle=oracle)
    elif theorem == "3.1":
        if L is None or gammas is None:
            raise ConfigError("theorem 3.1 needs L and gammas")
        hs = [parse_selfmap(ctx, h) for h in _require(cfg, "hs")]
        cert = thm31(L, gammas, hs, oracle=oracle)
    elif theorem == "corollary":
        cert = _build_corollary(ctx, cfg, L, gammas, oracle)
    else:
        which = str(_require(cfg, "which"))
        params = {
            "betas": [decode_element(ctx, b) for b in _require(cfg, "betas")],
            "Hs": [parse_selfmap(ctx, H) for H in _require(cfg, "Hs")],
            "ts": [int(t) for t in _require(cfg, "ts")],
        }
        if "alpha" in cfg:
            params["alpha"] = decode_element(ctx, cfg["alpha"])
        cert = example_assemble(which, ctx, oracle=oracle, **params)
    cert.config = cfg
    return cert


def _build_corollary(ctx: FieldCtx, cfg: dict, L, gammas, oracle: bool) -> Certificate:
    variant = str(_require(cfg, "variant"))
    params: dict[str, Any] = {}
    if gammas is not None:
        params["gammas"] = gammas
    if L is not None:
        params["L"] = L
    if "alpha" in cfg:
        params["alpha"] = decode_element(ctx, cfg["alpha"])
    if "betas" in cfg:
        params["betas"] = [decode_element(ctx, b) for b in cfg["betas"]]
    if "Hs" in cfg:
        params["Hs"] = [parse_selfmap(ctx, H) for H in cfg["Hs"]]
    if "hs" in cfg:
        parse = parse_selfmap if variant in ("3.1", "3.2") else parse_perm
        params["hs"] = [parse(ctx, h) for h in cfg["hs"]]
    if "fs" in cfg:
        params["fs"] = [parse_fqmap(ctx, f, L) for f in cfg["fs"]]
    try:
        return corollary_build(variant, ctx, oracle=oracle, **params)
    except KeyError as exc:
        raise ConfigError(f"corollary {variant} needs {exc.args[0]!r}") from None
