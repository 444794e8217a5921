"""JSON wire forms for elements, matrices, maps and linearized polynomials."""

from __future__ import annotations

from typing import Any

import numpy as np

from .field import FieldCtx, FieldError
from .linalg import FqMatrix
from .linearized import LinearizedPoly
from .translators import FqMap, SelfMap, describe_map


def encode_element(ctx: FieldCtx, x: int, both: bool = True) -> Any:
    if not both:
        return int(x)
    return {"index": int(x), "coeffs": ctx.coeffs(int(x))}


def decode_element(ctx: FieldCtx, obj: Any) -> int:
    """Accept a canonical index, a nested coefficient array or {"index": ...}."""
    if isinstance(obj, dict):
        if "index" in obj:
            x = int(obj["index"])
            if "coeffs" in obj and ctx.from_coeffs(obj["coeffs"]) != x:
                raise FieldError("index and coeffs disagree")
        else:
            x = ctx.from_coeffs(obj["coeffs"])
    elif isinstance(obj, (list, tuple)):
        x = ctx.from_coeffs(obj)
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        x = int(obj)
    else:
        raise FieldError(f"cannot read an element from {obj!r}")
    if not 0 <= x < ctx.size:
        raise FieldError(f"index {x} outside F_{ctx.size}")
    return x


def encode_sub(ctx: FieldCtx, c: int, both: bool = False) -> Any:
    if not both:
        return int(c)
    return {"index": int(c), "coeffs": ctx.inner_ref.coeffs(int(c))}


def decode_sub(ctx: FieldCtx, obj: Any) -> int:
    if isinstance(obj, dict):
        c = int(obj["index"]) if "index" in obj else ctx.inner_ref.index(obj["coeffs"])
    elif isinstance(obj, (list, tuple)):
        if len(obj) != ctx.n:
            raise FieldError(f"an F_q element has {ctx.n} coefficients")
        c = ctx.inner_ref.index(obj)
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        c = int(obj)
    else:
        raise FieldError(f"cannot read a subfield element from {obj!r}")
    if not 0 <= c < ctx.q:
        raise FieldError(f"index {c} outside F_{ctx.q}")
    return c


def encode_matrix(M: FqMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": M.to_lists()}


def decode_matrix(ctx: FieldCtx, obj: dict) -> FqMatrix:
    rows = [[decode_sub(ctx, v) for v in r] for r in obj["entries"]]
    M = FqMatrix.from_rows(ctx, rows, obj.get("cols", len(rows[0]) if rows else 0))
    if M.rows != obj.get("rows", M.rows):
        raise FieldError("row count does not match entries")
    return M


def encode_linearized(L: LinearizedPoly, both: bool = False) -> list:
    return [encode_element(L.ctx, a, both) for a in L.coeffs]


def decode_linearized(ctx: FieldCtx, obj: list) -> LinearizedPoly:
    return LinearizedPoly(ctx, tuple(decode_element(ctx, a) for a in obj))


def encode_fqmap(f: FqMap) -> dict:
    return {"table": [int(v) for v in f.table], "description": describe_map(f)}


def decode_fqmap(ctx: FieldCtx, obj: dict) -> FqMap:
    return FqMap(ctx, np.array([decode_sub(ctx, v) for v in obj["table"]], dtype=np.int64))


def encode_selfmap(H: SelfMap) -> dict:
    return {"table": [int(v) for v in H.table], "description": H.description}


def decode_selfmap(ctx: FieldCtx, obj: dict) -> SelfMap:
    return SelfMap(ctx, np.array([decode_element(ctx, v) for v in obj["table"]], dtype=np.int64))
