"""Cover description files and canonical JSON.

A cover description is ``{"p": 2, "e": 1, "tame_index": 1, "rhs": ["x^-1"],
"precision": 64}``; ``e``, ``tame_index`` and ``precision`` are optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .errors import ParseError
from .ffield import SUPPORTED_PRIMES, field
from .laurent import parse_series
from .tower import ASTower

SCHEMA = 1


def canonical_json(obj: Any) -> str:
    """Key-sorted JSON; equal reports serialize to identical bytes."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=True)


@dataclass
class CoverSpec:
    p: int
    e: int
    rhs: list
    tame_index: int = 1
    precision: Optional[int] = None

    def to_json(self) -> dict:
        d = {"schema": SCHEMA, "p": self.p, "e": self.e, "tame_index": self.tame_index,
             "rhs": list(self.rhs)}
        if self.precision is not None:
            d["precision"] = self.precision
        return d

    def series(self) -> list:
        F = field(self.p, self.e)
        return [parse_series(s, F) for s in self.rhs]

    def tower(self) -> ASTower:
        """Build and validate (raises ``InvalidTower`` on rejection)."""
        return ASTower(field(self.p, self.e), self.series(), self.tame_index)


def _int_field(d: dict, key: str, default=None) -> int:
    v = d.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"field {key!r} must be an integer, got {v!r}")
    return v


def parse_cover_spec(data: Any) -> CoverSpec:
    """Check the shape of a decoded document (or JSON text)."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("cover description must be a JSON object")
    if "p" not in data:
        raise ParseError("cover description needs a 'p' field")
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ParseError(f"unsupported schema version {schema!r}")
    p = _int_field(data, "p")
    e = _int_field(data, "e", 1)
    if p not in SUPPORTED_PRIMES or not 1 <= e <= 4:
        raise ParseError(f"unsupported field parameters p={p}, e={e}")
    tame = _int_field(data, "tame_index", 1)
    rhs = data.get("rhs", [])
    if not isinstance(rhs, list) or not all(isinstance(s, str) for s in rhs):
        raise ParseError("'rhs' must be a list of series strings")
    precision = data.get("precision")
    if precision is not None:
        precision = _int_field(data, "precision")
        if precision < 1:
            raise ParseError("'precision' must be positive")
    cover = CoverSpec(p, e, list(rhs), tame, precision)
    cover.series()  # surface parse errors before any validation
    if tame < 1 or tame % p == 0:
        raise ParseError(f"tame_index {tame} must be positive and prime to p")
    return cover


def emit_cover_spec(tower: ASTower, precision: Optional[int] = None) -> dict:
    d = tower.to_json()
    if precision is not None:
        d["precision"] = precision
    return d
