"""Transcribed printed objects, loaded from ``liegeom/data/fixtures``.

Fixtures are inputs to comparisons, never oracles: the oracle is always the
exact recomputation.  Code refers to fixtures by their neutral ``key``; the
``anchor`` and ``provenance`` fields are only echoed into reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Mapping

from ..curvature import Metric, symmetric_product_matrix
from ..forms import form_from_matrix, parse_form
from ..linalg import as_matrix
from ..scalar import Scalar, parse_scalar
from ..structures import Endomorphism, parse_endomorphism

__all__ = ["Fixture", "FixtureError", "fixture", "fixture_keys", "data_text"]

SCHEMA = 1
_DIM = 6


class FixtureError(ValueError):
    """Malformed or missing fixture."""


@dataclass(frozen=True)
class Fixture:
    key: str
    anchor: str
    provenance: str
    kind: str
    algebra: str
    params: tuple[str, ...]
    doc: Mapping[str, Any]

    def value(self) -> Any:
        """Decode the payload into the matching domain object."""
        d, p = self.doc, list(self.params)
        k = self.kind
        if k == "form":
            return parse_form({**d, "params": p}, _DIM)
        if k == "form_matrix":
            return form_from_matrix(parse_endomorphism({**d, "params": p}, _DIM))
        if k == "endomorphism":
            return Endomorphism(parse_endomorphism({**d, "params": p}, _DIM))
        if k == "images":
            return Endomorphism.from_images(parse_endomorphism({**d, "params": p}, _DIM, key="images"))
        if k == "metric":
            return Metric(parse_endomorphism({**d, "params": p}, _DIM))
        if k == "symmetric_products":
            terms: dict[tuple[int, int], Scalar] = {}
            for t in d["terms"]:
                key = (t["i"], t["j"])
                terms[key] = terms.get(key, 0) + parse_scalar(t["c"], p)
            return as_matrix(symmetric_product_matrix(_DIM, terms))
        if k == "polynomials":
            return [parse_scalar(s, p) for s in d["polys"]]
        if k == "scalar":
            return parse_scalar(d["value"], p)
        if k == "assignment":
            return {name: parse_scalar(v) for name, v in d["values"].items()}
        if k == "substitutions":
            return {name: parse_scalar(v, p) for name, v in d["relations"].items()}
        raise FixtureError(f"fixture {self.key!r}: unknown kind {k!r}")

    @property
    def reference(self) -> dict[str, str]:
        return {"key": self.key, "anchor": self.anchor, "provenance": self.provenance}


def data_text(name: str) -> str:
    return resources.files("liegeom").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _index() -> dict[str, Fixture]:
    out: dict[str, Fixture] = {}
    root = resources.files("liegeom").joinpath("data", "fixtures")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        doc = json.loads(entry.read_text(encoding="utf-8"))
        if doc.get("schema") != SCHEMA:
            raise FixtureError(f"{entry.name}: unsupported schema {doc.get('schema')!r}")
        fx = Fixture(
            key=doc["key"],
            anchor=doc["anchor"],
            provenance=doc["provenance"],
            kind=doc["kind"],
            algebra=doc["algebra"],
            params=tuple(doc.get("params", ())),
            doc=doc,
        )
        if fx.key in out:
            raise FixtureError(f"duplicate fixture key {fx.key!r}")
        out[fx.key] = fx
    return out


def fixture(key: str) -> Fixture:
    try:
        return _index()[key]
    except KeyError:
        raise FixtureError(f"no fixture with key {key!r}") from None


def fixture_keys() -> list[str]:
    return sorted(_index())
