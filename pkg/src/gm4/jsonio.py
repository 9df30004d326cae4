"""Reading and writing the ``gm/1`` JSON document format.

Documents are written compactly with a fixed key order, so a document
produced by :func:`dumps_manifold` survives a read/write cycle byte for byte.
Integers beyond 2**53 in absolute value are written as decimal strings; the
reader accepts either form.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .wstructure import BlockSpec, Edge, GluingMatrix, GraphManifold

SCHEMA = "gm/1"
CONVENTIONS = ("C1", "C1T")
_SAFE = 2 ** 53


def encode_int(x: int) -> int | str:
    return x if abs(x) <= _SAFE else str(x)


def decode_int(x: Any) -> int:
    if isinstance(x, bool):
        raise ParseError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ParseError(f"expected an integer, got {x!r}")


def encode_ints(obj: Any) -> Any:
    """Recursively apply :func:`encode_int` to every int inside lists/dicts."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return encode_int(obj)
    if isinstance(obj, (list, tuple)):
        return [encode_ints(x) for x in obj]
    if isinstance(obj, dict):
        return {k: encode_ints(v) for k, v in obj.items()}
    return obj


def manifold_to_dict(g: GraphManifold) -> dict:
    doc = {
        "schema": SCHEMA,
        "blocks": [{"id": b.id, "genus": encode_int(b.genus), "boundary": encode_int(b.boundary)}
                   for b in g.blocks],
        "edges": [{"id": e.id,
                   "from": [e.source[0], e.source[1]],
                   "to": [e.target[0], e.target[1]],
                   "matrix": [[encode_int(x) for x in row] for row in e.gluing.m]}
                  for e in g.edges],
        "convention": "C1",
    }
    if g.metadata:
        doc["metadata"] = encode_ints(dict(g.metadata))
    return doc


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def dumps_manifold(g: GraphManifold) -> str:
    return dumps(manifold_to_dict(g)) + "\n"


def manifold_from_dict(doc: Any, transpose_gluing: bool = False) -> GraphManifold:
    """Build a manifold from a decoded document.

    A document whose ``convention`` is ``"C1T"`` stores transposed matrices;
    ``transpose_gluing`` forces that reading.  Either way the result is held
    in the C1 reading.
    """
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ParseError(f"unsupported schema {schema!r}")
    convention = doc.get("convention", "C1")
    if convention not in CONVENTIONS:
        raise ParseError(f"unknown convention {convention!r}")
    transpose = transpose_gluing or convention == "C1T"
    try:
        blocks = [BlockSpec(str(b["id"]), decode_int(b["genus"]), decode_int(b["boundary"]))
                  for b in doc["blocks"]]
        edges = []
        for e in doc["edges"]:
            m = e["matrix"]
            if not isinstance(m, list) or len(m) != 3 or any(not isinstance(r, list) or len(r) != 3 for r in m):
                raise ParseError(f"edge {e.get('id')!r}: matrix must be 3x3")
            gm = GluingMatrix([[decode_int(x) for x in row] for row in m])
            if transpose:
                gm = gm.transpose()
            src, dst = e["from"], e["to"]
            edges.append(Edge(str(e["id"]), (str(src[0]), decode_int(src[1])),
                              (str(dst[0]), decode_int(dst[1])), gm))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed manifold document: {exc!r}") from exc
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object")
    return GraphManifold(tuple(blocks), tuple(edges), metadata)


def loads_manifold(text: str, transpose_gluing: bool = False) -> GraphManifold:
    return load_with_reading(text, transpose_gluing)[0]


def load_with_reading(text: str, transpose_gluing: bool = False) -> tuple[GraphManifold, str]:
    """Parse a document and report which reading (``"C1"`` or ``"C1T"``) its matrices got."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    g = manifold_from_dict(doc, transpose_gluing)
    transposed = transpose_gluing or doc.get("convention") == "C1T"
    return g, "C1T" if transposed else "C1"
