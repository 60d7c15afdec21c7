"""JSON documents for decompositions, matrix factorizations and catalog entries.

Every document carries its ring as ``field``, ``num_vars`` and ``variables``;
polynomials are written as canonical strings, so writing is deterministic.
"""

import json
from typing import IO, Any, Dict, List

from .catalog import CatalogEntry
from .fields import parse_field
from .matrix import GradedFreeModule, GradedMatrix
from .models import MatrixFactorization, StrengthDecomposition
from .parser import parse_polynomial
from .poly import Polynomial, PolynomialRing
from .report import Report

Document = Dict[str, Any]


class InvalidDocument(ValueError):
    pass


def ring_header(ring: PolynomialRing) -> Document:
    return {
        "field": ring.field.tag(),
        "num_vars": ring.num_vars,
        "variables": list(ring.names),
    }


def ring_from_document(document: Document) -> PolynomialRing:
    try:
        field = parse_field(str(document.get("field", "Q")))
        num_vars = int(document["num_vars"])
        names = document.get("variables")
        return PolynomialRing(field, num_vars, names) if names else PolynomialRing(field, num_vars)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidDocument(f"Invalid ring header: {e}") from e


def _polynomials(texts: Any, ring: PolynomialRing, key: str) -> List[Polynomial]:
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise InvalidDocument(f"{key!r} must be a list of polynomial strings")
    return [parse_polynomial(text, ring) for text in texts]


def decomposition_to_document(decomposition: StrengthDecomposition) -> Document:
    return {
        **ring_header(decomposition.ring),
        "gs": [str(g) for g in decomposition.gs],
        "hs": [str(h) for h in decomposition.hs],
    }


def decomposition_from_document(document: Document) -> StrengthDecomposition:
    """Read a decomposition; catalog documents nest it under ``decomposition``."""
    ring = ring_from_document(document)
    body = document.get("decomposition", document)
    if not isinstance(body, dict) or "gs" not in body or "hs" not in body:
        raise InvalidDocument("Document has no decomposition")
    return StrengthDecomposition.create(
        _polynomials(body["gs"], ring, "gs"), _polynomials(body["hs"], ring, "hs")
    )


def matrix_to_document(matrix: GradedMatrix) -> Document:
    return {
        "source_twists": list(matrix.source.twists),
        "target_twists": list(matrix.target.twists),
        "entries": [[str(entry) for entry in row] for row in matrix.entries],
    }


def matrix_from_document(document: Any, ring: PolynomialRing) -> GradedMatrix:
    try:
        rows = document["entries"]
        return GradedMatrix(
            ring,
            GradedFreeModule([int(t) for t in document["source_twists"]]),
            GradedFreeModule([int(t) for t in document["target_twists"]]),
            [_polynomials(row, ring, "entries") for row in rows],
        )
    except (KeyError, TypeError) as e:
        raise InvalidDocument(f"Invalid matrix: {e}") from e


def mf_to_document(mf: MatrixFactorization) -> Document:
    return {
        **ring_header(mf.ring),
        "f": str(mf.f),
        "phi": matrix_to_document(mf.phi),
        "psi": matrix_to_document(mf.psi),
    }


def mf_from_document(document: Document) -> MatrixFactorization:
    """Read a factorization; catalog documents nest the matrices under ``mf``."""
    ring = ring_from_document(document)
    if not isinstance(document.get("f"), str):
        raise InvalidDocument("Matrix factorization document needs 'f'")
    body = document
    if "phi" not in document and isinstance(document.get("mf"), dict):
        body = document["mf"]
    try:
        return MatrixFactorization(
            parse_polynomial(document["f"], ring),
            matrix_from_document(body.get("phi"), ring),
            matrix_from_document(body.get("psi"), ring),
        )
    except ValueError as e:
        if isinstance(e, InvalidDocument):
            raise
        raise InvalidDocument(str(e)) from e


def catalog_entry_to_document(entry: CatalogEntry) -> Document:
    document: Document = {
        **ring_header(entry.ring),
        "name": entry.name,
        "f": str(entry.f),
        "decomposition": None,
        "provenance": entry.provenance,
    }
    if entry.decomposition is not None:
        document["decomposition"] = {
            "gs": [str(g) for g in entry.decomposition.gs],
            "hs": [str(h) for h in entry.decomposition.hs],
        }
    if entry.mf is not None:
        document["mf"] = {
            "phi": matrix_to_document(entry.mf.phi),
            "psi": matrix_to_document(entry.mf.psi),
        }
    rank_gap = entry.rank_gap()
    if rank_gap is not None:
        document["rank_gap"] = {**rank_gap.asdict(), "gap": rank_gap.gap}
    return document


def polynomial_from_document(document: Document) -> Polynomial:
    ring = ring_from_document(document)
    if not isinstance(document.get("f"), str):
        raise InvalidDocument("Document needs 'f'")
    return parse_polynomial(document["f"], ring)


def load_document(stream: IO[str]) -> Document:
    try:
        document = json.load(stream)
    except json.JSONDecodeError as e:
        raise InvalidDocument(f"Invalid JSON at line {e.lineno}, column {e.colno}") from e
    if not isinstance(document, dict):
        raise InvalidDocument("Top level JSON value must be an object")
    return document


def dump_document(document: Any, stream: IO[str]):
    if isinstance(document, Report):
        document = document.asdict()
    json.dump(document, stream, indent=2, ensure_ascii=False)
    stream.write("\n")


def dumps_document(document: Any) -> str:
    if isinstance(document, Report):
        document = document.asdict()
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
