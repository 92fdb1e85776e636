"""Algebra/metric/involution document format and curvature files.

One JSON document carries an algebra (labels + degrees + brackets) with an
optional adapted metric (row-major Gram block per degree) and an optional
involution (row-major matrix).  All rationals travel as strings "p/q" or
"p" with q > 0; no floats anywhere.  Emission is canonical, so
emit(parse(emit(x))) is byte-identical to emit(x).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Optional

from gradedlie.algebra import GradedLieAlgebra
from gradedlie.cochain import complex_cache
from gradedlie.errors import DocumentFormatError
from gradedlie.hodge import AdaptedMetric
from gradedlie.linalg import Matrix, Vector, vec
from gradedlie.normalization import FormalCurvature, GaugeCorrection

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise DocumentFormatError(f"bad rational string {s!r}")
    num, _, den = s.partition("/")
    if den:
        if int(den) == 0:
            raise DocumentFormatError(f"zero denominator in {s!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def format_rational(q: Fraction) -> str:
    return str(q)


def _require(cond: bool, msg: str):
    if not cond:
        raise DocumentFormatError(msg)


def parse_document(
    text: str,
) -> tuple[GradedLieAlgebra, Optional[AdaptedMetric], Optional[Matrix]]:
    """Parse a document; returns (algebra, metric or None, involution or None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentFormatError(f"not valid JSON: {e}") from None
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(isinstance(doc.get("name"), str) and doc["name"], "missing algebra name")
    basis = doc.get("basis")
    _require(isinstance(basis, list) and basis, "missing basis list")
    labels, degrees = [], []
    for ent in basis:
        _require(isinstance(ent, dict), "basis entries must be objects")
        _require(isinstance(ent.get("label"), str) and ent["label"], "basis entry needs a label")
        _require(isinstance(ent.get("degree"), int), "basis entry needs an integer degree")
        labels.append(ent["label"])
        degrees.append(ent["degree"])
    _require(len(set(labels)) == len(labels), "duplicate basis labels")
    index = {lab: i for i, lab in enumerate(labels)}

    structure: dict[tuple[int, int], dict] = {}
    for ent in doc.get("brackets", []):
        _require(isinstance(ent, dict), "bracket entries must be objects")
        for key in ("i", "j"):
            _require(ent.get(key) in index, f"unknown bracket label {ent.get(key)!r}")
        i, j = index[ent["i"]], index[ent["j"]]
        _require(i < j, f"bracket ({ent['i']}, {ent['j']}) must have i-index < j-index")
        _require((i, j) not in structure, f"duplicate bracket entry ({ent['i']}, {ent['j']})")
        value = ent.get("value")
        _require(isinstance(value, dict), "bracket value must be a label->rational map")
        coeffs = {}
        for lab, s in value.items():
            _require(lab in index, f"unknown value label {lab!r}")
            coeffs[index[lab]] = parse_rational(s)
        structure[(i, j)] = coeffs

    try:
        g = GradedLieAlgebra(doc["name"], degrees, structure, labels=labels)
    except Exception as e:
        raise DocumentFormatError(f"cannot build algebra: {e}") from None

    metric = None
    if "metric" in doc:
        mdoc = doc["metric"]
        _require(isinstance(mdoc, dict) and isinstance(mdoc.get("blocks"), dict), "metric needs blocks")
        blocks = {}
        for dstr, flat in mdoc["blocks"].items():
            try:
                d = int(dstr)
            except ValueError:
                raise DocumentFormatError(f"bad degree key {dstr!r}") from None
            n = g.degree_dim(d)
            _require(n > 0, f"metric block for empty degree {d}")
            _require(isinstance(flat, list) and len(flat) == n * n, f"degree {d} block must have {n*n} entries")
            blocks[d] = Matrix.from_rows(
                [[parse_rational(flat[r * n + c]) for c in range(n)] for r in range(n)]
            )
        missing = [d for d in g.by_degree if d not in blocks]
        _require(not missing, f"metric missing blocks for degrees {missing}")
        try:
            metric = AdaptedMetric(g, blocks)
        except Exception as e:
            raise DocumentFormatError(f"bad metric: {e}") from None

    involution = None
    if "involution" in doc:
        flat = doc["involution"]
        n = g.dim
        _require(isinstance(flat, list) and len(flat) == n * n, f"involution must have {n*n} entries")
        involution = Matrix.from_rows(
            [[parse_rational(flat[r * n + c]) for c in range(n)] for r in range(n)]
        )

    return g, metric, involution


def emit_document(
    g: GradedLieAlgebra,
    metric: Optional[AdaptedMetric] = None,
    involution: Optional[Matrix] = None,
) -> str:
    """Canonical serialization; deterministic key and entry order."""
    doc: dict = {
        "name": g.name,
        "basis": [{"label": lab, "degree": d} for lab, d in zip(g.labels, g.degrees)],
        "brackets": [
            {
                "i": g.labels[i],
                "j": g.labels[j],
                "value": {
                    g.labels[k]: format_rational(v)
                    for k, v in sorted(g.structure[(i, j)].items())
                },
            }
            for (i, j) in sorted(g.structure)
        ],
    }
    if metric is not None:
        doc["metric"] = {
            "blocks": {
                str(d): [
                    format_rational(blk[(r, c)]) for r in range(blk.rows) for c in range(blk.cols)
                ]
                for d, blk in sorted(metric.blocks.items())
            }
        }
    if involution is not None:
        n = involution.rows
        doc["involution"] = [
            format_rational(involution[(r, c)]) for r in range(n) for c in range(n)
        ]
    return json.dumps(doc, indent=2) + "\n"


def parse_curvature(text: str, g: GradedLieAlgebra) -> FormalCurvature:
    """Degree-indexed coefficient lists over the canonical C^2_m bases."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentFormatError(f"not valid JSON: {e}") from None
    _require(isinstance(doc, dict), "curvature document must be a JSON object")
    comps = doc.get("components")
    _require(isinstance(comps, dict), "curvature needs a components map")
    cache = complex_cache(g)
    out = {}
    for dstr, coords in comps.items():
        try:
            m = int(dstr)
        except ValueError:
            raise DocumentFormatError(f"bad degree key {dstr!r}") from None
        want = cache.dim(2, m)
        _require(
            isinstance(coords, list) and len(coords) == want,
            f"component {m} must have {want} coefficients",
        )
        out[m] = vec(parse_rational(s) for s in coords)
    try:
        return FormalCurvature.make(g, out)
    except Exception as e:
        raise DocumentFormatError(f"bad curvature: {e}") from None


def emit_curvature(K: FormalCurvature) -> str:
    doc = {
        "algebra": K.g.name,
        "components": {
            str(m): [format_rational(c) for c in coords] for m, coords in K.components
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def emit_gauge(phi: GaugeCorrection) -> str:
    doc = {
        "algebra": phi.g.name,
        "components": {
            str(m): [format_rational(c) for c in coords] for m, coords in phi.components
        },
    }
    return json.dumps(doc, indent=2) + "\n"
