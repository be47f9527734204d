"""
Report Formatter - renders command results as text tables and as JSON.

Both renderings come from the same plain dict, so every number printed in the
text form is also present in the JSON form.
"""
import json
from typing import Any, Dict, List

from engine.delta_solver import DeltaRecord, MapSpace
from engine.superalgebra import HomMap, Superalgebra

PARITY_NAMES = ("even", "odd")


def render_json(report: Dict, indent: int = 2) -> str:
    return json.dumps(report, indent=indent, ensure_ascii=False)


def render_text(report: Dict) -> str:
    lines: List[str] = []
    _render_mapping(report, lines, 0)
    return "\n".join(lines)


def _render_mapping(data: Dict, lines: List[str], depth: int):
    pad = "  " * depth
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _render_mapping(value, lines, depth + 1)
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            lines.extend(_table(value, depth + 1))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: {', '.join(_cell(v) for v in value) if value else '-'}")
        else:
            lines.append(f"{pad}{key}: {_cell(value)}")


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}={_cell(v)}" for k, v in value.items()) + "}"
    return "-" if value is None else str(value)


def _table(rows: List[Dict], depth: int) -> List[str]:
    pad = "  " * depth
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[t]) for r in cells)) for t, c in enumerate(columns)]
    out = [pad + "  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    out.append(pad + "  ".join("-" * w for w in widths))
    for r in cells:
        out.append(pad + "  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return out


# --- JSON views of engine objects ----------------------------------------------------


def algebra_summary(A: Superalgebra) -> Dict:
    even = len(A.even_indices)
    return {
        "name": A.name,
        "id": A.fingerprint,
        "field": A.field.label,
        "dim": A.dim,
        "even_dim": even,
        "odd_dim": A.dim - even,
    }


def map_to_json(phi: HomMap) -> List[List[str]]:
    spec = phi.algebra.field
    return [[spec.format(v) for v in row] for row in phi.matrix.to_rows()]


def map_images(phi: HomMap) -> Dict[str, str]:
    """Nonzero images b ↦ φ(b), keyed by basis label."""
    A = phi.algebra
    return {A.labels[j]: str(phi.image(j)) for j in range(A.dim) if not phi.image(j).is_zero()}


def space_to_json(space: MapSpace, with_matrices: bool = True) -> Dict:
    doc = {
        "kind": space.kind,
        "parity": PARITY_NAMES[space.parity],
        "delta": space.delta_text,
        "dim": space.dim,
        "maps": [map_images(phi) for phi in space.basis],
    }
    if with_matrices:
        doc["basis"] = [map_to_json(phi) for phi in space.basis]
    return doc


def record_to_json(A: Superalgebra, record: DeltaRecord) -> Dict:
    return {
        "delta": A.field.format(record.delta),
        "dim_even": record.dims[0],
        "dim_odd": record.dims[1],
        "trivial_even": record.trivial_dims[0],
        "trivial_odd": record.trivial_dims[1],
        "nontrivial_even": record.nontrivial[0],
        "nontrivial_odd": record.nontrivial[1],
    }
