"""
Algebra Store - reads and writes the JSON algebra interchange format.
"""
import json
import logging
from pathlib import Path
from typing import Optional, Union

import aiofiles

from engine.scalars import FieldError, FieldSpec
from engine.superalgebra import AlgebraError, Superalgebra

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("field", "dim", "parity", "table")


class AlgebraFormatError(ValueError):
    """An algebra document that cannot be read; line/column point into the text when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


def algebra_to_json(A: Superalgebra) -> dict:
    spec = A.field
    doc = {
        "field": spec.to_json(),
        "dim": A.dim,
        "parity": list(A.parity),
        "labels": list(A.labels),
        "table": [[i, j, k, spec.format(c)] for i, j, k, c in A.table],
    }
    if A.name:
        doc["name"] = A.name
    if A.blocks:
        doc["blocks"] = [list(b) for b in A.blocks]
    if A.meta:
        doc["meta"] = dict(A.meta)
    return doc


def algebra_from_json(doc: dict) -> Superalgebra:
    if not isinstance(doc, dict):
        raise AlgebraFormatError("algebra document must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise AlgebraFormatError(f"missing keys: {', '.join(missing)}")
    try:
        spec = FieldSpec.from_json(doc["field"])
        table = []
        for t, entry in enumerate(doc["table"]):
            if not isinstance(entry, list) or len(entry) != 4:
                raise AlgebraFormatError(f"table entry {t} must be [i, j, k, \"coeff\"]")
            i, j, k, coeff = entry
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j, k)):
                raise AlgebraFormatError(f"table entry {t} has non-integer indices")
            table.append((i, j, k, spec.parse(str(coeff))))
        return Superalgebra(
            spec,
            int(doc["dim"]),
            tuple(doc["parity"]),
            tuple(table),
            tuple(doc.get("labels") or ()),
            name=doc.get("name", ""),
            blocks=tuple(tuple(b) for b in doc.get("blocks", ())),
            meta=doc.get("meta", {}),
        )
    except (FieldError, AlgebraError, AttributeError, TypeError, ValueError) as e:
        if isinstance(e, AlgebraFormatError):
            raise
        raise AlgebraFormatError(str(e)) from e


def format_algebra(A: Superalgebra, indent: int = 2) -> str:
    return json.dumps(algebra_to_json(A), indent=indent, ensure_ascii=False)


def parse_algebra(text: str) -> Superalgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraFormatError(e.msg, e.lineno, e.colno) from e
    return algebra_from_json(doc)


class AlgebraStore:
    """Async file access for algebra documents."""

    def __init__(self, json_indent: int = 2):
        self.json_indent = json_indent

    async def load_algebra(self, path: Union[str, Path]) -> Superalgebra:
        path = Path(path)
        try:
            async with aiofiles.open(path, "r", encoding="utf-8") as f:
                content = await f.read()
        except OSError as e:
            raise AlgebraFormatError(f"cannot read {path}: {e.strerror or e}") from e
        A = parse_algebra(content)
        logger.info(f"Loaded {A.describe()} from {path}")
        return A

    async def save_algebra(self, A: Superalgebra, path: Union[str, Path]):
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(path, "w", encoding="utf-8") as f:
            await f.write(format_algebra(A, self.json_indent) + "\n")
        logger.info(f"Saved {A.describe()} to {path}")
