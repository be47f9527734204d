"""
Spectrum Summary - verdict lines and per-block attribution for δ-scans.
"""
import logging
from typing import Dict, List, Union

from engine.delta_solver import DeltaSpectrum, ParametricScan

logger = logging.getLogger(__name__)


def summarize_spectrum(scan: Union[DeltaSpectrum, ParametricScan]) -> Dict:
    """
    Condense a scan into its verdict.

    Returns:
        {
            'nontrivial_deltas': ['2', ...],
            'blocks': {'2': ['v-half', ...]},
            'verdict': str
        }
    """
    A = scan.algebra
    spec = A.field
    nontrivial = []
    blocks: Dict[str, List[str]] = {}
    for record in scan.records:
        if not record.any_nontrivial:
            continue
        text = spec.format(record.delta)
        nontrivial.append(text)
        owners = sorted({b for per_parity in record.nontrivial_blocks for b in per_parity})
        if owners:
            blocks[text] = [_block_name(A, b) for b in owners]

    if not nontrivial:
        verdict = "no nontrivial δ-(super)derivations"
        if isinstance(scan, ParametricScan):
            verdict += " at any rational δ"
    else:
        parts = []
        for text in nontrivial:
            where = f" (from {', '.join(blocks[text])})" if text in blocks else ""
            parts.append(f"{text}{where}")
        verdict = f"nontrivial δ-(super)derivations exist only at δ = {'; '.join(parts)}"
    if isinstance(scan, ParametricScan) and any(p.has_nonrational for p in scan.parities):
        verdict += "; non-rational critical values exist"

    logger.debug(f"Scan verdict: {verdict}")
    return {"nontrivial_deltas": nontrivial, "blocks": blocks, "verdict": verdict}


def _block_name(A, b: int) -> str:
    parts = (A.meta or {}).get("parts")
    names = _flatten_part_names(parts) if parts else []
    if len(names) == len(A.blocks) and names[b]:
        return names[b]
    start, stop = A.blocks[b]
    return f"block {b} [{A.labels[start]}..{A.labels[stop - 1]}]"


def _flatten_part_names(parts: List[dict]) -> List[str]:
    """Catalog names of the summands in block order (nested sums flattened)."""
    names = []
    for part in parts:
        if part.get("catalog") == "sum":
            names.extend(_flatten_part_names(part.get("parts", [])))
        else:
            names.append(part.get("catalog", ""))
    return names
