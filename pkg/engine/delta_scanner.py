"""
Delta Scanner - runs δ-spectrum scans, concurrently over δ when configured.
"""
import asyncio
import logging
from typing import Dict, Union

from engine.delta_solver import (
    DeltaSpectrum,
    ParametricScan,
    affine_rows,
    centroid_rows,
    scan_delta_finite,
    scan_delta_parametric,
    spectrum_record,
)
from engine.superalgebra import Superalgebra

logger = logging.getLogger(__name__)


class DeltaScanner:
    """Scans an algebra for nontrivial δ-(super)derivations."""

    def __init__(self, config: Dict):
        scan_config = config.get("scan", {})
        self.parallel = scan_config.get("parallel", True)
        self.always_resolve = tuple(scan_config.get("always_resolve", ["0", "1", "half"]))

    async def scan(self, A: Superalgebra) -> Union[DeltaSpectrum, ParametricScan]:
        """Finite scan over GF(p), parametric scan over Q."""
        if not A.field.is_prime:
            logger.info(f"Parametric δ-scan of {A.name or A.fingerprint}")
            return await asyncio.to_thread(scan_delta_parametric, A, self.always_resolve)
        if not self.parallel:
            return await asyncio.to_thread(scan_delta_finite, A)
        return await self._scan_parallel(A)

    async def _scan_parallel(self, A: Superalgebra) -> DeltaSpectrum:
        # Build the shared systems once before fanning out.
        await asyncio.to_thread(self._prepare, A)
        deltas = list(A.field.elements())
        logger.info(f"Scanning {len(deltas)} values of δ for {A.name or A.fingerprint}")
        records = await asyncio.gather(
            *(asyncio.to_thread(spectrum_record, A, d) for d in deltas)
        )
        for record in records:
            logger.info(f"δ={record.delta}: dims {record.dims}, nontrivial {record.nontrivial}")
        return DeltaSpectrum(A, list(records))

    @staticmethod
    def _prepare(A: Superalgebra):
        for q in (0, 1):
            affine_rows(A, q)
            centroid_rows(A, q)
