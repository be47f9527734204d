"""
Algebra Validator - runs the structural checks an algebra must pass before use.
"""
import asyncio
import logging
from typing import List, Optional, Tuple

from engine.superalgebra import (
    MIN_GRASSMANN_GENERATORS,
    JordanReport,
    Superalgebra,
    check_jordan_super,
)

logger = logging.getLogger(__name__)

MAX_LISTED_FAILURES = 10


class AlgebraValidator:
    """Validates grading, supercommutativity and the Jordan superidentity."""

    def __init__(self, generators: int = MIN_GRASSMANN_GENERATORS):
        self.generators = generators
        self.last_report: Optional[JordanReport] = None

    async def validate_algebra(self, A: Superalgebra) -> Tuple[bool, List[str]]:
        """
        Validate an algebra.

        Args:
            A: The superalgebra to check

        Returns:
            (is_valid, errors): Tuple of validation result and error messages
        """
        report = await asyncio.to_thread(check_jordan_super, A, self.generators)
        self.last_report = report

        errors = []
        errors.extend(self._grading_errors(A, report))
        errors.extend(self._supercommutativity_errors(A, report))
        errors.extend(self._jordan_errors(A, report))

        is_valid = len(errors) == 0

        if not is_valid:
            logger.warning(f"Validation failed for {A.name or A.fingerprint}: {len(errors)} problems")
        else:
            logger.info(f"Validation passed for {A.name or A.fingerprint}")

        return is_valid, errors

    def _grading_errors(self, A: Superalgebra, report: JordanReport) -> List[str]:
        errors = []
        for i, j, k, c in report.grading_violations:
            errors.append(
                f"Grading: {A.labels[i]}·{A.labels[j]} has a component on {A.labels[k]} of the wrong parity"
            )
        return errors

    def _supercommutativity_errors(self, A: Superalgebra, report: JordanReport) -> List[str]:
        return [
            f"Supercommutativity: {A.labels[i]}·{A.labels[j]} and {A.labels[j]}·{A.labels[i]} disagree"
            for i, j in report.supercommutativity_violations
        ]

    def _jordan_errors(self, A: Superalgebra, report: JordanReport) -> List[str]:
        errors = [f"Jordan identity: {f.describe(A)}" for f in report.failures[:MAX_LISTED_FAILURES]]
        hidden = len(report.failures) - MAX_LISTED_FAILURES
        if hidden > 0:
            errors.append(f"Jordan identity: {hidden} more failing instances")
        return errors
