"""
Coupled Derivations - derivations ψ of Z with ψ(a)D(b) = D(a)ψ(b).

Every such ψ is M_c∘D for some c in Z (multiplication by c after D); the solver
computes the space and `coupled_multiplier` exhibits c for a given map.
"""
import logging
from typing import Dict, List, Optional

from engine.catalog import CatalogError, TruncatedPolyAlgebra
from engine.delta_solver import COUPLED, MapSpace, affine_rows, rows_at, space_from_vectors
from engine.linalg import kernel_of_rows, rank, solve_affine
from engine.superalgebra import Element, HomMap, product_coeffs, right_mul

logger = logging.getLogger(__name__)


def _coupling_rows(B: TruncatedPolyAlgebra, D: HomMap) -> List[Dict[int, object]]:
    """ψ(b_i)D(b_j) - D(b_i)ψ(b_j) = 0 over the n² entries of an even ψ."""
    A = B.algebra
    spec = A.field
    n = A.dim
    images = [D.image(j).coeffs for j in range(n)]
    rows = []
    for i in range(n):
        for j in range(n):
            by_k: Dict[int, Dict[int, object]] = {}
            for kp in range(n):
                basis_kp = Element.basis(A, kp).coeffs
                left = product_coeffs(A, basis_kp, images[j])
                right = product_coeffs(A, images[i], basis_kp)
                for k in range(n):
                    if left[k] != 0:
                        slot = by_k.setdefault(k, {})
                        var = kp * n + i
                        slot[var] = spec.add(slot.get(var, spec.zero), left[k])
                    if right[k] != 0:
                        slot = by_k.setdefault(k, {})
                        var = kp * n + j
                        slot[var] = spec.sub(slot.get(var, spec.zero), right[k])
            for entries in by_k.values():
                row = {v: c for v, c in entries.items() if c != 0}
                if row:
                    rows.append(row)
    return rows


def solve_coupled_derivation(B: TruncatedPolyAlgebra, D: HomMap) -> MapSpace:
    """Derivations ψ of Z coupled to D; spans {M_c∘D : c ∈ Z}."""
    if D.is_zero():
        raise CatalogError("the derivation must be nonzero")
    A = B.algebra
    spec = A.field
    n = A.dim
    leibniz = [dict(r) for r in rows_at(spec, affine_rows(A, 0), spec.one)]
    basis = kernel_of_rows(spec, n * n, leibniz + _coupling_rows(B, D))
    logger.info(f"Coupled derivations of B({B.m}) over {spec.label}: dim {basis.dim}")
    return space_from_vectors(A, 0, COUPLED, basis.vectors)


def multiplier_map(B: TruncatedPolyAlgebra, D: HomMap, c: Element) -> HomMap:
    """M_c∘D."""
    return right_mul(B.algebra, c).compose(D)


def coupled_multiplier(B: TruncatedPolyAlgebra, D: HomMap, psi: HomMap) -> Optional[Element]:
    """c with ψ = M_c∘D, or None when ψ is not of that form."""
    A = B.algebra
    spec = A.field
    n = A.dim
    columns = [multiplier_map(B, D, Element.basis(A, t)).flat for t in range(n)]
    rows = []
    rhs = []
    for pos in range(n * n):
        rows.append({t: columns[t][pos] for t in range(n) if columns[t][pos] != 0})
        rhs.append(psi.flat[pos])
    solution = solve_affine(spec, rows, rhs, n)
    if solution is None:
        return None
    return Element(A, tuple(solution))


def is_invertible(B: TruncatedPolyAlgebra, x: Element) -> bool:
    """x is invertible iff multiplication by x has full rank."""
    return rank(right_mul(B.algebra, x).matrix) == B.dim


def find_invertible_image(B: TruncatedPolyAlgebra, D: HomMap) -> Optional[Element]:
    """First basis element z (in basis order) with D(z) invertible, or None."""
    for t in range(B.dim):
        z = Element.basis(B.algebra, t)
        image = D.apply(z)
        if not image.is_zero() and is_invertible(B, image):
            logger.debug(f"D({z}) = {image} is invertible")
            return z
    logger.info(f"No basis element of B({B.m}) has an invertible image under D")
    return None
