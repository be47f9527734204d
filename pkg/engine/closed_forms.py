"""
Closed Forms - match solved ½-maps of V_1/2(Z, D) against their explicit families.

    even:            ψ_z(a) = za,  ψ_z(mx) = (zm)x
    odd, p != 3:     φ(a) = 0,     φ(ax) = az
    odd, p = 3:      φ(a) = (αD(a))x,  φ(ax) = D(αD(a)) + az,  α a scalar

Each family is linear in its parameters, so fitting a basis map is one small
affine solve.

The odd-part image of ψ_z is also written (1 + p(y))z·y; with a·bx = ½(ab)x
that is (zm)x = 2·(z·(mx)), the same map.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from engine.catalog import TruncatedPolyAlgebra, split_vector_type
from engine.delta_solver import MapSpace
from engine.linalg import RowReducer, solve_affine
from engine.scalars import RawValue, Scalar
from engine.superalgebra import Element, HomMap, Superalgebra, product_coeffs

logger = logging.getLogger(__name__)

EVEN_FAMILY = "psi_z"
ODD_FAMILY = "az"
ODD_FAMILY_CHAR3 = "alpha_z"


@dataclass
class FitResult:
    index: int
    matched: bool
    params: Dict[str, Union[Element, Scalar]] = field(default_factory=dict)
    nontrivial: bool = False


@dataclass
class FitReport:
    family: str
    parity: int
    family_rank: int
    results: List[FitResult]

    @property
    def all_matched(self) -> bool:
        return all(r.matched for r in self.results)


def _flat_from_columns(V: Superalgebra, columns: Sequence[Sequence[RawValue]]) -> List[RawValue]:
    n = V.dim
    flat = [V.field.zero] * (n * n)
    for j, col in enumerate(columns):
        for k, v in enumerate(col):
            flat[k * n + j] = v
    return flat


def _even_member(V: Superalgebra, B: TruncatedPolyAlgebra, z: Sequence[RawValue]) -> List[RawValue]:
    """ψ_z as a flat matrix on V = Z + Zx."""
    n = B.dim
    spec = V.field
    zero = [spec.zero] * n
    columns = []
    for j in range(n):
        columns.append(product_coeffs(B.algebra, z, Element.basis(B.algebra, j).coeffs) + zero)
    for j in range(n):
        columns.append(zero + product_coeffs(B.algebra, z, Element.basis(B.algebra, j).coeffs))
    return _flat_from_columns(V, columns)


def _odd_z_member(V: Superalgebra, B: TruncatedPolyAlgebra, z: Sequence[RawValue]) -> List[RawValue]:
    """φ(a) = 0, φ(ax) = az."""
    n = B.dim
    zero = [V.field.zero] * n
    columns = [zero + zero for _ in range(n)]
    for j in range(n):
        columns.append(product_coeffs(B.algebra, Element.basis(B.algebra, j).coeffs, z) + zero)
    return _flat_from_columns(V, columns)


def _odd_alpha_member(V: Superalgebra, B: TruncatedPolyAlgebra, D: HomMap,
                      alpha: Sequence[RawValue]) -> List[RawValue]:
    """φ(a) = (αD(a))x, φ(ax) = D(αD(a))."""
    n = B.dim
    zero = [V.field.zero] * n
    columns = []
    alpha_d = [product_coeffs(B.algebra, alpha, D.image(j).coeffs) for j in range(n)]
    for j in range(n):
        columns.append(zero + alpha_d[j])
    for j in range(n):
        columns.append(D.matrix.apply(alpha_d[j]) + zero)
    return _flat_from_columns(V, columns)


def _fit(V: Superalgebra, generators: List[List[RawValue]], target: Sequence[RawValue]) -> Optional[List[RawValue]]:
    rows = []
    for pos in range(V.dim * V.dim):
        rows.append({t: g[pos] for t, g in enumerate(generators) if g[pos] != 0})
    return solve_affine(V.field, rows, list(target), len(generators))


def _family_rank(V: Superalgebra, generators: List[List[RawValue]]) -> int:
    reducer = RowReducer(V.field, V.dim * V.dim)
    for g in generators:
        reducer.insert({t: v for t, v in enumerate(g) if v != 0})
    return reducer.rank


def fit_half_derivation_forms(V: Superalgebra, space: MapSpace) -> FitReport:
    """Fit every basis map of a ½-space of V_1/2(Z, D) to the family of its parity."""
    if space.delta is None or space.delta != V.field.half:
        raise ValueError("closed forms describe the δ = ½ solutions")
    B, _, D = split_vector_type(V)
    n = B.dim
    unit_basis = [Element.basis(B.algebra, t).coeffs for t in range(n)]
    scalar_names: List[str] = []

    if space.parity == 0:
        family = EVEN_FAMILY
        generators = [_even_member(V, B, e) for e in unit_basis]
        names = ["z"]
    elif V.field.characteristic == 3:
        family = ODD_FAMILY_CHAR3
        generators = [_odd_alpha_member(V, B, D, B.unit().coeffs)]
        generators += [_odd_z_member(V, B, e) for e in unit_basis]
        scalar_names = ["alpha"]
        names = ["alpha", "z"]
    else:
        family = ODD_FAMILY
        generators = [_odd_z_member(V, B, e) for e in unit_basis]
        names = ["z"]

    results = []
    for t, phi in enumerate(space.basis):
        solution = _fit(V, generators, phi.flat)
        if solution is None:
            logger.warning(f"Map {t} of the {family} space does not fit its closed form")
            results.append(FitResult(t, False))
            continue
        params: Dict[str, Union[Element, Scalar]] = {}
        offset = 0
        for name in names:
            if name in scalar_names:
                params[name] = Scalar(V.field, solution[offset])
                offset += 1
            else:
                params[name] = Element(B.algebra, tuple(solution[offset:offset + n]))
                offset += n
        if space.parity == 0:
            nontrivial = not D.apply(params["z"]).is_zero()
        else:
            nontrivial = any(not p.is_zero() for p in params.values())
        results.append(FitResult(t, True, params, nontrivial))

    report = FitReport(family, space.parity, _family_rank(V, generators), results)
    logger.info(f"Closed-form fit ({family}): {sum(r.matched for r in results)}/{len(results)} maps matched")
    return report


def family_parameters(report: FitReport) -> List[Tuple[int, Dict[str, str]]]:
    """Per-map parameters as printable strings."""
    return [(r.index, {k: str(v) for k, v in r.params.items()}) for r in report.results]
