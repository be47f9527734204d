"""
Command-line front end: build, check, solve, scan and report on Jordan superalgebras.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence

from engine.algebra_store import AlgebraFormatError, AlgebraStore
from engine.algebra_validator import AlgebraValidator
from engine.catalog import (
    CatalogError,
    build_b,
    build_catalog,
    default_derivation,
    derivation_from_spec,
    direct_sum,
    parse_derivation,
    split_vector_type,
    unital_hull,
    validate_v_conditions,
)
from engine.closed_forms import family_parameters, fit_half_derivation_forms
from engine.coupled_derivations import coupled_multiplier, find_invertible_image, solve_coupled_derivation
from engine.delta_scanner import DeltaScanner
from engine.delta_solver import ParametricScan, centroid, classify, solve_delta
from engine.scalars import FieldError, FieldSpec
from engine.superalgebra import AlgebraError, Superalgebra, find_unit
from utils.report_formatter import (
    PARITY_NAMES,
    algebra_summary,
    record_to_json,
    render_json,
    render_text,
    space_to_json,
)
from utils.spectrum_summary import summarize_spectrum

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

BUILD_NAMES = ("k3", "k9", "b", "j-vector", "v-half", "sum", "hull")


class SuperderCLI:
    """Dispatches the superder subcommands."""

    def __init__(self, config: Dict):
        self.config = config
        report_config = config.get("report", {})
        catalog_config = config.get("catalog", {})
        self.json_indent = report_config.get("json_indent", 2)
        self.default_field = catalog_config.get("default_field", "p:3")
        self.default_m = catalog_config.get("default_m", 1)
        self.store = AlgebraStore(self.json_indent)
        self.validator = AlgebraValidator(config.get("jordan_check", {}).get("grassmann_generators", 4))
        self.scanner = DeltaScanner(config)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="superder",
            description="Exact δ-derivations of finite-dimensional Jordan superalgebras",
        )
        parser.add_argument("--json", action="store_true", help="print the JSON report")
        # lets --json also follow the subcommand without resetting it when absent
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sub = parser.add_subparsers(dest="command", required=True)

        build = sub.add_parser("build", parents=[common], help="build a catalog algebra and write it to a file")
        build.add_argument("name", choices=BUILD_NAMES)
        self._catalog_flags(build)
        build.add_argument("--inputs", nargs="+", default=[], help="algebra files for sum / hull")
        build.add_argument("--out", required=True)

        check = sub.add_parser("check", parents=[common], help="grading, supercommutativity and Jordan checks")
        check.add_argument("path")

        solve = sub.add_parser("solve", parents=[common], help="δ-(super)derivations at one δ")
        solve.add_argument("path")
        solve.add_argument("--delta", required=True, help="scalar of the field, or 'half'")
        solve.add_argument("--parity", choices=PARITY_NAMES, default="even")

        scan = sub.add_parser("scan", parents=[common], help="δ-spectrum of an algebra")
        scan.add_argument("path")

        cent = sub.add_parser("centroid", parents=[common], help="centroid or odd supercentroid")
        cent.add_argument("path")
        cent.add_argument("--parity", choices=PARITY_NAMES, default="even")

        coupled = sub.add_parser("coupled", parents=[common], help="derivations coupled to D")
        coupled.add_argument("path")
        coupled.add_argument("--derivation", nargs="+", help="coefficients of D for a B(m) file")

        fit = sub.add_parser("fit", parents=[common], help="match ½-maps of V_1/2(Z, D) to their closed forms")
        fit.add_argument("path")
        fit.add_argument("--parity", choices=PARITY_NAMES + ("both",), default="both")

        summ = sub.add_parser("sum", parents=[common], help="direct sum of two algebra files")
        summ.add_argument("inputs", nargs=2)
        summ.add_argument("--out", required=True)

        hull = sub.add_parser("hull", parents=[common], help="unital hull of an algebra file")
        hull.add_argument("inputs", nargs=1)
        hull.add_argument("--out", required=True)
        return parser

    def _catalog_flags(self, parser: argparse.ArgumentParser):
        parser.add_argument("--field", default=None, help="'q' or 'p:N'")
        parser.add_argument("--p", type=int, default=None, help="shorthand for --field p:N")
        parser.add_argument("--m", type=int, default=None)
        parser.add_argument("--derivation", nargs="+", default=None,
                            help="coefficient polynomials f_1..f_m of D = Σ f_i ∂/∂a_i")

    async def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE

        handler = getattr(self, f"cmd_{args.command.replace('-', '_')}")
        try:
            report, status = await handler(args)
        except (AlgebraFormatError, CatalogError, FieldError, AlgebraError) as e:
            logger.error(f"{args.command}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE

        self._emit(report, args.json)
        return status

    def _emit(self, report: Dict, as_json: bool):
        if as_json:
            print(render_json(report, self.json_indent))
        else:
            print(render_text(report))

    # --- commands --------------------------------------------------------------------

    async def cmd_build(self, args):
        A = await self._build(args)
        is_valid, errors = await self.validator.validate_algebra(A)
        report = {"command": "build", "algebra": algebra_summary(A), "valid": is_valid}
        if not is_valid:
            report["errors"] = errors
            logger.warning(f"Not writing {args.out}: validation failed")
            return report, EXIT_VALIDATION
        await self.store.save_algebra(A, args.out)
        report["written"] = str(args.out)
        return report, EXIT_OK

    async def _build(self, args) -> Superalgebra:
        if args.name in ("sum", "hull"):
            return await self._combine(args.name, args.inputs)
        spec = self._field(args)
        m = args.m if args.m is not None else self.default_m
        return build_catalog(args.name, spec, m, args.derivation)

    def _field(self, args) -> FieldSpec:
        if args.p is not None:
            if args.field is not None:
                raise CatalogError("give either --field or --p, not both")
            return FieldSpec.from_token(f"p:{args.p}")
        if args.field is None and args.name == "k9":
            return FieldSpec.from_token("p:3")
        return FieldSpec.from_token(args.field or self.default_field)

    async def _combine(self, kind: str, inputs: List[str]) -> Superalgebra:
        algebras = [await self.store.load_algebra(p) for p in inputs]
        if kind == "hull":
            if len(algebras) != 1:
                raise CatalogError("hull takes exactly one input")
            return unital_hull(algebras[0])
        if len(algebras) < 2:
            raise CatalogError("sum takes at least two inputs")
        result = algebras[0]
        for other in algebras[1:]:
            result = direct_sum(result, other)
        return result

    async def cmd_sum(self, args):
        args.name = "sum"
        return await self.cmd_build(args)

    async def cmd_hull(self, args):
        args.name = "hull"
        return await self.cmd_build(args)

    async def cmd_check(self, args):
        A = await self.store.load_algebra(args.path)
        is_valid, errors = await self.validator.validate_algebra(A)
        jordan = self.validator.last_report
        unit = find_unit(A)
        report = {
            "command": "check",
            "algebra": algebra_summary(A),
            "grading_violations": len(jordan.grading_violations),
            "supercommutativity_violations": len(jordan.supercommutativity_violations),
            "jordan_instances": jordan.instances_checked,
            "jordan_failures": len(jordan.failures),
            "grassmann_generators": jordan.generators,
            "unit": str(unit) if unit is not None else None,
            "valid": is_valid,
        }
        if errors:
            report["errors"] = errors
        if (A.meta or {}).get("catalog") == "v-half":
            B, derivation, _ = split_vector_type(A)
            report["v_conditions"] = validate_v_conditions(B, derivation)
        return report, EXIT_OK if is_valid else EXIT_VALIDATION

    async def cmd_solve(self, args):
        A = await self.store.load_algebra(args.path)
        q = PARITY_NAMES.index(args.parity)
        record = classify(A, args.delta, q)
        report = {
            "command": "solve",
            "algebra": algebra_summary(A),
            "space": space_to_json(record.space),
            "trivial_dim": record.trivial_part.dim,
            "nontrivial": record.nontrivial,
            "verdict": record.verdict,
        }
        return report, EXIT_OK

    async def cmd_scan(self, args):
        A = await self.store.load_algebra(args.path)
        scan = await self.scanner.scan(A)
        summary = summarize_spectrum(scan)
        report = {
            "command": "scan",
            "algebra": algebra_summary(A),
            "records": [record_to_json(A, r) for r in scan.records],
        }
        if isinstance(scan, ParametricScan):
            report["parametric"] = [
                {
                    "parity": PARITY_NAMES[p.parity],
                    "unknowns": p.unknowns,
                    "generic_dim": p.generic_dim,
                    "candidates": [A.field.format(c) for c in p.candidates],
                    "nonrational_roots": p.has_nonrational,
                }
                for p in scan.parities
            ]
        report["nontrivial_deltas"] = summary["nontrivial_deltas"]
        report["blocks"] = summary["blocks"]
        report["verdict"] = summary["verdict"]
        return report, EXIT_OK

    async def cmd_centroid(self, args):
        A = await self.store.load_algebra(args.path)
        space = centroid(A, PARITY_NAMES.index(args.parity))
        return {"command": "centroid", "algebra": algebra_summary(A), "space": space_to_json(space)}, EXIT_OK

    async def cmd_coupled(self, args):
        A = await self.store.load_algebra(args.path)
        catalog = (A.meta or {}).get("catalog")
        if catalog in ("j-vector", "v-half"):
            B, _, D = split_vector_type(A)
        elif catalog == "b":
            if "m" not in A.meta:
                raise CatalogError("B(m) file provenance is missing 'm'")
            B = build_b(A.field, int(A.meta["m"]))
            derivation = parse_derivation(B, args.derivation) if args.derivation else default_derivation(B)
            D = derivation_from_spec(B, derivation)
        else:
            raise CatalogError("coupled needs a B(m) or vector-type algebra file")
        space = solve_coupled_derivation(B, D)
        multipliers = []
        for psi in space.basis:
            c = coupled_multiplier(B, D, psi)
            multipliers.append(str(c) if c is not None else None)
        z = find_invertible_image(B, D)
        report = {
            "command": "coupled",
            "algebra": algebra_summary(B.algebra),
            "space": space_to_json(space, with_matrices=False),
            "multipliers": multipliers,
            "all_of_form_cD": all(c is not None for c in multipliers),
            "invertible_image": {"z": str(z), "D(z)": str(D.apply(z))} if z is not None else None,
        }
        return report, EXIT_OK

    async def cmd_fit(self, args):
        A = await self.store.load_algebra(args.path)
        parities = (0, 1) if args.parity == "both" else (PARITY_NAMES.index(args.parity),)
        fits = []
        all_matched = True
        for q in parities:
            space = solve_delta(A, "half", q)
            fit = fit_half_derivation_forms(A, space)
            all_matched = all_matched and fit.all_matched
            fits.append({
                "parity": PARITY_NAMES[q],
                "family": fit.family,
                "dim": space.dim,
                "family_rank": fit.family_rank,
                "matched": sum(r.matched for r in fit.results),
                "parameters": [params for _, params in family_parameters(fit)],
                "nontrivial_maps": sum(r.nontrivial for r in fit.results),
            })
        report = {"command": "fit", "algebra": algebra_summary(A), "fits": fits, "all_matched": all_matched}
        return report, EXIT_OK if all_matched else EXIT_VALIDATION
