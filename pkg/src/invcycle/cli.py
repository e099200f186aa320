"""Command-line interface.

Exit codes: 0 when every stage of a verification run is decisively
resolved, 2 when the run completed but some conclusion stayed ambiguous
or was skipped for lack of inputs (--strict turns that into 1), and 1
for contradictions, malformed input, or any other error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .jsonio import InputError, ParseError, dumps_canonical, gram_to_json, parse_gram
from .kodaira import delta, euler_number, fiber, fiber_profile, quadratic_base_change_fiber
from .lattice import (
    BinaryEvenForm,
    enumerate_even_overlattices,
    enumerate_even_posdef_binary,
    reduce_binary,
)
from .pipeline import (
    PipelineError,
    render_text,
    report_exit_code,
    report_to_json,
    run_custom,
    run_example,
)
from .surfaces import quadratic_base_change
from .jsonio import load_json, parse_branch_spec, parse_surface_config


def _parse_gram_arg(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"--gram is not valid JSON: {exc}") from None
    return parse_gram(doc, "--gram")


def _emit_report(report: dict, args) -> int:
    if args.json is not None:
        sys.stdout.write(report_to_json(report))
    else:
        sys.stdout.write(render_text(report))
    if isinstance(args.json, str):
        Path(args.json).write_text(report_to_json(report), encoding="utf-8")
    if args.out:
        Path(args.out).write_text(report_to_json(report), encoding="utf-8")
    return report_exit_code(report, strict=args.strict)


def _cmd_example(args) -> int:
    return _emit_report(run_example(args.number), args)


def _cmd_custom(args) -> int:
    return _emit_report(run_custom(args.config, args.branch, args.assumptions), args)


def _cmd_fiber(args) -> int:
    f = fiber(args.token)
    profile = fiber_profile(f)
    doc = {
        "type": f.token,
        "euler_number": euler_number(f),
        "components": profile.components,
        "root_lattice_disc": profile.root_lattice.disc(),
        "contribution_denominators": sorted(profile.contribution_denominators),
        "base_change_image": quadratic_base_change_fiber(f).token,
        "euler_defect": delta(f),
    }
    if profile.odd_multiplicity_components:
        doc["odd_multiplicity_components"] = profile.odd_multiplicity_components
    sys.stdout.write(dumps_canonical(doc))
    return 0


def _cmd_lattice_reduce(args) -> int:
    gram = _parse_gram_arg(args.gram)
    form = reduce_binary(BinaryEvenForm.from_gram(gram))
    doc = {
        "reduced": gram_to_json(form.gram()),
        "coefficients": [form.a, form.b, form.c],
        "disc": form.disc,
    }
    sys.stdout.write(dumps_canonical(doc))
    return 0


def _cmd_lattice_enumerate(args) -> int:
    forms = enumerate_even_posdef_binary(args.disc)
    doc = {
        "disc": args.disc,
        "count": len(forms),
        "classes": [
            {"coefficients": [f.a, f.b, f.c], "gram": gram_to_json(f.gram())} for f in forms
        ],
    }
    sys.stdout.write(dumps_canonical(doc))
    return 0


def _cmd_lattice_overlattices(args) -> int:
    gram = _parse_gram_arg(args.gram)
    overs = enumerate_even_overlattices(gram, args.index)
    doc = {
        "gram": gram_to_json(gram),
        "index": args.index,
        "count": len(overs),
        "overlattices": [
            {"gram": gram_to_json(o), "disc": o.disc()} for o in overs
        ],
    }
    sys.stdout.write(dumps_canonical(doc))
    return 0


def _cmd_basechange(args) -> int:
    config = parse_surface_config(load_json(args.config), "config")
    branch = parse_branch_spec(load_json(args.branch), "branch")
    result = quadratic_base_change(config, branch)
    doc = {
        "name": result.config.name,
        "base_genus": result.config.base_genus,
        "fibers": [{"label": lab, "type": f.token} for lab, f in result.config.fibers],
        "delta": result.delta,
        "euler_before": result.euler_before,
        "euler_after": result.euler_after,
    }
    sys.stdout.write(dumps_canonical(doc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verify",
        description=(
            "Exact lattice arithmetic for integral invariant-cycle failure "
            "certificates on elliptic surface degenerations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report_flags(p):
        p.add_argument(
            "--json",
            nargs="?",
            const=True,
            default=None,
            metavar="PATH",
            help="emit the canonical JSON report; with PATH, also write it there",
        )
        p.add_argument("--out", metavar="PATH", help="also write the JSON report to PATH")
        p.add_argument(
            "--strict",
            action="store_true",
            help="treat ambiguous or skipped conclusions as failure (exit 1)",
        )

    p_example = sub.add_parser("example", help="run a bundled verification pipeline")
    p_example.add_argument("number", type=int, choices=(1, 2))
    add_report_flags(p_example)
    p_example.set_defaults(func=_cmd_example)

    p_custom = sub.add_parser("custom", help="run a pipeline from JSON input files")
    p_custom.add_argument("--config", required=True, help="seed fibration JSON")
    p_custom.add_argument("--branch", required=True, help="family branch specification JSON")
    p_custom.add_argument("--assumptions", required=True, help="assumption ledger JSON")
    add_report_flags(p_custom)
    p_custom.set_defaults(func=_cmd_custom)

    p_fiber = sub.add_parser("fiber", help="fiber-type arithmetic")
    fiber_sub = p_fiber.add_subparsers(dest="fiber_command", required=True)
    p_info = fiber_sub.add_parser("info", help="arithmetic profile of one Kodaira symbol")
    p_info.add_argument("token", help="fiber symbol, e.g. II*, I0*, I6")
    p_info.set_defaults(func=_cmd_fiber)

    p_lat = sub.add_parser("lattice", help="binary even form and overlattice tools")
    lat_sub = p_lat.add_subparsers(dest="lattice_command", required=True)

    p_red = lat_sub.add_parser("reduce", help="Gauss-reduce an even positive definite 2x2 Gram")
    p_red.add_argument("--gram", required=True, help='JSON matrix, e.g. "[[4,2],[2,4]]"')
    p_red.set_defaults(func=_cmd_lattice_reduce)

    p_enum = lat_sub.add_parser("enumerate", help="all reduced classes of a given discriminant")
    p_enum.add_argument("--disc", required=True, type=int)
    p_enum.set_defaults(func=_cmd_lattice_enumerate)

    p_over = lat_sub.add_parser("overlattices", help="even overlattices of a given index")
    p_over.add_argument("--gram", required=True, help="JSON Gram matrix")
    p_over.add_argument("--index", required=True, type=int)
    p_over.set_defaults(func=_cmd_lattice_overlattices)

    p_bc = sub.add_parser("basechange", help="quadratic base change of a fibration file")
    p_bc.add_argument("--config", required=True)
    p_bc.add_argument("--branch", required=True)
    p_bc.set_defaults(func=_cmd_basechange)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, OSError, PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
