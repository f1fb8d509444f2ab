"""Command line front end.

Subcommands map one-to-one onto the library modules:

    analyze-majorant   double-log integral, tail sum, and their agreement
    convert-cert       rewrite a three-balls certificate for new ratios
    bound              run the bound engine (case A or B), emit JSON
    trace              same inputs as bound, emit the iteration CSV
    estimate-alpha     empirical three-balls exponent on grid samples
    validate           check a computed bound against grid solutions

Outputs are deterministic: JSON objects use sorted keys, floats print
in shortest round-trip form, and non-finite values appear as the
strings "inf", "-inf", "nan".  Errors leave a single-line JSON object
on stderr; domain errors exit 1, usage and input-file errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import bound_engine, certificates, majorant, pde_lab
from .errors import CalculatorError, SchemaError

_EPILOG = """\
error codes: usage, invalid-input, domain-error, divergent-majorant,
  weak-certificate, asymmetric-majorant, degenerate-sample,
  solver-nonconvergence, geometry-error

fixed numeric cutoffs: numeric tail terms below 1e-30 are dropped and
partial sums above 1e15 report as infinite; the start-index search is
capped at 1e6; the grid solver runs at tolerance 1e-13 with a cycle cap
of 200 under the stencil residual contract 1e-10 x boundary sup.
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # emit machine-readable usage errors
        _error_line("usage", message)
        raise SystemExit(2)


def _error_line(code: str, message: str) -> None:
    sys.stderr.write(
        json.dumps({"error": code, "message": message}, sort_keys=True) + "\n"
    )


def _jsonify(value):
    if isinstance(value, float):
        if value != value:
            return "nan"
        if value == float("inf"):
            return "inf"
        if value == float("-inf"):
            return "-inf"
        return value
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


def _write_text(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, out: str | None) -> None:
    _write_text(json.dumps(_jsonify(obj), sort_keys=True) + "\n", out)


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_csv(header: str, rows, out: str | None) -> None:
    lines = [header]
    lines.extend(",".join(_csv_cell(cell) for cell in row) for row in rows)
    _write_text("\n".join(lines) + "\n", out)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _load_majorant(path: str) -> majorant.Majorant:
    return majorant.from_spec(_load_json(path))


def _load_cert(path: str):
    return certificates.cert_from_spec(_load_json(path))


def _load_family(args) -> dict:
    family = _load_json(args.grid)
    if not isinstance(family, dict):
        raise SchemaError("grid specification must be a JSON object")
    if getattr(args, "seed", None) is not None:
        family = dict(family)
        family["seed"] = args.seed
    return family


def _run_engine(args) -> bound_engine.BoundReport:
    m = _load_majorant(args.majorant)
    cert = _load_cert(args.cert)
    if args.case == "A":
        return bound_engine.bound_case_A(m, cert, args.dist)
    return bound_engine.bound_case_B(m, cert, args.dist)


def _cmd_analyze(args) -> int:
    m = _load_majorant(args.majorant)
    report = majorant.lemma_check(m, a=1.0)
    _emit_json({
        "loglog_integral": report.integral,
        "integral_finite": report.integral_finite,
        "tail_sum": report.tail,
        "tail_finite": report.tail_finite,
        "consistent": report.consistent,
        "growth_rate_used": 1.0,
        "symmetric_monotone": majorant.is_symmetric_monotone(m),
    }, args.out)
    return 0


def _parse_target(text: str) -> tuple[float, float]:
    parts = text.split(",")
    try:
        a, b = (float(part) for part in parts)
    except ValueError as exc:
        raise SchemaError(
            f'--target must be two comma-separated numbers; got {text!r}'
        ) from exc
    return a, b


def _cmd_convert(args) -> int:
    cert = _load_cert(args.cert)
    if not isinstance(cert, certificates.ThreeBallsCertificate):
        raise SchemaError("convert-cert needs a three-balls certificate")
    converted = certificates.convert_ratios(cert, _parse_target(args.target))
    _emit_json(certificates.cert_to_spec(converted), args.out)
    return 0


def _cmd_bound(args) -> int:
    _emit_json(_run_engine(args).to_spec(), args.out)
    return 0


TRACE_HEADER = "k,r_k,loglog_value,displacement_bound,cumulative_budget"


def _cmd_trace(args) -> int:
    report = _run_engine(args)
    rows = [
        (row.k, row.r_k, row.loglog_value, row.displacement_bound,
         row.cumulative_budget)
        for row in bound_engine.trace_iteration(report)
    ]
    _emit_csv(TRACE_HEADER, rows, args.out)
    return 0


def _solved_samples(family: dict) -> list[pde_lab.GridField]:
    cells = family.get("cells", 512)
    kind = family.get("boundary", "monomial")
    fields = []
    if kind == "monomial":
        degree = family.get("degree", 10)
        for d in range(1, degree + 1):
            spec = pde_lab.grid_from_function(cells, pde_lab.harmonic_monomial(d))
            fields.append(pde_lab.solve_dirichlet(spec))
    elif kind == "random":
        count = family.get("count", 8)
        seed = family.get("seed", 0)
        for i in range(count):
            fields.append(pde_lab.solve_dirichlet(
                pde_lab.grid_from_random(cells, seed + i)
            ))
    else:
        raise SchemaError(f'unknown sample family boundary {kind!r}')
    return fields


def _cmd_estimate_alpha(args) -> int:
    family = _load_family(args)
    ratios = family.get("ratios", [1, 2, 4])
    scale = family.get("scale", 0.1)
    center = family.get("center", [0, 0])
    estimate = pde_lab.empirical_alpha(
        _solved_samples(family), center, ratios, scale
    )
    _emit_json(asdict(estimate), args.out)
    return 0


VALIDATION_HEADER = "sample_id,normalized_sup,u_at_origin,loglog_margin,verdict"


def _cmd_validate(args) -> int:
    report = _run_engine(args)
    m = _load_majorant(args.majorant)
    validation = pde_lab.validate_bound(m, report, _load_family(args))
    rows = [
        (row.sample_id, row.normalized_sup, row.u_at_origin,
         row.loglog_margin, row.verdict)
        for row in validation.rows
    ]
    _emit_csv(VALIDATION_HEADER, rows, args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="threeballs",
        description="uniform bound calculator and discrete three-balls laboratory",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("analyze-majorant",
                       help="double-log integral and tail sum verdicts")
    p.add_argument("--majorant", required=True, help="majorant JSON file")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("convert-cert",
                       help="rewrite a three-balls certificate for new ratios")
    p.add_argument("--cert", required=True, help="certificate JSON file")
    p.add_argument("--target", required=True,
                   help="target ratios as 'a,b' (inner ratio fixed at 1)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_convert)

    for name, fn in (("bound", _cmd_bound), ("trace", _cmd_trace)):
        p = sub.add_parser(name, help=(
            "run the bound engine; emit the JSON report" if name == "bound"
            else "run the bound engine; emit the iteration trace CSV"
        ))
        p.add_argument("--case", required=True, choices=("A", "B"))
        p.add_argument("--majorant", required=True, help="majorant JSON file")
        p.add_argument("--cert", required=True, help="certificate JSON file")
        p.add_argument("--dist", required=True, type=float,
                       help="available distance d in (0, 1)")
        p.add_argument("--out", help="output path (default stdout)")
        p.set_defaults(func=fn)

    p = sub.add_parser("estimate-alpha",
                       help="empirical three-balls exponent on grid samples")
    p.add_argument("--grid", required=True, help="sample family JSON file")
    p.add_argument("--seed", type=int, help="override the family seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_estimate_alpha)

    p = sub.add_parser("validate",
                       help="validate a computed bound against grid solutions")
    p.add_argument("--case", required=True, choices=("A", "B"))
    p.add_argument("--majorant", required=True, help="majorant JSON file")
    p.add_argument("--cert", required=True, help="certificate JSON file")
    p.add_argument("--dist", required=True, type=float,
                   help="available distance d in (0, 1)")
    p.add_argument("--grid", required=True, help="sample family JSON file")
    p.add_argument("--seed", type=int, help="override the family seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_validate)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SchemaError as exc:
        _error_line(exc.code, str(exc))
        return 2
    except OSError as exc:
        _error_line("invalid-input", str(exc))
        return 2
    except CalculatorError as exc:
        _error_line(exc.code, str(exc))
        return 1


def main() -> None:
    sys.exit(run())
