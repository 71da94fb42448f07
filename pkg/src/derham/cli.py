"""Command-line interface.

Every subcommand loads one complex and prints a deterministic JSON report::

    {"command": ..., "complex_summary": ..., "payload": ..., "exit_status": ...}

Exit codes: 0 ok, 1 violation found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from .cohomology import Cochain, HomologyBasis, betti_numbers, coboundary, homology
from .complex import Chain, ComplexError, SimplicialComplex, canonical_complex, load_complex
from .forms import FormError, PolyForm, derham_map, form_from_json, form_to_json
from .linalg import as_rational, format_rational
from .sampling import random_form
from .theorems import (
    NotClosedError,
    UnsupportedFormError,
    find_primitive,
    periods,
    realize_periods,
    ring_check,
)

EXIT_CODES = {"ok": 0, "violation": 1, "error": 2}


class InputError(ValueError):
    pass


class Violation(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("message", "violation"))
        self.payload = payload


# -- serialization helpers ---------------------------------------------------------


def chain_to_json(c: Chain) -> list:
    return [{"simplex": list(s), "coefficient": format_rational(v)} for s, v in c.coefficients.items()]


def cochain_to_json(f: Cochain) -> dict:
    return {
        "dim": f.dim,
        "simplices": [list(s) for s in f.complex.simplices(f.dim)],
        "values": [format_rational(v) for v in f.values],
    }


def homology_to_json(basis: HomologyBasis) -> dict:
    return {"dim": basis.dim, "betti": basis.betti, "cycles": [chain_to_json(z) for z in basis.cycles]}


def parse_rationals(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [as_rational(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse rational list {text!r}; expected e.g. 3,-2,1/2") from None


def _fmt(x) -> Optional[str]:
    return None if x is None else format_rational(x)


# -- commands -------------------------------------------------------------------------


def _load_form(K: SimplicialComplex, path: str) -> PolyForm:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read form file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    # accept a whole report whose payload carries a form
    if isinstance(data, dict) and "payload" in data and isinstance(data["payload"], dict):
        data = data["payload"].get("form") or data["payload"].get("primitive")
    return form_from_json(K, data)


def _write_form(path: Optional[str], form: PolyForm) -> None:
    if path:
        Path(path).write_text(json.dumps(form_to_json(form), sort_keys=True, indent=2) + "\n", encoding="utf-8")


def cmd_betti(K: SimplicialComplex, args) -> dict:
    betti = betti_numbers(K)
    chi = K.euler_characteristic()
    alternating = sum((-1) ** p * b for p, b in enumerate(betti))
    payload = {"betti": betti, "euler_characteristic": chi, "betti_alternating_sum": alternating}
    if alternating != chi:
        raise Violation({"message": "Euler characteristic disagrees with Betti numbers", **payload})
    return payload


def cmd_stokes_check(K: SimplicialComplex, args) -> dict:
    rng = random.Random(args.seed)
    checked = {}
    for p in range(K.dim + 1):
        for trial in range(args.trials):
            form = random_form(K, p, rng)
            lhs = derham_map(form.d())
            rhs = coboundary(derham_map(form))
            if lhs != rhs:
                raise Violation(
                    {
                        "message": "Stokes identity failed",
                        "seed": args.seed,
                        "degree": p,
                        "trial": trial,
                        "form": form_to_json(form),
                        "integral_of_d": cochain_to_json(lhs),
                        "coboundary_of_integral": cochain_to_json(rhs),
                    }
                )
        checked[str(p)] = args.trials
    payload = {"seed": args.seed, "trials": args.trials, "checked_per_degree": checked, "result": "all passed"}
    if args.trials == 0:
        payload["note"] = "vacuous pass: zero trials requested"
    return payload


def _not_closed(exc: NotClosedError) -> Violation:
    return Violation({"message": str(exc), "differential": form_to_json(exc.differential)})


def cmd_periods(K: SimplicialComplex, args) -> dict:
    form = _load_form(K, _one_form(args))
    try:
        report = periods(form)
    except NotClosedError as exc:
        raise _not_closed(exc) from None
    return {
        "degree": report.dim,
        "periods": [format_rational(v) for v in report.periods],
        "homology_basis": homology_to_json(report.homology_basis),
    }


def cmd_primitive(K: SimplicialComplex, args) -> dict:
    form = _load_form(K, _one_form(args))
    try:
        beta = find_primitive(form)
        report = periods(form)
    except NotClosedError as exc:
        raise _not_closed(exc) from None
    except UnsupportedFormError as exc:
        raise InputError(str(exc)) from None
    payload = {
        "degree": form.degree,
        "exact": beta is not None,
        "periods": [format_rational(v) for v in report.periods],
        "homology_basis": homology_to_json(report.homology_basis),
        "primitive": None if beta is None else form_to_json(beta),
    }
    if beta is not None:
        verified = beta.d() == form
        payload["d_primitive_equals_input"] = verified
        if not verified:
            raise Violation({"message": "primitive does not differentiate to the input", **payload})
        _write_form(args.output, beta)
    return payload


def cmd_realize(K: SimplicialComplex, args) -> dict:
    if args.dim is None:
        raise InputError("realize needs --dim")
    if not args.periods:
        raise InputError("realize needs --periods")
    phi = parse_rationals(args.periods[0])
    p = _check_dim(K, args.dim)
    betti = homology(K, p).betti
    if len(phi) != betti:
        raise InputError(f"expected {betti} periods in degree {p}, got {len(phi)}")
    form = realize_periods(K, p, phi)
    report = periods(form)
    payload = {
        "degree": p,
        "requested": [format_rational(v) for v in phi],
        "periods": [format_rational(v) for v in report.periods],
        "round_trip": list(report.periods) == phi,
        "homology_basis": homology_to_json(report.homology_basis),
        "form": form_to_json(form),
    }
    if not payload["round_trip"]:
        raise Violation({"message": "realized form does not have the requested periods", **payload})
    _write_form(args.output, form)
    return payload


def cmd_ring_check(K: SimplicialComplex, args) -> dict:
    forms = []
    for path in args.form or []:
        forms.append(_load_form(K, path))
    dims = [args.dim, args.dim2 if args.dim2 is not None else args.dim]
    for text, p in zip(args.periods or [], dims[len(forms):]):
        if p is None:
            raise InputError("--periods needs --dim")
        p = _check_dim(K, p)
        phi = parse_rationals(text)
        betti = homology(K, p).betti
        if len(phi) != betti:
            raise InputError(f"expected {betti} periods in degree {p}, got {len(phi)}")
        forms.append(realize_periods(K, p, phi))
    if len(forms) != 2:
        raise InputError("ring-check needs exactly two forms (via --form and/or --periods)")
    try:
        verdict = ring_check(*forms)
    except NotClosedError as exc:
        raise _not_closed(exc) from None
    payload = {
        "degrees": list(verdict.degrees),
        "cohomologous": verdict.cohomologous,
        "difference": cochain_to_json(verdict.difference),
        "witness": None if verdict.witness is None else cochain_to_json(verdict.witness),
        "top_pairing": _fmt(verdict.top_pairing),
        "cup_pairing": _fmt(verdict.cup_pairing),
        "pairing_match": verdict.pairing_match,
    }
    if not verdict.ok:
        raise Violation({"message": "wedge and cup products disagree in cohomology", **payload})
    return payload


def _one_form(args) -> str:
    if not args.form or len(args.form) != 1:
        raise InputError("this command needs exactly one --form")
    return args.form[0]


def _check_dim(K: SimplicialComplex, p: int) -> int:
    if not 0 <= p <= K.dim:
        raise InputError(f"--dim {p} outside 0..{K.dim}")
    return p


COMMANDS = {
    "betti": cmd_betti,
    "stokes-check": cmd_stokes_check,
    "periods": cmd_periods,
    "primitive": cmd_primitive,
    "realize": cmd_realize,
    "ring-check": cmd_ring_check,
}


# -- driver --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derham", description="Exact de Rham cohomology on simplicial complexes.")
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="complex file (JSON or text format)")
    source.add_argument("--complex", help="built-in complex, e.g. torus, sphere2, circle(7)")
    common.add_argument("--format", choices=["json", "text"], default="json", help="report format (default: json)")
    common.add_argument("--text", dest="format", action="store_const", const="text", help="same as --format text")
    common.add_argument("--input-format", choices=["json", "text"], help="complex file format (default: detect)")
    common.add_argument("--dim", type=int, help="form / cohomology degree")
    common.add_argument("--dim2", type=int, help="degree of the second form for ring-check")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--form", action="append", help="PolyForm JSON file (repeat for ring-check)")
    common.add_argument("--periods", action="append", help="comma-separated rationals, e.g. 3,-2,1/2")
    common.add_argument("--output", help="write the resulting form JSON here")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load(args) -> SimplicialComplex:
    if args.complex:
        return canonical_complex(args.complex)
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    fmt = args.input_format
    if fmt is None and args.input.endswith(".json"):
        fmt = "json"
    return load_complex(data, fmt, name=Path(args.input).stem)


def run(argv: Optional[Sequence[str]] = None) -> tuple[dict, int]:
    return execute(build_parser().parse_args(argv))


def execute(args: argparse.Namespace) -> tuple[dict, int]:
    report = {"command": args.command, "complex_summary": None, "payload": None, "exit_status": "ok"}
    if args.trials < 0:
        report.update(payload={"message": "--trials must be non-negative"}, exit_status="error")
        return report, EXIT_CODES["error"]
    try:
        K = _load(args)
        report["complex_summary"] = K.summary()
        report["payload"] = COMMANDS[args.command](K, args)
    except Violation as exc:
        report.update(payload=exc.payload, exit_status="violation")
    except (InputError, ComplexError, FormError, ValueError) as exc:
        report.update(payload={"message": str(exc)}, exit_status="error")
    return report, EXIT_CODES[report["exit_status"]]


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _short(value) -> str:
    if isinstance(value, dict) and value.get("kind") == "polyform":
        n = sum(len(s["terms"]) for s in value["simplices"])
        return f"<{value['degree']}-form, {n} terms>"
    if isinstance(value, dict) and "cycles" in value:
        return f"<{value['betti']} cycles in degree {value['dim']}>"
    if isinstance(value, dict) and "values" in value:
        return "[" + ", ".join(value["values"]) + "]"
    if isinstance(value, list):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"status:  {report['exit_status']}"]
    summary = report["complex_summary"]
    if summary:
        lines.append(
            f"complex: {summary['name']}  dim={summary['dim']}  counts={summary['counts']}  "
            f"chi={summary['euler_characteristic']}  closed={summary['is_closed_manifold']}  "
            f"oriented={summary['is_oriented']}"
        )
    payload = report["payload"] or {}
    width = max((len(k) for k in payload), default=0)
    for key in sorted(payload):
        lines.append(f"  {key.ljust(width)}  {_short(payload[key])}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    report, code = execute(args)
    sys.stdout.write(render_text(report) if args.format == "text" else render_json(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
