"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 skipped or cap exceeded, 3 input error.
Inputs may be a JSON file written by ``build``/``halve`` or a construction
symbol such as ``"delta2^{{5,3}}"``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .caps import DEFAULT_CAPS, Caps
from .catalog import compare, format_table, generate_rows
from .cgroup import CGroup, face_vector
from .constructions import build_from_symbol
from .errors import CapExceeded, HypertopeError, NotString, SymbolError
from .geometry import locally_spherical_report, verify_regular_hypertope
from .halving import HalvingResult, halve
from .serialize import (cgroup_to_json, diagram_to_dot, diagram_to_json, dumps, format_order, halving_to_json,
                        load)
from .verdict import FAIL, PASS

EXIT_PASS, EXIT_FAIL, EXIT_SKIPPED, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _caps(args) -> Caps:
    return Caps(elements=args.cap_elements, cosets=args.cap_cosets, chambers=args.cap_chambers)


def _load(text: str, caps: Caps) -> CGroup | HalvingResult:
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            return load(path)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise InputError(f"cannot read {text}: {exc}") from None
    try:
        return build_from_symbol(text, caps)
    except SymbolError as exc:
        raise InputError(str(exc)) from None


def _as_cgroup(obj) -> CGroup:
    return obj.halved if isinstance(obj, HalvingResult) else obj


def _emit(args, doc) -> None:
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _symbol(C: CGroup) -> str:
    sym = C.schlafli()
    if sym is None:
        return "non-string " + repr(C.diagram().edges())
    return "{" + ",".join(map(str, sym)) + "}"


def cmd_build(args) -> int:
    caps = _caps(args)
    C = _as_cgroup(_load(args.symbol, caps))
    order = C.order()
    try:
        fv = ",".join(map(str, face_vector(C, caps.elements)))
    except CapExceeded:
        fv = "over cap"
    print(f"label:    {C.label or '-'}")
    print(f"order:    {format_order(order, C.formula)}")
    print(f"type:     {_symbol(C)}")
    print(f"f-vector: ({fv})")
    if args.out:
        _emit(args, cgroup_to_json(C))
    return EXIT_PASS


def cmd_halve(args) -> int:
    caps = _caps(args)
    P = _as_cgroup(_load(args.input, caps))
    R = halve(P, caps)
    print(f"index:    {R.index}" + (" (halving group is the whole group)" if R.index == 1 else ""))
    print(f"s:        {R.s}")
    print(f"symbol:   {R.extended_symbol}")
    order = R.halved_order
    print(f"order:    {format_order(order, R.formula)}" + (" (formula level)" if R.formula_level else ""))
    if args.out:
        _emit(args, halving_to_json(R))
    return EXIT_PASS


def cmd_verify(args) -> int:
    caps = _caps(args)
    C = _as_cgroup(_load(args.input, caps))
    report = verify_regular_hypertope(C, caps, level=args.level, keep_going=args.keep_going)
    for st in report.stages:
        line = f"{st.name:22s} {st.verdict.status}"
        if st.verdict.note:
            line += f"  ({st.verdict.note})"
        if st.verdict.witness is not None:
            line += f"  witness={json.dumps(st.verdict.witness)}"
        print(line)
    print(f"overall: {report.overall}")
    if args.out:
        _emit(args, report.to_json(timings=args.timings))
    return _exit_for(report.overall)


def _exit_for(status) -> int:
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL}.get(status, EXIT_SKIPPED)


def cmd_classify(args) -> int:
    caps = _caps(args)
    C = _as_cgroup(_load(args.input, caps))
    rep = locally_spherical_report(C, caps)
    print(f"type:               {rep.type_label}" + (f" ({rep.name})" if rep.name else ""))
    print(f"locally spherical:  {rep.locally_spherical}")
    for e in rep.entries:
        if e["verdict"] != PASS:
            print(f"  residue {e['types']}: {e['verdict']} ({e.get('order')} vs {e.get('coxeterOrder')})")
    if args.out:
        _emit(args, rep.to_json())
    return {True: EXIT_PASS, False: EXIT_FAIL}.get(rep.locally_spherical, EXIT_SKIPPED)


def cmd_catalog(args) -> int:
    if not 3 <= args.max_rank <= 6:
        raise InputError("--max-rank must be between 3 and 6")
    rows = generate_rows(args.max_rank, _caps(args), jobs=args.jobs)
    if args.json:
        sys.stdout.write(dumps({"rows": [r.to_json() for r in rows]}))
    else:
        sys.stdout.write(format_table(rows))
    if args.out:
        _emit(args, {"rows": [r.to_json() for r in rows]})
    drift = compare(rows)
    for msg in drift:
        print(f"drift: {msg}", file=sys.stderr)
    return EXIT_FAIL if drift else EXIT_PASS


def cmd_diagram(args) -> int:
    caps = _caps(args)
    obj = _load(args.input, caps)
    if isinstance(obj, HalvingResult):
        D, n = obj.diagram, obj.rank
        tail = (n - 2, n - 1)
    else:
        D, tail = obj.diagram(), None
    if args.format == "json":
        doc = diagram_to_json(D)
        if tail:
            doc["tail"] = list(tail)
        text = dumps(doc)
    else:
        text = diagram_to_dot(D, tail)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypertope", description=__doc__.split("\n")[0])
    parser.add_argument("--cap-elements", type=int, default=DEFAULT_CAPS.elements,
                        help="largest group enumerated element by element")
    parser.add_argument("--cap-cosets", type=int, default=DEFAULT_CAPS.cosets,
                        help="coset table size limit for Todd-Coxeter")
    parser.add_argument("--cap-chambers", type=int, default=DEFAULT_CAPS.chambers,
                        help="chamber enumeration limit")
    parser.add_argument("--seed", type=int, default=None, help="reserved; all algorithms are deterministic")
    parser.add_argument("--out", help="write the JSON (or DOT) result to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a C-group from a construction symbol")
    p.add_argument("symbol", help='e.g. "{5,3}", "{4,4}:(2,2)", "delta2^{{3}}", "dual:{4,3}"')
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("halve", help="apply the halving operation")
    p.add_argument("input", help="C-group JSON file or construction symbol")
    p.set_defaults(func=cmd_halve)

    p = sub.add_parser("verify", help="run the regular-hypertope verification pipeline")
    p.add_argument("input", help="C-group or halving JSON file, or construction symbol")
    p.add_argument("--level", choices=("cgroup", "full"), default="full")
    p.add_argument("--keep-going", action="store_true", help="run every stage even after a failure")
    p.add_argument("--timings", action="store_true", help="include stage timings in the JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="check local sphericity and classify the diagram")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("catalog", help="rebuild the halved cube catalog and compare with the golden table")
    p.add_argument("--max-rank", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--json", action="store_true", help="print rows as JSON instead of a table")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("diagram", help="render the Coxeter diagram")
    p.add_argument("input")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NotString, SymbolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"skipped: {exc}", file=sys.stderr)
        return EXIT_SKIPPED
    except (HypertopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
