"""Command-line front end: parse documents, dispatch commands, emit reports.

Exit codes: 0 when every check passes, 1 when a validation or verification
produces findings (or an amalgamation is rejected), 2 for input errors.
Reports are deterministic; the same inputs and seed give identical bytes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .amalgam import (
    AmalgamFailure,
    amalgamate,
    strong_ap_counterwitness,
    verify_amalgam,
)
from .bunches import bunch_classify, bunch_validate, embedding_check, subbunch_check
from .chains import TableError, algebra_of, axiom_suite, roundtrip_check, table_decompose
from .dirsys import ds_closure, ds_validate
from .documents import (
    Document,
    DocumentError,
    bunch_to_json,
    element_from_json,
    element_to_json,
    embedding_from_json,
    parse_document,
    serialize_document,
)

PASS, FAIL, USAGE = 0, 1, 2


def _load(path: str, expect: str) -> Document:
    doc = parse_document(Path(path))
    if doc.kind != expect:
        raise DocumentError(f"{path}: expected a {expect} document, found {doc.kind}")
    return doc


def _emit(args, kind: str, payload) -> None:
    text = serialize_document(kind, payload)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _report_exit(report) -> int:
    print(report.render())
    return PASS if report.ok else FAIL


def cmd_validate(args) -> int:
    bunch = _load(args.bunch, "bunch").payload
    return _report_exit(bunch_validate(bunch))


def cmd_classify(args) -> int:
    bunch = _load(args.bunch, "bunch").payload
    cls = bunch_classify(bunch)
    print(f"rank={cls.rank} symm={'true' if cls.symm else 'false'}")
    return PASS


def cmd_axioms(args) -> int:
    bunch = _load(args.bunch, "bunch").payload
    report = bunch_validate(bunch)
    if not report.ok:
        return _report_exit(report)
    chain = algebra_of(bunch)
    return _report_exit(axiom_suite(chain, bound=args.bound, count=args.count, seed=args.seed))


def cmd_eval(args) -> int:
    bunch = _load(args.bunch, "bunch").payload
    chain = algebra_of(bunch)
    import json

    def element(text, name):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{name}: {exc.msg}") from None
        e = element_from_json(raw, name)
        if not chain.element_valid(e):
            raise DocumentError(f"{name}: not an element of this chain")
        return e

    if args.constants:
        print(json.dumps({"t": element_to_json(chain.unit), "f": element_to_json(chain.falsum)}))
        return PASS
    if args.mul:
        x, y = (element(t, f"--mul[{i}]") for i, t in enumerate(args.mul))
        print(json.dumps(element_to_json(chain.mul(x, y))))
        return PASS
    if args.res:
        x, y = (element(t, f"--res[{i}]") for i, t in enumerate(args.res))
        print(json.dumps(element_to_json(chain.res(x, y))))
        return PASS
    if args.neg:
        x = element(args.neg, "--neg")
        print(json.dumps(element_to_json(chain.neg(x))))
        return PASS
    if args.compare:
        x, y = (element(t, f"--compare[{i}]") for i, t in enumerate(args.compare))
        sign = chain.compare(x, y)
        print({-1: "Less", 0: "Equal", 1: "Greater"}[sign])
        return PASS
    print("eval: nothing to do (use --mul, --res, --neg, --compare, or --constants)")
    return USAGE


def cmd_decompose(args) -> int:
    table = _load(args.table, "table").payload
    try:
        decomposition = table_decompose(table)
    except TableError as exc:
        print(f"rejected: {exc}")
        return FAIL
    _emit(args, "bunch", decomposition.bunch)
    correspondence = [
        {"index": i, "element": element_to_json(e)} for i, e in enumerate(decomposition.to_element)
    ]
    if not getattr(args, "out", None):
        import json

        print(json.dumps({"correspondence": correspondence}, indent=2))
    return PASS


def cmd_roundtrip(args) -> int:
    bunch = _load(args.bunch, "bunch").payload
    return _report_exit(roundtrip_check(bunch, bound=args.bound, count=args.count, seed=args.seed))


def cmd_subbunch(args) -> int:
    x = _load(args.x, "bunch").payload
    y = _load(args.y, "bunch").payload
    witness = None
    if args.witness:
        import json

        raw = json.loads(Path(args.witness).read_text(encoding="utf-8"))
        witness = embedding_from_json(raw, x, y, args.witness)
    return _report_exit(subbunch_check(x, y, witness))


def cmd_embed_check(args) -> int:
    x = _load(args.x, "bunch").payload
    y = _load(args.y, "bunch").payload
    import json

    raw = json.loads(Path(args.embedding).read_text(encoding="utf-8"))
    spec = embedding_from_json(raw, x, y, args.embedding)
    return _report_exit(embedding_check(x, y, spec))


def cmd_closure(args) -> int:
    doc = parse_document(Path(args.system))
    if doc.kind == "bunch":
        system = doc.payload.system
    elif doc.kind == "system":
        system = doc.payload
    else:
        raise DocumentError(f"{args.system}: expected a bunch or system document")
    beta = _load(args.skeleton, "skeleton").payload
    closed = ds_closure(system, beta)
    report = ds_validate(closed)
    _emit(args, "system", closed)
    if not report.ok:
        print(report.render())
        return FAIL
    return PASS


def cmd_amalgamate(args) -> int:
    formation = _load(args.vformation, "vformation").payload
    result = amalgamate(formation, verify_bound=args.bound, verify_count=args.count, verify_seed=args.seed)
    if isinstance(result, AmalgamFailure):
        where = "" if result.node is None else f" node={result.node}"
        print(f"AM-{result.code}{where} {result.detail}")
        return FAIL
    _emit(args, "amalgam", result)
    print("OK")
    return PASS


def cmd_verify_amalgam(args) -> int:
    formation = _load(args.vformation, "vformation").payload
    result_doc = parse_document(Path(args.result))
    if result_doc.kind != "amalgam":
        raise DocumentError(f"{args.result}: expected an amalgam document")
    from .documents import bunch_from_json, embedding_from_json as emb_from

    raw = result_doc.payload
    w = bunch_from_json(raw["w"], "$.w")
    iota3 = emb_from(raw["iota3"], formation.y, w, "$.iota3")
    iota4 = emb_from(raw["iota4"], formation.z, w, "$.iota4")
    from .amalgam import AmalgamResult
    from .report import Report

    result = AmalgamResult(
        w=w,
        iota3=iota3,
        iota4=iota4,
        layer_orders=(),
        construction=raw.get("construction", ""),
        report=Report(),
    )
    return _report_exit(verify_amalgam(formation, result, bound=args.bound, count=args.count, seed=args.seed))


def cmd_demo_strong_ap(args) -> int:
    witness = strong_ap_counterwitness()
    print(f"node={witness.node}")
    print(f"y_element={list(witness.y_element)} z_element={list(witness.z_element)}")
    print(f"merged_image={list(witness.merged_image)}")
    print(witness.note)
    return PASS


def _add_sampling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    parser.add_argument("--bound", type=int, default=5, help="coordinate bound for samples")
    parser.add_argument("--count", type=int, default=200, help="number of sampled checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flechains",
        description="Exact toolkit for involutive residuated chains represented by layer groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a bunch document")
    p.add_argument("bunch")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="rank class and idempotent symmetry of a bunch")
    p.add_argument("bunch")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("axioms", help="sampled axiom suite of a bunch's chain")
    p.add_argument("bunch")
    _add_sampling(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("eval", help="evaluate chain operations on elements")
    p.add_argument("bunch")
    p.add_argument("--mul", nargs=2, metavar="ELT")
    p.add_argument("--res", nargs=2, metavar="ELT")
    p.add_argument("--neg", metavar="ELT")
    p.add_argument("--compare", nargs=2, metavar="ELT")
    p.add_argument("--constants", action="store_true", help="print t and f")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("decompose", help="decompose a finite operation table into a bunch")
    p.add_argument("table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("roundtrip", help="rebuild the representation from the chain and compare")
    p.add_argument("bunch")
    _add_sampling(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("subbunch", help="sub-bunch conditions between two bunches")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("witness", nargs="?", help="optional embedding spec JSON for the layer inclusions")
    p.set_defaults(func=cmd_subbunch)

    p = sub.add_parser("embed-check", help="bunch embedding conditions for an explicit spec")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("embedding")
    p.set_defaults(func=cmd_embed_check)

    p = sub.add_parser("closure", help="close a direct system over a larger skeleton")
    p.add_argument("system", help="bunch or system document")
    p.add_argument("skeleton", help="skeleton document for the larger chain")
    p.add_argument("--out")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("amalgamate", help="amalgamate a V-formation of symm bunches")
    p.add_argument("vformation")
    p.add_argument("--out")
    _add_sampling(p)
    p.set_defaults(func=cmd_amalgamate)

    p = sub.add_parser("verify-amalgam", help="re-verify an amalgam result document")
    p.add_argument("vformation")
    p.add_argument("result")
    _add_sampling(p)
    p.set_defaults(func=cmd_verify_amalgam)

    p = sub.add_parser("demo-strong-ap", help="exhibit the strong-amalgamation counterwitness")
    p.set_defaults(func=cmd_demo_strong_ap)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except DocumentError as exc:
        for line in exc.errors:
            print(f"input error: {line}", file=sys.stderr)
        return USAGE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
