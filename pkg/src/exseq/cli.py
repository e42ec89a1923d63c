"""Command-line front end.

Subcommands: loci, check, enumerate, classify-x2, reduce, poset, rouquier,
verify-paper.  All output is deterministic (sorted keys, sorted sets);
verify-paper exits nonzero when any verdict fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import mutations, render, rouquier, toric_mes, verify, x2
from .posets import (
    associated_poset,
    compute_F,
    eff_relation,
    exceptional_orders,
    exceptional_set,
    is_effective_set,
    is_exceptional_sequence,
    is_maximal,
    is_strongly_exceptional,
)
from .varieties import spec_from_json


def _threads() -> int:
    return int(os.environ.get("EXSEQ_THREADS", "0"))


def _load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}")


def _load_spec(path):
    try:
        return spec_from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: missing or malformed spec field {exc}")


def _load_sequence(path):
    data = _load_json(path)
    if not isinstance(data, list):
        raise ValueError(f"{path}: /: expected a JSON list of [i, j] pairs")
    out = []
    for idx, p in enumerate(data):
        if not isinstance(p, list) or len(p) != 2:
            raise ValueError(f"{path}: /{idx}: expected an [i, j] pair")
        out.append((int(p[0]), int(p[1])))
    return tuple(out)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def cmd_loci(args):
    spec = _load_spec(args.spec)
    if args.format == "json":
        _emit(render.loci_json(spec, args.window), args.out)
    elif args.format == "svg":
        _emit(render.loci_svg(spec, args.window), args.out)
    else:
        _emit(render.loci_ascii(spec, args.window), args.out)
    return 0


def cmd_check(args):
    spec = _load_spec(args.spec)
    seq = _load_sequence(args.sequence)
    result = {"sequence": [list(p) for p in seq]}
    exceptional = is_exceptional_sequence(spec, seq)
    result["exceptional"] = exceptional
    if exceptional:
        es = exceptional_set(spec, seq, certificate=seq)
        result["maximal"] = is_maximal(spec, es)
        result["strong"] = is_strongly_exceptional(spec, es.bundles)
        result["effective"] = is_effective_set(spec, es.bundles)
        f = compute_F(spec, es.bundles)
        result["F"] = sorted(map(list, sorted(f.off_diagonal())))
        result["Eff"] = sorted(map(list, sorted(eff_relation(spec, es.bundles).off_diagonal())))
        result["P"] = sorted(map(list, sorted(associated_poset(spec, es.bundles).off_diagonal())))
        orders, truncated = exceptional_orders(spec, es, limit=args.limit)
        result["witness_orders"] = [[list(p) for p in o] for o in orders[:10]]
        result["order_count"] = len(orders)
        result["orders_truncated"] = truncated
    _emit(_dump(result), args.out)
    return 0 if exceptional else 1


def cmd_enumerate(args):
    spec = _load_spec(args.spec)
    lines = []
    if args.families:
        # one symbolic family per admissible set: free chains slide without
        # bound, so the windowed enumeration covers each family up to offsets
        for adm in toric_mes.enumerate_admissible(spec):
            rows = {j for _, j in adm}
            free = [k for k in range(spec.v + 1) if (k + spec.v + 1) not in rows]
            lines.append(
                json.dumps(
                    {
                        "admissible": sorted([list(p) for p in adm]),
                        "free_layers": free,
                        "members_in_window": (2 * args.offsets + 1) ** len(free),
                    },
                    sort_keys=True,
                )
            )
    else:
        for mes in toric_mes.enumerate_mes(spec, args.offsets):
            dec = toric_mes.decompose_layers(spec, mes)
            lines.append(
                json.dumps(
                    {
                        "bundles": [list(p) for p in mes.bundles],
                        "strong": toric_mes.strongness_by_layers(spec, dec),
                        "effective": toric_mes.effectiveness_by_layers(spec, dec),
                        "layers": [str(k) for k in dec.layers],
                    },
                    sort_keys=True,
                )
            )
    _emit("\n".join(lines), args.out)
    return 0


def cmd_classify_x2(args):
    found = x2.enumerate_mes_x2(args.window)
    records = []
    for es in found:
        lab = x2.classify(es)
        records.append(
            {
                "bundles": [list(p) for p in es.bundles],
                "class": lab.cls,
                "helix_index": lab.helix_index,
                "sigma": lab.sigma_applied,
                "twist": list(lab.twist),
                "parameter": lab.parameter,
            }
        )
    records.sort(key=lambda r: (r["class"], r["bundles"]))
    _emit(_dump({"window": args.window, "count": len(records), "sets": records}), args.out)
    return 0


def cmd_reduce(args):
    spec = _load_spec(args.spec)
    seq = _load_sequence(args.sequence)
    trace = mutations.reduce_to_orlov(spec, seq)
    payload = {
        "start": [list(p) for p in trace.start],
        "final": [list(p) for p in trace.final],
        "orlov": mutations.is_orlov_type(spec, trace.final),
        "steps": [
            {"op": s.op, "arg": s.arg if not isinstance(s.arg, tuple) else list(s.arg),
             "after": [list(p) for p in s.after]}
            for s in trace.steps
        ],
    }
    _emit(_dump(payload), args.trace or args.out)
    return 0


def cmd_poset(args):
    spec = _load_spec(args.spec)
    seq = _load_sequence(args.sequence)
    es = exceptional_set(spec, seq)
    poset = associated_poset(spec, es.bundles)
    orders, truncated = exceptional_orders(spec, es, limit=args.limit)
    payload = {
        "ground": [list(p) for p in es.bundles],
        "relation": sorted(map(list, sorted(poset.off_diagonal()))),
        "linear_extensions": len(orders),
        "truncated": truncated,
    }
    _emit(_dump(payload), args.out)
    return 0


def cmd_rouquier(args):
    spec = _load_spec(args.spec)
    res = rouquier.rouquier_dimension(spec)
    payload = {
        "dim": res.dim,
        "i0": res.i0,
        "generation_time": res.generation_time,
        "rouquier": "exact" if res.exact else "interval",
        "interval": list(res.interval),
        "witness": [list(p) for p in res.witness.bundles],
    }
    _emit(_dump(payload), args.out)
    return 0


def cmd_verify_paper(args):
    sections = None if args.all or not args.section else [args.section]
    verdicts = verify.run_sections(sections, threads=_threads())
    payload = [v.as_json() for v in verdicts]
    _emit(_dump(payload), args.out)
    failed = [v for v in verdicts if v.status == "fail"]
    for v in verdicts:
        print(f"[{v.status.upper():4s}] {v.claim} ({v.seconds:.1f}s)", file=sys.stderr)
    return 1 if failed else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="exseq")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=False, sequence=False):
        if spec:
            p.add_argument("--spec", required=True, help="variety spec JSON file")
        if sequence:
            p.add_argument("--sequence", required=True, help="sequence JSON file")
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("loci", help="render maculate regions and the immaculate locus")
    common(p, spec=True)
    p.add_argument("--window", type=int, default=12)
    p.add_argument("--format", choices=["json", "svg", "ascii"], default="ascii")
    p.set_defaults(func=cmd_loci)

    p = sub.add_parser("check", help="verdicts for a candidate exceptional sequence")
    common(p, spec=True, sequence=True)
    p.add_argument("--strong", action="store_true")
    p.add_argument("--effective", action="store_true")
    p.add_argument("--poset", action="store_true")
    p.add_argument("--limit", type=int, default=10000)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="enumerate toric MES within an offset window")
    common(p, spec=True)
    p.add_argument("--offsets", type=int, default=3)
    p.add_argument("--families", action="store_true",
                   help="emit one symbolic record per parametric family instead")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify-x2", help="enumerate and classify X2 MES")
    common(p)
    p.add_argument("--window", type=int, default=8)
    p.set_defaults(func=cmd_classify_x2)

    p = sub.add_parser("reduce", help="reduce an X2 MES to Orlov type")
    common(p, spec=True, sequence=True)
    p.add_argument("--trace", default=None, help="write the derivation trace here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("poset", help="the poset of exceptional orders of a set")
    common(p, spec=True, sequence=True)
    p.add_argument("--limit", type=int, default=10000)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("rouquier", help="generation time and Rouquier dimension data")
    common(p, spec=True)
    p.set_defaults(func=cmd_rouquier)

    p = sub.add_parser("verify-paper", help="replay the published claims")
    common(p)
    p.add_argument("--section", default=None, help="e.g. 6.3; default all")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_verify_paper)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
