"""Command-line front end.

Subcommands: validate, aut, find, verify, classify, gen. Exit codes are a
stable contract: 0 success, 1 domain failure (axiom violation, not a
unital), 2 usage or format error. "No unitals found" is a success with the
completeness flag telling apart "none exist" from "budget ran out".
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .autgroup import plane_automorphism_group, point_orbits
from .design import intersection_profile, is_unital, unital_size
from .errors import MalformedInputError, ParameterError, PlaneValidationError
from .geometry import desarguesian_plane, hermitian_unital
from .report import emit_plane, emit_report, parse_plane, parse_report_json, store_results
from .search import SearchConfig, run_campaign


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _plane_from_file(path: str, base: int):
    text = _read_text(path)
    stem = os.path.splitext(os.path.basename(path))[0]
    plane, name = parse_plane(text, base=base)
    return plane, (name or stem)


def _labels_from_file(path: str, base: int, v: int) -> list[int]:
    toks = _read_text(path).split()
    try:
        raw = [int(t) for t in toks]
    except ValueError:
        raise MalformedInputError(f"{path}: non-integer label in list")
    lo, hi = (base, v - 1 + base)
    for lab in raw:
        if not (lo <= lab <= hi):
            raise MalformedInputError(
                f"{path}: label {lab} outside {lo}..{hi} for base {base}")
    return [lab - base for lab in raw]


def cmd_validate(args) -> int:
    plane, name = _plane_from_file(args.plane, args.base)
    print(f"{name}: valid projective plane of order {plane.order_n} "
          f"({plane.v} points, {plane.v} lines of {plane.k})")
    return 0


def cmd_aut(args) -> int:
    plane, name = _plane_from_file(args.plane, args.base)
    group = plane_automorphism_group(plane)
    orbits = point_orbits(group.generator_arrays(), plane.v)
    if args.format == "json":
        doc = {
            "name": name,
            "order": plane.order_n,
            "group_order": str(group.order),
            "orbit_count": len(orbits),
            "orbit_sizes": list(orbits.sizes),
        }
        print(json.dumps(doc, indent=1, sort_keys=True))
    else:
        print(name)
        print(f"ORDER OF THE PLANE AUTOMORPHISM GROUP{group.order:>16}")
        print(f"NUMBER OF THE ORBITS OF THE PLANE AUTOMORPHISM GTOUP={len(orbits):>7}")
        print("ORBIT SIZES=" + "".join(f"  {i}- {s}" for i, s in enumerate(orbits.sizes, 1)))
    return 0


def _infer_q(order_n: int) -> int:
    q = math.isqrt(order_n)
    if q * q != order_n:
        raise ParameterError(
            f"plane order {order_n} is not a square; pass --q explicitly only "
            f"for square orders")
    return q


def _search_config(args) -> SearchConfig:
    fields: dict = {}
    if args.config:
        doc = json.loads(_read_text(args.config))
        if not isinstance(doc, dict):
            raise MalformedInputError(f"{args.config}: config must be a JSON object")
        allowed = set(SearchConfig.__dataclass_fields__)
        bad = set(doc) - allowed
        if bad:
            raise MalformedInputError(f"{args.config}: unknown config keys {sorted(bad)}")
        fields.update(doc)
        if fields.get("orders") is not None:
            fields["orders"] = tuple(fields["orders"])
    if args.seed is not None:
        fields["seed"] = args.seed
    if args.orders is not None:
        fields["orders"] = tuple(int(t) for t in args.orders.split(","))
    if args.nodes is not None:
        fields["node_budget"] = args.nodes
    if args.time is not None:
        fields["time_budget"] = args.time
    if args.threads is not None:
        fields["threads"] = args.threads
    if args.max_families is not None:
        fields["max_families"] = args.max_families
    if args.no_prune:
        fields["prune"] = False
    return SearchConfig(**fields)


def cmd_find(args) -> int:
    plane, name = _plane_from_file(args.plane, args.base)
    q = args.q if args.q is not None else _infer_q(plane.order_n)
    cfg = _search_config(args)
    result = run_campaign(plane, q, config=cfg, plane_name=name)
    os.makedirs(args.out, exist_ok=True)
    paths = store_results(result, args.out)
    print(emit_report(result, args.format), end="")
    if args.format == "text" and not result.complete:
        print("SEARCH INCOMPLETE (budget exhausted)")
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    plane, name = _plane_from_file(args.plane, args.base)
    members = _labels_from_file(args.unital, args.base, plane.v)
    if args.q is not None:
        q = args.q
    else:
        q = round((max(len(members), 2) - 1) ** (1 / 3))
        if unital_size(q) != len(members):
            # cannot infer q from a wrong-sized list; fall back to the plane
            q = _infer_q(plane.order_n)
    profile = intersection_profile(plane, set(members))
    ok = is_unital(plane, set(members), q)
    prof = "  ".join(f"{k}:{profile[k]}" for k in sorted(profile))
    print(f"{name}: {len(set(members))} points, intersection profile {prof}")
    if ok:
        print(f"UNITAL ok (q={q}, {unital_size(q)} points)")
        return 0
    print(f"NOT A UNITAL for q={q}")
    return 1


def cmd_classify(args) -> int:
    names = sorted(n for n in os.listdir(args.results)
                   if n.endswith(".unitals.json"))
    classes: dict[str, list] = {}
    for fname in names:
        res = parse_report_json(_read_text(os.path.join(args.results, fname)))
        for i, rec in enumerate(res.records):
            classes.setdefault(rec.certificate_hex, []).append(
                {"plane": res.plane_name, "record": i,
                 "unital_group_order": str(rec.unital_group_order)})
    ordered = sorted(classes.items(), key=lambda kv: kv[0])
    if args.format == "json":
        doc = {"classes": [{"certificate": c, "members": m} for c, m in ordered]}
        print(json.dumps(doc, indent=1, sort_keys=True))
        return 0
    multi = 0
    for idx, (cert, members) in enumerate(ordered, 1):
        planes = {m["plane"] for m in members}
        if len(planes) > 1:
            multi += 1
        print(f"CLASS {idx} certificate {cert[:16]}.. size {len(members)}")
        for m in members:
            print(f"  {m['plane']} record {m['record']} "
                  f"aut {m['unital_group_order']}")
    print(f"classes: {len(ordered)}, spanning multiple planes: {multi}")
    return 0


def cmd_gen(args) -> int:
    q = args.q
    if args.kind == "plane":
        # for planes the argument is the plane order itself
        plane = desarguesian_plane(q)
        name = f"PG(2,{q})"
        text = emit_plane(plane, name, fmt=args.format, base=args.base)
        suffix = "json" if args.format == "json" else "txt"
        out_name = f"pg2_{q}.plane.{suffix}"
    else:
        _, members = hermitian_unital(q)
        labels = [m + args.base for m in sorted(members)]
        rows = []
        for i in range(0, len(labels), 16):
            rows.append(" ".join(str(x) for x in labels[i:i + 16]))
        text = "\n".join(rows) + "\n"
        out_name = f"pg2_{q * q}.hermitian.txt"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, out_name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        print(text, end="")
    return 0


def _add_base(p):
    p.add_argument("--base", type=int, choices=(0, 1), default=1,
                   help="label base of input/output files (default 1)")


def _add_format(p):
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitals",
                                description="Search and classify unitals in "
                                            "projective planes.")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("validate", help="check a plane file against the axioms")
    v.add_argument("plane")
    _add_base(v)
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("aut", help="plane automorphism group order and orbits")
    a.add_argument("plane")
    _add_base(a)
    _add_format(a)
    a.set_defaults(func=cmd_aut)

    f = sub.add_parser("find", help="search a plane for unitals")
    f.add_argument("plane")
    f.add_argument("--q", type=int, help="unital parameter (default: sqrt of the order)")
    f.add_argument("--seed", type=int)
    f.add_argument("--orders", help="comma list of subgroup element orders, e.g. 2,3,5")
    f.add_argument("--nodes", type=int, help="search node budget per family")
    f.add_argument("--time", type=float, help="time budget per family, seconds")
    f.add_argument("--threads", type=int)
    f.add_argument("--max-families", type=int, dest="max_families")
    f.add_argument("--no-prune", action="store_true", dest="no_prune")
    f.add_argument("--config", help="JSON file with SearchConfig fields")
    f.add_argument("--out", default="results", help="results directory")
    _add_base(f)
    _add_format(f)
    f.set_defaults(func=cmd_find)

    w = sub.add_parser("verify", help="check a point list against a plane")
    w.add_argument("plane")
    w.add_argument("unital", help="file of whitespace-separated point labels")
    w.add_argument("--q", type=int)
    _add_base(w)
    w.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="group stored results by certificate")
    c.add_argument("results", help="directory of *.unitals.json files")
    _add_format(c)
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("gen", help="generate plane or hermitian unital fixtures")
    g.add_argument("q", type=int,
                   help="plane order for kind=plane; unital parameter for "
                        "kind=hermitian (host plane order q^2)")
    g.add_argument("kind", choices=("plane", "hermitian"))
    g.add_argument("--out", help="directory to write into (default stdout)")
    _add_base(g)
    _add_format(g)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlaneValidationError as e:
        report = e.report
        print(f"INVALID PLANE: {len(report.violations)} axiom violation(s)",
              file=sys.stderr)
        for viol in report.violations:
            print(f"  {viol.axiom}: {viol.message} witness={viol.witness}",
                  file=sys.stderr)
        return 1
    except (MalformedInputError, ParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
