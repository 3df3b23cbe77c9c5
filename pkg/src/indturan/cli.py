"""Command-line interface.

All results are printed as JSON with sorted keys so identical invocations are
byte-identical.  Exit codes: 0 success, 1 domain error (printed as an
{"error", "message"} object), 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional

from . import density, embeddings, families, oracles, realizability
from .errors import IndturanError
from .families import BipartiteTemplate, RootedGraph, as_graph, as_template, parse_descriptor
from .graph import Graph, Host, graph_from_json_dict, graph_to_json_dict, to_dot


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load_input(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _graph_from(d: dict) -> Graph:
    return graph_from_json_dict(d)[0]


def _host_from(d: dict, s: Optional[int] = None) -> Host:
    g, _, part = graph_from_json_dict(d)
    s_val = d.get("s", s)
    if s_val is None:
        raise ValueError("host object needs an 's' field")
    return Host(g, int(s_val), part)


def _template_from(d: dict) -> BipartiteTemplate:
    g, _, _ = graph_from_json_dict(d)
    if "A" in d and "B" in d:
        return BipartiteTemplate(g, (tuple(d["A"]), tuple(d["B"])))
    return as_template(g)


def _rooted_from(d: dict) -> RootedGraph:
    g, roots, _ = graph_from_json_dict(d)
    if roots is None:
        raise ValueError("pattern object needs a 'roots' field")
    return RootedGraph(g, frozenset(roots))


def _subgraph_from(host: Host, edge_rows: Optional[list]) -> embeddings.Subgraph:
    if edge_rows is None:
        if host.partition is not None:
            return embeddings.cross_subgraph(host)
        return embeddings.Subgraph.of(host.graph)
    return embeddings.Subgraph.of(host.graph, edges=[tuple(e) for e in edge_rows])


def _thresholds_from(d: Optional[dict]) -> embeddings.Thresholds:
    if not d:
        return embeddings.Thresholds()
    kwargs = {}
    for key, val in d.items():
        name = "lam" if key == "lambda" else key
        if name in ("c_hs", "m_blow", "lam"):
            kwargs[name] = int(val)
        else:
            kwargs[name] = Fraction(str(val))
    return embeddings.Thresholds(**kwargs)


def _family_payload(desc: str) -> dict:
    obj = parse_descriptor(desc)
    g = as_graph(obj)
    out: dict = {"descriptor": desc}
    if isinstance(obj, RootedGraph):
        out["graph"] = graph_to_json_dict(g, roots=obj.roots)
        report = density.is_balanced(obj)
        out["density"] = report.as_json_dict()
    elif isinstance(obj, BipartiteTemplate):
        out["graph"] = graph_to_json_dict(g, partition=obj.parts)
    else:
        out["graph"] = graph_to_json_dict(g)
    return out


# --- subcommand handlers ---------------------------------------------------------


def _cmd_family(args) -> int:
    _dump(_family_payload(args.descriptor))
    return 0


def _cmd_rho(args) -> int:
    obj = parse_descriptor(args.descriptor)
    if not isinstance(obj, RootedGraph):
        raise ValueError("rho needs a rooted descriptor")
    report = density.is_balanced(obj)
    _dump({"descriptor": args.descriptor, **report.as_json_dict()})
    return 0


def _cmd_balanced(args) -> int:
    obj = parse_descriptor(args.descriptor)
    if not isinstance(obj, RootedGraph):
        raise ValueError("balanced needs a rooted descriptor")
    report = density.is_balanced(obj)
    _dump({"balanced": report.balanced,
           "witness": list(report.witness) if report.witness else None})
    return 0


def _cmd_realize(args) -> int:
    cert = realizability.derive(args.a, args.b, l=args.l)
    result = realizability.verify_certificate(cert)
    d = cert.as_json_dict()
    d["verified"] = bool(result)
    _dump(d)
    return 0


def _cmd_sweep(args) -> int:
    found = realizability.enumerate_realizable(args.a_max, args.b_max, l=args.l)
    rows = []
    for a, b, cert in found:
        d = cert.as_json_dict()
        d["verified"] = bool(realizability.verify_certificate(cert))
        rows.append(d)
    _dump({"count": len(rows), "certificates": rows})
    return 0


def _cmd_extremal(args) -> int:
    if args.mode == "bip":
        template = as_template(parse_descriptor(args.pattern))
        res = oracles.extremal_bip_star(args.n, template, args.s, budget=args.budget)
    elif args.mode == "classical":
        res = oracles.extremal_classical(args.n, as_graph(parse_descriptor(args.pattern)),
                                         budget=args.budget)
    else:
        res = oracles.extremal_star(args.n, as_graph(parse_descriptor(args.pattern)),
                                    args.s, budget=args.budget)
    _dump(res.as_json_dict())
    return 0


def _cmd_embed_tree(args) -> int:
    spec = _load_input(args.input)
    host = _host_from(spec["host"])
    l_sub = _subgraph_from(host, spec.get("l_edges"))
    tree = _graph_from(spec["tree"])
    stream = embeddings.greedy_tree_embed(host, l_sub, tree, int(spec["d"]))
    if "star_leaves" in spec:
        stream = embeddings.admissible_tree_copies(
            l_sub, tree, stream, int(spec["star_leaves"]), int(spec["star_threshold"]))
    limit = spec.get("limit")
    copies = []
    for vm in stream:
        copies.append(list(vm))
        if limit is not None and len(copies) >= int(limit):
            break
    _dump({"count": len(copies), "copies": copies})
    return 0


def _cmd_embed_keylemma(args) -> int:
    spec = _load_input(args.input)
    host = _host_from(spec["host"])
    l_sub = _subgraph_from(host, spec.get("l_edges"))
    template = _template_from(spec["template"])
    th = _thresholds_from(spec.get("thresholds"))
    parts = {int(k): tuple(v) for k, v in spec["parts"].items()}
    if "rich_sets" in spec:
        d_sets = {frozenset(s) for s in spec["rich_sets"]}
    else:
        thr = int(spec["rich_threshold"])
        d_sets = (lambda ss: embeddings._common_sub_mask(l_sub, ss).bit_count() >= thr)
    outcome = embeddings.key_lemma_embed(host, l_sub, template, parts, d_sets, th,
                                         seed=args.seed)
    _dump(outcome.as_json_dict())
    return 0


def _cmd_embed_extract(args) -> int:
    spec = _load_input(args.input)
    g = _graph_from(spec["host"])
    pattern = _rooted_from(spec["pattern"])
    copies = [tuple(vm) for vm in spec["copies"]]
    outcome = embeddings.extract_induced_power(g, copies, pattern,
                                               int(spec["l"]), int(spec["s"]))
    _dump(outcome.as_json_dict())
    return 0


def _cmd_embed_asym(args) -> int:
    spec = _load_input(args.input)
    host = _host_from(spec["host"])
    m_sub = _subgraph_from(host, spec.get("m_edges"))
    template = _template_from(spec["template"])
    th = _thresholds_from(spec.get("thresholds"))
    delta = spec.get("delta_y")
    outcome = embeddings.asymmetric_embed(host, m_sub, template, th,
                                          delta_y=None if delta is None else int(delta),
                                          seed=args.seed)
    _dump(outcome.as_json_dict())
    return 0


def _cmd_check_badset(args) -> int:
    spec = _load_input(args.input)
    g = _graph_from(spec["graph"])
    bad = embeddings.bad_set(g, spec["w"], Fraction(str(spec["c"])),
                             s=spec.get("s"))
    _dump({"bad": sorted(bad), "size": len(bad)})
    return 0


def _cmd_check_rich(args) -> int:
    spec = _load_input(args.input)
    g = _graph_from(spec["graph"])
    rich = embeddings.rich_s_set(g, spec["x"], spec["y"],
                                 Fraction(str(spec["c"])), int(spec["s"]))
    _dump({"rich_set": list(rich)})
    return 0


def _cmd_check_kst(args) -> int:
    spec = _load_input(args.input)
    host = _host_from(spec["host"] if "host" in spec else spec)
    _dump({"holds": oracles.kst_check(host)})
    return 0


def _cmd_check_regularize(args) -> int:
    spec = _load_input(args.input)
    g = _graph_from(spec["graph"])
    sub, idx, k, report = embeddings.regularize(
        g, Fraction(str(spec["alpha"])), Fraction(str(spec["c"])))
    _dump({"m": report.m, "e": report.e, "k": str(k),
           "k_log2": str(report.k_log2),
           "edge_guarantee": report.edge_guarantee,
           "size_guarantee": report.size_guarantee,
           "vertices": list(idx)})
    return 0


def _cmd_export(args) -> int:
    payload = _family_payload(args.descriptor)
    obj = parse_descriptor(args.descriptor)
    g = as_graph(obj)
    if args.format == "dot":
        roots = obj.roots if isinstance(obj, RootedGraph) else None
        part = obj.parts if isinstance(obj, BipartiteTemplate) else None
        text = to_dot(g, roots=roots, partition=part)
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


# --- parser wiring ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="indturan",
        description="Rooted families, density exponents, exhaustive extremal "
                    "oracles, and executable embedding procedures.")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for any randomized search (default 0)")
    ap.add_argument("--threads", type=int, default=1,
                    help="accepted for interface compatibility; execution is sequential")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="build a descriptor and report its density")
    p.add_argument("descriptor")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("rho", help="incident-edge density of a rooted descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=_cmd_rho)

    p = sub.add_parser("balanced", help="balancedness of a rooted descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=_cmd_balanced)

    p = sub.add_parser("realize", help="derive and verify a certificate for b/a")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--l", type=int, default=2, help="power multiplicity (default 2)")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("sweep", help="enumerate realizable pairs up to bounds")
    p.add_argument("a_max", type=int)
    p.add_argument("b_max", type=int)
    p.add_argument("--l", type=int, default=2)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("extremal", help="exhaustive extremal value at small n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--pattern", required=True, help="descriptor of the pattern")
    p.add_argument("--mode", choices=["star", "classical", "bip"], default="star")
    p.add_argument("--budget", type=int, default=oracles.STAR_BUDGET)
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("embed", help="run an embedding procedure on a JSON instance")
    esub = p.add_subparsers(dest="procedure", required=True)
    for name, fn in (("tree", _cmd_embed_tree), ("keylemma", _cmd_embed_keylemma),
                     ("extract", _cmd_embed_extract), ("asym", _cmd_embed_asym)):
        q = esub.add_parser(name)
        q.add_argument("--input", required=True, help="JSON instance file, or - for stdin")
        q.set_defaults(func=fn)

    p = sub.add_parser("check", help="run a counting or inequality check")
    csub = p.add_subparsers(dest="check_kind", required=True)
    for name, fn in (("badset", _cmd_check_badset), ("rich", _cmd_check_rich),
                     ("kst", _cmd_check_kst), ("regularize", _cmd_check_regularize)):
        q = csub.add_parser(name)
        q.add_argument("--input", required=True, help="JSON instance file, or - for stdin")
        q.set_defaults(func=fn)

    p = sub.add_parser("export", help="write a descriptor as JSON or DOT")
    p.add_argument("descriptor")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_export)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    random.seed(args.seed)
    try:
        return args.func(args)
    except IndturanError as exc:
        _dump({"error": type(exc).__name__, "message": str(exc)})
        return 1
    except (ValueError, KeyError, TypeError, OSError) as exc:
        _dump({"error": type(exc).__name__, "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
