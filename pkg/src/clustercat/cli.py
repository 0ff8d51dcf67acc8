"""Command-line interface.

Exit codes: 0 success (or CAT0), 1 NotCAT0, 2 Unsupported, 3 internal
inconsistency, 64 usage or I/O error, 65 invalid input data.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize as ser
from .cluster import ClusterTiltingSet, canonical, enumerate_clusters
from .cmc import build_category, morphism, verify_cubical_axioms
from .errors import ClusterCatError, InconsistencyError, UnsupportedError
from .picture import (
    DEFAULT_BUDGET,
    exchange_graph,
    gamma_bar,
    gamma_of_morphism,
    relations,
)
from .quiver import parse_quiver
from .reps import DEFAULT_BOUND, Algebra
from .verdict import verdict
from .wide import perpendicular, tube_ranks, whole_category

EXIT_INCONSISTENT = 3
EXIT_IO = 64
EXIT_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors share the I/O exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clustercat", description="Cluster morphism categories of acyclic quivers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "text")):
        sp.add_argument("quiver", help="quiver JSON file: {\"vertices\": n, \"arrows\": [[s, t], ...]}")
        sp.add_argument("--bound", type=_positive, default=DEFAULT_BOUND, help="entry bound for roots in tame type")
        sp.add_argument("--field", default=None, help="'Q' (default) or 'GF(p)'")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")

    common(sub.add_parser("roots", help="exceptional roots and representation type"))
    common(sub.add_parser("clusters", help="cluster-tilting sets"), ("json", "text", "dot"))
    common(sub.add_parser("category", help="objects and morphisms"), ("json", "dot", "text"))
    common(sub.add_parser("check-cubical", help="verify the cubical axioms"))
    sp = sub.add_parser("picture-group", help="relations and group words")
    common(sp)
    sp.add_argument("--gamma", default=None, help="cluster of a morphism, e.g. 'P2' or 'P2,P3'")
    sp.add_argument("--within", default=None, help="take the morphism out of the perpendicular of these objects")
    sp.add_argument("--cluster", default=None, help="complete cluster whose word to print")
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp = sub.add_parser("check-cat0", help="CAT(0) verdict")
    common(sp)
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp = sub.add_parser("export", help="export an artifact")
    common(sp, ("json", "dot"))
    sp.add_argument("--what", choices=("category", "exchange-graph", "cube", "verdict"), required=True)
    sp.add_argument("--morphism", default=None, help="cluster of the morphism whose cube to export")
    return p


def _load(args) -> Algebra:
    try:
        with open(args.quiver, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IOFailure(str(exc)) from None
    return Algebra(parse_quiver(text), bound=args.bound, field=args.field)


class _IOFailure(Exception):
    pass


def _emit(args, text: str) -> None:
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(str(exc)) from None
    else:
        sys.stdout.write(text)


def cmd_roots(args, alg: Algebra) -> int:
    roots = alg.exceptional_roots()
    data = {"type": alg.rtype.tag.value, "roots": [list(r) for r in roots]}
    if alg.rtype.null_root:
        data["null_root"] = list(alg.rtype.null_root)
        data["bound"] = alg.bound
        data["tubes"] = tube_ranks(alg).to_json()
    if args.format == "text":
        _emit(args, "".join(ser.root_str(r) + "\n" for r in roots))
    else:
        _emit(args, ser.dumps(data))
    return 0


def cmd_clusters(args, alg: Algebra) -> int:
    w = whole_category(alg)
    if args.format == "dot":
        _emit(args, ser.exchange_graph_to_dot(exchange_graph(alg, w)))
        return 0
    clusters = enumerate_clusters(alg, w)
    if args.format == "text":
        _emit(args, "".join(ser.cluster_line(c.objects) + "\n" for c in clusters))
    else:
        _emit(args, ser.dumps({"count": len(clusters), "clusters": [c.to_json() for c in clusters]}))
    return 0


def cmd_category(args, alg: Algebra) -> int:
    cat = build_category(alg)
    if args.format == "dot":
        _emit(args, ser.category_to_dot(cat))
    elif args.format == "text":
        lines = [f"objects {len(cat.objects)}", f"morphisms {len(cat.all_morphisms())}"]
        lines += [ser.wide_str(w) for w in cat.objects]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, ser.dumps(ser.category_to_json(cat)))
    return 0


def cmd_check_cubical(args, alg: Algebra) -> int:
    cat = build_category(alg)
    rep = verify_cubical_axioms(alg, cat)
    if args.format == "text":
        _emit(args, f"{'pass' if rep.ok else 'FAIL'} {rep.scope} morphisms={rep.morphisms_checked}\n"
              + "".join(v + "\n" for v in rep.violations))
    else:
        _emit(args, ser.dumps(rep.to_json()))
    return 0 if rep.ok else EXIT_INCONSISTENT


def cmd_picture_group(args, alg: Algebra) -> int:
    q = alg.quiver
    w = whole_category(alg)
    if args.within:
        w = perpendicular(alg, w, [o.root for o in ser.parse_objects(args.within, q)])
    if args.gamma is not None:
        f = morphism(alg, w, ser.parse_objects(args.gamma, q))
        g = gamma_of_morphism(alg, f)
        _emit(args, str(g) + "\n" if args.format == "text" else ser.dumps(g.to_json()))
        return 0
    if args.cluster is not None:
        t = ClusterTiltingSet(w, canonical(ser.parse_objects(args.cluster, q)))
        if not t.complete:
            raise ClusterCatError("--cluster needs a complete cluster")
        _emit(args, str(gamma_bar(alg, t)) + "\n")
        return 0
    rels = relations(alg, w)
    if args.format == "text":
        _emit(args, "".join(f"{r.lhs} = {r.rhs}\n" for r in rels))
    else:
        _emit(args, ser.dumps({"generators": len({g for r in rels for g in (r.a, r.b)}), "relations": [r.to_json() for r in rels]}))
    return 0


def cmd_check_cat0(args, alg: Algebra) -> int:
    v = verdict(alg, args.budget)
    if args.format == "text":
        line = f"{v.status.value} {v.scope}"
        if v.witness:
            line += " witness " + " ".join(ser.root_str(r) for r in v.witness)
        _emit(args, line + "\n")
    else:
        _emit(args, ser.dumps(v.to_json()))
    return v.exit_code


def cmd_export(args, alg: Algebra) -> int:
    what = args.what
    if what == "category":
        cat = build_category(alg)
        _emit(args, ser.category_to_dot(cat) if args.format == "dot" else ser.dumps(ser.category_to_json(cat)))
    elif what == "exchange-graph":
        g = exchange_graph(alg, whole_category(alg))
        _emit(args, ser.exchange_graph_to_dot(g) if args.format == "dot" else ser.dumps(ser.exchange_graph_to_json(g)))
    elif what == "cube":
        if not args.morphism:
            raise ClusterCatError("--what cube needs --morphism")
        f = morphism(alg, whole_category(alg), ser.parse_objects(args.morphism, alg.quiver))
        _emit(args, ser.cube_to_dot(alg, f) if args.format == "dot" else ser.dumps(ser.cube_to_json(alg, f)))
    else:
        if args.format == "dot":
            raise ClusterCatError("a verdict has no DOT form")
        v = verdict(alg)
        _emit(args, ser.dumps(v.to_json()))
        return v.exit_code
    return 0


COMMANDS = {
    "roots": cmd_roots,
    "clusters": cmd_clusters,
    "category": cmd_category,
    "check-cubical": cmd_check_cubical,
    "picture-group": cmd_picture_group,
    "check-cat0": cmd_check_cat0,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        alg = _load(args)
        if args.command != "check-cat0" and not (args.command == "export" and args.what == "verdict"):
            alg.require_supported()
        return COMMANDS[args.command](args, alg)
    except _IOFailure as exc:
        print(f"clustercat: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InconsistencyError as exc:
        print(f"clustercat: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except UnsupportedError as exc:
        print(f"clustercat: unsupported: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ClusterCatError as exc:
        print(f"clustercat: {exc}", file=sys.stderr)
        return EXIT_DATA
    except json.JSONDecodeError as exc:
        print(f"clustercat: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
