"""``treepart`` command line: generate, partition, verify and audit graphs."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config
from .errors import TreePartError
from .graph import format_graph
from .oracles import parse_drawing

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_graph(arg: str, seed: int):
    from .verify import load_instance
    try:
        return load_instance(arg, seed)
    except (ValueError, OSError) as exc:
        raise UsageError(f"cannot load graph {arg!r}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    _, g, drawing = _load_graph(args.spec, args.seed)
    _emit(format_graph(g), args.out)
    if drawing is not None and args.drawing_out:
        from .oracles import format_drawing
        Path(args.drawing_out).write_text(format_drawing(drawing))
    return EXIT_OK


def cmd_tw(args) -> int:
    from .treewidth import exact_treewidth, format_td, heuristic_td
    _, g, _ = _load_graph(args.graph, args.seed)
    if args.heuristic:
        td = heuristic_td(g)
        w = td.width
    else:
        try:
            w, td = exact_treewidth(g)
        except TreePartError as exc:
            print(f"error: {exc} (use --heuristic)", file=sys.stderr)
            return EXIT_FAIL
    print(w)
    if args.td_out:
        Path(args.td_out).write_text(format_td(td))
    return EXIT_OK


def cmd_partition(args) -> int:
    from .partitioner import format_partition
    from .pipelines import resolve_pipeline
    from .verify import validate_partition
    _, g, drawing = _load_graph(args.graph, args.seed)
    if args.drawing:
        drawing = parse_drawing(Path(args.drawing).read_text())
    try:
        run = resolve_pipeline(args.cls)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        p = run(g, drawing=drawing, checked=args.checked)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except TreePartError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.c is not None and p.c > args.c:
        print(f"error: pipeline {args.cls} produces c = {p.c}, above --c {args.c}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.c is not None:
        p = type(p)(p.parts, p.quotient, p.certificate, args.c, p.meta)
    report = validate_partition(g, p)
    _emit(format_partition(p), args.out)
    print(f"c = {p.c}, width = {p.width}, bound = {p.meta.get('bound')}", file=sys.stderr)
    if not report.valid:
        print(f"error: output failed validation: {report.violations[:3]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .partitioner import parse_partition
    from .verify import validate_partition
    _, g, _ = _load_graph(args.graph, args.seed)
    try:
        p = parse_partition(Path(args.partition).read_text())
    except (OSError, ValueError, KeyError, AssertionError) as exc:
        raise UsageError(f"cannot read partition: {exc}") from exc
    r = validate_partition(g, p)
    print(json.dumps({"valid": r.valid, "c": p.c, "width": r.width,
                      "quotient_tw_ok": r.quotient_tw_ok,
                      "violations": [[k, repr(w)] for k, w in r.violations[:20]]}))
    return EXIT_OK if r.valid else EXIT_FAIL


def cmd_brute(args) -> int:
    from .verify import brute_min_tpw
    _, g, _ = _load_graph(args.graph, args.seed)
    try:
        if args.tpw is not None:
            print(brute_min_tpw(g, args.tpw))
            return EXIT_OK
        from .coverings import check_cd_disjointed, parse_covering, singleton_partition
        c, d = args.disjointed
        beta = (parse_covering(Path(args.covering).read_text()) if args.covering
                else singleton_partition(g))
        rep = check_cd_disjointed(g, beta, c, d)
        if rep.ok:
            print(f"({c},{d})-disjointed: yes (queries {rep.queries}, max |Q| {rep.max_q})")
            return EXIT_OK
        q = rep.counterexample
        print(f"({c},{d})-disjointed: no; blocks "
              f"{[sorted(b.vertices) for b in q.blocks]} component {sorted(q.component)} "
              f"needs |Q| = {len(rep.witness.Q)}")
        return EXIT_FAIL
    except TreePartError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _read_suite(path: str) -> list[tuple[str, str]]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        pipeline, _, instance = line.partition(" ")
        if not instance.strip():
            raise UsageError(f"suite line needs a pipeline and an instance: {line!r}")
        rows.append((pipeline, instance.strip()))
    return rows


def cmd_bench(args) -> int:
    from .verify import rows_to_csv, rows_to_json, run_experiment
    try:
        suite = _read_suite(args.suite)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for pipeline, instance in suite:
        try:
            got = run_experiment(pipeline, [instance], seed=args.seed, checked=args.checked)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        for r in got:
            r.instance = f"{pipeline}|{r.instance}"
        rows.extend(got)
    _emit(rows_to_csv(rows), args.csv)
    if args.json:
        Path(args.json).write_text(rows_to_json(rows))
    bad = [r for r in rows if "invalid" in r.flags or r.flags.startswith("error")
           or not r.within_bound]
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treepart", description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed for random instances")
    ap.add_argument("--budgets", default="",
                    help="overrides such as tw=20,pat=12,ep=1000000 (after TREEPART_BUDGETS)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="write a generated graph")
    p.add_argument("spec", help='family such as "gcl 3 2", grid5x5, "rand-outer 20 1"')
    p.add_argument("-o", "--out")
    p.add_argument("--drawing-out", help="write the circular drawing of rand-outer instances")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tw", help="treewidth")
    p.add_argument("graph")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--heuristic", action="store_true")
    p.add_argument("--td-out")
    p.set_defaults(func=cmd_tw)

    p = sub.add_parser("partition", help="build a c-tree-partition")
    p.add_argument("graph")
    p.add_argument("--class", dest="cls", required=True,
                   help="degree, minor-free:s, topo:p, k2t, outer-k:k, spider:s,t, path:n, "
                        "induced-star:s, induced-star-forest:s,l, induced-p3-forest:k, "
                        "utw0-edgeless:k, utw0-p3, k1t:t")
    p.add_argument("--c", type=int, help="declare the output as a c-tree-partition")
    p.add_argument("--drawing", help="circular drawing file (outer-k)")
    p.add_argument("--checked", action="store_true", help="re-verify every oracle answer")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="validate a partition file")
    p.add_argument("graph")
    p.add_argument("partition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brute", help="brute-force audits on small graphs")
    p.add_argument("graph")
    m = p.add_mutually_exclusive_group(required=True)
    m.add_argument("--tpw", type=int, metavar="C", help="exact c-tree-partition-width")
    m.add_argument("--disjointed", type=int, nargs=2, metavar=("C", "D"))
    p.add_argument("--covering", help="covering file (default: singletons)")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("bench", help="run a suite file of 'pipeline instance' lines")
    p.add_argument("suite")
    p.add_argument("--csv", help="CSV output path (default stdout)")
    p.add_argument("--json", help="JSON mirror path")
    p.add_argument("--checked", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    old = config.budgets()
    try:
        config.set_budgets(config.Budgets.from_env().with_overrides(args.budgets))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        config.set_budgets(old)


if __name__ == "__main__":
    sys.exit(main())
