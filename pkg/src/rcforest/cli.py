"""Command-line harness: ``rcforest {build,update,query,check,bench}``.

Exit codes: 0 success, 1 a batch failed validation, 2 an invariant failed,
3 an input could not be read or parsed.
"""
import argparse
import copy
import csv
import json
import random
import sys
import time

from .dynamic import EXECUTORS, DynamicForest
from .errors import InvariantError, ValidationError
from .forest import BatchEdit, ParseError, error_line, parse_batch, parse_forest
from .generators import SHAPES, generate, parse_gen, random_batch
from .invariants import round_bound, sweep
from .oracle import (
    NaiveForest,
    oracle_connected,
    oracle_lca,
    oracle_path_extreme,
    oracle_path_sum,
    oracle_subtree_sum,
)
from .queries import QueryRequest, format_answer
from .rc_tree import to_dot

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3
FAULTS = ("drop-mis", "skip-case3")
BENCH_COLUMNS = ("n", "k", "executor", "threads", "rounds", "touched", "wall_ns")


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    try:
        with open(path, mode) as fh:
            fh.write(data)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def load_forest(args) -> DynamicForest:
    kwargs = dict(threads=args.threads, debug=args.debug_invariants)
    if args.input:
        try:
            n, t, edges = parse_forest(_read(args.input))
        except ParseError as exc:
            raise InputError(f"{args.input}: {exc}") from None
    elif args.gen:
        shape, n, seed = parse_gen(args.gen)
        t = 3
        edges = generate(shape, n, seed, t)
    else:
        raise InputError("one of --input or --gen is required")
    try:
        return DynamicForest.from_edges(n, edges, t, executor=args.executor, **kwargs)
    except ValidationError as exc:
        raise InputError(f"forest input is not a valid bounded-degree forest: {exc}") from None


def _emit(rows, fmt, out):
    if fmt == "csv":
        keys = list(rows[0]) if rows else []
        w = csv.DictWriter(out, fieldnames=keys, extrasaction="ignore")
        w.writeheader()
        for row in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                        for k, v in row.items()})
    else:
        for row in rows:
            out.write(json.dumps(row, sort_keys=True) + "\n")


def _dump(forest, args):
    if args.dump:
        _write(args.dump, forest.serialize())
    if getattr(args, "dot", None):
        _write(args.dot, to_dot(forest.record))


def cmd_build(args, out):
    forest = load_forest(args)
    rec = forest.record
    report = {
        "n": forest.n, "m": forest.m, "t": forest.t, "executor": args.executor,
        "rounds": rec.rounds, "round_bound": round_bound(forest.n),
        "clusters": len(rec.value), "live_per_round": rec.live_counts(),
    }
    if rec.phase_info:
        report["phase_info"] = rec.phase_info
    _emit([report], args.format, out)
    _dump(forest, args)
    if rec.rounds > report["round_bound"] or report["clusters"] != forest.n + forest.m:
        print("build violates the round bound or the cluster census", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _apply_batches(forest, args, out=None):
    rows = []
    for path in args.batch or ():
        text = _read(path)
        try:
            edit = parse_batch(text)
        except ParseError as exc:
            raise InputError(f"{path}: {exc}") from None
        try:
            valid = forest.validate(edit)
        except ValidationError as exc:
            line = error_line(edit, exc)
            where = f"{path}:{line}" if line is not None else path
            print(f"{where}: {type(exc).__name__}: {exc}", file=sys.stderr)
            return rows, EXIT_INVALID
        stats = forest.update(valid, executor=args.executor)
        row = stats.to_json()
        row["batch"] = path
        rows.append(row)
    return rows, EXIT_OK


def cmd_update(args, out):
    forest = load_forest(args)
    rows, code = _apply_batches(forest, args)
    _emit(rows, args.format, out)
    if code == EXIT_OK:
        _dump(forest, args)
    return code


def cmd_query(args, out):
    forest = load_forest(args)
    _, code = _apply_batches(forest, args)
    if code != EXIT_OK:
        return code
    if not args.queries:
        raise InputError("--queries is required")
    reqs = []
    for lineno, raw in enumerate(_read(args.queries).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            reqs.append(QueryRequest.parse(line))
        except ValueError as exc:
            raise InputError(f"{args.queries}:{lineno}: {exc}") from None
    for ans in forest.batch_query(reqs):
        out.write(format_answer(ans) + "\n")
    return EXIT_OK


# -- check ------------------------------------------------------------------

def _query_mismatch(forest, nf, rng, trials):
    n = forest.n
    for _ in range(trials):
        u, v, r = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        conn = oracle_connected(nf, u, v)
        if forest.connected(u, v) != conn:
            return f"conn {u} {v}"
        if not conn:
            continue
        if forest.path_sum(u, v) != oracle_path_sum(nf, u, v):
            return f"psum {u} {v}"
        if u != v and forest.path_max_edge(u, v) != oracle_path_extreme(nf, u, v, "max"):
            return f"pmax {u} {v}"
        if u != v and forest.path_min_edge(u, v) != oracle_path_extreme(nf, u, v, "min"):
            return f"pmin {u} {v}"
        if oracle_connected(nf, r, u) and forest.lca(r, u, v) != oracle_lca(nf, r, u, v):
            return f"lca {r} {u} {v}"
        if nf.adj[u]:
            c = min(nf.adj[u])
            if forest.subtree_sum(u, c) != oracle_subtree_sum(nf, u, c):
                return f"subtree {u} {c}"
    return None


def check_one(shape, n, seed, *, executor="basic", fault=None, steps=5, k=4, trials=50):
    """Run the invariant sweep on one generated forest; return the first failure or None."""
    rng = random.Random(f"check:{shape}:{n}:{seed}")
    edges = generate(shape, n, seed, drop=0.05)
    weights = [rng.randint(0, 9) for _ in range(n)]
    forest = DynamicForest.from_edges(n, edges, vertex_weights=weights, executor=executor)
    if fault == "drop-mis":
        forest.build("basic", fault=fault)
    problems = sweep(forest)
    if problems:
        return f"build: {problems[0]}"
    for threads in (1, 2, 8):
        for ex in EXECUTORS:
            other = DynamicForest.from_edges(n, edges, vertex_weights=weights,
                                             executor=ex, threads=threads)
            if other.serialize() != forest.serialize():
                return f"build with executor={ex} threads={threads} serializes differently"
    nf = NaiveForest(n, edges, weights)
    bad = _query_mismatch(forest, nf, rng, trials)
    if bad:
        return f"build: query {bad} disagrees with the oracle"
    for step in range(steps):
        ins, dels = random_batch(n, list(forest.edges), k, rng)
        twin = copy.deepcopy(forest)
        forest.update(BatchEdit(ins, dels), executor=executor, fault=fault)
        fault = None
        twin.update(BatchEdit(ins, dels), executor="phased" if executor == "basic" else "basic")
        nf.apply(ins, dels)
        problems = sweep(forest)
        if problems:
            return f"update {step}: {problems[0]}"
        if twin.serialize() != forest.serialize():
            return f"update {step}: executors disagree"
        bad = _query_mismatch(forest, nf, rng, trials)
        if bad:
            return f"update {step}: query {bad} disagrees with the oracle"
    return None


def cmd_check(args, out):
    if args.input:
        forest = load_forest(args)
        problems = sweep(forest)
        for p in problems:
            out.write(f"FAIL {p}\n")
        return EXIT_INVARIANT if problems else EXIT_OK
    shape, n, seed0 = parse_gen(args.gen or "random-ternary:128:0")
    for seed in range(seed0, seed0 + args.seeds):
        try:
            failure = check_one(shape, n, seed, executor=args.executor, fault=args.inject_fault)
        except InvariantError as exc:
            failure = f"{type(exc).__name__}: {exc}"
        if failure:
            out.write(f"FAIL {shape}:{n}:{seed} {failure}\n")
            return EXIT_INVARIANT
    out.write(f"PASS {args.seeds} seeds of {shape}:{n}\n")
    return EXIT_OK


# -- bench ------------------------------------------------------------------

def bench_rows(sizes, ks, executors, threads, shape="random-ternary", seed=0):
    """Build rows (``k = 0``) and update rows for every size, batch size and executor."""
    for n in sizes:
        edges = generate(shape, n, seed)
        for ex in executors:
            start = time.perf_counter_ns()
            base = DynamicForest.from_edges(n, edges, executor=ex, threads=threads)
            wall = time.perf_counter_ns() - start
            yield dict(n=n, k=0, executor=ex, threads=threads, rounds=base.rounds,
                       touched=sum(base.record.live_counts()), wall_ns=wall)
            for k in ks:
                if k > n:
                    continue
                rng = random.Random(f"bench:{n}:{k}:{seed}")
                ins, dels = random_batch(n, list(base.edges), k, rng)
                forest = copy.deepcopy(base)
                stats = forest.update(BatchEdit(ins, dels), executor=ex)
                yield dict(n=n, k=stats.k, executor=ex, threads=threads, rounds=stats.rounds,
                           touched=stats.total_touched, wall_ns=stats.wall_time_ns)


def cmd_bench(args, out):
    sizes = [2 ** e for e in args.log_sizes]
    executors = EXECUTORS if args.executor == "both" else (args.executor,)
    w = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
    w.writeheader()
    for row in bench_rows(sizes, args.ks, executors, args.threads, args.shape, args.seed):
        w.writerow(row)
    return EXIT_OK


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="F", help="forest file ('n t' then 'u v [w]' lines)")
    common.add_argument("--gen", metavar="SHAPE:N:SEED",
                        help=f"generate a forest; shapes: {', '.join(SHAPES)}")
    common.add_argument("--executor", choices=EXECUTORS, default="basic")
    common.add_argument("--threads", type=int, default=1, metavar="N")
    common.add_argument("--debug-invariants", action="store_true",
                        help="check maximality and the affected-set bounds as it runs")
    common.add_argument("--dump", metavar="PATH", help="write the canonical serialization")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="rcforest", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="contract a forest and report rounds")
    p.add_argument("--dot", metavar="PATH", help="write the RC-Tree in Graphviz format")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("update", parents=[common], help="apply batch files, report stats")
    p.add_argument("--batch", metavar="F", action="append", help="batch file (repeatable)")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("query", parents=[common], help="answer a query file")
    p.add_argument("--batch", metavar="F", action="append", help="apply before querying")
    p.add_argument("--queries", metavar="F")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("check", parents=[common], help="full invariant sweep")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--inject-fault", choices=FAULTS, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="CSV of rounds, touched work and wall time")
    p.add_argument("--log-sizes", type=_int_list, default=[10, 12, 14],
                   help="comma-separated exponents e for n = 2**e (up to 20)")
    p.add_argument("--ks", type=_int_list, default=[1, 4, 16, 64, 256])
    p.add_argument("--executor", choices=EXECUTORS + ("both",), default="both")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--shape", choices=SHAPES, default="random-ternary")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantError as exc:
        print(f"invariant failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
