"""``streammatch`` command line: ``gen``, ``run`` and ``verify``.

Exit codes: 0 success, 2 parse or configuration error, 3 certificate
violation (invalid matching, infeasible cover, or a solver self-check that
failed).

Files written by ``run``:

* ``--matching-out``: one ``u v`` line per matched edge.
* ``--cover-out``: the best round's dual certificate.  First line
  ``scale k``, then ``y v value`` for every nonzero vertex dual and
  ``s z v1 v2 ...`` for every odd set.  A König cover is written as
  ``scale 1`` with ``y v 1`` per cover vertex.
* ``--sample-out``: the best round's sampled edges as an edge list, with
  the weights the solver saw (rescaled ones for ``mwm``).

The cover certifies the matching against the sample it was solved on, so
``verify SAMPLE MATCHING --cover COVER`` reports a zero gap, while
``verify GRAPH MATCHING`` checks the matching against the full input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from ._driver import RoundEvent
from .bipartite import MbmConfig, run_mbm
from .general import MwmConfig, run_mwm
from .graph import Edge, Graph, LaminarFamily, Matching, OddSetCover, VertexCover, validate_matching
from .solvers import CertificateError
from .stream import ORDER_MODES, EdgeStream, StreamFormatError, generate, read_graph, format_edge_list

EXIT_OK, EXIT_CONFIG, EXIT_CERT = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ files

def format_matching(m: Matching) -> str:
    return "".join(f"{e.u} {e.v}\n" for e in sorted(m.edges, key=lambda e: e.key))


def format_cover(cover) -> str:
    if isinstance(cover, VertexCover):
        lines = [f"scale 1 {len(cover)}"]
        lines += [f"y {v} 1" for v in sorted(cover.members)]
    else:
        lines = [f"scale {cover.scale} {len(cover.z)}"]
        lines += [f"y {v} {y}" for v, y in enumerate(cover.y) if y]
        lines += [f"s {z} " + " ".join(map(str, s)) for s, z in zip(cover.laminar.sets, cover.z)]
    return "\n".join(lines) + "\n"


def _data_lines(path: str):
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            tokens = line.split()
            if tokens and not tokens[0].startswith("#"):
                yield lineno, tokens


def read_matching_pairs(path: str) -> list[tuple[int, int]]:
    pairs = []
    for lineno, tokens in _data_lines(path):
        if len(tokens) != 2:
            raise StreamFormatError("matching lines are 'u v'", lineno)
        try:
            pairs.append((int(tokens[0]), int(tokens[1])))
        except ValueError:
            raise StreamFormatError("non-integer vertex", lineno) from None
    return pairs


def read_cover(path: str, n: int) -> OddSetCover:
    scale = None
    y = [0] * n
    sets, z = [], []
    try:
        for lineno, tokens in _data_lines(path):
            kind, vals = tokens[0], [int(t) for t in tokens[1:]]
            if kind == "scale" and scale is None and vals:
                scale = vals[0]
            elif kind == "y" and len(vals) == 2 and 0 <= vals[0] < n:
                y[vals[0]] = vals[1]
            elif kind == "s" and len(vals) >= 2:
                z.append(vals[0])
                sets.append(tuple(sorted(vals[1:])))
            else:
                raise StreamFormatError(f"unexpected cover line {' '.join(tokens)!r}", lineno)
    except ValueError as exc:
        if isinstance(exc, StreamFormatError):
            raise
        raise StreamFormatError(f"bad cover file: {exc}") from None
    if scale is None or scale < 1:
        raise StreamFormatError("cover file needs a 'scale k' line with k >= 1")
    try:
        return OddSetCover(tuple(y), LaminarFamily.from_sets(sets), tuple(z), scale)
    except ValueError as exc:
        raise StreamFormatError(f"malformed cover: {exc}") from None


# ------------------------------------------------------------------ gen

def cmd_gen(args) -> int:
    if args.planted_bipartite is not None:
        n, kind, params = args.planted_bipartite, "planted-perfect-bipartite", (args.noise_deg,)
    elif args.random_bipartite is not None:
        n, kind, params = args.random_bipartite, "random-bipartite", (args.avg_deg,)
    else:
        n, kind, params = args.general, "random-general-weighted", (args.avg_deg, args.wmax)
    if n < 1:
        raise UsageError("instance size must be at least 1")
    if any(p is None for p in params):
        raise UsageError(f"{kind} needs " + ("--noise-deg" if "planted" in kind else
                                             "--avg-deg" + (" and --wmax" if "general" in kind else "")))
    try:
        g = generate(kind, n, *params, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = format_edge_list(g, weights=(kind == "random-general-weighted"))
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
        info = sys.stdout
    else:
        sys.stdout.write(text)
        info = sys.stderr
    if kind == "planted-perfect-bipartite":
        print(f"planted mu = {n}", file=info)
    return EXIT_OK


# ------------------------------------------------------------------ run

def _parse_seeds(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise UsageError(f"--seeds expects a..b, got {text!r}") from None
    if b < a:
        raise UsageError("--seeds range is empty")
    return list(range(a, b + 1))


def _config(args, seed: int):
    common = dict(epsilon=args.eps, seed=seed, eta=args.eta, rounds_override=args.rounds)
    if args.sample_constant is not None:
        common["sample_constant"] = args.sample_constant
    if args.alg == "mbm":
        return MbmConfig(**common)
    return MwmConfig(**common)


def _suffixed(path: Optional[str], seed: int, batch: bool) -> Optional[str]:
    if path is None or not batch:
        return path
    root, ext = os.path.splitext(path)
    return f"{root}.{seed}{ext}"


def _execute(args, seed: int, batch: bool) -> dict:
    """One run; writes the side files and returns the metrics as a dict."""
    cfg = _config(args, seed)
    stream = EdgeStream(args.input, order=args.order, seed=seed)
    best: dict = {}

    def keep_best(ev: RoundEvent) -> None:
        if not best or ev.matching.value > best["value"]:
            best.update(value=ev.matching.value, cover=ev.cover, sample=ev.sample)

    if args.alg == "mbm":
        matching, metrics = run_mbm(stream, cfg, keep_best)
    else:
        matching, metrics = run_mwm(stream, cfg, keep_best)

    if args.matching_out:
        with open(_suffixed(args.matching_out, seed, batch), "w", encoding="ascii") as fh:
            fh.write(format_matching(matching))
    if args.cover_out and best:
        with open(_suffixed(args.cover_out, seed, batch), "w", encoding="ascii") as fh:
            fh.write(format_cover(best["cover"]))
    if args.sample_out and best:
        s = best["sample"]
        g = Graph(stream.n, zip(s.u.tolist(), s.v.tolist(), s.w.tolist()), stream.bipartition)
        with open(_suffixed(args.sample_out, seed, batch), "w", encoding="ascii") as fh:
            fh.write(format_edge_list(g, weights=args.alg == "mwm"))
    d = metrics.to_json()
    if args.no_time:
        d.pop("wall_time_ms")
    return d


def _execute_star(job):
    return _execute(*job)


def cmd_run(args) -> int:
    seeds = _parse_seeds(args.seeds) if args.seeds else [args.seed]
    batch = args.seeds is not None
    _config(args, seeds[0])  # fail fast on bad flags
    if not os.path.exists(args.input):
        raise UsageError(f"no such file: {args.input}")
    EdgeStream(args.input)  # validates the file before any worker starts

    if batch and args.workers != 1 and len(seeds) > 1:
        workers = args.workers or os.cpu_count() or 1
        with ProcessPoolExecutor(max_workers=min(workers, len(seeds))) as pool:
            results = list(pool.map(_execute_star, [(args, s, True) for s in seeds]))
    else:
        results = [_execute(args, s, batch) for s in seeds]

    payload = results if batch else results[0]
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    heaviest: dict[tuple[int, int], int] = {}
    for e in g.edges:
        heaviest[e.key] = max(heaviest.get(e.key, 0), e.weight)
    pairs = read_matching_pairs(args.matching)

    report = {"matching_edges": len(pairs)}
    problems = []
    edges = []
    for u, v in pairs:
        key = (min(u, v), max(u, v))
        if u == v or key not in heaviest:
            problems.append(f"({u}, {v}) is not an edge of the graph")
        else:
            edges.append(Edge(u, v, heaviest[key]))
    matching = Matching.from_edges(edges, weighted=True)
    valid = not problems and validate_matching(g, matching)
    if not problems and not valid:
        problems.append("matched edges share a vertex")
    report["matching_valid"] = valid
    report["matching_value"] = matching.value

    if args.cover:
        cover = read_cover(args.cover, g.n)
        u, v, w = g.arrays
        missed = int((~cover.covered_mask(u, v, w)).sum()) if g.m else 0
        report["cover_feasible"] = missed == 0
        report["uncovered_edges"] = missed
        report["cover_scale"] = cover.scale
        report["cover_value"] = cover.value()
        gap = cover.value() - cover.scale * matching.value
        report["duality_gap"] = gap  # in cover units
        report["certified_optimal"] = valid and missed == 0 and gap == 0
        if missed:
            problems.append(f"cover misses {missed} edge(s)")

    report["ok"] = not problems
    report["problems"] = problems
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if not problems else EXIT_CERT


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="streammatch", description="Semi-streaming matching toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a generated instance as an edge list")
    kind = g.add_mutually_exclusive_group(required=True)
    kind.add_argument("--planted-bipartite", type=int, metavar="N", help="N x N with a planted perfect matching")
    kind.add_argument("--random-bipartite", type=int, metavar="N", help="N x N random bipartite")
    kind.add_argument("--general", type=int, metavar="N", help="N vertices, random weights 1..wmax")
    g.add_argument("--noise-deg", type=int)
    g.add_argument("--avg-deg", type=float)
    g.add_argument("--wmax", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run a streaming algorithm, print metrics JSON")
    r.add_argument("input")
    r.add_argument("--alg", choices=("mbm", "mwm"), required=True)
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--eta", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--seeds", metavar="A..B", help="run every seed in A..B, in parallel")
    r.add_argument("--workers", type=int, default=0, help="batch worker processes (0: one per CPU)")
    r.add_argument("--order", choices=ORDER_MODES, default="as-given")
    r.add_argument("--rounds", type=int, help="override the round count")
    r.add_argument("--sample-constant", type=float, help="leading constant of the sampling rate")
    r.add_argument("--no-time", action="store_true", help="omit wall_time_ms")
    r.add_argument("--matching-out")
    r.add_argument("--cover-out")
    r.add_argument("--sample-out")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a matching, and optionally a cover, against a graph")
    v.add_argument("graph")
    v.add_argument("matching")
    v.add_argument("--cover")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CertificateError as exc:
        print(f"streammatch: certificate violation: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (UsageError, ValueError, OSError) as exc:  # ConfigError, StreamFormatError included
        print(f"streammatch: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
