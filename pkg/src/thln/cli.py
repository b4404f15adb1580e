"""Command-line interface: ``thln gen|embed|weakpairs|verify``.

Exit codes: 0 ok, 2 validation error, 3 invalid length, 4 no path found
where one is guaranteed, 5 engine/oracle disagreement.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .embed import PathResult, embed_path, EmbedRequest, spectrum
from .errors import InvalidLength, NoPathFound, ThlnError
from .faults import (FaultSet, SurvivorView, classify_pair, fault_elements, find_weak_vertices,
                     from_elements, parse_inline, random_fault_set)
from .graphs import CubeGraph, Variant, export, make_graph

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_LENGTH = 3
EXIT_NO_PATH = 4
EXIT_DISAGREE = 5

DEFAULT_SEED = oracle.DEFAULT_SEED
VARIANTS = [v.value for v in Variant]


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def default_seed() -> int:
    env = os.environ.get("THLN_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise CliError(f"THLN_SEED must be an integer, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thln", description="Fault-tolerant path embedding in THLNs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph_only=False):
        sp.add_argument("--variant", choices=VARIANTS, required=True)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--seed", type=int, default=None,
                        help="seed for generic graphs and sampling (default: $THLN_SEED or built-in)")
        sp.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
        if not graph_only:
            sp.add_argument("--faults", default="",
                            help="inline 'v:00101,e:00101-00111' or a JSON file")

    g = sub.add_parser("gen", help="generate a graph")
    common(g, graph_only=True)
    g.add_argument("--format", choices=["json", "dot", "text"], default="json")

    e = sub.add_parser("embed", help="embed a path of a given length")
    common(e)
    e.add_argument("--u", required=True)
    e.add_argument("--v", required=True)
    grp = e.add_mutually_exclusive_group(required=True)
    grp.add_argument("--l", type=int)
    grp.add_argument("--all", action="store_true", help="every length in the guaranteed range")
    e.add_argument("--format", choices=["json", "text"], default="json")

    w = sub.add_parser("weakpairs", help="report weak 2-degree vertices")
    common(w)
    w.add_argument("--u")
    w.add_argument("--v")
    w.add_argument("--sweep", action="store_true", help="sweep all fault sets of size --k")
    w.add_argument("--k", type=int, default=None)
    w.add_argument("--samples", type=int, default=2000, help="sampled sets when not exhaustive")
    w.add_argument("--format", choices=["json", "text"], default="json")

    v = sub.add_parser("verify", help="cross-check engine against the oracle")
    common(v)
    v.add_argument("--u")
    v.add_argument("--v")
    v.add_argument("--samples", type=int, default=20, help="random fault sets")
    v.add_argument("--pairs", type=int, default=1, help="random pairs per fault set")
    v.add_argument("--full", action="store_true", help="every fault set with |F| <= n-2 and every pair")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    v.add_argument("--no-engine", action="store_true", help="oracle only, no cross-check")
    v.add_argument("--mutate", action="store_true", help="self-test: corrupt engine paths")
    return p


# -- argument resolution ------------------------------------------------------


def resolve_graph(variant: str, n: int, seed: int, *, min_n: int = 3, max_n: Optional[int] = None) -> CubeGraph:
    if n < min_n:
        raise CliError(f"n must be >= {min_n} for this command, got {n}")
    if max_n is not None and n > max_n:
        raise CliError(f"n must be <= {max_n} for this command, got {n}")
    if variant == "tq" and n % 2 == 0:
        raise CliError("twisted cube requires odd n")
    return make_graph(variant, n, seed if variant == "generic" else None)


def resolve_faults(graph: CubeGraph, spec: str) -> FaultSet:
    if not spec:
        return FaultSet()
    path = Path(spec)
    if path.is_file():
        return FaultSet.from_json(graph, path.read_text())
    return parse_inline(graph, spec)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def path_json(graph: CubeGraph, result: PathResult) -> str:
    return json.dumps(result.to_dict(graph))


def _path_text(graph: CubeGraph, result: PathResult) -> str:
    labels = " ".join(graph.label(x) for x in result.vertices)
    return f"l={result.length} cases={','.join(result.case_trace)} path={labels}"


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    g = resolve_graph(args.variant, args.n, args.seed)
    if args.format == "text":
        lines = [f"{g.label(x)}: {' '.join(g.label(y) for y in g.neighbors(x))}" for x in g.vertices()]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, export(g, args.format).decode())
    return EXIT_OK


def cmd_embed(args) -> int:
    g = resolve_graph(args.variant, args.n, args.seed, min_n=5)
    faults = resolve_faults(g, args.faults)
    u, v = g.vertex(args.u), g.vertex(args.v)
    if args.all:
        results = list(spectrum(g, faults, u, v).values())
    else:
        results = [embed_path(EmbedRequest(g, faults, u, v, args.l))]
    fmt = path_json if args.format == "json" else _path_text
    _emit(args, "\n".join(fmt(g, r) for r in results))
    return EXIT_OK


def cmd_weakpairs(args) -> int:
    g = resolve_graph(args.variant, args.n, args.seed)
    if args.sweep:
        k = args.k if args.k is not None else g.n - 2
        hits = oracle.exhaustive_weak_pairs(g, k, samples=args.samples, seed=args.seed)
        exhaustive = g.n <= 4
        sets = oracle.sweep_size(g, k) if exhaustive else args.samples
        per_set: dict = {}
        for fs, w, _ in hits:
            per_set[fs] = per_set.get(fs, 0) + 1
        doc = {
            "variant": g.variant.value, "n": g.n, "k": k,
            "mode": "exhaustive" if exhaustive else "sampled",
            "seed": None if exhaustive else args.seed,
            "fault_sets": sets,
            "sets_with_weak_vertex": len(per_set),
            "weak_vertices": len(hits),
            "max_weak_per_set": max(per_set.values(), default=0),
        }
        if args.format == "json":
            _emit(args, json.dumps(doc))
        else:
            _emit(args, "\n".join(f"{key}: {val}" for key, val in doc.items()))
        return EXIT_OK
    faults = resolve_faults(g, args.faults)
    view = SurvivorView(g, faults)
    weak = find_weak_vertices(view)
    doc = {"weak_vertices": [{"w": g.label(w), "pair": [g.label(a), g.label(b)]} for w, (a, b) in weak]}
    if args.u is not None and args.v is not None:
        pc = classify_pair(view, g.vertex(args.u), g.vertex(args.v))
        doc["pair"] = {"u": args.u, "v": args.v, "class": pc.kind,
                       "witness": None if pc.witness is None else g.label(pc.witness)}
    if args.format == "json":
        _emit(args, json.dumps(doc))
    else:
        lines = [f"weak vertex {d['w']} pair {d['pair'][0]} {d['pair'][1]}" for d in doc["weak_vertices"]]
        if not lines:
            lines = ["no weak vertices"]
        if "pair" in doc:
            lines.append(f"pair {args.u} {args.v}: {doc['pair']['class']}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def corrupt_path(path: list) -> list:
    """Self-test mutation: repeat the first vertex in the middle of the path."""
    out = list(path)
    out[len(out) // 2] = out[0]
    return out


def _instances(g: CubeGraph, args, seed: int):
    if args.faults or (args.u is not None and args.v is not None):
        faults = resolve_faults(g, args.faults)
        if args.u is not None and args.v is not None:
            yield faults, g.vertex(args.u), g.vertex(args.v)
            return
        alive = [x for x in g.vertices() if x not in faults.vertices]
        rng = random.Random(seed)
        for _ in range(args.pairs):
            u, v = rng.sample(alive, 2)
            yield faults, u, v
        return
    if args.full:
        elements = fault_elements(g)
        for k in range(g.n - 1):
            for combo in itertools.combinations(elements, k):
                faults = from_elements(combo)
                alive = [x for x in g.vertices() if x not in faults.vertices]
                for u, v in itertools.combinations(alive, 2):
                    yield faults, u, v
        return
    rng = random.Random(seed)
    for _ in range(args.samples):
        faults = random_fault_set(g, rng.randint(0, g.n - 2), rng)
        alive = [x for x in g.vertices() if x not in faults.vertices]
        for _ in range(args.pairs):
            u, v = rng.sample(alive, 2)
            yield faults, u, v


@lru_cache(maxsize=None)
def _graph_for(variant: str, n: int, seed: int) -> CubeGraph:
    return make_graph(variant, n, seed if variant == "generic" else None)


def _verify_one(job) -> str:
    variant, n, seed, verts, edges, u, v, cross, budget, mutate = job
    g = _graph_for(variant, n, seed)
    faults = FaultSet(frozenset(verts), frozenset(edges))
    rep = oracle.verify_spectrum(g, faults, u, v, cross_check=cross, budget=budget,
                                 mutate=corrupt_path if mutate else None)
    return rep.to_json_line()


def cmd_verify(args) -> int:
    g = resolve_graph(args.variant, args.n, args.seed, min_n=5, max_n=6)
    jobs = ((args.variant, args.n, args.seed, tuple(f.vertices), tuple(f.edges), u, v,
             not args.no_engine, args.budget, args.mutate)
            for f, u, v in _instances(g, args, args.seed))
    if args.jobs > 1:
        import multiprocessing

        pool = multiprocessing.Pool(args.jobs)
        lines = pool.imap(_verify_one, jobs, chunksize=8)
    else:
        pool = None
        lines = map(_verify_one, jobs)
    out = open(args.out, "w") if args.out is not None else sys.stdout
    bad = failed = count = 0
    try:
        for line in lines:
            count += 1
            out.write(line + "\n")
            doc = json.loads(line)
            bad += bool(doc["disagreements"])
            failed += doc["counts"]["NotFound"] + doc["counts"]["Skipped"]
            if args.full and count % 1000 == 0:
                print(f"verified {count} instances", file=sys.stderr)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
        if out is not sys.stdout:
            out.close()
    print(f"instances={count} disagreements={bad} not_found_or_skipped={failed} seed={args.seed}",
          file=sys.stderr)
    if bad:
        return EXIT_DISAGREE
    return EXIT_NO_PATH if failed else EXIT_OK


COMMANDS = {"gen": cmd_gen, "embed": cmd_embed, "weakpairs": cmd_weakpairs, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidLength as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LENGTH
    except NoPathFound as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        sys.stdout.write(json.dumps({"error": str(exc), "instance": exc.instance}) + "\n")
        return EXIT_NO_PATH
    except (ThlnError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
