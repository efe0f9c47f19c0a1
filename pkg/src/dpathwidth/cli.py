"""Batch command-line front end.

Exit codes: 0 success, 2 usage or unsupported input, 3 size cap exceeded,
4 a checked inequality or structural property failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

from . import __version__, _config
from .cnf import Cnf, cnf_from_json, count_models_bruteforce, from_dimacs, primal_graph, psi_of_graph, split_by_cover, to_dimacs
from .cover import d_cover_search, even_odd_split, heuristic_tree_partition
from .decomposition import PathDecomposition, decomposition_from_json, decomposition_to_json, validate
from .errors import DPathwidthError, PreconditionError, PropertyViolation, SizeError
from .exact import exact_pathwidth, exact_treewidth, heuristic_path_decomposition
from .graph import Graph, complete_graph, generate, graph_from_json, graph_to_json, parse_edge_list, star_graph, to_dot, to_edge_list
from .nbp import (Nbp, build_kn_smnbp, build_star_mnbp, carried_assignments, is_monotone, nbp_from_json, nbp_to_json,
                  noyard_program, read_bound, represents, separability_number, source_sink_paths, subdivide,
                  yardsticks_for_path, zxy_program)
from .obdd import compile_cnf, conjunction_represents, count_models, obdd_to_json, size_bound

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_SIZE, EXIT_PROPERTY = 0, 2, 3, 4

_CAP_ENV = {
    "exact_cap": "DPW_EXACT_CAP",
    "cover_cap": "DPW_COVER_EDGE_CAP",
    "enum_cap": "DPW_ENUM_CAP",
    "path_cap": "DPW_PATH_CAP",
}


# --------------------------------------------------------------------------
# I/O helpers

def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_output(text: str, out: str | None) -> None:
    """Write to ``out`` atomically, or to stdout when ``out`` is None or '-'."""
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.exists() and not path.is_file():
        # devices and pipes cannot be replaced atomically
        with open(path, "w") as fh:
            fh.write(text)
        return
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc


def read_graph(path: str) -> Graph:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    return parse_edge_list(text)


def read_cnf(path: str) -> Cnf:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return cnf_from_json(json.loads(text))
    return from_dimacs(text)


def read_nbp(path: str) -> Nbp:
    data = json.loads(_read(path))
    # accept the report written by `nbp` as well as a bare program
    if isinstance(data, dict) and isinstance(data.get("program"), dict):
        data = data["program"]
    return nbp_from_json(data)


@contextmanager
def _caps(args):
    saved = {}
    for attr, env in _CAP_ENV.items():
        value = getattr(args, attr, None)
        if value is not None:
            if value <= 0:
                raise PreconditionError(f"--{attr.replace('_', '-')} must be positive")
            saved[env] = os.environ.get(env)
            os.environ[env] = str(value)
    try:
        yield
    finally:
        for env, old in saved.items():
            if old is None:
                os.environ.pop(env, None)
            else:
                os.environ[env] = old


def _checked(dec, g: Graph, what: str):
    problems = validate(dec, g)
    if problems:
        raise PropertyViolation(f"{what} failed validation: {problems[0]}")
    return dec


# --------------------------------------------------------------------------
# commands

def cmd_gen(args) -> str:
    kwargs = {"keep": args.keep} if args.kind == "random_partial_ktree" and args.keep is not None else {}
    g = generate(args.kind, *args.params, seed=args.seed, **kwargs)
    if args.format == "json":
        text = dumps({"schema_version": SCHEMA_VERSION, **graph_to_json(g)})
    elif args.format == "dot":
        text = to_dot(g)
    else:
        text = to_edge_list(g)
    if args.psi is not None:
        dimacs = to_dimacs(psi_of_graph(g))
        if args.psi == "-":
            if args.out in (None, "-"):
                text += dimacs
            else:
                sys.stdout.write(dimacs)
        else:
            write_output(dimacs, args.psi)
    return text


def _path_decomposition(g: Graph, exact: bool) -> tuple[PathDecomposition, bool]:
    if exact or g.num_vertices() <= _config.exact_vertex_cap():
        return exact_pathwidth(g)[1], True
    return heuristic_path_decomposition(g), False


def cmd_decompose(args) -> str:
    g = read_graph(args.graph)
    extra = {}
    if args.tw:
        dec = exact_treewidth(g)[1]
        extra["exact"] = True
    elif args.pw:
        dec, exact = _path_decomposition(g, args.exact)
        extra["exact"] = exact
    elif args.tpw:
        dec = heuristic_tree_partition(g)
        extra["exact"] = False
    elif args.cover is not None:
        dec = d_cover_search(g, args.cover, "exact" if args.exact else "heuristic")
        extra["exact"] = bool(args.exact)
    else:
        dec = even_odd_split(heuristic_tree_partition(g), g)
        extra["tree_partition_width"] = heuristic_tree_partition(g).width
    _checked(dec, g, "decomposition")
    out = decomposition_to_json(dec)
    out.update(extra)
    out["validated"] = True
    return dumps(out)


def _obdd_stats(z, f: Cnf, width: int) -> dict:
    n = len(z.order)
    bound = size_bound(width, n)
    stats = {"nodes": z.size(), "variables": n, "width": width, "bound": bound, "within_bound": z.size() <= bound}
    if not stats["within_bound"]:
        raise PropertyViolation(f"OBDD has {z.size()} nodes, above the bound {bound}")
    return stats


def cmd_compile(args) -> str:
    f = read_cnf(args.cnf)
    primal = primal_graph(f)
    enum_ok = len(f.variables) <= _config.enum_var_cap()
    if args.two:
        tp = heuristic_tree_partition(primal)
        cover = _checked(even_odd_split(tp, primal), primal, "cover")
        parts = split_by_cover(f, cover)
        diagrams, stats = [], []
        for part, (_, pd) in zip(parts, cover.parts):
            z = compile_cnf(part, pd)
            diagrams.append(z)
            stats.append(_obdd_stats(z, part, pd.restrict(part.variables).width))
        result = {
            "schema_version": SCHEMA_VERSION,
            "mode": "two",
            "tree_partition_width": tp.width,
            "cover_widths": cover.widths(),
            "obdds": [obdd_to_json(z) for z in diagrams],
            "stats": stats,
        }
        if enum_ok:
            ok = conjunction_represents(diagrams, f)
            if not ok:
                raise PropertyViolation("conjunction of the two OBDDs does not represent the CNF")
            result["represents"] = True
        return dumps(result)

    if args.pd:
        pd = decomposition_from_json(json.loads(_read(args.pd)))
        if not isinstance(pd, PathDecomposition):
            raise PreconditionError("--pd needs a path decomposition")
        exact = False
    else:
        pd, exact = _path_decomposition(primal, False)
    z = compile_cnf(f, pd)
    width = pd.restrict(f.variables).width
    result = {
        "schema_version": SCHEMA_VERSION,
        "mode": "single",
        "exact_decomposition": exact,
        "obdd": obdd_to_json(z),
        "stats": _obdd_stats(z, f, width),
        "models": count_models(z),
    }
    if enum_ok:
        if count_models_bruteforce(f) != result["models"] or not conjunction_represents([z], f):
            raise PropertyViolation("OBDD does not represent the CNF")
        result["represents"] = True
    return dumps(result)


def _built_program(build: list[str]) -> tuple[Nbp, Graph | None]:
    kind = build[0]
    try:
        if kind == "kn":
            n = int(build[1])
            return build_kn_smnbp(n), complete_graph(n)
        if kind == "star":
            g = star_graph(int(build[1]))
            return build_star_mnbp(g), g
    except (IndexError, ValueError) as exc:
        raise PreconditionError(f"--build {kind} needs an integer size") from exc
    if kind == "noyard":
        return noyard_program(), None
    if kind == "zxy":
        return zxy_program(), None
    raise PreconditionError(f"unknown program kind {kind!r}")


def cmd_nbp(args) -> str:
    if (args.program is None) == (args.build is None):
        raise PreconditionError("give exactly one of a program file or --build")
    graph = None
    if args.build:
        z, graph = _built_program(args.build)
    else:
        z = read_nbp(args.program)
    report: dict = {"schema_version": SCHEMA_VERSION, "nodes": len(z.nodes), "edges": z.num_edges()}
    if args.subdivide:
        sub = subdivide(z)
        report["subdivided_edges"] = sub.num_edges()
        if len(z.variables()) <= _config.enum_var_cap():
            same = carried_assignments(z) == carried_assignments(sub, z.variables())
            if not same or sub.num_edges() != 3 * z.num_edges():
                raise PropertyViolation("subdivision changed the program's function or size")
            report["same_models"] = True
        z = sub
    if args.build or args.subdivide:
        report["program"] = nbp_to_json(z)
    checks = set(args.check or [])
    if args.all_checks:
        checks |= {"monotone", "read-bound", "separability", "yardsticks"}
    if "monotone" in checks:
        report["monotone"] = is_monotone(z)
    if "read-bound" in checks:
        report["read_bound"] = read_bound(z)
    if "separability" in checks or "yardsticks" in checks:
        report["separability"] = separability_number(z)
    if "yardsticks" in checks:
        d = report["separability"]
        missing = sum(1 for p in source_sink_paths(z) if yardsticks_for_path(z, p, d) is None)
        report["paths_without_yardsticks"] = missing
        report["yardsticks"] = missing == 0
    if args.represents:
        if args.represents == "psi":
            if graph is None:
                raise PreconditionError("--represents psi needs a --build kn/star program")
            f = psi_of_graph(graph)
        else:
            f = read_cnf(args.represents)
        report["represents"] = represents(z, f)
    return dumps(report)


def cmd_certify(args) -> str:
    from .lowerbound import certify_lower_bound

    f = read_cnf(args.cnf)
    z = read_nbp(args.program)
    cert = certify_lower_bound(f, z, args.d)
    return dumps(cert.to_json())


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dpathwidth", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--exact-cap", type=int, help="vertex cap for exact width solvers")
    caps.add_argument("--cover-cap", type=int, help="edge cap for exact cover search")
    caps.add_argument("--enum-cap", type=int, help="variable cap for brute-force enumeration")
    caps.add_argument("--path-cap", type=int, help="cap on enumerated program paths")
    caps.add_argument("-o", "--out", help="output file (default: stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[caps], help="generate a graph")
    g.add_argument("kind", choices=["path", "cycle", "grid", "complete", "star", "random_tree", "random_partial_ktree"])
    g.add_argument("params", type=int, nargs="*")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--keep", type=float, help="edge keep probability for random_partial_ktree")
    g.add_argument("--format", choices=["edgelist", "json", "dot"], default="edgelist")
    g.add_argument("--psi", nargs="?", const="-", help="also write the padded CNF as DIMACS (to PATH or stdout)")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("decompose", parents=[caps], help="width decompositions of a graph")
    d.add_argument("graph")
    which = d.add_mutually_exclusive_group(required=True)
    which.add_argument("--tw", action="store_true")
    which.add_argument("--pw", action="store_true")
    which.add_argument("--tpw", action="store_true")
    which.add_argument("--cover", type=int, metavar="D")
    which.add_argument("--even-odd", action="store_true")
    d.add_argument("--exact", action="store_true")
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("compile", parents=[caps], help="compile a CNF to OBDDs")
    c.add_argument("cnf")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--pd", help="path decomposition JSON of the primal graph")
    src.add_argument("--auto", action="store_true", help="compute a path decomposition (default)")
    c.add_argument("--two", action="store_true", help="split by a 2-cover and compile two OBDDs")
    c.set_defaults(func=cmd_compile)

    n = sub.add_parser("nbp", parents=[caps], help="build or inspect a branching program")
    n.add_argument("program", nargs="?")
    n.add_argument("--build", nargs="+", metavar="KIND", help="kn N | star N | noyard | zxy")
    n.add_argument("--check", action="append", choices=["monotone", "read-bound", "separability", "yardsticks"])
    n.add_argument("--all-checks", action="store_true")
    n.add_argument("--subdivide", action="store_true")
    n.add_argument("--represents", metavar="CNF", help="CNF file, or 'psi' for a built program's graph")
    n.set_defaults(func=cmd_nbp)

    t = sub.add_parser("certify", parents=[caps], help="counting certificate for a monotone program")
    t.add_argument("cnf")
    t.add_argument("program")
    t.add_argument("d", type=int)
    t.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _caps(args):
            text = args.func(args)
        write_output(text, args.out)
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (DPathwidthError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
