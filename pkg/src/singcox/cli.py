"""Command line front end.

Every command prints a JSON envelope {"system", "command", "result"} unless
a DOT or plain-text format is requested.  Exit codes: 0 success,
2 verification failure, 3 budget exceeded, 4 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import errors
from .atoms import atomic_braid, atomic_factorize, atomic_factorize_right, parse_atomic, rotation_sequence, switchback
from .chambers import adjacency_dot, chamber_adjacency, chambers
from .coxeter import DEFAULT_CAP, CoxeterSystem, load_system
from .cosets import coset_of, evaluate, parse_expression
from .poset import dihedral_classify, enumerate_core, maximal_element
from .rewrite import DEFAULT_BUDGET, atomic_rex_graph, singular_rex_graph

EXIT_OK, EXIT_VERIFY, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4

INPUT_ERRORS = (
    errors.InvalidMatrix,
    errors.NonFinite,
    errors.NotAGenerator,
    errors.MalformedExpression,
    errors.BarObstruction,
    errors.NotCore,
    errors.BadDescent,
    errors.NotAdmissible,
    errors.WrongCorank,
    errors.BarMismatch,
    errors.MismatchedMiddle,
    OSError,
    json.JSONDecodeError,
)


class VerificationFailed(Exception):
    def __init__(self, result):
        super().__init__("verification failed")
        self.result = result


def _subset(system: CoxeterSystem, text: str | None) -> int:
    if text is None or text.strip() in ("", "{}", "∅", "empty"):
        return 0
    return system.mask(text)


def _subsets_arg(system: CoxeterSystem, text: str | None, size: int | None = None) -> list[int]:
    if text is not None and text.strip() == "all":
        masks = range(1 << system.rank)
        if size is not None:
            masks = [m for m in masks if bin(m).count("1") == size]
        return list(masks)
    return [_subset(system, text)]


def _names(system: CoxeterSystem, mask: int) -> list[str]:
    return system.subset_names(mask)


def _coset_arg(system: CoxeterSystem, args):
    if getattr(args, "expr", None):
        text = args.expr
        try:
            ev = parse_atomic(system, text).evaluate()
        except errors.MalformedExpression:
            ev = evaluate(system, parse_expression(system, text))
        if not ev.reduced:
            raise errors.MalformedExpression("expression is not reduced")
        return ev.coset
    if getattr(args, "maximal", False):
        return maximal_element(system, _subset(system, args.J))
    word = [w for w in (args.word or "").replace("*", ",").split(",") if w.strip()]
    return coset_of(system, _subset(system, args.I), system.element(word), _subset(system, args.J))


# commands


def cmd_build(system: CoxeterSystem, args):
    elems = system.elements
    counts = [0] * (system.longest.length + 1)
    for x in elems:
        counts[x.length] += 1
    return {
        "rank": system.rank,
        "generators": list(system.names),
        "matrix": system.matrix.to_json()["labels"],
        "order": len(elems),
        "positive_roots": system.npos,
        "longest_word": [system.names[s] for s in system.longest.word],
        "length_counts": counts,
        "bar": {system.names[s]: system.names[system.bar(s)] for s in range(system.rank)},
    }


def _local(system, args) -> int:
    return system.full if args.S is None else _subset(system, args.S)


def cmd_switchback(system: CoxeterSystem, args):
    S = _local(system, args)
    s, t = system.gen(args.s), system.gen(args.t)
    u = rotation_sequence(system, S, s, t)
    lhs, rhs = switchback(system, S, s, t)
    el, er = evaluate(system, lhs), evaluate(system, rhs)
    ok = el.reduced and er.reduced and el.coset == er.coset and u[u.d] == t and u[u.d + 1] == system.bar(s, S)
    result = {
        "S": _names(system, S),
        "s": system.names[s],
        "t": system.names[t],
        "d": u.d,
        "rotation_sequence": {str(i): system.names[u[i]] for i in range(-1, u.d + 2)},
        "lhs": lhs.format(system),
        "rhs": rhs.format(system),
        "coset": el.coset.to_json(),
        "verified": ok,
    }
    if not ok:
        raise VerificationFailed(result)
    return result


def cmd_braid(system: CoxeterSystem, args):
    S = _local(system, args)
    s, t = system.gen(args.s), system.gen(args.t)
    lhs, rhs = atomic_braid(system, S, s, t)
    el, er = lhs.evaluate(), rhs.evaluate()
    ok = el.reduced and er.reduced and el.coset == er.coset and el.coset.is_core() and lhs.width == rhs.width
    result = {
        "S": _names(system, S),
        "s": system.names[s],
        "t": system.names[t],
        "d": rotation_sequence(system, S, s, t).d,
        "lhs": lhs.format(),
        "rhs": rhs.format(),
        "lhs_chain": lhs.format_chain(),
        "rhs_chain": rhs.format_chain(),
        "width": lhs.width,
        "coset": el.coset.to_json(),
        "verified": ok,
    }
    if not ok:
        raise VerificationFailed(result)
    return result


def cmd_factorize(system: CoxeterSystem, args):
    p = _coset_arg(system, args)
    s = system.gen(args.s) if args.s else None
    expr = atomic_factorize_right(p, s) if args.right else atomic_factorize(p, s)
    ev = expr.evaluate()
    ok = ev.reduced and ev.coset == p
    result = {
        "coset": p.to_json(),
        "expression": expr.format(),
        "chain": expr.format_chain(),
        "atomic_length": len(expr),
        "verified": ok,
    }
    if not ok:
        raise VerificationFailed(result)
    return result


def cmd_rex_graph(system: CoxeterSystem, args):
    p = _coset_arg(system, args)
    if args.singular:
        start = atomic_factorize(p).singular()
        graph = singular_rex_graph(system, start, budget=args.budget)
    else:
        graph = atomic_rex_graph(p, budget=args.budget)
    if args.emit == "dot":
        return graph.to_dot()
    data = graph.to_json()
    data["vertex_count"] = len(graph)
    data["edge_count"] = len(graph.edges)
    data["connected"] = graph.is_connected()
    return data


def _matsumoto_chunk(payload):
    matrix, cap, J, indices, budget = payload
    system = CoxeterSystem(matrix, cap=cap)
    poset = enumerate_core(system, J)
    out = []
    for i in indices:
        p = poset.elements[i]
        graph = atomic_rex_graph(p, budget=budget)
        widths = {v.width for v in graph.vertices}
        out.append((i, len(graph), graph.is_connected(), sorted(widths)))
    return out


def _verify_one(system: CoxeterSystem, J: int, budget: int, jobs: int):
    poset = enumerate_core(system, J)
    n = len(poset)
    if jobs > 1 and n > 1:
        chunks = [list(range(k, n, jobs)) for k in range(jobs)]
        payloads = [(system.matrix, system.cap, J, c, budget) for c in chunks if c]
        rows = []
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_matsumoto_chunk, payloads):
                rows += part
        rows.sort()
    else:
        rows = []
        for i, p in enumerate(poset.elements):
            graph = atomic_rex_graph(p, budget=budget)
            rows.append((i, len(graph), graph.is_connected(), sorted({v.width for v in graph.vertices})))
    failures = []
    for i, size, connected, widths in rows:
        good = connected and len(widths) == 1 and size == poset.rex_counts[i] and widths[0] == 2 * poset.levels[i]
        if not good:
            failures.append({"element": poset.label(i), "rex_graph": size, "rex_count": poset.rex_counts[i], "widths": widths})
    return {
        "J": _names(system, J),
        "elements": n,
        "passed": n - len(failures),
        "rex_counts": poset.rex_counts,
        "failures": failures,
    }


def cmd_verify_matsumoto(system: CoxeterSystem, args):
    reports = [_verify_one(system, J, args.budget, args.jobs) for J in _subsets_arg(system, args.J)]
    ok = all(not r["failures"] for r in reports)
    result = {"reports": reports, "verified": ok}
    if not ok:
        raise VerificationFailed(result)
    return result


def cmd_core_poset(system: CoxeterSystem, args):
    J = _subset(system, args.J)
    poset = enumerate_core(system, J, side=args.side)
    if args.emit in ("hasse.dot", "dot"):
        return poset.hasse_dot()
    if args.emit == "histogram":
        return {"J": _names(system, J), "size": len(poset), "max_length": poset.max_length, "histogram": poset.histogram}
    data = poset.to_json()
    data["rex_counts_by_length"] = poset.rex_counts_by_length()
    return data


def cmd_tables(system: CoxeterSystem, args):
    rows = []
    for J in _subsets_arg(system, args.J):
        poset = enumerate_core(system, J)
        top = poset.position(poset.maximum)
        rows.append(
            {
                "J": _names(system, J),
                "size": len(poset),
                "max_length": poset.max_length,
                "histogram": poset.histogram,
                "longest_rex_count": poset.rex_counts[top],
                "rex_counts_by_length": poset.rex_counts_by_length(),
            }
        )
    if args.emit == "text":
        lines = []
        for r in rows:
            lines.append(f"J = {{{','.join(r['J'])}}}: {r['size']} elements, max atomic length {r['max_length']}")
            lines.append("  histogram: " + ", ".join(map(str, r["histogram"])))
            lines.append(f"  longest element rex count: {r['longest_rex_count']}")
        return "\n".join(lines) + "\n"
    return {"tables": rows}


def cmd_chambers(system: CoxeterSystem, args):
    I = _subset(system, args.I)
    if args.emit in ("adjacency.dot", "dot"):
        cells, edges = chamber_adjacency(system, I)
        return adjacency_dot(cells, edges)
    cells = chambers(system, I, cross_check=not args.no_check)
    _, edges = chamber_adjacency(system, I)
    return {
        "I": _names(system, I),
        "count": len(cells),
        "chambers": [{"x": [system.names[s] for s in c.x.word], "J": _names(system, c.J)} for c in cells],
        "adjacency": [list(e) for e in edges],
    }


def cmd_dihedral(system: CoxeterSystem, args):
    reports = []
    Js = _subsets_arg(system, args.J, size=system.rank - 2)
    for J in Js:
        dc = dihedral_classify(system, J)
        poset = enumerate_core(system, J)
        multi = [i for i, c in enumerate(poset.rex_counts) if c > 1]
        reports.append(
            {
                "J": _names(system, J),
                "m": dc.m,
                "d": dc.d,
                "core_cosets": len(poset),
                "dihedral_order": 2 * dc.m,
                "reduced_expressions": len(dc.expressions),
                "braid_relation": [dc.braid[0].format(), dc.braid[1].format()],
                "elements_with_several_rexes": len(multi),
                "bijection": {w: c.to_json() for w, c in dc.bijection().items()},
            }
        )
    return {"reports": reports}


COMMANDS = {
    "build": cmd_build,
    "switchback": cmd_switchback,
    "braid": cmd_braid,
    "factorize": cmd_factorize,
    "rex-graph": cmd_rex_graph,
    "verify-matsumoto": cmd_verify_matsumoto,
    "core-poset": cmd_core_poset,
    "tables": cmd_tables,
    "chambers": cmd_chambers,
    "dihedral": cmd_dihedral,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singcox", description="Parabolic double coset combinatorics for finite Coxeter systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", required=True, help="preset name (A3, D4, H4, I2(5), ...) or a JSON matrix file")
    common.add_argument("--order", help="comma separated generator order")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="group element cap")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="rex graph vertex budget")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--output", "-o", help="write result to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    add("build", help="build the group and report its basic data")
    for name in ("switchback", "braid"):
        p = add(name, help=f"verify the {name} relation for (S, s, t)")
        p.add_argument("--s", required=True)
        p.add_argument("--t", required=True)
        p.add_argument("--S", help="local generating set (default: all generators)")
    for name in ("factorize", "rex-graph"):
        p = add(name, help="atomic factorization" if name == "factorize" else "atomic (or singular) rex graph of a core coset")
        p.add_argument("--I", help="left subset")
        p.add_argument("--J", help="right subset")
        p.add_argument("--word", help="word for an element of the coset (comma or * separated)")
        p.add_argument("--expr", help="a reduced expression of the coset instead of I, word, J")
        p.add_argument("--maximal", action="store_true", help="use the maximal core coset for --J")
        if name == "factorize":
            p.add_argument("--s", help="first (or, with --right, last) generator")
            p.add_argument("--right", action="store_true")
        else:
            p.add_argument("--singular", action="store_true", help="singular rex graph instead of atomic")
            p.add_argument("--emit", choices=["json", "dot"], default="json")
    p = add("verify-matsumoto", help="check braid-connectivity of every core coset for J")
    p.add_argument("--J", required=True, help="subset, or 'all'")
    p = add("core-poset", help="core cosets with right set J")
    p.add_argument("--J", required=True)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--emit", choices=["json", "histogram", "hasse.dot"], default="json")
    p = add("tables", help="atomic length histogram and rex counts")
    p.add_argument("--J", required=True, help="subset, or 'all'")
    p.add_argument("--emit", choices=["json", "text"], default="json")
    p = add("chambers", help="I-chambers and their adjacency")
    p.add_argument("--I", required=True)
    p.add_argument("--emit", choices=["json", "adjacency.dot"], default="json")
    p.add_argument("--no-check", action="store_true", help="skip the brute force cross-check")
    p = add("dihedral", help="corank-2 dihedral classification")
    p.add_argument("--J", required=True, help="subset with two generators missing, or 'all'")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget <= 0 or args.cap <= 0 or args.jobs <= 0:
        print("budgets, cap and jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK
    try:
        order = args.order.split(",") if args.order else None
        system = load_system(args.type, order=order, cap=args.cap)
        result = COMMANDS[args.command](system, args)
    except VerificationFailed as exc:
        result = exc.result
        code = EXIT_VERIFY
    except errors.Budget as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except INPUT_ERRORS as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(result, str):
        _emit(result, args.output)
    else:
        envelope = {"system": {"type": args.type, "generators": list(system.names)}, "command": args.command, "result": result}
        _emit(json.dumps(envelope, indent=2) + "\n", args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
