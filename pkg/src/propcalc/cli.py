"""Command line front door.

Every subcommand reads and writes JSON: results on standard output,
diagnostics on standard error.  Exit codes: 0 success, 1 domain error
(invalid graph, cap exceeded, bad value), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import fixtures
from .canonical import canonicalize, enumerate_graphs, graph_hash
from .freeprop import (FREE_OPS, PropElement, Signature, corolla,
                       count_basis, element_from_dict, element_to_dict,
                       expand, extend_morphism, partial_from_dict,
                       pelem_hcompose, pelem_vcompose, signature_from_dict)
from .graphs import (FormatError, GraphError, LimitError, graph_from_dict,
                     graph_to_dict, hcompose, validate, vcompose)
from .pushouts import (CubeDiagram, FiniteSetMap, filtration_square_check,
                       inclusion_map, iterated_identity_check,
                       presentation_matches_pushout, punctured_colimit)
from .rewrite import (collapse, expand_all, mixed_from_dict, mixed_to_dict,
                      non_confluence_witness, remark_mixed)
from .tensor import (TensorOps, algebra_from_dict, evaluate,
                     matrix_from_json, morphism_prop_membership)


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise FormatError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise FormatError(f"{path} is not JSON: {err}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _classify(d: dict) -> tuple[str, object]:
    """Build the richest object a JSON dict supports: a mixed graph, a
    fully labeled element, a partial labeling, or a bare graph."""
    if "atoms" in d or "msig" in d:
        return "mixed", mixed_from_dict(d)
    graph, extras = graph_from_dict(d)
    kinds = {key for ex in extras.values() for key in ex}
    if graph.vertices and all("label" in extras.get(v.id, {})
                              for v in graph.vertices):
        return "element", element_from_dict(d)
    if "slot" in kinds:
        return "partial", partial_from_dict(d)
    return "graph", graph


def _walk_graph_dicts(d: object, path: str):
    """Yield (path, dict) for every nested dict carrying vertices."""
    if not isinstance(d, dict):
        return
    if "vertices" in d:
        yield path, d
        return
    for key, val in d.items():
        yield from _walk_graph_dicts(val, f"{path}.{key}" if path else key)


def _cmd_validate(args) -> int:
    d = _read_json(args.file)
    found = list(_walk_graph_dicts(d, ""))
    if not found:
        raise FormatError("no graph objects in the file")
    checked = []
    bad = []
    for path, sub in found:
        kind = None
        try:
            kind, obj = _classify(sub)
            if kind == "graph":
                violations = validate(obj)
                if violations:
                    bad.append({"path": path, "violations": violations})
        except GraphError as err:
            bad.append({"path": path, "violations": [{"detail": str(err)}]})
        checked.append({"path": path or "(top)", "kind": kind})
    _emit({"valid": not bad, "checked": checked, "errors": bad})
    if bad:
        print("validation failed", file=sys.stderr)
        return 1
    return 0


def _load_composable(path: str):
    kind, obj = _classify(_read_json(path))
    if kind in ("element", "graph"):
        return kind, obj
    raise GraphError(f"{path}: cannot compose a {kind} object")


def _cmd_compose(args) -> int:
    kind_a, a = _load_composable(args.left)
    kind_b, b = _load_composable(args.right)
    if kind_a != kind_b:
        raise GraphError("cannot mix labeled and unlabeled operands")
    if kind_a == "element":
        out = pelem_hcompose(a, b) if args.op == "h" else pelem_vcompose(a, b)
        _emit(element_to_dict(out))
    else:
        out = hcompose(a, b) if args.op == "h" else vcompose(a, b)
        _emit(graph_to_dict(out))
    return 0


def _labels_of(d: dict):
    graph, extras = graph_from_dict(d)
    labels = {v.id: extras[v.id]["label"] for v in graph.vertices
              if "label" in extras.get(v.id, {})}
    return graph, (labels if len(labels) == len(graph.vertices) and labels
                   else None)


def _cmd_canon(args) -> int:
    graph, labels = _labels_of(_read_json(args.file))
    cf = canonicalize(graph, labels)
    _emit({
        "order": list(cf.order),
        "hash": graph_hash(graph, labels),
        "graph": graph_to_dict(cf.graph, labels=cf.labels),
    })
    return 0


def _cmd_iso(args) -> int:
    g, lg = _labels_of(_read_json(args.left))
    h, lh = _labels_of(_read_json(args.right))
    same = canonicalize(g, lg).key == canonicalize(h, lh).key
    _emit({"isomorphic": same})
    return 0


def _parse_arities(text: str) -> list[tuple[int, int]]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 2:
            raise FormatError(f"arity {chunk!r} is not of the form a:b")
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"arity {chunk!r} is not numeric") from None
    return out


def _cmd_enum(args) -> int:
    arities = _parse_arities(args.arities)
    count = 0
    for ng in enumerate_graphs(arities, args.m, args.n,
                               upto_iso=args.upto_iso):
        print(json.dumps(graph_to_dict(ng.graph), separators=(",", ":")))
        count += 1
    print(f"{count} graphs", file=sys.stderr)
    return 0


def _cmd_count(args) -> int:
    sig = signature_from_dict(_read_json(args.sig))
    _emit(count_basis(sig, args.m, args.n, args.max_r))
    return 0


def _cmd_expand(args) -> int:
    d = _read_json(args.file)
    if not isinstance(d, dict) or "outer" not in d or "inner" not in d:
        raise FormatError("expected {\"outer\": graph, \"inner\": {id: element}}")
    sig = signature_from_dict(d["sig"]) if "sig" in d else None
    outer, _ = graph_from_dict(d["outer"])
    inner = {}
    for key, sub in d["inner"].items():
        try:
            vid = int(key)
        except ValueError:
            raise FormatError(f"inner key {key!r} is not a vertex id") from None
        inner[vid] = element_from_dict(sub, sig)
    _emit(element_to_dict(expand(outer, inner)))
    return 0


def _cmd_map(args) -> int:
    spec = _read_json(args.assignment)
    if not isinstance(spec, dict) or "sig" not in spec or "assign" not in spec:
        raise FormatError("expected {\"sig\": ..., \"assign\": {name: element}}")
    sig = signature_from_dict(spec["sig"])
    assign = {name: element_from_dict(sub)
              for name, sub in spec["assign"].items()}
    phi = extend_morphism(sig, assign, FREE_OPS)
    elem = element_from_dict(_read_json(args.file), sig)
    _emit(element_to_dict(phi(elem)))
    return 0


def _cmd_eval(args) -> int:
    alg = algebra_from_dict(_read_json(args.algebra))
    elem = element_from_dict(_read_json(args.file))
    t = evaluate(elem, alg)
    _emit({"m": elem.m, "n": elem.n, "dim": alg.dim,
           "shape": list(t.shape), "rows": t.rows()})
    return 0


def _load_matrix(path: str):
    d = _read_json(path)
    if isinstance(d, dict) and "matrix" in d:
        d = d["matrix"]
    return matrix_from_json(d)


def _cmd_check_morphism(args) -> int:
    f = _load_matrix(args.f)
    phi_a = algebra_from_dict(_read_json(args.phiA))
    phi_b = algebra_from_dict(_read_json(args.phiB))
    if args.names:
        names = [x for x in args.names.split(",") if x]
    else:
        names = sorted(set(phi_a.matrices) & set(phi_b.matrices))
    verdict = {name: morphism_prop_membership(f, phi_a, phi_b, name)
               for name in names}
    _emit({"generators": verdict, "all": all(verdict.values())})
    return 0


def _cmd_collapse(args) -> int:
    g = mixed_from_dict(_read_json(args.file))
    if args.strategy == "greedy":
        _emit(mixed_to_dict(collapse(g, "greedy")))
    else:
        forms = collapse(g, "exhaustive", max_states=args.max_states)
        _emit({"count": len(forms), "forms": [mixed_to_dict(f) for f in forms]})
    return 0


def _cmd_witness(args) -> int:
    found = non_confluence_witness(max_vertices=args.max_vertices,
                                   max_p=args.max_p)
    if found is None:
        _emit({"found": False})
    else:
        _emit({
            "found": True,
            "graph": mixed_to_dict(found["graph"]),
            "forms": [mixed_to_dict(f) for f in found["forms"]],
            "sequences": [[list(pair) for pair in seq]
                          for seq in found["sequences"]],
        })
    return 0


def _tokens(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _cmd_cube(args) -> int:
    k_set, l_set = _tokens(args.K), _tokens(args.L)
    i = inclusion_map(k_set, l_set)
    pc = punctured_colimit(CubeDiagram(args.n, i))
    formula = len(l_set) ** args.n - (len(l_set) - len(k_set)) ** args.n
    out = {
        "n": args.n,
        "K": sorted(k_set),
        "L": sorted(l_set),
        "size": pc.size,
        "terminal": len(l_set) ** args.n,
        "lam_injective": pc.lam_injective(),
        "image_size": len(pc.image()),
        "union_formula": formula,
        "union_formula_ok": pc.size == formula,
    }
    if args.n >= 2:
        out["decomposition_ok"] = iterated_identity_check(i, args.n)
    _emit(out)
    return 0


def _cmd_filtration_check(args) -> int:
    sig_k = signature_from_dict(_read_json(args.sigK))
    sig_l = signature_from_dict(_read_json(args.sigL))
    base = signature_from_dict(_read_json(args.base))
    report = filtration_square_check(
        sig_k, sig_l, base, args.m, args.n,
        max_degree=args.max_degree, max_vertices=args.max_vertices,
        max_arity=args.max_arity,
        slot_arities=() if args.no_slots else None)
    _emit(report)
    return 0 if report["all_ok"] else 1


# ---------------------------------------------------------------------------
# self test

def _fixture_dict(name: str) -> dict:
    return fixtures.fixture_dicts()[name]


def _check_fixtures_validate() -> None:
    for name, d in fixtures.fixture_dicts().items():
        for path, sub in _walk_graph_dicts(d, name):
            kind, obj = _classify(sub)
            if kind == "graph":
                violations = validate(obj)
                assert not violations, f"{path}: {violations}"


def _check_canonical_order() -> None:
    graph, _ = graph_from_dict(_fixture_dict("fig7"))
    assert list(canonicalize(graph).order) == [1, 4, 2, 5, 3]


def _check_figure_composites() -> None:
    for name, op in (("fig2h", hcompose), ("fig2v", vcompose)):
        d = _fixture_dict(name)
        parts = {key: graph_from_dict(d[key])[0]
                 for key in d if isinstance(d[key], dict)}
        left, right = ("left", "right") if name == "fig2h" else \
                      ("top", "bottom")
        got = op(parts[left], parts[right])
        assert canonicalize(got).key == canonicalize(parts["result"]).key


def _check_expansion_figure() -> None:
    d = _fixture_dict("fig4")
    sig = signature_from_dict(d["sig"])
    outer, _ = graph_from_dict(d["outer"])
    inner = {int(k): element_from_dict(v, sig) for k, v in d["inner"].items()}
    flat = element_from_dict(d["flat"], sig)
    assert expand(outer, inner) == flat


def _random_element(rng: random.Random, sig: Signature,
                    m: int | None = None) -> PropElement:
    from .freeprop import identity_element
    for _ in range(20):
        names = [rng.choice(sig.names) for _ in range(rng.randint(1, 2))]
        arities = [sig.arity(x) for x in names]
        delta = sum(a for a, _ in arities) - sum(b for _, b in arities)
        m_range = range(0, 4) if m is None else (m,)
        for mm in m_range:
            n = mm - delta
            if not 0 <= n <= 3:
                continue
            graphs = list(enumerate_graphs(arities, mm, n))
            if graphs:
                ng = rng.choice(graphs)
                labels = {i: names[i - 1] for i in range(1, len(names) + 1)}
                return PropElement.build(ng.graph, labels, sig)
    return corolla(sig, sig.names[0]) if m is None else identity_element(m)


def _check_interchange() -> None:
    sig = Signature([("a", 1, 1), ("b", 2, 1), ("c", 1, 2)])
    rng = random.Random(5)
    for _ in range(5):
        a, b = _random_element(rng, sig), _random_element(rng, sig)
        c, d = _random_element(rng, sig, a.n), _random_element(rng, sig, b.n)
        left = pelem_vcompose(pelem_hcompose(a, b), pelem_hcompose(c, d))
        right = pelem_hcompose(pelem_vcompose(a, c), pelem_vcompose(b, d))
        assert left == right


def _check_rewrite_remark() -> None:
    g = remark_mixed(fixtures.remark_witness())
    forms = collapse(g, "exhaustive")
    assert len(forms) == 2
    expanded = {expand_all(f) for f in forms}
    assert len(expanded) == 1 and expand_all(g) in expanded


def _check_tensor_routes() -> None:
    sig = Signature([("a", 1, 1), ("b", 2, 1)])
    alg = algebra_from_dict({
        "dim": 2,
        "matrices": {"a": [["1", "2"], ["0", "1"]],
                     "b": [["1", "0", "0", "1"], ["0", "1", "1", "0"]]},
    }, sig)
    rng = random.Random(7)
    ops = TensorOps(2)
    phi = extend_morphism(sig, ops.of_assignment(alg, sig), ops)
    for _ in range(4):
        e = _random_element(rng, sig)
        assert evaluate(e, alg) == phi(e).tensor


def _check_cube_formula() -> None:
    pool = ["x", "y", "z"]
    for l_size in range(1, 4):
        for k_size in range(l_size + 1):
            i = inclusion_map(pool[:k_size], pool[:l_size])
            for n in range(1, 4):
                pc = punctured_colimit(CubeDiagram(n, i))
                assert pc.size == l_size ** n - (l_size - k_size) ** n
                if n >= 2:
                    assert iterated_identity_check(i, n)


def _check_pushout_presentation() -> None:
    rng = random.Random(9)
    for _ in range(10):
        src = [f"s{i}" for i in range(rng.randint(0, 4))]
        a_pool = [f"a{i}" for i in range(rng.randint(1, 4))]
        t_pool = [f"t{i}" for i in range(rng.randint(1, 4))]
        u = FiniteSetMap.build(src, a_pool,
                               {x: rng.choice(a_pool) for x in src})
        s = FiniteSetMap.build(src, t_pool,
                               {x: rng.choice(t_pool) for x in src})
        assert presentation_matches_pushout(u, s)


def _check_filtration_chains() -> None:
    report = filtration_square_check(
        Signature([]), Signature([("l", 1, 1)]), Signature([("o", 1, 1)]),
        1, 1, max_degree=2, max_vertices=3, slot_arities=())
    assert report["all_ok"]


_SELFTEST = [
    ("fixtures-validate", _check_fixtures_validate),
    ("canonical-order", _check_canonical_order),
    ("figure-composites", _check_figure_composites),
    ("expansion-figure", _check_expansion_figure),
    ("interchange", _check_interchange),
    ("rewrite-remark", _check_rewrite_remark),
    ("tensor-routes", _check_tensor_routes),
    ("cube-formula", _check_cube_formula),
    ("pushout-presentation", _check_pushout_presentation),
    ("filtration-chains", _check_filtration_chains),
]


def _cmd_selftest(args) -> int:
    passed, failed = [], []
    for name, fn in _SELFTEST:
        try:
            fn()
            passed.append(name)
        except Exception as err:  # noqa: BLE001 - report, do not crash
            failed.append({"check": name, "error": str(err)})
    _emit({"passed": passed, "failed": failed})
    if failed:
        print(f"{len(failed)} selftest checks failed", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propcalc",
        description="Exact calculator for props presented by port graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph JSON file")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("compose", help="compose two graphs or elements")
    p.add_argument("--op", choices=("h", "v"), required=True,
                   help="h: side by side; v: left grafted onto right")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=_cmd_compose)

    p = sub.add_parser("canon", help="canonical order, hash, renamed graph")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_canon)

    p = sub.add_parser("iso", help="isomorphism test for two files")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=_cmd_iso)

    p = sub.add_parser("enum", help="enumerate graphs as JSON lines")
    p.add_argument("--arities", default="",
                   help="comma list of a:b vertex arities")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upto-iso", action="store_true")
    p.set_defaults(fn=_cmd_enum)

    p = sub.add_parser("count", help="basis counts per vertex count")
    p.add_argument("--sig", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-r", type=int, required=True)
    p.set_defaults(fn=_cmd_count)

    p = sub.add_parser("expand", help="substitute inner elements into a graph")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("map", help="apply a generator assignment to an element")
    p.add_argument("file")
    p.add_argument("--assignment", required=True)
    p.set_defaults(fn=_cmd_map)

    p = sub.add_parser("eval", help="contract an element against an algebra")
    p.add_argument("file")
    p.add_argument("--algebra", required=True)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("check-morphism",
                       help="does a matrix intertwine two algebras?")
    p.add_argument("--f", required=True)
    p.add_argument("--phiA", required=True)
    p.add_argument("--phiB", required=True)
    p.add_argument("--names", default="")
    p.set_defaults(fn=_cmd_check_morphism)

    p = sub.add_parser("collapse", help="merge a mixed graph to normal form")
    p.add_argument("file")
    p.add_argument("--strategy", choices=("greedy", "exhaustive"),
                   default="greedy")
    p.add_argument("--max-states", type=int, default=20000)
    p.set_defaults(fn=_cmd_collapse)

    p = sub.add_parser("witness", help="search for a non-confluent mixed graph")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--max-p", type=int, default=None)
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("cube", help="punctured cube colimit over token sets")
    p.add_argument("--K", default="", help="comma list of tokens")
    p.add_argument("--L", required=True, help="comma list of tokens")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_cube)

    p = sub.add_parser("filtration-check",
                       help="audit the degree filtration squares")
    p.add_argument("--sigK", required=True)
    p.add_argument("--sigL", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--no-slots", action="store_true",
                   help="restrict to fully labeled classes")
    p.set_defaults(fn=_cmd_filtration_check)

    p = sub.add_parser("selftest", help="run the built-in property checks")
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (GraphError, LimitError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
