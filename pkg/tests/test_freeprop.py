"""Free elements: substitution, universal property, counting, filtration."""

from __future__ import annotations

import itertools
import json
import random

import pytest

from propcalc import fixtures
from propcalc.canonical import enumerate_graphs
from propcalc.freeprop import (FREE_OPS, Generator, PartialLabeledGraph,
                               PropElement, Signature, combine_signatures,
                               corolla, count_basis, element_from_dict,
                               element_to_dict, expand, expand_element,
                               extend_morphism, filter_upto,
                               filtration_degree, identity_element,
                               partial_from_dict, partial_to_dict,
                               pelem_hcompose, pelem_permute_inputs,
                               pelem_permute_outputs, pelem_vcompose,
                               signature_from_dict, signature_to_dict)
from propcalc.graphs import (FormatError, GraphError, to_json_text,
                             vertex_successors)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def random_element(rng: random.Random, sig: Signature, m: int, n: int,
                   max_r: int = 3) -> PropElement:
    names = list(sig.names)
    for _ in range(60):
        r = rng.randint(0, max_r)
        profile = [rng.choice(names) for _ in range(r)]
        arities = [sig.arity(x) for x in profile]
        graphs = list(enumerate_graphs(arities, m, n))
        if graphs:
            ng = rng.choice(graphs)
            labels = {i: profile[i - 1] for i in range(1, r + 1)}
            return PropElement.build(ng.graph, labels, sig)
    raise AssertionError(f"no element found for ({m},{n}) over {sig}")


def topo_latest_first(graph):
    """A topological order preferring the largest ready vertex id; used to
    confirm evaluation does not depend on the order choice."""
    succ = vertex_successors(graph)
    indeg = {v: 0 for v in succ}
    for u in succ:
        for w in succ[u]:
            indeg[w] += 1
    ready = sorted((v for v in indeg if indeg[v] == 0), reverse=True)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for w in succ[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort(reverse=True)
    return order


BASE_SIG = Signature([("a", 1, 1), ("b", 2, 1), ("c", 1, 2)])
FIG2_SIG = Signature([("p", 1, 2), ("q", 1, 1), ("r", 3, 1),
                      ("s", 1, 2), ("t", 2, 2)])


def fig4_parts():
    f4 = fixtures.fig4()
    sig = Signature([(name, a[0], a[1]) for name, a in f4["sig"].items()])
    inner1 = PropElement.build(f4["inner"][1], f4["inner_labels"][1], sig)
    inner2 = PropElement.build(f4["inner"][2], f4["inner_labels"][2], sig)
    flat = PropElement.build(f4["flat"], f4["flat_labels"], sig)
    return f4, sig, inner1, inner2, flat


# ---------------------------------------------------------------------------
# signatures

def test_signature_basics():
    sig = Signature([("p", 2, 1), Generator("q", 0, 3)])
    assert sig.arity("p") == (2, 1)
    assert "q" in sig and "z" not in sig
    assert len(sig) == 2
    assert not sig.nonempty_inputs()
    assert sig.restrict(["p"]).names == ("p",)
    with pytest.raises(GraphError):
        Signature([("p", 1, 1), ("p", 2, 2)])
    with pytest.raises(GraphError):
        Signature([("p", -1, 0)])
    with pytest.raises(GraphError):
        sig.arity("nope")


def test_combine_signatures_requires_disjoint_names():
    a = Signature([("p", 1, 1)])
    b = Signature([("q", 2, 1)])
    assert combine_signatures(a, b).names == ("p", "q")
    with pytest.raises(GraphError):
        combine_signatures(a, Signature([("p", 1, 2)]))


def test_signature_json_round_trip():
    sig = FIG2_SIG
    d = json.loads(to_json_text(signature_to_dict(sig)))
    assert signature_from_dict(d) == sig
    for bad in [{}, {"generators": {}}, {"generators": [{"name": "x"}]},
                {"generators": [{"name": "x", "m": "1", "n": 2}]},
                {"generators": [{"name": "x", "m": 1, "n": 1},
                                {"name": "x", "m": 2, "n": 2}]}]:
        with pytest.raises(FormatError):
            signature_from_dict(bad)


# ---------------------------------------------------------------------------
# elements and their compositions

def test_corolla_shape():
    e = corolla(Signature([("g", 2, 1)]), "g")
    assert (e.m, e.n) == (2, 1)
    assert len(e.graph.vertices) == 1
    assert e.labels == {1: "g"}
    with pytest.raises(GraphError):
        corolla(BASE_SIG, "nope")


def test_element_equality_ignores_vertex_ids():
    rng = random.Random(7)
    for _ in range(10):
        e = random_element(rng, BASE_SIG, 1, 1)
        shuffled_ids = list(e.graph.vertex_ids)
        rng.shuffle(shuffled_ids)
        mapping = dict(zip(e.graph.vertex_ids, shuffled_ids))
        from propcalc.graphs import relabel_vertices
        moved = PropElement.build(
            relabel_vertices(e.graph, mapping),
            {mapping[v]: lab for v, lab in e.labels.items()})
        assert moved == e
        assert hash(moved) == hash(e)


def test_element_build_validates():
    g = corolla(BASE_SIG, "b").graph
    with pytest.raises(GraphError):
        PropElement.build(g, {})
    with pytest.raises(GraphError):
        PropElement.build(g, {1: "a"}, BASE_SIG)


def test_vertical_composite_figure_with_labels():
    parts = fixtures.fig2v()
    top = PropElement.build(parts["top"], {1: "s", 2: "t"}, FIG2_SIG)
    bottom = PropElement.build(parts["bottom"],
                               {1: "p", 2: "q", 3: "r"}, FIG2_SIG)
    want = PropElement.build(parts["result"],
                             {1: "s", 2: "t", 3: "p", 4: "q", 5: "r"},
                             FIG2_SIG)
    assert pelem_vcompose(top, bottom) == want


def test_hcompose_with_empty_element_is_unit():
    rng = random.Random(11)
    empty = identity_element(0)
    for _ in range(5):
        e = random_element(rng, BASE_SIG, 2, 1)
        assert pelem_hcompose(e, empty) == e
        assert pelem_hcompose(empty, e) == e


def test_element_interchange_random():
    rng = random.Random(13)
    for _ in range(25):
        g1 = random_element(rng, BASE_SIG, 1, 1, max_r=2)
        g2 = random_element(rng, BASE_SIG, 2, 1, max_r=2)
        h1 = random_element(rng, BASE_SIG, 1, 2, max_r=2)
        h2 = random_element(rng, BASE_SIG, 1, 1, max_r=2)
        lhs = pelem_vcompose(pelem_hcompose(g1, g2),
                             pelem_hcompose(h1, h2))
        rhs = pelem_hcompose(pelem_vcompose(g1, h1),
                             pelem_vcompose(g2, h2))
        assert lhs == rhs


def test_element_permutation_equivariance():
    rng = random.Random(17)
    for _ in range(10):
        top = random_element(rng, BASE_SIG, 1, 2, max_r=2)
        bottom = random_element(rng, BASE_SIG, 2, 1, max_r=2)
        base = pelem_vcompose(top, bottom)
        for w in itertools.permutations((1, 2)):
            inv = tuple(sorted(range(1, 3), key=lambda i: w[i - 1]))
            assert pelem_vcompose(pelem_permute_outputs(top, w),
                                  pelem_permute_inputs(bottom, inv)) == base


# ---------------------------------------------------------------------------
# substitution

def test_expand_reproduces_substitution_figure():
    f4, sig, inner1, inner2, flat = fig4_parts()
    assert expand(f4["outer"], {1: inner1, 2: inner2}) == flat


def test_expand_left_unit():
    _, sig, inner1, _, flat = fig4_parts()
    for e in (inner1, flat, identity_element(2)):
        host = corolla(Signature([("E", e.m, e.n)]), "E")
        assert expand(host.graph, {vid: e for vid in host.graph.vertex_ids}) \
            == e


def test_expand_right_unit():
    rng = random.Random(19)
    for _ in range(10):
        e = random_element(rng, BASE_SIG, 1, 2)
        inner = {vid: corolla(BASE_SIG, name)
                 for vid, name in e.labels.items()}
        assert expand(e.graph, inner) == e


def test_expand_checks_arities():
    _, sig, inner1, inner2, _ = fig4_parts()
    f4 = fixtures.fig4()
    with pytest.raises(GraphError):
        expand(f4["outer"], {1: inner2, 2: inner1})
    with pytest.raises(GraphError):
        expand(f4["outer"], {1: inner1})


def test_expand_associativity_three_levels():
    rng = random.Random(23)
    mid_names = [("A", 1, 1), ("B", 2, 1), ("C", 1, 2)]
    midsig = Signature(mid_names)
    for trial in range(30):
        mid = {name: random_element(rng, BASE_SIG, m, n, max_r=2)
               for name, m, n in mid_names}
        top_elems = {"X": random_element(rng, midsig, 1, 1, max_r=2),
                     "Y": random_element(rng, midsig, 1, 2, max_r=2)}
        topsig = Signature([("X", 1, 1), ("Y", 1, 2)])
        outer = random_element(rng, topsig, 1, 2, max_r=2)

        inner_first = expand_element(
            outer, {t: expand_element(e, mid) for t, e in top_elems.items()})
        outer_first = expand_element(expand_element(outer, top_elems), mid)
        assert inner_first == outer_first, trial


def test_expand_keeps_wires_spliced():
    # a host vertex replaced by a pure wire element disappears entirely
    wire = identity_element(1)
    host = corolla(Signature([("W", 1, 1)]), "W")
    spliced = expand(host.graph, {1: wire})
    assert spliced == identity_element(1)
    assert spliced.graph.vertices == ()


# ---------------------------------------------------------------------------
# the universal property

def test_extension_restricts_to_assignment():
    assignment = {name: corolla(BASE_SIG, name) for name in BASE_SIG.names}
    phi = extend_morphism(BASE_SIG, assignment, FREE_OPS)
    for name in BASE_SIG.names:
        assert phi(corolla(BASE_SIG, name)) == assignment[name]


def test_extension_is_identity_for_corolla_assignment():
    rng = random.Random(29)
    phi = extend_morphism(
        BASE_SIG, {name: corolla(BASE_SIG, name) for name in BASE_SIG.names},
        FREE_OPS)
    for _ in range(40):
        m, n = rng.choice([(1, 1), (2, 1), (1, 2), (2, 2), (0, 0)])
        e = random_element(rng, BASE_SIG, m, n)
        assert phi(e) == e


def test_extension_agrees_with_substitution():
    # two independent routes: frontier slicing vs direct graph splicing
    rng = random.Random(31)
    mid_names = [("A", 1, 1), ("B", 2, 1), ("C", 1, 2)]
    midsig = Signature(mid_names)
    for _ in range(25):
        assignment = {name: random_element(rng, BASE_SIG, m, n, max_r=2)
                      for name, m, n in mid_names}
        phi = extend_morphism(midsig, assignment, FREE_OPS)
        e = random_element(rng, midsig, 1, 1)
        assert phi(e) == expand_element(e, assignment)


def test_extension_commutes_with_operations():
    rng = random.Random(37)
    assignment = {"a": random_element(rng, BASE_SIG, 1, 1, max_r=2),
                  "b": random_element(rng, BASE_SIG, 2, 1, max_r=2),
                  "c": random_element(rng, BASE_SIG, 1, 2, max_r=2)}
    phi = extend_morphism(BASE_SIG, assignment, FREE_OPS)
    for _ in range(15):
        x = random_element(rng, BASE_SIG, 1, 2, max_r=2)
        y = random_element(rng, BASE_SIG, 2, 1, max_r=2)
        assert phi(pelem_hcompose(x, y)) == \
            pelem_hcompose(phi(x), phi(y))
        assert phi(pelem_vcompose(x, y)) == \
            pelem_vcompose(phi(x), phi(y))
        assert phi(pelem_permute_outputs(x, (2, 1))) == \
            pelem_permute_outputs(phi(x), (2, 1))
        assert phi(identity_element(3)) == identity_element(3)


def test_extension_is_order_independent():
    rng = random.Random(41)
    assignment = {name: corolla(BASE_SIG, name) for name in BASE_SIG.names}
    default = extend_morphism(BASE_SIG, assignment, FREE_OPS)
    latest = extend_morphism(BASE_SIG, assignment, FREE_OPS,
                             order_fn=topo_latest_first)
    for _ in range(20):
        e = random_element(rng, BASE_SIG, 2, 2)
        assert default(e) == latest(e)


def test_extension_validates_assignment():
    with pytest.raises(GraphError):
        extend_morphism(BASE_SIG, {"a": corolla(BASE_SIG, "a")}, FREE_OPS)
    bad = {"a": corolla(BASE_SIG, "b"),
           "b": corolla(BASE_SIG, "b"),
           "c": corolla(BASE_SIG, "c")}
    with pytest.raises(GraphError):
        extend_morphism(BASE_SIG, bad, FREE_OPS)


def test_two_extensions_agreeing_on_corollas_agree_everywhere():
    assignment = {name: corolla(BASE_SIG, name) for name in BASE_SIG.names}
    phi1 = extend_morphism(BASE_SIG, assignment, FREE_OPS)
    phi2 = extend_morphism(BASE_SIG, assignment, FREE_OPS,
                           order_fn=topo_latest_first)
    profiles = [("a", "b", "c"), ("c", "b"), ("a", "a", "a"), ("c", "c")]
    for profile in profiles:
        arities = [BASE_SIG.arity(x) for x in profile]
        for mn in [(1, 1), (2, 1), (1, 2)]:
            for ng in enumerate_graphs(arities, *mn):
                labels = {i: profile[i - 1]
                          for i in range(1, len(profile) + 1)}
                e = PropElement.build(ng.graph, labels, BASE_SIG)
                assert phi1(e) == phi2(e)


# ---------------------------------------------------------------------------
# counting

def test_count_basis_single_unary_generator():
    sig = Signature([("u", 1, 1)])
    table = count_basis(sig, 1, 1, 3)
    assert table["iso"] == [1, 1, 1, 1]
    assert table["numbered"] == [1, 1, 2, 6]


def test_count_basis_closed_generator():
    sig = Signature([("c", 0, 0)])
    table = count_basis(sig, 0, 0, 3)
    assert table["iso"] == [1, 1, 1, 1]


def test_count_basis_two_generators_matches_brute_force():
    from _oracles import brute_force_graphs
    sig = Signature([("j", 2, 1), ("s", 1, 2)])
    table = count_basis(sig, 1, 1, 2)
    total = 0
    for profile in itertools.product(sig.names, repeat=2):
        arities = [sig.arity(x) for x in profile]
        total += len(brute_force_graphs(arities, 1, 1))
    assert table["numbered"][2] == total
    assert table["numbered"][0] == 1 and table["numbered"][1] == 0


def test_count_basis_free_action_factorial():
    for sig in (Signature([("u", 1, 1)]),
                Signature([("j", 2, 1), ("s", 1, 2)])):
        assert sig.nonempty_inputs()
        table = count_basis(sig, 1, 1, 3)
        for r, (num, iso) in enumerate(zip(table["numbered"],
                                           table["iso"])):
            assert num == iso * _factorial(r), (sig, r)


# ---------------------------------------------------------------------------
# partial labelings

def test_partial_labeling_fixture_degree():
    f8 = fixtures.fig8()
    p = PartialLabeledGraph(f8["graph"], f8["labels"], f8["slots"])
    assert filtration_degree(p) == 3


def test_fully_slotted_graph_has_degree_zero():
    g = fixtures.nonacyclic_p2()
    slots = {vid: i for i, vid in enumerate(sorted(g.vertex_ids), start=1)}
    assert filtration_degree(PartialLabeledGraph(g, {}, slots)) == 0


def test_partial_labeling_partition_enforced():
    g = fixtures.nonacyclic_p2()
    with pytest.raises(GraphError):
        PartialLabeledGraph(g, {1: "x"}, {1: 1, 2: 2, 3: 3, 4: 4})
    with pytest.raises(GraphError):
        PartialLabeledGraph(g, {1: "x"}, {2: 1, 3: 2})
    with pytest.raises(GraphError):
        PartialLabeledGraph(g, {1: "x"}, {2: 2, 3: 3, 4: 4})


def test_partial_labelings_of_three_vertex_graph():
    chain = None
    for ng in enumerate_graphs([(1, 1)] * 3, 1, 1):
        chain = ng.graph
        break
    assert chain is not None
    parts = []
    ids = sorted(chain.vertex_ids)
    for k in range(4):
        for subset in itertools.combinations(ids, k):
            labels = {vid: "x" for vid in subset}
            rest = [vid for vid in ids if vid not in subset]
            slots = {vid: i for i, vid in enumerate(rest, start=1)}
            parts.append(PartialLabeledGraph(chain, labels, slots))
    assert len(parts) == 8
    degrees = sorted(filtration_degree(p) for p in parts)
    assert degrees == [0, 1, 1, 1, 2, 2, 2, 3]
    kept = list(filter_upto(parts, 1))
    assert len(kept) == 4


# ---------------------------------------------------------------------------
# JSON forms

def test_element_json_round_trip():
    _, sig, inner1, _, flat = fig4_parts()
    for e in (inner1, flat, identity_element(2)):
        d = json.loads(to_json_text(element_to_dict(e)))
        assert element_from_dict(d, sig) == e


def test_element_json_requires_labels():
    d = element_to_dict(corolla(BASE_SIG, "a"))
    del d["vertices"][0]["label"]
    with pytest.raises(FormatError):
        element_from_dict(d)


def test_partial_json_round_trip():
    f8 = fixtures.fig8()
    p = PartialLabeledGraph(f8["graph"], f8["labels"], f8["slots"])
    d = json.loads(to_json_text(partial_to_dict(p)))
    assert partial_from_dict(d) == p
    bad = partial_to_dict(p)
    bad["vertices"][0].pop("slot", None)
    bad["vertices"][0].pop("label", None)
    with pytest.raises(FormatError):
        partial_from_dict(bad)
