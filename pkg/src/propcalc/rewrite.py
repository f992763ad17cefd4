"""Mixed-label graphs over a two-part alphabet and their merge rewriting.

A mixed graph labels part of its vertices with composite elements (built
over a signature of atoms) and the rest with plain generator names.
Merging contracts two composite-labeled vertices whose fusion keeps the
graph acyclic; the merged label is the pair's joint wiring pattern as a
single element.  Merging never changes the fully expanded element
(`expand_all`, the module's equality oracle), but it is not confluent:
the same graph can collapse to several distinct irreducible forms, and
`non_confluence_witness` searches out a smallest example.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .canonical import canonical_order, canonicalize, enumerate_graphs
from .freeprop import (PropElement, Signature, combine_signatures, corolla,
                       element_from_dict, element_to_dict, expand,
                       signature_from_dict, signature_to_dict)
from .graphs import (Edge, FormatError, Graph, GraphError, LimitError,
                     Vertex, check, graph_from_dict, graph_to_dict,
                     vertex_successors)

DEFAULT_MAX_STATES = 20000


@dataclass(frozen=True)
class MixedGraph:
    """A graph whose vertices carry either a composite label (an element
    over `atoms`) or a plain generator name from `msig`.  Equality and
    hashing go through a canonical key, so two mixed graphs compare equal
    exactly when some isomorphism matches both labelings."""

    graph: Graph
    atoms: Signature
    msig: Signature
    p_labels: dict[int, PropElement]
    m_labels: dict[int, str]
    key: tuple = field(repr=False)

    @classmethod
    def build(cls, graph: Graph, atoms: Signature, msig: Signature,
              p_labels: dict[int, PropElement],
              m_labels: dict[int, str]) -> "MixedGraph":
        check(graph)
        combine_signatures(atoms, msig)
        ids = set(graph.vertex_ids)
        ps, ms = set(p_labels), set(m_labels)
        if ps | ms != ids or ps & ms:
            raise GraphError(
                "composite and generator labels must partition the vertices")
        for v in graph.vertices:
            if v.id in p_labels:
                e = p_labels[v.id]
                for name in e.labels.values():
                    if name not in atoms:
                        raise GraphError(
                            f"composite label of vertex {v.id} uses "
                            f"{name!r}, which is not an atom")
                if (e.m, e.n) != (v.n_in, v.n_out):
                    raise GraphError(
                        f"vertex {v.id} has arity {(v.n_in, v.n_out)}, "
                        f"composite label is ({e.m},{e.n})")
            else:
                want = msig.arity(m_labels[v.id])
                if (v.n_in, v.n_out) != want:
                    raise GraphError(
                        f"vertex {v.id} has arity {(v.n_in, v.n_out)}, "
                        f"label {m_labels[v.id]!r} wants {want}")
        p_labels = dict(p_labels)
        m_labels = dict(m_labels)
        key = (canonicalize(graph, _label_map(p_labels, m_labels)).key,
               atoms.generators, msig.generators)
        return cls(graph, atoms, msig, p_labels, m_labels, key)

    def alphabet(self, vid: int) -> str:
        if vid in self.p_labels:
            return "P"
        if vid in self.m_labels:
            return "M"
        raise GraphError(f"unknown vertex {vid}")

    def __eq__(self, other) -> bool:
        return isinstance(other, MixedGraph) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return (f"MixedGraph(({self.graph.m},{self.graph.n}), "
                f"{len(self.p_labels)} composite / "
                f"{len(self.m_labels)} plain vertices)")


def _label_map(p_labels: dict[int, PropElement],
               m_labels: dict[int, str]) -> dict[int, object]:
    out: dict[int, object] = {vid: ("P", e.key)
                              for vid, e in p_labels.items()}
    out.update((vid, ("M", name)) for vid, name in m_labels.items())
    return out


# ---------------------------------------------------------------------------
# merging

def _reach_sets(graph: Graph) -> dict[int, set[int]]:
    """Per vertex, the set of vertices reachable by a nonempty path."""
    succ = vertex_successors(graph)
    reach: dict[int, set[int]] = {}

    def visit(v: int) -> set[int]:
        if v not in reach:
            reach[v] = set()
            for s in succ[v]:
                reach[v].add(s)
                reach[v] |= visit(s)
        return reach[v]

    for v in graph.vertex_ids:
        visit(v)
    return reach


def _fusable(graph: Graph, u: int, v: int,
             reach: dict[int, set[int]] | None = None) -> bool:
    # contracting {u, v} stays acyclic iff no path between them passes
    # through a third vertex
    if reach is None:
        reach = _reach_sets(graph)
    succ = vertex_successors(graph)
    for a, b in ((u, v), (v, u)):
        for s in succ[a]:
            if s != b and b in reach[s]:
                return False
    return True


def mergeable(g: MixedGraph, u: int, v: int) -> bool:
    """Whether the two composite-labeled vertices can fuse into one."""
    for w in (u, v):
        if w not in g.p_labels:
            raise GraphError(f"vertex {w} is not composite-labeled")
    if u == v:
        raise GraphError("merging needs two distinct vertices")
    return _fusable(g.graph, u, v)


def merge(g: MixedGraph, u: int, v: int) -> MixedGraph:
    """Fuse u and v into one vertex labeled by their joint pattern.

    The merged vertex takes a fresh id; its ports list u's surviving
    ports first, then v's, and its label is the two-vertex subgraph
    (with the pair's mutual wiring) expanded into a single element.
    """
    if not mergeable(g, u, v):
        raise GraphError(f"vertices {u} and {v} cannot be merged")
    gu, gv = g.graph.vertex(u), g.graph.vertex(v)
    pair = {u, v}
    mutual = [e for e in g.graph.edges
              if e.src[0] == "vout" and e.src[1] in pair
              and e.dst[0] == "vin" and e.dst[1] in pair]
    fed = {e.dst for e in mutual}
    used = {e.src for e in mutual}
    ext_in = [("vin", x, i)
              for x, deg in ((u, gu.n_in), (v, gv.n_in))
              for i in range(1, deg + 1) if ("vin", x, i) not in fed]
    ext_out = [("vout", x, k)
               for x, deg in ((u, gu.n_out), (v, gv.n_out))
               for k in range(1, deg + 1) if ("vout", x, k) not in used]

    side = {u: 1, v: 2}
    host_edges = [Edge(("input", pos), ("vin", side[p[1]], p[2]))
                  for pos, p in enumerate(ext_in, start=1)]
    host_edges += [Edge(("vout", side[e.src[1]], e.src[2]),
                        ("vin", side[e.dst[1]], e.dst[2])) for e in mutual]
    host_edges += [Edge(("vout", side[p[1]], p[2]), ("output", pos))
                   for pos, p in enumerate(ext_out, start=1)]
    host = Graph(len(ext_in), len(ext_out),
                 (Vertex(1, gu.n_in, gu.n_out), Vertex(2, gv.n_in, gv.n_out)),
                 tuple(host_edges))
    label = expand(host, {1: g.p_labels[u], 2: g.p_labels[v]})

    w = max(g.graph.vertex_ids) + 1
    in_pos = {p: k for k, p in enumerate(ext_in, start=1)}
    out_pos = {p: k for k, p in enumerate(ext_out, start=1)}
    dropped = set(mutual)
    edges = []
    for e in g.graph.edges:
        if e in dropped:
            continue
        src = ("vout", w, out_pos[e.src]) if e.src in out_pos else e.src
        dst = ("vin", w, in_pos[e.dst]) if e.dst in in_pos else e.dst
        edges.append(Edge(src, dst))
    vertices = tuple(x for x in g.graph.vertices if x.id not in pair) \
        + (Vertex(w, len(ext_in), len(ext_out)),)
    merged = Graph(g.graph.m, g.graph.n, vertices, tuple(edges))
    p_labels = {vid: e for vid, e in g.p_labels.items() if vid not in pair}
    p_labels[w] = label
    return MixedGraph.build(merged, g.atoms, g.msig, p_labels,
                            dict(g.m_labels))


def mergeable_pairs(g: MixedGraph) -> list[tuple[int, int]]:
    """All mergeable pairs, ordered by the canonical vertex order (the
    deterministic choice the greedy strategy follows)."""
    order = canonical_order(g.graph, _label_map(g.p_labels, g.m_labels))
    pos = {vid: i for i, vid in enumerate(order)}
    reach = _reach_sets(g.graph)
    ranked = sorted(g.p_labels, key=lambda vid: pos[vid])
    return [(a, b) for a, b in itertools.combinations(ranked, 2)
            if _fusable(g.graph, a, b, reach)]


# ---------------------------------------------------------------------------
# collapse

def collapse(g: MixedGraph, strategy: str = "greedy",
             max_states: int = DEFAULT_MAX_STATES):
    """Merge until irreducible.

    "greedy" repeatedly merges the first pair in canonical order and
    returns one mixed graph; "exhaustive" explores every merge order and
    returns the list of all irreducible forms, order-normalized.
    """
    if strategy == "greedy":
        cur = g
        while True:
            pairs = mergeable_pairs(cur)
            if not pairs:
                return cur
            cur = merge(cur, *pairs[0])
    if strategy == "exhaustive":
        forms, _ = _exhaustive(g, max_states)
        return forms
    raise ValueError(f"unknown strategy {strategy!r}")


def _exhaustive(g: MixedGraph,
                max_states: int = DEFAULT_MAX_STATES) -> tuple[list, list]:
    """All irreducible forms plus, for each, one merge sequence that
    reaches it.  States are deduplicated by canonical key."""
    seen = {g.key}
    stack = [(g, [])]
    irreducible: dict[tuple, tuple[MixedGraph, list]] = {}
    while stack:
        cur, seq = stack.pop()
        pairs = mergeable_pairs(cur)
        if not pairs:
            irreducible.setdefault(cur.key, (cur, seq))
            continue
        for a, b in pairs:
            child = merge(cur, a, b)
            if child.key in seen:
                continue
            if len(seen) >= max_states:
                raise LimitError(
                    f"merge search exceeded {max_states} states")
            seen.add(child.key)
            stack.append((child, seq + [(a, b)]))
    items = sorted(irreducible.items(), key=lambda kv: repr(kv[0]))
    return ([form for _, (form, _) in items],
            [seq for _, (_, seq) in items])


def expand_all(g: MixedGraph) -> PropElement:
    """The element the mixed graph stands for, with every composite label
    expanded in place.  Invariant under merge, hence the equality oracle
    for collapse results."""
    combined = combine_signatures(g.atoms, g.msig)
    inner = {vid: g.p_labels[vid] if vid in g.p_labels
             else corolla(combined, g.m_labels[vid])
             for vid in g.graph.vertex_ids}
    return expand(g.graph, inner)


# ---------------------------------------------------------------------------
# hunting for non-confluence

_WITNESS_MENU = ((0, 2), (2, 0), (1, 1), (2, 1), (1, 2), (0, 0))


def _atom_name(arity: tuple[int, int]) -> str:
    return f"p{arity[0]}x{arity[1]}"


def _gen_name(arity: tuple[int, int]) -> str:
    return f"m{arity[0]}x{arity[1]}"


def non_confluence_witness(max_vertices: int = 6,
                           max_p: int | None = None) -> dict | None:
    """Search small mixed graphs for one with several irreducible forms.

    Returns {"graph", "forms", "sequences"} for the first hit: the forms
    are distinct irreducible collapses verified expand_all-equal, and the
    sequences are merge orders reaching the first two.  Returns None when
    the bounds admit no witness (two composite vertices can only merge
    one way, so max_p <= 2 always comes back empty).
    """
    for r in range(3, max_vertices + 1):
        p_cap = r if max_p is None else min(max_p, r)
        if p_cap < 3:
            continue
        for profile in itertools.combinations_with_replacement(
                _WITNESS_MENU, r):
            for m, n in ((0, 0), (1, 1)):
                if m + sum(a[1] for a in profile) \
                        != n + sum(a[0] for a in profile):
                    continue
                for ng in enumerate_graphs(list(profile), m, n,
                                           upto_iso=True):
                    hit = _try_alphabets(ng.graph, list(profile), p_cap)
                    if hit is not None:
                        return hit
    return None


def _try_alphabets(graph: Graph, profile: list[tuple[int, int]],
                   p_cap: int) -> dict | None:
    r = len(profile)
    reach = _reach_sets(graph)
    fusable = {(a, b) for a, b in itertools.combinations(range(1, r + 1), 2)
               if _fusable(graph, a, b, reach)}
    for k in range(3, p_cap + 1):
        for subset in itertools.combinations(range(1, r + 1), k):
            chosen = set(subset)
            live = [p for p in fusable if p[0] in chosen and p[1] in chosen]
            if len(live) < 2:
                continue
            p_arities = {profile[vid - 1] for vid in subset}
            m_arities = {profile[vid - 1] for vid in range(1, r + 1)
                         if vid not in chosen}
            atoms = Signature(
                (_atom_name(a), a[0], a[1]) for a in sorted(p_arities))
            msig = Signature(
                (_gen_name(a), a[0], a[1]) for a in sorted(m_arities))
            mixed = MixedGraph.build(
                graph, atoms, msig,
                {vid: corolla(atoms, _atom_name(profile[vid - 1]))
                 for vid in subset},
                {vid: _gen_name(profile[vid - 1])
                 for vid in range(1, r + 1) if vid not in chosen})
            try:
                forms, seqs = _exhaustive(mixed, max_states=2000)
            except LimitError:
                continue
            if len(forms) < 2:
                continue
            expansions = {expand_all(f) for f in forms}
            if len(expansions) != 1:
                continue
            return {"graph": mixed, "forms": forms, "sequences": seqs[:2]}
    return None


# ---------------------------------------------------------------------------
# JSON form

def mixed_to_dict(g: MixedGraph) -> dict:
    labels: dict[int, object] = {}
    extras: dict[int, dict] = {}
    for vid, e in g.p_labels.items():
        labels[vid] = element_to_dict(e)
        extras[vid] = {"alphabet": "P"}
    for vid, name in g.m_labels.items():
        labels[vid] = name
        extras[vid] = {"alphabet": "M"}
    d = graph_to_dict(g.graph, labels=labels, vertex_extras=extras)
    return {"atoms": signature_to_dict(g.atoms),
            "msig": signature_to_dict(g.msig), **d}


def mixed_from_dict(d: object) -> MixedGraph:
    if not isinstance(d, dict):
        raise FormatError("mixed-graph JSON must be an object")
    for fieldname in ("atoms", "msig"):
        if fieldname not in d:
            raise FormatError(f"mixed-graph JSON lacks field {fieldname!r}")
    atoms = signature_from_dict(d["atoms"])
    msig = signature_from_dict(d["msig"])
    graph, extras = graph_from_dict(d)
    p_labels: dict[int, PropElement] = {}
    m_labels: dict[int, str] = {}
    for v in graph.vertices:
        ex = extras.get(v.id, {})
        side = ex.get("alphabet")
        lab = ex.get("label")
        if side == "P":
            # a bare atom name abbreviates its one-vertex element
            if isinstance(lab, str):
                try:
                    p_labels[v.id] = corolla(atoms, lab)
                except GraphError as err:
                    raise FormatError(str(err)) from None
            elif isinstance(lab, dict):
                p_labels[v.id] = element_from_dict(lab, atoms)
            else:
                raise FormatError(
                    f"vertex {v.id} needs a composite label")
        elif side == "M":
            if not isinstance(lab, str):
                raise FormatError(f"vertex {v.id} needs a generator name")
            m_labels[v.id] = lab
        else:
            raise FormatError(
                f"vertex {v.id} needs \"alphabet\": \"P\" or \"M\"")
    try:
        return MixedGraph.build(graph, atoms, msig, p_labels, m_labels)
    except GraphError as err:
        raise FormatError(str(err)) from None


def remark_mixed(fixture: dict) -> MixedGraph:
    """Assemble the ready-made non-confluence fixture into a MixedGraph."""
    atoms = Signature((name, a[0], a[1])
                      for name, a in fixture["atoms"].items())
    msig = Signature((name, a[0], a[1])
                     for name, a in fixture["msig"].items())
    p_labels = {vid: corolla(atoms, fixture["labels"][vid])
                for vid, side in fixture["alphabet"].items() if side == "P"}
    m_labels = {vid: fixture["labels"][vid]
                for vid, side in fixture["alphabet"].items() if side == "M"}
    return MixedGraph.build(fixture["graph"], atoms, msig,
                            p_labels, m_labels)
