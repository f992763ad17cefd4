"""Canonical labeling, isomorphism, hashing and enumeration of port graphs.

The canonical vertex order comes from a lexicographic ordering of edge-path
labels.  A path from a graph input to a vertex is labeled by the sequence
(input index; in-port of the first edge; then, per further edge, out-port
at its source and in-port at its target).  Each vertex is keyed by the
minimal label over all such paths.  Two distinct paths to the same vertex
never have prefix-comparable labels (a label determines its path edge by
edge, and a proper extension of a path to v would have to revisit v), so
the minimum extends predecessor minima and a single pass in topological
order computes all keys.  Distinct vertices always get distinct keys,
hence a total order, whenever every vertex is reachable from some input.

Graphs whose vertices all have outputs are handled by mirroring.  Anything
else (possible once vertices with a = 0 and b = 0 coexist) falls back to a
minimal-serialization search within (arity, coarity, label) color classes.

Isomorphism here always means: a vertex bijection preserving arities,
labels, port indices and boundary indices that carries the edge set across
exactly.  Since every port belongs to exactly one edge, the edge bijection
is determined by the vertex bijection.
"""

from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import dataclass

from .graphs import (Edge, Graph, GraphError, LimitError, Vertex,
                     relabel_vertices, reverse, topological_order)

DEFAULT_MAX_VERTICES = 8
DEFAULT_MAX_EDGES = 24
_FALLBACK_ORDER_CAP = 362880  # 9!


class UnreachableVertexError(GraphError):
    """Some vertex admits no path from a graph input (or to a graph
    output, for the mirrored order)."""

    def __init__(self, vertices: list[int], side: str = "input"):
        self.vertices = vertices
        super().__init__(f"vertices unreachable from graph {side}s: {vertices}")


def max_vertices_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("PROPCALC_MAX_VERTICES")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise GraphError(
                f"PROPCALC_MAX_VERTICES must be an integer, got {env!r}"
            ) from None
    return DEFAULT_MAX_VERTICES


# ---------------------------------------------------------------------------
# path labels and orders

def input_path_labels(g: Graph) -> dict[int, tuple[int, ...]]:
    """Minimal edge-path label per vertex.  Raises UnreachableVertexError
    if some vertex has no path from a graph input."""
    in_edges: dict[int, list[Edge]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.dst[0] == "vin":
            in_edges[e.dst[1]].append(e)
    labels: dict[int, tuple[int, ...]] = {}
    unreachable: list[int] = []
    for vid in topological_order(g):
        best: tuple[int, ...] | None = None
        for e in in_edges[vid]:
            if e.src[0] == "input":
                cand = (e.src[1], e.dst[2])
            elif e.src[1] in labels:
                cand = labels[e.src[1]] + (e.src[2], e.dst[2])
            else:
                continue
            if best is None or cand < best:
                best = cand
        if best is None:
            unreachable.append(vid)
        else:
            labels[vid] = best
    if unreachable:
        raise UnreachableVertexError(sorted(unreachable))
    return labels


def input_path_order(g: Graph) -> list[int]:
    """Vertex ids sorted by minimal input-path label (a total order)."""
    labels = input_path_labels(g)
    order = sorted(labels, key=labels.__getitem__)
    assert len({labels[v] for v in order}) == len(order), \
        "path labels must be distinct"
    return order


def output_path_order(g: Graph) -> list[int]:
    """The mirrored order: paths from vertices down to graph outputs."""
    try:
        return input_path_order(reverse(g))
    except UnreachableVertexError as err:
        raise UnreachableVertexError(err.vertices, side="output") from None


# ---------------------------------------------------------------------------
# canonical form

def _label_str(label_key: dict[int, str] | None, vid: int) -> str:
    # repr keeps unlabeled (None) and labeled vertices comparable as strings
    return repr(label_key.get(vid)) if label_key else repr(None)


def _serialize(g: Graph, label_key: dict[int, str] | None,
               order: list[int]) -> tuple:
    rename = {vid: i for i, vid in enumerate(order, start=1)}

    def move(p):
        if p[0] in ("vout", "vin"):
            return (p[0], rename[p[1]], p[2])
        return p

    by_id = {v.id: v for v in g.vertices}
    vertex_part = tuple(
        (by_id[vid].n_in, by_id[vid].n_out, _label_str(label_key, vid))
        for vid in order)
    edge_part = tuple(sorted((move(e.src), move(e.dst)) for e in g.edges))
    return (g.m, g.n, vertex_part, edge_part)


def _fallback_order(g: Graph, label_key: dict[int, str] | None) -> list[int]:
    color = {v.id: (v.n_in, v.n_out, _label_str(label_key, v.id))
             for v in g.vertices}
    classes: dict[tuple, list[int]] = {}
    for vid, c in color.items():
        classes.setdefault(c, []).append(vid)
    keys = sorted(classes)
    total = 1
    for c in keys:
        for k in range(2, len(classes[c]) + 1):
            total *= k
        if total > _FALLBACK_ORDER_CAP:
            raise LimitError("canonical fallback search too large")
    best_key, best_order = None, None
    pools = [sorted(classes[c]) for c in keys]
    for perm_choice in itertools.product(
            *(itertools.permutations(pool) for pool in pools)):
        order = [vid for block in perm_choice for vid in block]
        key = _serialize(g, label_key, order)
        if best_key is None or key < best_key:
            best_key, best_order = key, order
    return best_order


def canonical_order(g: Graph,
                    label_key: dict[int, str] | None = None) -> list[int]:
    """The canonical vertex order.  Strategy choice only depends on
    isomorphism-invariant data (which side reaches every vertex), so
    isomorphic graphs always take the same route."""
    if not g.vertices:
        return []
    try:
        return input_path_order(g)
    except UnreachableVertexError:
        pass
    try:
        return output_path_order(g)
    except UnreachableVertexError:
        pass
    return _fallback_order(g, label_key)


@dataclass(frozen=True)
class CanonicalForm:
    """A graph renamed so that vertex ids 1..r follow the canonical order.
    `order` lists the original ids in canonical sequence; `key` is the
    hashable serialization that defines equality."""

    graph: Graph
    labels: dict[int, str] | None
    order: tuple[int, ...]
    key: tuple

    def __eq__(self, other) -> bool:
        return isinstance(other, CanonicalForm) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def canonicalize(g: Graph,
                 labels: dict[int, str] | None = None) -> CanonicalForm:
    order = canonical_order(g, labels)
    rename = {vid: i for i, vid in enumerate(order, start=1)}
    graph = relabel_vertices(g, rename)
    new_labels = ({rename[vid]: lab for vid, lab in labels.items()}
                  if labels is not None else None)
    key = _serialize(g, labels, order)
    return CanonicalForm(graph, new_labels, tuple(order), key)


def is_isomorphic(g: Graph, h: Graph,
                  labels_g: dict[int, str] | None = None,
                  labels_h: dict[int, str] | None = None) -> bool:
    return canonicalize(g, labels_g).key == canonicalize(h, labels_h).key


def graph_hash(g: Graph, labels: dict[int, str] | None = None) -> int:
    """Stable 64-bit digest of the canonical form (stable across runs and
    processes, unlike the builtin hash)."""
    key = canonicalize(g, labels).key
    digest = hashlib.blake2b(repr(key).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


# ---------------------------------------------------------------------------
# numbered graphs and the free symmetric action

@dataclass(frozen=True)
class NumberedGraph:
    """A graph together with the numbering of its vertices: order[i-1] is
    the vertex id carrying number i."""

    graph: Graph
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != sorted(self.graph.vertex_ids):
            raise GraphError("numbering must be a bijection onto the vertices")

    @classmethod
    def from_graph(cls, g: Graph) -> "NumberedGraph":
        return cls(g, tuple(sorted(g.vertex_ids)))


def numbered_key(ng: NumberedGraph,
                 labels: dict[int, str] | None = None) -> tuple:
    """Serialization of a numbered graph with vertices renamed along its
    own numbering.  Two numbered graphs agree on this key iff there is a
    numbering- and port-preserving isomorphism between them."""
    return _serialize(ng.graph, labels, list(ng.order))


def renumber(ng: NumberedGraph, w: tuple[int, ...]) -> NumberedGraph:
    """Precompose the numbering with w: new number i marks the vertex that
    previously carried number w(i)."""
    if sorted(w) != list(range(1, len(ng.order) + 1)):
        raise GraphError(f"not a permutation of 1..{len(ng.order)}: {w}")
    return NumberedGraph(ng.graph, tuple(ng.order[wi - 1] for wi in w))


def _nontrivial_automorphism(g: Graph,
                             label_key: dict[int, str] | None) -> bool:
    by_color: dict[tuple, list[int]] = {}
    for v in g.vertices:
        c = (v.n_in, v.n_out, _label_str(label_key, v.id))
        by_color.setdefault(c, []).append(v.id)
    if all(len(ids) == 1 for ids in by_color.values()):
        return False
    edge_set = set(g.edges)
    touching: dict[int, list[Edge]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.src[0] == "vout":
            touching[e.src[1]].append(e)
        if e.dst[0] == "vin" and (e.src[0] != "vout" or e.src[1] != e.dst[1]):
            touching[e.dst[1]].append(e)

    gids = [v.id for v in g.vertices]
    colors = {v.id: (v.n_in, v.n_out, _label_str(label_key, v.id))
              for v in g.vertices}
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def image(p):
        if p[0] in ("vout", "vin"):
            target = assignment.get(p[1])
            return None if target is None else (p[0], target, p[2])
        return p

    def consistent(vid: int) -> bool:
        for e in touching[vid]:
            src, dst = image(e.src), image(e.dst)
            if src is not None and dst is not None \
                    and Edge(src, dst) not in edge_set:
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(gids):
            return any(assignment[v] != v for v in gids)
        vid = gids[k]
        for target in by_color[colors[vid]]:
            if target in used:
                continue
            assignment[vid] = target
            used.add(target)
            if consistent(vid) and extend(k + 1):
                return True
            del assignment[vid]
            used.discard(target)
        return False

    return extend(0)


def free_action_check(g: NumberedGraph | Graph,
                      labels: dict[int, str] | None = None) -> bool:
    """True iff no non-identity renumbering yields the same numbered graph,
    i.e. the automorphism group is trivial.  Only defined on graphs whose
    vertices all have at least one input."""
    graph = g.graph if isinstance(g, NumberedGraph) else g
    empty = [v.id for v in graph.vertices if v.n_in == 0]
    if empty:
        raise GraphError(f"vertices with no inputs: {empty}")
    return not _nontrivial_automorphism(graph, labels)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_graphs(arities: list[tuple[int, int]], m: int, n: int, *,
                     upto_iso: bool = False,
                     max_vertices: int | None = None,
                     max_edges: int | None = None):
    """Yield every valid numbered graph on the given vertex profile, in a
    fixed lexicographic order of port matchings (so the stream is
    deterministic).  With upto_iso, only the first representative of each
    isomorphism class is emitted."""
    if m < 0 or n < 0 or any(a < 0 or b < 0 for a, b in arities):
        raise GraphError("negative arity or boundary")
    r = len(arities)
    cap = max_vertices_cap(max_vertices)
    if r > cap:
        raise LimitError(f"profile has {r} vertices, cap is {cap}")
    edge_count = m + sum(b for _, b in arities)
    edge_cap = DEFAULT_MAX_EDGES if max_edges is None else max_edges
    if edge_count > edge_cap:
        raise LimitError(f"{edge_count} edges, cap is {edge_cap}")
    if edge_count != n + sum(a for a, _ in arities):
        return

    vertices = tuple(Vertex(i + 1, a, b) for i, (a, b) in enumerate(arities))
    sources: list[tuple] = [("input", i) for i in range(1, m + 1)]
    for v in vertices:
        sources.extend(("vout", v.id, k) for k in range(1, v.n_out + 1))
    targets: list[tuple] = [("output", j) for j in range(1, n + 1)]
    for v in vertices:
        targets.extend(("vin", v.id, k) for k in range(1, v.n_in + 1))

    used = [False] * len(targets)
    chosen: list[int] = []
    desc = [0] * (r + 1)  # desc[v] = bitmask of vertices reachable from v
    seen_keys: set = set()

    def emit():
        edges = tuple(Edge(s, targets[t]) for s, t in zip(sources, chosen))
        graph = Graph(m, n, vertices, edges)
        if upto_iso:
            key = canonicalize(graph).key
            if key in seen_keys:
                return None
            seen_keys.add(key)
        return NumberedGraph(graph, tuple(v.id for v in vertices))

    def assign(i: int):
        if i == len(sources):
            ng = emit()
            if ng is not None:
                yield ng
            return
        src = sources[i]
        for t in range(len(targets)):
            if used[t]:
                continue
            dst = targets[t]
            snapshot = None
            if src[0] == "vout" and dst[0] == "vin":
                u, v = src[1], dst[1]
                if u == v or (desc[v] >> u) & 1:
                    continue
                snapshot = desc.copy()
                gain = desc[v] | (1 << v)
                for x in range(1, r + 1):
                    if x == u or (desc[x] >> u) & 1:
                        desc[x] |= gain
            used[t] = True
            chosen.append(t)
            yield from assign(i + 1)
            chosen.pop()
            used[t] = False
            if snapshot is not None:
                desc[:] = snapshot

    yield from assign(0)


def count_graphs(arities: list[tuple[int, int]], m: int, n: int, *,
                 upto_iso: bool = False, **kw) -> int:
    return sum(1 for _ in enumerate_graphs(arities, m, n,
                                           upto_iso=upto_iso, **kw))
