"""Directed port graphs with numbered boundary and vertex ports.

An (m, n)-graph has m numbered global inputs, n numbered global outputs,
and a finite set of vertices, each with numbered input ports and numbered
output ports.  Edges run from a source port (a graph input or a vertex
output port) to a target port (a graph output or a vertex input port).
Every port is the endpoint of exactly one edge, no directed cycle through
vertices is allowed, and graphs need not be connected.  Parallel edges
between the same pair of vertices are fine; they are told apart by their
port indices.

Ports are written as plain tuples, 1-based everywhere:

    ("input", i)      graph input i          (source side only)
    ("output", j)     graph output j         (target side only)
    ("vout", v, k)    output port k of v     (source side only)
    ("vin", v, k)     input port k of v      (target side only)

This module also fixes the JSON interchange format used by the whole
package and the permutation actions on the boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphError(ValueError):
    """A structurally valid request that violates a domain rule."""


class FormatError(ValueError):
    """Malformed serialized input (JSON shape, unknown port kind, ...)."""


class LimitError(RuntimeError):
    """A configurable resource cap was exceeded."""


Port = tuple
SRC_KINDS = ("input", "vout")
DST_KINDS = ("output", "vin")


@dataclass(frozen=True, order=True)
class Vertex:
    id: int
    n_in: int
    n_out: int


@dataclass(frozen=True, order=True)
class Edge:
    src: Port
    dst: Port


@dataclass(frozen=True)
class Graph:
    """An (m, n)-graph.  Vertices and edges are kept sorted, so two graphs
    with the same structure compare equal."""

    m: int
    n: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v.id for v in self.vertices)

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"no vertex with id {vid}")

    def edge_from(self, src: Port) -> Edge:
        for e in self.edges:
            if e.src == src:
                return e
        raise GraphError(f"no edge out of port {src}")

    def edge_into(self, dst: Port) -> Edge:
        for e in self.edges:
            if e.dst == dst:
                return e
        raise GraphError(f"no edge into port {dst}")


def make_graph(m: int, n: int, vertices: Iterable[Vertex | tuple],
               edges: Iterable[Edge | tuple]) -> Graph:
    """Build a Graph from loose tuples: vertices as (id, n_in, n_out),
    edges as (src, dst) port pairs."""
    vs = tuple(v if isinstance(v, Vertex) else Vertex(*v) for v in vertices)
    es = tuple(e if isinstance(e, Edge) else Edge(tuple(e[0]), tuple(e[1]))
               for e in edges)
    return Graph(m, n, vs, es)


# ---------------------------------------------------------------------------
# validation

def _port_violations(g: Graph, by_id: dict[int, Vertex]) -> list[dict]:
    out = []
    for e in g.edges:
        for port, kinds, side in ((e.src, SRC_KINDS, "src"),
                                  (e.dst, DST_KINDS, "dst")):
            if not isinstance(port, tuple) or not port or port[0] not in kinds:
                out.append({"condition": "reference",
                            "detail": f"{side} port {port!r} has bad kind"})
                continue
            if port[0] == "input":
                if not (len(port) == 2 and 1 <= port[1] <= g.m):
                    out.append({"condition": "reference",
                                "detail": f"input index out of range: {port!r}"})
            elif port[0] == "output":
                if not (len(port) == 2 and 1 <= port[1] <= g.n):
                    out.append({"condition": "reference",
                                "detail": f"output index out of range: {port!r}"})
            else:
                if len(port) != 3 or port[1] not in by_id:
                    out.append({"condition": "reference",
                                "detail": f"unknown vertex in port {port!r}"})
                    continue
                v = by_id[port[1]]
                bound = v.n_out if port[0] == "vout" else v.n_in
                if not 1 <= port[2] <= bound:
                    out.append({"condition": "reference",
                                "detail": f"port index out of range: {port!r}"})
    return out


def source_ports(g: Graph) -> list[Port]:
    ports: list[Port] = [("input", i) for i in range(1, g.m + 1)]
    for v in g.vertices:
        ports.extend(("vout", v.id, k) for k in range(1, v.n_out + 1))
    return ports


def target_ports(g: Graph) -> list[Port]:
    ports: list[Port] = [("output", j) for j in range(1, g.n + 1)]
    for v in g.vertices:
        ports.extend(("vin", v.id, k) for k in range(1, v.n_in + 1))
    return ports


def vertex_successors(g: Graph) -> dict[int, set[int]]:
    """Adjacency of the vertex-level digraph (boundary edges ignored)."""
    succ: dict[int, set[int]] = {v.id: set() for v in g.vertices}
    for e in g.edges:
        if e.src[0] == "vout" and e.dst[0] == "vin":
            succ[e.src[1]].add(e.dst[1])
    return succ


def find_cycle(g: Graph) -> list[int] | None:
    """A directed cycle through vertices as a vertex-id list, or None."""
    succ = vertex_successors(g)
    color: dict[int, int] = {}
    stack: list[int] = []

    def visit(u: int) -> list[int] | None:
        color[u] = 1
        stack.append(u)
        for w in sorted(succ[u]):
            if color.get(w, 0) == 1:
                return stack[stack.index(w):] + [w]
            if color.get(w, 0) == 0:
                found = visit(w)
                if found is not None:
                    return found
        stack.pop()
        color[u] = 2
        return None

    for v in sorted(succ):
        if color.get(v, 0) == 0:
            found = visit(v)
            if found is not None:
                return found
    return None


def validate(g: Graph) -> list[dict]:
    """Check all structural invariants.  Returns a list of violations
    (empty means valid); each violation names the failed condition."""
    out: list[dict] = []
    if g.m < 0 or g.n < 0:
        out.append({"condition": "reference", "detail": "negative boundary"})
        return out
    by_id: dict[int, Vertex] = {}
    for v in g.vertices:
        if v.n_in < 0 or v.n_out < 0:
            out.append({"condition": "reference",
                        "detail": f"vertex {v.id} has negative arity"})
        if v.id in by_id:
            out.append({"condition": "reference",
                        "detail": f"duplicate vertex id {v.id}"})
        by_id[v.id] = v
    out.extend(_port_violations(g, by_id))
    if out:
        return out

    src_seen: dict[Port, int] = {}
    dst_seen: dict[Port, int] = {}
    for e in g.edges:
        src_seen[e.src] = src_seen.get(e.src, 0) + 1
        dst_seen[e.dst] = dst_seen.get(e.dst, 0) + 1
    for p in source_ports(g):
        count = src_seen.pop(p, 0)
        if count != 1:
            out.append({"condition": "source-port",
                        "detail": f"port {p!r} feeds {count} edges (want 1)"})
    for p, count in sorted(src_seen.items()):
        out.append({"condition": "source-port",
                    "detail": f"edge from nonexistent port {p!r}"})
    for p in target_ports(g):
        count = dst_seen.pop(p, 0)
        if count != 1:
            out.append({"condition": "target-port",
                        "detail": f"port {p!r} receives {count} edges (want 1)"})
    for p, count in sorted(dst_seen.items()):
        out.append({"condition": "target-port",
                    "detail": f"edge into nonexistent port {p!r}"})

    cycle = find_cycle(g)
    if cycle is not None:
        out.append({"condition": "acyclic",
                    "detail": f"directed cycle through vertices {cycle}"})
    return out


def check(g: Graph) -> Graph:
    """Raise GraphError if g is invalid; otherwise return g."""
    violations = validate(g)
    if violations:
        raise GraphError(f"invalid graph: {violations[0]['detail']}"
                         + (f" (+{len(violations) - 1} more)"
                            if len(violations) > 1 else ""))
    return g


def topological_order(g: Graph) -> list[int]:
    """Vertex ids in a topological order of the vertex digraph (ties broken
    by id, so the order is deterministic)."""
    succ = vertex_successors(g)
    indeg = {v: 0 for v in succ}
    for u in succ:
        for w in succ[u]:
            indeg[w] += 1
    ready = sorted(v for v in indeg if indeg[v] == 0)
    order: list[int] = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for w in sorted(succ[u]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    if len(order) != len(succ):
        raise GraphError("graph has a directed cycle")
    return order


# ---------------------------------------------------------------------------
# prop operations

def identity(n: int) -> Graph:
    """The vertex-free (n, n)-graph wiring input i straight to output i."""
    if n < 0:
        raise GraphError(f"identity needs n >= 0, got {n}")
    return Graph(n, n, (),
                 tuple(Edge(("input", i), ("output", i))
                       for i in range(1, n + 1)))


def relabel_vertices(g: Graph, mapping: dict[int, int]) -> Graph:
    """Rename vertex ids by a bijective mapping (ids not mentioned stay)."""
    new_ids = [mapping.get(v.id, v.id) for v in g.vertices]
    if len(set(new_ids)) != len(new_ids):
        raise GraphError("vertex relabeling is not injective")

    def move(p: Port) -> Port:
        if p[0] in ("vout", "vin"):
            return (p[0], mapping.get(p[1], p[1]), p[2])
        return p

    return Graph(g.m, g.n,
                 tuple(Vertex(mapping.get(v.id, v.id), v.n_in, v.n_out)
                       for v in g.vertices),
                 tuple(Edge(move(e.src), move(e.dst)) for e in g.edges))


def _offset_for(g: Graph) -> int:
    return max((v.id for v in g.vertices), default=0)


def hcompose(g: Graph, h: Graph) -> Graph:
    """Horizontal composite: disjoint union, h's boundary shifted after g's.
    h's vertex ids are offset past g's largest id."""
    off = _offset_for(g)

    def move(p: Port) -> Port:
        if p[0] == "input":
            return ("input", p[1] + g.m)
        if p[0] == "output":
            return ("output", p[1] + g.n)
        return (p[0], p[1] + off, p[2])

    vertices = g.vertices + tuple(Vertex(v.id + off, v.n_in, v.n_out)
                                  for v in h.vertices)
    edges = g.edges + tuple(Edge(move(e.src), move(e.dst)) for e in h.edges)
    return Graph(g.m + h.m, g.n + h.n, vertices, edges)


def vcompose(top: Graph, bottom: Graph) -> Graph:
    """Vertical composite: output j of top is fused with input j of bottom.

    Each fused pair joins one top edge (whose source is genuine: a graph
    input or a vertex output) with one bottom edge (whose target is
    genuine), so through-wires collapse in a single step and no dangling
    junction can survive.
    """
    if top.n != bottom.m:
        raise GraphError(
            f"boundary mismatch: top has {top.n} outputs, "
            f"bottom has {bottom.m} inputs")
    off = _offset_for(top)

    def move(p: Port) -> Port:
        if p[0] in ("vout", "vin"):
            return (p[0], p[1] + off, p[2])
        return p

    upper: dict[int, Port] = {}
    edges: list[Edge] = []
    for e in top.edges:
        if e.dst[0] == "output":
            upper[e.dst[1]] = e.src
        else:
            edges.append(e)
    for e in bottom.edges:
        if e.src[0] == "input":
            edges.append(Edge(upper[e.src[1]], move(e.dst)))
        else:
            edges.append(Edge(move(e.src), move(e.dst)))

    vertices = top.vertices + tuple(Vertex(v.id + off, v.n_in, v.n_out)
                                    for v in bottom.vertices)
    return Graph(top.m, bottom.n, vertices, edges)


def identity_permutation(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def check_permutation(w: tuple[int, ...], n: int) -> tuple[int, ...]:
    w = tuple(w)
    if sorted(w) != list(range(1, n + 1)):
        raise GraphError(f"not a permutation of 1..{n}: {w}")
    return w


def invert_permutation(w: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(w)
    for i, wi in enumerate(w, start=1):
        inv[wi - 1] = i
    return tuple(inv)


def compose_permutations(w2: tuple[int, ...],
                         w1: tuple[int, ...]) -> tuple[int, ...]:
    """(w2 ∘ w1)(i) = w2(w1(i))."""
    return tuple(w2[w1[i - 1] - 1] for i in range(1, len(w1) + 1))


def block_sum(w1: tuple[int, ...], w2: tuple[int, ...]) -> tuple[int, ...]:
    k = len(w1)
    return w1 + tuple(x + k for x in w2)


def permute_inputs(g: Graph, w: tuple[int, ...]) -> Graph:
    """Right boundary action: new input i reads what old input w(i) read.
    Concretely the edge out of ("input", j) moves to ("input", w⁻¹(j))."""
    w = check_permutation(w, g.m)
    inv = invert_permutation(w)

    def move(p: Port) -> Port:
        if p[0] == "input":
            return ("input", inv[p[1] - 1])
        return p

    return Graph(g.m, g.n, g.vertices,
                 tuple(Edge(move(e.src), e.dst) for e in g.edges))


def permute_outputs(g: Graph, w: tuple[int, ...]) -> Graph:
    """Left boundary action: the edge into ("output", j) is re-pointed to
    ("output", w(j))."""
    w = check_permutation(w, g.n)

    def move(p: Port) -> Port:
        if p[0] == "output":
            return ("output", w[p[1] - 1])
        return p

    return Graph(g.m, g.n, g.vertices,
                 tuple(Edge(e.src, move(e.dst)) for e in g.edges))


def reverse(g: Graph) -> Graph:
    """Mirror the graph top-to-bottom: inputs become outputs, every edge
    flips, every vertex swaps its port sides.  Used for output-path
    canonical ordering."""
    flip = {"input": "output", "output": "input", "vout": "vin", "vin": "vout"}

    def move(p: Port) -> Port:
        return (flip[p[0]],) + p[1:]

    return Graph(g.n, g.m,
                 tuple(Vertex(v.id, v.n_out, v.n_in) for v in g.vertices),
                 tuple(Edge(move(e.dst), move(e.src)) for e in g.edges))


# ---------------------------------------------------------------------------
# JSON interchange

def graph_to_dict(g: Graph, labels: dict[int, object] | None = None,
                  vertex_extras: dict[int, dict] | None = None) -> dict:
    """The canonical JSON form: field order m, n, vertices, edges; vertices
    sorted by id; edges sorted by source port.  `labels` fills the optional
    per-vertex "label" field; `vertex_extras` appends further fields."""
    vertices = []
    for v in g.vertices:
        entry: dict = {"id": v.id, "in": v.n_in, "out": v.n_out}
        if labels is not None and v.id in labels:
            entry["label"] = labels[v.id]
        if vertex_extras is not None and v.id in vertex_extras:
            entry.update(vertex_extras[v.id])
        vertices.append(entry)
    edges = [{"src": list(e.src), "dst": list(e.dst)} for e in g.edges]
    return {"m": g.m, "n": g.n, "vertices": vertices, "edges": edges}


def _parse_port(raw: object, kinds: tuple[str, ...]) -> Port:
    if (not isinstance(raw, list) or not raw or raw[0] not in kinds
            or not all(isinstance(x, int) for x in raw[1:])):
        raise FormatError(f"bad port {raw!r}")
    want = 2 if raw[0] in ("input", "output") else 3
    if len(raw) != want:
        raise FormatError(f"bad port {raw!r}")
    return tuple(raw)


def graph_from_dict(d: object) -> tuple[Graph, dict[int, dict]]:
    """Parse the JSON form.  Returns the graph plus, per vertex id, any
    extra fields ("label", "alphabet", "slot", ...) for the callers that
    layer labelings on top.  Raises FormatError on malformed input."""
    if not isinstance(d, dict):
        raise FormatError("graph JSON must be an object")
    try:
        m, n = d["m"], d["n"]
        raw_vertices, raw_edges = d["vertices"], d["edges"]
    except KeyError as missing:
        raise FormatError(f"graph JSON lacks field {missing}") from None
    if not isinstance(m, int) or not isinstance(n, int):
        raise FormatError("m and n must be integers")
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise FormatError("vertices and edges must be arrays")
    vertices = []
    extras: dict[int, dict] = {}
    for rv in raw_vertices:
        if not isinstance(rv, dict):
            raise FormatError(f"bad vertex entry {rv!r}")
        try:
            vid, a, b = rv["id"], rv["in"], rv["out"]
        except KeyError as missing:
            raise FormatError(f"vertex entry lacks field {missing}") from None
        if not all(isinstance(x, int) for x in (vid, a, b)):
            raise FormatError(f"bad vertex entry {rv!r}")
        vertices.append(Vertex(vid, a, b))
        rest = {k: v for k, v in rv.items() if k not in ("id", "in", "out")}
        if rest:
            extras[vid] = rest
    edges = []
    for re_ in raw_edges:
        if not isinstance(re_, dict) or "src" not in re_ or "dst" not in re_:
            raise FormatError(f"bad edge entry {re_!r}")
        edges.append(Edge(_parse_port(re_["src"], SRC_KINDS),
                          _parse_port(re_["dst"], DST_KINDS)))
    return Graph(m, n, tuple(vertices), tuple(edges)), extras


def to_json_text(d: object) -> str:
    """The one serializer everything uses, so round-trips are byte-exact."""
    return json.dumps(d, indent=2, ensure_ascii=False) + "\n"


def iter_edges_from(g: Graph, src_owner: int) -> Iterator[Edge]:
    for e in g.edges:
        if e.src[0] == "vout" and e.src[1] == src_owner:
            yield e
