"""Freely generated prop elements over a signature.

An element is a labeled graph taken up to label-preserving isomorphism:
the graph is stored in canonical form, so dataclass equality is exactly
equality in the free structure.  `expand` substitutes an element into
each vertex of a host graph (the flattening of nested elements), and
`extend_morphism` evaluates elements in any target that implements the
small `PropOps` interface, by slicing the graph into wire layers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Protocol, TypeVar

from .canonical import canonicalize, enumerate_graphs
from .graphs import (Edge, FormatError, Graph, GraphError, Vertex, check,
                     graph_from_dict, graph_to_dict, hcompose, identity,
                     permute_inputs, permute_outputs, topological_order,
                     vcompose)
from .unionfind import UnionFind


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True, order=True)
class Generator:
    """A named operation with m inputs and n outputs."""

    name: str
    m: int
    n: int


class Signature:
    """A finite list of generators with unique names."""

    def __init__(self, generators: Iterable[Generator | tuple]):
        gens = tuple(g if isinstance(g, Generator) else Generator(*g)
                     for g in generators)
        by_name: dict[str, Generator] = {}
        for g in gens:
            if g.m < 0 or g.n < 0:
                raise GraphError(f"generator {g.name!r} has negative arity")
            if g.name in by_name:
                raise GraphError(f"duplicate generator name {g.name!r}")
            by_name[g.name] = g
        self.generators = gens
        self._by_name = by_name

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def arity(self, name: str) -> tuple[int, int]:
        try:
            g = self._by_name[name]
        except KeyError:
            raise GraphError(f"unknown generator {name!r}") from None
        return (g.m, g.n)

    def nonempty_inputs(self) -> bool:
        return all(g.m >= 1 for g in self.generators)

    def restrict(self, names: Iterable[str]) -> "Signature":
        keep = set(names)
        missing = keep - set(self.names)
        if missing:
            raise GraphError(f"unknown generators {sorted(missing)}")
        return Signature(g for g in self.generators if g.name in keep)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) \
            and self.generators == other.generators

    def __repr__(self) -> str:
        inner = ", ".join(f"{g.name}:{g.m}->{g.n}" for g in self.generators)
        return f"Signature({inner})"


def combine_signatures(a: Signature, b: Signature) -> Signature:
    """Disjoint union of generator lists; name clashes are an error."""
    clash = set(a.names) & set(b.names)
    if clash:
        raise GraphError(f"generator names appear on both sides: "
                         f"{sorted(clash)}")
    return Signature(a.generators + b.generators)


def signature_to_dict(sig: Signature) -> dict:
    return {"generators": [{"name": g.name, "m": g.m, "n": g.n}
                           for g in sig.generators]}


def signature_from_dict(d: object) -> Signature:
    if not isinstance(d, dict) or not isinstance(d.get("generators"), list):
        raise FormatError("signature JSON must be {\"generators\": [...]}")
    gens = []
    for entry in d["generators"]:
        if not isinstance(entry, dict):
            raise FormatError(f"bad generator entry {entry!r}")
        try:
            name, m, n = entry["name"], entry["m"], entry["n"]
        except KeyError as missing:
            raise FormatError(f"generator lacks field {missing}") from None
        if not isinstance(name, str) or not isinstance(m, int) \
                or not isinstance(n, int):
            raise FormatError(f"bad generator entry {entry!r}")
        gens.append(Generator(name, m, n))
    try:
        return Signature(gens)
    except GraphError as err:
        raise FormatError(str(err)) from None


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True)
class PropElement:
    """A labeled (m, n)-graph in canonical form.  Equality and hashing go
    through the canonical key, so they decide equality in the free prop."""

    m: int
    n: int
    graph: Graph
    labels: dict[int, str]
    key: tuple = field(repr=False)

    @classmethod
    def build(cls, graph: Graph, labels: dict[int, str],
              sig: Signature | None = None) -> "PropElement":
        check(graph)
        ids = set(graph.vertex_ids)
        if set(labels) != ids:
            raise GraphError("labeling must cover the vertices exactly")
        if sig is not None:
            for v in graph.vertices:
                want = sig.arity(labels[v.id])
                if (v.n_in, v.n_out) != want:
                    raise GraphError(
                        f"vertex {v.id} has arity {(v.n_in, v.n_out)}, "
                        f"label {labels[v.id]!r} wants {want}")
        cf = canonicalize(graph, labels)
        return cls(graph.m, graph.n, cf.graph, cf.labels or {}, cf.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, PropElement) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return (f"PropElement(({self.m},{self.n}), "
                f"{len(self.graph.vertices)} vertices)")


def identity_element(n: int) -> PropElement:
    return PropElement.build(identity(n), {})


def corolla(sig: Signature, name: str) -> PropElement:
    """The generator itself as a one-vertex element."""
    m, n = sig.arity(name)
    edges = [Edge(("input", i), ("vin", 1, i)) for i in range(1, m + 1)]
    edges += [Edge(("vout", 1, k), ("output", k)) for k in range(1, n + 1)]
    graph = Graph(m, n, (Vertex(1, m, n),), tuple(edges))
    return PropElement.build(graph, {1: name}, sig)


def _shift_labels(labels: dict[int, str], offset: int) -> dict[int, str]:
    return {vid + offset: lab for vid, lab in labels.items()}


def pelem_hcompose(a: PropElement, b: PropElement) -> PropElement:
    offset = max(a.graph.vertex_ids, default=0)
    return PropElement.build(hcompose(a.graph, b.graph),
                             a.labels | _shift_labels(b.labels, offset))


def pelem_vcompose(top: PropElement, bottom: PropElement) -> PropElement:
    offset = max(top.graph.vertex_ids, default=0)
    return PropElement.build(vcompose(top.graph, bottom.graph),
                             top.labels | _shift_labels(bottom.labels, offset))


def pelem_permute_inputs(e: PropElement, w: tuple[int, ...]) -> PropElement:
    return PropElement.build(permute_inputs(e.graph, w), e.labels)


def pelem_permute_outputs(e: PropElement, w: tuple[int, ...]) -> PropElement:
    return PropElement.build(permute_outputs(e.graph, w), e.labels)


# ---------------------------------------------------------------------------
# substitution (the flattening of nested elements)

def expand(outer: Graph, inner: dict[int, PropElement]) -> PropElement:
    """Substitute an element for every vertex of the host graph.

    Boundary wires are spliced: an inner through-wire (input fed straight
    to an output) welds the two host edges on either side of its vertex
    into one, so the welds are closed off with a union-find over host
    edges.  Every weld class ends up with exactly one genuine source and
    one genuine target.
    """
    for v in outer.vertices:
        e = inner.get(v.id)
        if e is None:
            raise GraphError(f"vertex {v.id} has no inner element")
        if (e.m, e.n) != (v.n_in, v.n_out):
            raise GraphError(
                f"vertex {v.id} has arity {(v.n_in, v.n_out)}, inner "
                f"element is ({e.m},{e.n})")

    rename: dict[tuple[int, int], int] = {}
    vertices: list[Vertex] = []
    labels: dict[int, str] = {}
    next_id = 1
    for v in outer.vertices:
        for iv in inner[v.id].graph.vertices:
            rename[(v.id, iv.id)] = next_id
            vertices.append(Vertex(next_id, iv.n_in, iv.n_out))
            labels[next_id] = inner[v.id].labels[iv.id]
            next_id += 1

    host = list(outer.edges)
    into = {e.dst: i for i, e in enumerate(host)}
    outof = {e.src: i for i, e in enumerate(host)}

    uf = UnionFind(range(len(host)))
    for v in outer.vertices:
        for ie in inner[v.id].graph.edges:
            if ie.src[0] == "input" and ie.dst[0] == "output":
                uf.union(into[("vin", v.id, ie.src[1])],
                         outof[("vout", v.id, ie.dst[1])])

    def resolved_src(e: Edge):
        if e.src[0] == "input":
            return e.src
        _, vid, k = e.src
        ie = inner[vid].graph.edge_into(("output", k))
        if ie.src[0] == "input":
            return None
        return ("vout", rename[(vid, ie.src[1])], ie.src[2])

    def resolved_dst(e: Edge):
        if e.dst[0] == "output":
            return e.dst
        _, vid, k = e.dst
        ie = inner[vid].graph.edge_from(("input", k))
        if ie.dst[0] == "output":
            return None
        return ("vin", rename[(vid, ie.dst[1])], ie.dst[2])

    edges: list[Edge] = []
    for v in outer.vertices:
        for ie in inner[v.id].graph.edges:
            if ie.src[0] == "vout" and ie.dst[0] == "vin":
                edges.append(Edge(("vout", rename[(v.id, ie.src[1])],
                                   ie.src[2]),
                                  ("vin", rename[(v.id, ie.dst[1])],
                                   ie.dst[2])))
    for members in uf.groups().values():
        srcs = [s for s in (resolved_src(host[i]) for i in members)
                if s is not None]
        dsts = [t for t in (resolved_dst(host[i]) for i in members)
                if t is not None]
        assert len(srcs) == 1 and len(dsts) == 1, "weld class must be a chain"
        edges.append(Edge(srcs[0], dsts[0]))

    return PropElement.build(Graph(outer.m, outer.n, tuple(vertices),
                                   tuple(edges)), labels)


def expand_element(e: PropElement,
                   assignment: dict[str, PropElement]) -> PropElement:
    """Replace each label of e by an element (e viewed as an element over
    a signature of element names)."""
    try:
        inner = {vid: assignment[name] for vid, name in e.labels.items()}
    except KeyError as missing:
        raise GraphError(f"no element assigned to label {missing}") from None
    return expand(e.graph, inner)


# ---------------------------------------------------------------------------
# the universal property

T = TypeVar("T")


class PropOps(Protocol[T]):
    """What a target structure must provide for evaluation: units, the two
    compositions, the output permutation action, and arity lookup."""

    def identity(self, n: int) -> T: ...

    def hcompose(self, a: T, b: T) -> T: ...

    def vcompose(self, top: T, bottom: T) -> T: ...

    def permute_outputs(self, a: T, w: tuple[int, ...]) -> T: ...

    def arity(self, a: T) -> tuple[int, int]: ...


class FreePropOps:
    """The free prop itself as a PropOps target."""

    def identity(self, n: int) -> PropElement:
        return identity_element(n)

    def hcompose(self, a: PropElement, b: PropElement) -> PropElement:
        return pelem_hcompose(a, b)

    def vcompose(self, top: PropElement, bottom: PropElement) -> PropElement:
        return pelem_vcompose(top, bottom)

    def permute_outputs(self, a: PropElement,
                        w: tuple[int, ...]) -> PropElement:
        return pelem_permute_outputs(a, w)

    def arity(self, a: PropElement) -> tuple[int, int]:
        return (a.m, a.n)


FREE_OPS = FreePropOps()


def _check_topological(graph: Graph, order: list[int]) -> None:
    if sorted(order) != sorted(graph.vertex_ids):
        raise GraphError("order must list every vertex exactly once")
    pos = {vid: i for i, vid in enumerate(order)}
    for e in graph.edges:
        if e.src[0] == "vout" and e.dst[0] == "vin" \
                and pos[e.src[1]] >= pos[e.dst[1]]:
            raise GraphError("order is not topological")


def extend_morphism(sig: Signature, assignment: dict[str, T], ops,
                    order_fn=None):
    """The unique structure-preserving extension of a generator assignment.

    Returns phi mapping elements over sig into the target.  phi slices the
    element's graph along a wire frontier: vertices are consumed one at a
    time in topological order, with a permutation layer routing the
    vertex's input wires to the front and a `generator (x) identity` layer
    consuming them.  `order_fn` may pick the vertex order (the result
    never depends on it).
    """
    for name in sig.names:
        if name not in assignment:
            raise GraphError(f"assignment misses generator {name!r}")
        if ops.arity(assignment[name]) != sig.arity(name):
            raise GraphError(
                f"assignment for {name!r} has arity "
                f"{ops.arity(assignment[name])}, wanted {sig.arity(name)}")

    def phi(e: PropElement) -> T:
        graph = e.graph
        for name in e.labels.values():
            if name not in assignment:
                raise GraphError(f"element uses unassigned label {name!r}")
        order = list(order_fn(graph)) if order_fn is not None \
            else topological_order(graph)
        _check_topological(graph, order)

        def route(live: list[Edge], want: list[Edge], acc: T) -> tuple:
            if live == want:
                return live, acc
            target_pos = {edge: i for i, edge in enumerate(want, start=1)}
            w = tuple(target_pos[edge] for edge in live)
            twist = ops.permute_outputs(ops.identity(len(live)), w)
            return want, ops.vcompose(acc, twist)

        live = [graph.edge_from(("input", i)) for i in range(1, graph.m + 1)]
        acc = ops.identity(graph.m)
        for vid in order:
            v = graph.vertex(vid)
            ins = [graph.edge_into(("vin", vid, k))
                   for k in range(1, v.n_in + 1)]
            rest = [edge for edge in live if edge not in ins]
            live, acc = route(live, ins + rest, acc)
            block = assignment[e.labels[vid]]
            if rest:
                block = ops.hcompose(block, ops.identity(len(rest)))
            acc = ops.vcompose(acc, block)
            live = [graph.edge_from(("vout", vid, k))
                    for k in range(1, v.n_out + 1)] + rest
        outs = [graph.edge_into(("output", j)) for j in range(1, graph.n + 1)]
        live, acc = route(live, outs, acc)
        return acc

    return phi


# ---------------------------------------------------------------------------
# basis counting

def count_basis(sig: Signature, m: int, n: int, max_r: int,
                **caps) -> dict[str, list[int]]:
    """Counts of labeled basis graphs per vertex count r = 0..max_r, both
    with numbered vertices and up to label-preserving isomorphism."""
    numbered: list[int] = []
    iso: list[int] = []
    for r in range(max_r + 1):
        total = 0
        keys: set = set()
        for profile in itertools.product(sig.names, repeat=r):
            arities = [sig.arity(name) for name in profile]
            labels = {i: name for i, name in enumerate(profile, start=1)}
            for ng in enumerate_graphs(arities, m, n, **caps):
                total += 1
                keys.add(canonicalize(ng.graph, labels).key)
        numbered.append(total)
        iso.append(len(keys))
    return {"numbered": numbered, "iso": iso}


# ---------------------------------------------------------------------------
# partial labelings

@dataclass(frozen=True)
class PartialLabeledGraph:
    """A graph whose vertices are split into labeled ones and numbered
    open slots (slot numbers 1..s)."""

    graph: Graph
    labels: dict[int, str]
    slots: dict[int, int]

    def __post_init__(self) -> None:
        check(self.graph)
        ids = set(self.graph.vertex_ids)
        lab, slo = set(self.labels), set(self.slots)
        if lab | slo != ids or lab & slo:
            raise GraphError("labels and slots must partition the vertices")
        if sorted(self.slots.values()) != list(range(1, len(self.slots) + 1)):
            raise GraphError("slot numbers must be exactly 1..s")

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialLabeledGraph) \
            and self.graph == other.graph and self.labels == other.labels \
            and self.slots == other.slots

    def __hash__(self) -> int:
        return hash((self.graph, tuple(sorted(self.labels.items())),
                     tuple(sorted(self.slots.items()))))


def filtration_degree(p: PartialLabeledGraph) -> int:
    """How many vertices carry labels (open slots do not count)."""
    return len(p.labels)


def filter_upto(stream: Iterable[PartialLabeledGraph],
                e: int) -> Iterator[PartialLabeledGraph]:
    return (p for p in stream if filtration_degree(p) <= e)


# ---------------------------------------------------------------------------
# JSON forms

def element_to_dict(e: PropElement) -> dict:
    return graph_to_dict(e.graph, labels=e.labels)


def element_from_dict(d: object,
                      sig: Signature | None = None) -> PropElement:
    graph, extras = graph_from_dict(d)
    labels: dict[int, str] = {}
    for v in graph.vertices:
        lab = extras.get(v.id, {}).get("label")
        if not isinstance(lab, str):
            raise FormatError(f"vertex {v.id} lacks a string label")
        labels[v.id] = lab
    try:
        return PropElement.build(graph, labels, sig)
    except GraphError as err:
        raise FormatError(str(err)) from None


def partial_to_dict(p: PartialLabeledGraph) -> dict:
    extras = {vid: {"slot": s} for vid, s in p.slots.items()}
    return graph_to_dict(p.graph, labels=p.labels, vertex_extras=extras)


def partial_from_dict(d: object) -> PartialLabeledGraph:
    graph, extras = graph_from_dict(d)
    labels: dict[int, str] = {}
    slots: dict[int, int] = {}
    for v in graph.vertices:
        ex = extras.get(v.id, {})
        if "label" in ex and "slot" in ex:
            raise FormatError(f"vertex {v.id} is both labeled and a slot")
        if "label" in ex:
            if not isinstance(ex["label"], str):
                raise FormatError(f"vertex {v.id} has a non-string label")
            labels[v.id] = ex["label"]
        elif "slot" in ex:
            if not isinstance(ex["slot"], int):
                raise FormatError(f"vertex {v.id} has a non-integer slot")
            slots[v.id] = ex["slot"]
        else:
            raise FormatError(f"vertex {v.id} has neither label nor slot")
    try:
        return PartialLabeledGraph(graph, labels, slots)
    except GraphError as err:
        raise FormatError(str(err)) from None
