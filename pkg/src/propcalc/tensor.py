"""Exact-rational tensor semantics for labeled graphs.

A dimension-d assignment sends each generator to a matrix acting on
tensor powers of a d-dimensional space; `evaluate` contracts a labeled
graph as a tensor network, wire by wire, with Fraction arithmetic
throughout (zero tolerance).  `TensorOps` exposes the same target
through the layer-slicing evaluator, giving a second, independent route
to every value.  On top sit the intertwiner checks: one matrix between
two assignments, or a whole diagram of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .canonical import canonical_order
from .freeprop import PropElement, Signature
from .graphs import (FormatError, Graph, GraphError, LimitError, check,
                     check_permutation, vertex_successors)

DEFAULT_MAX_DIM = 4
DEFAULT_MAX_AXES = 6


def parse_rational(text: object) -> Fraction:
    """Read "p/q" or "p" (strings or ints) into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as err:
            raise FormatError(f"bad rational {text!r}: {err}") from None
    raise FormatError(f"bad rational {text!r}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 \
        else f"{x.numerator}/{x.denominator}"


class RatTensor:
    """An immutable dense tensor of exact rationals."""

    __slots__ = ("_a",)

    def __init__(self, array):
        src = np.asarray(array, dtype=object)
        a = np.empty(src.shape, dtype=object)
        flat = a.reshape(-1)
        for i, x in enumerate(src.flat):
            if isinstance(x, Fraction):
                flat[i] = x
            elif isinstance(x, (int, str)):
                flat[i] = parse_rational(x)
            else:
                raise GraphError(f"entry {x!r} is not an exact rational")
        a.setflags(write=False)
        self._a = a

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self._a.shape)

    @classmethod
    def zeros(cls, shape: tuple[int, ...]) -> "RatTensor":
        a = np.empty(shape, dtype=object)
        a.reshape(-1)[:] = [Fraction(0)] * a.size
        return cls(a)

    @classmethod
    def identity(cls, n: int) -> "RatTensor":
        a = np.empty((n, n), dtype=object)
        a.reshape(-1)[:] = [Fraction(0)] * (n * n)
        for i in range(n):
            a[i, i] = Fraction(1)
        return cls(a)

    def rows(self) -> list[list[str]]:
        if self._a.ndim != 2:
            raise GraphError("rows() needs a matrix")
        return [[format_rational(x) for x in row] for row in self._a]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatTensor) and self.shape == other.shape \
            and bool((self._a == other._a).all())

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._a.flat)))

    def __repr__(self) -> str:
        return f"RatTensor{self.shape}"


def rt_dot(a: RatTensor, b: RatTensor) -> RatTensor:
    if a.shape[-1] != b.shape[0]:
        raise GraphError(f"cannot multiply {a.shape} by {b.shape}")
    return RatTensor(np.dot(a.array, b.array))


def rt_kron(a: RatTensor, b: RatTensor) -> RatTensor:
    if a.array.ndim != 2 or b.array.ndim != 2:
        raise GraphError("kron needs matrices")
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.multiply.outer(a.array, b.array)
    return RatTensor(out.transpose(0, 2, 1, 3).reshape(ra * rb, ca * cb))


def kron_power(a: RatTensor, k: int) -> RatTensor:
    if k < 0:
        raise GraphError("negative tensor power")
    out = RatTensor([[Fraction(1)]])
    for _ in range(k):
        out = rt_kron(out, a)
    return out


def rt_inverse(a: RatTensor) -> RatTensor:
    """Exact inverse by Gauss-Jordan elimination."""
    if a.array.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphError("inverse needs a square matrix")
    n = a.shape[0]
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a.array)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise GraphError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return RatTensor([row[n:] for row in work])


# ---------------------------------------------------------------------------
# assignments

@dataclass(frozen=True)
class AlgebraAssignment:
    """A dimension together with one matrix per generator name, the matrix
    for a generator with m inputs and n outputs being d^n x d^m (outputs
    index rows)."""

    dim: int
    matrices: dict[str, RatTensor]
    sig: Signature | None = None

    @classmethod
    def build(cls, dim: int, matrices: dict[str, RatTensor],
              sig: Signature | None = None,
              max_dim: int | None = None) -> "AlgebraAssignment":
        cap = DEFAULT_MAX_DIM if max_dim is None else max_dim
        if not isinstance(dim, int) or dim < 1:
            raise GraphError("dimension must be a positive integer")
        if dim > cap:
            raise LimitError(f"dimension {dim} exceeds the cap {cap}")
        for name, t in matrices.items():
            if not isinstance(t, RatTensor) or t.array.ndim != 2:
                raise GraphError(f"assignment for {name!r} must be a matrix")
        if sig is not None:
            for g in sig:
                t = matrices.get(g.name)
                if t is None:
                    raise GraphError(f"no matrix for generator {g.name!r}")
                want = (dim ** g.n, dim ** g.m)
                if t.shape != want:
                    raise GraphError(
                        f"matrix for {g.name!r} has shape {t.shape}, "
                        f"wanted {want}")
        return cls(dim, dict(matrices), sig)

    def arity(self, name: str) -> tuple[int, int]:
        if self.sig is not None:
            return self.sig.arity(name)
        t = self.matrices.get(name)
        if t is None:
            raise GraphError(f"unknown generator {name!r}")
        if self.dim == 1:
            raise GraphError(
                "dimension 1 cannot determine arities; give a signature")
        rows, cols = t.shape

        def log_of(size: int) -> int:
            k = 0
            while self.dim ** k < size:
                k += 1
            if self.dim ** k != size:
                raise GraphError(
                    f"matrix size {size} is not a power of {self.dim}")
            return k

        return (log_of(cols), log_of(rows))


def algebra_to_dict(a: AlgebraAssignment) -> dict:
    return {"dim": a.dim,
            "matrices": {name: t.rows()
                         for name, t in sorted(a.matrices.items())}}


def algebra_from_dict(d: object,
                      sig: Signature | None = None) -> AlgebraAssignment:
    if not isinstance(d, dict) or not isinstance(d.get("dim"), int) \
            or not isinstance(d.get("matrices"), dict):
        raise FormatError(
            "assignment JSON must be {\"dim\": d, \"matrices\": {...}}")
    matrices: dict[str, RatTensor] = {}
    for name, rows in d["matrices"].items():
        if not isinstance(rows, list) or not rows \
                or not all(isinstance(r, list) and len(r) == len(rows[0])
                           and r for r in rows):
            raise FormatError(f"matrix for {name!r} must be a "
                              "rectangular array of rationals")
        matrices[name] = RatTensor([[parse_rational(x) for x in r]
                                    for r in rows])
    try:
        return AlgebraAssignment.build(d["dim"], matrices, sig)
    except GraphError as err:
        raise FormatError(str(err)) from None


def matrix_from_json(data: object) -> RatTensor:
    if not isinstance(data, list) or not data \
            or not all(isinstance(r, list) and len(r) == len(data[0]) and r
                       for r in data):
        raise FormatError("matrix JSON must be a rectangular array")
    return RatTensor([[parse_rational(x) for x in r] for r in data])


# ---------------------------------------------------------------------------
# evaluation by direct network contraction

def _np_identity(d: int) -> np.ndarray:
    return RatTensor.identity(d).array


def _evaluation_order(graph: Graph, labels: dict[int, str]) -> list[int]:
    # topological, with ties broken by the canonical vertex order
    try:
        rank = {vid: i for i, vid in enumerate(canonical_order(graph,
                                                               labels))}
    except LimitError:
        rank = {vid: vid for vid in graph.vertex_ids}
    succ = vertex_successors(graph)
    indeg = {v: 0 for v in succ}
    for u in succ:
        for w in succ[u]:
            indeg[w] += 1
    ready = sorted((v for v in indeg if indeg[v] == 0),
                   key=lambda v: rank[v])
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for w in sorted(succ[u], key=lambda v: rank[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort(key=lambda v: rank[v])
    return order


def _check_order(graph: Graph, order: list[int]) -> None:
    if sorted(order) != sorted(graph.vertex_ids):
        raise GraphError("order must list every vertex exactly once")
    pos = {vid: i for i, vid in enumerate(order)}
    for e in graph.edges:
        if e.src[0] == "vout" and e.dst[0] == "vin" \
                and pos[e.src[1]] >= pos[e.dst[1]]:
            raise GraphError("order is not topological")


def evaluate(e, A: AlgebraAssignment, order: list[int] | None = None,
             max_axes: int | None = None) -> RatTensor:
    """Contract the labeled graph against the assignment.

    Accepts a PropElement or a (graph, labels) pair.  Vertices are
    consumed in a topological order (any such order gives the same
    tensor); each internal wire is summed over 1..d, and the result is
    returned as a d^n x d^m matrix with output multi-indices on rows,
    earlier boundary index most significant.
    """
    if isinstance(e, PropElement):
        graph, labels = e.graph, e.labels
    else:
        graph, labels = e
        check(graph)
    cap = DEFAULT_MAX_AXES if max_axes is None else max_axes
    if graph.m + graph.n > cap:
        raise LimitError(
            f"boundary {graph.m}+{graph.n} exceeds the {cap}-axis cap")
    d = A.dim
    for v in graph.vertices:
        name = labels.get(v.id)
        if name is None:
            raise GraphError(f"vertex {v.id} has no label")
        t = A.matrices.get(name)
        if t is None:
            raise GraphError(f"no matrix assigned to {name!r}")
        if t.shape != (d ** v.n_out, d ** v.n_in):
            raise GraphError(
                f"matrix for {name!r} has shape {t.shape}, vertex {v.id} "
                f"needs {(d ** v.n_out, d ** v.n_in)}")
    if order is None:
        order = _evaluation_order(graph, labels)
    else:
        order = list(order)
        _check_order(graph, order)

    state = np.array(Fraction(1), dtype=object)
    axes: list[tuple] = []
    for vid in order:
        v = graph.vertex(vid)
        t = A.matrices[labels[vid]].array.reshape(
            (d,) * v.n_out + (d,) * v.n_in)
        ins = [graph.edge_into(("vin", vid, k))
               for k in range(1, v.n_in + 1)]
        spos, tpos = [], []
        for k, edge in enumerate(ins):
            if edge.src[0] == "vout":
                spos.append(axes.index(("e", edge)))
                tpos.append(v.n_out + k)
        state = np.tensordot(state, t, axes=(spos, tpos))
        taken = set(spos)
        axes = [key for i, key in enumerate(axes) if i not in taken]
        axes += [("e", graph.edge_from(("vout", vid, j)))
                 for j in range(1, v.n_out + 1)]
        axes += [("e", edge) for edge in ins if edge.src[0] == "input"]

    for i in range(1, graph.m + 1):
        edge = graph.edge_from(("input", i))
        if edge.dst[0] == "output":
            state = np.tensordot(state, _np_identity(d).reshape(d, d),
                                 axes=([], []))
            axes += [("to", edge), ("ti", edge)]

    final = []
    for j in range(1, graph.n + 1):
        edge = graph.edge_into(("output", j))
        final.append(("e", edge) if edge.src[0] == "vout" else ("to", edge))
    for i in range(1, graph.m + 1):
        edge = graph.edge_from(("input", i))
        final.append(("e", edge) if edge.dst[0] == "vin" else ("ti", edge))
    perm = [axes.index(key) for key in final]
    if perm:
        state = state.transpose(perm)
    return RatTensor(state.reshape(d ** graph.n, d ** graph.m))


# ---------------------------------------------------------------------------
# the same target through the layer-slicing evaluator

@dataclass(frozen=True)
class TElem:
    """A boundary arity plus the matrix realizing it."""

    m: int
    n: int
    tensor: RatTensor


class TensorOps:
    """Matrix semantics as a PropOps target: side-by-side placement is a
    Kronecker product, grafting is a matrix product, and output
    permutations move row axes."""

    def __init__(self, dim: int):
        if dim < 1:
            raise GraphError("dimension must be positive")
        self.dim = dim

    def identity(self, n: int) -> TElem:
        return TElem(n, n, RatTensor.identity(self.dim ** n))

    def hcompose(self, a: TElem, b: TElem) -> TElem:
        return TElem(a.m + b.m, a.n + b.n, rt_kron(a.tensor, b.tensor))

    def vcompose(self, top: TElem, bottom: TElem) -> TElem:
        if top.n != bottom.m:
            raise GraphError(f"cannot graft ({top.m},{top.n}) onto "
                             f"({bottom.m},{bottom.n})")
        return TElem(top.m, bottom.n, rt_dot(bottom.tensor, top.tensor))

    def permute_outputs(self, a: TElem, w: tuple[int, ...]) -> TElem:
        check_permutation(w, a.n)
        d = self.dim
        arr = a.tensor.array.reshape((d,) * a.n + (d ** a.m,))
        arr = np.moveaxis(arr, range(a.n), [x - 1 for x in w])
        return TElem(a.m, a.n,
                     RatTensor(arr.reshape(d ** a.n, d ** a.m)))

    def arity(self, a: TElem) -> tuple[int, int]:
        return (a.m, a.n)

    def of_assignment(self, A: AlgebraAssignment,
                      sig: Signature) -> dict[str, TElem]:
        out = {}
        for g in sig:
            t = A.matrices.get(g.name)
            if t is None:
                raise GraphError(f"no matrix for generator {g.name!r}")
            out[g.name] = TElem(g.m, g.n, t)
        return out


# ---------------------------------------------------------------------------
# intertwiner checks

def _axis_permutation_matrix(w: tuple[int, ...], d: int) -> RatTensor:
    # entry [y, x] = 1 iff y_{w(i)} = x_i for all i; built by index
    # enumeration, on purpose not via the moveaxis route
    n = len(w)
    size = d ** n
    a = np.empty((size, size), dtype=object)
    a.reshape(-1)[:] = [Fraction(0)] * (size * size)
    for x in itertools.product(range(d), repeat=n):
        y = [0] * n
        for i in range(n):
            y[w[i] - 1] = x[i]
        xi = sum(v * d ** (n - 1 - i) for i, v in enumerate(x))
        yi = sum(v * d ** (n - 1 - i) for i, v in enumerate(y))
        a[yi, xi] = Fraction(1)
    return RatTensor(a)


def eval_is_morphism(A: AlgebraAssignment,
                     pairs: Iterable[tuple[PropElement, PropElement]]) \
        -> dict:
    """Check, pair by pair, that evaluation turns the three operations
    into Kronecker product, matrix product, and axis permutation.  Exact
    comparisons; any mismatch lands in the violation list."""
    from .freeprop import (pelem_hcompose, pelem_permute_inputs,
                           pelem_permute_outputs, pelem_vcompose)
    report = {"pairs": 0, "hcompose": 0, "vcompose": 0,
              "permutation": 0, "violations": []}

    def note(kind, a, b):
        report["violations"].append(
            {"op": kind, "left": repr(a), "right": repr(b)})

    for a, b in pairs:
        report["pairs"] += 1
        ea, eb = evaluate(a, A), evaluate(b, A)
        h = evaluate(pelem_hcompose(a, b), A)
        report["hcompose"] += 1
        if h != rt_kron(ea, eb):
            note("hcompose", a, b)
        if a.n == b.m:
            v = evaluate(pelem_vcompose(a, b), A)
            report["vcompose"] += 1
            if v != rt_dot(eb, ea):
                note("vcompose", a, b)
        if a.n >= 2:
            w = (2, 1) + tuple(range(3, a.n + 1))
            p = evaluate(pelem_permute_outputs(a, w), A)
            report["permutation"] += 1
            if p != rt_dot(_axis_permutation_matrix(w, A.dim), ea):
                note("permute_outputs", a, w)
        if a.m >= 2:
            w = (2, 1) + tuple(range(3, a.m + 1))
            p = evaluate(pelem_permute_inputs(a, w), A)
            report["permutation"] += 1
            if p != rt_dot(ea, _axis_permutation_matrix(w, A.dim)):
                note("permute_inputs", a, w)
    return report


def morphism_prop_membership(f: RatTensor, phiA: AlgebraAssignment,
                             phiB: AlgebraAssignment, name: str) -> bool:
    """Whether f intertwines the two assignments on this generator:
    f applied after phiA equals phiB applied after f, power by power."""
    m, n = phiA.arity(name)
    if phiB.arity(name) != (m, n):
        raise GraphError(f"assignments disagree on the arity of {name!r}")
    if f.shape != (phiB.dim, phiA.dim):
        raise GraphError(
            f"f has shape {f.shape}, wanted {(phiB.dim, phiA.dim)}")
    left = rt_dot(kron_power(f, n), phiA.matrices[name])
    right = rt_dot(phiB.matrices[name], kron_power(f, m))
    return left == right


def conjugate_assignment(phiB: AlgebraAssignment,
                         f: RatTensor) -> AlgebraAssignment:
    """Transport phiB backward along an invertible f, so that f becomes an
    intertwiner by construction."""
    if f.shape != (phiB.dim, phiB.dim):
        raise GraphError("transport needs a square f matching the dimension")
    f_inv = rt_inverse(f)
    matrices = {}
    for name in phiB.matrices:
        m, n = phiB.arity(name)
        matrices[name] = rt_dot(kron_power(f_inv, n),
                                rt_dot(phiB.matrices[name],
                                       kron_power(f, m)))
    return AlgebraAssignment.build(phiB.dim, matrices, phiB.sig)


# ---------------------------------------------------------------------------
# diagrams of assignments

@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str
    matrix: RatTensor


@dataclass(frozen=True)
class Diagram:
    """Finitely many assignments joined by matrices, with declared
    composites checked against actual matrix products."""

    objects: dict[str, AlgebraAssignment]
    arrows: tuple[Arrow, ...]
    composites: dict[str, tuple[str, str]]

    @classmethod
    def build(cls, objects: dict[str, AlgebraAssignment],
              arrows: Iterable[Arrow],
              composites: dict[str, tuple[str, str]] | None = None) \
            -> "Diagram":
        arrows = tuple(arrows)
        composites = dict(composites or {})
        if not objects:
            raise GraphError("a diagram needs at least one object")
        names = [ar.name for ar in arrows]
        if len(set(names)) != len(names):
            raise GraphError("arrow names must be unique")
        gens = None
        for obj, A in objects.items():
            keys = set(A.matrices)
            if gens is None:
                gens = keys
            elif keys != gens:
                raise GraphError(
                    f"object {obj!r} assigns a different generator set")
        by_name = {}
        for ar in arrows:
            if ar.src not in objects or ar.dst not in objects:
                raise GraphError(f"arrow {ar.name!r} touches an unknown "
                                 "object")
            want = (objects[ar.dst].dim, objects[ar.src].dim)
            if ar.matrix.shape != want:
                raise GraphError(
                    f"arrow {ar.name!r} has shape {ar.matrix.shape}, "
                    f"wanted {want}")
            by_name[ar.name] = ar
        for name, (first, then) in composites.items():
            missing = [x for x in (name, first, then) if x not in by_name]
            if missing:
                raise GraphError(f"composite {name!r} references unknown "
                                 f"arrows {missing}")
            a, b, c = by_name[first], by_name[then], by_name[name]
            if a.dst != b.src or c.src != a.src or c.dst != b.dst:
                raise GraphError(
                    f"composite {name!r} does not type-check")
            if c.matrix != rt_dot(b.matrix, a.matrix):
                raise GraphError(
                    f"composite {name!r} differs from the product of its "
                    "factors")
        return cls(dict(objects), arrows, composites)

    def restrict(self, keep: Iterable[str]) -> "Diagram":
        keep = set(keep)
        unknown = keep - set(self.objects)
        if unknown:
            raise GraphError(f"unknown objects {sorted(unknown)}")
        objects = {k: v for k, v in self.objects.items() if k in keep}
        arrows = tuple(ar for ar in self.arrows
                       if ar.src in keep and ar.dst in keep)
        names = {ar.name for ar in arrows}
        composites = {name: pair
                      for name, pair in self.composites.items()
                      if name in names and set(pair) <= names}
        return Diagram.build(objects, arrows, composites)


def diagram_end_check(diag: Diagram) -> dict[str, bool]:
    """Per generator: does every arrow of the diagram intertwine it?"""
    some = next(iter(diag.objects.values()))
    out = {}
    for name in sorted(some.matrices):
        out[name] = all(
            morphism_prop_membership(ar.matrix, diag.objects[ar.src],
                                     diag.objects[ar.dst], name)
            for ar in diag.arrows)
    return out
