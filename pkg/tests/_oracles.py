"""Independent oracles for the test suite.

Everything here recomputes expected values by a different algorithm than
the library uses: brute-force backtracking instead of canonical orders,
raw permutation enumeration instead of pruned matching search, pure-python
fraction matrices instead of numpy tensors.  Tests freeze their expected
values against these.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from propcalc.graphs import Edge, Graph, Vertex


# ---------------------------------------------------------------------------
# brute-force isomorphism (backtracking over vertex bijections)

def _color(v, labels):
    return (v.n_in, v.n_out, repr(labels.get(v.id)) if labels else None)


def brute_force_isomorphic(g: Graph, h: Graph,
                           labels_g: dict | None = None,
                           labels_h: dict | None = None) -> bool:
    """Search for a bijection of vertices preserving arities, labels, port
    indices and boundary indices that maps the edge set of g onto that of h."""
    if (g.m, g.n) != (h.m, h.n):
        return False
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    labels_g = labels_g or {}
    labels_h = labels_h or {}
    gcolors = sorted(_color(v, labels_g) for v in g.vertices)
    hcolors = sorted(_color(v, labels_h) for v in h.vertices)
    if gcolors != hcolors:
        return False

    h_by_color: dict[tuple, list[int]] = {}
    for v in h.vertices:
        h_by_color.setdefault(_color(v, labels_h), []).append(v.id)
    h_edges = set(h.edges)

    # boundary ports are fixed by any isomorphism, so wires running directly
    # from a graph input to a graph output must match verbatim
    for e in g.edges:
        if e.src[0] == "input" and e.dst[0] == "output" and e not in h_edges:
            return False

    touching: dict[int, list[Edge]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.src[0] == "vout":
            touching[e.src[1]].append(e)
        if e.dst[0] == "vin" and (e.src[0] != "vout" or e.dst[1] != e.src[1]):
            touching[e.dst[1]].append(e)

    gids = [v.id for v in g.vertices]
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def port_image(p):
        if p[0] in ("vout", "vin"):
            if p[1] not in assignment:
                return None
            return (p[0], assignment[p[1]], p[2])
        return p

    def consistent(vid: int) -> bool:
        for e in touching[vid]:
            src = port_image(e.src)
            dst = port_image(e.dst)
            if src is None or dst is None:
                continue
            if Edge(src, dst) not in h_edges:
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(gids):
            return True
        vid = gids[k]
        color = _color(g.vertex(vid), labels_g)
        for target in h_by_color.get(color, []):
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


def brute_force_nontrivial_automorphism(g: Graph,
                                        labels: dict | None = None) -> bool:
    """True iff g admits a non-identity automorphism (same search as above
    but enumerating all bijections g -> g and skipping the identity)."""
    labels = labels or {}
    by_color: dict[tuple, list[int]] = {}
    for v in g.vertices:
        by_color.setdefault(_color(v, labels), []).append(v.id)
    edge_set = set(g.edges)
    gids = [v.id for v in g.vertices]

    def port_image(p, assignment):
        if p[0] in ("vout", "vin"):
            return (p[0], assignment[p[1]], p[2])
        return p

    for images in _bijections(gids, by_color, labels, g):
        if all(images[v] == v for v in gids):
            continue
        ok = all(Edge(port_image(e.src, images), port_image(e.dst, images))
                 in edge_set for e in g.edges)
        if ok:
            return True
    return False


def _bijections(gids, by_color, labels, g):
    per_vertex = [by_color[_color(g.vertex(vid), labels)] for vid in gids]
    for choice in itertools.product(*per_vertex):
        if len(set(choice)) == len(choice):
            yield dict(zip(gids, choice))


# ---------------------------------------------------------------------------
# raw enumeration of port matchings (permutations + posthoc cycle filter)

def brute_force_graphs(arities: list[tuple[int, int]], m: int,
                       n: int) -> list[Graph]:
    """Every valid numbered graph on the profile, found by enumerating all
    bijections from source ports to target ports and discarding the cyclic
    ones.  Exponential; keep the port count small."""
    vertices = [Vertex(i + 1, a, b) for i, (a, b) in enumerate(arities)]
    sources = [("input", i) for i in range(1, m + 1)]
    targets = [("output", j) for j in range(1, n + 1)]
    for v in vertices:
        sources.extend(("vout", v.id, k) for k in range(1, v.n_out + 1))
        targets.extend(("vin", v.id, k) for k in range(1, v.n_in + 1))
    if len(sources) != len(targets):
        return []
    out = []
    for perm in itertools.permutations(range(len(targets))):
        edges = [Edge(s, targets[perm[i]]) for i, s in enumerate(sources)]
        if _acyclic(vertices, edges):
            out.append(Graph(m, n, tuple(vertices), tuple(edges)))
    return out


def _acyclic(vertices, edges) -> bool:
    succ = {v.id: set() for v in vertices}
    for e in edges:
        if e.src[0] == "vout" and e.dst[0] == "vin":
            succ[e.src[1]].add(e.dst[1])
    seen: dict[int, int] = {}

    def visit(u) -> bool:
        seen[u] = 1
        for w in succ[u]:
            if seen.get(w, 0) == 1 or (seen.get(w, 0) == 0 and not visit(w)):
                return False
        seen[u] = 2
        return True

    return all(visit(v) for v in succ if seen.get(v, 0) == 0)


# ---------------------------------------------------------------------------
# pure-python fraction matrices (tensor-law oracle, no numpy)

def mat_identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    assert all(len(r) == inner for r in a)
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0))
             for j in range(cols)] for i in range(rows)]


def mat_kron(a: list[list[Fraction]], b: list[list[Fraction]]):
    ra, ca = len(a), len(a[0]) if a else 0
    rb, cb = len(b), len(b[0]) if b else 0
    return [[a[i // rb][j // cb] * b[i % rb][j % cb]
             for j in range(ca * cb)] for i in range(ra * rb)]


def wire_permutation(g: Graph) -> list[int]:
    """For a graph whose vertices all pass wires straight through (in-port k
    joined to out-port k), trace each graph output back to the graph input
    feeding it.  Returns sigma with sigma[j-1] = i, only defined when every
    vertex has n_in == n_out."""
    into = {e.dst: e for e in g.edges}
    sigma = []
    for j in range(1, g.n + 1):
        port = ("output", j)
        while True:
            e = into[port]
            if e.src[0] == "input":
                sigma.append(e.src[1])
                break
            _, vid, k = e.src
            port = ("vin", vid, k)
    return sigma


def permutation_matrix(sigma: list[int], d: int) -> list[list[Fraction]]:
    """The matrix of e_{x_1..x_n} -> e_{x_sigma(1)..x_sigma(n)} on a
    d-dimensional space, rows indexed by output multi-indices (axis 1 most
    significant).  A wire-only graph always has m == n == len(sigma)."""
    n = len(sigma)
    size = d ** n
    mat = [[Fraction(0)] * size for _ in range(size)]
    for col in range(size):
        digits = []
        c = col
        for _ in range(n):
            digits.append(c % d)
            c //= d
        digits.reverse()
        row = 0
        for j in range(n):
            row = row * d + digits[sigma[j] - 1]
        mat[row][col] += 1
    return mat


# ---------------------------------------------------------------------------
# counting oracles

def union_formula(l_size: int, l_minus_ik_size: int, n: int) -> int:
    """|L|^n - |L \\ i(K)|^n, the size of the punctured-cube colimit image
    for injective i."""
    return l_size ** n - l_minus_ik_size ** n


def chain_label_count(r: int, q: int) -> int:
    """Number of words of length r over {base, marked} with exactly q marked
    letters: C(r, q).  Counts labeled unary chains independently of any
    graph enumeration."""
    if q < 0 or q > r:
        return 0
    out = 1
    for t in range(q):
        out = out * (r - t) // (t + 1)
    return out
