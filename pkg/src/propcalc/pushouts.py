"""Finite-set colimits: pushouts, punctured cubes, and a cardinality
audit of the degree filtration on envelopes of free props.

Everything here works with concrete finite sets and graph classes, so
every colimit can be computed two ways: by a closed description and by
the generic union-find quotient.  The checkers compare the two.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .canonical import canonicalize, enumerate_graphs
from .freeprop import Signature
from .graphs import GraphError, LimitError
from .unionfind import UnionFind

DEFAULT_MAX_CLASSES = 200000


# ---------------------------------------------------------------------------
# finite set maps

@dataclass(frozen=True)
class FiniteSetMap:
    """A total function between finite sets of hashable tokens."""

    source: frozenset
    target: frozenset
    pairs: tuple

    @classmethod
    def build(cls, source, target, mapping) -> "FiniteSetMap":
        src, tgt = frozenset(source), frozenset(target)
        mp = dict(mapping)
        if set(mp) != src:
            raise GraphError("mapping must be defined on exactly the source")
        stray = [x for x in mp if mp[x] not in tgt]
        if stray:
            raise GraphError(f"values outside the target for {sorted(map(repr, stray))}")
        return cls(src, tgt, tuple(sorted(mp.items(), key=repr)))

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    def __call__(self, x):
        for a, b in self.pairs:
            if a == x:
                return b
        raise GraphError(f"{x!r} is not in the source")

    def is_injective(self) -> bool:
        return len({b for _, b in self.pairs}) == len(self.pairs)

    def image(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def compose(self, first: "FiniteSetMap") -> "FiniteSetMap":
        """self after first."""
        if first.target != self.source:
            raise GraphError("composition needs matching middle set")
        return FiniteSetMap.build(
            first.source, self.target,
            {x: self(y) for x, y in first.pairs})

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSetMap) \
            and self.source == other.source and self.target == other.target \
            and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.pairs))


def inclusion_map(sub, whole) -> FiniteSetMap:
    sub, whole = frozenset(sub), frozenset(whole)
    if not sub <= whole:
        raise GraphError("first set is not contained in the second")
    return FiniteSetMap.build(sub, whole, {x: x for x in sub})


# ---------------------------------------------------------------------------
# generic quotients

def quotient_classes(items, pairs) -> list[frozenset]:
    """Partition `items` by the equivalence generated by `pairs`.  The
    classes come back in a deterministic order."""
    pool = list(items)
    seen = set(pool)
    uf = UnionFind(pool)
    for a, b in pairs:
        if a not in seen or b not in seen:
            raise GraphError("relation mentions an unknown item")
        uf.union(a, b)
    classes = [frozenset(members) for members in uf.groups().values()]
    classes.sort(key=lambda c: min(repr(x) for x in c))
    return classes


def pushout_sets(u: FiniteSetMap, s: FiniteSetMap) -> list[frozenset]:
    """Pushout of T <-s- S -u-> A, as a partition of the tagged sum
    {("A", a)} | {("T", t)}."""
    if u.source != s.source:
        raise GraphError("the span legs must share a source")
    items = [("A", a) for a in sorted(u.target, key=repr)]
    items += [("T", t) for t in sorted(s.target, key=repr)]
    pairs = [(("A", u(x)), ("T", s(x))) for x in sorted(u.source, key=repr)]
    return quotient_classes(items, pairs)


def coequalizer_sets(d0: FiniteSetMap, d1: FiniteSetMap) -> list[frozenset]:
    if d0.source != d1.source or d0.target != d1.target:
        raise GraphError("parallel maps must share source and target")
    items = sorted(d0.target, key=repr)
    pairs = [(d0(x), d1(x)) for x in sorted(d0.source, key=repr)]
    return quotient_classes(items, pairs)


def reflexive_presentation(u: FiniteSetMap, s: FiniteSetMap):
    """The fork T|S|A => T|A (with its common section) whose coequalizer
    presents the pushout of T <-s- S -u-> A."""
    if u.source != s.source:
        raise GraphError("the span legs must share a source")
    wide = [("T", t) for t in sorted(s.target, key=repr)]
    wide += [("S", x) for x in sorted(u.source, key=repr)]
    wide += [("A", a) for a in sorted(u.target, key=repr)]
    narrow = [("T", t) for t in sorted(s.target, key=repr)]
    narrow += [("A", a) for a in sorted(u.target, key=repr)]

    def fold(via):
        out = {}
        for node in wide:
            tag, x = node
            out[node] = ("A", u(x)) if tag == "S" and via == "u" else \
                        ("T", s(x)) if tag == "S" else node
        return FiniteSetMap.build(wide, narrow, out)

    d0 = fold("u")
    d1 = fold("s")
    s0 = FiniteSetMap.build(narrow, wide, {x: x for x in narrow})
    return d0, d1, s0


def presentation_matches_pushout(u: FiniteSetMap, s: FiniteSetMap) -> bool:
    """Pushout and reflexive-coequalizer presentation give the same
    partition of A | T."""
    d0, d1, s0 = reflexive_presentation(u, s)
    for x in s0.source:
        if d0(s0(x)) != x or d1(s0(x)) != x:
            return False
    return set(coequalizer_sets(d0, d1)) == set(pushout_sets(u, s))


# ---------------------------------------------------------------------------
# punctured cubes

@dataclass(frozen=True)
class CubeDiagram:
    """The n-cube whose vertex at (e_1..e_n) is the product of copies of
    K (e_j = 0) or L (e_j = 1), with edges applying `i` coordinatewise."""

    n: int
    i: FiniteSetMap

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("cube dimension must be >= 0")

    def _pool(self, e: int) -> list:
        side = self.i.source if e == 0 else self.i.target
        return sorted(side, key=repr)

    def _check_eps(self, eps) -> tuple:
        eps = tuple(eps)
        if len(eps) != self.n or any(e not in (0, 1) for e in eps):
            raise GraphError(f"bad cube position {eps!r}")
        return eps

    def vertex(self, eps) -> list[tuple]:
        eps = self._check_eps(eps)
        return [t for t in itertools.product(*(self._pool(e) for e in eps))]

    def edge(self, eps, j: int) -> FiniteSetMap:
        """The map raising coordinate j (1-based) from K to L."""
        eps = self._check_eps(eps)
        if not 1 <= j <= self.n or eps[j - 1] != 0:
            raise GraphError(f"no raisable coordinate {j} at {eps!r}")
        src, dst = self.vertex(eps), self.vertex(_raise(eps, j))
        mp = {t: t[:j - 1] + (self.i(t[j - 1]),) + t[j:] for t in src}
        return FiniteSetMap.build(src, dst, mp)


def _raise(eps: tuple, j: int) -> tuple:
    return eps[:j - 1] + (1,) + eps[j:]


def faces_commute(cube: CubeDiagram) -> bool:
    """Raising two coordinates in either order gives the same map."""
    for eps in itertools.product((0, 1), repeat=cube.n):
        zeros = [j for j, e in enumerate(eps, start=1) if e == 0]
        for j, k in itertools.combinations(zeros, 2):
            via_j = cube.edge(_raise(eps, j), k).compose(cube.edge(eps, j))
            via_k = cube.edge(_raise(eps, k), j).compose(cube.edge(eps, k))
            if via_j != via_k:
                return False
    return True


@dataclass(frozen=True)
class PuncturedColimit:
    """Colimit of the cube minus its terminal vertex, with the induced
    map into the terminal product."""

    n: int
    classes: tuple
    lam: tuple

    @property
    def size(self) -> int:
        return len(self.classes)

    def lam_injective(self) -> bool:
        return len(set(self.lam)) == len(self.lam)

    def image(self) -> frozenset:
        return frozenset(self.lam)


def punctured_colimit(cube: CubeDiagram) -> PuncturedColimit:
    """Quotient of all sub-terminal cube vertices by the edge maps.  A
    0-cube has no sub-terminal part, so its colimit is empty."""
    n = cube.n
    if n == 0:
        return PuncturedColimit(0, (), ())
    eps_list = [eps for eps in itertools.product((0, 1), repeat=n)
                if 0 in eps]
    items = [(eps, t) for eps in eps_list for t in cube.vertex(eps)]
    pairs = []
    for eps in eps_list:
        for j, e in enumerate(eps, start=1):
            lifted = _raise(eps, j)
            if e != 0 or 0 not in lifted:
                continue
            step = cube.edge(eps, j)
            pairs.extend(((eps, t), (lifted, step(t)))
                         for t in cube.vertex(eps))
    classes = quotient_classes(items, pairs)
    lam = []
    for cls in classes:
        images = {tuple(cube.i(x) if e == 0 else x
                        for e, x in zip(eps, t)) for eps, t in cls}
        if len(images) != 1:
            raise GraphError("edge maps disagree on a colimit class")
        lam.append(images.pop())
    return PuncturedColimit(n, tuple(classes), tuple(lam))


def iterated_identity_check(i: FiniteSetMap, n: int) -> bool:
    """The n-fold punctured colimit agrees with the binary pushout built
    from the (n-1)-fold one, by a bijection commuting with the maps into
    the terminal product."""
    if n < 2:
        raise ValueError("decomposition needs n >= 2")
    lhs = punctured_colimit(CubeDiagram(n, i))
    prev = punctured_colimit(CubeDiagram(n - 1, i))
    prev_class = {node: c for c, cls in enumerate(prev.classes)
                  for node in cls}
    ks = sorted(i.source, key=repr)
    ls = sorted(i.target, key=repr)
    span = [(c, k) for c in range(prev.size) for k in ks]
    left = [(c, x) for c in range(prev.size) for x in ls]
    right = [(t, k) for t in itertools.product(ls, repeat=n - 1) for k in ks]
    u = FiniteSetMap.build(span, left, {(c, k): (c, i(k)) for c, k in span})
    s = FiniteSetMap.build(span, right,
                           {(c, k): (prev.lam[c], k) for c, k in span})
    rhs_classes = pushout_sets(u, s)
    rhs_class = {node: c for c, cls in enumerate(rhs_classes)
                 for node in cls}

    def rhs_lam(node):
        tag, val = node
        if tag == "A":
            c, x = val
            return prev.lam[c] + (x,)
        t, k = val
        return t + (i(k),)

    rhs_lam_of = {}
    for c, cls in enumerate(rhs_classes):
        vals = {rhs_lam(node) for node in cls}
        if len(vals) != 1:
            return False
        rhs_lam_of[c] = vals.pop()

    def correspond(eps, t):
        head, last = eps[:-1], eps[-1]
        if last == 1:
            return ("A", (prev_class[(head, t[:-1])], t[-1]))
        if 0 in head:
            return ("A", (prev_class[(head, t[:-1])], i(t[-1])))
        return ("T", (t[:-1], t[-1]))

    matched = {}
    for c, cls in enumerate(lhs.classes):
        targets = {rhs_class[correspond(eps, t)] for eps, t in cls}
        if len(targets) != 1:
            return False
        matched[c] = targets.pop()
    if sorted(matched.values()) != list(range(len(rhs_classes))):
        return False
    return all(lhs.lam[c] == rhs_lam_of[matched[c]]
               for c in range(lhs.size))


# ---------------------------------------------------------------------------
# envelope classes of a free prop, with open slots

def _slot_menu(max_arity: int, slot_arities) -> tuple:
    if slot_arities is None:
        return tuple((a, b)
                     for a in range(max_arity + 1)
                     for b in range(max_arity + 1) if a + b > 0)
    menu = []
    for pair in slot_arities:
        a, b = pair
        if a < 0 or b < 0 or a + b == 0:
            raise GraphError(f"bad slot arity {pair!r}")
        menu.append((a, b))
    return tuple(menu)


def _enumerate_classes(m, n, roles, max_vertices, accept,
                       max_classes) -> dict:
    """Isomorphism classes of (m,n)-graphs whose vertices are drawn from
    `roles` (pairs of a tag and an arity).  Tags color the vertices for
    canonical forms; `accept` filters role multisets by tag count."""
    out: dict = {}
    for r in range(max_vertices + 1):
        for combo in itertools.combinations_with_replacement(
                range(len(roles)), r):
            tags = [roles[k][0] for k in combo]
            if not accept(Counter(tag[0] for tag in tags), tags):
                continue
            arities = [roles[k][1] for k in combo]
            labels = {v: tags[v - 1] for v in range(1, r + 1)}
            for ng in enumerate_graphs(arities, m, n,
                                       max_vertices=max_vertices):
                key = canonicalize(ng.graph, labels).key
                if key not in out:
                    out[key] = (ng.graph, labels)
                    if len(out) > max_classes:
                        raise LimitError(
                            "class enumeration exceeds the cap")
    return out


def _retag(rep, f) -> tuple:
    graph, labels = rep
    return canonicalize(graph, {v: f(tag) for v, tag in labels.items()}).key


def _subset_with_arities(small: Signature, big: Signature, what: str) -> None:
    for g in small:
        if g.name not in big or big.arity(g.name) != (g.m, g.n):
            raise GraphError(
                f"generator {g.name!r} of the small signature is not "
                f"{what} with the same arity")


def bounded_env_classes(sig_k: Signature, sig_l: Signature,
                        base_sig: Signature, m: int, n: int, *,
                        degree: int, max_vertices: int = 4,
                        max_arity: int = 2, slot_arities=None,
                        max_classes: int = DEFAULT_MAX_CLASSES) -> dict:
    """Classes of partially labeled (m,n)-graphs over the pushout
    signature (base plus the new names of L), with at most `degree`
    vertices carrying a new name.  Unlabeled vertices are open slots,
    interchangeable within an arity."""
    new_names = _checked_setup(sig_k, sig_l, base_sig)
    slots = _slot_menu(max_arity, slot_arities)
    roles = [(("slot",) + ar, ar) for ar in slots]
    roles += [(("lab", g.name), (g.m, g.n)) for g in base_sig]
    roles += [(("lab", g.name), (g.m, g.n)) for g in sig_l
              if g.name in new_names]

    def accept(kinds, tags):
        fresh = sum(1 for tag in tags
                    if tag[0] == "lab" and tag[1] in new_names)
        return fresh <= degree

    return _enumerate_classes(m, n, roles, max_vertices, accept,
                              max_classes)


def _checked_setup(sig_k: Signature, sig_l: Signature,
                   base_sig: Signature) -> frozenset:
    _subset_with_arities(sig_k, sig_l, "in the large signature")
    _subset_with_arities(sig_k, base_sig, "in the base signature")
    new_names = frozenset(set(sig_l.names) - set(sig_k.names))
    clash = new_names & set(base_sig.names)
    if clash:
        raise GraphError(f"new names collide with the base: {sorted(clash)}")
    return new_names


def filtration_square_check(sig_k: Signature, sig_l: Signature,
                            base_sig: Signature, m: int, n: int, *,
                            max_degree: int, max_vertices: int = 4,
                            max_arity: int = 2, slot_arities=None,
                            max_classes: int = DEFAULT_MAX_CLASSES) -> dict:
    """Per filtration degree, enumerate the four corners of the attaching
    square over class representatives and verify that the generic
    union-find pushout of the span reproduces the next filtration stage,
    together with the cardinality identity |D| = |C| + |V'| - |U'| taken
    on computed images."""
    if max_degree < 1:
        raise GraphError("max_degree must be >= 1")
    new_names = _checked_setup(sig_k, sig_l, base_sig)
    slots = _slot_menu(max_arity, slot_arities)
    slot_roles = [(("slot",) + ar, ar) for ar in slots]
    base_roles = [(("lab", g.name), (g.m, g.n)) for g in base_sig]
    lf_roles = [(("lf", g.name), (g.m, g.n)) for g in sig_l]
    kf_roles = [(("kf", g.name), (g.m, g.n)) for g in sig_k]

    env = bounded_env_classes(sig_k, sig_l, base_sig, m, n,
                              degree=max_degree, max_vertices=max_vertices,
                              max_arity=max_arity, slot_arities=slot_arities,
                              max_classes=max_classes)

    def fresh_count(rep) -> int:
        _, labels = rep
        return sum(1 for tag in labels.values()
                   if tag[0] == "lab" and tag[1] in new_names)

    env_by_degree = {d: {key for key, rep in env.items()
                         if fresh_count(rep) <= d}
                     for d in range(max_degree + 1)}

    def to_lab(tag):
        return ("lab", tag[1]) if tag[0] in ("lf", "kf") else tag

    def to_lf(tag):
        return ("lf", tag[1]) if tag[0] == "kf" else tag

    degrees = []
    for nd in range(1, max_degree + 1):
        c_keys = env_by_degree[nd - 1]
        d_keys = env_by_degree[nd]

        def accept_v(kinds, tags, nd=nd):
            return kinds.get("lf", 0) == nd

        def accept_u(kinds, tags, nd=nd):
            return kinds.get("kf", 0) >= 1 \
                and kinds.get("kf", 0) + kinds.get("lf", 0) == nd

        v_reps = _enumerate_classes(m, n, slot_roles + base_roles + lf_roles,
                                    max_vertices, accept_v, max_classes)
        u_reps = _enumerate_classes(
            m, n, slot_roles + base_roles + lf_roles + kf_roles,
            max_vertices, accept_u, max_classes)

        v_into_d = {key: _retag(rep, to_lab) for key, rep in v_reps.items()}
        u_lambda = {key: _retag(rep, to_lf) for key, rep in u_reps.items()}
        u_into_c = {key: _retag(rep, to_lab) for key, rep in u_reps.items()}

        commutes = True
        for key in u_reps:
            if u_lambda[key] not in v_reps \
                    or u_into_c[key] not in c_keys \
                    or v_into_d[u_lambda[key]] != u_into_c[key]:
                commutes = False
        if any(key not in d_keys for key in v_into_d.values()):
            commutes = False

        items = [("C", k) for k in sorted(c_keys, key=repr)]
        items += [("V", k) for k in sorted(v_reps, key=repr)]
        pairs = [(("C", u_into_c[key]), ("V", u_lambda[key]))
                 for key in u_reps]
        glued = quotient_classes(items, pairs) if commutes else []

        pushout_ok = commutes
        seen_d = []
        for cls in glued:
            vals = {k if side == "C" else v_into_d[k] for side, k in cls}
            if len(vals) != 1:
                pushout_ok = False
                break
            seen_d.append(vals.pop())
        if pushout_ok:
            pushout_ok = len(seen_d) == len(set(seen_d)) \
                and set(seen_d) == d_keys

        u_image = {u_into_c[key] for key in u_reps}
        v_image = set(v_into_d.values())
        identity_ok = len(d_keys) == len(c_keys) + len(v_image) - len(u_image)

        degrees.append({
            "degree": nd,
            "U": len(u_reps), "V": len(v_reps),
            "C": len(c_keys), "D": len(d_keys),
            "lambda_image": len(set(u_lambda.values())),
            "U_image": len(u_image), "V_image": len(v_image),
            "square_commutes": commutes,
            "identity": identity_ok,
            "pushout": pushout_ok,
            "j_bijective": len(c_keys) == len(d_keys),
        })

    return {
        "m": m, "n": n,
        "max_degree": max_degree,
        "max_vertices": max_vertices,
        "env_sizes": [len(env_by_degree[d]) for d in range(max_degree + 1)],
        "degrees": degrees,
        "all_ok": all(row["identity"] and row["pushout"]
                      and row["square_commutes"] for row in degrees),
    }
