"""Elements of the free prop on a signature: corollas, the two
compositions, substitution, and basis counting."""

from propcalc.freeprop import (PartialLabeledGraph, Signature, corolla,
                               count_basis, expand_element,
                               filtration_degree, identity_element,
                               pelem_hcompose, pelem_vcompose)

# generators: name, inputs, outputs
sig = Signature([("a", 1, 1), ("b", 2, 1), ("c", 1, 2)])

a = corolla(sig, "a")
b = corolla(sig, "b")
c = corolla(sig, "c")
print("corolla b:", b.m, "->", b.n)

# an element is a graph with labeled vertices, kept in canonical form;
# build (a | c) stacked over b
e = pelem_vcompose(pelem_hcompose(a, c), pelem_hcompose(b, a))
print("(a|c);(b|a):", e.m, "->", e.n, " vertices:", sorted(e.labels))

# identities are wire-only elements and act as units
wire = identity_element(1)
print("unit law:", pelem_vcompose(e, identity_element(e.n)) == e
      and pelem_vcompose(identity_element(e.m), e) == e)

# substitution: replace every generator by an element of the same
# shape; expansion distributes over the graph structure
image = {"a": pelem_vcompose(a, a),
         "b": b,
         "c": pelem_vcompose(a, c)}
print("expanded:", sorted(expand_element(e, image).labels.items()))

# partially labeled graphs grade the construction: degree counts the
# unlabeled slot vertices
kept = {v: e.labels[v] for v in sorted(e.labels)[:2]}
slots = {v: t for t, v in enumerate(sorted(set(e.labels) - set(kept)), 1)}
p = PartialLabeledGraph(e.graph, kept, slots)
print("degree with two labels kept:", filtration_degree(p))

# dimension of the (m, n) component by vertex count
print("basis counts 2->1:", count_basis(sig, 2, 1, max_r=3))
