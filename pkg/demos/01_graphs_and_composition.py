"""Port graphs: build one by hand, compose two ways, round-trip JSON."""

from propcalc.graphs import (graph_from_dict, graph_to_dict, hcompose,
                             make_graph, to_json_text, validate, vcompose)

# a graph with m=2 inputs, n=1 output and two inner vertices:
# vertex 1 consumes both graph inputs, vertex 2 consumes vertex 1's
# output and produces the graph output
g = make_graph(
    m=2, n=1,
    vertices=[(1, 2, 1), (2, 1, 1)],
    edges=[
        (("input", 1), ("vin", 1, 1)),
        (("input", 2), ("vin", 1, 2)),
        (("vout", 1, 1), ("vin", 2, 1)),
        (("vout", 2, 1), ("output", 1)),
    ],
)
validate(g)
print("g:", g.m, "inputs,", g.n, "outputs,", len(g.vertices), "vertices")

# a single-vertex graph shaped (1, 2)
h = make_graph(
    m=1, n=2,
    vertices=[(1, 1, 2)],
    edges=[
        (("input", 1), ("vin", 1, 1)),
        (("vout", 1, 1), ("output", 1)),
        (("vout", 1, 2), ("output", 2)),
    ],
)

# side by side: boundaries concatenate, vertices of h are renumbered
side = hcompose(g, h)
print("hcompose(g, h):", side.m, "inputs,", side.n, "outputs,",
      len(side.vertices), "vertices")

# stacked: g's single output feeds h's single input, the shared
# boundary disappears
stack = vcompose(g, h)
print("vcompose(g, h):", stack.m, "inputs,", stack.n, "outputs,",
      len(stack.edges), "edges")

# serialization is plain JSON; parse(serialize) is the identity
text = to_json_text(graph_to_dict(stack))
back, extras = graph_from_dict(graph_to_dict(stack))
print("round-trip equal:", back == stack)
print(text)
