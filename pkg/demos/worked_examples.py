"""Worked examples: from a monomial to its loaded tree, forest and value.

Run with ``python demos/worked_examples.py``.
"""

from chowdeg import (
    Cut,
    forest_value,
    integral_value,
    linear_reduction_step,
    monomial_to_tree,
    oracle_value,
    parse_monomial,
    redundancy_forest,
    weighted_tree,
)

# A square of a boundary divisor times a disjoint one on M_{0,6}.
m = parse_monomial("d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}")
t = monomial_to_tree(m)
print("monomial      ", m)
print("loaded tree   ", t)
wt = weighted_tree(t)
print("vertex weights", wt.vertex_weights, " edge weights", wt.edge_weights)

# The forest keeps only the nonzero weights; its value is the magnitude.
f = redundancy_forest(t)
print("forest        ", f.weights, f.edges, "->", forest_value(f))
print("integral      ", integral_value(m))

# The slow way: one application of the linear relation already lands on
# clever monomials, each worth +1.
step = linear_reduction_step(m, Cut.of(m.label_set, [1, 2]), (3, 5, 1, 2))
print("one reduction ", step)
print("oracle        ", oracle_value(m))

# Two terms survive here, and both reduce to -1 again: the value is +2.
m2 = parse_monomial("d{1,2,3|4,5,6,7}^3 * d{1,2,3,4,5|6,7}")
print()
print(linear_reduction_step(m2, Cut.of(m2.label_set, [1, 2, 3]), (1, 2, 4, 6)))
print("forest", integral_value(m2).value, " oracle", oracle_value(m2))

# Crossing cuts multiply to zero before any tree is built.
print()
print(integral_value(parse_monomial("d{1,2|3,4,5} * d{1,4|2,3,5}")))
