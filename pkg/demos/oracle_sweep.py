"""Cross-check the forest algorithm against linear reduction on every small case.

The oracle is exponential, so this stays at n <= 7 plus a random sample at n = 8.
"""

import random
import time
from collections import Counter

from chowdeg import integral_value, oracle_value, tree_to_monomial
from chowdeg.generators import all_proper_tree_monomials, random_proper_tree

for n in (4, 5, 6, 7):
    t0 = time.perf_counter()
    values = Counter()
    bad = 0
    for m in all_proper_tree_monomials(n):
        v = integral_value(m).value
        values[v] += 1
        bad += v != oracle_value(m)
    hist = ", ".join(f"{v}:{c}" for v, c in sorted(values.items()))
    print(f"n={n}: {sum(values.values())} monomials, {bad} disagreements, {time.perf_counter() - t0:.2f}s")
    print(f"      value histogram {hist}")

rng = random.Random(0)
bad = 0
for _ in range(200):
    m = tree_to_monomial(random_proper_tree(rng, 8))
    bad += integral_value(m).value != oracle_value(m)
print(f"n=8: 200 random trees, {bad} disagreements")
