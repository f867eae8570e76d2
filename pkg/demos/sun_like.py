"""Sun-like trees and the multinomial identities behind them."""

from itertools import product
from math import factorial, prod

from chowdeg import integral_value, tree_to_monomial
from chowdeg.generators import sun_like_tree
from chowdeg.identities import IdentityInstance, check_identity, count_fiber, f_formula

print("weights          value      (-1)^k k!/prod w!")
for ws in [(1,), (1, 1), (2, 1), (2, 2, 1), (3, 2, 2), (4, 4, 4, 4)]:
    k = sum(ws)
    closed = (-1) ** k * factorial(k) // prod(factorial(w) for w in ws)
    value = integral_value(tree_to_monomial(sun_like_tree(ws))).value
    print(f"{str(ws):16} {value:>10} {closed:>10}")

# The closed form is equivalent to a sum over bipartitions of the parts;
# each variant is checked by brute force over a small grid.
print()
for variant in (1, 2, 3):
    grid = [m for r in range(variant, 5) for m in product(range(1, 4), repeat=r)]
    ok = sum(check_identity(variant, m).holds for m in grid)
    print(f"variant {variant}: {ok}/{len(grid)} instances hold")

# Counting the configurations that reach every part.
inst = IdentityInstance([3, 2, 2])
print()
print("full fiber of (3,2,2):", count_fiber(inst), " closed form:", f_formula(inst))
