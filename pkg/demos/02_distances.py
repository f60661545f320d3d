"""
Bisimilarity and the behavioural distance
=========================================

Two charts are either bisimilar (indistinguishable forever) or they
separate at some finite depth n, and then their distance is exactly
2^-n: disagreements further in the future matter less, halving per
step.  Everything below is exact rational arithmetic.
"""

from chartdist import (
    bd_stratified, bisimilar, disjoint_union, expand, kleene_solve,
    parse_expr, stratified_level,
)

# unfolding a loop twice changes nothing observable
c1 = expand(parse_expr("mu v1.a.v1"))
c2 = expand(parse_expr("mu v1.a.a.v1"))
ok, witness = bisimilar(c1, c2)
print("mu v1.a.v1 vs mu v1.a.a.v1:", "bisimilar" if ok else "distinct")
print("witness pairs:", sorted(witness))
print("distance:", bd_stratified(c1, c2))
print()

# the worked example: the two charts agree for two steps and then one
# of them can refuse what the other must offer
left = expand(parse_expr("a.(a.0 + b.mu v1.a.v1)+b.mu v1.a.v1"))
right = expand(parse_expr("mu v2.(a.v2 + b.mu v1.a.a.v1)"))
print("separating level:", stratified_level(left, right))
print("distance:", bd_stratified(left, right))
print()

# the same value arrives as the least fixpoint of a Hausdorff-lifted
# operator, iterated on the bisimilarity quotient from everywhere-1
union, s1, s2 = disjoint_union(left, right)
res = kleene_solve(union)
print("fixpoint value:", res.table.get(s1, s2))
print("iterations to stabilise:", res.iterations)
for k, table in enumerate(res.quotient_tables):
    q1, q2 = res.class_of[s1], res.class_of[s2]
    print(f"  iterate {k}: start pair at {table.get(q1, q2)}")
