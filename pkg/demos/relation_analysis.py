"""Walk through the relation-analysis toolkit.

Builds uniformly-rainbow-freeness relations, tests permutation invariance,
searches for OR witnesses, and tabulates the kernel exponent formulas.
"""

from ccker import (
    eta,
    find_or_witness,
    is_permutation_invariant,
    make_nur,
    max_or_arity,
    nur_or_witness,
    nur_witness_items,
    r_clique,
)

# A rainbow-freeness relation: tuples of arity d*l over [q], read as d x l
# matrices, minus those whose columns are all rainbow with one common set.
rel = make_nur(2, 2, 3)
print(f"NUR(2,2,3): arity {rel.r} over [{rel.q}], {len(rel)} tuples")
print("permutation invariant:", is_permutation_invariant(rel))

# The largest arity at which an OR relation is definable governs how small a
# kernel the associated constrained-coloring problem can have.
k = max_or_arity(rel)
w = find_or_witness(rel, k)
print(f"max OR arity: {k}")
print(f"  witness positions J = {w.positions}")
print(f"  excluded tuple alpha = {w.alpha}")
print(f"  alternative values beta = {w.beta}")

# Explicit witness constructions per shape, checked against the relation.
for d, l, q in [(2, 2, 3), (3, 4, 3), (3, 4, 4), (3, 4, 5)]:
    items = nur_witness_items(d, l, q)
    arities = [nur_or_witness(d, l, q, item).k for item in items]
    print(f"NUR({d},{l},{q}): witness items {items} with arities {arities}")

# The optimal kernel-size exponent, by shape.
print("\nkernel exponents eta(d, l, q):")
for d, l, q in [(1, 2, 3), (2, 2, 3), (2, 2, 2), (3, 1, 3), (1, 2, 2)]:
    print(f"  eta({d},{l},{q}) = {eta(d, l, q)}")

# The clique-modulator exponent r(q, t) = max over l <= t of the per-shape
# exponent; the library cross-checks it against its closed form.
print("\nclique-modulator exponents r(q, t):")
for q in (3, 5, 7):
    row = [r_clique(q, t) for t in range(1, q + 1)]
    print(f"  q={q}: {row}")
