"""Shrink coloring instances parameterized by a modulator to disjoint cliques.

Extracts the rainbow-free constraint system that governs extendability of
modulator colorings, kernelizes it per block, rebuilds the graph, and checks
colorability on both sides by brute force.
"""

from ccker import (
    cliquekv_colorable,
    extend_to_cliques,
    extract_clique_constraints,
    kernelize_cliquekv,
    r_clique,
    solve_urfc,
)
from ccker.generate import gen_cliquekv

q, t = 3, 2
inst = gen_cliquekv(k=5, t=t, n_cliques=4, seed=8)
print(f"instance: {inst.graph.n} vertices, modulator k={inst.k}, "
      f"{len(inst.cliques)} residual cliques (sizes "
      f"{[len(c) for c in inst.cliques]})")

# The constraint system on the modulator: one block per clique size, holding
# (q-l+1)-subsets of the neighborhoods of every l-clique.
system, report = extract_clique_constraints(inst, q, t)
for block, (name, count) in zip(system.blocks, report.gadget_counts):
    print(f"  block (d={block.d}, l={block.l}): {count} tuples")

# A proper modulator coloring extends to the cliques exactly when none of
# those tuples is uniformly rainbow under it.
accepted = set(solve_urfc(system).colorings)
example = next(iter(sorted(accepted)), None)
if example is not None:
    coloring = dict(zip(inst.modulator, example))
    full = extend_to_cliques(inst, q, coloring)
    print(f"\nextending modulator coloring {example}: "
          f"{'succeeded' if full else 'failed'}")

out, kreport = kernelize_cliquekv(inst, q, t)
print(f"\nkernel: {inst.graph.n} -> {out.graph.n} vertices "
      f"(exponent r({q},{t}) = {r_clique(q, t)})")
print(f"  surviving tuples: {dict(kreport.gadget_counts)['surviving_tuples']}")

a = cliquekv_colorable(inst, q)
b = cliquekv_colorable(out, q)
print(f"  {q}-colorable: before={a} after={b}")
assert a == b
