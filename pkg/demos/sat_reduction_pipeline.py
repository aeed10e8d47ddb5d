"""Drive a formula through the constrained-coloring reduction pipeline.

Width-3 satisfiability becomes constrained list coloring via the pair-gadget
construction, then plain constrained coloring via the palette clique; every
stage is certified by the brute-force oracles.
"""

from ccker import (
    decode_sat_coloring,
    make_nur,
    nur_or_witness,
    rclc_to_rcc,
    sat_to_rclc,
    solve_cnf,
    solve_rcc,
    solve_rclc,
)
from ccker.generate import gen_cnf

rel = make_nur(1, 3, 5)
witness = nur_or_witness(1, 3, 5, 1)
print(f"relation: arity {rel.r} over [{rel.q}]; witness arity {witness.k}")

for seed in (1, 2, 3, 4):
    formula = gen_cnf(n=5, k=3, m=9, seed=seed)
    sat = bool(solve_cnf(formula, "sat", limit=1))

    rclc, report = sat_to_rclc(formula, rel, witness)
    print(f"\nformula #{seed}: {len(formula.clauses)} clauses on {formula.n} vars")
    print(f"  -> list coloring on {report.output_vertices} vertices "
          f"({report.multiplicative} per variable + {report.additive})")
    gadgets = dict(report.gadget_counts)
    print(f"  gadgets: {gadgets['forbid_pair_distinct']} distinct-color, "
          f"{gadgets['forbid_pair_equal']} equal-color")

    stage1 = solve_rclc(rclc, limit=1)
    print(f"  SAT={sat}  list-coloring YES={stage1.is_yes}")
    assert stage1.is_yes == sat

    if stage1.is_yes:
        assignment = decode_sat_coloring(formula, witness, stage1.colorings[0])
        print(f"  decoded assignment: {''.join('T' if v else 'F' for v in assignment)}")

    rcc, report2 = rclc_to_rcc(rclc)
    stage2 = solve_rcc(rcc, limit=1)
    print(f"  -> palette instance on {report2.output_vertices} vertices, "
          f"YES={stage2.is_yes}")
    assert stage2.is_yes == sat
