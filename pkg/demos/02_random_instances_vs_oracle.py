"""Compare the linear-time solver against exhaustive search.

Generates a batch of small random Halin graphs, solves each for k = 1, 2, 3
with both methods and prints a one-line summary per instance.  Any
disagreement would be printed with a marker; none is expected.
"""
import time

from halintsp import brute_solve, gen_random_halin, solve

mismatches = 0
for seed in range(12):
    inst = gen_random_halin(1 + seed % 4, 3, seed=seed)
    row = []
    for k in (1, 2, 3):
        t0 = time.perf_counter()
        dp = solve(inst.H, inst.costs, k).value.external
        t_dp = (time.perf_counter() - t0) * 1000
        bf = brute_solve(inst.H, inst.costs, f"TSP{k}").value.external
        mark = "" if dp == bf else "  <-- MISMATCH"
        mismatches += dp != bf
        row.append(f"k={k}: {dp:4d} ({t_dp:.2f} ms){mark}")
    print(f"seed {seed:2d}, n={inst.n:2d} | " + " | ".join(row))
print(f"\n{mismatches} mismatches")
