"""Completeness diagnostics: level matrices, Q sweeps, transfer operator.

Three views of the same question (is this frequency set a spectrum?):
the per-level minimum eigenvalue of F*F, the windowed completeness sum Q,
and the transfer-operator fixed-point residual.
"""

import numpy as np

from speclab import (CycleSpectrumGenerator, LatticeGenerator, build_fn,
                     check_spectrum, find_extreme_cycles, make_q_evaluator,
                     orthogonality_check, self_affine, strichartz_report,
                     tail_factor_scan, transfer_apply, triple, uniform_grid)

qc_t = triple(4, [0, 2], [0, 1])
qc = self_affine(qc_t)
leb = self_affine(triple(2, [0, 1], [0, 1]))

print("per-level criterion (eigenvalues of F*F; floors stay positive):")
rep = strichartz_report(qc, 6)
for row in rep["levels"]:
    print(f"  n={row['n']}: sigma_min={row['sigma_min']:.6f}, "
          f"min tail modulus={row['min_tail_modulus']:.6f}")
print(f"  {rep['verdict']}")

print("\nthe flat system drives the same floor to zero (the criterion is")
print("sufficient, not necessary: the integer lattice is still a spectrum):")
for row in strichartz_report(leb, 6)["levels"]:
    print(f"  n={row['n']}: sigma_min={row['sigma_min']:.6f}")

print(f"\nsingle-factor floor scan: {tail_factor_scan(qc, 4):.6f} "
      f"(cos(pi/6) = {np.cos(np.pi/6):.6f})")

gen = CycleSpectrumGenerator(qc_t, find_extreme_cycles(qc_t, 6))
sweep = check_spectrum(qc, gen, 64, window=8)
print(f"\nQ sweep for the cycle spectrum at window level 8: "
      f"min={sweep.min_q:.6f}, max={sweep.max_q:.6f}, "
      f"pass={sweep.passed}")
print(f"pairwise orthogonality at level 5: "
      f"max |mu^(diff)| = {orthogonality_check(qc, gen, 5):.2e}")

grid = uniform_grid(64, 1)
q_fn = make_q_evaluator(qc, gen, window=8)
res = np.abs(transfer_apply(qc_t, q_fn, grid) - q_fn(grid)).max()
ones = np.abs(transfer_apply(qc_t, lambda p: np.ones(len(p)), grid) - 1).max()
print(f"\ntransfer operator: |R1 - 1| = {ones:.2e}, "
      f"|RQ - Q| = {res:.2e} on a 64-point grid")

print("\nlattice window comparison for the flat measure (Parseval):")
for w in (25, 100, 400):
    rep = check_spectrum(leb, LatticeGenerator([[1]]), np.arange(8) / 8,
                         window=w)
    print(f"  radius {w}: min Q = {rep.min_q:.6f}")
