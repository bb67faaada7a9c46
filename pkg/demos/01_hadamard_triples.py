"""Verify Hadamard triples and look at the digit mask.

A triple (R, B, L) is accepted when the N x N matrix
H = [exp(2 pi i <R^{-1} b, l>)] / sqrt(N) is unitary. Genuine triples sit at
machine-epsilon residuals; failures are O(1).
"""

import numpy as np

from speclab import mask_eval, triple, verify_hadamard
from speclab.triples import parseval_defect, tau_float_many

candidates = [
    (2, [0, 1], [0, 1]),    # the 2x2 Fourier matrix
    (2, [0, 3], [0, 1]),    # odd digit: exp(2 pi i 3/2) = -1 still works
    (4, [0, 2], [0, 1]),    # the classic scale-4 singular pair
    (4, [0, 2], [0, 3]),
    (2, [0, 1], [0, 2]),    # fails: rows of H coincide
]

print("unitarity residuals")
for r, b, l in candidates:
    t = triple(r, b, l, require=False)
    res = verify_hadamard(t)
    print(f"  (R={r}, B={b}, L={l}): "
          f"{'pass' if res.passed else 'FAIL'}  residual {res.residual:.2e}")

print("\ndigit mask m_B(x) = mean exp(2 pi i b x) for B = {0, 2}")
for x in (0.0, 0.25, 0.5, 1 / 3):
    print(f"  |m_B({x:.4f})| = {abs(mask_eval([0, 2], x)):.6f}")

print("\nthe squared mask values over the dual maps always sum to 1:")
t = triple(4, [0, 2], [0, 1])
rng = np.random.default_rng(0)
worst = max(parseval_defect(t, xi) for xi in rng.uniform(-5, 5, 50))
print(f"  max defect over 50 random points: {worst:.2e}")

print("\ndual maps tau_l(x) = (R^T)^{-1}(x + l) contract into a ball:")
from speclab import invariant_ball_radius
rad = invariant_ball_radius(4, [0, 1])
pts = rng.uniform(-rad, rad, size=(5, 1))
for ell in (0, 1):
    moved = tau_float_many(4, ell, pts)
    print(f"  l={ell}: max |tau_l(x)| = {np.abs(moved).max():.4f} "
          f"(radius {rad:.4f})")
