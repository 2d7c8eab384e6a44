"""Symmetric powers: dimensions, the determinant identity and rho^(n)."""
from math import comb

import numpy as np

from schottky.core import random_siegel_point, random_symplectic, symplectic_action
from schottky.multilinear import check_wedge_det, dims, mumford_weights, rho_action

for g in (2, 3, 4, 5):
    print(f"g={g}: (M_2, N_2, K_2) = {dims(g, 2)}, (c_2, d_2) = {mumford_weights(g, 2)}")

A = np.random.default_rng(0).standard_normal((4, 4))
for n in (1, 2, 3):
    lhs, rhs, r = check_wedge_det(A, n)
    print(f"n={n}: det Sym^n A = {lhs:.6e}, det(A)^{comb(3 + n, n - 1)} = {rhs:.6e}")

tau = random_siegel_point(1, 4)
g1, g2 = random_symplectic(1, 4, 4), random_symplectic(2, 4, 4)
t1, _ = symplectic_action(g1, tau)
err = np.abs(rho_action(g2 @ g1, tau, 2) - rho_action(g2, t1, 2) @ rho_action(g1, tau, 2)).max()
print("cocycle defect of rho^(2):", err)
