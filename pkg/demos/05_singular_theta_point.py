"""A singular point of the theta divisor and the proportionality S_4 ~ sigma."""
import numpy as np

from schottky.forms import s4_matrix
from schottky.locus import (find_theta_singularity, minor_residual, project_seed, rank_profile, sigma_matrix,
                            verify_proportionality)

a, b = project_seed(3), project_seed(5)
sa, sb = find_theta_singularity(a.tau), find_theta_singularity(b.tau)
print("e =", np.round(sa.e, 6))
print(f"residual |(theta, grad theta)| / scale = {sa.residual:.1e} after {sa.starts_tried} starts")

S = s4_matrix(a.tau)
rep = verify_proportionality(S, sigma_matrix(sa.e, a.tau))
print(f"matched pair:    minor residual {rep.residual:.1e}, lambda = {rep.lam:.4e}")
print(f"mismatched pair: minor residual {minor_residual(S.Q, sigma_matrix(sb.e, b.tau).Q):.2f}")
print("singular values of S_4:", rank_profile(S).singular_values)
