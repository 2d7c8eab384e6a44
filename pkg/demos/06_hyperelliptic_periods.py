"""Period matrices of real hyperelliptic curves."""
import numpy as np

from schottky import hyperelliptic as hyp
from schottky.forms import snapshot

res = hyp.period_matrix(hyp.HyperellipticCurve([0, 1, 2, 3]))
print("genus 1: tau =", res.tau.Z[0, 0], " lambda =", hyp.modular_lambda(res.tau).real, " cross-ratio = 0.25")

res = hyp.period_matrix(hyp.HyperellipticCurve([k / 3 for k in range(10)]))
snap = snapshot(res.tau)
count, chars = hyp.vanishing_thetanulls(res.tau)
print("\ngenus 4: Im tau eigenvalues", np.round(res.tau.im_eigenvalues(), 4))
print(f"|F_4|/scale = {snap.residual:.1e}, |S_4|/scale = {np.abs(snap.S).max() / snap.scale:.1e}")
print(f"{count} vanishing even thetanulls:", " ".join(map(str, chars)))
