"""Newton projection of random genus-4 points onto F_4 = 0."""
import numpy as np

from schottky.core import random_siegel_point
from schottky.locus import project_to_schottky

for seed in (1, 2, 3):
    tau0 = random_siegel_point(seed, 4, 0.5, 0.9)
    lp = project_to_schottky(tau0)
    moved = np.abs(lp.tau.Z - tau0.Z).max()
    print(f"seed {seed}: {lp.iterations:2d} steps, |F_4|/scale = {lp.residual:.1e}, moved {moved:.3f}")
    print("   residual history:", " ".join(f"{e['residual']:.0e}" for e in lp.log))
