"""(det S_4)^2 / chi_68 along the Jacobian locus.

The ratio takes the same value at unrelated projected points; at a
hyperelliptic point chi_68 vanishes and the entry is flagged instead.
"""
from schottky import hyperelliptic as hyp
from schottky.locus import klein_survey

curve = hyp.HyperellipticCurve([k / 3 for k in range(10)])
survey = klein_survey([1, 2, 3, 4, 5], extra_points=[hyp.period_matrix(curve).tau])
for e in survey.entries:
    label = f"seed {e['seed']}" if e["seed"] is not None else "hyperelliptic"
    shown = f"{e['ratio'].real:.10e}" if e["status"] == "ok" else e["status"]
    print(f"{label:>14}: {shown}")
print(f"median {survey.median.real:.10e}, max relative deviation {survey.max_deviation:.1e}")
