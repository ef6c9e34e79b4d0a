"""
Twisting the round S^6
======================

psi = (Hess f + (c + f) g)^-1 restricted to tangent spaces. We scan the
eigenvalues of psi^-1 over the sphere, compare the curvature operator bounds
with the true 2-form spectrum, then look for nonintegrability certificates.
"""

# %%
import math

import numpy as np

from psitwist.analysis import BH_RATIO, bh_transition, eigen_scan, nonintegrability_certificate

c_values = [2.0, 5.0, 10.0, 12.0, 16.0, 17.5, 18.0, 20.0]
rows = eigen_scan("x1*x2", c_values, samples=20_000, seed=0)

print(f"{'c':>6} {'F_min':>9} {'F_max':>9} {'bound ratio':>12} {'flag':>5} {'pair ratio':>11} {'flag':>5}")
for r in rows:
    print(
        f"{r.c:6.1f} {r.F_min:9.5f} {r.F_max:9.5f} {r.lambda_max / r.lambda_min:12.5f} {r.bh_flag!s:>5}"
        f" {r.pair_lambda_max / r.pair_lambda_min:11.5f} {r.bh_flag_pair_spectrum!s:>5}"
    )
print("flag transition (squared bounds):", bh_transition(rows))

# %%
# at p = (1/sqrt2, +-1/sqrt2, 0, ...) the pair spectrum reaches its extremes,
# so the pair-spectrum ratio drops below the threshold much earlier
ratio = lambda c: (c + 1.5) * (c + 0.5) / ((c - 1.5) * (c - 0.5))  # noqa: E731
c_star = 6 + math.sqrt(141) / 2
print(f"pair-spectrum threshold c* = {c_star:.5f}, ratio there = {ratio(c_star):.6f} (target {BH_RATIO})")

# %%
for f, c in [("x1*x2", 5.0), ("x1*x2", -5.0), ("x1", 3.0), ("x1^2*x3", 10.0)]:
    cert = nonintegrability_certificate(f, c, budget=1000)
    d = cert.to_dict()
    print(f"{f:>8} c={c:5.1f}  {d['status']:>12}  residual={d.get('residual', d.get('best_residual')):.4f}")

# %%
# a scalar psi keeps the structure strictly nearly Kaehler, hence never integrable
print(nonintegrability_certificate("0", 1.0, budget=10).to_dict()["residual"])
print("p =", np.round(nonintegrability_certificate("0", 1.0, budget=10).point, 4))
