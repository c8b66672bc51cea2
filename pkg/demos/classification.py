"""
How the parameter's boundary behaviour decides the outcome
==========================================================

At each node the parameter is sorted into one of six cases by comparing
its boundary value with eta_i and its angular derivative with the
threshold tau_i. Cases C4 to C6 each cost one pole, and the predicted
derivative of the interpolant follows a closed form in C3 and C4.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
import corpus  # noqa: E402

from boundary_pick import apply_parameter, predict_node_behavior  # noqa: E402
from boundary_pick.params import classify_all  # noqa: E402

sys_, th = corpus.corpus(count=3)[2]
print("nodes:", np.round(sys_.data.t, 4))
print("kappa:", sys_.kappa)
print("thresholds:", np.round([th.threshold(i) for i in range(th.n)], 4))

# %%
# Sweep the angular derivative of a parameter that meets eta at the node
# with the largest threshold (a negative threshold leaves no room for C4).

i = int(np.argmax([th.threshold(k) for k in range(th.n)]))
tau = th.threshold(i)
for d in [0.0, 0.5 * tau, tau, tau + 0.3, tau + 2.0]:
    if d < 0:
        continue
    e = corpus.node_parameter(th, i, d)
    conds = classify_all(e, th)
    ell = sum(c.lowers_index for c in conds)
    w = apply_parameter(th, e)
    pred = predict_node_behavior(conds[i], sys_, th, i, d)
    got = w.boundary(th.nodes[i])
    predicted = "none" if pred.d_value is None else f"{pred.d_value:.6g}"
    print(f"d_E = {d:7.4f}: {conds[i].value}, poles {w.neg_squares} = {sys_.kappa} - {ell}, "
          f"predicted d_w {predicted}, observed w = {got.value:.4f}, d_w = {got.d_limit:.6g}")
