"""
A two-node boundary problem, end to end
=======================================

Two boundary nodes t = 1, -1 with target values 1, -1 and derivative
bounds 1, 0. The Pick matrix is indefinite, so solutions live in the
generalized Schur class with one pole in the disk.
"""

import numpy as np

from boundary_pick import (
    InterpolationData,
    SchurParameter,
    apply_parameter,
    build_pick_system,
    build_theta,
    verify_interpolation,
)
from boundary_pick.fixtures import example1_parameter, minus_one_parameter

np.set_printoptions(precision=4, suppress=True)

data = InterpolationData(t=[1, -1], w=[1, -1], gamma=[1, 0])
sys = build_pick_system(data)
print("Pick matrix\n", sys.P)
print("inverse\n", sys.P_inv)
print("negative squares:", sys.kappa)

# Build the coefficient matrix with the normalization point mu = i.
th = build_theta(sys, mu=1j)
print("tilde rows\n", np.vstack([th.tilde_C, th.tilde_E]))
print("eta:", th.eta)
print("thresholds:", [th.threshold(i) for i in range(th.n)])

# %%
# Every Schur parameter gives a candidate. The report says which boundary
# conditions hold and how many poles the candidate has.

for name, e in [("zero", SchurParameter.constant(0.0)),
                ("minus one", minus_one_parameter()),
                ("example 1", example1_parameter())]:
    w = apply_parameter(th, e)
    rep = verify_interpolation(w, sys)
    print(f"\n{name}: w = ({w.rational.num.coef}) / ({w.rational.den.coef})")
    for r in rep.nodes:
        print(f"  node {r.index}: {r.condition.value}, w = {r.observed.value:.4f}, "
              f"d = {r.observed.d_limit:.4g}, equality holds: {r.satisfied_equality}")
    print("  poles in disk:", rep.neg_squares, " membership:", rep.membership)
