"""
Singular Pick matrices
======================

When P is singular the problem has a unique solution, a ratio of two
Blaschke products whose degrees add up to rank P. Here we read boundary
data off a known ratio and recover it.
"""

import numpy as np

from boundary_pick import (
    BlaschkeProduct,
    InterpolationData,
    build_pick_system,
    classical_singular_solution,
    solve_degenerate,
    verify_degenerate,
)
from boundary_pick.params import boundary_data_rational

# The smallest case: equal data at two nodes forces w(z) = z.
sys = build_pick_system(InterpolationData([1, -1], [1, -1], [1, 1]))
sol = solve_degenerate(sys)
print("P =\n", sys.P.real, "\nrank", sys.rank)
print("w numerator", np.round(sol.w.rational.num.coef, 12), "denominator", np.round(sol.w.rational.den.coef, 12))

# %%
# A degree-two Blaschke product sampled at five boundary nodes.

b = BlaschkeProduct([0.3 + 0.2j, -0.4j]).as_rational()
t = np.exp(1j * np.array([0.2, 1.4, 2.5, 3.9, 5.1]))
bds = [boundary_data_rational(b, ti) for ti in t]
sys = build_pick_system(InterpolationData(t, [x.value for x in bds], [x.d_limit for x in bds]))
sol = solve_degenerate(sys)
print("\nrank", sys.rank, "kappa", sys.kappa, "pivot", sol.pivot)
print("degrees", sol.b1.degree, sol.b2.degree)
z = np.array([0.1, 0.5j, -0.3 + 0.3j])
print("max |w - b| on samples:", np.max(np.abs(sol.w(z) - b(z))))
print("classical formula agrees:", np.max(np.abs(classical_singular_solution(sys)(z) - b(z))))
print(verify_degenerate(sol, sys))
