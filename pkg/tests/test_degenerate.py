import numpy as np
import pytest

from boundary_pick import (
    InterpolationData,
    NotSingular,
    build_pick_system,
    classical_singular_solution,
    solve_degenerate,
    verify_degenerate,
)
from boundary_pick.degenerate import select_pivot

import corpus

SAMPLE = 0.3 * np.exp(1j * np.arange(16))


def test_rank_one_fixture_gives_identity():
    sys_ = build_pick_system(InterpolationData([1, -1], [1, -1], [1, 1]))
    np.testing.assert_allclose(sys_.P, np.ones((2, 2)), atol=1e-15)
    sol = solve_degenerate(sys_)
    r = sol.w.rational
    assert r.num.degree == 1 and r.den.degree == 0
    np.testing.assert_allclose(r.num.coef / r.den.coef[0], [0, 1], atol=1e-10)
    assert (sol.b1.degree, sol.b2.degree, sol.rank_P) == (1, 0, 1)
    assert verify_degenerate(sol, sys_).passed


def test_rank_zero():
    # equal values and zero bounds give the zero matrix and a constant solution
    sys_ = build_pick_system(InterpolationData([1j, -1], [-1, -1], [0, 0]))
    assert sys_.rank == 0
    sol = solve_degenerate(sys_)
    assert sol.w(0.4) == pytest.approx(-1)
    assert verify_degenerate(sol, sys_).passed


def test_requires_singular(worked):
    sys_, _ = worked
    with pytest.raises(NotSingular):
        solve_degenerate(sys_)


@pytest.fixture(scope="module")
def fixtures():
    return corpus.singular_corpus()


def test_constructed_fixtures(fixtures):
    for sys_, w, (d1, d2) in fixtures:
        assert sys_.rank == d1 + d2
        sol = solve_degenerate(sys_)
        rep = verify_degenerate(sol, sys_)
        assert rep.passed, rep.details
        assert sol.b1.degree + sol.b2.degree == sys_.rank
        assert sol.kappa_prime == sol.b2.degree == sys_.kappa
        np.testing.assert_allclose(sol.w(SAMPLE), w(SAMPLE), atol=1e-9)
        block = list(sol.pivot[: sys_.rank])
        assert sorted(sol.pivot) == list(range(sys_.n))
        assert np.linalg.matrix_rank(sys_.P[np.ix_(block, block)], tol=1e-9) == sys_.rank


def test_classical_formula_agrees(fixtures):
    semidefinite = [(s, w) for s, w, _ in fixtures if s.kappa == 0]
    assert semidefinite
    for sys_, w in semidefinite:
        np.testing.assert_allclose(classical_singular_solution(sys_)(SAMPLE),
                                   solve_degenerate(sys_).w(SAMPLE), atol=1e-9)


def test_pivot_invariant_to_node_order(fixtures):
    """Reordering the nodes gives the same function."""
    rng = np.random.default_rng(2)
    for sys_, w, _ in fixtures[:8]:
        perm = rng.permutation(sys_.n)
        other = build_pick_system(sys_.data.permuted(perm))
        assert len(select_pivot(other)) == sys_.rank
        np.testing.assert_allclose(solve_degenerate(other).w(SAMPLE), w(SAMPLE), atol=1e-9)
