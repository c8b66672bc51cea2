"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from boundary_pick import (  # noqa: E402
    InterpolationData,
    NodeCondition,
    SchurParameter,
    apply_parameter,
    boundary_data_radial,
    build_pick_system,
    build_theta,
    classical_singular_solution,
    factorize_theta,
    fmi_kernel_check,
    predict_node_behavior,
    solve_degenerate,
    theta_eval,
    theta_inverse_eval,
    verify_degenerate,
    verify_stein,
)
from boundary_pick.fixtures import (  # noqa: E402
    EXPECTED,
    WORKED_MU,
    example1_parameter,
    example2_parameter,
    example3_parameter,
    minus_one_parameter,
    worked_example_data,
)
from boundary_pick.params import classify_all  # noqa: E402
from boundary_pick.theta import (  # noqa: E402
    inverse_stein_residual,
    j_unitarity_residual,
    kernel_inverse_side,
    kernel_inverse_side_direct,
    kernel_K_theta,
    kernel_K_theta_direct,
    kernel_tilde_side,
    kernel_tilde_side_direct,
)

import corpus  # noqa: E402

SAMPLE = 0.3 * np.exp(1j * np.arange(16))


def _err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))))


def _monic(r):
    lead = r.den.coef[-1]
    return r.num.coef / lead, r.den.coef / lead


# ---------------------------------------------------------------- criteria


def criterion_1():
    """Worked example numbers; returns per-item errors and the runtime."""
    start = time.perf_counter()
    sys_ = build_pick_system(worked_example_data())
    th = build_theta(sys_, WORKED_MU)
    tilde = np.vstack([th.tilde_C, th.tilde_E])
    items = {
        "P": _err(sys_.P, EXPECTED["P"]),
        "P_inv": _err(sys_.P_inv, EXPECTED["P_inv"]),
        "kappa": 0.0 if sys_.kappa == EXPECTED["kappa"] else 1.0,
        "eta": _err(th.eta, EXPECTED["eta"]),
        "p_over_e2": _err(sys_.p_tilde_diag / np.abs(th.tilde_E) ** 2, EXPECTED["p_over_e2"]),
        "tilde_printed": _err(tilde, EXPECTED["tilde_printed"]),
    }
    elapsed = time.perf_counter() - start
    return items, elapsed, tilde


def criterion_2():
    sys_, th = _worked()
    errs = {}
    w = apply_parameter(th, minus_one_parameter()).rational
    num, den = _monic(w)
    errs["minus_one"] = max(_err(num, [-1]), _err(den, [1])) if w.is_constant else math.inf

    w1 = apply_parameter(th, example1_parameter())
    num, den = _monic(w1.rational)
    # (z - i) / (i z + 1 - 2i) with a monic denominator
    lead = EXPECTED["w_example1_den"][-1]
    exp_num = np.array(EXPECTED["w_example1_num"]) / lead
    exp_den = np.array(EXPECTED["w_example1_den"]) / lead
    errs["example1_coef"] = max(_err(num, exp_num), _err(den, exp_den)) if len(num) == 2 else math.inf
    b1, b2 = w1.boundary(1.0), w1.boundary(-1.0)
    errs["example1_w(1)"] = abs(b1.value - 1)
    errs["example1_d(1)"] = abs(b1.d_limit - 1)
    errs["example1_w(-1)"] = abs(b2.value - EXPECTED["w_example1_at_minus1"])
    radial = boundary_data_radial(w1, -1.0)
    errs["example1_d(-1)_radial_inf"] = 0.0 if radial.d_limit == math.inf else math.inf
    errs["example1_d(-1)_exact_inf"] = 0.0 if b2.d_limit == math.inf else math.inf

    w2 = apply_parameter(th, example2_parameter())
    num, den = _monic(w2.rational)
    errs["example2_coef"] = max(_err(num, [1]), _err(den, [1])) if w2.rational.is_constant else math.inf
    for t0 in (1.0, -1.0):
        bd = w2.boundary(t0)
        errs[f"example2_w({t0:+.0f})"] = abs(bd.value - 1)
        errs[f"example2_d({t0:+.0f})"] = abs(bd.d_limit)
    ok = all(v <= 1e-9 for v in errs.values())
    return ok, errs


def criterion_3(problems):
    rng = np.random.default_rng(33)
    worst = dict.fromkeys(["stein", "inverse_stein", "theta_mu", "theta_inv", "j_unitary",
                           "kernels", "e_c_moduli", "eta_unimodular", "offdiag"], 0.0)
    nonzero = True
    start = time.perf_counter()
    for sys_, th in problems:
        worst["stein"] = max(worst["stein"], verify_stein(sys_))
        worst["inverse_stein"] = max(worst["inverse_stein"], inverse_stein_residual(th, relative=True))
        worst["theta_mu"] = max(worst["theta_mu"], _err(theta_eval(th, th.mu), np.eye(2)))
        pts = corpus.clear_circle_points(th.nodes, 64)
        worst["j_unitary"] = max(worst["j_unitary"], j_unitarity_residual(th, pts, relative=True))
        for z, zeta in zip(corpus.disk_points(rng, 16), corpus.disk_points(rng, 16)):
            worst["theta_inv"] = max(worst["theta_inv"],
                                     _err(theta_eval(th, z) @ theta_inverse_eval(th, z), np.eye(2)))
            k = max(_err(kernel_K_theta(th, z, zeta), kernel_K_theta_direct(th, z, zeta)),
                    _err(kernel_inverse_side(th, z, zeta), kernel_inverse_side_direct(th, z, zeta)),
                    _err(kernel_tilde_side(th, z, zeta), kernel_tilde_side_direct(th, z, zeta)))
            worst["kernels"] = max(worst["kernels"], k)
        e, c, t = th.tilde_E, th.tilde_C, sys_.data.t
        worst["e_c_moduli"] = max(worst["e_c_moduli"], _err(np.abs(e), np.abs(c)))
        nonzero &= bool(np.min(np.abs(e)) > 1e-8)
        worst["eta_unimodular"] = max(worst["eta_unimodular"], float(np.max(np.abs(np.abs(th.eta) - 1))))
        for i in range(sys_.n):
            for j in range(sys_.n):
                if i != j:
                    expect = (np.conj(e[i]) * e[j] - np.conj(c[i]) * c[j]) / (1 - t[i] * np.conj(t[j]))
                    worst["offdiag"] = max(worst["offdiag"], abs(sys_.P_inv[i, j] - expect))
    elapsed = time.perf_counter() - start
    limits = {"stein": 1e-12, "inverse_stein": 1e-12}
    ok = nonzero and all(v < limits.get(k, 1e-10) for k, v in worst.items()) and elapsed < 30
    return ok, worst, elapsed


def criterion_4(problems):
    rng = np.random.default_rng(44)
    worst_abs, worst_rel, sig_ok, splits = 0.0, 0.0, True, 0
    for sys_, th in problems:
        zs = corpus.disk_points(rng, 16)
        for split in range(sys_.n + 1):
            f = factorize_theta(th, split)
            for z in zs:
                ref = theta_eval(th, z)
                e = _err(f.product(z), ref)
                worst_abs = max(worst_abs, e)
                # same scaling as the J-unitarity check: |Theta| reaches O(10) near mu
                worst_rel = max(worst_rel, e / max(1.0, float(np.max(np.abs(ref)))))
            sig_ok &= f.sig_P22_tilde.n_neg == sys_.kappa - f.sig_P11.n_neg
            splits += 1
    return worst_rel <= 1e-10 and sig_ok, worst_abs, worst_rel, splits


def criterion_5(problems):
    rng = np.random.default_rng(55)
    count, mismatches, classes = 0, [], {}
    for k, (sys_, th) in enumerate(problems):
        for e in corpus.parameter_family(th, rng):
            conds = classify_all(e, th)
            ell = sum(c.lowers_index for c in conds)
            w = apply_parameter(th, e)
            count += 1
            for c in conds:
                classes[c.value] = classes.get(c.value, 0) + 1
            if w.neg_squares != sys_.kappa - ell:
                mismatches.append((k, e.name, w.neg_squares, sys_.kappa, ell))
    # opaque parameters: the kernel lower bound never exceeds kappa
    sys_w, th_w = _worked()
    opaque = [example3_parameter()]
    for sys_, th in problems[:10]:
        r = corpus.random_rational_parameter(rng, 1)
        opaque_e = SchurParameter.opaque(lambda z, r=r: complex(r(z)))
        lb = apply_parameter(th, opaque_e).neg_squares_lower
        if lb > sys_.kappa:
            mismatches.append(("opaque", lb, sys_.kappa))
    for e in opaque:
        if apply_parameter(th_w, e).neg_squares_lower > sys_w.kappa:
            mismatches.append(("example3",))
    return count >= 50 and not mismatches, count, mismatches, classes


def criterion_6(problems):
    worst_exact, worst_ratio, worst_bar, n = 0.0, 0.0, 0.0, 0
    for sys_, th in problems:
        for i in range(sys_.n):
            tau = th.threshold(i)
            for d in [max(tau, 0.0) + 0.7] + ([0.5 * tau] if tau > 0.05 else []):
                e = corpus.node_parameter(th, i, d)
                cond = classify_all(e, th)[i]
                if cond not in (NodeCondition.C3, NodeCondition.C4):
                    return False, ("unexpected class", cond), 0, 0, n
                pred = predict_node_behavior(cond, sys_, th, i, e.boundary(th.nodes[i]).d_limit)
                w = apply_parameter(th, e)
                exact = w.boundary(th.nodes[i]).d_limit
                worst_exact = max(worst_exact, abs(exact - pred.d_value) / max(1.0, abs(pred.d_value)))
                rad = boundary_data_radial(w, th.nodes[i])
                if rad.d_limit is None or not math.isfinite(rad.d_limit):
                    return False, ("radial estimate missing", rad), 0, 0, n
                worst_ratio = max(worst_ratio, abs(rad.d_limit - exact) / rad.d_err)
                worst_bar = max(worst_bar, rad.d_err)
                n += 1
    ok = worst_exact <= 1e-9 and worst_ratio <= 1.0 and worst_bar <= 1e-4
    return ok, worst_exact, worst_ratio, worst_bar, n


def criterion_7():
    sys1 = build_pick_system(InterpolationData([1, -1], [1, -1], [1, 1]))
    sol = solve_degenerate(sys1)
    num, den = _monic(sol.w.rational)
    z_err = max(_err(num, [0, 1]), _err(den, [1])) if len(num) == 2 else math.inf
    fixtures = corpus.singular_corpus(20)
    degree_ok, verify_ok, func_err, classical_err, n_psd = True, True, 0.0, 0.0, 0
    for sys_, w, _ in fixtures:
        s = solve_degenerate(sys_)
        degree_ok &= s.b1.degree + s.b2.degree == sys_.rank
        verify_ok &= verify_degenerate(s, sys_).passed
        func_err = max(func_err, _err(s.w(SAMPLE), w(SAMPLE)))
        if sys_.kappa == 0:
            n_psd += 1
            classical_err = max(classical_err, _err(classical_singular_solution(sys_)(SAMPLE), s.w(SAMPLE)))
    ok = z_err <= 1e-10 and degree_ok and verify_ok and classical_err <= 1e-9 and n_psd > 0
    return ok, z_err, len(fixtures), degree_ok, verify_ok, func_err, classical_err, n_psd


def criterion_8(problems):
    rng = np.random.default_rng(88)
    n_solutions, bad = 0, []
    for k, (sys_, th) in enumerate(problems):
        for e in corpus.parameter_family(th, rng):
            if any(c.lowers_index for c in classify_all(e, th)):
                continue
            sig = fmi_kernel_check(apply_parameter(th, e), sys_)
            n_solutions += 1
            if sig.n_neg != sys_.kappa:
                bad.append((k, e.name, sig.n_neg, sys_.kappa))
    exceed = sum(fmi_kernel_check(lambda z: 0.0, sys_).n_neg > sys_.kappa for sys_, _ in problems)
    return not bad and exceed >= 1, n_solutions, bad, exceed


_WORKED = None


def _worked():
    global _WORKED
    if _WORKED is None:
        sys_ = build_pick_system(worked_example_data())
        _WORKED = (sys_, build_theta(sys_, WORKED_MU))
    return _WORKED


# ---------------------------------------------------------------- pytest


def _line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture(scope="module")
def record(acceptance_log):
    def put(k, ok, detail):
        acceptance_log[k] = _line(k, ok, detail)
        print(acceptance_log[k])

    return put


def test_criterion_1(record):
    items, elapsed, tilde = criterion_1()
    others = {k: v for k, v in items.items() if k != "tilde_printed"}
    others_ok = all(v <= 1e-10 for v in others.values()) and elapsed < 1.0
    tilde_ok = items["tilde_printed"] <= 1e-10
    detail = (f"P, P_inv, kappa, eta, p/|e|^2 max err {max(others.values()):.1e}, {elapsed * 1e3:.1f} ms; "
              f"tilde matrix vs printed value err {items['tilde_printed']:.2f} "
              f"(computed first column {tilde[0, 0]:.0f}, {tilde[1, 0]:.0f})")
    record(1, others_ok and tilde_ok, detail)
    assert others_ok, items


@pytest.mark.xfail(strict=True, reason="printed first column of the tilde matrix contradicts its defining product")
def test_criterion_1_printed_tilde_matrix():
    items, _, _ = criterion_1()
    assert items["tilde_printed"] <= 1e-10


def test_criterion_2(record):
    ok, errs = criterion_2()
    record(2, ok, f"max err {max(errs.values()):.1e} over {len(errs)} items")
    assert ok, errs


def test_criterion_3(record, problems):
    ok, worst, elapsed = criterion_3(problems)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f"; {elapsed:.1f} s"
    record(3, ok, detail)
    assert ok, worst


def test_criterion_4(record, problems):
    ok, worst_abs, worst_rel, splits = criterion_4(problems)
    record(4, ok, f"{splits} splits, max product err {worst_rel:.1e} relative to max(1, |Theta|) "
                  f"({worst_abs:.1e} absolute), signature bookkeeping exact")
    assert ok


def test_criterion_5(record, problems):
    ok, count, mismatches, classes = criterion_5(problems)
    record(5, ok, f"{count} rational parameters, classes {dict(sorted(classes.items()))}, "
                  f"{len(mismatches)} mismatches; opaque lower bounds <= kappa")
    assert ok, mismatches


def test_criterion_6(record, problems):
    ok, worst_exact, worst_ratio, worst_bar, n = criterion_6(problems)
    record(6, ok, f"{n} C3/C4 nodes, exact rel err {worst_exact:.1e}, "
                  f"radial |err|/bar max {worst_ratio:.2f}, bar max {worst_bar:.1e}")
    assert ok


def test_criterion_7(record):
    ok, z_err, n, degree_ok, verify_ok, func_err, classical_err, n_psd = criterion_7()
    record(7, ok, f"w = z coef err {z_err:.1e}; {n} fixtures, degrees ok {degree_ok}, checks ok {verify_ok}, "
                  f"recovery err {func_err:.1e}; classical agreement {classical_err:.1e} on {n_psd}")
    assert ok


def test_criterion_8(record, problems):
    ok, n_solutions, bad, exceed = criterion_8(problems)
    record(8, ok, f"{n_solutions} solutions with n_neg = kappa, {len(bad)} failures; "
                  f"w = 0 exceeds kappa on {exceed}/{len(problems)} problems")
    assert ok, bad


if __name__ == "__main__":
    problems = corpus.corpus()
    log: dict[int, str] = {}

    def put(k, ok, detail):
        log[k] = _line(k, ok, detail)
        print(log[k])

    for k, fn in enumerate([test_criterion_1, test_criterion_2], start=1):
        try:
            fn(put)
        except AssertionError:
            pass
    for fn in [test_criterion_3, test_criterion_4, test_criterion_5, test_criterion_6]:
        try:
            fn(put, problems)
        except AssertionError:
            pass
    try:
        test_criterion_7(put)
    except AssertionError:
        pass
    try:
        test_criterion_8(put, problems)
    except AssertionError:
        pass
