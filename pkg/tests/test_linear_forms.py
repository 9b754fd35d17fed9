import math
import random

import mpmath
import pytest

from pellpower.linear_forms import (
    LinearFormInstance,
    TableRow,
    Thm1Params,
    Thm2Params,
    choose_params_thm2,
    default_S1_S2,
    epsilon_upper,
    g_function,
    g_upper,
    g_upper_constants,
    g_upper_negative,
    lambda_upper,
    large_y_constants,
    load_table_rows,
    monotonicity_guard,
    solve_critical_system,
    stirling_bounds,
    thm1_bound,
    thm1_cardinalities,
    thm2_lower_bound,
    verify_table,
    verify_table_row,
)


def test_lambda_upper():
    assert abs(float(lambda_upper(23, 17)) - (-25.59870083539777)) < 1e-10
    bound, lam = lambda_upper(23, 3, x=17)
    assert float(lam) > 0  # log of a ratio > 1
    # envelope constant: 2 sqrt2/(1 - sqrt2/23^1.5) < 2.866
    with mpmath.workprec(80):
        c = 2 * mpmath.sqrt(2) / (1 - mpmath.sqrt(2) / mpmath.mpf(23) ** mpmath.mpf("1.5"))
        assert c < mpmath.mpf("2.866")


def test_sigma_and_lambda_values():
    from pellpower.linear_forms import _sigma

    with mpmath.workprec(80):
        s = _sigma(mpmath.mpf(1) / 3)
        assert abs(s - mpmath.mpf(7) / 9) < 1e-20
        lam = s * mpmath.log(mpmath.mpf("22.5978"))
        assert mpmath.nstr(lam, 5) == "2.425"
        assert lam > mpmath.mpf("2.4249")


def test_choose_params():
    pr = choose_params_thm2(23.0, 6959, 7.99202, 0.508613, "general")
    assert pr.derivation_ok
    assert abs(pr.a2 - 8.99202 * math.log(1 + math.sqrt(2))) < 1e-9
    with pytest.raises(ValueError):
        choose_params_thm2(23.0, 97, 22.5978, 1 / 3, "unit")  # p < 100


def test_thm2_lower_bound_contradiction_flags():
    inst = LinearFormInstance(p=7001, y=23.0, r_mode="general")
    rep = thm2_lower_bound(inst, choose_params_thm2(23.0, 7001, 7.99202, 0.508613))
    assert rep.all_conditions_pass and rep.contradiction
    assert rep.lower_bound is not None and rep.lower_bound > rep.upper_bound

    inst_lo = LinearFormInstance(p=1700, y=23.0, r_mode="unit")
    rep_lo = thm2_lower_bound(
        inst_lo, choose_params_thm2(23.0, 1700, 22.5978, 1 / 3, "unit")
    )
    assert rep_lo.all_conditions_pass and rep_lo.contradiction is False


def test_thm2_condition_failures_named():
    inst = LinearFormInstance(p=2003, y=23.0, r_mode="unit")
    bad = Thm2Params(mu=1 / 3, rho=1e6, a1=1.0, a2=1.0, h=1.0, mode="custom")
    rep = thm2_lower_bound(inst, bad)
    assert "a1a2_ge_lambda_sq" in rep.failed_conditions()
    assert rep.lower_bound is None  # no bound without verified conditions

    rep2 = thm2_lower_bound(
        LinearFormInstance(p=101, y=23.0, r_mode="unit"),
        choose_params_thm2(23.0, 101, 1e6, 1 / 3, "unit"),
    )
    assert rep2.failed_conditions() == ["h_floor"]


def test_g_upper_anchor_negativity():
    c = g_upper_constants(0.508613, 7.99202, 6959, "general")
    assert g_upper_negative(23, 6993, c)
    assert g_upper_negative(31, 6959, c)
    ok, failed = monotonicity_guard(c, 23, 6993)
    assert ok, failed

    cu = g_upper_constants(1 / 3, 22.5978, 1973, "unit")
    assert g_upper_negative(23, 1973, cu)
    ok, failed = monotonicity_guard(cu, 23, 1973)
    assert ok, failed
    assert cu.h_floor > 14
    # third guard hypothesis evaluates to 19.07... > 1
    with mpmath.workprec(80):
        t = mpmath.log(1973) + cu.C3
        assert abs(t * mpmath.log(t) - mpmath.mpf("19.076")) < 0.01


def test_g_dominates_g_upper_sampled():
    c = g_upper_constants(0.508613, 7.99202, 6959, "general")
    rng = random.Random(13)
    with mpmath.workprec(96):
        for _ in range(200):
            y = rng.uniform(23, 1e6)
            p = rng.uniform(6959, 30000)
            g = g_function(y, p, 0.508613, 7.99202, "general")
            gu = g_upper(y, p, c)
            assert g <= gu + mpmath.mpf("1e-12"), (y, p)


def test_monotonicity_guard_failures():
    c = g_upper_constants(0.508613, 7.99202, 6959, "general")
    ok, failed = monotonicity_guard(c, 15, 6993)
    assert not ok and "y0_gt_e_to_e" in failed
    ok, failed = monotonicity_guard(c, 23, 7)
    assert not ok and "p0_gt_e_sq" in failed


def test_g_sign_change_near_critical_p():
    with mpmath.workprec(96):
        assert g_function(23, 6900, 0.508613, 7.99202) > 0
        assert g_function(23, 7000, 0.508613, 7.99202) < 0


def test_monotone_ratio_on_grid():
    # u/(p log y) non-increasing in each direction on a 50x50 grid above
    # the guard point (float evaluation of the fixed constants suffices
    # for a sampling check)
    c = g_upper_constants(0.508613, 7.99202, 6959, "general")

    def ratio(y, p):
        lp = math.log(p) + c.C3
        ly = math.log(y) + c.C4
        u = (
            c.C1
            - math.log(y) * p / 2
            + c.C2 * lp**2 * ly
            + c.C5 * math.log(p)
            + math.log(lp**2 * ly)
        )
        return u / (p * math.log(y))

    ys = [23 * 1.31**i for i in range(50)]
    ps = [6993 * 1.18**i for i in range(50)]
    vals = [[ratio(y, p) for p in ps] for y in ys]
    for i in range(50):
        for j in range(49):
            assert vals[i][j + 1] <= vals[i][j] + 1e-12
    for j in range(50):
        for i in range(49):
            assert vals[i + 1][j] <= vals[i][j] + 1e-12


@pytest.mark.slow
def test_critical_points_match_anchors():
    p, mu, rho, res = solve_critical_system(23.0, "general")
    assert res < 1e-8
    assert abs(p - 6950.6) / 6950.6 < 1e-3
    assert abs(mu - 0.508613) / 0.508613 < 1e-3
    assert abs(rho - 7.99202) / 7.99202 < 1e-3

    p2, rho2, res2 = solve_critical_system(23.0, "unit")
    assert res2 < 1e-8
    assert abs(p2 - 1971.41) / 1971.41 < 1e-3
    assert abs(rho2 - 22.5978) / 22.5978 < 1e-3


def test_thm1_cardinalities_formula():
    assert thm1_cardinalities(1, 3, 1, 4, 17) == (1, 12)
    assert thm1_cardinalities(1, 20, 1, 3, 17)[1] == 57
    assert thm1_cardinalities(2, 7, 5, 2, 13) == (10, 14)  # S2 = 2 -> 2 R2
    with pytest.raises(ValueError):
        thm1_cardinalities(1, 3, 1, 1, 17)


def test_thm1_cardinalities_enumeration():
    for p in (5, 17):
        for R2 in range(1, 41, 3):
            for S2 in range(2, 41, 3):
                got = thm1_cardinalities(1, R2, 1, S2, p)[1]
                want = len({2 * t + p * s for t in range(R2) for s in range(S2)})
                assert got == want, (p, R2, S2)


def test_stirling_bounds():
    sb = stirling_bounds(10, 5)
    assert math.lgamma(11) < sb.log_factorial_upper  # log 10! < bound
    assert sb.superfactorial_log_lower <= math.log(288)  # prod_{k<5} k! = 288
    # bounds hold for all N, K <= 200
    logfact = 0.0
    superfact_log = 0.0
    for n in range(1, 201):
        logfact += math.log(n)
        b = stirling_bounds(n, n)
        assert b.log_factorial_upper > logfact
        if n >= 2:
            superfact_log += math.lgamma(n)  # log (n-1)!
        assert b.superfactorial_log_lower <= superfact_log + 1e-9


def test_epsilon_upper_decreasing():
    with mpmath.workprec(80):
        vals = [epsilon_upper(n) for n in range(3, 400)]
        assert all(b < a for a, b in zip(vals, vals[1:]))


def test_thm1_bound_table_regime():
    logy = 800 * math.log(10)
    K = math.ceil(26.64 * logy)
    S1, S2 = default_S1_S2(K, 9, 1, 64, 919)
    assert S1 * 1 >= 9  # cardinality floor with R1 = 1
    assert (S2 - 2) * min(64, 919) + 2 * 64 > (K - 1) * 9
    params = Thm1Params(K=K, L=9, R1=1, R2=64, S1=S1, S2=S2, rho=27.22, mu=0.58)
    rep = thm1_bound(919, mpmath.mpf(10) ** 800, params)
    assert rep.all_conditions_pass
    assert rep.bound_rhs is not None and rep.log_lambda_lower < rep.bound_rhs
    assert rep.feasible_rho is not None and rep.feasible_rho < rep.rho0
    # g always lands in [1/6, 1/4] when RS >= KL
    g = 0.25 - params.N / (12 * params.R * params.S)
    assert params.R * params.S >= params.N and 1 / 6 <= g <= 1 / 4


def test_thm1_infeasible_rho():
    params = Thm1Params(K=2, L=100, R1=50, R2=50, S1=50, S2=50, rho=5.0, mu=1 / 3)
    rep = thm1_bound(101, 1e10, params)
    assert rep.rho0 is not None and rep.rho0 < 1
    assert rep.feasible_rho is None


def test_large_y_record_anchor():
    rec = large_y_constants(919, 26.64, 9, 1, 64, 0.58, 27.22, y_exp=800)
    assert rec.conclusion, rec.failed
    assert rec.constants["C8"] > 0
    assert rec.constants["solution_ineq_lhs"] < 0
    assert rec.constants["derivative_lhs"] < 0
    # objective head-room: log(rho) mu L K' < p/2
    assert rec.constants["objective"] < 919 / 2


def test_large_y_reference_point_feasible():
    # the reference frontier point at p = 916 with its closed-form rho
    from pellpower.linear_forms import _objective_float

    obj, rho = _objective_float(916, 26.62, 9, 1, 64, 0.58)
    assert obj < 916 / 2
    rec = large_y_constants(916, 26.62, 9, 1, 64, 0.58, rho)
    assert rec.verdicts["asymptotic_margin"] and rec.verdicts["objective_margin"]


def test_large_y_negative_control():
    rec = large_y_constants(919, 28.69, 10, 1, 69, 0.59, 33, y_exp=50)
    assert not rec.conclusion
    assert "objective_margin" in rec.failed


def test_table_rows_well_formed():
    rows = load_table_rows()
    assert len(rows) == 8
    assert rows[0] == TableRow(919, 919, 800, 26.64, 9, 1, 64, 0.58, 27.22)
    assert rows[-1].p_hi == 1951


def test_verify_single_rows():
    rows = load_table_rows()
    rv = verify_table_row(rows[0])
    assert rv.passed and list(rv.per_prime) == [919]
    rv2 = verify_table_row(rows[2])  # 937, 941
    assert rv2.passed and list(rv2.per_prime) == [937, 941]


def test_verify_table_flags_overlap():
    results, flags = verify_table()
    assert any("overlap" in f for f in flags)  # 1200 boundary shared
    assert not any("uncovered" in f for f in flags)
