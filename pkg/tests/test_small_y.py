from fractions import Fraction

import pytest

from pellpower.small_y import (
    approximation_constant,
    certify_small_y,
    contfrac_theta,
    lower_bound_b,
    propagate_bounds,
    quotient_ceiling,
    theta_enclosure,
)


def test_quotient_ceiling():
    assert quotient_ceiling(17) == 71303166  # 17 * 2^22 - 2
    assert quotient_ceiling(3) == 4
    prev = 0
    for p in (3, 5, 7, 11, 13, 17, 19):
        c = quotient_ceiling(p)
        assert c > prev
        prev = c


def test_approximation_constant():
    assert approximation_constant(3) == Fraction(1, 3)
    for p in (3, 5, 17, 911):
        assert approximation_constant(p) < Fraction(1, 2)


def test_theta_enclosure_tight():
    lo, hi = theta_enclosure(17, 256)
    assert lo < hi < 0
    assert hi - lo <= Fraction(1, 2**249)
    # midpoint matches the Newton-refined oracle value
    assert abs(float((lo + hi) / 2) - (-0.07325499283678281)) < 1e-15


def test_contfrac_first_quotients():
    cf = contfrac_theta(17, 12, 512)
    assert cf.quotients[0] == -1  # theta in (-sqrt2, 0)
    assert cf.quotients[:12] == (-1, 1, 12, 1, 1, 1, 6, 2, 2, 26, 1, 5)
    assert cf.validation_bits == 1024


def test_convergent_recurrences_and_law():
    cf = contfrac_theta(17, 40, 768)
    q, P, Q = cf.quotients, cf.P, cf.Q
    for k in range(2, len(q)):
        assert P[k] == P[k - 2] + q[k] * P[k - 1]
        assert Q[k] == Q[k - 2] + q[k] * Q[k - 1]
    lo, hi = theta_enclosure(17, 768)
    for k in range(1, len(q) - 1):
        err = max(abs(lo - Fraction(P[k], Q[k])), abs(hi - Fraction(P[k], Q[k])))
        assert err < Fraction(1, Q[k] * Q[k + 1]) + (hi - lo)
        assert err < Fraction(1, Q[k] ** 2)


def test_quotient_stability_under_doubling():
    cf1 = contfrac_theta(17, 100, 1024, validate=False)
    cf2 = contfrac_theta(17, 100, 2048, validate=False)
    assert len(cf1.quotients) >= 100
    assert cf1.quotients[:100] == cf2.quotients[:100]


def test_fibonacci_floor_growth():
    cf = contfrac_theta(19, 60, 1024)
    Q = cf.Q
    for k in range(2, len(Q)):
        assert Q[k] >= Q[k - 1] + Q[k - 2]


def test_lower_bound_trivial_target():
    rep = lower_bound_b(17, 1)
    assert rep.passed and rep.k == 0 and rep.b0 >= 1


def test_lower_bound_mid_target():
    rep = lower_bound_b(17, 10**50)
    assert rep.passed
    assert rep.b0 >= 10**50
    assert rep.max_quotient <= quotient_ceiling(17)
    assert rep.a0 is not None and rep.y0 > 10**100


def test_lower_bound_rejects_small_p():
    with pytest.raises(ValueError):
        lower_bound_b(13, 10**10)


def test_propagate_bounds():
    a0, y0 = propagate_bounds(17, 10**1000)
    assert y0 == 199 * 10**2000 // 100
    assert y0 > 10**1000
    # |a|/|b| stays below 0.1 for p >= 17
    assert Fraction(a0, 10**1000) < Fraction(1, 10)
    assert a0 > 0


def test_candidate_window_reported(monkeypatch):
    # with an artificially tiny ceiling the walk must stop at the first
    # oversized quotient and hand back that convergent for exact checking
    import pellpower.small_y as sy

    monkeypatch.setattr(sy, "quotient_ceiling", lambda p: 10)
    rep = sy.lower_bound_b(17, 10**50)
    assert rep.status == "candidate-window"
    assert rep.window is not None
    Pk, Qk = rep.window
    assert rep.b0 == Qk
    # the localized convergent is not an actual solution
    from pellpower.thue_core import thue_coeffs, thue_eval

    f = thue_coeffs(17, 1)
    assert abs(thue_eval(f, Pk, Qk)) != 1


def test_certify_small_y_aggregate():
    rep = certify_small_y([17, 23], 10**100)
    assert rep.passed and len(rep.reports) == 2
    assert certify_small_y([], 10**10).passed  # vacuous
    filt = certify_small_y([19, 29], 10**20, chen_filter=True)
    assert filt.skipped == (29,)  # 29 = 5 (mod 24): settled classes skipped
    assert [r.p for r in filt.reports] == [19]
