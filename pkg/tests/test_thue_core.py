import random

import mpmath
import pytest

from pellpower.elementary import unit_power_pair
from pellpower.thue_core import (
    all_roots,
    discriminant_formula,
    discriminant_resultant,
    galois_action_check,
    im_product,
    real_root_theta,
    thue_coeffs,
    thue_eval,
)


def test_coeff_examples():
    assert thue_coeffs(3, 1).coeffs == (1, 3, 6, 2)
    assert thue_coeffs(5, 1).coeffs == (1, 5, 20, 20, 20, 4)
    f = thue_coeffs(7, 1)
    assert f.eval(1, 0) == 1  # trivial solution
    with pytest.raises(ValueError):
        thue_coeffs(5, 10)  # p | r


def test_eval_examples():
    f = thue_coeffs(3, 1)
    assert thue_eval(f, 1, 1) == 12
    assert thue_eval(thue_coeffs(13, 1), 1, 0) == 1


def test_eval_matches_unit_power_pair():
    rng = random.Random(41)
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for _ in range(500):
        a = rng.randrange(-30, 31)
        b = rng.randrange(-30, 31)
        p = rng.choice(primes)
        r = rng.choice([-2, -1, 1, 2])
        f = thue_coeffs(p, r)
        assert thue_eval(f, a, b) == unit_power_pair(a, b, p, r).Y


def test_real_root_values():
    # oracle: Newton refinement of the closed form, frozen
    th3 = real_root_theta(3, 1, 192)
    assert abs(float(th3.value) - (-0.40392836201667848)) < 1e-14
    th17 = real_root_theta(17, 1, 192)
    assert abs(float(th17.value) - (-0.07325499283678281)) < 1e-14


def test_real_root_newton_fixed_point():
    # the closed-form value is a root: one Newton step barely moves it
    f = thue_coeffs(11, 1)
    with mpmath.workprec(256):
        x = mpmath.mpf(real_root_theta(11, 1, 224).value)
        fx = f.eval_univariate(x)
        dfx = sum(
            (11 - k) * c * x ** (10 - k) for k, c in enumerate(f.coeffs[:-1])
        )
        assert abs(fx / dfx) < mpmath.mpf(2) ** -200


def test_real_root_sign_classes():
    sqrt2 = 2**0.5
    for p in (5, 7, 11):
        assert -sqrt2 < float(real_root_theta(p, 1, 128).value) < 0
        assert float(real_root_theta(p, 2, 128).value) < -sqrt2
        assert 0 < float(real_root_theta(p, -1, 128).value) < sqrt2
        assert float(real_root_theta(p, -2, 128).value) > sqrt2


def test_theta_small_for_p_ge_17():
    for p in (17, 19, 101, 911):
        assert abs(float(real_root_theta(p, 1, 128).value)) < 0.08


def test_all_roots():
    rs = all_roots(3, 1, 160)
    assert len(rs.roots) == 3 and rs.real_index == 0
    ims = sorted(abs(float(z.imag)) for z in rs.roots)
    assert ims[0] == 0.0
    assert abs(ims[1] - 1.8073394944520219) < 1e-12  # polyroots oracle
    # Vieta: sum of roots = -c1/c0 = -3 (summed at the roots' precision)
    with mpmath.workprec(200):
        s = rs.roots[0] + rs.roots[1] + rs.roots[2]
        assert abs(s - (-3)) < mpmath.mpf(2) ** -140


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (7, 2), (11, -1), (13, 1)])
def test_all_roots_unique_real(p, r):
    rs = all_roots(p, r, 128)
    tol = 2.0 ** -(128 // 2)
    real_flags = [abs(float(z.imag)) < tol for z in rs.roots]
    assert sum(real_flags) == 1 and real_flags[0]
    assert rs.min_pairwise_distance > 0
    assert rs.max_residual < tol * max(abs(c) for c in thue_coeffs(p, r).coeffs)


def test_discriminant_formula_values():
    assert discriminant_formula(3) == -216
    assert discriminant_formula(5) == 819200000
    assert discriminant_formula(7) < 0  # sign (-1)^21


def test_discriminant_resultant_oracle():
    assert discriminant_resultant(3, 1) == -216
    assert discriminant_resultant(3, 2) == -216  # r-independence
    assert discriminant_resultant(5, 1) == 819200000
    with pytest.raises(ValueError):
        discriminant_resultant(17, 1)  # above the oracle bound


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
@pytest.mark.parametrize("r", [1, 2, -1])
def test_discriminant_agreement(p, r):
    assert discriminant_resultant(p, r) == discriminant_formula(p)


def test_im_product():
    closed, bound = im_product(3, 160)
    # oracle: square of the polyroots imaginary part, 1.8073394944520219^2
    assert abs(float(closed.value) - 3.2664760482060899) < 1e-12
    assert float(bound.value) == 3.0
    # numeric product over the complex roots agrees to 1e-10 relative
    for p in (3, 5, 7, 11, 13):
        closed, bound = im_product(p, 192)
        rs = all_roots(p, 1, 192)
        prod = mpmath.mpf(1)
        for z in rs.roots[1:]:
            prod *= abs(z.imag)
        assert abs(prod - closed.value) / closed.value < 1e-10
        assert closed.value >= float(bound.value)
        assert int(bound.value) == p * 2 ** ((p - 3) // 2)


def test_galois_action_examples():
    assert galois_action_check(5, 1, 0, 0, 1)  # identity
    assert galois_action_check(5, 1, 1, 0, 1)  # rho_i -> rho_{-i}
    assert galois_action_check(5, 1, 0, 1, 1)  # rho_i -> rho_{i-2}
    with pytest.raises(ValueError):
        galois_action_check(5, 1, 0, 0, 5)  # k not a unit mod p


def test_galois_action_full_sweep_p5():
    for s in (0, 1):
        for j in range(5):
            for k in range(1, 5):
                assert galois_action_check(5, 1, s, j, k), (s, j, k)


def test_galois_action_other_r():
    for r in (2, -1):
        assert galois_action_check(7, r, 0, 1, 3)
        assert galois_action_check(7, r, 1, 2, 2)
