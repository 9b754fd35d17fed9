import math
import random

import pytest

from pellpower.elementary import (
    CandidateSolution,
    direct_search,
    expansion_identities,
    power_quotient_properties,
    sieve_check,
    unit_power_pair,
    wieferich_check,
    wieferich_scan,
)


def test_candidate_solution_constructor():
    CandidateSolution(1, -1, 3)
    CandidateSolution(-1, -1, 7)
    with pytest.raises(ValueError):
        CandidateSolution(110, 23, 3)  # 23^3 + 2 = 12169 is not a square
    with pytest.raises(ValueError):
        CandidateSolution(1, -1, 9)  # 9 not prime


def test_power_quotient_examples():
    r = power_quotient_properties(4, 1, 3)
    assert r.quotient == 21 and r.gcd_value == 3
    assert r.p_divides_y_minus_a and r.p_divides_quotient
    assert r.quotient_mod_p2 == 3  # p mod p^2, since p does not divide a

    r = power_quotient_properties(2, 1, 5)
    assert r.quotient == 31 and r.gcd_value == 1
    assert r.prime_factors == (31,) and 31 % 5 == 1
    assert r.prime_factor_congruences_ok

    r = power_quotient_properties(1, -1, 3)
    assert r.quotient == 1 and r.gcd_value == 1


def test_power_quotient_agrees_with_naive():
    for p in (3, 5, 7):
        for y in range(2, 61):
            for a in range(1, y):
                if math.gcd(a, y) != 1:
                    continue
                r = power_quotient_properties(y, a, p, trial_bound=10**4)
                q = (y**p - a**p) // (y - a)
                assert r.quotient == q
                assert r.gcd_value == math.gcd(y - a, q) in (1, p)
                assert r.p_divides_equivalence
                if (y - a) % p == 0:
                    assert r.quotient_mod_p2 == (p if a % p else 0)


def _naive_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def test_power_quotient_factor_congruences_random():
    rng = random.Random(17)
    for _ in range(50):
        p = rng.choice([3, 5, 7])
        y = rng.randrange(2, 40)
        a = rng.randrange(1, y)
        if math.gcd(a, y) != 1:
            continue
        r = power_quotient_properties(y, a, p, trial_bound=10**6)
        assert r.unverified_cofactor is None
        assert set(r.prime_factors) == _naive_factors(r.quotient)
        for q in r.prime_factors:
            assert q == p or q % p == 1


def test_sieve_rejects_trivial():
    with pytest.raises(ValueError):
        sieve_check(1, -1, 5)


def test_sieve_synthetic_failures():
    rep = sieve_check(3, 11, 5)  # y = 3 (mod 8) violates the parity block
    assert not rep.passed
    assert "y_7_mod_8" in rep.failed_conditions()


def test_sieve_synthetic_pass():
    # consistent local data: y = 23 = 7 (mod 8) = 23 (mod 24), x odd,
    # 3 does not divide x, x != +-1 (mod 17)
    rep = sieve_check(5, 23, 17)
    assert rep.passed, rep.failed_conditions()


def test_sieve_vacuous_handling():
    # y = 7 (mod 24) forces 3 | x; feed a matching synthetic pair
    rep = sieve_check(9, 31, 13)
    assert rep.conditions["y_mod_24_matches_3_div_x"]
    assert rep.conditions["v2_y_minus_1_is_1"]


def test_unit_power_pair_examples():
    assert (unit_power_pair(1, 1, 3, 1).X, unit_power_pair(1, 1, 3, 1).Y) == (17, 12)
    pair = unit_power_pair(1, 0, 11, 1)
    assert (pair.X, pair.Y) == (1, 1)


def test_unit_power_pair_norm_identity_random():
    rng = random.Random(23)
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for _ in range(500):
        a = rng.randrange(-40, 41)
        b = rng.randrange(-40, 41)
        p = rng.choice(primes)
        r = rng.choice([-2, -1, 1, 2])
        pair = unit_power_pair(a, b, p, r)
        assert pair.X**2 - 2 * pair.Y**2 == (-1) ** (r % 2) * (a * a - 2 * b * b) ** p


def test_expansion_identities_examples():
    rep = expansion_identities(1, 1, 3)
    assert (rep.X, rep.Y, rep.S, rep.T) == (17, 12, 7, 5)
    assert rep.X - rep.Y == 5 == rep.T
    assert rep.identities_ok and rep.battery is None

    rep0 = expansion_identities(1, 0, 7)
    assert rep0.Y == 1 and rep0.battery_ok  # trivial solution passes the battery


def test_expansion_identities_random():
    rng = random.Random(31)
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for _ in range(500):
        a = rng.randrange(-30, 31)
        b = rng.randrange(-30, 31)
        p = rng.choice(primes)
        assert expansion_identities(a, b, p).identities_ok


def test_unit_locus_only_trivial():
    # every (a, b) with |a|,|b| <= 200 and Y = 1 is the trivial (1, 0);
    # float prefilter, exact confirmation
    import numpy as np
    from pellpower.thue_core import thue_coeffs

    for p in (3, 5, 7, 11, 13, 17, 19):
        coeffs = thue_coeffs(p, 1).coeffs
        a = np.arange(-200, 201, dtype=np.float64)
        b = np.arange(-200, 201, dtype=np.float64)
        A, B = np.meshgrid(a, b, indexing="ij")
        val = np.zeros_like(A)
        for k, c in enumerate(coeffs):
            val += c * A ** (p - k) * B**k
        close = np.argwhere(np.abs(val) < 1e6)
        hits = []
        for i, j in close:
            ai, bj = int(a[i]), int(b[j])
            if unit_power_pair(ai, bj, p, 1).Y == 1:
                hits.append((ai, bj))
        assert hits == [(1, 0)], (p, hits)


def test_wieferich():
    assert wieferich_check(1093)
    assert wieferich_check(3511)
    assert not wieferich_check(3)
    assert wieferich_scan(1000) == []


def test_direct_search():
    assert [(c.x, c.y) for c in direct_search(3, 10**6)] == [(1, -1)]
    assert [(c.x, c.y) for c in direct_search(5, 10**4)] == [(1, -1)]
    assert direct_search(7, 0) == []
