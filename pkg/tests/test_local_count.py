import pytest

from pellpower.local_count import (
    brute_force_count,
    count_mod_n,
    count_mod_prime_power,
)
from pellpower.numerics import is_prime


def test_case_examples():
    cases = [
        (5, 7, 1, "1a", 7),
        (3, 5, 1, "2-nonpower", 6),
        (3, 17, 1, "1b", 17),
        (5, 5, 1, "1c", 5),
        (3, 2, 3, "3", 4),
        (3, 7, 1, "4", 9),
    ]
    for p, q, s, case, count in cases:
        rep = count_mod_prime_power(p, q, s)
        assert rep.case == case and rep.count == count, (p, q, s, rep)


def test_case2_power_branch_recorded():
    rep = count_mod_prime_power(3, 5, 1)
    assert rep.unit_is_pth_power is False  # 1+sqrt2 is not a cube in F_25
    assert rep.count == 5 + 1


def test_case2_branch_consistent_with_root_count():
    # independent recomputation: the branch matches the number of roots of
    # f(x, 1) mod q (0 when 1+sqrt2 is not a p-th power, p when it is)
    from pellpower.thue_core import thue_coeffs

    seen_power = seen_nonpower = False
    for p in (3, 5, 7, 11, 13):
        q = 3
        while q < 600:
            if is_prime(q) and q % p == p - 1 and pow(2, (q - 1) // 2, q) == q - 1:
                rep = count_mod_prime_power(p, q, 1)
                coeffs = thue_coeffs(p, 1).coeffs
                roots = sum(
                    1
                    for c in range(q)
                    if sum(co * pow(c, p - k, q) for k, co in enumerate(coeffs)) % q == 0
                )
                assert roots == (p if rep.unit_is_pth_power else 0), (p, q)
                seen_power = seen_power or rep.unit_is_pth_power
                seen_nonpower = seen_nonpower or not rep.unit_is_pth_power
            q += 2
    assert seen_power and seen_nonpower  # both branches exercised


def test_brute_force_examples():
    assert brute_force_count(3, 5) == 6
    assert brute_force_count(3, 8) == 4
    assert brute_force_count(5, 7) == 7
    assert brute_force_count(3, 1) == 1


def test_count_mod_n_examples():
    assert count_mod_n(3, 10) == 6
    assert count_mod_n(3, 40) == 24
    assert count_mod_n(7, 1) == 1


def test_formula_matches_brute_small():
    for p in (3, 5, 7, 11, 13):
        q = 2
        while q <= 300:
            if is_prime(q):
                s = 1
                while q**s <= 300:
                    rep = count_mod_prime_power(p, q, s)
                    assert rep.count == brute_force_count(p, q**s), (p, q, s)
                    s += 1
            q += 1


def test_multiplicativity():
    pairs = [(8, 5), (9, 25), (7, 11), (27, 49), (4, 13), (16, 17)]
    for p in (3, 5, 7):
        for m, n in pairs:
            assert count_mod_n(p, m * n) == count_mod_n(p, m) * count_mod_n(p, n)
            assert count_mod_n(p, m * n) == brute_force_count(p, m * n)


def test_case4_d_stable_in_s():
    for p, q in ((3, 7), (5, 11), (3, 13)):
        ds = {count_mod_prime_power(p, q, s).d for s in (1, 2, 3)}
        assert len(ds) == 1  # d depends only on (p, q)
    for p in (3, 5):
        ds = {count_mod_prime_power(p, p, s).d for s in (2, 3)}
        assert len(ds) == 1


def test_trivial_solution_always_counted():
    # (a, b) = (1, 0) solves the congruence for every modulus
    for p in (3, 5, 7):
        for n in (4, 9, 10, 21, 25):
            assert count_mod_n(p, n) >= 1


def test_input_validation():
    with pytest.raises(ValueError):
        count_mod_prime_power(4, 5, 1)
    with pytest.raises(ValueError):
        count_mod_prime_power(3, 6, 1)
    with pytest.raises(ValueError):
        brute_force_count(3, 10**9)
