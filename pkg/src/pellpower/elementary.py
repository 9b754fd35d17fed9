"""Elementary congruence sieve and exact identities for x^2 - 2 = y^p.

Contains the necessary-condition battery any nontrivial solution must pass,
exact unit-power expansion in Z[sqrt(2)], the Wieferich test, and a
brute-force search used as an oracle by the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .numerics import Zsqrt2, is_prime, legendre, primes_in, unit_power, valuation

__all__ = [
    "CandidateSolution",
    "ExpansionReport",
    "PowerQuotientReport",
    "SieveReport",
    "UnitPowerPair",
    "direct_search",
    "expansion_identities",
    "power_quotient_properties",
    "sieve_check",
    "unit_power_pair",
    "wieferich_check",
    "wieferich_scan",
]

DEFAULT_TRIAL_BOUND = 10**6


def _require_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class CandidateSolution:
    """A verified solution triple: x^2 - 2 = y^p holds exactly."""

    x: int
    y: int
    p: int

    def __post_init__(self):
        _require_odd_prime(self.p)
        if self.x * self.x - 2 != self.y**self.p:
            raise ValueError(f"x^2 - 2 != y^p for (x, y, p) = ({self.x}, {self.y}, {self.p})")

    @property
    def trivial(self) -> bool:
        return self.y == -1


# ---------------------------------------------------------------------------
# divisibility structure of (y^p - a^p)/(y - a)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerQuotientReport:
    y: int
    a: int
    p: int
    quotient: int
    gcd_value: int
    p_divides_y_minus_a: bool
    p_divides_quotient: bool
    p_divides_equivalence: bool
    quotient_mod_p2: int | None
    prime_factors: tuple[int, ...]
    unverified_cofactor: int | None
    prime_factor_congruences_ok: bool


def power_quotient_properties(
    y: int, a: int, p: int, trial_bound: int = DEFAULT_TRIAL_BOUND
) -> PowerQuotientReport:
    """Divisibility report for Q = (y^p - a^p)/(y - a), y and a coprime.

    Checks gcd(y - a, Q) in {1, p}, the equivalence p | (y-a) <=> p | Q,
    Q mod p^2 in the divisible case, and that every prime factor q != p of
    Q found by trial division satisfies q = 1 (mod p).  Factors beyond the
    trial bound are reported as an unverified cofactor, since the condition
    quantifies over all prime factors and is not finitely checkable.
    """
    _require_odd_prime(p)
    if y == a:
        raise ValueError("y and a must be distinct")
    if math.gcd(y, a) != 1:
        raise ValueError("y and a must be coprime")
    num = y**p - a**p
    quotient = num // (y - a)
    assert quotient * (y - a) == num
    g = math.gcd(y - a, quotient)
    p_div_base = (y - a) % p == 0
    p_div_quot = quotient % p == 0
    q_mod_p2 = quotient % (p * p) if p_div_base else None

    factors: list[int] = []
    cof = quotient
    q = 2
    while q <= trial_bound and q * q <= cof:
        if cof % q == 0:
            factors.append(q)
            while cof % q == 0:
                cof //= q
        q += 1 if q == 2 else 2
    unverified = None
    if cof > 1:
        if cof <= trial_bound * trial_bound or is_prime(cof):
            factors.append(cof)  # cofactor below the bound squared is prime
        else:
            unverified = cof
    congr_ok = all(q == p or q % p == 1 for q in factors)

    return PowerQuotientReport(
        y=y,
        a=a,
        p=p,
        quotient=quotient,
        gcd_value=g,
        p_divides_y_minus_a=p_div_base,
        p_divides_quotient=p_div_quot,
        p_divides_equivalence=p_div_base == p_div_quot,
        quotient_mod_p2=q_mod_p2,
        prime_factors=tuple(factors),
        unverified_cofactor=unverified,
        prime_factor_congruences_ok=congr_ok,
    )


# ---------------------------------------------------------------------------
# the congruence sieve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SieveReport:
    x: int
    y: int
    p: int
    conditions: dict[str, bool]
    unverified_cofactor: int | None

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def failed_conditions(self) -> list[str]:
        return [k for k, v in self.conditions.items() if not v]


def sieve_check(
    x: int | CandidateSolution,
    y: int | None = None,
    p: int | None = None,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
) -> SieveReport:
    """Necessary-condition battery for a triple or CandidateSolution.

    Raw triples need not satisfy x^2 - 2 = y^p exactly: synthetic inputs
    are allowed so the individual conditions can be exercised.  The trivial
    y = -1 is rejected (the conditions only constrain nontrivial solutions).
    """
    if isinstance(x, CandidateSolution):
        x, y, p = x.x, x.y, x.p
    _require_odd_prime(p)
    if y == -1:
        raise ValueError("trivial solution (y = -1) rejected")

    cond: dict[str, bool] = {}
    cond["x_odd_y_odd"] = x % 2 == 1 and y % 2 == 1
    cond["y_7_mod_8"] = y % 8 == 7

    # primes dividing y are +-1 mod 8 (trial division, cofactor flagged)
    unverified = None
    ok = True
    if y not in (0, 1, -1):
        cof = abs(y)
        q = 2
        while q <= trial_bound and q * q <= cof:
            if cof % q == 0:
                if q % 8 not in (1, 7):
                    ok = False
                while cof % q == 0:
                    cof //= q
            q += 1 if q == 2 else 2
        if cof > 1:
            if cof <= trial_bound * trial_bound or is_prime(cof):
                if cof % 8 not in (1, 7):
                    ok = False
            else:
                unverified = cof
    cond["y_prime_factors_pm1_mod_8"] = ok

    three_div_x = x % 3 == 0
    cond["y_mod_24_matches_3_div_x"] = (y % 24 == 7) == three_div_x and (
        (y % 24 == 23) == (not three_div_x) if y % 8 == 7 else True
    )
    cond["v3_y_minus_1_iff_3_div_x"] = ((y - 1) % 3 == 0) == three_div_x

    cond["v2_y_minus_1_is_1"] = valuation(y - 1, 2) == 1 if y != 1 else False
    cond["v3_y_minus_1_le_1"] = (valuation(y - 1, 3) <= 1) if y != 1 else False

    # valuation dichotomy: y = -1 (mod p) forces v_p((x-1)(x+1)) = v_p(y+1)+1,
    # otherwise x is not +-1 mod p
    if (y + 1) % p == 0:
        lhs = valuation((x - 1) * (x + 1), p) if x * x != 1 else math.inf
        cond["valuation_dichotomy"] = lhs == valuation(y + 1, p) + 1
    else:
        cond["valuation_dichotomy"] = x % p not in (1, p - 1)

    if y != 1:
        quotient = (y**p - 1) // (y - 1)
    else:
        quotient = p
    cond["quotient_1_mod_24"] = quotient % 24 == 1

    if p % 3 == 2 or p == 3:
        cond["p_class_forces_3_ndiv_x"] = not three_div_x
    else:
        cond["p_class_forces_3_ndiv_x"] = True

    return SieveReport(x=x, y=y, p=p, conditions=cond, unverified_cofactor=unverified)


# ---------------------------------------------------------------------------
# exact unit-power expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitPowerPair:
    """(X, Y) with (1+sqrt2)^r (a+b sqrt2)^p = X + Y sqrt2, exactly."""

    X: int
    Y: int
    a: int
    b: int
    p: int
    r: int


def unit_power_pair(a: int, b: int, p: int, r: int) -> UnitPowerPair:
    z = unit_power(r) * (Zsqrt2(a, b) ** p)
    return UnitPowerPair(X=z.u, Y=z.v, a=a, b=b, p=p, r=r)


def _divides(d: int, n: int) -> bool:
    # 0 | 0 passes, 0 | n fails for n != 0 (matches the trivial solution)
    if d == 0:
        return n == 0
    return n % d == 0


@dataclass(frozen=True)
class ExpansionReport:
    a: int
    b: int
    p: int
    X: int
    Y: int
    S: int
    T: int
    identities: dict[str, bool]
    battery: dict[str, bool] | None = field(default=None)

    @property
    def identities_ok(self) -> bool:
        return all(self.identities.values())

    @property
    def battery_ok(self) -> bool | None:
        return None if self.battery is None else all(self.battery.values())


def expansion_identities(a: int, b: int, p: int) -> ExpansionReport:
    """Exact identities tying (X, Y) to the symmetric halves S, T.

    With (a+b sqrt2)^p = S + T sqrt2 and (X, Y) the r = 1 unit-power pair:
    X = S + 2T, Y = S + T, X - Y = T (odd binomial sum), X - 2Y = -S (even
    binomial sum).  When Y = 1, the pair solves the degree-p Thue equation
    and the full divisibility/congruence battery for x = X runs as well.
    """
    _require_odd_prime(p)
    w = Zsqrt2(a, b) ** p
    S, T = w.u, w.v
    pair = unit_power_pair(a, b, p, 1)
    X, Y = pair.X, pair.Y

    t_binomial = sum(
        math.comb(p, 2 * j + 1) * a ** (p - 2 * j - 1) * b ** (2 * j + 1) * 2**j
        for j in range((p + 1) // 2)
    )
    s_binomial = sum(
        math.comb(p, 2 * j) * a ** (p - 2 * j) * b ** (2 * j) * 2**j
        for j in range((p + 1) // 2)
    )
    identities = {
        "X_eq_S_plus_2T": X == S + 2 * T,
        "Y_eq_S_plus_T": Y == S + T,
        "X_minus_Y_eq_odd_sum": X - Y == T == t_binomial,
        "X_minus_2Y_eq_even_sum": X - 2 * Y == -S == -s_binomial,
    }

    battery = None
    if Y == 1:
        x = X
        y = 2 * b * b - a * a
        chi = legendre(2, p)
        battery = {
            "y_matches": x * x - 2 == y**p,
            "gcd_ab_1": math.gcd(a, b) == 1,
            "a_odd_b_even": a % 2 == 1 and b % 2 == 0,
            "b_divides_x_minus_1": _divides(b, x - 1),
            "a_divides_x_minus_2": _divides(a, x - 2),
            "vp_a_minus_1_eq_vp_b": valuation(a - 1, p) == valuation(b, p),
            "vp_x_minus_1_dichotomy": (
                valuation(x - 1, p) == valuation(b, p) + 1
                if b % p == 0
                else (x - 1) % p != 0
            ),
            "vp_x_minus_2_dichotomy": (
                valuation(x - 2, p) == valuation(a, p) + 1
                if a % p == 0
                else (x - 2) % p != 0
            ),
            "x_minus_1_cong_chi_b": (x - 1 - chi * b) % p == 0,
            "x_minus_2_cong_minus_a": (x - 2 + a) % p == 0,
            "v2_chain": valuation(x - 1, 2) == valuation(b, 2) == valuation(a - 1, 2),
        }

    return ExpansionReport(
        a=a, b=b, p=p, X=X, Y=Y, S=S, T=T, identities=identities, battery=battery
    )


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def wieferich_check(p: int) -> bool:
    """True iff 2^(p-1) = 1 (mod p^2)."""
    _require_odd_prime(p)
    return pow(2, p - 1, p * p) == 1


def wieferich_scan(p_max: int) -> list[int]:
    """All Wieferich primes below p_max (odd primes only)."""
    return [p for p in primes_in(3, p_max - 1) if wieferich_check(p)]


def direct_search(p: int, x_bound: int) -> list[CandidateSolution]:
    """All (x, y) with 1 <= x <= x_bound and x^2 - 2 = y^p, exhaustively.

    Scans y (equivalent to scanning x, but O(x_bound^(2/p)) instead of
    O(x_bound)): y^p + 2 must be a perfect square not exceeding x_bound^2.
    """
    _require_odd_prime(p)
    out: list[CandidateSolution] = []
    if x_bound >= 1:
        out.append(CandidateSolution(1, -1, p))  # y <= -1: only y = -1 works
    limit = x_bound * x_bound - 2
    y = 1
    while y**p <= limit:
        n = y**p + 2
        x = math.isqrt(n)
        if x * x == n:
            out.append(CandidateSolution(x, y, p))
        y += 1
    return sorted(out, key=lambda c: c.x)
