"""Counting solutions of the degree-p Thue equation modulo prime powers.

The count modulo q^s falls into closed-form cases decided by q mod p and
quadratic-residue data, except for a finite correction d in the ramified
case which is computed by direct enumeration.  Counts modulo composite n
are assembled multiplicatively (CRT).  A genuinely exhaustive O(n^2)
enumeration is kept alongside as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import QuadRing, is_prime, legendre
from .thue_core import thue_coeffs

__all__ = [
    "LocalCountReport",
    "brute_force_count",
    "count_mod_n",
    "count_mod_prime_power",
]

BRUTE_FORCE_CAP = 10**5
FACTOR_CAP = 10**12


@dataclass(frozen=True)
class LocalCountReport:
    p: int
    q: int
    s: int
    case: str
    count: int
    d: int | None = None
    unit_is_pth_power: bool | None = None

    @property
    def modulus(self) -> int:
        return self.q**self.s


def _require_inputs(p: int, q: int, s: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")


def _form_value(p: int, c: int, m: int) -> int:
    """f_{1,p}(c, 1) mod m, by Horner on the exact coefficients."""
    acc = 0
    for coeff in thue_coeffs(p, 1).coeffs:
        acc = (acc * c + coeff) % m
    return acc


def _ramified_d(p: int, q: int) -> int:
    """The case-(4) correction d = 1 + #{c : f(c,1) is a unit p-th power}.

    For q = 1 (mod p) the test runs mod q via x^((q-1)/p) = 1; for q = p it
    runs mod p^2 (the value of f(c,1) mod p^2 depends only on c mod p) via
    x^(p-1) = 1 mod p^2.  Unit p-th powers mod q^s reduce to these cases.
    """
    if q == p:
        m = p * p
        d = 1
        for c in range(p):
            v = _form_value(p, c, m)
            if v % p != 0 and pow(v, p - 1, m) == 1:
                d += 1
        return d
    d = 1
    e = (q - 1) // p
    for c in range(q):
        v = _form_value(p, c, q)
        if v != 0 and pow(v, e, q) == 1:
            d += 1
    return d


def count_mod_prime_power(p: int, q: int, s: int) -> LocalCountReport:
    """Number of (a, b) mod q^s with f_{1,p}(a, b) = 1 (mod q^s)."""
    _require_inputs(p, q, s)

    if q == 2:
        return LocalCountReport(p=p, q=q, s=s, case="3", count=2 ** (s - 1))

    if q == p:
        if s == 1:
            return LocalCountReport(p=p, q=q, s=s, case="1c", count=p)
        d = _ramified_d(p, q)
        return LocalCountReport(
            p=p, q=q, s=s, case="4", count=p * q ** (s - 1) * d, d=d
        )

    qmod = q % p
    if qmod == 1:
        d = _ramified_d(p, q)
        return LocalCountReport(
            p=p, q=q, s=s, case="4", count=p * q ** (s - 1) * d, d=d
        )
    if qmod == p - 1:
        if legendre(2, q) == 1:
            return LocalCountReport(p=p, q=q, s=s, case="1b", count=q**s)
        # inert case: count hinges on whether 1+sqrt2 is a p-th power in F_{q^2}
        ring = QuadRing(q)
        order = q * q - 1
        assert order % p == 0
        is_power = ring.pow((1, 1), order // p) == ring.one
        count = q**s + (1 - p) * q ** (s - 1) if is_power else q**s + q ** (s - 1)
        return LocalCountReport(
            p=p,
            q=q,
            s=s,
            case="2-power" if is_power else "2-nonpower",
            count=count,
            unit_is_pth_power=is_power,
        )
    return LocalCountReport(p=p, q=q, s=s, case="1a", count=q**s)


def count_mod_n(p: int, n: int) -> int:
    """Count modulo a general n >= 1, multiplicatively over prime powers."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return 1
    if n > FACTOR_CAP:
        raise ValueError(f"n exceeds the factorization cap {FACTOR_CAP}")
    total = 1
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            s = 0
            while m % q == 0:
                m //= q
                s += 1
            total *= count_mod_prime_power(p, q, s).count
        q += 1 if q == 2 else 2
    if m > 1:
        total *= count_mod_prime_power(p, m, 1).count
    return total


def brute_force_count(p: int, n: int, cap: int = BRUTE_FORCE_CAP) -> int:
    """Exhaustive count of (a, b) in (Z/n)^2 with f_{1,p}(a, b) = 1 (mod n).

    The value table is assembled blockwise as a (p+1)-term sum of rank-one
    products; with all factors reduced mod n first, entries stay below
    (p+1) n^2 < 2^53 throughout the cap range, so float64 matmul is exact.
    Blocking keeps memory flat for large n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > cap:
        raise ValueError(f"n exceeds the brute-force cap {cap}")
    if n == 1:
        return 1
    assert (p + 1) * (n - 1) ** 2 < 2**53, "exactness bound violated"
    coeffs = thue_coeffs(p, 1).coeffs
    idx = np.arange(n, dtype=np.int64)
    # rows: c_k * a^(p-k) mod n ; cols: b^k mod n
    rows = np.empty((p + 1, n), dtype=np.int64)
    cols = np.empty((p + 1, n), dtype=np.int64)
    apow = np.ones(n, dtype=np.int64)
    bpow = np.ones(n, dtype=np.int64)
    for k in range(p, -1, -1):
        rows[k] = (coeffs[k] % n) * apow % n
        apow = apow * idx % n
    for k in range(p + 1):
        cols[k] = bpow
        bpow = bpow * idx % n
    rows_f = rows.astype(np.float64).T
    cols_f = cols.astype(np.float64)
    block = max(1, min(n, (1 << 24) // n))
    total = 0
    for lo in range(0, n, block):
        vals = np.asarray(rows_f[lo : lo + block] @ cols_f, dtype=np.int64) % n
        if lo <= 1 < lo + block:
            assert vals[1 - lo, 0] == 1 % n  # the trivial solution (1, 0)
        total += int(np.count_nonzero(vals == 1 % n))
    return total
