"""Exact and precision-controlled arithmetic substrate.

Prime-field arithmetic (Legendre symbols, Tonelli-Shanks square roots,
baby-step/giant-step discrete logarithms), exact arithmetic in Z[sqrt(2)],
the quadratic extension of F_l by a square root of 2, and certified
evaluation of arbitrary-precision real expressions.

Every function here is a pure function of its inputs; nothing mutates
global state, so values can be shared freely across worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import gmpy2
import mpmath

__all__ = [
    "PrecisionError",
    "BigReal",
    "Zsqrt2",
    "QuadRing",
    "ZSQRT2_ONE",
    "ZSQRT2_UNIT",
    "certified_sign",
    "certified_value",
    "discrete_log",
    "is_prime",
    "legendre",
    "modpow",
    "mpf_to_fraction",
    "next_prime",
    "primes_in",
    "smallest_primitive_root",
    "sqrt_mod",
    "unit_power",
    "valuation",
]

PRECISION_CAP_BITS = 1 << 20
_GUARD_BITS = 16


class PrecisionError(ArithmeticError):
    """A real comparison stayed undecided up to the precision cap."""


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(int(n)))


def next_prime(n: int) -> int:
    return int(gmpy2.next_prime(int(n)))


def primes_in(lo: int, hi: int) -> Iterator[int]:
    """Primes p with lo <= p <= hi, ascending."""
    p = lo - 1
    while True:
        p = next_prime(p)
        if p > hi:
            return
        yield p


# ---------------------------------------------------------------------------
# prime-field arithmetic
# ---------------------------------------------------------------------------


def modpow(base: int, exp: int, m: int) -> int:
    """base**exp mod m, result in [0, m)."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if exp < 0:
        raise ValueError(f"exponent must be non-negative, got {exp}")
    return pow(base, exp, m)


def legendre(n: int, q: int) -> int:
    """Legendre symbol (n/q) for q an odd prime, via the Euler criterion."""
    n %= q
    if n == 0:
        return 0
    e = pow(n, (q - 1) // 2, q)
    return -1 if e == q - 1 else e


def sqrt_mod(n: int, q: int) -> int | None:
    """Smaller square root of n mod q (odd prime), or None for a non-residue.

    Tonelli-Shanks; the q = 3 (mod 4) shortcut is taken when available.
    """
    n %= q
    if n == 0:
        return 0
    if legendre(n, q) == -1:
        return None
    if q % 4 == 3:
        r = pow(n, (q + 1) // 4, q)
        return min(r, q - r)
    # q = 1 (mod 4): full Tonelli-Shanks
    s, m = q - 1, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = 2
    while legendre(z, q) != -1:
        z += 1
    c = pow(z, s, q)
    r = pow(n, (s + 1) // 2, q)
    t = pow(n, s, q)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        r = r * b % q
        c = b * b % q
        t = t * c % q
        m = i
    return min(r, q - r)


def discrete_log(g: int, x: int, l: int) -> int:
    """k in [0, l-1) with g**k = x (mod l), baby-step/giant-step in O(sqrt l).

    Raises ValueError when no solution exists (g not a primitive root, or x
    outside the subgroup generated by g).
    """
    n = l - 1
    g %= l
    x %= l
    if x == 0:
        raise ValueError("0 is not in the unit group")
    m = math.isqrt(n) + 1
    baby: dict[int, int] = {}
    e = 1
    for j in range(m):
        baby.setdefault(e, j)
        e = e * g % l
    giant = pow(g, n - m, l)  # g^(-m)
    y = x
    for i in range(m + 1):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % n
        y = y * giant % l
    raise ValueError(f"no discrete log of {x} to base {g} mod {l}")


def valuation(n: int, q: int) -> int | float:
    """q-adic valuation of n; +inf for n = 0."""
    if n == 0:
        return math.inf
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def _factor_trial(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n fully factored)."""
    out = []
    for q in (2, 3):
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
    q = 5
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 2 if q % 6 == 5 else 4
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(l: int) -> int:
    """Smallest primitive root mod the odd prime l (deterministic)."""
    if l == 2:
        return 1
    facs = _factor_trial(l - 1)
    exps = [(l - 1) // q for q in facs]
    for g in range(2, l):
        if all(pow(g, e, l) != 1 for e in exps):
            return g
    raise ValueError(f"{l} has no primitive root; not prime?")


# ---------------------------------------------------------------------------
# exact arithmetic in Z[sqrt(2)]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zsqrt2:
    """Element u + v*sqrt(2) of the ring Z[sqrt(2)]."""

    u: int
    v: int

    def __add__(self, other: "Zsqrt2") -> "Zsqrt2":
        return Zsqrt2(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "Zsqrt2") -> "Zsqrt2":
        return Zsqrt2(self.u - other.u, self.v - other.v)

    def __mul__(self, other: "Zsqrt2") -> "Zsqrt2":
        return Zsqrt2(
            self.u * other.u + 2 * self.v * other.v,
            self.u * other.v + self.v * other.u,
        )

    def __neg__(self) -> "Zsqrt2":
        return Zsqrt2(-self.u, -self.v)

    def __pow__(self, k: int) -> "Zsqrt2":
        if k < 0:
            raise ValueError("negative powers only defined for units; use unit_power")
        out = ZSQRT2_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Zsqrt2":
        return Zsqrt2(self.u, -self.v)

    def norm(self) -> int:
        return self.u * self.u - 2 * self.v * self.v


ZSQRT2_ONE = Zsqrt2(1, 0)
ZSQRT2_UNIT = Zsqrt2(1, 1)  # fundamental unit 1 + sqrt(2)
_UNIT_INV = Zsqrt2(-1, 1)  # (1 + sqrt(2))^(-1) = -(1 - sqrt(2))


def unit_power(r: int) -> Zsqrt2:
    """(1 + sqrt(2))**r for any integer r, exactly."""
    return ZSQRT2_UNIT**r if r >= 0 else _UNIT_INV ** (-r)


# ---------------------------------------------------------------------------
# the ring F_l[theta], theta^2 = 2
# ---------------------------------------------------------------------------


class QuadRing:
    """F_l[theta] with theta^2 = 2, for an odd prime l.

    Elements are pairs (u, v) meaning u + v*theta.  When 2 is a quadratic
    residue mod l ("split"), theta is realized as the explicit smaller
    square root of 2 and the ring is isomorphic to F_l x F_l; otherwise
    ("inert") it is the field with l^2 elements.
    """

    def __init__(self, l: int):
        if l == 2 or not is_prime(l):
            raise ValueError(f"modulus must be an odd prime, got {l}")
        self.l = l
        self.theta = sqrt_mod(2, l)
        self.sqrt2_mode = "split" if self.theta is not None else "inert"

    @property
    def one(self) -> tuple[int, int]:
        return (1, 0)

    def elem(self, u: int, v: int) -> tuple[int, int]:
        return (u % self.l, v % self.l)

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        l = self.l
        return (
            (a[0] * b[0] + 2 * a[1] * b[1]) % l,
            (a[0] * b[1] + a[1] * b[0]) % l,
        )

    def pow(self, a: tuple[int, int], k: int) -> tuple[int, int]:
        if k < 0:
            raise ValueError("negative exponent")
        out = (1, 0)
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def norm(self, a: tuple[int, int]) -> int:
        return (a[0] * a[0] - 2 * a[1] * a[1]) % self.l

    def embed_split(self, a: tuple[int, int]) -> int:
        """Image of a under theta -> explicit sqrt in F_l (split mode only)."""
        if self.sqrt2_mode != "split":
            raise ValueError("2 is a non-residue; no split embedding")
        return (a[0] + a[1] * self.theta) % self.l


# ---------------------------------------------------------------------------
# certified real evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BigReal:
    """An arbitrary-precision real together with its certified precision."""

    value: mpmath.mpf
    precision_bits: int

    def __float__(self) -> float:
        return float(self.value)

    def digits(self, n: int = 15) -> str:
        return mpmath.nstr(self.value, n)


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def certified_sign(
    f: Callable[[], mpmath.mpf],
    bits: int = 128,
    cap: int = PRECISION_CAP_BITS,
) -> int:
    """Sign of the real quantity computed by f under the ambient precision.

    f is evaluated at working precisions P and 2P; the sign is accepted only
    when both evaluations agree in sign and relative magnitude.  Otherwise P
    doubles, up to the cap, after which PrecisionError is raised: a verdict
    is never guessed.
    """
    p = bits
    while p <= cap:
        with mpmath.workprec(p + _GUARD_BITS):
            v1 = +mpmath.mpf(f())
        with mpmath.workprec(2 * p + _GUARD_BITS):
            v2 = +mpmath.mpf(f())
            s1, s2 = _sign(v1), _sign(v2)
            if s1 == s2 != 0 and abs(v1 - v2) <= abs(v2) * mpmath.mpf(2) ** (-(p // 2)):
                return s1
        p *= 2
    raise PrecisionError(f"sign undecided at precision cap {cap} bits")


def certified_value(
    f: Callable[[], mpmath.mpf],
    bits: int = 128,
    cap: int = PRECISION_CAP_BITS,
) -> BigReal:
    """Evaluate f to `bits` certified bits (agreement at doubled precision)."""
    p = bits
    while p <= cap:
        with mpmath.workprec(p + _GUARD_BITS):
            v1 = +mpmath.mpf(f())
        with mpmath.workprec(2 * p + _GUARD_BITS):
            v2 = +mpmath.mpf(f())
            if v1 == v2 or (v2 != 0 and abs(v1 - v2) <= abs(v2) * mpmath.mpf(2) ** (-bits)):
                with mpmath.workprec(bits):
                    return BigReal(+v2, bits)
        p *= 2
    raise PrecisionError(f"value not reproducible at precision cap {cap} bits")


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """Exact rational value of a finite mpf (dyadic)."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0 and exp != 0:
        raise ValueError(f"non-finite value {x}")
    man, exp = int(man), int(exp)  # backend may hand back gmpy2 mpz
    m = -man if sign else man
    return Fraction(m * 2**exp) if exp >= 0 else Fraction(m, 2**-exp)
