"""Continued-fraction elimination of small solutions.

Any nontrivial solution (a, b) of the degree-p Thue equation makes a/b an
extraordinarily good rational approximation to the real root theta, so a/b
must be a convergent whose following partial quotient exceeds an explicit
ceiling.  Walking the expansion of theta while the quotients stay below
the ceiling therefore pushes |b| above any target, and bounds for |a| and
y follow.  All quotients are certified: the expansion is run on exact
dyadic enclosures of theta and only the prefix shared by both endpoints is
emitted, at two working precisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .numerics import is_prime, mpf_to_fraction

__all__ = [
    "ContinuedFraction",
    "ConvergentBoundReport",
    "SmallYReport",
    "certify_small_y",
    "contfrac_theta",
    "lower_bound_b",
    "propagate_bounds",
    "quotient_ceiling",
]

PRECISION_CAP_BITS = 1 << 22
CHEN_REMAINING_CLASSES = (13, 17, 19, 23)  # p mod 24 not settled by modularity


def _require_p(p: int) -> None:
    if p < 17 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 17, got {p}")


def theta_enclosure(p: int, bits: int) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of theta (r = 1) of width about 2^(5-bits).

    theta = sqrt2 - 2*sqrt2 / ((1+sqrt2)^(-2/p) + 1), evaluated with guard
    bits and widened by a generous multiple of the final ulp.
    """
    with mpmath.workprec(bits + 48):
        sqrt2 = mpmath.sqrt(2)
        t = (1 + sqrt2) ** (mpmath.mpf(-2) / p)
        theta = sqrt2 - 2 * sqrt2 / (t + 1)
        mid = mpf_to_fraction(theta)
    eps = Fraction(1, 2 ** (bits - 5))
    return mid - eps, mid + eps


def _cf_common_prefix(
    lo: Fraction, hi: Fraction, max_terms: int
) -> list[int]:
    """Partial quotients shared by every real in [lo, hi].

    Runs the Euclidean expansion on both endpoints simultaneously and stops
    at the first disagreement (or if an endpoint terminates): continued
    fraction cylinders are intervals, so the common prefix is certified for
    any number between the endpoints.
    """
    n1, d1 = lo.numerator, lo.denominator
    n2, d2 = hi.numerator, hi.denominator
    out: list[int] = []
    while len(out) < max_terms:
        q1, r1 = divmod(n1, d1)
        q2, r2 = divmod(n2, d2)
        if q1 != q2:
            break
        out.append(q1)
        if r1 == 0 or r2 == 0:
            break  # an endpoint's expansion terminated
        # reciprocal of the fractional parts reverses the interval order
        n1, d1, n2, d2 = d2, r2, d1, r1
    return out


@dataclass(frozen=True)
class ContinuedFraction:
    p: int
    r: int
    quotients: tuple[int, ...]
    P: tuple[int, ...]  # convergent numerators, P[k]/Q[k]
    Q: tuple[int, ...]
    precision_bits: int
    validation_bits: int
    exhausted: bool  # True when precision, not max_terms, ended the prefix


def _convergents(quotients: list[int]) -> tuple[list[int], list[int]]:
    P = []
    Q = []
    pm2, pm1 = 0, 1
    qm2, qm1 = 1, 0
    for q in quotients:
        pk = pm2 + q * pm1
        qk = qm2 + q * qm1
        P.append(pk)
        Q.append(qk)
        pm2, pm1 = pm1, pk
        qm2, qm1 = qm1, qk
    return P, Q


def contfrac_theta(
    p: int, max_terms: int, precision: int, validate: bool = True
) -> ContinuedFraction:
    """Certified partial quotients of theta with exact convergents.

    Quotients come from the common prefix of the expansions of the two
    enclosure endpoints at the working precision; with validate=True the
    emitted prefix is additionally required to agree with the expansion at
    doubled precision.
    """
    _require_p(p)
    lo, hi = theta_enclosure(p, precision)
    quotients = _cf_common_prefix(lo, hi, max_terms)
    validation_bits = precision
    if validate:
        validation_bits = 2 * precision
        lo2, hi2 = theta_enclosure(p, validation_bits)
        check = _cf_common_prefix(lo2, hi2, len(quotients))
        if check[: len(quotients)] != quotients:
            raise ArithmeticError(
                f"quotient prefix unstable between {precision} and "
                f"{validation_bits} bits for p={p}"
            )
    P, Q = _convergents(quotients)
    return ContinuedFraction(
        p=p,
        r=1,
        quotients=tuple(quotients),
        P=tuple(P),
        Q=tuple(Q),
        precision_bits=precision,
        validation_bits=validation_bits,
        exhausted=len(quotients) < max_terms,
    )


def quotient_ceiling(p: int) -> int:
    """p * 2^((3p-7)/2) - 2, the admissible partial-quotient ceiling."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    return p * 2 ** ((3 * p - 7) // 2) - 2


def approximation_constant(p: int) -> Fraction:
    """C_p = 1/(p * 2^((p-3)/2)): |a/b - theta| <= C_p / |b|^p."""
    return Fraction(1, p * 2 ** ((p - 3) // 2))


@dataclass(frozen=True)
class ConvergentBoundReport:
    p: int
    status: str  # "ok" | "candidate-window" | "precision-exhausted"
    target: int
    k: int | None
    b0: int | None
    a0: int | None
    y0: int | None
    terms: int
    max_quotient: int | None
    precision_bits: int
    ceiling: int
    window: tuple[int, int] | None = None  # (P_k, Q_k) if a quotient broke out

    @property
    def passed(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "status": self.status,
            "precision_bits": self.precision_bits,
            "terms": self.terms,
            "max_quotient": self.max_quotient,
            "k": self.k,
            "Q_final_digits": len(str(self.b0)) if self.b0 else None,
            "b0": str(self.b0) if self.b0 is not None else None,
            "a0": str(self.a0) if self.a0 is not None else None,
            "y0_digits": len(str(self.y0)) if self.y0 else None,
            "window": list(self.window) if self.window else None,
        }


def lower_bound_b(
    p: int,
    target: int,
    start_bits: int | None = None,
    cap_bits: int = PRECISION_CAP_BITS,
) -> ConvergentBoundReport:
    """Certify |b| >= target for any nontrivial Thue solution at this p.

    Advances k while q_(i+1) <= ceiling for 1 <= i <= k; each such k gives
    |b| >= Q_(k+1).  Success once Q_(k+1) >= target.  A quotient above the
    ceiling instead localizes any solution to that convergent, which is
    reported as a candidate window for exact downstream checking rather
    than an error.  Precision doubles automatically up to the cap.
    """
    _require_p(p)
    if target < 1:
        raise ValueError("target must be >= 1")
    ceiling = quotient_ceiling(p)
    bits = start_bits or max(256, int(1.2 * max(target, 2).bit_length()))
    while bits <= cap_bits:
        # generous term budget: Q at least doubles every two steps
        max_terms = 2 * max(target, 2).bit_length() + 64
        cf = contfrac_theta(p, max_terms, bits)
        q, Q, P = cf.quotients, cf.Q, cf.P
        k = 0
        while True:
            if k + 1 >= len(q):
                break  # certified prefix exhausted before a verdict
            if k >= 1 and q[k + 1] > ceiling:
                b0 = Q[k]
                a0, y0 = propagate_bounds(p, b0) if b0 >= 2 else (None, None)
                return ConvergentBoundReport(
                    p=p,
                    status="candidate-window",
                    target=target,
                    k=k,
                    b0=b0,
                    a0=a0,
                    y0=y0,
                    terms=len(q),
                    max_quotient=max(q[1:]) if len(q) > 1 else None,
                    precision_bits=bits,
                    ceiling=ceiling,
                    window=(P[k], Q[k]),
                )
            if Q[k + 1] >= target:
                b0 = Q[k + 1]
                a0, y0 = propagate_bounds(p, b0) if b0 >= 2 else (None, None)
                return ConvergentBoundReport(
                    p=p,
                    status="ok",
                    target=target,
                    k=k,
                    b0=b0,
                    a0=a0,
                    y0=y0,
                    terms=len(q),
                    max_quotient=max(q[1 : k + 2]) if k + 1 >= 1 else None,
                    precision_bits=bits,
                    ceiling=ceiling,
                )
            k += 1
        bits *= 2
    return ConvergentBoundReport(
        p=p,
        status="precision-exhausted",
        target=target,
        k=None,
        b0=None,
        a0=None,
        y0=None,
        terms=0,
        max_quotient=None,
        precision_bits=cap_bits,
        ceiling=ceiling,
    )


def propagate_bounds(p: int, b0: int, bits: int = 192) -> tuple[int, int]:
    """(a0, y0) from |b| >= b0: a0 = floor(b0(|theta| - C_p/2^p)),
    y0 = floor(1.99 b0^2); both rounded down so the claims are conservative.
    """
    _require_p(p)
    if b0 < 2:
        raise ValueError("b0 must be >= 2 (b is even and nonzero)")
    lo, hi = theta_enclosure(p, bits)
    abs_theta_lower = min(abs(lo), abs(hi))
    if lo < 0 < hi:
        raise ArithmeticError("enclosure of theta straddles zero")
    cp = approximation_constant(p)
    coeff = abs_theta_lower - cp / 2**p
    a0 = math.floor(b0 * coeff)
    y0 = 199 * b0 * b0 // 100
    return a0, y0


@dataclass(frozen=True)
class SmallYReport:
    target: int
    reports: tuple[ConvergentBoundReport, ...]
    skipped: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def certify_small_y(
    p_list: list[int],
    target: int,
    chen_filter: bool = False,
    start_bits: int | None = None,
) -> SmallYReport:
    """Run the |b| >= target certification over a list of primes.

    With chen_filter=True, primes in residue classes mod 24 already settled
    by the modular method are skipped (recorded as skipped, counting toward
    the aggregate pass).  An empty list passes vacuously.
    """
    reports = []
    skipped = []
    for p in p_list:
        if chen_filter and p % 24 not in CHEN_REMAINING_CLASSES:
            skipped.append(p)
            continue
        reports.append(lower_bound_b(p, target, start_bits=start_bits))
    return SmallYReport(target=target, reports=tuple(reports), skipped=tuple(skipped))
