"""Construction and analysis of the degree-p Thue forms over Z[sqrt(2)].

The binary form f_{r,p}(a, b) is the sqrt(2)-component of
(1+sqrt2)^r (a+b sqrt2)^p; its coefficients are exact integers.  This
module computes them by ring expansion, locates the single real root and
the full complex root set from the closed form, evaluates the discriminant
both by formula and by an independent resultant oracle, bounds the product
of imaginary parts, and spot-checks the Galois permutation action on the
roots numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .numerics import (
    BigReal,
    certified_sign,
    is_prime,
    unit_power,
)

__all__ = [
    "RootSet",
    "ThuePolynomial",
    "all_roots",
    "discriminant_formula",
    "discriminant_resultant",
    "galois_action_check",
    "im_product",
    "real_root_theta",
    "thue_coeffs",
    "thue_eval",
]

DEFAULT_RESULTANT_BOUND = 13


def _require_valid(p: int, r: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if r % p == 0:
        raise ValueError(f"r must not be divisible by p, got r={r}, p={p}")


@dataclass(frozen=True)
class ThuePolynomial:
    """Exact coefficients c_0..c_p, with c_k multiplying a^(p-k) b^k."""

    p: int
    r: int
    coeffs: tuple[int, ...]

    def eval(self, a: int, b: int) -> int:
        p = self.p
        return sum(c * a ** (p - k) * b**k for k, c in enumerate(self.coeffs))

    def eval_univariate(self, x):
        """f(x) = f(x, 1) via Horner; works for int, mpf and mpc arguments."""
        acc = x * 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def derivative_coeffs(self) -> tuple[int, ...]:
        p = self.p
        return tuple((p - k) * c for k, c in enumerate(self.coeffs[:-1]))


def thue_coeffs(p: int, r: int) -> ThuePolynomial:
    """Expand (1+sqrt2)^r (a+b sqrt2)^p over Z[sqrt2]; keep the sqrt2 part.

    Monomial a^(p-k) b^k carries (sqrt2)^k = 2^(k//2) * sqrt2^(k mod 2);
    multiplying by (1+sqrt2)^r = U + V sqrt2 and reading off the sqrt2
    component gives exact integer coefficients for every r with p ∤ r.
    """
    _require_valid(p, r)
    unit = unit_power(r)
    U, V = unit.u, unit.v
    coeffs = []
    for k in range(p + 1):
        base = math.comb(p, k) * 2 ** (k // 2)
        coeffs.append(base * (U if k % 2 == 1 else V))
    return ThuePolynomial(p=p, r=r, coeffs=tuple(coeffs))


def thue_eval(f: ThuePolynomial, a: int, b: int) -> int:
    """Exact homogeneous evaluation f(a, b)."""
    return f.eval(a, b)


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------


def _theta_at_current_prec(p: int, r: int) -> mpmath.mpf:
    sqrt2 = mpmath.sqrt(2)
    t = (1 + sqrt2) ** (mpmath.mpf(-2 * r) / p)
    return sqrt2 + 2 * sqrt2 / ((-1) ** (r % 2) * t - 1)


def real_root_theta(p: int, r: int, precision: int = 128) -> BigReal:
    """The unique real root of f_{r,p}, from the closed form.

    The returned value is certified by agreement at doubled precision, and
    its location is checked against the sign-class of r: odd positive r
    gives -sqrt2 < theta < 0, even positive r gives theta < -sqrt2, with
    the mirrored ranges for r < 0.
    """
    _require_valid(p, r)
    theta = _certified_theta(p, r, precision)
    sqrt2 = mpmath.mpf(2) ** mpmath.mpf("0.5")
    v = theta.value
    if r > 0 and r % 2 == 1:
        ok = -sqrt2 < v < 0
    elif r > 0:
        ok = v < -sqrt2
    elif r % 2 == 1:
        ok = 0 < v < sqrt2
    else:
        ok = v > sqrt2
    if not ok:
        raise ArithmeticError(f"real root of f_({r},{p}) fell outside its sign class")
    return theta


def _certified_theta(p: int, r: int, precision: int) -> BigReal:
    from .numerics import certified_value

    return certified_value(lambda: _theta_at_current_prec(p, r), bits=precision)


@dataclass(frozen=True)
class RootSet:
    p: int
    r: int
    precision_bits: int
    roots: tuple  # mpc values, index i matching the closed-form label
    real_index: int
    min_pairwise_distance: float
    max_residual: float


def all_roots(p: int, r: int, precision: int = 128) -> RootSet:
    """All p roots rho_0..rho_(p-1) by direct closed-form evaluation.

    Residuals |f(rho_i)| are certified below 2^(-precision/2) * max|c_k|;
    exactly one root may be real (index 0), all others must keep their
    imaginary part clear of the classification threshold.  Precision
    escalates automatically when either certificate fails.
    """
    _require_valid(p, r)
    f = thue_coeffs(p, r)
    norm = max(abs(c) for c in f.coeffs)
    bits = precision
    while bits <= 1 << 20:
        with mpmath.workprec(bits + 32):
            sqrt2 = mpmath.sqrt(2)
            t = (1 + sqrt2) ** (mpmath.mpf(-2 * r) / p)
            zeta = mpmath.exp(2j * mpmath.pi / p)
            roots = []
            for i in range(p):
                denom = (-1) ** (r % 2) * t * zeta**i - 1
                roots.append(sqrt2 + 2 * sqrt2 / denom)
            tol = mpmath.mpf(2) ** (-(precision // 2))
            residual = max(abs(f.eval_univariate(z)) for z in roots)
            real_flags = [abs(z.imag) < tol for z in roots]
            near_flags = [abs(z.imag) < 2 * tol for z in roots]
            mindist = min(
                abs(roots[i] - roots[j])
                for i in range(p)
                for j in range(i + 1, p)
            )
            if (
                residual < tol * norm
                and real_flags == [True] + [False] * (p - 1)
                and sum(near_flags) == 1
                and mindist > 0
            ):
                return RootSet(
                    p=p,
                    r=r,
                    precision_bits=bits,
                    roots=tuple(roots),
                    real_index=0,
                    min_pairwise_distance=float(mindist),
                    max_residual=float(residual),
                )
        bits *= 2
    raise ArithmeticError(f"root certification failed for (p, r) = ({p}, {r})")


# ---------------------------------------------------------------------------
# discriminants
# ---------------------------------------------------------------------------


def discriminant_formula(p: int) -> int:
    """(-1)^(p(p-1)/2) * 2^((3/2)(p-1)(p-2)) * p^p, exactly."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    sign = -1 if (p * (p - 1) // 2) % 2 else 1
    e2 = 3 * (p - 1) * (p - 2) // 2
    return sign * 2**e2 * p**p


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _sylvester_resultant(f: list[int], g: list[int]) -> int:
    """Res(f, g) for integer polynomials given by descending coefficients."""
    n = len(f) - 1
    m = len(g) - 1
    size = n + m
    rows = []
    for i in range(m):
        rows.append([0] * i + f + [0] * (m - 1 - i))
    for i in range(n):
        rows.append([0] * i + g + [0] * (n - 1 - i))
    return _bareiss_det(rows)


def discriminant_resultant(p: int, r: int, max_p: int = DEFAULT_RESULTANT_BOUND) -> int:
    """Discriminant of f_{r,p} via Res(f, f')/lc(f): the independent oracle.

    Exact integer output; independent of r (which the formula asserts and
    this oracle confirms).  Bounded to small p because the Sylvester matrix
    grows quadratically.
    """
    _require_valid(p, r)
    if p > max_p:
        raise ValueError(f"resultant oracle bounded to p <= {max_p}, got {p}")
    f = thue_coeffs(p, r)
    fc = list(f.coeffs)
    gc = list(f.derivative_coeffs())
    res = _sylvester_resultant(fc, gc)
    sign = -1 if (p * (p - 1) // 2) % 2 else 1
    disc, rem = divmod(sign * res, fc[0])
    if rem:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return disc


# ---------------------------------------------------------------------------
# imaginary-part product (r = 1)
# ---------------------------------------------------------------------------


def im_product(p: int, precision: int = 128) -> tuple[BigReal, BigReal]:
    """Closed form of prod |Im rho_i| over the complex roots, and its bound.

    Closed form: p * 2^((p-1)/2) * ((1+sqrt2)^(1/p) + (1+sqrt2)^(-1/p))^2 / 8,
    which is at least p * 2^((p-3)/2) since x + 1/x >= 2.  r = 1 only.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    from .numerics import certified_value

    def closed():
        u = (1 + mpmath.sqrt(2)) ** (mpmath.mpf(1) / p)
        return p * mpmath.mpf(2) ** ((p - 1) / mpmath.mpf(2)) * (u + 1 / u) ** 2 / 8

    closed_val = certified_value(closed, bits=precision)
    bound_int = p * 2 ** ((p - 3) // 2)
    with mpmath.workprec(precision):
        bound_val = BigReal(mpmath.mpf(bound_int), precision)
    if certified_sign(lambda: closed() - bound_int, bits=precision) < 0:
        raise ArithmeticError("closed form fell below its stated lower bound")
    return closed_val, bound_val


# ---------------------------------------------------------------------------
# Galois action spot check
# ---------------------------------------------------------------------------


def galois_action_check(
    p: int, r: int, s: int, j: int, k: int, precision: int = 256
) -> bool:
    """Numerically confirm the automorphism permutation on the root set.

    The automorphism indexed by (s, j, k) sends zeta -> zeta^k, twists the
    radical branch by zeta^(+-rj), and conjugates sqrt2 by (-1)^s; the image
    of rho_i must equal rho_{(-1)^s (k i - 2 r j)} for every i.  Branches:
    (1+sqrt2)^(r/p) is the positive real root, (1-sqrt2)^(r/p) the real one
    (other consistent branch choices permute the indexing).
    """
    _require_valid(p, r)
    if s not in (0, 1):
        raise ValueError(f"s must be 0 or 1, got {s}")
    if k % p == 0:
        raise ValueError(f"k must be a unit mod p, got {k}")

    with mpmath.workprec(precision + 32):
        sqrt2 = mpmath.sqrt(2)
        A = (1 + sqrt2) ** (mpmath.mpf(r) / p)  # (1+sqrt2)^(r/p), real branch
        B = (-1) ** (r % 2) * (sqrt2 - 1) ** (mpmath.mpf(r) / p)  # (1-sqrt2)^(r/p)
        zeta = mpmath.exp(2j * mpmath.pi / p)

        def rho(i: int):
            zi = zeta ** (i % p)
            return sqrt2 * (B * zi + A) / (B * zi - A)

        tol = mpmath.mpf(2) ** (-(precision // 2))
        scale = max(abs(rho(i)) for i in range(p)) + 1
        for i in range(p):
            zi = zeta ** ((k * i) % p)
            tw = zeta ** ((r * j) % p)
            if s == 0:
                image = sqrt2 * (B / tw * zi + A * tw) / (B / tw * zi - A * tw)
            else:
                image = -sqrt2 * (A / tw * zi + B * tw) / (A / tw * zi - B * tw)
            target = rho(((-1) ** s * (k * i - 2 * r * j)) % p)
            if abs(image - target) > tol * scale:
                return False
    return True
