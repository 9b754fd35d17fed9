"""Modular-method machinery: level-128 curves and r = +-1 certificates.

Given a prime p, auxiliary primes l = np+1 satisfying four congruence and
trace conditions restrict the unit exponent r of any solution modulo p; a
certificate records, per level-128 curve, enough auxiliary primes that the
intersection of the restriction sets lands inside {1, -1}.  Certificates
are generated by scanning n upward and are re-verifiable from scratch.

Also here: the trace scan over 5 <= p < p_max used to rule out p | y, and
the closed-form newform coefficient a_p as a signed count of quaternary
quadratic-form representations, checked against honest point counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .numerics import (
    discrete_log,
    is_prime,
    modpow,
    smallest_primitive_root,
    sqrt_mod,
)

__all__ = [
    "ApScanRow",
    "AuxConditions",
    "CertificateSearchError",
    "CurveValidationError",
    "EllipticCurveZ",
    "RCertificate",
    "ResidueSetResult",
    "ap_formula",
    "ap_point_count",
    "aux_conditions",
    "generate_certificate",
    "load_curves",
    "residue_set",
    "trace_scan",
    "twist_minimal_curve",
    "verify_certificate",
]

QEXPANSION_ANCHORS = {3: -2, 5: -2, 7: -4, 11: 2, 13: -2}
_DLOG_TABLE_LIMIT = 2 * 10**6


class CurveValidationError(ValueError):
    """Curve asset failed its self-certification against the newform data."""


class CertificateSearchError(RuntimeError):
    """Auxiliary-prime search exhausted its budget."""

    def __init__(self, p: int, label: str, residual: frozenset[int], primes_used: int):
        self.p = p
        self.label = label
        self.residual = residual
        self.primes_used = primes_used
        super().__init__(
            f"budget exhausted for p={p}, curve {label}: residual set "
            f"{sorted(residual)} after {primes_used} auxiliary primes"
        )


# ---------------------------------------------------------------------------
# curves and point counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllipticCurveZ:
    label: str
    ainvs: tuple[int, int, int, int, int]

    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def quartic_rhs(self) -> tuple[int, int, int, int]:
        """(4, b2, 2*b4, b6): completed-square model Y^2 = 4x^3+b2x^2+2b4x+b6."""
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        return (4, b2, 2 * b4, b6)


def _chi_table(l: int) -> np.ndarray:
    """Quadratic character of F_l as an int8 lookup table (chi[0] = 0)."""
    x = np.arange(l, dtype=np.int64)
    sq = x * x % l
    table = np.full(l, -1, dtype=np.int8)
    table[sq] = 1
    table[0] = 0
    return table


def ap_point_count(curve: EllipticCurveZ, l: int, chi: np.ndarray | None = None) -> int:
    """a_l = l + 1 - #E(F_l) by summing the quadratic character (l odd prime)."""
    if l == 2 or not is_prime(l):
        raise ValueError(f"l must be an odd prime, got {l}")
    if curve.discriminant() % l == 0:
        raise ValueError(f"bad reduction at l={l} for curve {curve.label}")
    c3, c2, c1, c0 = curve.quartic_rhs()
    if chi is None:
        chi = _chi_table(l)
    x = np.arange(l, dtype=np.int64)
    fx = (((c3 * x % l) * x % l + c2 * x % l) * x % l + (c1 * x + c0)) % l
    a = -int(chi[fx].sum())
    assert a * a <= 4 * l, "Hasse bound violated"
    return a


def _frey_ap(delta: int, l: int, chi: np.ndarray) -> int:
    """a_l of Y^2 = X^3 + 2*delta*X^2 + 2X over F_l (delta^2 != 2 mod l)."""
    x = np.arange(l, dtype=np.int64)
    fx = ((x + 2 * delta) % l * x % l + 2) % l * x % l
    return -int(chi[fx].sum())


def load_curves(path: str | None = None) -> list[EllipticCurveZ]:
    """Load and self-certify the four level-128 curves.

    Validation: integral Weierstrass data with discriminant a signed power
    of 2 (support at 2 only); exactly one curve reproduces the q-expansion
    anchors of the twist-minimal newform including a_9 = a_3^2 - 3 = 1; the
    other three are its quadratic twists by -1, 2, -2 (trace coherence
    chi_d(l) * a_l for all good odd l < 500); Hasse bound spot-checked.
    Any mismatch refuses the load.
    """
    if path is None:
        raw = resources.files("pellpower.data").joinpath("curves128.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    data = json.loads(raw)
    curves = [
        EllipticCurveZ(label=c["label"], ainvs=tuple(int(a) for a in c["ainvs"]))
        for c in data["curves"]
    ]
    if len(curves) != 4:
        raise CurveValidationError(f"expected 4 curves, got {len(curves)}")
    for c in curves:
        disc = c.discriminant()
        if disc == 0:
            raise CurveValidationError(f"{c.label} is singular")
        if abs(disc) & (abs(disc) - 1):
            raise CurveValidationError(f"{c.label} has bad reduction away from 2")

    minimal = [
        c
        for c in curves
        if all(ap_point_count(c, l) == a for l, a in QEXPANSION_ANCHORS.items())
    ]
    if len(minimal) != 1:
        raise CurveValidationError(
            f"{len(minimal)} curves match the twist-minimal q-expansion; need exactly 1"
        )
    fmin = minimal[0]
    a3 = ap_point_count(fmin, 3)
    if a3 * a3 - 3 != 1:
        raise CurveValidationError("a_9 = a_3^2 - 3 != 1 for the twist-minimal curve")

    twists = {1: False, -1: False, 2: False, -2: False}
    test_primes = [l for l in range(3, 500) if is_prime(l)]
    for c in curves:
        match = None
        for d in twists:
            if all(
                ap_point_count(c, l) == _kronecker(d, l) * ap_point_count(fmin, l)
                for l in test_primes
            ):
                match = d
                break
        if match is None or twists[match]:
            raise CurveValidationError(f"{c.label} is not a fresh quadratic twist")
        twists[match] = True
    if not all(twists.values()):
        raise CurveValidationError("twist classes {1,-1,2,-2} not all realized")
    return curves


def _kronecker(d: int, l: int) -> int:
    # d in {1, -1, 2, -2}, l odd prime
    if d == 1:
        return 1
    if d == -1:
        return 1 if l % 4 == 1 else -1
    if d == 2:
        return 1 if l % 8 in (1, 7) else -1
    return _kronecker(-1, l) * _kronecker(2, l)


def twist_minimal_curve(curves: list[EllipticCurveZ]) -> EllipticCurveZ:
    for c in curves:
        if all(ap_point_count(c, l) == a for l, a in QEXPANSION_ANCHORS.items()):
            return c
    raise CurveValidationError("no curve matches the twist-minimal q-expansion")


# ---------------------------------------------------------------------------
# auxiliary-prime conditions and residue sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxConditions:
    p: int
    l: int
    n: int | None
    is_np_plus_1: bool
    is_pm1_mod_8: bool
    trace_ok: bool
    unit_dlog_ok: bool
    a_l: int | None = None
    theta: int | None = None

    @property
    def all_pass(self) -> bool:
        return (
            self.is_np_plus_1
            and self.is_pm1_mod_8
            and self.trace_ok
            and self.unit_dlog_ok
        )


def aux_conditions(p: int, l: int, F: EllipticCurveZ) -> AuxConditions:
    """The four admissibility conditions for an auxiliary prime l.

    (1) l = np+1; (2) l = +-1 mod 8 (so 2 is a square mod l); (3) the trace
    a_l(F) is not +-(l+1) mod p; (4) (1+theta)^n != 1 mod l for theta the
    square root of 2.  Conditions beyond the first are evaluated lazily.
    """
    if not is_prime(l):
        raise ValueError(f"l must be prime, got {l}")
    n, rem = divmod(l - 1, p)
    c1 = rem == 0 and n >= 1
    if not c1:
        return AuxConditions(p, l, None, False, False, False, False)
    c2 = l % 8 in (1, 7)
    a_l = ap_point_count(F, l)
    c3 = (a_l - (l + 1)) % p != 0 and (a_l + (l + 1)) % p != 0
    theta = sqrt_mod(2, l) if c2 else None
    c4 = c2 and modpow(1 + theta, n, l) != 1
    return AuxConditions(
        p, l, n, c1, c2, c3, c4, a_l=a_l, theta=theta
    )


@dataclass(frozen=True)
class ResidueSetResult:
    p: int
    l: int
    n: int
    primitive_root: int
    theta: int
    R: frozenset[int]
    X_size: int


def _dlog_map(g: int, l: int, expected_lookups: int) -> list[int] | None:
    """Full index table for F_l^*, or None when per-element BSGS is cheaper.

    The table costs O(l) to build; baby-step/giant-step costs O(sqrt l)
    per lookup, so few lookups on a large field should skip the table.
    """
    if l > _DLOG_TABLE_LIMIT or expected_lookups * math.isqrt(l) < l:
        return None
    table = [0] * l
    e = 1
    for k in range(l - 1):
        table[e] = k
        e = e * g % l
    return table


def residue_set(p: int, l: int, F: EllipticCurveZ) -> ResidueSetResult:
    """The set R_l(F) of residues mod p admissible for the unit exponent.

    Builds mu_n = n-th roots of unity in F_l, X'_l = {delta : delta^2 - 2
    in mu_n}, filters by the trace congruence a_l(E_delta) = a_l(F) mod p,
    and maps through Phi = (index mod l-1) reduced mod p, divided by
    Phi(1+theta).  Condition (4) guarantees the division is legal.
    """
    cond = aux_conditions(p, l, F)
    if not cond.all_pass:
        raise ValueError(f"conditions fail for p={p}, l={l}: {cond}")
    n = cond.n
    theta = cond.theta
    g = smallest_primitive_root(l)
    logs = _dlog_map(g, l, expected_lookups=2 * n + 1)

    def phi_mod_p(x: int) -> int:
        k = logs[x] if logs is not None else discrete_log(g, x, l)
        return k % p

    phi_unit = phi_mod_p((1 + theta) % l)
    assert phi_unit % p != 0, "condition (4) violated after the fact"
    inv_unit = pow(phi_unit, -1, p)

    # mu_n as the image of the index-p subgroup
    h = pow(g, p, l)
    mu_n = set()
    e = 1
    for _ in range(n):
        mu_n.add(e)
        e = e * h % l
    chi = _chi_table(l)
    target = ap_point_count(F, l, chi) % p
    out = set()
    x_size = 0
    for m in mu_n:
        root = sqrt_mod(m + 2, l)
        if root is None:
            continue
        for delta in {root, (l - root) % l}:
            # delta^2 - 2 = m != 0, so E_delta is nonsingular mod l
            x_size += 1
            if _frey_ap(delta, l, chi) % p == target:
                out.add(phi_mod_p((delta + theta) % l) * inv_unit % p)
    return ResidueSetResult(
        p=p, l=l, n=n, primitive_root=g, theta=theta, R=frozenset(out), X_size=x_size
    )


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertPrime:
    l: int
    n: int
    primitive_root: int
    R_set: tuple[int, ...]


@dataclass(frozen=True)
class RCertificate:
    p: int
    curve_label: str
    primes: tuple[CertPrime, ...]
    intersection: tuple[int, ...]

    def to_json(self) -> str:
        obj = {
            "p": self.p,
            "curve_label": self.curve_label,
            "primes": [
                {
                    "l": cp.l,
                    "n": cp.n,
                    "primitive_root": cp.primitive_root,
                    "R_set": list(cp.R_set),
                }
                for cp in self.primes
            ],
            "intersection": list(self.intersection),
        }
        return json.dumps(obj, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "RCertificate":
        obj = json.loads(text)
        return cls(
            p=int(obj["p"]),
            curve_label=str(obj["curve_label"]),
            primes=tuple(
                CertPrime(
                    l=int(e["l"]),
                    n=int(e["n"]),
                    primitive_root=int(e["primitive_root"]),
                    R_set=tuple(int(v) for v in e["R_set"]),
                )
                for e in obj["primes"]
            ),
            intersection=tuple(int(v) for v in obj["intersection"]),
        )


def _subset_pm1(values: frozenset[int], p: int) -> bool:
    return values <= {1, p - 1}


def generate_certificate(
    p: int, curve: EllipticCurveZ, n_max: int | None = None
) -> RCertificate:
    """Accumulate auxiliary primes l = np+1 (n ascending) until the
    intersection of residue sets is inside {1, -1} mod p.

    Only primes passing all four conditions contribute and every
    contributing prime is recorded.  Raises CertificateSearchError with the
    residual set when n_max is exhausted first.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if n_max is None:
        n_max = max(10**6 // p, 8)
    used: list[CertPrime] = []
    inter: frozenset[int] | None = None
    for n in range(2, n_max + 1, 2):
        l = n * p + 1
        if not is_prime(l):
            continue
        cond = aux_conditions(p, l, curve)
        if not cond.all_pass:
            continue
        rs = residue_set(p, l, curve)
        new_inter = rs.R if inter is None else inter & rs.R
        if inter is not None and new_inter == inter:
            continue  # no progress from this prime; skip it
        inter = new_inter
        used.append(
            CertPrime(
                l=l,
                n=n,
                primitive_root=rs.primitive_root,
                R_set=tuple(sorted(rs.R)),
            )
        )
        if _subset_pm1(inter, p):
            return RCertificate(
                p=p,
                curve_label=curve.label,
                primes=tuple(used),
                intersection=tuple(sorted(inter)),
            )
    residual = inter if inter is not None else frozenset(range(p))
    raise CertificateSearchError(p, curve.label, frozenset(residual), len(used))


def verify_certificate(
    cert: RCertificate, curves: list[EllipticCurveZ]
) -> tuple[bool, str | None]:
    """Recompute every condition and residue set from scratch.

    Uses only the certificate and the curve data; returns (False, reason)
    on the first mismatch, (True, None) when everything checks out and the
    recomputed intersection is contained in {1, -1} mod p.
    """
    p = cert.p
    by_label = {c.label: c for c in curves}
    if cert.curve_label not in by_label:
        return False, f"unknown curve label {cert.curve_label}"
    curve = by_label[cert.curve_label]
    if not cert.primes:
        return False, "certificate lists no auxiliary primes"
    inter: frozenset[int] | None = None
    for entry in cert.primes:
        if entry.l != entry.n * p + 1:
            return False, f"l={entry.l} is not n*p+1 for n={entry.n}"
        cond = aux_conditions(p, entry.l, curve)
        if not cond.all_pass:
            return False, f"conditions fail at l={entry.l}"
        if smallest_primitive_root(entry.l) != entry.primitive_root:
            return False, f"primitive root mismatch at l={entry.l}"
        rs = residue_set(p, entry.l, curve)
        if tuple(sorted(rs.R)) != entry.R_set:
            return False, f"residue set mismatch at l={entry.l}"
        inter = rs.R if inter is None else inter & rs.R
    if tuple(sorted(inter)) != cert.intersection:
        return False, "stored intersection does not match recomputation"
    if not _subset_pm1(inter, p):
        return False, f"intersection {sorted(inter)} exceeds {{1, -1}}"
    return True, None


# ---------------------------------------------------------------------------
# trace scan and the closed-form coefficient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApScanRow:
    p: int
    a_p: int
    a_p_mod_p: int
    a_p_sq_mod_p: int
    not_pm1: bool
    sq_not_1: bool


def trace_scan(p_max: int, F: EllipticCurveZ) -> list[ApScanRow]:
    """Trace scan: a_p(F) for 5 <= p < p_max, both readings of the +-1 test.

    The two conditions a_p != +-1 (mod p) and a_p^2 != 1 (mod p) coincide
    for prime modulus; both are recorded rather than picking one.
    """
    rows = []
    p = 5
    while p < p_max:
        a = ap_point_count(F, p)
        rows.append(
            ApScanRow(
                p=p,
                a_p=a,
                a_p_mod_p=a % p,
                a_p_sq_mod_p=a * a % p,
                not_pm1=a % p not in (1, p - 1),
                sq_not_1=a * a % p != 1,
            )
        )
        from .numerics import next_prime

        p = next_prime(p)
    return rows


def ap_formula(p: int) -> int:
    """Newform coefficient a_p for p odd prime, p != 3 (mod 8), closed form.

    (1/2) * chi_8(p) * sum over all representations p = a^2+2b^2+4c^2+8d^2
    of (-1)^d, by bounded exhaustive enumeration (a odd by parity; signs
    counted via multiplicities).  The p = 3 (mod 8) coefficient does not
    reduce to a single quadratic form and is rejected.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if p % 8 == 3:
        raise ValueError("p = 3 (mod 8) is outside the closed form")
    total = 0
    a = 1
    while a * a <= p:
        ra = p - a * a
        b = 0
        while 2 * b * b <= ra:
            rb = ra - 2 * b * b
            c = 0
            while 4 * c * c <= rb:
                rc = rb - 4 * c * c
                if rc % 8 == 0:
                    d = math.isqrt(rc // 8)
                    if 8 * d * d == rc:
                        mult = 2  # sign of a
                        for v in (b, c, d):
                            if v:
                                mult *= 2
                        total += mult * (-1) ** d
                c += 1
            b += 1
        a += 2
    chi8 = 1 if p % 8 in (1, 3) else -1
    assert total % 2 == 0
    return chi8 * total // 2
