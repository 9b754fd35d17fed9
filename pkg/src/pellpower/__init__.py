"""Verification toolkit for the Diophantine equation x^2 - 2 = y^p.

Subpackages cover the elementary congruence sieve, exact Thue-form
analysis over Z[sqrt(2)], lower bounds for the linear form in two
logarithms with their parameter tuning, modular r = +-1 certificates,
continued-fraction elimination of small solutions, and local solution
counts.  The `pellpower` CLI wraps each piece as a verifiable command.
"""

from .elementary import (
    CandidateSolution,
    direct_search,
    expansion_identities,
    power_quotient_properties,
    sieve_check,
    unit_power_pair,
    wieferich_check,
)
from .linear_forms import (
    g_function,
    g_upper,
    g_upper_constants,
    lambda_upper,
    large_y_constants,
    monotonicity_guard,
    param_search,
    solve_critical_system,
    stirling_bounds,
    thm1_bound,
    thm1_cardinalities,
    thm2_lower_bound,
    verify_table,
    verify_table_row,
)
from .local_count import brute_force_count, count_mod_n, count_mod_prime_power
from .modular_certificates import (
    ap_formula,
    ap_point_count,
    aux_conditions,
    generate_certificate,
    load_curves,
    residue_set,
    trace_scan,
    verify_certificate,
)
from .numerics import (
    BigReal,
    Zsqrt2,
    QuadRing,
    certified_sign,
    discrete_log,
    legendre,
    modpow,
    sqrt_mod,
    valuation,
)
from .small_y import (
    certify_small_y,
    contfrac_theta,
    lower_bound_b,
    propagate_bounds,
    quotient_ceiling,
)
from .thue_core import (
    all_roots,
    discriminant_formula,
    discriminant_resultant,
    galois_action_check,
    im_product,
    real_root_theta,
    thue_coeffs,
    thue_eval,
)

__version__ = "0.1.0"
