"""Command-line front end: every subcommand wraps a library call, verifies
a claim, and reports through the exit code.

Exit conventions: 0 = claim verified, 2 = claim refuted or not certified
(the math failed, not the program), 1 = operational error, 64 = usage.
Artifacts are JSON/CSV with canonical key order, written atomically; long
scans checkpoint their per-item results and can --resume.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from multiprocessing import Pool

from . import elementary, linear_forms, local_count, modular_certificates, small_y
from . import thue_core
from .numerics import is_prime, next_prime, primes_in

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CLAIM_FAILED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# persistence helpers
# ---------------------------------------------------------------------------


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _config_hash(command: str, params: dict) -> str:
    return hashlib.sha256(_canonical({"command": command, **params}).encode()).hexdigest()[:16]


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Artifacts:
    """Output directory with a per-run manifest; inert when out_dir is None."""

    def __init__(self, out_dir: str | None, command: str, params: dict):
        self.out_dir = out_dir
        self.command = command
        self.params = params
        self.hash = _config_hash(command, params)
        self.written: list[str] = []

    def emit(self, name: str, obj) -> None:
        if self.out_dir is None:
            return
        path = os.path.join(self.out_dir, name)
        text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True, indent=1)
        _atomic_write(path, text)
        self.written.append(name)

    def finish(self) -> None:
        if self.out_dir is None:
            return
        manifest = {
            "command": self.command,
            "config": self.params,
            "config_hash": self.hash,
            "artifacts": sorted(self.written),
        }
        _atomic_write(
            os.path.join(self.out_dir, f"manifest-{self.command}.json"),
            json.dumps(manifest, sort_keys=True, indent=1),
        )

    # -- checkpointing for long scans
    def _ckpt_path(self) -> str | None:
        if self.out_dir is None:
            return None
        return os.path.join(self.out_dir, f"checkpoint-{self.command}.json")

    def load_checkpoint(self, resume: bool) -> dict:
        path = self._ckpt_path()
        if not resume or path is None or not os.path.exists(path):
            return {}
        with open(path) as fh:
            data = json.load(fh)
        if data.get("config_hash") != self.hash:
            return {}
        return data.get("done", {})

    def save_checkpoint(self, done: dict) -> None:
        path = self._ckpt_path()
        if path is None:
            return
        _atomic_write(
            path,
            json.dumps({"config_hash": self.hash, "done": done}, sort_keys=True, indent=1),
        )


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with Pool(processes=workers) as pool:
        return pool.map(fn, items)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sieve(args) -> int:
    exact = args.x * args.x - 2 == args.y**args.p
    if not exact and not args.synthetic:
        print(f"x^2 - 2 != y^p for ({args.x}, {args.y}, {args.p}); "
              "pass --synthetic to run the conditions anyway", file=sys.stderr)
        return EXIT_ERROR
    report = elementary.sieve_check(args.x, args.y, args.p, trial_bound=args.trial_bound)
    out = {
        "x": args.x, "y": args.y, "p": args.p, "exact": exact,
        "conditions": report.conditions, "passed": report.passed,
        "unverified_cofactor": report.unverified_cofactor,
    }
    print(json.dumps(out, sort_keys=True, indent=1))
    return EXIT_OK if report.passed else EXIT_CLAIM_FAILED


def cmd_thue_info(args) -> int:
    f = thue_core.thue_coeffs(args.p, args.r)
    theta = thue_core.real_root_theta(args.p, args.r, args.precision_bits)
    roots = thue_core.all_roots(args.p, args.r, args.precision_bits)
    out = {
        "p": args.p,
        "r": args.r,
        "coeffs": list(f.coeffs),
        "theta": theta.digits(25),
        "precision_bits": args.precision_bits,
        "n_roots": len(roots.roots),
        "max_residual": roots.max_residual,
        "discriminant_formula": str(thue_core.discriminant_formula(args.p)),
    }
    print(json.dumps(out, sort_keys=True, indent=1))
    return EXIT_OK


def cmd_disc_check(args) -> int:
    rs = [int(v) for v in args.r.split(",")]
    want = thue_core.discriminant_formula(args.p)
    ok = True
    for r in rs:
        got = thue_core.discriminant_resultant(args.p, r)
        match = got == want
        ok = ok and match
        print(f"p={args.p} r={r}: formula {want} == resultant {got}: {match}")
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def _check_close(got, want, rel=1e-3) -> bool:
    return abs(got - want) <= rel * abs(want)


def cmd_bound_initial(args) -> int:
    """General-mode pipeline: critical point, envelope negativity, guard,
    and the finite sweep closing the gap down to the claimed bound."""
    art = _Artifacts(args.out, "bound-initial", {})
    p_star, mu_star, rho_star, residual = linear_forms.solve_critical_system(23.0, "general")
    anchors_ok = (
        _check_close(p_star, 6950.6)
        and _check_close(mu_star, 0.508613)
        and _check_close(rho_star, 7.99202)
    )
    consts = linear_forms.g_upper_constants(mu_star, rho_star, 6959, "general")
    neg1 = linear_forms.g_upper_negative(23, 6993, consts)
    neg2 = linear_forms.g_upper_negative(31, 6959, consts)
    guard_ok, guard_failed = linear_forms.monotonicity_guard(consts, 23, 6993)
    sweep = {}
    for p in primes_in(6959, 6992):
        sweep[p] = (
            linear_forms.certified_sign(lambda: -linear_forms.g_function(23, p, mu_star, rho_star)) > 0
        )
    out = {
        "critical_point": {"p": p_star, "mu": mu_star, "rho": rho_star, "residual": residual},
        "anchors_within_0.1pct": anchors_ok,
        "g_upper_negative_at": {"(23,6993)": neg1, "(31,6959)": neg2},
        "monotonicity_guard": guard_ok,
        "guard_failures": guard_failed,
        "finite_sweep_negative": sweep,
        "claim": "no nontrivial solutions for p > 6949",
    }
    print(json.dumps(out, sort_keys=True, indent=1))
    art.emit("bound-initial.json", out)
    art.finish()
    ok = anchors_ok and neg1 and neg2 and guard_ok and all(sweep.values())
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def cmd_bound_improved(args) -> int:
    """Unit-mode (r = +-1) pipeline lowering the bound to p <= 1951."""
    art = _Artifacts(args.out, "bound-improved", {})
    p_star, rho_star, residual = linear_forms.solve_critical_system(23.0, "unit")
    anchors_ok = _check_close(p_star, 1971.41) and _check_close(rho_star, 22.5978)
    consts = linear_forms.g_upper_constants(1 / 3, rho_star, 1973, "unit")
    neg = linear_forms.g_upper_negative(23, 1973, consts)
    guard_ok, guard_failed = linear_forms.monotonicity_guard(consts, 23, 1973)
    gap_ok = next_prime(1951) == 1973
    out = {
        "critical_point": {"p": p_star, "rho": rho_star, "mu": 1 / 3, "residual": residual},
        "anchors_within_0.1pct": anchors_ok,
        "g_upper_negative_at_(23,1973)": neg,
        "monotonicity_guard": guard_ok,
        "guard_failures": guard_failed,
        "no_prime_between_1951_and_1973": gap_ok,
        "claim": "no nontrivial solutions for p > 1951 (given r = +-1)",
    }
    print(json.dumps(out, sort_keys=True, indent=1))
    art.emit("bound-improved.json", out)
    art.finish()
    ok = anchors_ok and neg and guard_ok and gap_ok
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def _table_worker(task):
    row_tuple, p = task
    row = linear_forms.TableRow(*row_tuple)
    rec = linear_forms.large_y_constants(
        p, row.K_prime, row.L, row.R1, row.R2, row.mu, row.rho, y_exp=row.y_exp
    )
    return p, rec.conclusion, list(rec.failed)


def cmd_table1_verify(args) -> int:
    rows = linear_forms.load_table_rows(args.table)
    params = {"table": args.table or "builtin"}
    art = _Artifacts(args.out, "table1-verify", params)
    done = art.load_checkpoint(args.resume)
    tasks = []
    seen: set[int] = set()
    for row in rows:
        for p in primes_in(row.p_lo, row.p_hi):
            if p in seen:
                continue
            seen.add(p)
            if str(p) not in done:
                tasks.append((tuple(row.__dict__.values()), p))
    results = _pmap(_table_worker, tasks, args.workers)
    for p, ok, failed in results:
        done[str(p)] = {"passed": ok, "failed": failed}
        art.save_checkpoint(done)
    all_ok = all(v["passed"] for v in done.values())
    summary = {
        "primes_checked": len(done),
        "passed": all_ok,
        "failures": {k: v for k, v in done.items() if not v["passed"]},
    }
    print(json.dumps(summary, sort_keys=True, indent=1))
    art.emit("table1-verify.json", summary)
    art.finish()
    return EXIT_OK if all_ok else EXIT_CLAIM_FAILED


def cmd_r_cert_generate(args) -> int:
    curves = modular_certificates.load_curves(args.curves)
    ps = [int(v) for v in args.p.split(",")]
    params = {"p": ps, "budget": args.budget}
    art = _Artifacts(args.out, "r-cert-generate", params)
    all_ok = True
    for p in ps:
        for curve in curves:
            try:
                cert = modular_certificates.generate_certificate(p, curve, n_max=args.budget)
            except modular_certificates.CertificateSearchError as e:
                print(f"p={p} {curve.label}: FAILED ({e})")
                all_ok = False
                continue
            ok, why = modular_certificates.verify_certificate(cert, curves)
            name = f"rcert-p{p}-{curve.label}.json"
            art.emit(name, cert.to_json())
            print(
                f"p={p} {curve.label}: primes={[e.l for e in cert.primes]} "
                f"intersection={list(cert.intersection)} verified={ok}"
            )
            all_ok = all_ok and ok and not why
    art.finish()
    return EXIT_OK if all_ok else EXIT_CLAIM_FAILED


def cmd_r_cert_verify(args) -> int:
    if not os.path.exists(args.file):
        print(f"no such certificate file: {args.file}", file=sys.stderr)
        return EXIT_ERROR
    curves = modular_certificates.load_curves(args.curves)
    with open(args.file) as fh:
        cert = modular_certificates.RCertificate.from_json(fh.read())
    ok, why = modular_certificates.verify_certificate(cert, curves)
    print(f"{args.file}: verified={ok}" + (f" reason={why}" if why else ""))
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


def _smally_worker(task):
    p, target_exp, start_bits = task
    rep = small_y.lower_bound_b(p, 10**target_exp, start_bits=start_bits)
    return p, rep.to_dict()


def cmd_smally_certify(args) -> int:
    if args.p_list:
        ps = [int(v) for v in args.p_list.split(",")]
    else:
        lo, hi = (int(v) for v in args.p_range.split(":"))
        ps = list(primes_in(lo, hi))
    if args.chen_filter:
        ps = [p for p in ps if p % 24 in small_y.CHEN_REMAINING_CLASSES]
    params = {"p": ps, "target_exp": args.target_exp}
    art = _Artifacts(args.out, "smally-certify", params)
    done = art.load_checkpoint(args.resume)
    tasks = [(p, args.target_exp, args.precision_bits if args.precision_bits != 128 else None)
             for p in ps if str(p) not in done]
    for p, rep in _pmap(_smally_worker, tasks, args.workers):
        done[str(p)] = rep
        art.save_checkpoint(done)
    all_ok = all(v["status"] == "ok" for v in done.values())
    summary = {
        "target": f"1e{args.target_exp}",
        "primes": {k: {kk: v[kk] for kk in ("status", "terms", "precision_bits", "Q_final_digits")}
                   for k, v in sorted(done.items(), key=lambda kv: int(kv[0]))},
        "passed": all_ok,
    }
    print(json.dumps(summary, sort_keys=True, indent=1))
    art.emit("smally-certify.json", {"summary": summary, "reports": done})
    art.finish()
    return EXIT_OK if all_ok else EXIT_CLAIM_FAILED


def cmd_local_count(args) -> int:
    if args.sweep_max is not None:
        lines = ["p,q,s,case,count,d"]
        ok = True
        q = 2
        while q <= args.sweep_max:
            if is_prime(q):
                s = 1
                while q**s <= args.sweep_max:
                    rep = local_count.count_mod_prime_power(args.p, q, s)
                    if args.brute:
                        ok = ok and rep.count == local_count.brute_force_count(args.p, q**s)
                    lines.append(
                        f"{args.p},{q},{s},{rep.case},{rep.count},{'' if rep.d is None else rep.d}"
                    )
                    s += 1
            q += 1
        text = "\n".join(lines) + "\n"
        print(text, end="")
        art = _Artifacts(args.out, "local-count", {"p": args.p, "sweep": args.sweep_max})
        art.emit(f"local-count-p{args.p}.csv", text)
        art.finish()
        return EXIT_OK if ok else EXIT_CLAIM_FAILED
    count = local_count.count_mod_n(args.p, args.n)
    print(f"count(p={args.p}, n={args.n}) = {count}")
    if args.brute:
        got = local_count.brute_force_count(args.p, args.n)
        print(f"brute force: {got}")
        if got != count:
            return EXIT_CLAIM_FAILED
    return EXIT_OK


def cmd_ap_formula(args) -> int:
    curves = modular_certificates.load_curves(args.curves)
    F = modular_certificates.twist_minimal_curve(curves)
    if args.max is not None:
        bad = []
        for p in primes_in(3, args.max - 1):
            if p % 8 == 3:
                continue
            if modular_certificates.ap_formula(p) != modular_certificates.ap_point_count(F, p):
                bad.append(p)
        print(f"checked odd primes < {args.max} (p != 3 mod 8): mismatches = {bad}")
        return EXIT_OK if not bad else EXIT_CLAIM_FAILED
    val = modular_certificates.ap_formula(args.p)
    cnt = modular_certificates.ap_point_count(F, args.p)
    print(f"a_{args.p}: formula {val}, point count {cnt}")
    return EXIT_OK if val == cnt else EXIT_CLAIM_FAILED


def cmd_wieferich_scan(args) -> int:
    found = elementary.wieferich_scan(args.max)
    print(f"Wieferich primes below {args.max}: {found}")
    if args.expect_none and found:
        return EXIT_CLAIM_FAILED
    return EXIT_OK


def cmd_section8_scan(args) -> int:
    curves = modular_certificates.load_curves(args.curves)
    F = modular_certificates.twist_minimal_curve(curves)
    rows = modular_certificates.trace_scan(args.max, F)
    violations = [r.p for r in rows if not r.not_pm1]
    art = _Artifacts(args.out, "section8-scan", {"max": args.max})
    lines = ["p,a_p,a_p_mod_p,a_p_sq_mod_p,not_pm1,sq_not_1"]
    lines += [
        f"{r.p},{r.a_p},{r.a_p_mod_p},{r.a_p_sq_mod_p},{r.not_pm1},{r.sq_not_1}"
        for r in rows
    ]
    art.emit("section8-scan.csv", "\n".join(lines) + "\n")
    art.finish()
    print(f"scanned 5 <= p < {args.max}: violations of a_p != +-1 (mod p): {violations}")
    return EXIT_OK if not violations else EXIT_CLAIM_FAILED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    top = _Parser(prog="pellpower", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--precision-bits", type=int, default=128)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--curves", default=None, help="path to the curve asset JSON")
        p.add_argument("--out", default=None, help="artifact output directory")
        p.add_argument("--resume", action="store_true")
        p.add_argument("--trial-bound", type=int, default=elementary.DEFAULT_TRIAL_BOUND)

    p = sub.add_parser("sieve", help="congruence sieve on a solution triple")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--synthetic", action="store_true",
                   help="run the conditions even if x^2-2 != y^p")
    common(p)
    p.set_defaults(fn=cmd_sieve)

    p = sub.add_parser("thue-info", help="coefficients, real root, discriminant")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    common(p)
    p.set_defaults(fn=cmd_thue_info)

    p = sub.add_parser("disc-check", help="discriminant formula vs resultant oracle")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", default="1,2,-1", help="comma-separated twist indices")
    common(p)
    p.set_defaults(fn=cmd_disc_check)

    p = sub.add_parser("bound-initial", help="verify the first exponent bound")
    common(p)
    p.set_defaults(fn=cmd_bound_initial)

    p = sub.add_parser("bound-improved", help="verify the unit-mode exponent bound")
    common(p)
    p.set_defaults(fn=cmd_bound_improved)

    p = sub.add_parser("table1-verify", help="verify the bundled parameter table")
    p.add_argument("--table", default=None, help="CSV path (default: packaged table)")
    common(p)
    p.set_defaults(fn=cmd_table1_verify)

    p = sub.add_parser("r-cert-generate", help="generate r = +-1 certificates")
    p.add_argument("--p", required=True, help="comma-separated primes")
    common(p)
    p.set_defaults(fn=cmd_r_cert_generate)

    p = sub.add_parser("r-cert-verify", help="re-verify a certificate file")
    p.add_argument("--file", required=True)
    common(p)
    p.set_defaults(fn=cmd_r_cert_verify)

    p = sub.add_parser("smally-certify", help="continued-fraction lower bounds on |b|")
    p.add_argument("--p-list", default=None, help="comma-separated primes")
    p.add_argument("--p-range", default=None, help="lo:hi inclusive prime range")
    p.add_argument("--target-exp", type=int, default=1000, help="target 10^N")
    p.add_argument("--chen-filter", action="store_true",
                   help="skip residue classes settled by the modular method")
    common(p)
    p.set_defaults(fn=cmd_smally_certify)

    p = sub.add_parser("local-count", help="solution counts modulo n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--sweep-max", type=int, default=None,
                   help="emit CSV for all prime powers up to this bound")
    p.add_argument("--brute", action="store_true", help="cross-check by enumeration")
    common(p)
    p.set_defaults(fn=cmd_local_count)

    p = sub.add_parser("ap-formula", help="newform coefficient formula vs point count")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--max", type=int, default=None, help="sweep all primes below")
    common(p)
    p.set_defaults(fn=cmd_ap_formula)

    p = sub.add_parser("wieferich-scan", help="scan for Wieferich primes")
    p.add_argument("--max", type=int, default=1000)
    p.add_argument("--expect-none", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_wieferich_scan)

    p = sub.add_parser("section8-scan", help="trace scan a_p != +-1 (mod p)")
    p.add_argument("--max", type=int, default=5000)
    common(p)
    p.set_defaults(fn=cmd_section8_scan)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "local-count" and args.n is None and args.sweep_max is None:
        parser.error("local-count needs --n or --sweep-max")
    if args.command == "smally-certify" and not (args.p_list or args.p_range):
        parser.error("smally-certify needs --p-list or --p-range")
    if args.command == "ap-formula" and args.p is None and args.max is None:
        parser.error("ap-formula needs --p or --max")
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
