"""Command-line front end: one subcommand per computation, CSV or JSON on stdout.

Exit codes: 0 on success, 1 on a usage error (the message names the flag),
2 when a hard check fails (the message names the identity).  Every row carries
q, the modulus code, D = deg Q - 1, the subcommand and a short tag naming the
identity or bound it reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import acceptance, chars, lfun, moments, multfn, sieve
from .errors import FFMError, IdentityViolation, UsageError
from .ffq import field_from_q
from .polyring import (
    Poly,
    enumerate_irreducibles,
    enumerate_monic,
    factor,
    parse_poly,
    prime_count,
    prime_count_formula,
)

FORMATS = ("csv", "json")
CONTEXT = ("q", "modulus", "D", "subcommand", "paper_ref")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- value encoding -------------------------------------------------------------------


def _scalar(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, Poly):
        return v.code
    return v


def flatten(row: dict) -> dict:
    """Complex values become name_re/name_im; rationals become "num/den" strings."""
    out = {}
    for k, v in row.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}_re"] = float(v.real)
            out[f"{k}_im"] = float(v.imag)
        elif isinstance(v, np.ndarray):
            continue
        elif isinstance(v, dict):
            out.update(flatten({f"{k}_{kk}": vv for kk, vv in v.items()}))
        else:
            out[k] = _scalar(v)
    return out


def emit(rows: list, fmt: str, stream) -> None:
    if fmt == "json":
        # strict JSON: non-finite floats become null
        clean = [{k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.items()} for r in rows]
        json.dump(clean, stream, indent=1, default=str, allow_nan=False)
        stream.write("\n")
        return
    header = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    w = csv.DictWriter(stream, fieldnames=header, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("true" if v is True else "false" if v is False else v) for k, v in r.items()})


def _row_of(obj) -> dict:
    if is_dataclass(obj):
        return {k: v for k, v in asdict(obj).items()}
    return dict(obj)


# -- argument helpers -------------------------------------------------------------------


def _field(args):
    try:
        return field_from_q(_parse_q(args.q))
    except FFMError as exc:
        raise UsageError(f"--q: {exc}") from None


def _parse_q(text) -> int:
    text = str(text).strip()
    try:
        if "^" in text:
            p, n = text.split("^")
            return int(p) ** int(n)
        return int(text)
    except ValueError:
        raise UsageError(f"--q: cannot read {text!r} (expected q or p^n)") from None


def _poly(F, text: str, flag: str) -> Poly:
    try:
        return parse_poly(F, text)
    except FFMError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _modulus(F, args) -> Poly:
    text = getattr(args, "modulus", None)
    if text is None:
        raise UsageError("--modulus is required (coefficients c0,c1,... or deg:<n>)")
    if text.startswith("deg:"):
        try:
            n = int(text[4:])
        except ValueError:
            raise UsageError(f"--modulus: bad degree in {text!r}") from None
        if n < 2:
            raise UsageError("--modulus: degree must be >= 2")
        return moments.first_irreducible(F, n)
    Q = _poly(F, text, "--modulus")
    if not Q.is_monic():
        raise UsageError(f"--modulus: {Q} is not monic")
    if Q.degree < 2:
        raise UsageError("--modulus: degree must be >= 2")
    from .polyring import is_irreducible

    if not is_irreducible(Q):
        raise UsageError(f"--modulus: {Q} is not irreducible")
    return Q


def _table(F, args):
    try:
        return chars.unit_group(_modulus(F, args))
    except FFMError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"--modulus: {exc}") from None


def _ctx(q, Q: Poly | None, cmd: str, ref: str) -> dict:
    return dict(q=q, modulus=Q.code if Q is not None else "", D=Q.degree - 1 if Q is not None else "",
                subcommand=cmd, paper_ref=ref)


def _with_ctx(ctx: dict, row: dict) -> dict:
    out = dict(ctx)
    out.update(flatten(row))
    return out


def _chars_selected(table, args) -> np.ndarray:
    js = np.arange(1, table.M)
    limit = getattr(args, "limit", None)
    return js[:limit] if limit else js


def _pmap(fn, items, threads: int) -> list:
    """Ordered map; the pool only changes scheduling, never the output order."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


# -- subcommands --------------------------------------------------------------------------


def cmd_field(args):
    F = _field(args)
    mod = Poly(field_from_q(F.p), F.modulus) if F.n > 1 else None
    row = dict(p=F.p, n=F.n, order=F.q, modulus_poly=str(mod) if mod else "", generator=F.generator)
    return [_with_ctx(_ctx(F.q, None, "field", "finite field F_q"), row)], []


def cmd_enumerate(args):
    F = _field(args)
    polys = enumerate_irreducibles(F, args.deg) if args.irreducible else enumerate_monic(F, args.deg)
    ctx = _ctx(F.q, None, "enumerate", "irreducibles" if args.irreducible else "monic polynomials")
    return [_with_ctx(ctx, dict(code=P.code, poly=str(P), degree=P.degree)) for P in polys], []


def cmd_factor(args):
    F = _field(args)
    N = _poly(F, args.poly, "--poly")
    if N.is_zero():
        raise UsageError("--poly: cannot factor 0")
    fac = factor(N)
    ctx = _ctx(F.q, None, "factor", "unique factorization")
    rows = [_with_ctx(ctx, dict(N=N.code, unit=fac.unit, factor=P.code, factor_poly=str(P), exponent=e))
            for P, e in fac.factors]
    if fac.expand(F) != N:
        return rows, [IdentityViolation("unique factorization", f"product of factors != {N}")]
    return rows, []


def cmd_pi(args):
    F = _field(args)
    rows, errs = [], []
    ctx = _ctx(F.q, None, "pi", "prime polynomial theorem")
    for n in range(1, args.n + 1):
        formula = prime_count_formula(F.q, n)
        row = dict(n=n, formula=formula)
        if F.q**n <= args.enum_limit:
            count = prime_count(F, n)
            row["enumerated"] = count
            if count != formula:
                errs.append(IdentityViolation("prime polynomial theorem", f"n={n}: {count} != {formula}"))
        row["bound_holds"] = n * formula <= F.q**n
        rows.append(_with_ctx(ctx, row))
    return rows, errs


def cmd_chars(args):
    F = _field(args)
    t = _table(F, args)
    ctx = _ctx(F.q, t.Q, "chars", "character group")
    mask = chars.even_mask(t)
    rows = [_with_ctx(ctx, dict(j=int(j), order=t.M // math.gcd(int(j), t.M), even=bool(mask[j])))
            for j in _chars_selected(t, args)]
    orth = chars.orthogonality_check(t)
    errs = [] if orth.ok else [IdentityViolation("orthogonality relations", f"max err {orth.max_err_chars:.2e}")]
    return rows, errs


def cmd_lvalues(args):
    F = _field(args)
    t = _table(F, args)
    fam = lfun.LFamily.build(t)
    ctx = _ctx(F.q, t.Q, "lvalues", "L-polynomial and central value")
    cv = fam.central_values()
    rows = []
    for j in _chars_selected(t, args):
        row = dict(j=int(j), even=bool(fam.even[j]), central=complex(cv[j]), central_abs=float(abs(cv[j])))
        for n, c in enumerate(fam.coeffs[j]):
            row[f"L{n}"] = complex(c)
        rows.append(_with_ctx(ctx, row))
    return rows, []


def cmd_epsilon(args):
    F = _field(args)
    t = _table(F, args)
    fam = lfun.LFamily.build(t)
    ctx = _ctx(F.q, t.Q, "epsilon", "functional equation and root number")
    per = {}
    for g in fam.completed():
        roots = lfun.lambda_roots(g["poly"], F.q)
        dev = np.abs(np.abs(roots) - F.q**-0.5).max(axis=1) if roots.size else np.zeros(len(g["rows"]))
        for i, j in enumerate(g["rows"]):
            per[int(j)] = dict(j=int(j), lam=g["lam"], degree=g["degree"], eps=complex(g["eps"][i]),
                               fe_residual=float(g["fe"][i]), rh_dev=float(dev[i]))
    rows = [_with_ctx(ctx, per[int(j)]) for j in _chars_selected(t, args)]
    errs = []
    worst_fe = max(r["fe_residual"] for r in per.values())
    worst_eps = max(abs(abs(r["eps"]) - 1) for r in per.values())
    worst_rh = max(r["rh_dev"] for r in per.values())
    if worst_fe >= 1e-8:
        errs.append(IdentityViolation("functional equation", f"residual {worst_fe:.2e}"))
    if worst_eps > 1e-9:
        errs.append(IdentityViolation("|root number| = 1", f"deviation {worst_eps:.2e}"))
    if worst_rh > 1e-6:
        errs.append(IdentityViolation("Riemann hypothesis for curves", f"root deviation {worst_rh:.2e}"))
    return rows, errs


def cmd_shortsum(args):
    F = _field(args)
    t = _table(F, args)
    fam = lfun.LFamily.build(t)
    q, D = F.q, fam.D
    A = lfun.a_coeffs(fam.coeffs)
    sq = np.abs(fam.central_values()) ** 2
    base = lfun.short_sum(A, q, D)
    pp = lfun.pi_printed(A, q, D, fam.even)
    pc = lfun.pi_corrected(A, q, D, fam.even)
    ctx = _ctx(q, t.Q, "shortsum", "central value as a short sum plus correction")
    rows = []
    for j in _chars_selected(t, args):
        rows.append(_with_ctx(ctx, dict(
            j=int(j), even=bool(fam.even[j]), square_direct=float(sq[j]),
            shortsum_printed=float((base[j] + pp[j]).real), shortsum_corrected=float((base[j] + pc[j]).real),
            pi_printed=complex(pp[j]), pi_corrected=complex(pc[j]),
        )))
    pi = pp if args.pi == "printed" else pc
    dev = np.abs(base + pi - sq)[1:]
    errs = []
    if dev.max() > 1e-8:
        errs.append(IdentityViolation(
            f"short-sum identity ({args.pi} correction term)",
            f"{int(np.count_nonzero(dev > 1e-8))}/{dev.size} characters off, max {dev.max():.2e}",
        ))
    return rows, errs


def cmd_moment(args):
    F = _field(args)
    t = _table(F, args)
    rep = moments.first_moment(t) if args.order == 1 else moments.moment(t, args.order)
    ref = {1: "first moment", 2: "second moment", 4: "fourth moment"}.get(args.order, "moment conjecture")
    return [_with_ctx(_ctx(F.q, t.Q, "moment", ref), rep.row())], []


def cmd_fourth(args):
    F = _field(args)
    t = _table(F, args)
    enum = None if args.enumerate == "auto" else args.enumerate == "yes"
    dec = moments.fourth_moment_decompose(t, enumerate_quadruples=enum)
    row = _row_of(dec)
    row["reassembly_dev"] = abs(dec.reassembled - dec.direct)
    rows = [_with_ctx(_ctx(F.q, t.Q, "fourth-decompose", "fourth moment diagonal decomposition"), row)]
    errs = []
    if row["reassembly_dev"] > 1e-7:
        errs.append(IdentityViolation("I + II + III reassembly", f"deviation {row['reassembly_dev']:.2e}"))
    if dec.diagonal_enum is not None and dec.diagonal_enum != dec.diagonal_closed:
        errs.append(IdentityViolation(
            "closed diagonal polynomial", f"{dec.diagonal_closed} != enumeration {dec.diagonal_enum}"))
    return rows, errs


def cmd_lowerbound(args):
    F = _field(args)
    t = _table(F, args)
    lb = moments.lower_bound_quantities(t, args.k)
    row = _row_of(lb)
    row["holder_ok"] = lb.holder_ok
    errs = [] if lb.holder_ok else [IdentityViolation("Hoelder inequality", f"{lb.holder_lhs} > {lb.holder_rhs}")]
    return [_with_ctx(_ctx(F.q, t.Q, "lowerbound", "lower bound via Hoelder"), row)], errs


def cmd_constants(args):
    q = _parse_q(args.q)
    try:
        cc = moments.conjecture_constants(args.k, q, args.bound)
    except FFMError as exc:
        raise UsageError(f"--k: {exc}") from None
    return [_with_ctx(_ctx(q, None, "constants", "moment conjecture constants"), _row_of(cc))], []


def cmd_summatory(args):
    F = _field(args)
    if args.fn not in multfn.SUMMATORY_NAMES:
        raise UsageError(f"--fn: choose from {', '.join(multfn.SUMMATORY_NAMES)}")
    try:
        s = multfn.summatory(F, args.fn, args.x)
    except ValueError as exc:
        raise UsageError(f"--x: {exc}") from None
    row = dict(fn=s.name, x=s.x, brute=s.brute, closed=s.closed, agree=s.agree)
    errs = [] if s.agree else [IdentityViolation(f"summatory identity {s.name}", f"{s.brute} != {s.closed}")]
    return [_with_ctx(_ctx(F.q, None, "summatory", f"summatory identity {s.name}"), row)], errs


def cmd_dkseries(args):
    F = _field(args)
    try:
        s = multfn.dk_squared_series(F, args.k, args.n)
    except FFMError as exc:
        raise UsageError(f"--n: {exc}") from None
    ctx = _ctx(F.q, None, "dkseries", "d_k squared Dirichlet series")
    rows = [_with_ctx(ctx, dict(k=s.k, n=n, brute=b, product=p, agree=b == p))
            for n, (b, p) in enumerate(zip(s.brute, s.product))]
    errs = [] if s.agree else [IdentityViolation("d_k squared Dirichlet series", "coefficients disagree")]
    return rows, errs


def cmd_psi(args):
    F = _field(args)
    ctx = _ctx(F.q, None, "psi", "smooth polynomial count")
    rows = []
    for x in range(args.x_min if args.x_min is not None else args.x, args.x + 1):
        v = sieve.psi(F, x, args.z)
        ratio, xz = sieve.psi_rho_ratio(F, x, args.z)
        row = dict(x=x, z=args.z, psi=v, rough=sieve.psi_rough_complement(F, x, args.z),
                   total=(F.q ** (x + 1) - 1) // (F.q - 1), psi_over_qx=ratio, x_over_z=xz)
        if x >= 2:
            chk = sieve.psi_lemma_check(F, x)
            row.update(lemma_y=chk.params["y"], lemma_lhs=chk.lhs, lemma_rhs=chk.rhs, lemma_holds=chk.holds)
        rows.append(_with_ctx(ctx, row))
    errs = [IdentityViolation("smooth/rough partition", f"x={r['x']}") for r in rows
            if r["psi"] + r["rough"] != r["total"]]
    return rows, errs


def _progression(F, args):
    K = _poly(F, args.K, "--K")
    A = _poly(F, args.A, "--A")
    try:
        sieve.check_progression(K, A)
    except FFMError as exc:
        flag = "--K" if "prime" in str(exc) or "monic" in str(exc) else "--A"
        raise UsageError(f"{flag}: {exc}") from None
    return K, A


def cmd_phi_sifted(args):
    F = _field(args)
    K, A = _progression(F, args)
    ctx = _ctx(F.q, None, "phi-sifted", "sifted progression count and Selberg bound")

    def point(z):
        return sieve.sieve_instance(F, sieve.SieveParams(args.x, z, K, A)) if z >= 1 else None

    zs = list(range(args.z_min if args.z_min is not None else args.z, args.z + 1))
    rows, errs = [], []
    for z in zs:
        try:
            inst = point(z)
        except IdentityViolation as exc:
            errs.append(exc)
            continue
        if inst is None:
            v = sieve.phi_count(F, args.x, 0, K, A)
            rows.append(_with_ctx(ctx, dict(K=K.code, A=A.code, x=args.x, z=0, phi=v)))
            continue
        row = dict(K=K.code, A=A.code, x=args.x, z=z, phi=inst.phi)
        for name, chk in (("lemma", inst.lemma), ("crude", inst.selberg_crude),
                          ("pairs", inst.selberg_pairs), ("three_omega", inst.selberg_3omega)):
            row[f"{name}_rhs"] = chk.rhs
            row[f"{name}_holds"] = chk.holds
        row["asserted"] = inst.lemma.asserted
        rows.append(_with_ctx(ctx, row))
    return rows, errs


def cmd_selberg(args):
    F = _field(args)
    ctx = _ctx(F.q, None, "selberg", "Selberg sieve main term")
    rows, errs = [], []
    for z in range(args.z_min if args.z_min is not None else args.z, args.z + 1):
        t = sieve.selberg_terms(F, z, args.y if args.y is not None else z)
        rows.append(_with_ctx(ctx, dict(z=t.z, y=t.y, S=t.S, S_product=t.S_product, S_float=float(t.S),
                                        R_crude=t.R_crude, S_at_least_z=t.corollary_ok)))
        if t.y == t.z and not t.corollary_ok:
            errs.append(IdentityViolation("S(P_z, z) >= z", f"z={z}: S={t.S}"))
    return rows, errs


def cmd_divprog(args):
    F = _field(args)
    K = _poly(F, args.K, "--K")
    ctx = _ctx(F.q, None, "divprog", "divisor sums in progressions")
    try:
        if args.A is None:
            sieve.check_progression(K, Poly.from_code(F, 1))
            pts = sieve.divisor_uniformity_sweep(F, args.x, [K], args.alpha)
        else:
            K, A = _progression(F, args)
            pts = [sieve.divisor_sum_progression(F, args.x, K, A, args.alpha)]
    except sieve.ConstraintViolation as exc:
        raise UsageError(f"--x: {exc}") from None
    except FFMError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"--K: {exc}") from None
    rows = [_with_ctx(ctx, dict(K=p.K, A=p.A, x=p.x, lhs=p.lhs, scale=p.scale, fitted=p.fitted)) for p in pts]
    total, closed = sieve.divisor_partition_ok(F, args.x, K)
    rows.append(_with_ctx(ctx, dict(K=K.code, A="all", x=args.x, lhs=total, scale=closed, fitted="")))
    errs = []
    if total != closed:
        errs.append(IdentityViolation("residue partition of sum d(N)", f"{total} != {closed}"))
    worst = max(p.fitted for p in pts)
    if worst > args.ceiling:
        errs.append(IdentityViolation("divisor progression uniformity", f"fitted {worst:.3f} > {args.ceiling}"))
    return rows, errs


def cmd_smoothtail(args):
    F = _field(args)
    ctx = _ctx(F.q, None, "smoothtail", "smooth divisor tail")
    try:
        if args.r is None:
            pts = sieve.smooth_tail_grid(F, [args.z], args.xmax)
        else:
            pts = [sieve.smooth_divisor_tail(F, args.z, args.r, args.xmax)]
    except sieve.ParamOutOfRange as exc:
        raise UsageError(f"--r/--z: {exc}") from None
    rows = [_with_ctx(ctx, dict(z=p.z, r=p.r, y=p.y, X_max=p.X_max, truncated=p.truncated, tail=p.tail,
                                total_float=float(p.total), bound=p.bound, ratio=p.ratio)) for p in pts]
    return rows, []


def cmd_verify_all(args):
    qs = None if args.q is None else (_parse_q(args.q),)
    only = set(args.only) if args.only else None
    cfg = acceptance.SuiteConfig(qs=qs, max_deg=args.max_deg, full=args.full or None, threads=args.threads)
    results = acceptance.run_all(only=only, cfg=cfg)
    rows = []
    for r in results:
        rows.append(dict(q=args.q or "", modulus="", D="", subcommand="verify-all",
                         paper_ref=f"criterion {r.number}", criterion=r.number, title=r.title,
                         passed=r.passed, seconds=round(r.seconds, 3), budget=r.budget,
                         failing="; ".join(f"{c.name}: {c.detail}" for c in r.failing())))
    errs = [IdentityViolation(f"criterion {r.number} ({r.title})", r.line()) for r in results if not r.passed]
    return rows, errs


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", default="2", help="field size q or p^n")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    withmod = _Parser(add_help=False)
    withmod.add_argument("--modulus", help="monic irreducible as c0,c1,...,1 or deg:<n>")
    withmod.add_argument("--limit", type=int, help="emit only the first LIMIT nontrivial characters")

    p = _Parser(prog="ffm", description="Dirichlet L-functions over F_q[x]: identities, moments and sieve bounds")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, *parents, help=None):
        sp = sub.add_parser(name, parents=[common, *parents], help=help)
        sp.set_defaults(func=fn)
        return sp

    add("field", cmd_field, help="field tables summary")
    sp = add("enumerate", cmd_enumerate, help="monic or irreducible polynomials of one degree")
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--irreducible", action="store_true")
    sp = add("factor", cmd_factor, help="factor a polynomial")
    sp.add_argument("--poly", required=True, help="coefficients c0,c1,...")
    sp = add("pi", cmd_pi, help="irreducible counts, formula vs enumeration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--enum-limit", type=int, default=2**16)
    add("chars", cmd_chars, withmod, help="characters modulo Q")
    add("lvalues", cmd_lvalues, withmod, help="L-polynomial coefficients and central values")
    add("epsilon", cmd_epsilon, withmod, help="root numbers, functional equation, zeros")
    sp = add("shortsum", cmd_shortsum, withmod, help="central value against the short-sum identity")
    sp.add_argument("--pi", choices=("printed", "corrected"), default="printed",
                    help="which even-case correction term the exit status checks")
    sp = add("moment", cmd_moment, withmod, help="moment of |L(1/2, chi)|")
    sp.add_argument("--order", type=int, choices=(1, 2, 4, 6, 8), default=2)
    sp = add("fourth-decompose", cmd_fourth, withmod, help="fourth moment decomposition")
    sp.add_argument("--enumerate", choices=("auto", "yes", "no"), default="auto")
    sp = add("lowerbound", cmd_lowerbound, withmod, help="Hoelder lower-bound quantities")
    sp.add_argument("--k", type=int, required=True)
    sp = add("constants", cmd_constants, help="a(k) and g_k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--bound", type=int, default=moments.CONJ_BOUND)
    sp = add("summatory", cmd_summatory, help="summatory identity, brute vs closed")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--x", type=int, required=True)
    sp = add("dkseries", cmd_dkseries, help="d_k^2 series coefficients, brute vs product")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("psi", cmd_psi, help="smooth counts")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--x-min", type=int)
    sp.add_argument("--z", type=int, required=True)
    sp = add("phi-sifted", cmd_phi_sifted, help="sifted progression counts and sieve bounds")
    for flag in ("--K", "--A"):
        sp.add_argument(flag, required=True, help="coefficients c0,c1,...")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--z-min", type=int)
    sp = add("selberg", cmd_selberg, help="Selberg sum S(P_z, y)")
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--z-min", type=int)
    sp.add_argument("--y", type=int)
    sp = add("divprog", cmd_divprog, help="divisor sums in a progression (all residues without --A)")
    sp.add_argument("--K", required=True)
    sp.add_argument("--A")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--alpha", type=Fraction, default=sieve.DEFAULT_ALPHA)
    sp.add_argument("--ceiling", type=float, default=sieve.DIVPROG_CEILING)
    sp = add("smoothtail", cmd_smoothtail, help="smooth divisor tail against its bound")
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--xmax", type=int)
    # own flags: set_defaults on a child would rewrite the shared --q action
    sp = sub.add_parser("verify-all", help="run the acceptance suite")
    sp.set_defaults(func=cmd_verify_all)
    sp.add_argument("--q", help="restrict the character grid to one q (default: every grid q)")
    sp.add_argument("--format", choices=FORMATS, default="csv")
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--max-deg", type=int)
    sp.add_argument("--full", action="store_true", help="every irreducible Q in the character grid")
    sp.add_argument("--only", type=int, nargs="+", help="criterion numbers")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        rows, errs = args.func(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 1
    except IdentityViolation as exc:
        stderr.write(f"check failed: {exc}\n")
        return 2
    except FFMError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 1
    buf = io.StringIO()
    if args.command == "verify-all" and args.format == "csv":
        for r in rows:
            tag = "PASS" if r["passed"] else "FAIL"
            buf.write(f"{tag}  {r['criterion']:2d}  {r['title']}  ({r['seconds']:.1f}s / {r['budget']:.0f}s)"
                      + (f"  -- {r['failing']}" if r["failing"] else "") + "\n")
    else:
        emit(rows, args.format, buf)
    stdout.write(buf.getvalue())
    for e in errs:
        stderr.write(f"check failed: {e}\n")
    return 2 if errs else 0


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
