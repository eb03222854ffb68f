"""Command-line surface: exact cycle/character data, double sine values,
RM values of the Shintani-Faddeev cocycle, partial-zeta derivatives, the
q-Pochhammer asymptotics table, the identity verifier, and the worked
numerical example.

Exit codes: 0 success, 1 tolerance failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from fractions import Fraction

from mpmath import mp

from .characters import chi_r, phi_rademacher, psi_eta
from .cocycle import shin_rm, varpi_r_lifted, verify_rm_identities
from .modgroup import CharVec, Mat2, cycle_data, hj_expand, j_cocycle, reduce_pair
from .qfield import QuadVal, parse_quad
from .special import DEFAULT_PREC, GUARD, dsine
from .zeta import z_prime


def _digits(prec: int) -> int:
    # hide the last two guard digits of the binary working precision
    return max(math.ceil(prec * math.log10(2)) - 2, 4)


def _fmt(x, prec: int) -> str:
    return mp.nstr(x, _digits(prec), strip_zeros=False)


def _parse_char(text: str) -> CharVec:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("expected r1,r2")
    return CharVec.of(Fraction(parts[0]), Fraction(parts[1]))


def _parse_mat(text: str) -> Mat2:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("expected a,b,c,d")
    return Mat2(*parts)


def _emit(payload: dict, args, order=None) -> None:
    if args.json:
        print(json.dumps(payload, default=str))
        return
    keys = order if order is not None else payload.keys()
    for k in keys:
        print(f"{k} = {payload[k]}")


def _shin_arg_over_pi(v) -> Fraction | None:
    """Exact arg(shin)/pi on (-1, 1] when the phase is resolvable: the
    modulus factor is a positive real, so the phase is 2(gamma24+lambda4)
    (conjugated when the reducing matrix reverses orientation), and for
    integral characteristics it is twice the eta-multiplier exponent."""
    if v.trivial is not None:
        frac = 2 * psi_eta(v.A).exponent
    elif v.gamma24 is None or v.lambda4 is None:
        return None
    else:
        frac = 2 * (v.gamma24 + v.lambda4)
        if v.det_R == -1:
            frac = -frac
    frac %= 2
    return frac - 2 if frac > 1 else frac


def cmd_hj(args) -> int:
    exp = hj_expand(parse_quad(args.quad))
    _emit({"preperiod": list(exp.preperiod), "period": list(exp.period)},
          args, order=["preperiod", "period"])
    return 0


def cmd_cycle(args) -> int:
    r = _parse_char(args.r)
    beta = parse_quad(args.beta)
    rr, bb, R = reduce_pair(r, beta)
    cd = cycle_data(rr, bb)
    out = {
        "k": cd.k,
        "ell": cd.ell,
        "b": list(cd.b),
        "beta_n": [str(x) for x in cd.beta_n],
        "r_n": [[str(x.r1), str(x.r2)] for x in cd.r_n],
        "w_n": [str(x) for x in cd.w_n],
        "P": list(cd.P.entries()),
        "A": list(cd.A.entries()),
        "reduced_r": [str(rr.r1), str(rr.r2)],
        "reduced_beta": str(bb),
        "reducing_matrix": list(R.entries()),
    }
    print(json.dumps(out))
    return 0


def cmd_chars(args) -> int:
    A = _parse_mat(args.A)
    if A.det() != 1:
        raise ValueError("determinant must be +1")
    out = {"phi": str(phi_rademacher(A)), "psi_exponent": str(psi_eta(A).exponent)}
    order = ["phi", "psi_exponent"]
    if args.r is not None:
        out["chi_exponent"] = str(chi_r(_parse_char(args.r), A).exponent)
        order.append("chi_exponent")
    _emit(out, args, order)
    return 0


def cmd_dsine(args) -> int:
    with mp.workprec(args.prec + GUARD):
        z = mp.mpmathify(args.z)
        w1 = mp.mpmathify(args.w1)
        w2 = mp.mpmathify(args.w2)
        val = dsine(z, w1, w2, args.prec)
    _emit({"value": _fmt(val, args.prec)}, args)
    return 0


def cmd_rmvalue(args) -> int:
    r = _parse_char(args.r)
    beta = parse_quad(args.beta)
    v = shin_rm(r, beta, args.prec)
    arg_pi = _shin_arg_over_pi(v)
    with mp.workprec(args.prec + GUARD):
        out = {
            "shin_re": _fmt(mp.re(v.shin), args.prec),
            "shin_im": _fmt(mp.im(mp.mpc(v.shin)), args.prec),
            "shin_abs": _fmt(abs(mp.mpc(v.shin)), args.prec),
            "shin_arg_over_pi": str(arg_pi) if arg_pi is not None
            else _fmt(mp.arg(mp.mpc(v.shin)) / mp.pi, args.prec),
            "samech": _fmt(mp.re(v.samech), args.prec),
            "U1": _fmt(v.U1, args.prec) if v.U1 is not None else None,
            "gamma24": str(v.gamma24) if v.gamma24 is not None else None,
            "lambda4": str(v.lambda4) if v.lambda4 is not None else None,
            "A": list(v.A.entries()),
            "k": v.k,
        }
    _emit(out, args, order=list(out.keys()))
    return 0


def cmd_zeta(args) -> int:
    r = _parse_char(args.r)
    beta = parse_quad(args.beta)
    rep = z_prime(r, beta, args.prec, t_override=args.t)
    out = {
        "U1": _fmt(rep.U1, args.prec),
        "U2": _fmt(rep.U2, args.prec),
        "Zprime_both": _fmt(rep.Zprime_both, args.prec),
        "Zprime_inf2": _fmt(rep.Zprime_inf2, args.prec),
        "t": rep.t,
        "n": rep.n,
        "method_t": rep.method_t,
    }
    _emit(out, args, order=list(out.keys()))
    return 0


def _asym_rows(r: CharVec, beta: QuadVal, tmax: float, steps: int, prec: int):
    """Rows (t, abs, arg, abs_norm, arg_norm) for varpi_r(beta + i u^{-t}),
    normalized by mu^t with mu the RM value of shin.  u is the square of the
    eigenvalue j_A(beta) of the minimal stabilizer in Gamma_r: one cocycle
    factor of shin (hence of mu) accrues per division of the height by u."""
    v = shin_rm(r, beta, prec)
    with mp.workprec(prec + GUARD):
        mu = mp.mpc(v.shin)
        u = j_cocycle(v.A, beta).to_mpf(mp) ** 2
        logu = mp.log(u)
        rows = []
        for i in range(steps):
            t = mp.mpf(tmax) * i / (steps - 1)
            y = mp.exp(-logu * t)
            if y < mp.mpf(2) ** (-prec):
                print(f"warning: truncating at t={float(t):g}: "
                      "height below working precision", file=sys.stderr)
                break
            val = varpi_r_lifted(r, beta, beta.to_mpf(mp) + mp.mpc(0, 1) * y, prec)
            norm = mu ** (-t) * val
            rows.append((t, abs(val), mp.arg(val), abs(norm), mp.arg(norm)))
    return rows, v


def cmd_asym(args) -> int:
    r = _parse_char(args.r)
    beta = parse_quad(args.beta)
    if args.tmax <= 0 or args.steps < 2:
        raise ValueError("tmax must be positive and steps >= 2")
    rows, v = _asym_rows(r, beta, args.tmax, args.steps, args.prec)
    print("t,abs,arg,abs_norm,arg_norm")
    for row in rows:
        print(",".join(_fmt(x, args.prec) for x in row))
    if args.plot:
        _render_asym_plot(rows, v, args.plot)
        print(f"wrote plot to {args.plot}", file=sys.stderr)
    return 0


def _render_asym_plot(rows, v, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = [float(row[0]) for row in rows]
    mu_abs = float(abs(mp.mpc(v.shin)))
    fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)
    axes[0].plot(t, [float(row[1]) for row in rows], label=r"$|\varpi_r|$")
    axes[0].plot(t, [mu_abs**x for x in t], "--", label=r"$|\mu|^t$")
    axes[0].set_yscale("log")
    axes[0].legend()
    axes[1].plot(t, [float(row[3]) for row in rows])
    axes[1].set_ylabel(r"$|\mu^{-t}\varpi_r|$")
    axes[2].plot(t, [float(row[4]) for row in rows])
    axes[2].set_ylabel(r"$\arg(\mu^{-t}\varpi_r)$")
    axes[2].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_verify(args) -> int:
    report = verify_rm_identities(seed=args.seed, count=args.count, prec=args.prec)
    ok = all(entry["pass"] for entry in report.values())
    print(json.dumps({"prec": args.prec, "seed": args.seed, "count": args.count,
                      "pass": ok, "identities": report}))
    return 0 if ok else 1


# the degree-8 minimal polynomial of nu over Q(sqrt(3)): coefficients
# a + b*sqrt(3) stored as (a, b), from x^8 down to the constant term
_EXAMPLE_POLY = [
    (1, 0), (-8, -5), (53, 30), (-156, -90), (225, 130),
    (-156, -90), (53, 30), (-8, -5), (1, 0),
]
_EXAMPLE_NU = "5.54060902431686855379"


def cmd_reproduce_example(args) -> int:
    r = CharVec.of(Fraction(0), Fraction(4, 5))
    beta = QuadVal.sqrt_of(3)
    v = shin_rm(r, beta, args.prec)
    arg_pi = _shin_arg_over_pi(v)
    with mp.workprec(args.prec + GUARD):
        nu = mp.re(v.samech)
        s3 = mp.sqrt(3)
        pval = mp.mpf(0)
        cnorm = mp.mpf(0)
        for a, b in _EXAMPLE_POLY:
            c = a + b * s3
            pval = pval * nu + c
            cnorm = max(cnorm, abs(c))
        residual = abs(pval) / (cnorm * nu**8)
        nu_err = abs(nu - mp.mpf(_EXAMPLE_NU))
        ok = (nu_err < mp.mpf("1e-18") and arg_pi == Fraction(-7, 20)
              and residual < mp.mpf("1e-12"))
        out = {
            "nu": _fmt(nu, args.prec),
            "nu_abs_error": _fmt(nu_err, args.prec),
            "shin_arg_over_pi": str(arg_pi),
            "shin": _fmt(v.shin, args.prec),
            "gamma24": str(v.gamma24),
            "lambda4": str(v.lambda4),
            "poly_relative_residual": _fmt(residual, args.prec),
            "pass": ok,
        }
    _emit(out, args, order=list(out.keys()))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC,
                        help="working precision in bits (default %(default)s)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")

    parser = argparse.ArgumentParser(prog="shin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hj", parents=[common],
                       help="minus-continued-fraction expansion")
    p.add_argument("quad", help="real quadratic number, e.g. 'sqrt(3)' or '(1+sqrt(5))/2'")
    p.set_defaults(func=cmd_hj)

    p = sub.add_parser("cycle", parents=[common], help="HJ cycle data as JSON")
    p.add_argument("--r", required=True, help="characteristics r1,r2")
    p.add_argument("--beta", required=True, help="real quadratic number")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("chars", parents=[common],
                       help="Rademacher phi and multiplier exponents")
    p.add_argument("--A", required=True, help="matrix a,b,c,d with det +1")
    p.add_argument("--r", help="characteristics r1,r2 (for the theta multiplier)")
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("dsine", parents=[common], help="double sine value")
    p.add_argument("--z", required=True)
    p.add_argument("--w1", required=True)
    p.add_argument("--w2", required=True)
    p.set_defaults(func=cmd_dsine)

    p = sub.add_parser("rmvalue", parents=[common],
                       help="RM value of the cocycle and the samech invariant")
    p.add_argument("--r", required=True, help="characteristics r1,r2")
    p.add_argument("--beta", required=True, help="real quadratic number")
    p.set_defaults(func=cmd_rmvalue)

    p = sub.add_parser("zeta", parents=[common],
                       help="differenced partial-zeta derivative at s=0")
    p.add_argument("--r", required=True, help="characteristics r1,r2")
    p.add_argument("--beta", required=True, help="real quadratic number")
    p.add_argument("--t", type=int, choices=(1, 2), default=None,
                   help="override the ray-class multiplicity")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("asym", parents=[common],
                       help="vertical-geodesic asymptotics table (CSV)")
    p.add_argument("--r", required=True, help="characteristics r1,r2")
    p.add_argument("--beta", required=True, help="real quadratic number")
    p.add_argument("--tmax", type=float, default=8.0)
    p.add_argument("--steps", type=int, default=33)
    p.add_argument("--plot", help="also render the figure to this file")
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("verify", parents=[common],
                       help="seeded functional-equation suite")
    p.add_argument("--count", type=int, default=5, help="instances per identity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce-example", parents=[common],
                       help="recompute the worked numerical example")
    p.set_defaults(func=cmd_reproduce_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
