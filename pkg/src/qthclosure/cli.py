"""Command line entry point: ``qthclosure <command> <problem file> ...``.

Exit codes: 0 success, 1 bad input, 2 resource cap hit, 3 unsupported
presentation.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

from . import __version__
from .gb import ResourceLimit, UnsupportedPresentation, basis, reduce
from .oracle import DEFAULT_KBOUND, ExponentCone, certify_integral, np_closure
from .poly import Polynomial, PolySyntaxError, format_poly
from .problem import Problem, ProblemError, load_problem
from .qthpower import (closure_powers, default_exponent, integral_closure,
                       make_setting, minimalize)
from .rees import build_rees, extend_rees, member

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_UNSUPPORTED = 0, 1, 2, 3


def _exponent(args, prob: Problem, ideal_gens) -> int:
    if args.e is not None:
        return args.e
    if prob.qexp is not None:
        return prob.qexp
    setting = make_setting(prob.presentation, ideal_gens, prob.ring.q)
    return default_exponent(prob.ideal(setting))


def _setting(prob: Problem, e: int, kmax: int = 1):
    return make_setting(prob.presentation, prob.generators, prob.ring.q ** e, kmax=kmax)


def _gens(I) -> list[str]:
    return [format_poly(g) for g in minimalize(I).generators]


def cmd_gb(args, prob: Problem, out):
    B = basis(list(prob.presentation.relations) + prob.generators, prob.ring)
    gens = B.generators
    if args.reduced and not B.reduced:
        if B.is_unit_ideal():
            gens = [prob.ring.constant(1)]
        else:
            leads = B.leading_monomials()
            gens = [g for i, g in enumerate(gens)
                    if not any(j != i and all(a <= b for a, b in zip(leads[j], leads[i]))
                               and (leads[j] != leads[i] or j < i) for j in range(len(gens)))]
    out.append(f"kind: {B.kind}")
    out.extend(format_poly(g) for g in sorted(gens, key=lambda g: prob.ring.key(g.lm()), reverse=True))
    return EXIT_OK


def cmd_nf(args, prob: Problem, out):
    f = prob.poly(args.poly)
    pr = prob.presentation
    if pr.J.kind == "local" and len(pr.J):
        r = reduce(f, pr.J).remainder
        out.append(format_poly(r))
        out.append("(weak normal form: correct up to a unit factor)")
    else:
        out.append(format_poly(pr.nf(f)))
    return EXIT_OK


def cmd_closure(args, prob: Problem, out):
    e = _exponent(args, prob, prob.generators)
    S = _setting(prob, e)
    C, trace = integral_closure(prob.ideal(S), e, box=args.box, max_rounds=args.max_rounds)
    out.append(f"q = {prob.ring.q}, e = {e}, mode = {'exact' if S.bound is None else f'truncated below degree {S.bound}'}")
    out.append(trace.report())
    out.append("closure:")
    out.extend("  " + g for g in _gens(C))
    return EXIT_OK


def cmd_powers(args, prob: Problem, out):
    e = _exponent(args, prob, prob.generators)
    S = _setting(prob, e, args.kmax)
    res = closure_powers(prob.ideal(S), args.kmax, e, seed_prev_closure=not args.seed_prev_power,
                         box=args.box, max_rounds=args.max_rounds)
    for k, C in enumerate(res.closures, 1):
        out.append(f"C(I^{k}):")
        out.extend("  " + g for g in _gens(C))
    if res.stop_index is not None:
        out.append(f"stable from k = {res.stop_index}: C(I^k) = C(I^(k-1))*C(I)")
    else:
        out.append(f"not yet stable at k = {args.kmax}")
    return EXIT_OK


def _completed_rees(prob: Problem, e: int, kmax: int):
    S = _setting(prob, e, max(kmax, 1))
    I = prob.ideal(S)
    rp = build_rees(I)
    if kmax < 1:
        return rp
    res = closure_powers(I, kmax, e)
    return extend_rees(rp, I, res.closures, complete=res.stop_index is not None)


def cmd_rees(args, prob: Problem, out):
    e = _exponent(args, prob, prob.generators)
    rp = _completed_rees(prob, e, args.kmax)
    out.append(rp.report(suppress_s=args.suppress_t))
    return EXIT_OK


def cmd_member(args, prob: Problem, out):
    f = prob.poly(args.poly)
    e = _exponent(args, prob, prob.generators)
    if args.kmax is not None:
        rp = _completed_rees(prob, e, args.kmax)
    else:
        # once the closures of the powers are stable the presentation is
        # complete, so larger levels add nothing
        for km in range(2, max(args.k, 2) + 1):
            rp = _completed_rees(prob, e, km)
            if rp.complete:
                break
    f = prob.presentation.nf(f, None) if prob.presentation.J.kind != "local" else f
    ok, ans = member(f, args.k, rp)
    out.append("true" if ok else "false")
    kat = "infinity (f = 0)" if ans.k_attained is None else str(ans.k_attained)
    out.append(f"largest k: {kat}{' (lower bound)' if ans.lower_bound_only else ''}")
    out.append(f"witness: {ans.witness}")
    return EXIT_OK


def _cone(prob: Problem) -> ExponentCone:
    if prob.presentation.relations or prob.ring.dependent_vars:
        raise UnsupportedPresentation("the oracle needs a polynomial ring without relations")
    vecs = []
    for g in prob.generators:
        if len(g.terms) != 1:
            raise UnsupportedPresentation(f"{format_poly(g)} is not a monomial")
        vecs.append(next(iter(g.terms)))
    return ExponentCone.of(vecs)


def cmd_oracle(args, prob: Problem, out):
    C = np_closure(_cone(prob), args.kbound)
    names = prob.ring.variables
    ring = prob.ring
    mons = [Polynomial(ring, {v: 1}) for v in C.generators]
    mons.sort(key=lambda g: ring.key(g.lm()), reverse=True)
    out.append("closure:")
    out.extend("  " + format_poly(m) for m in mons)
    if C.unknown:
        out.append(f"undecided within k <= {args.kbound}: {len(C.unknown)} points")
        out.extend("  " + "*".join(f"{n}^{e}" for n, e in zip(names, v) if e) for v in C.unknown)
    return EXIT_OK


def cmd_certify(args, prob: Problem, out):
    f = prob.poly(args.poly)
    S = make_setting(prob.presentation, prob.generators, prob.ring.q)
    cert = certify_integral(f, prob.ideal(S), args.kmax)
    if cert is None:
        out.append(f"none for k <= {args.kmax}")
        return EXIT_OK
    out.append(f"degree: {cert.k}")
    for j, a in enumerate(cert.coefficients, 1):
        out.append(f"a_{j} = {format_poly(a)}")
    out.append(f"replay: {'ok' if cert.replay(prob.presentation) else 'FAILED'}")
    return EXIT_OK


COMMANDS = {"gb": cmd_gb, "nf": cmd_nf, "closure": cmd_closure, "powers": cmd_powers,
            "rees": cmd_rees, "member": cmd_member, "oracle": cmd_oracle,
            "certify": cmd_certify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qthclosure",
                                description="Integral closures of ideals over F_q.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("problem", help="problem file")
        return sp

    sp = cmd("gb", "Gröbner or standard basis of relations plus ideal")
    sp.add_argument("--reduced", action="store_true")
    sp = cmd("nf", "normal form modulo the relations")
    sp.add_argument("--poly", required=True)
    for name, help_ in (("closure", "integral closure by the Qth-power algorithm"),
                        ("powers", "closures of the powers of the ideal")):
        sp = cmd(name, help_)
        sp.add_argument("--e", type=int, help="exponent e, Q = q^e")
        sp.add_argument("--max-rounds", type=int, default=50)
        sp.add_argument("--box", type=lambda s: tuple(int(x) for x in s.split(",")),
                        help="comma separated exponent box")
        if name == "powers":
            sp.add_argument("--kmax", type=int, required=True)
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--seed-prev-closure", action="store_true", default=True)
            g.add_argument("--seed-prev-power", action="store_true")
    sp = cmd("rees", "Rees presentation, completed up to level kmax")
    sp.add_argument("--kmax", type=int, default=1)
    sp.add_argument("--e", type=int)
    sp.add_argument("--suppress-t", action="store_true",
                    help="print relations with s = 1")
    sp = cmd("member", "largest k with f in the closure of I^k")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--kmax", type=int)
    sp.add_argument("--e", type=int)
    sp = cmd("oracle", "Newton polyhedron closure of a monomial ideal")
    sp.add_argument("--kbound", type=int, default=DEFAULT_KBOUND)
    sp = cmd("certify", "search for an integral dependence relation")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--kmax", type=int, required=True)
    return p


def run(argv=None) -> tuple[str, int]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return "", EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    out: list[str] = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            prob = load_problem(args.problem)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        code = COMMANDS[args.command](args, prob, out)
    except (ProblemError, PolySyntaxError, OSError) as exc:
        return f"error: {exc}", EXIT_INPUT
    except UnsupportedPresentation as exc:
        return f"unsupported: {exc}", EXIT_UNSUPPORTED
    except ResourceLimit as exc:
        return f"resource limit: {exc}", EXIT_LIMIT
    except ValueError as exc:
        return f"error: {exc}", EXIT_INPUT
    return "\n".join(out), code


def main(argv=None) -> int:
    text, code = run(argv)
    if text:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
