"""Command-line front end.

Every subcommand prints one JSON document on stdout (or writes it to
``--out``; ``NCSIEGEL_REPORT_DIR`` collects a copy per command).  Exit
status: 0 success, 2 assertion failure, 3 parse error, 4 precision
exhausted, 5 schedule violation.
"""
import argparse
import os
import sys
from fractions import Fraction

from . import io
from .errors import NCSiegelError, ParseError
from .params import SiegelParams
from .scalars import exact, to_capped
from .series import NCSeries, Radius

REPORT_DIR_ENV = "NCSIEGEL_REPORT_DIR"
EXIT_ASSERTION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _fraction_list(text):
    return [_fraction(t) for t in text.split(",") if t.strip()]


def _positive_int(text):
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return k


# configuration -------------------------------------------------------------------


def _common(p):
    p.add_argument("--ell", type=int, default=None, help="prime (default 5, or the input's)")
    p.add_argument("--precision", type=_positive_int, default=40, help="digits for --backend capped")
    p.add_argument("--backend", choices=("exact", "capped"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def _with_input(p, radius=True):
    p.add_argument("--in", dest="input", required=True, help="JSON input file")
    if radius:
        p.add_argument("--radius-log", type=_fraction, default=Fraction(1),
                       help="s with r = ell**(-s), s > 0")


def _with_params(p):
    p.add_argument("--c", type=_fraction, required=True)
    p.add_argument("--mu", type=_fraction, required=True)


def build_parser():
    top = _Parser(prog="ncsiegel", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norm", help="norm of a series or tuple")
    _common(p), _with_input(p)

    p = sub.add_parser("compose", help="f o g")
    _common(p), _with_input(p, radius=False)
    p.add_argument("--with", dest="other", required=True)

    p = sub.add_parser("invert", help="compositional inverse of x + psi_hat")
    _common(p), _with_input(p)
    p.add_argument("--no-radius-check", action="store_true")

    for name in ("jet", "semisimple"):
        p = sub.add_parser(name, help="jet operator" if name == "jet" else "jet semisimplicity")
        _common(p), _with_input(p, radius=False)
        p.add_argument("--order", type=_positive_int, default=None, help="jet order (default D)")

    p = sub.add_parser("homological", help="solve A psi_hat - psi_hat(A x) = f_hat")
    _common(p), _with_input(p, radius=False)

    p = sub.add_parser("siegel-step", help="one conjugation step")
    _common(p), _with_input(p), _with_params(p)
    p.add_argument("--eta", type=_fraction, required=True)

    for name in ("linearize", "eigencoords"):
        p = sub.add_parser(name, help="full iteration" if name == "linearize" else "eigen-coordinates")
        _common(p), _with_input(p), _with_params(p)
        p.add_argument("--certify-semisimple", action="store_true")
        p.add_argument("--diagonalize", action="store_true",
                       help="first conjugate a diagonalizable linear part to diagonal form")
        p.add_argument("--max-steps", type=_positive_int, default=64)

    p = sub.add_parser("siegel-check", help="bounded small-divisor certificate")
    _siegel_check_args(p)

    p = sub.add_parser("siegel-fit", help="fit (c, mu) on a grid")
    _common(p)
    p.add_argument("--lambda", dest="lambdas", action="append", type=_fraction_list, required=True)
    p.add_argument("--nmax", type=_positive_int, default=1000)
    p.add_argument("--mu-grid", type=_fraction_list, default=None)
    p.add_argument("--c-floor", type=_fraction, default=None)
    p.add_argument("--primes", type=lambda s: [int(t) for t in s.split(",")], default=None)

    p = sub.add_parser("extend-rep", help="evaluate a series on a representation")
    _common(p), _with_input(p)
    p.add_argument("--rep", required=True)

    p = sub.add_parser("unipotence-check", help="weight argument on y-monomials")
    _common(p), _with_input(p, radius=False)
    p.add_argument("--rep", required=True)
    p.add_argument("--eigen-weights", type=_fraction_list, required=True)
    p.add_argument("--conj-weights", type=_fraction_list, required=True)
    p.add_argument("--semisimple", action="store_true")

    p = sub.add_parser("selftest", help="seeded property suite")
    _common(p)
    p.add_argument("--scale", type=float, default=1.0, help="multiplier on sample counts")
    return top


def _siegel_check_args(p):
    _common(p)
    p.add_argument("--lambda", dest="lambdas", action="append", type=_fraction_list, required=True,
                   help="eigenvalue(s), comma separated or repeated")
    _with_params(p)
    p.add_argument("--nmax", type=_positive_int, default=1000)
    p.add_argument("--normalization", choices=("half", "unit"), default="half")
    p.add_argument("--witnesses", type=_positive_int, default=5)


# inputs ------------------------------------------------------------------------------


def _capped(series, P):
    coeffs = {w: to_capped(c, series.ell, P) for w, c in series.terms()}
    return NCSeries(series.n, series.D, series.ell, coeffs)


def _prepare(obj, args):
    """Check the prime against ``--ell`` and apply the backend."""
    from .endo import EndoTuple

    ell = obj.ell if hasattr(obj, "ell") else obj[0].ell
    if args.ell is not None and args.ell != ell:
        raise ParseError(f"--ell {args.ell} disagrees with input prime {ell}", "$.ell")
    if args.backend == "exact":
        return obj
    if isinstance(obj, EndoTuple):
        return EndoTuple(_capped(c, args.precision) for c in obj)
    if isinstance(obj, NCSeries):
        return _capped(obj, args.precision)
    return [_capped(c, args.precision) for c in obj]


def _load_any(path, args):
    """A tuple when the file has ``components``, otherwise one series."""
    def parse(obj):
        if isinstance(obj, dict) and "components" in obj:
            return io.endo_from_json(obj)
        return io.series_from_json(obj)
    return _prepare(io.load_file(path, parse), args)


def _load_endo(path, args):
    return _prepare(io.load_file(path, io.endo_from_json), args)


def _radius(args, ell):
    if args.radius_log <= 0:
        raise ParseError("--radius-log must be positive")
    return Radius(ell, args.radius_log)


def _params(args):
    if args.c <= 0 or args.mu < 0:
        raise ParseError("--c must be positive and --mu nonnegative")
    return SiegelParams(args.c, args.mu)


def _lambdas(args):
    return [exact(x) for group in args.lambdas for x in group]


# commands --------------------------------------------------------------------------


def cmd_norm(args):
    f = _load_any(args.input, args)
    r = _radius(args, f.ell)
    return {"kind": "norm", "radius": {"log_ell": str(r.s)}, "norm": f.norm(r).to_json()}, True


def cmd_compose(args):
    from .endo import compose

    f, g = _load_endo(args.input, args), _load_endo(args.other, args)
    return {"kind": "endo", **compose(f, g).to_json()}, True


def cmd_invert(args):
    from .endo import EndoTuple, compose, invert

    psi = _load_endo(args.input, args)
    r = None if args.no_radius_check else _radius(args, psi.ell)
    g = invert(psi, r)
    ident = EndoTuple.identity(psi.n, psi.D, psi.ell)
    ok = compose(psi, g) == ident and compose(g, psi) == ident
    out = {"kind": "endo", **g.to_json(), "two_sided": ok}
    if r is not None:
        out["psi_hat_norm"] = psi.hat().norm(r).to_json()
        out["inverse_hat_norm"] = g.hat().norm(r).to_json()
    return out, ok


def cmd_jet(args):
    from .endo import jet_matrix

    f = _load_endo(args.input, args)
    jet = jet_matrix(f, args.order or f.D)
    return {"kind": "jet", **jet.to_json(), "block_triangular": jet.is_block_triangular()}, True


def cmd_semisimple(args):
    from .endo import is_semisimple_jet

    f = _load_endo(args.input, args)
    m = args.order or f.D
    return {"kind": "semisimplicity", "order": m, "semisimple": is_semisimple_jet(f, m)}, True


def cmd_homological(args):
    from .siegel import PrecisionLedger, solve_homological

    f = _load_endo(args.input, args)
    ledger = PrecisionLedger()
    psi_hat = solve_homological(f.hat(), f.eigenvalues(), ledger)
    return {"kind": "homological", "psi_hat": psi_hat.to_json(), "precision": ledger.to_json()}, True


def cmd_siegel_step(args):
    from .siegel import siegel_step

    f = _load_endo(args.input, args)
    res = siegel_step(f, _radius(args, f.ell), args.eta, _params(args))
    return {"kind": "siegel_step", "record": res.record.to_json(), "psi": res.psi.to_json(),
            "f_next": res.f_next.to_json()}, True


def _linearize(args):
    from .siegel import linearize

    f = _load_endo(args.input, args)
    semis = "certify" if args.certify_semisimple else "assume"
    return f, linearize(f, _radius(args, f.ell), _params(args), semisimple=semis,
                        max_steps=args.max_steps, diagonalize_linear=args.diagonalize)


def cmd_linearize(args):
    _, res = _linearize(args)
    return res.report(), res.ok


def cmd_eigencoords(args):
    from .siegel import eigen_coordinates

    f, res = _linearize(args)
    if args.diagonalize:
        raise ParseError("eigencoords needs a diagonal linear part")
    ec = eigen_coordinates(f, res.r_prime, res.params, result=res)
    ok = ec.relation_holds and all(ec.invertible_by_weight)
    return ec.to_json(), ok


def cmd_siegel_check(args):
    from .divisors import check_siegel

    ell = args.ell or 5
    cert = check_siegel(_lambdas(args), _params(args), args.nmax, ell, args.witnesses,
                        args.normalization)
    if cert.verdict == "undecidable":
        return cert.to_json(), 4
    return cert.to_json(), cert.holds


def cmd_siegel_fit(args):
    from .divisors import DEFAULT_C_FLOOR, DEFAULT_MU_GRID, fit_siegel, fit_siegel_batch

    kw = {"mu_grid": args.mu_grid or DEFAULT_MU_GRID,
          "c_floor": args.c_floor if args.c_floor is not None else DEFAULT_C_FLOOR}
    lambdas = _lambdas(args)
    out = {"kind": "siegel_fit", **fit_siegel(lambdas, args.nmax, args.ell or 5, **kw).to_json()}
    if args.primes:
        out["by_prime"] = fit_siegel_batch(lambdas, args.primes, args.nmax, **kw)
    return out, True


def cmd_extend_rep(args):
    from .rep import extend_representation, extension_bound, matrix_valuation
    from .scalars import scalar_to_json

    f = _load_any(args.input, args)
    rho = io.load_file(args.rep, io.repr_from_json)
    r = _radius(args, rho.ell)
    M = extend_representation(rho, f, r)
    v = matrix_valuation(M, rho.ell)
    norm = f.norm(r)
    ok = v == float("inf") and norm.is_zero or v >= norm.s
    return {"kind": "extend_rep",
            "matrix": [[scalar_to_json(x) for x in row] for row in M],
            "matrix_log_norm": None if v == float("inf") else str(v),
            "series_norm": norm.to_json(),
            "graded_bound": extension_bound(rho, f, r).to_json(),
            "within_bound": ok}, ok


def cmd_unipotence_check(args):
    from .rep import WeightTable, forced_unipotence_check

    ys = _prepare(io.load_file(args.input, io.series_list_from_json), args)
    rho = io.load_file(args.rep, io.repr_from_json)
    table = WeightTable(args.eigen_weights, args.conj_weights)
    v = forced_unipotence_check(rho, ys, table, args.semisimple)
    return {**v.to_json(), "weights": table.to_json()}, True


def cmd_selftest(args):
    from . import selftest

    report = selftest.run(args.seed, args.scale)
    print(report.table(), file=sys.stderr)
    return report.to_json(), report.ok


COMMANDS = {
    "norm": cmd_norm, "compose": cmd_compose, "invert": cmd_invert, "jet": cmd_jet,
    "semisimple": cmd_semisimple, "homological": cmd_homological,
    "siegel-step": cmd_siegel_step, "linearize": cmd_linearize,
    "eigencoords": cmd_eigencoords, "siegel-check": cmd_siegel_check,
    "siegel-fit": cmd_siegel_fit, "extend-rep": cmd_extend_rep,
    "unipotence-check": cmd_unipotence_check, "selftest": cmd_selftest,
}


# entry points --------------------------------------------------------------------


def _emit(text, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    report_dir = os.environ.get(REPORT_DIR_ENV)
    if report_dir:
        os.makedirs(report_dir, exist_ok=True)
        with open(os.path.join(report_dir, f"{args.command}.json"), "w", encoding="utf-8") as fh:
            fh.write(text)


def _error_json(exc):
    out = {"error": exc.code, "message": getattr(exc, "message", None) or str(exc)}
    if isinstance(exc, ParseError):
        out["path"] = exc.path
        out["byte_offset"] = exc.offset
    return out


def run_command(argv):
    """Parse ``argv``, run it, and return ``(exit_status, report_dict)``."""
    try:
        args = build_parser().parse_args(argv)
        report, ok = COMMANDS[args.command](args)
    except NCSiegelError as exc:
        return exc.exit_status, _error_json(exc)
    if ok is True:
        status = 0
    elif ok is False:
        status = EXIT_ASSERTION
    else:
        status = ok
    report = {**report, "config": {"command": args.command, "seed": args.seed,
                                   "backend": args.backend, "precision": args.precision}}
    return status, report


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0
    status, report = run_command(argv)
    text = io.dumps(report)
    if "error" in report:
        sys.stderr.write(text)
        return status
    args = build_parser().parse_args(argv)
    _emit(text, args)
    return status


def siegel_check_main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    return main(["siegel-check", *argv])


def _console():
    sys.exit(main())


def _console_siegel_check():
    sys.exit(siegel_check_main())


if __name__ == "__main__":
    _console()
