"""Command-line interface: ``smm <command> ...``.

Output is ``key=value`` lines.  ``validate`` exits 0 when the file is a
member, 2 when it is not and 3 when the single-trace validator refuses
non-generic parameters; other failures exit 1.
"""

import argparse
import os
import sys

import numpy as np

from . import errors
from .flag import (
    FlagSignature,
    IsospectralParams,
    IsospectralPoint,
    cond_number,
    flag_construct,
    flag_extract,
    flag_homotopy_convert,
    flag_membership_full,
    flag_membership_generic,
    params_optimize_cond,
    params_traceless,
)
from .grassmann import (
    GrassmannPoint,
    QuadraticParams,
    gr_construct,
    gr_convert_affine,
    gr_from_isospectral,
    gr_membership,
    gr_to_isospectral,
)
from .io import read_model, write_model
from .linalg import MEMB_TOL, PRNG_ID, check_spd, cholesky_upper, haar_rotation
from .metrics import (
    embedded_metric,
    flag_m_metric,
    stiefel_m_metric,
    tangent_push_flag,
    tangent_push_stiefel,
)
from .product import GrassmannProductPoint, product_violations
from .report import MembershipReport
from .stiefel import (
    CholeskyStiefelPoint,
    cartan_geodesic,
    cartan_metric,
    st_construct,
    st_convert_homotopy,
    st_factors,
    st_membership,
)

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_NOT_GENERIC = 0, 1, 2, 3


def _floats(text):
    return tuple(float(v) for v in text.split(","))


def _ints(text):
    return tuple(int(v) for v in text.split(","))


def default_tol():
    return float(os.environ.get("SMM_DEFAULT_TOL", MEMB_TOL))


def _emit(*lines):
    for line in lines:
        print(line)


def cmd_sample(args):
    Q = haar_rotation(args.n, args.seed)
    if args.kind == "grassmann":
        if args.k is None or args.params is None:
            raise errors.SmmError("grassmann needs --k and --params")
        point = gr_construct(Q, args.k, QuadraticParams(*_floats(args.params)))
    elif args.kind == "flag":
        if args.signature is None or args.params is None:
            raise errors.SmmError("flag needs --signature and --params")
        sig = FlagSignature(args.n, _ints(args.signature))
        point = flag_construct(Q, sig, IsospectralParams(_floats(args.params)))
    else:
        if args.spd_file is not None:
            A = read_model(args.spd_file)
        elif args.k is not None:
            A = np.eye(args.k)
        else:
            raise errors.SmmError("stiefel needs --k or --spd-file")
        if args.k is not None and A.shape[0] != args.k:
            raise errors.SmmError(f"--k {args.k} does not match the {A.shape[0]}x{A.shape[0]} SPD file")
        point = st_construct(Q, A)
    write_model(point, args.output, seed=args.seed, prng=PRNG_ID)
    _emit(f"kind={args.kind}", f"output={args.output}")
    return EXIT_OK


def cmd_validate(args):
    tol = args.tol if args.tol is not None else default_tol()
    obj = read_model(args.file)
    if isinstance(obj, GrassmannPoint):
        report = gr_membership(obj.X, obj.k, obj.params, tol)
    elif isinstance(obj, IsospectralPoint):
        if args.generic:
            try:
                report = flag_membership_generic(obj.X, obj.sig, obj.params, tol)
            except errors.NotGeneric as exc:
                _emit("passed=refused", f"reason={exc}")
                return EXIT_NOT_GENERIC
        else:
            report = flag_membership_full(obj.X, obj.sig, obj.params, tol)
    elif isinstance(obj, CholeskyStiefelPoint):
        report = st_membership(obj.Y, obj.A, tol)
    elif isinstance(obj, GrassmannProductPoint):
        bad = product_violations(obj)
        report = MembershipReport({"product": float(len(bad))}, {"product": 0.0})
    else:
        # SPD and other kinds are fully checked while loading
        report = MembershipReport()
    _emit(*report.lines())
    return EXIT_OK if report else EXIT_FAIL


def cmd_convert(args):
    obj = read_model(args.file)
    t = args.t
    if args.to_params is not None:
        target = _floats(args.to_params)
        if isinstance(obj, GrassmannPoint):
            if t == 1.0:
                out = gr_convert_affine(obj, QuadraticParams(*target))
            else:
                out = gr_from_isospectral(
                    flag_homotopy_convert(gr_to_isospectral(obj), IsospectralParams(target), t)
                )
        elif isinstance(obj, IsospectralPoint):
            out = flag_homotopy_convert(obj, IsospectralParams(target), t)
        else:
            raise errors.SmmError("--to-params applies to grassmann and flag files")
    elif args.to_spd is not None:
        if not isinstance(obj, CholeskyStiefelPoint):
            raise errors.SmmError("--to-spd applies to stiefel files")
        out = st_convert_homotopy(obj, read_model(args.to_spd), t)
    else:
        raise errors.SmmError("need --to-params or --to-spd")
    write_model(out, args.output)
    _emit(f"t={t!r}", f"output={args.output}")
    return EXIT_OK


def cmd_extract(args):
    obj = read_model(args.file)
    if isinstance(obj, GrassmannPoint):
        out = flag_extract(gr_to_isospectral(obj))
    elif isinstance(obj, IsospectralPoint):
        out = flag_extract(obj)
    elif isinstance(obj, CholeskyStiefelPoint):
        report = st_membership(obj.Y, obj.A)
        if not report:
            raise errors.MembershipFailed(f"failed checks: {report.failures()}")
        out = st_factors(obj)
    else:
        raise errors.SmmError("extract applies to grassmann, flag and stiefel files")
    write_model(out, args.output)
    _emit(f"output={args.output}")
    return EXIT_OK


def cmd_metric(args):
    if len(args.files) != 3:
        raise errors.SmmError("metric takes three files")
    a, b, c = (read_model(f) for f in args.files)
    if args.kind == "flag":
        if isinstance(a, GrassmannPoint):
            a = gr_to_isospectral(a)
        value = flag_m_metric(b, c, a.params)
        embedded = embedded_metric(tangent_push_flag(b, a.params), tangent_push_flag(c, a.params))
        _emit(f"metric={value:.17g}", f"embedded={embedded:.17g}")
    elif args.kind == "stiefel":
        R = cholesky_upper(a.A)
        value = stiefel_m_metric(b, c, R)
        embedded = embedded_metric(
            tangent_push_stiefel(b, R), tangent_push_stiefel(c, R), kind="rectangular"
        )
        _emit(f"metric={value:.17g}", f"embedded={embedded:.17g}")
    else:
        _emit(f"metric={cartan_metric(check_spd(a), b, c):.17g}")
    return EXIT_OK


def cmd_cond(args):
    _emit(f"cond={cond_number(_floats(args.params)):.17g}")
    return EXIT_OK


def cmd_params(args):
    sig = FlagSignature(args.n, _ints(args.signature))
    if args.optimize_cond is not None:
        params = params_optimize_cond(sig, args.optimize_cond, traceless=args.traceless)
    elif args.traceless:
        params = params_traceless(sig)
    else:
        raise errors.SmmError("need --traceless or --optimize-cond")
    _emit(
        "params=" + ",".join(repr(v) for v in params),
        f"cond={cond_number(params):.17g}",
    )
    return EXIT_OK


def cmd_geodesic(args):
    A = read_model(args.a)
    B = read_model(args.b)
    write_model(cartan_geodesic(A, B, args.t), args.output, kind="spd")
    _emit(f"t={args.t!r}", f"output={args.output}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="smm", description="Matrix models of flag, Grassmann and Stiefel manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a random model point")
    p.add_argument("--kind", choices=["grassmann", "flag", "stiefel"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--signature")
    p.add_argument("--params")
    p.add_argument("--spd-file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("validate", help="check membership of a model file")
    p.add_argument("file")
    p.add_argument("--tol", type=float)
    p.add_argument("--generic", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="change model parameters")
    p.add_argument("file")
    p.add_argument("--to-params")
    p.add_argument("--to-spd")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("extract", help="recover the flag or Stiefel factors")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("metric", help="evaluate an invariant metric")
    p.add_argument("--kind", choices=["flag", "stiefel", "cartan"], required=True)
    p.add_argument("files", nargs="+", help="POINT B C (flag/stiefel) or A X Y (cartan)")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("cond", help="condition number of a parameter vector")
    p.add_argument("--params", required=True)
    p.set_defaults(func=cmd_cond)

    p = sub.add_parser("params", help="choose model parameters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--traceless", action="store_true")
    p.add_argument("--optimize-cond", type=float, metavar="EPS")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("geodesic", help="point on the Cartan geodesic between two SPD files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_geodesic)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (errors.SmmError, OSError) as exc:
        print(f"error={type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
