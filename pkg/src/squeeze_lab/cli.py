"""``squeeze-lab`` command line.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification
failure.  JSON is emitted for single objects, CSV for tables; floats in CSV
use 17 significant digits so that runs are byte-reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

from .classify import DEFAULT_ETA, DEFAULT_TOL, classify, classify_numeric, gamma_from_theta
from .errors import DomainError
from .paths import DEFAULT_FACTOR, DEFAULT_START, DEFAULT_STEPS, LimitOrder, SqueezePath, eps_sequence, evaluate_along_path
from .resonance import ResonanceSetId, membership, residual, slice_surface, trace_curve
from .scattering import transmission_sweep
from .transfer import RegularizedSystem, stack_matrix

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4


class CliDomainError(DomainError):
    """Precondition violation detected while assembling the run config."""


def _float(text):
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _vector(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None


def _interval(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    lo, hi = (_float(p) for p in parts)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"expected LO < HI, got {text!r}")
    return lo, hi


def _fmt(x):
    return format(float(x), ".17g")


def _nonzero(a, field="--a"):
    if any(x == 0.0 for x in a):
        raise CliDomainError(f"{field}: intensity must be nonzero")
    if any(not math.isfinite(x) for x in a):
        raise CliDomainError(f"{field}: intensity must be finite")
    return a


def _path(args):
    order = LimitOrder(args.limit_order) if args.limit_order else LimitOrder.JOINT
    return SqueezePath(args.mu, args.tau, order)


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([x if isinstance(x, str) else _fmt(x) for x in row])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_matrix(args):
    a = _nonzero(args.a)
    if args.l is not None or args.r is not None:
        if args.l is None or args.r is None:
            raise CliDomainError("--l and --r must be given together")
        l, r = args.l, args.r
    else:
        l, r = _path(args).lengths(args.eps)
    m = stack_matrix(RegularizedSystem(a, args.eps, l, r, args.k))
    record = {"m11": m.m11, "m12": m.m12, "m21": m.m21, "m22": m.m22, "det": m.det}
    if args.format == "csv":
        _emit(args, _csv(list(record), [list(record.values())]))
    else:
        _emit(args, _json(record))


def cmd_sweep(args):
    a = _nonzero(args.a)
    seq = eps_sequence(args.start, args.factor, args.steps)
    trace = evaluate_along_path(a, _path(args), args.k, seq)
    rows = [[e, *m.entries, m.det] for e, m in zip(trace.eps, trace.matrices)]
    header = ["eps", "m11", "m12", "m21", "m22", "det"]
    if args.format == "json":
        _emit(args, _json([dict(zip(header, r)) for r in rows]))
    else:
        _emit(args, _csv(header, rows))


def cmd_classify(args):
    a = _nonzero(args.a)
    path = _path(args)
    if args.numeric:
        li = classify_numeric(a, path, args.k)
    else:
        li = classify(a, path, args.tol)
    out = {
        "path_label": str(path.label),
        "memberships": sorted(s.value for s in membership(a, args.tol)),
    }
    out.update(li.to_dict())
    if li.theta is not None or li.kind.value in ("delta", "reflectionless"):
        theta = li.theta if li.theta is not None else float(li.sign)
        try:
            out["gamma"] = gamma_from_theta(theta, args.eta)
        except ZeroDivisionError as exc:
            out["gamma"] = None
            out["gamma_reason"] = f"denominator zero: {exc}"
        out["eta"] = args.eta
    _emit(args, _json(out))


def cmd_resonance(args):
    sid = ResonanceSetId.parse(args.set)
    window = args.window
    rows = []
    if sid.arity == 2:
        if args.a1 is None:
            raise CliDomainError("--a1 LO:HI is required for curve sets")
        branches = trace_curve(sid, args.a1, args.samples, window)
        header = ["branch_id", "a1", "a2", "residual"]
    else:
        if args.slice_a1 is None or args.a2 is None:
            raise CliDomainError("--slice-a1 and --a2 LO:HI are required for surface sets")
        branches = slice_surface(sid, args.slice_a1, args.a2, args.samples, window)
        header = ["branch_id", "a1", "a2", "a3", "residual"]
    for i, br in enumerate(branches):
        for p in br.points:
            rows.append([str(i), *p, residual(sid, p)])
    _emit(args, _csv(header, rows))


def cmd_transmission(args):
    a = _nonzero(args.a)
    if args.eps is None:
        table = transmission_sweep(a, _path(args), k_range=args.k_range, samples=args.samples)
    elif args.l is not None and args.r is not None:
        table = transmission_sweep(a, eps=args.eps, l=args.l, r=args.r, k_range=args.k_range, samples=args.samples)
    else:
        table = transmission_sweep(a, _path(args), eps=args.eps, k_range=args.k_range, samples=args.samples)
    _emit(args, _csv(["k", "T", "R"], table.rows()))


def cmd_verify(args):
    from .verify import run_suite

    report = run_suite(tol_override=args.tol_override, only=args.only)
    _emit(args, _json(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def _add_path(p, required=True):
    p.add_argument("--mu", type=_float, required=required, help="layer exponent, l = eps^(mu-1); 'inf' allowed")
    p.add_argument("--tau", type=_float, required=required, help="gap exponent, r = eps^tau; 'inf' allowed")
    p.add_argument(
        "--limit-order",
        choices=[o.value for o in LimitOrder if o is not LimitOrder.JOINT],
        default=None,
        help="order of the edge descents; only when mu and tau are both inf",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squeeze-lab",
        description="Transfer matrices, squeezing limits and resonance sets of regularized multi-delta potentials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", help="exact stack matrix at one eps")
    p.add_argument("--a", type=_vector, required=True, help="intensities as a comma list, e.g. 1,2,-1")
    p.add_argument("--eps", type=_float, required=True)
    _add_path(p, required=False)
    p.add_argument("--l", type=_float, default=None, help="explicit layer width (overrides the path)")
    p.add_argument("--r", type=_float, default=None, help="explicit gap (overrides the path)")
    p.add_argument("--k", type=_float, default=1.0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("sweep", help="matrices along a squeezing path")
    p.add_argument("--a", type=_vector, required=True)
    _add_path(p)
    p.add_argument("--k", type=_float, default=1.0)
    p.add_argument("--start", type=_float, default=DEFAULT_START)
    p.add_argument("--factor", type=_float, default=DEFAULT_FACTOR)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="limit interaction along a path")
    p.add_argument("--a", type=_vector, required=True)
    _add_path(p)
    p.add_argument("--eta", type=_float, default=DEFAULT_ETA)
    p.add_argument("--tol", type=_float, default=DEFAULT_TOL)
    p.add_argument("--k", type=_float, default=1.0)
    p.add_argument("--numeric", action="store_true", help="classify from an exact trace instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("resonance", help="trace resonance curves or surface slices")
    p.add_argument("--set", required=True, choices=[s.value.lower() for s in ResonanceSetId][:8], type=str.lower)
    p.add_argument("--a1", type=_interval, default=None, help="a1 range LO:HI (curve sets)")
    p.add_argument("--slice-a1", type=_float, default=None, help="fixed a1 (surface sets)")
    p.add_argument("--a2", type=_interval, default=None, help="a2 range LO:HI (surface sets)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--window", type=_interval, default=(-50.0, 50.0), help="search window for the last intensity")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("transmission", help="T(k), R(k) in the limit or at finite eps")
    p.add_argument("--a", type=_vector, required=True)
    _add_path(p, required=False)
    p.add_argument("--eps", type=_float, default=None, help="finite regularization; omit for the limit")
    p.add_argument("--l", type=_float, default=None)
    p.add_argument("--r", type=_float, default=None)
    p.add_argument("--k-range", type=_interval, default=(0.1, 10.0))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_transmission)

    p = sub.add_parser("verify", help="run the cross-validation suite")
    p.add_argument("--tol-override", type=_float, default=None, help="replace every check tolerance")
    p.add_argument("--only", default=None, help="run checks whose name starts with this prefix")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def _check_paths(args, parser):
    needs_path = args.command in ("sweep", "classify") or (
        args.command in ("matrix", "transmission") and getattr(args, "l", None) is None
    )
    if args.command == "transmission" and args.eps is None and (args.mu is None or args.tau is None):
        parser.error("transmission in limit mode needs --mu and --tau")
    if needs_path and args.command == "matrix" and (args.mu is None or args.tau is None):
        parser.error("matrix needs --mu/--tau or explicit --l/--r")
    if getattr(args, "limit_order", None) and not (math.isinf(args.mu or 0) and math.isinf(args.tau or 0)):
        parser.error("--limit-order is only legal when --mu and --tau are both inf")


_NEGATIVE = re.compile(r"^-(\d|\.\d|inf)", re.IGNORECASE)


def _join_negative_values(argv):
    """Let ``--a2 -5:5`` through by rewriting it as ``--a2=-5:5``."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and _NEGATIVE.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        _check_paths(args, parser)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        code = args.func(args)
    except DomainError as exc:
        print(f"squeeze-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
