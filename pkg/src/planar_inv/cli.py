"""Command-line front end.

Exit codes: 0 success, 1 file or parse error, 2 genericity failure (curve
not stable, move site unusable), 3 grading violation, 4 a verification
command ran but its check failed.
"""

import argparse
import sys

from .exceptions import (
    DegenerateIntersection,
    EpsilonTooLarge,
    GradingViolation,
    MalformedCurve,
    NonIntegerTurning,
    NonOddBottomIndex,
    NotStable,
    ParseError,
    PlanarInvError,
    SiteInvalid,
    StabilityLost,
    WindowMisaligned,
)
from . import io

EXIT_OK, EXIT_IO, EXIT_GENERIC, EXIT_GRADING, EXIT_CHECK = 0, 1, 2, 3, 4


def _cmd_compute(args, cfg):
    from .invariant import evaluate

    curve = io.read_curve(args.curve)
    res = evaluate(curve, cfg.tolerances, cfg.eps_scale)
    if args.format == "text":
        lines = [f"omega = {res.whitney}", f"F = {res.f}", f"G = {res.g}",
                 f"F_hat = {res.f_hat}", f"K = {res.k}"]
        for c, (a, b) in res.per_crossing:
            lines.append(f"crossing at ({c.location[0]:.6g}, {c.location[1]:.6g}) "
                         f"sign {c.sign:+d}: {a} {b}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(io.dumps(res.to_json()))
    return EXIT_OK


def _cmd_check_invariance(args, cfg):
    from .moves import invariance_report

    curve = io.read_curve(args.curve)
    trials = args.trials or cfg.trials
    amp = args.amplitude or cfg.amplitude
    rep = invariance_report(curve, trials, amp, cfg.seed, cfg.tolerances)
    sys.stdout.write(io.dumps(rep))
    return EXIT_OK if rep["status"] == "PASS" else EXIT_CHECK


def _cmd_move_test(args, cfg):
    from .moves import make_j_move, make_s_move

    curve = io.read_curve(args.curve)
    site = io.site_from_json(io.load_json(args.site))
    fn = make_j_move if site.to_json()["kind"] == "J" else make_s_move
    out = fn(curve, site, cfg.tolerances)
    payload = out.to_json()
    if not args.with_curves:
        payload.pop("curve_plus")
        payload.pop("curve_minus")
    sys.stdout.write(io.dumps(payload))
    return EXIT_OK


def _cmd_algebra_verify(args, cfg):
    from .exactness import model_basis_check, verify_exactness, verify_prop_ankl

    data = io.load_json(args.window) if args.window else {"windows": []}
    if isinstance(data, dict) and "windows" not in data and "n" in data:
        data = {"windows": [data]}
    if not isinstance(data, dict):
        raise ParseError("window file must be an object")
    results = {}
    ok = True
    if "model_basis" in data:
        cert = model_basis_check(int(data["model_basis"]))
        results["model_basis"] = cert.to_json()
        ok &= cert.passed
    results["windows"] = []
    for wd in data.get("windows", []):
        wd = dict(wd)
        wd.setdefault("depth", cfg.depth)
        w = io.window_from_json(wd)
        cert = verify_prop_ankl(w)
        ex = verify_exactness(w, seed=cfg.seed)
        ok &= cert.passed and ex["pass"]
        results["windows"].append({"window": w.to_json(), "prop": cert.to_json(), "exactness": ex})
    results["pass"] = bool(ok)
    sys.stdout.write(io.dumps(results))
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_render(args, cfg):
    from .render import render_svg

    curve = io.read_curve(args.curve)
    svg = render_svg(curve, cfg.tolerances)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="planar-inv", description="Order-one invariant of planar curves.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration JSON")
    common.add_argument("--seed", type=int, help="override the configured seed")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="F, G, F-hat, K and per-crossing indices")
    c.add_argument("curve")
    c.add_argument("--format", choices=("json", "text"), default="json")
    c.set_defaults(func=_cmd_compute)

    c = sub.add_parser("check-invariance", parents=[common], help="F-hat under random perturbations")
    c.add_argument("curve")
    c.add_argument("--trials", type=int)
    c.add_argument("--amplitude", type=float)
    c.set_defaults(func=_cmd_check_invariance)

    c = sub.add_parser("move-test", parents=[common], help="resolve one J or S site")
    c.add_argument("curve")
    c.add_argument("site")
    c.add_argument("--with-curves", action="store_true", help="include both resolutions")
    c.set_defaults(func=_cmd_move_test)

    c = sub.add_parser("algebra-verify", parents=[common], help="exactness checks on truncation windows")
    c.add_argument("window", nargs="?", help="window JSON (object, or {windows: [...], model_basis: N})")
    c.set_defaults(func=_cmd_algebra_verify)

    c = sub.add_parser("render", parents=[common], help="draw a curve as SVG")
    c.add_argument("curve")
    c.add_argument("out")
    c.set_defaults(func=_cmd_render)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = io.read_config(args.config).with_seed(args.seed)
        return args.func(args, cfg)
    except (OSError, ParseError, MalformedCurve) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GradingViolation as exc:
        print(f"grading violation: {exc}", file=sys.stderr)
        return EXIT_GRADING
    except NotStable as exc:
        print(f"not stable: {exc}", file=sys.stderr)
        print(io.dumps(exc.report.to_json()), file=sys.stderr, end="")
        return EXIT_GENERIC
    except (DegenerateIntersection, NonIntegerTurning, NonOddBottomIndex, EpsilonTooLarge,
            SiteInvalid, StabilityLost) as exc:
        print(f"genericity failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GENERIC
    except WindowMisaligned as exc:
        print(f"window misaligned: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except PlanarInvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GENERIC


if __name__ == "__main__":
    sys.exit(main())
