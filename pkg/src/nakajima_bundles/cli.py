"""Command-line front end.

Exit codes: 0 ok, 1 scenario mismatch (reproduce), 2 validation or schema
error, 3 non-convergence, 4 inconsistent section data.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import io
from .p1.bundle import InconsistencyError, balanced_params
from .p1.scan import scan_existence
from .p1.stability import (PreconditionError, endomorphism_dimension, expected_dimension, genus_expected_dim,
                           is_stable)
from .point_rep import CONVENTIONS, PointRep, StabilityParams, moment_complex, moment_real
from .quiver import ValidationError, rep_space_dimension
from .reproduce import reproduce_examples
from .solver import SolverConfig, solve, tangent_dimension
from .torus import MODES, check_nilpotent, find_weights, is_fixed

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_NONCONVERGED, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
VERBS = ("validate", "moment", "solve", "stability", "scan", "fixed-points", "dimension", "reproduce")


def _numbers(text: str) -> tuple:
    try:
        return tuple(Fraction(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nakajima-bundles", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("spec", nargs="?", help="spec file (JSON, schema 1); not used by reproduce")
    ap.add_argument("--tau", type=_numbers, help="per-vertex tau, e.g. 1,-1")
    ap.add_argument("--sigma", type=_numbers, help="per-vertex sigma (> 0)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bound", type=int, default=None, help="line-degree bound (stability) or weight bound")
    ap.add_argument("--mode", choices=MODES, default="circle")
    ap.add_argument("--convention", choices=CONVENTIONS, default="commutator")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--max-iter", type=int, default=10000)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), default=(-2, 2),
                    help="summand degree range for scan")
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--genus", type=int, default=None, help="dimension: also report 6(g-1)")
    return ap


def _params(args, spec: io.Spec, n: int, default: StabilityParams) -> StabilityParams:
    base = spec.stability or default
    sigma = args.sigma if args.sigma is not None else base.sigma
    tau = args.tau if args.tau is not None else base.tau
    if len(sigma) != n or len(tau) != n:
        raise io.SpecError(f"sigma and tau need {n} entries")
    return StabilityParams(tuple(sigma), tuple(tau))


def _point_params(args, spec):
    n = len(spec.quiver.vertices)
    return _params(args, spec, n, StabilityParams((Fraction(1),) * n, (Fraction(0),) * n))


def _float_params(sp: StabilityParams) -> StabilityParams:
    return StabilityParams(tuple(float(s) for s in sp.sigma), tuple(float(t) for t in sp.tau))


def _cfg(args) -> SolverConfig:
    return SolverConfig(max_iterations=args.max_iter, tolerance_mu=args.tol, rng_seed=args.seed)


def _enc(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def _echo(args) -> dict:
    return {"convention": args.convention, "mode": args.mode}


def cmd_validate(args, spec: io.Spec):
    issues = [str(i) for i in spec.issues()]
    report = dict(_echo(args), valid=not issues, issues=issues)
    if not issues and spec.label is not None:
        report["rep_space_dimension"] = rep_space_dimension(spec.quiver, spec.label)
    if not issues and spec.splitting is not None:
        spec.bundle()  # raises on bad sections
    if not issues and spec.point is not None:
        spec.point_rep()
    return report, EXIT_OK if not issues else EXIT_INVALID


def _point_or_random(args, spec: io.Spec) -> PointRep:
    if spec.point is not None:
        return spec.point_rep()
    return PointRep.random(spec.quiver, spec.require_label(), np.random.default_rng(args.seed))


def cmd_moment(args, spec: io.Spec):
    p = _point_or_random(args, spec)
    mr, mc = moment_real(p, args.convention), moment_complex(p)
    return dict(_echo(args), real={v: _enc(m) for v, m in mr.items()},
                complex={v: _enc(m) for v, m in mc.items()}, point=p.to_json()), EXIT_OK


def _solve(args, spec: io.Spec):
    sp = _float_params(_point_params(args, spec))
    start = spec.point_rep() if spec.point is not None else None
    cfg = _cfg(args)
    res = solve(spec.quiver, spec.require_label(), sp, cfg, start, args.convention)
    dim = tangent_dimension(res, cfg=cfg, convention=args.convention) if res.converged else None
    return res, dim


def cmd_solve(args, spec: io.Spec):
    res, dim = _solve(args, spec)
    report = dict(_echo(args), **res.to_json(dim), stabilizer_dimension=res.stabilizer_dimension,
                  message=res.message, point=res.point.to_json())
    return report, EXIT_OK if res.converged else EXIT_NONCONVERGED


def _bundle_params(args, spec: io.Spec, B):
    return _params(args, spec, len(spec.quiver.vertices), balanced_params(B.bundle))


def cmd_stability(args, spec: io.Spec):
    B = spec.bundle()
    sp = _bundle_params(args, spec, B)
    rep = is_stable(B, sp, args.bound)
    report = dict(_echo(args), **rep.to_json(), family=rep.family, candidates_checked=rep.candidates_checked)
    report["dimension"] = expected_dimension(B, sp, args.bound) if rep.is_stable else None
    return report, EXIT_OK


def cmd_scan(args, spec: io.Spec):
    label = spec.require_label()
    ranks = dict(zip(spec.quiver.vertices, label.rank))
    sp = None
    if args.sigma is not None or args.tau is not None or spec.stability is not None:
        n = len(spec.quiver.vertices)
        sp = _params(args, spec, n, StabilityParams((Fraction(1),) * n, (Fraction(0),) * n))
    rows = scan_existence(spec.quiver, ranks, tuple(args.range), sp, args.samples, args.seed, args.bound)
    return dict(_echo(args), range=list(args.range), samples=args.samples, seed=args.seed,
                rows=[r.to_json() for r in rows]), EXIT_OK


def cmd_fixed_points(args, spec: io.Spec):
    data = spec.bundle() if spec.splitting is not None else spec.point_rep()
    bound = 3 if args.bound is None else args.bound
    report = dict(_echo(args), bound=bound)
    if spec.weights is not None:
        report["given_weights_fixed"] = is_fixed(data, spec.weights, args.mode)
    report["weights"] = [w.to_json() for w in find_weights(data, bound, args.mode)]
    if spec.splitting is not None:
        report["nilpotent"] = check_nilpotent(data.phi)
    return report, EXIT_OK


def cmd_dimension(args, spec: io.Spec):
    report = _echo(args)
    if args.genus is not None:
        report["genus_expected_dim"] = genus_expected_dim(args.genus)
    if spec.splitting is not None:
        B = spec.bundle()
        sp = _bundle_params(args, spec, B)
        report["endomorphism_dimension"] = endomorphism_dimension(B)
        report["expected_dimension"] = expected_dimension(B, sp, args.bound)
        return report, EXIT_OK
    res, dim = _solve(args, spec)
    report.update(res.to_json(dim))
    return report, EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_reproduce(args):
    scenarios = reproduce_examples(args.convention, args.seed)
    ok = all(s.passed for s in scenarios)
    return dict(_echo(args), scenarios=[s.to_json() for s in scenarios]), EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {
    "validate": cmd_validate, "moment": cmd_moment, "solve": cmd_solve, "stability": cmd_stability,
    "scan": cmd_scan, "fixed-points": cmd_fixed_points, "dimension": cmd_dimension,
}


def _text(report: dict, indent: str = "") -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, dict) and v and k != "point":
            lines.append(f"{indent}{k}:")
            lines.append(_text(v, indent + "  "))
        elif k == "scenarios":
            for s in v:
                status = "PASS" if s["passed"] else "FAIL"
                lines.append(f"{indent}{status} {s['name']}")
                if not s["passed"]:
                    lines.append(f"{indent}  expected: {s['expected']}")
                    lines.append(f"{indent}  observed: {s['observed']}")
        elif k == "point":
            continue
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "reproduce":
            report, code = cmd_reproduce(args)
        else:
            if args.spec is None:
                raise io.SpecError(f"{args.verb} needs a spec file")
            spec = io.load_spec(args.spec)
            if args.verb != "validate":
                issues = spec.issues()
                if issues:
                    raise ValidationError(issues)
            report, code = COMMANDS[args.verb](args, spec)
    except (io.SpecError, ValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except InconsistencyError as exc:
        print(f"inconsistent: {exc}", file=err)
        return EXIT_INCONSISTENT
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    print(io.dumps(report) if args.json else _text(report), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
