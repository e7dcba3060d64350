"""Command-line front end.

Exit codes: 0 pass, 1 input error, 2 verdict fail, 3 runtime/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import contact as C
from .config import IntegratorConfig
from .dynamics import flow
from .errors import ContactKitError, ExprSyntaxError, FlowError, SpecError, UnknownIdentifierError
from .geomcore import ScalarField
from .integrability import (
    IntegrableSystemSpec,
    _angles,
    isotropy_integrability_check,
    measured_rotation,
    predicted_frequencies,
    torus_actions,
    torus_point,
    verify_theorem5,
)
from .report import CheckReport, Condition, Worst, _clean
from .systems import builtin, load

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_RUNTIME = 0, 1, 2, 3


def _number(text: str) -> float:
    """A float or a constant expression such as ``pi/4``."""
    try:
        return float(text)
    except ValueError:
        return ScalarField(text, ())([])


def _system(args):
    if args.builtin and args.spec:
        raise SpecError("give either a spec path or --builtin, not both")
    if args.builtin:
        system = builtin(args.builtin)
    elif args.spec:
        system = load(args.spec)
    else:
        raise SpecError("no system given (spec path or --builtin NAME)")
    for item in getattr(args, "add_integral", None) or []:
        name, sep, expr = item.partition("=")
        if not sep or not name.strip() or not expr.strip():
            raise SpecError(f"--add-integral expects 'name = expr', got {item!r}")
        system = system.with_integral(name.strip(), expr.strip())
    return system


def _dump(obj, fh=None) -> None:
    fh = fh or sys.stdout
    fh.write(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def verify_report(system, seed: int | None = None, samples: int = 64) -> CheckReport:
    cfg = system.check_config(samples, seed)
    tol = cfg.tolerances
    rep = CheckReport(
        f"verify:{system.name}",
        meta={"system": system.name, "seed": cfg.seed, "samples": len(cfg.sample_points), "tolerances": tol.to_dict()},
    )
    det_min, det_pt = np.inf, None
    res = Worst()
    for x in cfg.sample_points:
        det = abs(C.contact_check(system.contact, x))
        if det < det_min:
            det_min, det_pt = det, x.tolist()
        try:
            res.update(C.reeb(system.contact, x, np.inf).residual, x)
        except ContactKitError:
            res.update(np.inf, x)
    rep.add(Condition("contact", det_min >= tol.contact, det_min, det_pt, {"tolerance": tol.contact, "measure": "min |det|"}))
    rep.add(res.condition("reeb_residual", tol.linear))
    if system.r is not None:
        t5 = verify_theorem5(IntegrableSystemSpec.from_system(system), cfg)
        rep.extend(t5, "integrability")
        rep.meta["torus_dimension"] = system.r + 1
    if system.symmetries:
        fields = [system.symmetry(k) for k in sorted(system.symmetries)]
        rep.extend(isotropy_integrability_check(fields, system.contact, cfg), "isotropy")
    return rep


def cmd_verify(args) -> int:
    system = _system(args)
    rep = verify_report(system, args.seed, args.samples)
    _dump(rep.to_dict())
    return EXIT_OK if rep.verdict else EXIT_FAIL


def _point(system, text: str) -> np.ndarray:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != system.chart.dim:
        raise SpecError(f"--from needs {system.chart.dim} values, got {len(parts)}")
    return np.array([_number(p) for p in parts])


def cmd_flow(args) -> int:
    system = _system(args)
    if args.reeb and args.field:
        raise SpecError("give either --reeb or --field")
    X = system.vector_field(None if args.reeb or not args.field else args.field)
    x0 = _point(system, getattr(args, "from"))
    cfg = IntegratorConfig(
        rel_tol=args.rtol, abs_tol=args.atol, t_end=_number(args.t), dense_output_stride=args.stride
    )
    invariants = {k: system.field(k) for k in sorted(system.fields)}
    lo, hi = system.chart.flow_bounds() if args.check_domain else (None, None)
    out = open(args.output, "w") if args.output else sys.stdout
    code = EXIT_OK
    try:
        try:
            traj = flow(X, x0, cfg, invariants, lo, hi)
        except FlowError as e:
            traj = e.trajectory
            code = EXIT_RUNTIME
            print(f"error: {e}", file=sys.stderr)
        if traj is not None:
            traj.to_csv(out)
    finally:
        if args.output:
            out.close()
    if traj is not None:
        table = {
            "field": X.name,
            "drift": [{"field": k, "max_deviation": v} for k, v in sorted(traj.drift.items(), key=lambda kv: -kv[1])],
            "exit_time": traj.exit_time,
            "seed": system.seed,
        }
        if args.drift:
            with open(args.drift, "w") as fh:
                _dump(table, fh)
        else:
            _dump(table, sys.stderr)
    return code


def _torus_values(system, text: str) -> dict[str, float]:
    text = text.strip()
    if "=" in text:
        vals = {}
        for item in text.split(","):
            k, sep, v = item.partition("=")
            if not sep:
                raise SpecError(f"--torus: cannot read {item!r}")
            vals[k.strip()] = _number(v.strip())
        return vals
    pt = _point(system, text)
    return dict(zip(system.coords, pt))


def cmd_actions(args) -> int:
    system = _system(args)
    values = _torus_values(system, args.torus)
    try:
        base = torus_point(system, values)
    except KeyError as e:
        raise SpecError(f"--torus: unresolved coordinate {e.args[0]!r}") from None
    if not system.chart.contains(base, safe=False):
        raise SpecError(f"--torus: point {base.tolist()} lies outside the chart box")
    tol = system.tolerances
    angles = args.cycles.split(",") if args.cycles else None
    if angles:
        bad = [a for a in angles if a not in system.coords]
        if bad:
            raise SpecError(f"--cycles: unknown coordinate {bad[0]!r}")
    acts = torus_actions(system, base, args.nodes, angles)
    est = measured_rotation(system, base, _number(args.t_end))
    Z = C.reeb(system.contact, base).Z
    reeb_angles = [float(Z[system.chart.index(a)]) for a in _angles(system)]
    pred = predicted_frequencies(system, base, args.nodes)
    freqs = np.array(reeb_angles) if pred is None else pred

    checks = {}
    checks["rotation_vs_frequencies"] = {
        "max_abs": float(np.max(np.abs(est.omega - freqs))),
        "tolerance": tol.rotation,
    }
    checks["reeb_vs_frequencies"] = {
        "max_abs": float(np.max(np.abs(np.array(reeb_angles) - freqs))),
        "tolerance": tol.rotation,
    }
    checks["linear_fit"] = {"max_abs": est.residual, "tolerance": tol.rotation_fit}
    checks["action_resolution"] = {"max_abs": max(a.error for a in acts.values()), "tolerance": tol.action_error}
    if system.action_angle:
        aa = system.action_angle
        full = torus_actions(system, base, args.nodes, aa["angles"])
        y = [full[a].value for a in aa["angles"][1:]]
        y0 = ScalarField(aa["y0"], aa["actions"])(y)
        checks["y0_consistency"] = {"max_abs": abs(full[aa["angles"][0]].value - y0), "tolerance": 1e-8}
    for c in checks.values():
        c["pass"] = bool(c["max_abs"] <= c["tolerance"])
    ok = all(c["pass"] for c in checks.values())
    _dump(
        {
            "system": system.name,
            "seed": system.seed,
            "torus": base.tolist(),
            "actions": {k: v.value for k, v in acts.items()},
            "action_errors": {k: v.error for k, v in acts.items()},
            "frequencies": freqs.tolist(),
            "rotation_numbers": est.omega.tolist(),
            "rotation_residual": est.residual,
            "checks": checks,
            "pass": ok,
        }
    )
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contactkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", nargs="?", help="JSON system spec (version 1)")
        p.add_argument("--builtin", metavar="NAME", help="use a built-in system instead of a spec file")

    p = sub.add_parser("verify", help="run the verification suite; JSON report on stdout")
    common(p)
    p.add_argument("--add-integral", action="append", metavar="NAME=EXPR", help="append an integral (repeatable)")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default: the spec's)")
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("flow", help="integrate a contact vector field; CSV on stdout")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--field", help="flow X_f for the named scalar field (Xname also accepted)")
    g.add_argument("--reeb", action="store_true", help="flow the Reeb field")
    p.add_argument("--from", required=True, metavar="X0", help="comma-separated start point")
    p.add_argument("--t", required=True, help="final time (number or constant expression)")
    p.add_argument("--stride", type=float, default=None, help="output spacing")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--output", help="CSV path (default stdout)")
    p.add_argument("--drift", help="write the drift table here instead of stderr")
    p.add_argument("--no-domain-check", dest="check_domain", action="store_false")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("actions", help="actions, frequencies and rotation numbers on a torus")
    common(p)
    p.add_argument("--torus", required=True, help="'name=value,...' or a full comma-separated point")
    p.add_argument("--cycles", help="comma-separated angle coordinates (default: all angles)")
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--t-end", default="20", help="integration time for rotation numbers")
    p.set_defaults(func=cmd_actions)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (SpecError, ExprSyntaxError, UnknownIdentifierError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ContactKitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
