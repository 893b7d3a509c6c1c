"""Command-line front end: ``lomse {classify,portrait,solutions,jacobi,foliate,verify}``.

Exit codes: 0 success, 1 usage or bad input, 2 numerical failure,
3 invariant failure.  Data files are byte-identical for identical
configurations; ``LOMSE_OUT_DIR`` sets where relative output paths land.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__, dynamics, stability, verify
from .errors import InternalInconsistency, LomseError, NumericalError
from .export import dumps_csv, dumps_json, fmt_float, params_record, to_jsonable
from .params import ConeType, LomseTriple, derive_params, enumerate_admissible
from .quotient_geometry import QuotientMetric

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_INVARIANT = 0, 1, 2, 3
OUT_DIR_ENV = "LOMSE_OUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _triple(text: str) -> LomseTriple:
    try:
        return LomseTriple.parse(text)
    except LomseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0 or not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return x


def out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(output)
    if not path.is_absolute():
        path = out_dir() / path
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def _tolerances(args) -> dynamics.Tolerances:
    return dynamics.Tolerances(rtol=args.rtol, max_radius=args.max_radius,
                               entry_radius=args.entry_radius)


def _tol_config(args) -> dict:
    return {"rtol": args.rtol, "atol": dynamics.Tolerances().atol,
            "max_radius": args.max_radius, "entry_radius": args.entry_radius}


# -- classify ----------------------------------------------------------------

CLASSIFY_HEADER = ["n", "p", "k", "lambda_sq", "tan_theta_sq", "a", "jacobi_disc", "type"]


def cmd_classify(args) -> int:
    rows = []
    records = []
    for triple, ctype in enumerate_admissible(args.n_max, args.k_max):
        P = derive_params(triple)
        rows.append([P.n, P.p, P.k, P.lambda_sq, P.tan_theta_sq, P.a_coeff, P.jacobi_disc, ctype])
        records.append(params_record(P))
    config = {"command": "classify", "n_max": args.n_max, "k_max": args.k_max}
    if args.format == "json":
        _emit(dumps_json({"rows": records}, config), args.output)
    else:
        _emit(dumps_csv(CLASSIFY_HEADER, rows, config), args.output)
    return EXIT_OK


# -- portrait ----------------------------------------------------------------

ORBIT_HEADER = ["t", "phi", "psi", "r", "rho"]
EVENT_HEADER = ["t", "kind", "phi", "psi", "dev"]


def _launch(P, launch: str, args) -> tuple[str, dynamics.Orbit]:
    tol = _tolerances(args)
    if launch == "origin":
        mu = float(dynamics.origin_unstable_mu(P))
        start = dynamics.PhaseState(0.0, args.epsilon, args.epsilon * mu)
        orbit = dynamics.integrate(P, start, args.t_end, tol, stop_at_entry=True)
        return "origin", orbit
    if launch == "fixed":
        start = dynamics.PhaseState(0.0, P.tan_theta, 0.0)
        return "fixed", dynamics.integrate(P, start, args.t_end, tol, start_dev=0.0)
    try:
        phi, psi = (float(x) for x in launch.split(","))
    except ValueError:
        raise UsageError(f"launch must be 'origin', 'fixed' or 'PHI,PSI', got {launch!r}") from None
    start = dynamics.PhaseState(0.0, phi, psi)
    return f"point_{phi!r}_{psi!r}", dynamics.integrate(P, start, args.t_end, tol,
                                                         stop_at_entry=True)


def cmd_portrait(args) -> int:
    P = derive_params(args.triple)
    tag = f"{P.n}-{P.p}-{P.k}"
    base = Path(args.out_dir) if args.out_dir else out_dir()
    base.mkdir(parents=True, exist_ok=True)
    launches = args.launch or ["origin"]
    for i, launch in enumerate(launches):
        label, orbit = _launch(P, launch, args)
        config = {"command": "portrait", "triple": args.triple, "launch": launch,
                  "t_end": args.t_end, "epsilon": args.epsilon, "tolerances": _tol_config(args)}
        r = [math.exp(t) for t in orbit.t]
        rows = [[t, ph, ps, rr, ph * rr] for t, ph, ps, rr in zip(orbit.t, orbit.phi, orbit.psi, r)]
        ev_rows = [[e.t, e.kind, e.phi, e.psi, e.dev] for e in orbit.events]
        stem = base / f"portrait_{tag}_{i}_{label}"
        if args.format == "json":
            payload = {"params": P, "launch": launch, "stop_reason": orbit.stop_reason,
                       "states": {"t": orbit.t, "phi": orbit.phi, "psi": orbit.psi},
                       "events": [{"t": e.t, "kind": e.kind, "phi": e.phi, "psi": e.psi,
                                   "dev": e.dev} for e in orbit.events]}
            _emit(dumps_json(payload, config), str(stem.with_suffix(".json").resolve()))
        else:
            _emit(dumps_csv(ORBIT_HEADER, rows, config), str(stem.with_suffix(".csv").resolve()))
            _emit(dumps_csv(EVENT_HEADER, ev_rows, config),
                  str(stem.parent.resolve() / (stem.name + ".events.csv")))
        print(f"{stem.name}: {len(rows)} states, {len(ev_rows)} events, "
              f"stopped by {orbit.stop_reason}", file=sys.stderr)
    return EXIT_OK


# -- solutions ---------------------------------------------------------------

SOLUTION_HEADER = ["m", "t_m", "rescale_factor", "L_m", "L_LOC", "L_LOC_minus_L_m"]


def cmd_solutions(args) -> int:
    P = derive_params(args.triple)
    m_max = args.m_max
    if P.cone_type is ConeType.TYPE_I and m_max > 1:
        print(f"note: {P.triple} is Type I; the family has a single non-oscillating "
              f"solution, m_max={m_max} reduced to 1", file=sys.stderr)
    fam = dynamics.solution_family(P, m_max, args.epsilon, tolerances=_tolerances(args))
    L_loc = float(QuotientMetric(P).loc_arclength(1.0))
    config = {"command": "solutions", "triple": args.triple, "m_max": m_max,
              "epsilon": args.epsilon, "tolerances": _tol_config(args)}
    if args.format == "json":
        payload = {"params": P, "L_LOC": L_loc, "solutions": [
            {"m": s.crossing_index, "t_m": s.crossing_t, "rescale_factor": s.rescale_factor,
             "length": s.length, "deficit": s.deficit, "quadrature_length": s.quadrature_length,
             "endpoint_error": s.endpoint_error,
             "ode1_residual": dynamics.ode1_residual(P, s.curve),
             "geodesic_residual": dynamics.geodesic_equivalence_check(P, s.curve)}
            for s in fam]}
        _emit(dumps_json(payload, config), args.output)
    else:
        rows = [[s.crossing_index, s.crossing_t, s.rescale_factor, s.length, L_loc, s.deficit]
                for s in fam]
        _emit(dumps_csv(SOLUTION_HEADER, rows, config), args.output)
    return EXIT_OK


# -- jacobi ------------------------------------------------------------------

def cmd_jacobi(args) -> int:
    P = derive_params(args.triple)
    anchor = args.anchor if args.anchor is not None else float(QuotientMetric(P).loc_arclength(1.0))
    report = stability.stability_verdict(P, count=args.count)
    cp = stability.conjugate_points(P, anchor, args.count)
    T = stability.exponent_translation(P)
    config = {"command": "jacobi", "triple": args.triple, "anchor": anchor, "count": args.count}
    if args.format == "csv":
        _emit(dumps_csv(["m", "s_m", "ratio"], _ratios(anchor, cp.zeros), config), args.output)
        return EXIT_OK
    payload = {
        "params": P,
        "verdict": report.verdict,
        "exponents": report.exponents,
        "basis_kind": report.basis_kind,
        "conjugate_points": {"s_anchor": anchor, "zeros": list(cp.zeros),
                             "ratio": cp.ratio, "expected_ratio":
                                 stability.zero_ratio(P) if cp.zeros else None,
                             "certificate": cp.certificate},
        "scan": {"depth": report.scan_depth, "zeros_log": list(report.scan_zeros_log)},
        "translation": {
            "radicand": T.radicand, "our_cal": T.our_cal, "b4_cal": T.b4_cal,
            "shift_is_n_plus_1": T.shift_is_n_plus_1, "s_to_r_exact": T.s_to_r_exact,
            "modulus_exponent": T.modulus_exponent, "frequency_sq": T.frequency_sq,
            "frequency": T.frequency, "field": T.field_string(),
            "basis_residual": T.basis_residual, "passed": T.passed},
    }
    _emit(dumps_json(payload, config), args.output)
    return EXIT_OK


def _ratios(anchor, zeros):
    """Rows (m, s_m, s_(m-1)/s_m) with s_0 the anchor."""
    prev = anchor
    rows = []
    for m, s in enumerate(zeros, start=1):
        rows.append([m, s, prev / s])
        prev = s
    return rows


# -- foliate -----------------------------------------------------------------

def cmd_foliate(args) -> int:
    P = derive_params(args.triple)
    phi1 = args.phi1 if args.phi1 is not None else P.tan_theta + args.dphi
    rep = dynamics.foliation_check(P, phi1, tolerances=_tolerances(args))
    config = {"command": "foliate", "triple": args.triple, "phi1": phi1,
              "tolerances": _tol_config(args)}
    summary = {
        "params": P, "phi1": phi1, "l_slopes": rep.l_slopes,
        "gamma1_monotone": rep.gamma1_monotone, "gamma2_monotone": rep.gamma2_monotone,
        "gamma1_below_axis": rep.gamma1_below_axis, "gamma2_above_axis": rep.gamma2_above_axis,
        "leaf_order_consistent": rep.leaf_order_consistent, "min_leaf_gap": rep.min_leaf_gap,
        "min_euclidean_gap": rep.min_euclidean_gap, "coverage_residual": rep.coverage_residual,
        "coverage_tol": rep.coverage_tol, "n_test_points": rep.n_test_points,
        "passed": rep.passed,
    }
    if args.format == "csv":
        rows = [[k, _flat(v)] for k, v in sorted(to_jsonable(summary).items()) if k != "params"]
        _emit(dumps_csv(["quantity", "value"], rows, config), args.output)
    else:
        _emit(dumps_json(summary, config), args.output)
    return EXIT_OK if rep.passed else EXIT_INVARIANT


def _flat(v):
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, list):
        return ";".join(str(x.get("exact", x)) if isinstance(x, dict) else str(x) for x in v)
    return str(v).lower() if isinstance(v, bool) else str(v)


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    checks = verify.run(args.scope)
    config = {"command": "verify", "scope": args.scope}
    if args.format == "json":
        _emit(dumps_json({"checks": checks,
                          "failed": sum(not c.passed for c in checks)}, config), args.output)
    else:
        rows = [[c.name, c.measured, c.tolerance, "pass" if c.passed else "FAIL", c.detail]
                for c in checks]
        _emit(dumps_csv(["check", "measured", "tolerance", "status", "detail"], rows, config),
              args.output)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=sys.stderr)
    return EXIT_INVARIANT if failed else EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lomse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("-o", "--output", default=None,
                       help=f"output file (default stdout; relative paths go under ${OUT_DIR_ENV})")

    def numeric(p):
        p.add_argument("--rtol", type=_positive, default=1e-12)
        p.add_argument("--max-radius", type=_positive, default=1e3)
        p.add_argument("--entry-radius", type=_positive, default=1e-10)

    p = sub.add_parser("classify", help="table of admissible triples and their type")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("portrait", help="phase-plane orbits as data files")
    p.add_argument("triple", type=_triple, help="n,p,k")
    p.add_argument("--launch", action="append",
                   help="'origin', 'fixed' or 'PHI,PSI' (repeatable; default origin)")
    p.add_argument("--t-end", type=_positive, default=60.0)
    p.add_argument("--epsilon", type=_positive, default=1e-8)
    p.add_argument("--out-dir", default=None, help=f"default ${OUT_DIR_ENV} or .")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    numeric(p)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("solutions", help="lengths of the Dirichlet solution family")
    p.add_argument("triple", type=_triple)
    p.add_argument("--m-max", type=_positive_int, default=5)
    p.add_argument("--epsilon", type=_positive, default=1e-8)
    common(p)
    numeric(p)
    p.set_defaults(func=cmd_solutions)

    p = sub.add_parser("jacobi", help="Jacobi fields, conjugate points and the verdict")
    p.add_argument("triple", type=_triple)
    p.add_argument("--anchor", type=_positive, default=None,
                   help="arclength anchor (default: the cone segment's length)")
    p.add_argument("--count", type=int, default=3)
    common(p, "json")
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("foliate", help="Type I sector foliation certificate")
    p.add_argument("triple", type=_triple)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--phi1", type=_positive, default=None)
    g.add_argument("--dphi", type=_positive, default=0.05,
                   help="phi1 = tan(theta) + dphi when --phi1 is not given")
    common(p, "json")
    numeric(p)
    p.set_defaults(func=cmd_foliate)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("scope", choices=verify.SCOPES + ("all",))
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "count", 0) is not None and getattr(args, "count", 0) < 0:
        parser.error("--count must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lomse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"lomse: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InternalInconsistency as exc:
        print(f"lomse: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except LomseError as exc:
        print(f"lomse: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
