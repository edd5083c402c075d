"""Command-line front end.

Exit status: 0 when every check passes, 1 when a theorem-evidence check
fails (the report keeps the offending activity vector), 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import ising
from .graph import GraphError, read_graph
from .ising import ActivityAssignment, BetaRangeError, CapExceededError, evaluate, plus_spectrum
from .probe import LemmaViolation, proof_probe, taylor_check, targeted_point
from .report import dumps, to_csv, witness
from .roots import PreconditionError, RootFindingError, UNIT_TOL, certify_unit_modulus, find_roots, gauss_lucas_check
from .sampling import torus_point
from .scan import torus_scan
from .verify import DEFAULT_BETAS, DEFAULT_EPS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_activities(spec: str, n: int) -> np.ndarray:
    """``ones``, ``torus:<seed>`` or a comma-separated list of complex numbers."""
    spec = spec.strip()
    if spec == "ones":
        return np.ones(n, dtype=complex)
    if spec.startswith("torus:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad torus seed in {spec!r}") from None
        return torus_point(seed, 0, n)
    try:
        z = np.array([complex(tok.strip().replace("i", "j")) for tok in spec.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse activity list {spec!r}") from None
    if len(z) != n:
        raise UsageError(f"activity list has {len(z)} entries, graph has {n} vertices")
    return z


def _emit(docs, fmt: str, header=None, rows=None, out=None):
    out = out or sys.stdout
    if fmt == "csv":
        out.write(to_csv(header, rows))
    else:
        for d in docs:
            out.write(dumps(d) + "\n")


def _unsupported(args, *flags):
    for f in flags:
        val = getattr(args, f, None)
        if val is not None and val is not False:
            raise UsageError(f"--{f} is not supported by '{args.command}'")


def cmd_eval(args) -> int:
    _unsupported(args, "eps", "vertex", "jobs", "samples")
    if not args.beta or len(args.beta) != 1:
        raise UsageError("eval takes exactly one --beta")
    g = read_graph(args.graph)
    z = parse_activities(args.activities or "ones", g.n)
    a = ActivityAssignment(args.beta[0], z)
    r = evaluate(g, a, cap=args.cap)
    zero_rel = args.tol if args.tol is not None else ising.ZERO_REL
    M = None if abs(r.Z) <= zero_rel * r.mass else r.DZ / r.Z
    doc = {
        "graph_id": g.graph_id, "n": g.n, "beta": a.beta, "activities": witness(z),
        "z": r.Z, "dz": r.DZ, "m": M, "mass": r.mass,
        "beta_out_of_range": r.beta_out_of_range, "near_zero": r.near_zero,
    }
    if args.normalized:
        doc["m_normalized"] = None if M is None or g.n == 0 else M / g.n
    if M is None:
        doc["error"] = f"Z vanishes (|Z| = {abs(r.Z):.3e}); magnetization undefined"
    header = ["graph_id", "beta", "z", "dz", "m"] + (["m_normalized"] if args.normalized else [])
    row = [g.graph_id, a.beta, r.Z, r.DZ, "" if M is None else M]
    if args.normalized:
        row.append("" if M is None or g.n == 0 else M / g.n)
    _emit([doc], args.format, header, [row])
    if M is None:
        print(doc["error"], file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_scan(args) -> int:
    _unsupported(args, "eps", "vertex", "normalized", "activities")
    g = read_graph(args.graph)
    betas = args.beta or []
    if not betas:
        raise UsageError("scan needs --beta")
    zero_rel = args.tol if args.tol is not None else ising.ZERO_REL
    samples = args.samples if args.samples is not None else 1000
    reports = [
        torus_scan(g, b, samples, args.seed, args.cap, args.jobs or 1, zero_rel, args.timing) for b in betas
    ]
    header = ["beta", "sample", "abs_z", "abs_dz", "min_abs_a"] + [f"angle_{v}" for v in range(g.n)]
    rows = [(r.beta, *row) for r in reports for row in r.rows]
    _emit([r.to_dict() for r in reports], args.format, header, rows)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_roots(args) -> int:
    _unsupported(args, "eps", "vertex", "jobs", "samples", "normalized", "activities")
    g = read_graph(args.graph)
    if g.n < 1:
        raise UsageError("roots needs at least one vertex")
    if not args.beta:
        raise UsageError("roots needs --beta")
    z0 = parse_activities(args.z0 or "ones", g.n)
    tol = args.tol if args.tol is not None else UNIT_TOL
    docs, rows, status = [], [], EXIT_OK
    for b in args.beta:
        ising.require_ferromagnetic(b)
        f = plus_spectrum(g, b, z0, args.cap)
        rs = find_roots(f)
        doc = {
            "graph_id": g.graph_id, "beta": b, "z0": witness(z0), "coefficients": f.coeffs,
            "roots": rs.roots, "residuals": rs.residuals, "iterations": rs.iterations,
            "converged": rs.converged, "clusters": rs.clusters,
            "f_at_one": f.moment(0), "fprime_at_one": f.moment(1),
        }
        if rs.converged:
            cert = certify_unit_modulus(rs, tol)
            doc["modulus_deviations"] = cert.deviations
            doc["max_modulus_deviation"] = cert.max_deviation
            doc["unit_circle_passed"] = cert.passed
            if cert.passed:
                gl = gauss_lucas_check(f, unit_tol=tol)
                doc["gauss_lucas"] = {
                    "derivative_roots": gl.derivative_roots, "max_modulus": gl.max_modulus,
                    "implication_holds": gl.implication_holds, "tol": gl.tol, "passed": gl.passed,
                }
                ok = gl.passed
            else:
                doc["gauss_lucas"] = {"error": "precondition unmet: roots of f are off the unit circle"}
                ok = False
        else:
            doc["error"] = f"root finder did not converge in {rs.iterations} iterations; partial roots reported"
            ok = False
        doc["passed"] = ok
        if not ok:
            status = EXIT_FAIL
        docs.append(doc)
        for i, r in enumerate(rs.roots):
            rows.append((b, i, r, abs(r), abs(abs(r) - 1), rs.residuals[i]))
    _emit(docs, args.format, ["beta", "index", "root", "modulus", "deviation", "residual"], rows)
    return status


def cmd_probe(args) -> int:
    _unsupported(args, "normalized", "activities", "jobs", "tol")
    g = read_graph(args.graph)
    if not args.beta:
        raise UsageError("probe needs --beta")
    eps = tuple(args.eps) if args.eps else DEFAULT_EPS
    if len(eps) < 3:
        raise UsageError("probe needs at least three --eps values for the Taylor check")
    pivots = [args.vertex] if args.vertex is not None else list(range(g.n))
    if args.vertex is not None and not 0 <= args.vertex < g.n:
        raise UsageError(f"--vertex {args.vertex} out of range")
    samples = args.samples if args.samples is not None else 10
    docs, rows, status = [], [], EXIT_OK
    for b in args.beta:
        ising.require_ferromagnetic(b)
        records, taylor = [], []
        for s in range(samples):
            z0 = torus_point(args.seed, s, g.n)
            for u in pivots:
                for kind, zp in (("random", z0), ("targeted", targeted_point(g, b, z0, u))):
                    spec = plus_spectrum(g, b, zp, args.cap)
                    for e in eps:
                        rec = proof_probe(g, b, zp, u, e, args.cap, spectrum=spec)
                        d = {
                            "sample": s, "kind": kind, "u": u, "epsilon": e, "mu": rec.mu,
                            "mu_restriction": rec.mu_restriction, "nu": rec.nu, "a0": rec.A0,
                            "tau": rec.tau, "tau_over_eps": rec.tau_over_eps,
                            "perturbed_z": rec.perturbed_Z, "linear_z": rec.linear_Z,
                            "u_coordinate_modulus": rec.u_coordinate_modulus,
                            "checks": rec.checks, "passed": rec.passed,
                        }
                        if not rec.passed:
                            d["activities"] = witness(zp)
                        records.append(d)
                        rows.append((b, s, kind, u, e, rec.mu, rec.nu, rec.A0, rec.tau, rec.tau_over_eps,
                                     rec.perturbed_Z, rec.u_coordinate_modulus, rec.passed))
                    t = taylor_check(g, b, zp, u, eps, args.cap)
                    td = {"sample": s, "kind": kind, "u": u, "eps": t.eps, "r1": t.r1, "r2": t.r2,
                          "r1_limit": t.r1_limit, "r2_limit": t.r2_limit, "passed": t.passed}
                    if not t.passed:
                        td["activities"] = witness(zp)
                    taylor.append(td)
        ok = all(r["passed"] for r in records) and all(t["passed"] for t in taylor)
        status = status if ok else EXIT_FAIL
        docs.append({"graph_id": g.graph_id, "beta": b, "seed": args.seed, "samples": samples,
                     "eps": list(eps), "vertex": args.vertex, "records": records, "taylor": taylor,
                     "passed": ok})
    header = ["beta", "sample", "kind", "u", "epsilon", "mu", "nu", "a0", "tau", "tau_over_eps",
              "perturbed_z", "u_coordinate_modulus", "passed"]
    _emit(docs, args.format, header, rows)
    return status


def cmd_verify(args) -> int:
    _unsupported(args, "normalized", "activities", "vertex", "tol", "graph")
    betas = tuple(args.beta) if args.beta else DEFAULT_BETAS
    eps = tuple(args.eps) if args.eps else DEFAULT_EPS
    samples = args.samples if args.samples is not None else 1000
    rep = run_suite(args.corpus, betas, args.seed, samples, eps, args.cap, args.jobs or 1, args.timing)
    header = ["graph", "graph_id", "n", "beta", "check", "passed", "value", "tolerance", "note"]
    rows = [[c[h] if c[h] is not None else "" for h in header] for c in rep["checks"]]
    _emit([rep], args.format, header, rows)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leeyang", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=float, action="append", help="edge activity (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--eps", type=float, action="append", help="perturbation size (repeatable)")
    common.add_argument("--vertex", type=int)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cap", type=int, default=ising.DEFAULT_CAP, help="enumeration cap on n")
    common.add_argument("--normalized", action="store_true", help="divide M by n")
    common.add_argument("--jobs", type=int)
    common.add_argument("--timing", action="store_true", help="record elapsed seconds")
    common.add_argument("--activities", help="ones | torus:<seed> | comma-separated complex list")

    for name, fn, needs_graph in (
        ("eval", cmd_eval, True),
        ("scan", cmd_scan, True),
        ("roots", cmd_roots, True),
        ("probe", cmd_probe, True),
        ("verify", cmd_verify, False),
    ):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--graph", required=needs_graph, help="edge-list file")
        sp.set_defaults(func=fn)
        if name == "roots":
            sp.add_argument("--z0", help="ones | torus:<seed> | comma-separated complex list")
        if name == "verify":
            sp.add_argument("--corpus", default="default")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GraphError, BetaRangeError, CapExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, RootFindingError, LemmaViolation) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
