"""Corpus-wide verification suite: one result per (graph, beta, check)."""

from __future__ import annotations

import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import ising
from .decomposition import A_by_difference, decompose, decompose_batch, verify_A_nonzero
from .graph import Graph, GraphError, generate
from .ising import ActivityAssignment, enumerate_batch, evaluate, evaluate_naive, plus_spectrum, require_ferromagnetic
from .probe import proof_probe, taylor_check, targeted_point
from .report import witness
from .roots import RestrictionPolynomial, ROOT_TOL, UNIT_TOL, GAUSS_LUCAS_SLACK, find_roots, gauss_lucas_check
from .sampling import annulus_point, shell_point, torus_angles_batch, torus_point

DEFAULT_CORPUS = "path:1-12,cycle:3-12,complete:1-12,grid:2x1-6,gnp:1-12:p=0.4:seeds=0-2"
DEFAULT_BETAS = (0.1, 0.5, 0.9)
DEFAULT_EPS = (1e-2, 1e-3, 1e-4)

ORACLE_INSTANCES = 2
ROOT_SAMPLES = 50
DECOMP_INSTANCES = 2
DIRECTIONAL_SAMPLES = 100
LEE_YANG_SAMPLES = 500
LEE_YANG_DELTA = 0.05
PROBE_POINTS = 2
EXPULSION_EPS = 1e-3

ORACLE_TOL = 1e-10
IDENTITY_TOL = 1e-12
DIRECTIONAL_TOL = 1e-9

# disjoint sample-index ranges so different checks never reuse a stream
_ORACLE_BASE = 10_000
_DECOMP_BASE = 20_000
_ROOT_BASE = 30_000
_PROBE_BASE = 40_000


@dataclass
class CheckResult:
    graph: str
    graph_id: str
    n: int
    beta: float
    check: str
    passed: bool
    value: float
    tolerance: float
    witness: dict | None = None
    note: str | None = None


def parse_corpus(spec: str) -> tuple[list[tuple[str, Graph]], list[str]]:
    """Expand a corpus description into named graphs.

    Entries are comma separated: ``family:LO-HI`` for path, cycle and complete;
    ``grid:RxLO-HI`` for R-row grids; ``gnp:LO-HI:p=P:seeds=A-B``. ``default``
    expands to the standard corpus. Disconnected graphs are returned by name
    in the second list and excluded from the first.
    """
    if spec.strip() == "default":
        spec = DEFAULT_CORPUS
    graphs, dropped = [], []
    for entry in filter(None, (e.strip() for e in spec.split(","))):
        parts = entry.split(":")
        family = parts[0]
        opts = dict(p.split("=", 1) for p in parts[2:] if "=" in p)
        if len(parts) < 2:
            raise GraphError(f"corpus entry {entry!r} has no size range")
        if family == "grid":
            m = re.fullmatch(r"(\d+)x(\d+)(?:-(\d+))?", parts[1])
            if not m:
                raise GraphError(f"bad grid size {parts[1]!r}")
            rows = int(m.group(1))
            cols = _range(m.group(2), m.group(3))
            items = [(f"grid_{rows}x{c}", generate("grid", rows=rows, cols=c)) for c in cols]
        else:
            m = re.fullmatch(r"(\d+)(?:-(\d+))?", parts[1])
            if not m:
                raise GraphError(f"bad size range {parts[1]!r}")
            sizes = _range(m.group(1), m.group(2))
            if family == "gnp":
                p = float(opts.get("p", 0.4))
                s = re.fullmatch(r"(\d+)(?:-(\d+))?", opts.get("seeds", "0"))
                if not s:
                    raise GraphError(f"bad seed range in {entry!r}")
                items = [
                    (f"gnp_n{n}_p{p:g}_s{sd}", generate("gnp", n=n, p=p, seed=sd))
                    for n in sizes
                    for sd in _range(s.group(1), s.group(2))
                ]
            elif family in ("path", "cycle", "complete"):
                items = [(f"{family}_n{n}", generate(family, n=n)) for n in sizes]
            else:
                raise GraphError(f"unknown corpus family {family!r}")
        for name, g in items:
            (graphs.append((name, g)) if g.is_connected() else dropped.append(name))
    return graphs, dropped


def _range(lo, hi) -> range:
    lo = int(lo)
    hi = int(hi) if hi is not None else lo
    return range(lo, hi + 1)


def check_graph(
    name: str,
    g: Graph,
    beta: float,
    seed: int = 0,
    samples: int = 1000,
    eps: tuple = DEFAULT_EPS,
    cap: int = ising.DEFAULT_CAP,
) -> list[CheckResult]:
    require_ferromagnetic(beta)
    out: list[CheckResult] = []

    def add(check, passed, value, tol, wit=None, note=None):
        out.append(CheckResult(name, g.graph_id, g.n, float(beta), check, bool(passed), float(value), float(tol), wit, note))

    n = g.n

    # engine vs naive oracle at generic complex activities
    worst, wz = 0.0, None
    if n <= ising.NAIVE_CAP:
        for i in range(ORACLE_INSTANCES):
            z = annulus_point(seed, _ORACLE_BASE + i, n)
            a = ActivityAssignment(beta, z)
            fast, slow = evaluate(g, a, cap), evaluate_naive(g, a)
            err = max(abs(fast.Z - slow.Z) / abs(slow.Z), abs(fast.DZ - slow.DZ) / abs(slow.DZ) if n else 0.0)
            if err >= worst:
                worst, wz = err, z
        add("oracle_equivalence", worst <= ORACLE_TOL, worst, ORACLE_TOL,
            None if worst <= ORACLE_TOL else {"activities": witness(wz)})

    # D_G Z and A on the torus
    angles = torus_angles_batch(seed, 0, samples, n)
    zs = np.exp(1j * angles)
    full = enumerate_batch(g, beta, zs, cap)
    DZ, mass = full.DZ, full.mass
    rel = np.abs(DZ) / mass
    i = int(np.argmin(rel))
    ok = rel[i] > ising.ZERO_REL
    add("dz_nonzero", ok, float(np.abs(DZ).min()), ising.ZERO_REL,
        None if ok else {"activities": witness(zs[i])})

    fp = np.array([
        RestrictionPolynomial(full.spec[j], coeffs_lo=full.spec_lo[j]).moment(1) for j in range(samples)
    ])
    err = np.abs(fp - DZ) / np.abs(DZ)
    i = int(np.argmax(err))
    add("fprime_identity", err[i] <= IDENTITY_TOL, err[i], IDENTITY_TOL,
        None if err[i] <= IDENTITY_TOL else {"activities": witness(zs[i])})

    rep = verify_A_nonzero(g, beta, samples, seed, cap)
    add("a_nonzero", rep.passed, rep.min_abs_A, ising.ZERO_REL,
        None if rep.passed else {"vertex": rep.argmin_vertex, "activities": witness(np.exp(1j * rep.argmin_angles))})

    # Lee-Yang off the torus, outside and inside
    for label, r, r_special in (("outside", 1 + LEE_YANG_DELTA, 1 + 2 * LEE_YANG_DELTA),
                                ("inside", 1 - LEE_YANG_DELTA, 1 - 2 * LEE_YANG_DELTA)):
        pts = np.array([shell_point(seed, j, n, r, r_special) for j in range(LEE_YANG_SAMPLES)]).reshape(-1, n)
        e = enumerate_batch(g, beta, pts, cap)
        Zs, ms = e.Z, e.mass
        relz = np.abs(Zs) / ms
        j = int(np.argmin(relz))
        ok = relz[j] > ising.ZERO_REL
        add(f"lee_yang_{label}", ok, float(np.abs(Zs).min()), ising.ZERO_REL,
            None if ok else {"activities": witness(pts[j])})

    # restriction polynomial: roots on the circle, Gauss-Lucas, f'(1) != 0
    if n >= 1:
        dev_worst, gl_worst, fp_min = 0.0, 0.0, np.inf
        bad = {}
        for j in range(ROOT_SAMPLES):
            z0 = torus_point(seed, _ROOT_BASE + j, n)
            f = plus_spectrum(g, beta, z0, cap)
            rs = find_roots(f, ROOT_TOL)
            dev = float(np.abs(np.abs(rs.roots) - 1).max()) if rs.converged else np.inf
            if dev > dev_worst:
                dev_worst = dev
            if dev > UNIT_TOL and "unit_circle_law" not in bad:
                bad["unit_circle_law"] = {"activities": witness(z0), "converged": rs.converged}
                continue
            gl = gauss_lucas_check(f)
            gl_worst = max(gl_worst, gl.max_modulus)
            if not gl.passed and "gauss_lucas" not in bad:
                bad["gauss_lucas"] = {"activities": witness(z0)}
            afp = abs(gl.fprime_at_one)
            if afp < fp_min:
                fp_min = afp
                if afp <= ising.ZERO_REL * f.abs_sum:
                    bad.setdefault("fprime_nonzero", {"activities": witness(z0)})
        add("unit_circle_law", dev_worst <= UNIT_TOL, dev_worst, UNIT_TOL, bad.get("unit_circle_law"))
        add("gauss_lucas", gl_worst <= 1 + GAUSS_LUCAS_SLACK and "gauss_lucas" not in bad,
            gl_worst, 1 + GAUSS_LUCAS_SLACK, bad.get("gauss_lucas"))
        add("fprime_nonzero", "fprime_nonzero" not in bad, fp_min, ising.ZERO_REL, bad.get("fprime_nonzero"))

    # decomposition identity and the two routes to A
    id_worst, a_worst, wit = 0.0, 0.0, None
    for j in range(DECOMP_INSTANCES):
        z = annulus_point(seed, _DECOMP_BASE + j, n)
        a = ActivityAssignment(beta, z)
        Zf = evaluate(g, a, cap).Z
        for u in range(n):
            d = decompose(g, a, u, cap)
            e1 = abs(Zf - d.value(z[u])) / (1 + abs(Zf))
            e2 = abs(d.A - A_by_difference(g, a, u, cap)) / abs(d.A)
            if max(e1 / IDENTITY_TOL, e2 / IDENTITY_TOL) > 1 and wit is None:
                wit = {"vertex": u, "activities": witness(z)}
            id_worst, a_worst = max(id_worst, e1), max(a_worst, e2)
    add("decomposition_identity", id_worst <= IDENTITY_TOL, id_worst, IDENTITY_TOL, wit if id_worst > IDENTITY_TOL else None)
    add("a_two_routes", a_worst <= IDENTITY_TOL, a_worst, IDENTITY_TOL, wit if a_worst > IDENTITY_TOL else None)

    # directional zero -B/A: on the circle at torus points, pushed out when shrunk
    dzs = zs[:DIRECTIONAL_SAMPLES]
    dev_worst, margin, wit_dev, wit_exp = 0.0, np.inf, None, None
    for u in range(n):
        A, B, _, _ = decompose_batch(g, beta, dzs, u, cap)
        dev = np.abs(np.abs(-B / A) - 1)
        j = int(np.argmax(dev))
        if dev[j] > dev_worst:
            dev_worst = dev[j]
            if dev_worst > DIRECTIONAL_TOL:
                wit_dev = wit_dev or {"vertex": u, "activities": witness(dzs[j])}
        A, B, _, _ = decompose_batch(g, beta, (1 - EXPULSION_EPS) * dzs, u, cap)
        m = np.abs(-B / A) - 1
        j = int(np.argmin(m))
        if m[j] < margin:
            margin = m[j]
            if margin <= 0:
                wit_exp = wit_exp or {"vertex": u, "activities": witness((1 - EXPULSION_EPS) * dzs[j])}
    if n:
        add("directional_zero_modulus", dev_worst <= DIRECTIONAL_TOL, dev_worst, DIRECTIONAL_TOL, wit_dev)
    if n >= 2:
        add("directional_zero_expulsion", margin > 0, margin, 0.0, wit_exp)
    elif n == 1:
        add("directional_zero_expulsion", True, margin, 0.0,
            note="vacuous: no off-pivot activities to shrink, -B/A = -1 exactly")

    # spin-flip symmetry at all-ones activities
    ones = np.ones(n)
    r = evaluate(g, ActivityAssignment(beta, ones), cap)
    mdev = abs(r.M - n / 2) if r.M is not None else np.inf
    add("symmetry_magnetization", mdev <= IDENTITY_TOL, mdev, IDENTITY_TOL)
    c = plus_spectrum(g, beta, ones, cap).coeffs
    pal = float(np.abs(c - c[::-1]).max() / np.abs(c).max())
    add("symmetry_palindrome", pal <= IDENTITY_TOL, pal, IDENTITY_TOL)

    # perturbation probe at random and targeted torus points
    if n:
        probe_bad, taylor_bad = None, None
        worst_pert, worst_spread = 0.0, 0.0
        for j in range(PROBE_POINTS):
            z0 = torus_point(seed, _PROBE_BASE + j, n)
            for u in range(n):
                for kind, zp in (("random", z0), ("targeted", targeted_point(g, beta, z0, u))):
                    spec = plus_spectrum(g, beta, zp, cap)
                    for e in eps:
                        rec = proof_probe(g, beta, zp, u, e, cap, spectrum=spec)
                        worst_pert = max(worst_pert, abs(rec.perturbed_Z) / rec.scale)
                        if not rec.passed and probe_bad is None:
                            probe_bad = {"vertex": u, "epsilon": e, "kind": kind,
                                         "failed": [k for k, v in rec.checks.items() if not v],
                                         "activities": witness(zp)}
                    if len(eps) >= 3:
                        t = taylor_check(g, beta, zp, u, eps, cap)
                        for rr in (t.r1, t.r2):
                            if rr.max() > 0:
                                worst_spread = max(worst_spread, rr.max() / rr.min())
                        if not t.passed and taylor_bad is None:
                            taylor_bad = {"vertex": u, "kind": kind, "r1": t.r1, "r2": t.r2,
                                          "activities": witness(zp)}
        add("perturbation_probe", probe_bad is None, worst_pert, 1e-9, probe_bad)
        if len(eps) >= 3:
            add("taylor_ratios", taylor_bad is None, worst_spread, 10.0, taylor_bad)
    return out


def _run_task(args):
    name, g, beta, seed, samples, eps, cap = args
    return [asdict(r) for r in check_graph(name, g, beta, seed, samples, eps, cap)]


def run_suite(
    corpus: str = "default",
    betas=DEFAULT_BETAS,
    seed: int = 0,
    samples: int = 1000,
    eps=DEFAULT_EPS,
    cap: int = ising.DEFAULT_CAP,
    jobs: int = 1,
    timing: bool = False,
) -> dict:
    for b in betas:
        require_ferromagnetic(b)
    t0 = time.perf_counter()
    graphs, dropped = parse_corpus(corpus)
    tasks = [(name, g, float(b), seed, samples, tuple(eps), cap) for name, g in graphs for b in betas]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    checks = [r for rs in results for r in rs]
    failed = sum(not r["passed"] for r in checks)
    return {
        "corpus": corpus,
        "betas": [float(b) for b in betas],
        "seed": seed,
        "samples": samples,
        "eps": [float(e) for e in eps],
        "graphs": [{"name": name, "graph_id": g.graph_id, "n": g.n, "m": g.m} for name, g in graphs],
        "filtered_disconnected": dropped,
        "checks": checks,
        "total": len(checks),
        "failed": failed,
        "passed": failed == 0,
        "elapsed_seconds": time.perf_counter() - t0 if timing else None,
    }
