"""Torus scans: minimum moduli of Z, D_G Z and A over random unit-modulus points."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import ising
from .decomposition import A_batch
from .graph import Graph
from .ising import require_ferromagnetic
from .report import witness
from .sampling import torus_angles_batch


@dataclass
class ScanReport:
    graph_id: str
    n: int
    beta: float
    samples: int
    seed: int
    min_abs_z: float
    argmin_z_angles: np.ndarray
    min_abs_dz: float
    argmin_dz_angles: np.ndarray
    min_abs_a: list[float]
    argmin_a_angles: list[np.ndarray]
    near_zero_z_count: int
    tolerances: dict
    checks: dict
    witnesses: dict = field(default_factory=dict)
    elapsed_seconds: float | None = None
    rows: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "graph_id", "n", "beta", "samples", "seed", "min_abs_z", "argmin_z_angles",
            "min_abs_dz", "argmin_dz_angles", "min_abs_a", "argmin_a_angles",
            "near_zero_z_count", "elapsed_seconds", "tolerances", "checks", "witnesses")}
        d["passed"] = self.passed
        return d


def _chunk(g: Graph, beta: float, seed: int, start: int, count: int, cap: int):
    angles = torus_angles_batch(seed, start, count, g.n)
    zs = np.exp(1j * angles)
    e = ising.enumerate_batch(g, beta, zs, cap)
    A = np.empty((g.n, count))
    mA = np.empty((g.n, count))
    for u in range(g.n):
        a, ma = A_batch(g, beta, zs, u, cap)
        A[u] = np.abs(a)
        mA[u] = ma
    return angles, np.abs(e.Z), np.abs(e.DZ), e.mass, A, mA


def torus_scan(
    g: Graph,
    beta: float,
    samples: int = 1000,
    seed: int = 0,
    cap: int = ising.DEFAULT_CAP,
    jobs: int = 1,
    zero_rel: float = ising.ZERO_REL,
    timing: bool = False,
) -> ScanReport:
    """Scan ``samples`` torus points; |D_G Z| and every |A| must stay above the
    rounding scale ``zero_rel * mass``. |Z| itself may approach zero."""
    require_ferromagnetic(beta)
    if not g.is_connected():
        raise ValueError("torus scan needs a connected graph")
    if samples < 1:
        raise ValueError("samples must be positive")
    t0 = time.perf_counter()
    bounds = np.linspace(0, samples, max(1, jobs) * 4 + 1).astype(int) if jobs > 1 else np.array([0, samples])
    tasks = [(g, beta, seed, int(lo), int(hi - lo), cap) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_chunk, *zip(*tasks)))
    else:
        parts = [_chunk(*t) for t in tasks]
    angles, absZ, absDZ, mass = (np.concatenate([p[i] for p in parts]) for i in range(4))
    absA, mA = (np.concatenate([p[i] for p in parts], axis=1) for i in (4, 5))

    iz = int(np.argmin(absZ))
    idz = int(np.argmin(absDZ))
    a_min, a_arg = [], []
    for u in range(g.n):
        i = int(np.argmin(absA[u]))
        a_min.append(float(absA[u, i]))
        a_arg.append(angles[i])
    dz_ok = absDZ > zero_rel * mass
    a_ok = absA > zero_rel * mA
    checks = {"dz_nonzero": bool(dz_ok.all()), "a_nonzero": bool(a_ok.all())}
    wit = {}
    if not checks["dz_nonzero"]:
        i = int(np.flatnonzero(~dz_ok)[0])
        wit["dz_nonzero"] = {"sample": i, "activities": witness(np.exp(1j * angles[i]))}
    if not checks["a_nonzero"]:
        u, i = (int(x[0]) for x in np.nonzero(~a_ok))
        wit["a_nonzero"] = {"sample": i, "vertex": u, "activities": witness(np.exp(1j * angles[i]))}
    rows = [
        (i, absZ[i], absDZ[i], float(absA[:, i].min()) if g.n else float("nan"), *angles[i])
        for i in range(samples)
    ]
    return ScanReport(
        graph_id=g.graph_id,
        n=g.n,
        beta=float(beta),
        samples=samples,
        seed=seed,
        min_abs_z=float(absZ[iz]),
        argmin_z_angles=angles[iz],
        min_abs_dz=float(absDZ[idz]),
        argmin_dz_angles=angles[idz],
        min_abs_a=a_min,
        argmin_a_angles=a_arg,
        near_zero_z_count=int((absZ < ising.NEAR_ZERO).sum()),
        tolerances={"zero_rel": zero_rel, "near_zero": ising.NEAR_ZERO},
        checks=checks,
        witnesses=wit,
        elapsed_seconds=time.perf_counter() - t0 if timing else None,
        rows=rows,
    )


def grid_scan(g: Graph, beta: float, points: int = 500):
    """Dense tensor grid of angles ``2 pi k / points``; only for tiny n.

    Returns ``(min |Z|, argmin angles, min |D_G Z|, argmin angles)``.
    """
    if points**g.n > 5_000_000:
        raise ValueError("grid too large")
    theta = 2 * np.pi * np.arange(points) / points
    mesh = np.stack(np.meshgrid(*([theta] * g.n), indexing="ij"), axis=-1).reshape(-1, g.n)
    e = ising.enumerate_batch(g, beta, np.exp(1j * mesh))
    Z, DZ = e.Z, e.DZ
    iz, idz = int(np.argmin(np.abs(Z))), int(np.argmin(np.abs(DZ)))
    return float(abs(Z[iz])), mesh[iz], float(abs(DZ[idz])), mesh[idz]
