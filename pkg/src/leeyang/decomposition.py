"""Splitting Z along one vertex: ``Z = A * z_u + B``.

With ``G - u`` the graph without u, ``A = beta**deg(u) * Z(G - u, z')`` and
``B = Z(G - u, z'')``, where z' divides the activities of u's neighbours by
beta and z'' multiplies them by beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ising
from .graph import Graph, delete_vertex
from .ising import ActivityAssignment, require_ferromagnetic
from .sampling import torus_angles_batch


@dataclass(frozen=True)
class Decomposition:
    u: int
    A: complex
    B: complex
    z_prime: np.ndarray
    z_doubleprime: np.ndarray
    mass_A: float = 0.0

    def value(self, z_u: complex) -> complex:
        return self.A * z_u + self.B


@dataclass
class ANonzeroReport:
    beta: float
    samples: int
    seed: int
    min_abs_A: float
    argmin_vertex: int
    argmin_angles: np.ndarray
    per_vertex_min: list[float]
    per_vertex_mass: list[float]
    passed: bool


def rescaled_activities(g: Graph, z, u: int, direction: str, beta: float) -> np.ndarray:
    """Activities on ``G - u`` (compact labels) with u's neighbours rescaled.

    ``direction='prime'`` divides neighbours by beta, ``'doubleprime'``
    multiplies them by beta. Works row-wise on 2-D input.
    """
    z = np.asarray(z, dtype=complex)
    if direction == "prime":
        factor = 1.0 / beta
    elif direction == "doubleprime":
        factor = beta
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out = z[..., :].copy()
    nbrs = list(g.neighbors(u))
    out[..., nbrs] *= factor
    return np.delete(out, u, axis=-1)


def decompose(g: Graph, a: ActivityAssignment, u: int, cap: int = ising.DEFAULT_CAP) -> Decomposition:
    h, _ = delete_vertex(g, u)
    zp = rescaled_activities(g, a.z, u, "prime", a.beta)
    zpp = rescaled_activities(g, a.z, u, "doubleprime", a.beta)
    ep = ising._enumerate(h, a.beta, zp, cap)
    epp = ising._enumerate(h, a.beta, zpp, cap)
    scale = a.beta ** g.degree(u)
    return Decomposition(u, scale * ep.Z, epp.Z, zp, zpp, scale * ep.mass)


def A_by_difference(g: Graph, a: ActivityAssignment, u: int, cap: int = ising.DEFAULT_CAP) -> complex:
    """Second route to A: ``Z(z_u = 1) - Z(z_u = 0)`` on the full graph."""
    z1 = np.array(a.z, dtype=complex)
    z1[u] = 1.0
    z0 = z1.copy()
    z0[u] = 0.0
    return ising._enumerate(g, a.beta, z1, cap).Z - ising._enumerate(g, a.beta, z0, cap).Z


def decompose_batch(g: Graph, beta: float, zs, u: int, cap: int = ising.DEFAULT_CAP):
    """Row-wise ``(A, B, mass_A, mass_B)`` for a batch of activity vectors."""
    zs = np.atleast_2d(np.asarray(zs, dtype=complex))
    h, _ = delete_vertex(g, u)
    ep = ising.enumerate_batch(h, beta, rescaled_activities(g, zs, u, "prime", beta), cap)
    epp = ising.enumerate_batch(h, beta, rescaled_activities(g, zs, u, "doubleprime", beta), cap)
    scale = beta ** g.degree(u)
    return scale * ep.Z, epp.Z, scale * ep.mass, epp.mass


def A_batch(g: Graph, beta: float, zs, u: int, cap: int = ising.DEFAULT_CAP):
    """Row-wise ``(A, mass_A)`` only; half the work of :func:`decompose_batch`."""
    zs = np.atleast_2d(np.asarray(zs, dtype=complex))
    h, _ = delete_vertex(g, u)
    ep = ising.enumerate_batch(h, beta, rescaled_activities(g, zs, u, "prime", beta), cap)
    scale = beta ** g.degree(u)
    return scale * ep.Z, scale * ep.mass


def verify_A_nonzero(
    g: Graph, beta: float, samples: int = 1000, seed: int = 0, cap: int = ising.DEFAULT_CAP
) -> ANonzeroReport:
    """Scan |A| over random torus points for every pivot vertex.

    Reports the observed minimum and where it occurred. Positivity is judged
    against the rounding scale ``ZERO_REL * mass``; this is evidence, not a
    certified global minimum.
    """
    require_ferromagnetic(beta)
    if not g.is_connected():
        raise ValueError("verify_A_nonzero needs a connected graph")
    angles = torus_angles_batch(seed, 0, samples, g.n)
    zs = np.exp(1j * angles)
    best = (np.inf, -1, -1)
    per_min, per_mass = [], []
    ok = True
    for u in range(g.n):
        A, mA = A_batch(g, beta, zs, u, cap)
        absA = np.abs(A)
        i = int(np.argmin(absA))
        per_min.append(float(absA[i]))
        per_mass.append(float(mA[i]))
        ok &= bool(np.all(absA > ising.ZERO_REL * mA))
        if absA[i] < best[0]:
            best = (float(absA[i]), u, i)
    return ANonzeroReport(
        beta, samples, seed, best[0], best[1], angles[best[2]] if samples else np.empty(0),
        per_min, per_mass, ok and samples > 0,
    )
