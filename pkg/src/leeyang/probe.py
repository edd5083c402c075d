"""Replays the perturbation construction behind the torus non-vanishing of D_G Z.

At a torus point z0 and pivot u, shrink every activity by ``1 - eps`` and
solve for the shift ``tau`` of the u-coordinate that makes Z vanish. Since Z
is affine in ``z_u`` with slope A, ``tau = -mu / A((1 - eps) z0)`` where
``mu = f(1 - eps)``. Lee-Yang then forces the resulting u-coordinate out of
the open unit disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ising
from .decomposition import decompose
from .graph import Graph, delete_vertex
from .ising import ActivityAssignment, plus_spectrum, require_ferromagnetic

PERTURBED_TOL = 1e-9
LINEAR_TOL = 1e-10
MODULUS_SLACK = 1e-9
RATIO_SPREAD = 10.0
EPS_MAX = 0.1
UNIT_TOL = 1e-12


class LemmaViolation(ArithmeticError):
    """|A| numerically zero at a point where it should be bounded away from zero."""


@dataclass(frozen=True)
class ProbeRecord:
    u: int
    epsilon: float
    mu: complex
    mu_restriction: complex
    nu: complex
    A0: complex
    tau: complex
    perturbed_Z: complex
    linear_Z: complex
    u_coordinate_modulus: float
    perturbed_mass: float

    @property
    def tau_over_eps(self) -> float:
        return abs(self.tau) / self.epsilon

    @property
    def scale(self) -> float:
        return 1.0 + abs(self.A0)

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "perturbed_z_vanishes": abs(self.perturbed_Z) <= PERTURBED_TOL * self.scale,
            "linear_z_vanishes": abs(self.linear_Z) <= LINEAR_TOL * self.scale,
            "two_routes_agree": abs(self.perturbed_Z - self.linear_Z) <= LINEAR_TOL * self.scale,
            "u_coordinate_outside_disk": self.u_coordinate_modulus >= 1.0 - MODULUS_SLACK,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


@dataclass
class TaylorReport:
    u: int
    eps: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    r1_direct: np.ndarray
    r1_limit: float
    r2_limit: float

    @staticmethod
    def _bounded(r: np.ndarray) -> bool:
        top = float(r.max())
        return top == 0.0 or top <= RATIO_SPREAD * float(r.min())

    @property
    def r1_bounded(self) -> bool:
        return self._bounded(self.r1)

    @property
    def r2_bounded(self) -> bool:
        return self._bounded(self.r2)

    @property
    def passed(self) -> bool:
        return self.r1_bounded and self.r2_bounded


def directional_zero(g: Graph, beta: float, z, u: int, cap: int = ising.DEFAULT_CAP) -> complex:
    """The value of ``z_u`` where Z vanishes with the other activities fixed: ``-B / A``."""
    d = decompose(g, ActivityAssignment(beta, z), u, cap)
    if abs(d.A) <= ising.ZERO_REL * d.mass_A:
        raise LemmaViolation(f"|A| = {abs(d.A):.3e} at pivot {u}; the directional zero is undefined")
    return -d.B / d.A


def targeted_point(g: Graph, beta: float, z0, u: int, shift: float = 1e-4) -> np.ndarray:
    """Torus point next to a zero of Z: z_u moved onto the directional zero
    (projected to the circle) and then rotated by ``shift`` radians."""
    w = directional_zero(g, beta, z0, u)
    z = np.array(z0, dtype=complex)
    z[u] = w / abs(w) * np.exp(1j * shift)
    return z


def _validate(g: Graph, beta: float, z0: np.ndarray, u: int, eps) -> None:
    require_ferromagnetic(beta)
    if not g.is_connected():
        raise ValueError("probe needs a connected graph")
    if len(z0) != g.n:
        raise ValueError("z0 length does not match the graph")
    if not 0 <= u < g.n:
        raise ValueError(f"vertex {u} out of range")
    if np.any(np.abs(np.abs(z0) - 1.0) > UNIT_TOL):
        raise ValueError("z0 must lie on the unit torus")
    for e in np.atleast_1d(eps):
        if not 0.0 < e <= EPS_MAX:
            raise ValueError(f"epsilon must lie in (0, {EPS_MAX}], got {e}")


def proof_probe(
    g: Graph, beta: float, z0, u: int, epsilon: float, cap: int = ising.DEFAULT_CAP, spectrum=None
) -> ProbeRecord:
    z0 = np.asarray(z0, dtype=complex)
    _validate(g, beta, z0, u, epsilon)
    s = 1.0 - epsilon
    mu = ising._enumerate(g, beta, s * z0, cap).Z
    if spectrum is None:
        spectrum = plus_spectrum(g, beta, z0, cap)
    mu_restriction = complex(spectrum(s))
    A0 = decompose(g, ActivityAssignment(beta, z0), u, cap).A
    A_eps = decompose(g, ActivityAssignment(beta, s * z0), u, cap).A
    nu = A_eps - A0
    tau = -mu / (A0 + nu)
    zp = s * z0
    zp[u] += tau
    pert = ising._enumerate(g, beta, zp, cap)
    return ProbeRecord(
        u=u,
        epsilon=float(epsilon),
        mu=mu,
        mu_restriction=mu_restriction,
        nu=nu,
        A0=A0,
        tau=tau,
        perturbed_Z=pert.Z,
        linear_Z=mu + (A0 + nu) * tau,
        u_coordinate_modulus=float(abs(zp[u])),
        perturbed_mass=pert.mass,
    )


def taylor_remainder(coeffs, eps: float) -> complex:
    """``f(1 - eps) - f(1) + eps f'(1)`` summed term by term without cancellation.

    For each degree k the bracket ``(1 - eps)**k - 1 + k eps`` is expanded as
    ``sum_{j >= 2} C(k, j) (-eps)**j``.
    """
    total = 0j
    for k in range(2, len(coeffs)):
        bracket = math.fsum(math.comb(k, j) * (-eps) ** j for j in range(2, k + 1))
        total += coeffs[k] * bracket
    return total


def taylor_check(g: Graph, beta: float, z0, u: int, eps_grid, cap: int = ising.DEFAULT_CAP) -> TaylorReport:
    """Ratios ``r1 = |f(1-eps) - f(1) + eps f'(1)| / eps**2`` and ``r2 = |nu| / eps``.

    Both should stay bounded as eps shrinks; the report judges that by the
    spread max/min over the grid.
    """
    eps = np.sort(np.asarray(eps_grid, dtype=float))[::-1]
    if len(eps) < 3:
        raise ValueError("eps grid needs at least 3 points")
    z0 = np.asarray(z0, dtype=complex)
    _validate(g, beta, z0, u, eps)
    f = plus_spectrum(g, beta, z0, cap)
    c = f.coeffs
    k = np.arange(len(c))
    f1 = c.sum()
    fp1 = (k * c).sum()
    A0 = decompose(g, ActivityAssignment(beta, z0), u, cap).A
    r1, r2, r1d = [], [], []
    for e in eps:
        r1.append(abs(taylor_remainder(c, e)) / e**2)
        mu = ising._enumerate(g, beta, (1.0 - e) * z0, cap).Z
        r1d.append(abs(mu - f1 + e * fp1) / e**2)
        A_eps = decompose(g, ActivityAssignment(beta, (1.0 - e) * z0), u, cap).A
        r2.append(abs(A_eps - A0) / e)
    # limits as eps -> 0: |f''(1)| / 2 and |d/ds A(s z0)| at s = 1
    h, _ = _deleted_spectrum(g, beta, z0, u, cap)
    kh = np.arange(len(h))
    return TaylorReport(
        u=u,
        eps=eps,
        r1=np.array(r1),
        r2=np.array(r2),
        r1_direct=np.array(r1d),
        r1_limit=float(abs((k * (k - 1) * c).sum()) / 2),
        r2_limit=float(abs((kh * h).sum())),
    )


def _deleted_spectrum(g: Graph, beta: float, z0, u: int, cap: int):
    """Coefficients of ``s -> A(s z0)`` (A is homogeneous in the rescaled activities)."""
    d = decompose(g, ActivityAssignment(beta, z0), u, cap)
    h, _ = delete_vertex(g, u)
    spec = ising._enumerate(h, beta, d.z_prime, cap).spec
    return beta ** g.degree(u) * spec, d
