"""Exact Ising partition function, magnetization operator and plus-count spectrum.

The weight of a spin configuration with plus-set S is
``beta ** d(S) * prod(z[v] for v in S)``, where ``d(S)`` counts edges with
exactly one endpoint in S. Everything here enumerates all ``2**n`` sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .graph import Graph
from .roots import RestrictionPolynomial

DEFAULT_CAP = 28
NAIVE_CAP = 20
ZERO_REL = 1e-12
NEAR_ZERO = 1e-9


class CapExceededError(ValueError):
    pass


class ZeroPartitionError(ArithmeticError):
    """Z vanishes (relative to the total configuration mass); M is undefined."""

    def __init__(self, Z: complex, mass: float):
        self.Z = Z
        self.mass = mass
        super().__init__(f"|Z| = {abs(Z):.3e} <= {ZERO_REL:g} * mass ({mass:.3e}); refusing DZ / Z")


class BetaRangeError(ValueError):
    pass


@dataclass(frozen=True)
class ActivityAssignment:
    beta: float
    z: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=complex)).copy()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "beta", float(self.beta))
        if not self.beta > 0:
            raise BetaRangeError(f"edge activity must be positive, got {self.beta}")

    @property
    def ferromagnetic(self) -> bool:
        return 0.0 < self.beta < 1.0


@dataclass(frozen=True)
class EvalResult:
    Z: complex
    DZ: complex
    M: complex | None
    mass: float
    beta_out_of_range: bool = False

    @property
    def near_zero(self) -> bool:
        return abs(self.Z) < NEAR_ZERO


def require_ferromagnetic(beta: float) -> None:
    if not 0.0 < beta < 1.0:
        raise BetaRangeError(f"theorem checks need 0 < beta < 1, got {beta}")


def cut_size(g: Graph, plus_set: int) -> int:
    """Number of edges with exactly one endpoint in the plus set (a bitmask)."""
    if plus_set >> g.n:
        raise ValueError("plus set has bits above n - 1")
    return sum(((plus_set >> i) & 1) != ((plus_set >> j) & 1) for i, j in g.edges)


def _beta_powers(beta: float, m: int) -> np.ndarray:
    return np.power(beta, np.arange(m + 1, dtype=float))


def _check(g: Graph, z: np.ndarray, cap: int) -> None:
    if g.n > cap:
        raise CapExceededError(f"{g.n} vertices exceeds the enumeration cap {cap}")
    if len(z) != g.n:
        raise ValueError(f"activity vector has length {len(z)}, graph has {g.n} vertices")


class Enumeration(NamedTuple):
    """Raw enumeration output; ``spec + spec_lo`` is the plus-count spectrum
    to roughly twice double precision. Batched calls add a leading axis."""

    spec: np.ndarray
    spec_lo: np.ndarray
    Z: complex
    DZ: complex
    mass: float


def _two_sum(a, b):
    s = a + b
    bp = s - a
    return s, (a - (s - bp)) + (b - bp)


def _dd_merge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Add double-double accumulators of shape (..., 4)."""
    out = np.empty_like(a)
    for j in (0, 2):
        hi, err = _two_sum(a[..., j], b[..., j])
        out[..., j] = hi
        out[..., j + 1] = a[..., j + 1] + b[..., j + 1] + err
    return out


def _dd_split(acc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Round double-double accumulators to complex values plus complex residuals."""
    re, re_lo = _two_sum(acc[..., 0], acc[..., 1])
    im, im_lo = _two_sum(acc[..., 2], acc[..., 3])
    return re + 1j * im, re_lo + 1j * im_lo


def _pairwise(parts, merge):
    while len(parts) > 1:
        parts = [merge(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i] for i in range(0, len(parts), 2)]
    return parts[0]


def _enumerate(g: Graph, beta: float, z, cap: int = DEFAULT_CAP, segments: int = 1) -> Enumeration:
    """Enumerate all configurations for one activity vector.

    With ``segments > 1`` the Gray-code sequence is cut into contiguous
    pieces whose accumulators are merged pairwise.
    """
    z = np.ascontiguousarray(z, dtype=complex)
    _check(g, z, cap)
    indptr, indices = g.csr
    bp = _beta_powers(beta, g.m)
    total = 1 << g.n
    segments = max(1, min(int(segments), total))
    bounds = [total * s // segments for s in range(segments + 1)]
    parts = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        spec = np.zeros((g.n + 1, 4))
        sums = np.zeros((2, 4))
        mass = _kernels.enumerate_segment(g.n, indptr, indices, bp, z, lo, hi, spec, sums)
        parts.append((np.vstack([spec, sums]), mass))
    acc, mass = _pairwise(parts, lambda a, b: (_dd_merge(a[0], b[0]), a[1] + b[1]))
    val, res = _dd_split(acc)
    return Enumeration(val[: g.n + 1], res[: g.n + 1], complex(val[g.n + 1]), complex(val[g.n + 2]), float(mass))


def enumerate_batch(g: Graph, beta: float, zs, cap: int = DEFAULT_CAP) -> Enumeration:
    """Full enumeration for every row of ``zs`` (fields gain a leading batch axis)."""
    zs = np.ascontiguousarray(np.atleast_2d(zs), dtype=complex)
    if g.n == 0:
        zs = zs.reshape(len(zs), 0)
    _check(g, zs[0] if len(zs) else np.zeros(g.n), cap)
    k = zs.shape[0]
    spec = np.zeros((k, g.n + 1, 4))
    sums = np.zeros((k, 2, 4))
    mass = np.zeros(k)
    indptr, indices = g.csr
    _kernels.enumerate_batch(g.n, indptr, indices, _beta_powers(beta, g.m), zs, spec, sums, mass)
    sv, sr = _dd_split(spec)
    tv, _ = _dd_split(sums)
    return Enumeration(sv, sr, tv[:, 0], tv[:, 1], mass)


def evaluate(g: Graph, a: ActivityAssignment, cap: int = DEFAULT_CAP, segments: int = 1) -> EvalResult:
    """Z, D_G Z and M in one enumeration. M is None when Z vanishes."""
    e = _enumerate(g, a.beta, a.z, cap, segments)
    Z, DZ, mass = e.Z, e.DZ, e.mass
    M = None if abs(Z) <= ZERO_REL * mass else DZ / Z
    return EvalResult(Z, DZ, M, mass, not a.ferromagnetic)


def evaluate_Z(g: Graph, a: ActivityAssignment, cap: int = DEFAULT_CAP, segments: int = 1) -> complex:
    return _enumerate(g, a.beta, a.z, cap, segments).Z


def evaluate_DZ(g: Graph, a: ActivityAssignment, cap: int = DEFAULT_CAP, segments: int = 1) -> complex:
    """``sum_v z_v dZ/dz_v``, i.e. the plus-count weighted configuration sum."""
    return _enumerate(g, a.beta, a.z, cap, segments).DZ


def magnetization(
    g: Graph, a: ActivityAssignment, cap: int = DEFAULT_CAP, normalized: bool = False
) -> complex:
    """Mean number of plus spins ``DZ / Z`` (divided by n when ``normalized``)."""
    r = evaluate(g, a, cap)
    if r.M is None:
        raise ZeroPartitionError(r.Z, r.mass)
    return r.M / g.n if normalized else r.M


def plus_spectrum(g: Graph, beta: float, z0, cap: int = DEFAULT_CAP) -> RestrictionPolynomial:
    """Coefficients of ``f(t) = Z(G, beta, t * z0)`` by plus count."""
    z0 = np.asarray(z0, dtype=complex)
    e = _enumerate(g, beta, z0, cap)
    return RestrictionPolynomial(
        e.spec, origin={"graph_id": g.graph_id, "beta": float(beta), "z0": z0.copy()}, coeffs_lo=e.spec_lo
    )


def evaluate_naive(g: Graph, a: ActivityAssignment, cap: int = NAIVE_CAP, chunk: int = 1 << 16) -> EvalResult:
    """Reference evaluation: every configuration's weight from scratch, no incremental state."""
    z = np.asarray(a.z, dtype=complex)
    _check(g, z, cap)
    n = g.n
    shifts = np.arange(n, dtype=np.int64)
    ei = np.array([e[0] for e in g.edges], dtype=np.int64)
    ej = np.array([e[1] for e in g.edges], dtype=np.int64)
    Z = 0j
    DZ = 0j
    mass = 0.0
    for lo in range(0, 1 << n, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(bool)
        d = (bits[:, ei] != bits[:, ej]).sum(axis=1)
        w = a.beta**d * np.prod(np.where(bits, z, 1.0 + 0j), axis=1)
        Z += w.sum()
        DZ += (bits.sum(axis=1) * w).sum()
        mass += np.abs(w).sum()
    Z, DZ = complex(Z), complex(DZ)
    M = None if abs(Z) <= ZERO_REL * mass else DZ / Z
    return EvalResult(Z, DZ, M, float(mass), not a.ferromagnetic)
