"""Univariate polynomials in the fugacity scale, Aberth-Ehrlich root finding,
unit-circle certification and the Gauss-Lucas derivative check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

ROOT_TOL = 1e-8
UNIT_TOL = 1e-6
GAUSS_LUCAS_SLACK = 1e-8
CLUSTER_DIST = 1e-4

# fraction of a full turn used to rotate the starting points off any symmetry axis
_START_ROTATION = (math.sqrt(5.0) - 1.0) / 2.0
_EPS = np.finfo(float).eps


class RootFindingError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial with coefficients in increasing degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).copy())

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def abs_sum(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def __call__(self, t):
        return horner(self.coeffs, t)


@dataclass(frozen=True)
class RestrictionPolynomial(Polynomial):
    """``t -> Z(G, beta, t * z0)``; coefficient k sums configurations with k plus-spins."""

    origin: dict = field(default_factory=dict)
    coeffs_lo: np.ndarray | None = None

    def moment(self, order: int = 1) -> complex:
        """``sum k**order * c_k`` evaluated exactly from the double-double
        coefficients, rounded once. Order 0 gives f(1), order 1 gives f'(1)."""
        lo = self.coeffs_lo if self.coeffs_lo is not None else np.zeros_like(self.coeffs)
        re = im = Fraction(0)
        for k, (h, l) in enumerate(zip(self.coeffs, lo)):
            w = k**order
            re += w * (Fraction(float(h.real)) + Fraction(float(l.real)))
            im += w * (Fraction(float(h.imag)) + Fraction(float(l.imag)))
        return complex(float(re), float(im))


@dataclass
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    iterations: int
    converged: bool
    clusters: list[tuple[int, int]] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0


@dataclass
class UnitCircleReport:
    max_deviation: float
    deviations: np.ndarray
    tol: float
    passed: bool


@dataclass
class GaussLucasReport:
    derivative_roots: np.ndarray
    max_modulus: float
    f_at_one: complex
    fprime_at_one: complex
    scale: float
    implication_holds: bool
    tol: float
    passed: bool


def horner(coeffs, t):
    """Evaluate ``sum c_k t^k``; uses the reversed polynomial in 1/t where |t| > 1."""
    c = np.asarray(coeffs, dtype=complex)
    t = np.asarray(t, dtype=complex)
    n = len(c) - 1
    out = np.empty(t.shape, dtype=complex)
    inner = np.abs(t) <= 1.0
    ti = t[inner]
    acc = np.zeros(ti.shape, dtype=complex)
    for ck in c[::-1]:
        acc = acc * ti + ck
    out[inner] = acc
    to = t[~inner]
    if to.size:
        s = 1.0 / to
        acc = np.zeros(to.shape, dtype=complex)
        for ck in c:
            acc = acc * s + ck
        out[~inner] = acc * to**n
    return out[()] if out.ndim == 0 else out


def _log_derivative(c: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``p'(t)/p(t)`` and ``|p(t)|`` next to its rounding-error bound.

    The second array is True where |p(t)| is within the evaluation noise floor.
    """
    n = len(c) - 1
    ratio = np.empty(t.shape, dtype=complex)
    at_noise = np.empty(t.shape, dtype=bool)
    absc = np.abs(c)
    inner = np.abs(t) <= 1.0
    for mask, reverse in ((inner, False), (~inner, True)):
        x = t[mask]
        if not x.size:
            continue
        if reverse:
            x = 1.0 / x
            cc, ac = c, absc
        else:
            cc, ac = c[::-1], absc[::-1]
        p = np.zeros(x.shape, dtype=complex)
        dp = np.zeros(x.shape, dtype=complex)
        bound = np.zeros(x.shape)
        ax = np.abs(x)
        for ck, ak in zip(cc, ac):
            dp = dp * x + p
            p = p * x + ck
            bound = bound * ax + ak
        with np.errstate(divide="ignore", invalid="ignore"):
            q = dp / p
            if reverse:
                # p(t) = t^n q(1/t)  =>  p'/p = (n - s q'(s)/q(s)) / t with s = 1/t
                q = (n - x * q) * x
        ratio[mask] = q
        at_noise[mask] = np.abs(p) <= 4.0 * n * _EPS * bound
    return ratio, at_noise


def find_roots(p: Polynomial, tol: float = ROOT_TOL, max_iter: int = 200) -> RootSet:
    """All roots of ``p`` by simultaneous Aberth-Ehrlich iteration.

    Starting points sit on a circle of radius ``max(1, sum|c_k| / |c_n|)``,
    rotated by an irrational fraction of a turn. A root stops moving once its
    correction is below ``tol * (1 + |root|)`` or ``|p(root)|`` is at the
    rounding-noise floor. Non-convergence is reported, never raised.
    """
    c = np.asarray(p.coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1:
        raise RootFindingError("degree must be at least 1")
    if abs(c[-1]) <= 1e-300:
        raise RootFindingError("leading coefficient is zero")
    r0 = max(1.0, float(np.abs(c).sum() / abs(c[-1])))
    z = r0 * np.exp(2j * np.pi * (np.arange(n) + _START_ROTATION) / n)
    active = np.ones(n, dtype=bool)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        ratio, at_noise = _log_derivative(c, z[idx])
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = 1.0
        repulsion = (1.0 / diff).sum(axis=1) - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            step = 1.0 / (ratio - repulsion)
        step[~np.isfinite(step) | at_noise] = 0.0
        z[idx] -= step
        done = (np.abs(step) <= tol * (1.0 + np.abs(z[idx]))) | at_noise
        active[idx[done]] = False
        if not active.any():
            break
    converged = not active.any()
    residuals = np.abs(horner(c, z))
    return RootSet(z, residuals, iterations, converged, _clusters(z))


def _clusters(z: np.ndarray) -> list[tuple[int, int]]:
    out = []
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if abs(z[i] - z[j]) < CLUSTER_DIST:
                out.append((i, j))
    return out


def certify_unit_modulus(r: RootSet, tol: float = UNIT_TOL) -> UnitCircleReport:
    if not r.converged:
        raise PreconditionError("root set did not converge")
    dev = np.abs(np.abs(r.roots) - 1.0)
    worst = float(dev.max()) if dev.size else 0.0
    return UnitCircleReport(worst, dev, tol, worst <= tol)


def derivative(p: Polynomial) -> Polynomial:
    c = np.asarray(p.coeffs, dtype=complex)
    if len(c) < 2:
        raise RootFindingError("degree must be at least 1")
    return Polynomial(c[1:] * np.arange(1, len(c)))


def gauss_lucas_check(
    p: Polynomial,
    tol: float = GAUSS_LUCAS_SLACK,
    unit_tol: float = UNIT_TOL,
    max_iter: int = 200,
) -> GaussLucasReport:
    """Roots of f' must lie in the closed unit disk once f's roots are on the circle.

    Also checks the boundary case at t = 1: a derivative that vanishes there
    forces f to vanish there too.
    """
    roots = find_roots(p, max_iter=max_iter)
    if not roots.converged:
        raise PreconditionError("roots of f did not converge")
    cert = certify_unit_modulus(roots, unit_tol)
    if not cert.passed:
        raise PreconditionError(
            f"roots of f are off the unit circle (max deviation {cert.max_deviation:.3g})"
        )
    dp = derivative(p)
    scale = p.abs_sum
    f1 = complex(p(1.0))
    fp1 = complex(dp(1.0))
    if dp.degree >= 1:
        droots = find_roots(dp, max_iter=max_iter)
        if not droots.converged:
            raise RootFindingError("roots of f' did not converge")
        dz = droots.roots
    else:
        dz = np.empty(0, dtype=complex)
    max_mod = float(np.abs(dz).max()) if dz.size else 0.0
    implication = abs(fp1) > tol * scale or abs(f1) <= tol * scale
    return GaussLucasReport(
        dz, max_mod, f1, fp1, scale, implication, tol, max_mod <= 1.0 + tol and implication
    )


def circle_scan_minima(p: Polynomial, points: int = 20000, refine: int = 60) -> np.ndarray:
    """Slow oracle: local minima of |p(e^{i theta})| on a dense grid, refined by
    golden-section search. Returns the refined angles in [0, 2 pi)."""
    theta = 2 * np.pi * np.arange(points) / points
    vals = np.abs(horner(p.coeffs, np.exp(1j * theta)))
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    idx = np.flatnonzero((vals <= left) & (vals <= right))
    h = 2 * np.pi / points
    out = []
    g = (math.sqrt(5.0) - 1.0) / 2.0
    for i in idx:
        a, b = theta[i] - h, theta[i] + h
        f = lambda x: abs(complex(horner(p.coeffs, np.exp(1j * x))))
        x1, x2 = b - g * (b - a), a + g * (b - a)
        f1, f2 = f(x1), f(x2)
        for _ in range(refine):
            if f1 < f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - g * (b - a)
                f1 = f(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + g * (b - a)
                f2 = f(x2)
        out.append(((a + b) / 2) % (2 * np.pi))
    return np.array(sorted(out))
