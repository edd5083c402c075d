"""Counter-based deterministic samplers.

Each sample is drawn from a Philox stream keyed by the seed, with the sample
index and a stream tag in the counter, so any sample can be regenerated on
its own and workers need no shared state. Within a sample, coordinate v is
the v-th draw.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

TORUS = 0
ANNULUS = 1
SHELL = 2


def _rng(seed: int, index: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, int(index), int(stream), 0]))


def torus_angles(seed: int, index: int, n: int) -> np.ndarray:
    a = TWO_PI * _rng(seed, index, TORUS).random(n)
    a[a >= TWO_PI] = 0.0
    return a


def torus_angles_batch(seed: int, start: int, count: int, n: int) -> np.ndarray:
    return np.array([torus_angles(seed, i, n) for i in range(start, start + count)]).reshape(count, n)


def torus_point(seed: int, index: int, n: int) -> np.ndarray:
    return np.exp(1j * torus_angles(seed, index, n))


def annulus_point(seed: int, index: int, n: int, rmin: float = 0.5, rmax: float = 2.0) -> np.ndarray:
    """Complex vector with moduli uniform in [rmin, rmax] and uniform phases."""
    u = _rng(seed, index, ANNULUS).random(2 * n)
    return (rmin + (rmax - rmin) * u[:n]) * np.exp(1j * TWO_PI * u[n:])


def shell_point(seed: int, index: int, n: int, radius: float, special_radius: float) -> np.ndarray:
    """Uniform phases; every modulus is ``radius`` except one random coordinate
    at ``special_radius``."""
    u = _rng(seed, index, SHELL).random(n + 1)
    r = np.full(n, float(radius))
    if n:
        r[min(int(u[n] * n), n - 1)] = special_radius
    return r * np.exp(1j * TWO_PI * u[:n])
