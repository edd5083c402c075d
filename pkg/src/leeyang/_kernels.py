"""Compiled enumeration kernels.

Configurations are visited in reflected Gray-code order so that consecutive
plus-sets differ in one vertex. The plus-product is kept in factored form
(count of zero activities, product of the nonzero ones) so zero activities
never hit a division, and the running state is rebuilt from scratch every
``RESYNC`` steps to cap the drift from repeated divides.

Sums are accumulated in double-double form: each accumulator row holds
``[re_hi, re_lo, im_hi, im_lo]`` updated with an error-free two-sum, so the
per-plus-count spectrum and the direct Z / D_G Z sums are exact sums of the
computed weights up to a final rounding.
"""

import numpy as np
from numba import njit

RESYNC = 1 << 16
ZERO_ACTIVITY = 1e-300
_SPLITTER = 134217729.0  # 2**27 + 1


@njit(cache=True, nogil=True, inline="always")
def _acc(acc, i, j, x):
    hi = acc[i, j]
    s = hi + x
    bp = s - hi
    acc[i, j + 1] += (hi - (s - bp)) + (x - bp)
    acc[i, j] = s


@njit(cache=True, nogil=True, inline="always")
def _acc_scaled(acc, i, j, k, x):
    # k * x exactly as k * x_hi + k * x_lo; both products fit in 53 bits for k < 2**26
    c = _SPLITTER * x
    xh = c - (c - x)
    _acc(acc, i, j, k * xh)
    _acc(acc, i, j, k * (x - xh))


@njit(cache=True, nogil=True)
def _state(mask, n, indptr, indices, z, is_zero):
    d2 = 0
    k = 0
    zeros = 0
    prod = 1.0 + 0.0j
    for v in range(n):
        bv = (mask >> v) & 1
        for p in range(indptr[v], indptr[v + 1]):
            if ((mask >> indices[p]) & 1) != bv:
                d2 += 1
        if bv:
            k += 1
            if is_zero[v]:
                zeros += 1
            else:
                prod *= z[v]
    return d2 // 2, k, zeros, prod


@njit(cache=True, nogil=True, inline="always")
def _add_weight(w, k, spec, sums):
    _acc(spec, k, 0, w.real)
    _acc(spec, k, 2, w.imag)
    _acc(sums, 0, 0, w.real)
    _acc(sums, 0, 2, w.imag)
    _acc_scaled(sums, 1, 0, float(k), w.real)
    _acc_scaled(sums, 1, 2, float(k), w.imag)


@njit(cache=True, nogil=True)
def enumerate_segment(n, indptr, indices, beta_pow, z, start, stop, spec, sums):
    """Accumulate Gray-code positions ``start..stop-1``.

    ``spec`` has one double-double row per plus count k; ``sums`` row 0
    collects Z and row 1 the k-weighted sum D_G Z. Returns the sum of
    |weight| over the segment.
    """
    is_zero = np.empty(n, dtype=np.bool_)
    for v in range(n):
        is_zero[v] = abs(z[v]) < ZERO_ACTIVITY
    mass = 0.0
    i = start
    while i < stop:
        mask = i ^ (i >> 1)
        d, k, zeros, prod = _state(mask, n, indptr, indices, z, is_zero)
        if zeros == 0:
            w = beta_pow[d] * prod
            _add_weight(w, k, spec, sums)
            mass += abs(w)
        end = min(stop, i + RESYNC)
        for j in range(i + 1, end):
            v = 0
            while not (j >> v) & 1:
                v += 1
            bv = (mask >> v) & 1
            for p in range(indptr[v], indptr[v + 1]):
                if ((mask >> indices[p]) & 1) == bv:
                    d += 1
                else:
                    d -= 1
            mask ^= 1 << v
            if bv == 0:
                k += 1
                if is_zero[v]:
                    zeros += 1
                else:
                    prod *= z[v]
            else:
                k -= 1
                if is_zero[v]:
                    zeros -= 1
                else:
                    prod /= z[v]
            if zeros == 0:
                w = beta_pow[d] * prod
                _add_weight(w, k, spec, sums)
                mass += abs(w)
        i = end
    return mass


@njit(cache=True, nogil=True)
def enumerate_batch(n, indptr, indices, beta_pow, zs, spec, sums, mass):
    """Full enumeration for each row of ``zs``; outputs are filled row-wise."""
    total = 1 << n
    for r in range(zs.shape[0]):
        mass[r] = enumerate_segment(n, indptr, indices, beta_pow, zs[r], 0, total, spec[r], sums[r])
