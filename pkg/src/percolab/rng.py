"""Counter-based uniforms keyed by (master seed, trial, site).

Every site owns a uniform U in [0, 1) computed by hashing its index with a
per-trial key, so a configuration at density p is {v : U_v < p} no matter
which thread produced it or in which order sites were visited. Raising p
only adds sites, which gives the monotone coupling used by the critical
probability estimators.

The hash is the SplitMix64 output function applied to ``key + (v + 1) *
GOLDEN``, i.e. position v of a SplitMix64 stream started at ``key``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
TWO53 = float(1 << 53)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on Python ints (reference implementation)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def trial_key(master_seed: int, trial: int) -> int:
    return mix64(mix64(master_seed & MASK64) + (trial + 1) * GOLDEN)


def site_bits(key: int, site: int) -> int:
    """Top 53 bits of the hash for one site."""
    return mix64(key + (site + 1) * GOLDEN) >> 11


def site_uniform(key: int, site: int) -> float:
    return site_bits(key, site) / TWO53


def p_threshold(p: float) -> int:
    """Integer cut t with  U < p  <=>  bits < t  for U = bits / 2**53."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError("p must lie in [0,1]")
    return math.ceil(p * TWO53)


@njit(cache=True, nogil=True, inline="always")
def _mix64_nb(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def fill_bits(key, out):
    """out[v] = 53-bit hash of site v under ``key`` (uint64 array)."""
    k = np.uint64(key)
    g = np.uint64(GOLDEN)
    for v in range(out.shape[0]):
        out[v] = _mix64_nb(k + np.uint64(v + 1) * g) >> np.uint64(11)


@njit(cache=True, nogil=True)
def fill_occupied(key, thresh, occ):
    """occ[v] = (bits_v < thresh); returns the number of occupied sites."""
    k = np.uint64(key)
    g = np.uint64(GOLDEN)
    t = np.uint64(thresh)
    count = 0
    for v in range(occ.shape[0]):
        b = _mix64_nb(k + np.uint64(v + 1) * g) >> np.uint64(11)
        if b < t:
            occ[v] = True
            count += 1
        else:
            occ[v] = False
    return count


def uniforms(master_seed: int, trial: int, size: int) -> np.ndarray:
    """The coupling field of one trial as float64 uniforms in [0, 1)."""
    bits = np.empty(size, dtype=np.uint64)
    fill_bits(np.uint64(trial_key(master_seed, trial)), bits)
    return bits.astype(np.float64) / TWO53


def occupied_mask(master_seed: int, trial: int, size: int, p: float) -> np.ndarray:
    occ = np.empty(size, dtype=np.bool_)
    fill_occupied(np.uint64(trial_key(master_seed, trial)), np.uint64(p_threshold(p)), occ)
    return occ
