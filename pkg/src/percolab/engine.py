"""Bootstrap percolation dynamics.

Two engines compute the same fixpoint:

* ``run_naive`` iterates the synchronous update over an explicit sparse
  adjacency matrix built from :func:`percolab.topology.neighbors`. It is slow
  and serves as the reference.
* ``run_fast`` propagates a frontier with per-line occupancy counters. The
  neighbour count of a closed site is the sum of the counts of its d2 lines
  plus the number of its open cycle neighbours, so opening a site touches
  O(d2 + 2*d1) counters. A line whose count reaches theta opens entirely;
  such bulk openings skip per-site tests and mark their blocks dirty, and a
  dirty block is later swept in index order.

Both engines only count open sites inside the region and never change sites
outside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from numba import njit

from percolab.topology import GraphShape, Site, index_of, neighbors, site_of


class Configuration:
    """Occupied site set over a product graph, stored as a flat bool array."""

    def __init__(self, shape: GraphShape, occupied=None):
        self.shape = shape
        if occupied is None:
            occupied = np.zeros(shape.size, dtype=np.bool_)
        else:
            occupied = np.ascontiguousarray(occupied, dtype=np.bool_).reshape(-1)
            if occupied.shape[0] != shape.size:
                raise ValueError(
                    f"occupied has {occupied.shape[0]} entries, shape has {shape.size} sites"
                )
        self.occupied = occupied

    @classmethod
    def empty(cls, shape: GraphShape) -> "Configuration":
        return cls(shape)

    @classmethod
    def full(cls, shape: GraphShape) -> "Configuration":
        return cls(shape, np.ones(shape.size, dtype=np.bool_))

    @classmethod
    def from_sites(cls, shape: GraphShape, sites: Iterable) -> "Configuration":
        """Build from Site objects or flat indices."""
        occ = np.zeros(shape.size, dtype=np.bool_)
        for s in sites:
            occ[index_of(shape, s) if isinstance(s, Site) else int(s)] = True
        return cls(shape, occ)

    @classmethod
    def from_grid(cls, shape: GraphShape, grid) -> "Configuration":
        grid = np.asarray(grid, dtype=np.bool_)
        if grid.shape != grid_dims(shape):
            raise ValueError(f"grid has shape {grid.shape}, expected {grid_dims(shape)}")
        return cls(shape, grid.reshape(-1))

    @property
    def occupied_count(self) -> int:
        return int(np.count_nonzero(self.occupied))

    def grid(self) -> np.ndarray:
        """View with one axis per coordinate (cycle axes first)."""
        return self.occupied.reshape(grid_dims(self.shape))

    def sites(self) -> list[Site]:
        return [site_of(self.shape, int(i)) for i in np.flatnonzero(self.occupied)]

    def copy(self) -> "Configuration":
        return Configuration(self.shape, self.occupied.copy())

    def __contains__(self, site) -> bool:
        idx = index_of(self.shape, site) if isinstance(site, Site) else int(site)
        return bool(self.occupied[idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.occupied, other.occupied)

    def __repr__(self) -> str:
        return f"Configuration({self.shape}, occupied={self.occupied_count})"


def grid_dims(shape: GraphShape) -> tuple[int, ...]:
    return (shape.m,) * shape.d1 + (shape.n,) * shape.d2


class Region:
    """A subset of the vertex set; ``mask is None`` means the whole graph."""

    def __init__(self, shape: GraphShape, mask=None):
        self.shape = shape
        if mask is not None:
            mask = np.ascontiguousarray(mask, dtype=np.bool_).reshape(-1)
            if mask.shape[0] != shape.size:
                raise ValueError("region mask size does not match the shape")
        self.mask = mask

    @classmethod
    def whole(cls, shape: GraphShape) -> "Region":
        return cls(shape)

    @classmethod
    def block(cls, shape: GraphShape, z) -> "Region":
        """The copy {z} x K_n^d2 for a cycle coordinate vector z (an int if d1 == 1)."""
        z = (z,) if isinstance(z, (int, np.integer)) else tuple(z)
        b = index_of(shape, Site(z, (0,) * shape.d2)) // shape.block_size
        mask = np.zeros(shape.size, dtype=np.bool_)
        mask[b * shape.block_size:(b + 1) * shape.block_size] = True
        return cls(shape, mask)

    @classmethod
    def slab(cls, shape: GraphShape, i1: int, i2: int) -> "Region":
        """Planes i1, i1+1, ..., i2 (cyclically) of a d1 == 1 shape."""
        if shape.d1 != 1:
            raise ValueError("slabs need d1 == 1")
        mask = np.zeros((shape.m, shape.block_size), dtype=np.bool_)
        i = i1 % shape.m
        while True:
            mask[i] = True
            if i == i2 % shape.m:
                break
            i = (i + 1) % shape.m
        return cls(shape, mask.reshape(-1))

    @property
    def is_whole(self) -> bool:
        return self.mask is None

    @property
    def size(self) -> int:
        return self.shape.size if self.mask is None else int(np.count_nonzero(self.mask))

    def as_mask(self) -> np.ndarray:
        if self.mask is None:
            return np.ones(self.shape.size, dtype=np.bool_)
        return self.mask


@dataclass(frozen=True)
class RunStats:
    """Summary of a run.

    ``rounds`` counts strictly growing synchronous steps; the fast engine has
    no notion of rounds and reports 0.
    """

    rounds: int
    activations: int
    spanned: bool


def _region(config: Configuration, region) -> Region:
    if region is None:
        return Region.whole(config.shape)
    if isinstance(region, Region):
        if region.shape.size != config.shape.size:
            raise ValueError("region and configuration shapes differ")
        return region
    return Region(config.shape, region)


def _theta(config: Configuration, theta) -> int:
    return config.shape.theta if theta is None else int(theta)


class LineCounters:
    """Per-line occupancy counts and per-site open cycle-neighbour counts.

    Computed with dense numpy reductions; ``neighbor_counts`` reassembles the
    open-neighbour count of every site from them.
    """

    def __init__(self, config: Configuration, region=None):
        shape = config.shape
        reg = _region(config, region)
        occ = config.occupied if reg.mask is None else config.occupied & reg.mask
        grid = occ.reshape(grid_dims(shape)).astype(np.int32)
        self.shape = shape
        self._occ = grid
        self.line_counts = [grid.sum(axis=shape.d1 + j, keepdims=True) for j in range(shape.d2)]
        cyc = np.zeros_like(grid)
        for j in range(shape.d1):
            if shape.m >= 2:
                cyc += np.roll(grid, 1, axis=j)
            if shape.m >= 3:
                cyc += np.roll(grid, -1, axis=j)
        self.cycle_counts = cyc

    def neighbor_counts(self) -> np.ndarray:
        total = self.cycle_counts.copy()
        for lc in self.line_counts:
            total += lc - self._occ
        return total.reshape(-1)


@lru_cache(maxsize=64)
def adjacency(d1: int, d2: int, m: int, n: int) -> sp.csr_matrix:
    """Sparse 0/1 adjacency matrix built site by site from ``neighbors``."""
    shape = GraphShape(d1, d2, m, n, 1)
    rows, cols = [], []
    for v in range(shape.size):
        for w in neighbors(shape, site_of(shape, v)):
            rows.append(v)
            cols.append(index_of(shape, w))
    data = np.ones(len(rows), dtype=np.int32)
    return sp.csr_matrix((data, (rows, cols)), shape=(shape.size, shape.size))


def step_sync(config: Configuration, region=None, theta=None) -> Configuration:
    """One synchronous update counting only open neighbours inside ``region``."""
    s = config.shape
    reg = _region(config, region)
    mask = reg.as_mask()
    theta = _theta(config, theta)
    counts = adjacency(s.d1, s.d2, s.m, s.n) @ (config.occupied & mask).astype(np.int32)
    return Configuration(s, config.occupied | (mask & (counts >= theta)))


def run_naive(config: Configuration, region=None, theta=None):
    reg = _region(config, region)
    cur = config
    rounds = 0
    while True:
        nxt = step_sync(cur, reg, theta)
        if nxt.occupied_count == cur.occupied_count:
            break
        cur = nxt
        rounds += 1
    activations = cur.occupied_count - config.occupied_count
    return cur, RunStats(rounds, activations, _fills(cur, reg))


def _fills(config: Configuration, reg: Region) -> bool:
    if reg.mask is None:
        return bool(config.occupied.all())
    return bool(config.occupied[reg.mask].all())


def run_fast(config: Configuration, region=None, theta=None):
    s = config.shape
    reg = _region(config, region)
    theta = _theta(config, theta)
    occ = config.occupied.copy()
    if reg.mask is None:
        activations = closure(occ, _NO_MASK, True, s.d1, s.d2, s.m, s.n, theta)
    else:
        activations = closure(occ, reg.mask, False, s.d1, s.d2, s.m, s.n, theta)
    out = Configuration(s, occ)
    return out, RunStats(0, int(activations), _fills(out, reg))


def spans(config: Configuration, region=None, theta=None) -> bool:
    return run_fast(config, region, theta)[1].spanned


def final_density(config: Configuration, theta=None) -> Fraction:
    final, _ = run_fast(config, None, theta)
    return Fraction(final.occupied_count, config.shape.size)


# ---------------------------------------------------------------------------
# numba kernel
#
# Lines of family j are indexed like the sites with coordinate k_j removed.
# For d2 <= 2 the callers pass the (up to two) line ids of a site explicitly,
# so the hot loops avoid 64-bit divisions; d2 >= 3 falls back to computing
# them from the flat index.
#
# The helpers are closures over the state arrays: numba inlines them without
# the per-call reference counting that passing arrays as arguments costs.

_NO_MASK = np.zeros(1, dtype=np.bool_)


@njit(cache=True, nogil=True)
def block_neighbors(d1, m):
    """nbr[b, q]: block index of the q-th distinct cycle neighbour of block b, or -1."""
    nz = m**d1
    nbr = np.full((nz, 2 * d1), -1, np.int64)
    for b in range(nz):
        for j in range(d1):
            s = m ** (d1 - 1 - j)
            c = (b // s) % m
            if m >= 2:
                nbr[b, 2 * j] = b + s if c + 1 < m else b - (m - 1) * s
            if m >= 3:
                nbr[b, 2 * j + 1] = b - s if c > 0 else b + (m - 1) * s
    return nbr


@njit(cache=True, nogil=True)
def closure(occ, inreg, full, d1, d2, m, n, theta):
    """Grow ``occ`` in place to the bootstrap fixpoint; return the number of activations.

    ``inreg`` is ignored when ``full`` is true.
    """
    N = occ.shape[0]
    nb = n**d2
    nz = N // nb
    nl = N // n
    ks = np.empty(d2, np.int64)
    for j in range(d2):
        ks[j] = n ** (d2 - 1 - j)
    nbr = block_neighbors(d1, m)
    nq = nbr.shape[1]

    linecnt = np.zeros((d2, nl), np.int64)
    zc = np.zeros(N, np.uint8)
    queued = np.zeros(N, np.uint8)
    blockcnt = np.zeros(nz, np.int64)
    blockreg = np.empty(nz, np.int64)
    # lines of each family per block that reached theta (d2 == 2 only)
    nfull = np.zeros((d2, nz), np.int64)
    stack = np.empty(N, np.int64)
    fills = np.empty(d2 * nl, np.int64)
    dirty = np.empty(nz, np.int64)
    dflag = np.zeros(nz, np.uint8)
    # stack top, fills top, dirty top, activations
    tops = np.zeros(4, np.int64)

    def line(v, j, la, lb):
        if d2 == 1:
            return la
        if d2 == 2:
            return la if j == 0 else lb
        s = ks[j]
        return (v // (s * n)) * s + v % s

    def count(w, la, lb):
        """Open neighbours of a closed site w."""
        if d2 == 1:
            return linecnt[0, la] + zc[w]
        if d2 == 2:
            return linecnt[0, la] + linecnt[1, lb] + zc[w]
        c = np.int64(zc[w])
        for j in range(d2):
            s = ks[j]
            c += linecnt[j, (w // (s * n)) * s + w % s]
        return c

    def queue(w):
        queued[w] = 1
        stack[tops[0]] = w
        tops[0] += 1

    def mark(b):
        if dflag[b] == 0:
            dflag[b] = 1
            dirty[tops[2]] = b
            tops[2] += 1

    def flood(b):
        """Open every site of block b (all of it lies in the region)."""
        base = b * nb
        for q in range(nq):
            b2 = nbr[b, q]
            if b2 < 0:
                continue
            off = (b2 - b) * nb
            for t in range(nb):
                if not occ[base + t]:
                    zc[base + t + off] += 1
            mark(b2)
        opened = 0
        for t in range(nb):
            if not occ[base + t]:
                occ[base + t] = True
                opened += 1
        for t in range(n):
            linecnt[0, b * n + t] = n
            linecnt[1, b * n + t] = n
        blockcnt[b] = nb
        tops[3] += opened

    def open_site(v, b, la, lb, deferred):
        occ[v] = True
        tops[3] += 1
        blockcnt[b] += 1
        for j in range(d2):
            L = line(v, j, la, lb)
            linecnt[j, L] += 1
            c = linecnt[j, L]
            if c == theta:
                if d2 == 2:
                    # theta filled lines of one family fill every crossing line
                    nfull[j, b] += 1
                    if nfull[j, b] == theta and blockreg[b] == nb:
                        # counters of v are half updated; roll back, then flood
                        occ[v] = False
                        tops[3] -= 1
                        blockcnt[b] -= 1
                        for j2 in range(j + 1):
                            linecnt[j2, line(v, j2, la, lb)] -= 1
                        flood(b)
                        return
                fills[tops[1]] = j * nl + L
                tops[1] += 1
            elif c < theta:
                if deferred:
                    mark(b)
                    continue
                for x in range(n):
                    if d2 == 1:
                        w = b * nb + x
                        wla = b
                        wlb = 0
                    elif d2 == 2:
                        if j == 0:
                            w = b * nb + x * n + (L - b * n)
                            wla = L
                            wlb = b * n + x
                        else:
                            w = b * nb + (L - b * n) * n + x
                            wla = b * n + x
                            wlb = L
                    else:
                        s = ks[j]
                        w = (L // s) * (s * n) + L % s + x * s
                        wla = 0
                        wlb = 0
                    if not occ[w] and queued[w] == 0 and (full or inreg[w]):
                        if count(w, wla, wlb) >= theta:
                            queue(w)
        for q in range(nq):
            b2 = nbr[b, q]
            if b2 < 0:
                continue
            u = v + (b2 - b) * nb
            zc[u] += 1
            if not occ[u] and (full or inreg[u]):
                if deferred:
                    mark(b2)
                elif queued[u] == 0:
                    ula = b2 if d2 == 1 else la + (b2 - b) * n
                    ulb = lb + (b2 - b) * n
                    if count(u, ula, ulb) >= theta:
                        queue(u)

    def sweep(b, collect):
        """Test every closed site of block b; open it, or queue it if ``collect``."""
        base = b * nb
        if d2 == 2:
            lbase = b * n
            for x in range(n):
                row = base + x * n
                for y in range(n):
                    if blockcnt[b] == nb:
                        return
                    w = row + y
                    if occ[w] or queued[w] != 0 or not (full or inreg[w]):
                        continue
                    if linecnt[1, lbase + x] + linecnt[0, lbase + y] + zc[w] >= theta:
                        if collect:
                            queue(w)
                        else:
                            open_site(w, b, lbase + y, lbase + x, True)
        else:
            for t in range(nb):
                w = base + t
                if occ[w] or queued[w] != 0 or not (full or inreg[w]):
                    continue
                if count(w, b, 0) >= theta:
                    if collect:
                        queue(w)
                    else:
                        open_site(w, b, b, 0, True)

    for b in range(nz):
        base = b * nb
        r = 0
        for t in range(nb):
            v = base + t
            if not (full or inreg[v]):
                continue
            r += 1
            if not occ[v]:
                continue
            blockcnt[b] += 1
            if d2 == 1:
                linecnt[0, b] += 1
            elif d2 == 2:
                x = t // n
                linecnt[0, b * n + t - x * n] += 1
                linecnt[1, b * n + x] += 1
            else:
                for j in range(d2):
                    s = ks[j]
                    linecnt[j, (v // (s * n)) * s + v % s] += 1
            for q in range(nq):
                b2 = nbr[b, q]
                if b2 >= 0:
                    zc[v + (b2 - b) * nb] += 1
        blockreg[b] = r

    for j in range(d2):
        for L in range(nl):
            if linecnt[j, L] >= theta:
                fills[tops[1]] = j * nl + L
                tops[1] += 1
                if d2 == 2:
                    nfull[j, L // n] += 1
    for b in range(nz):
        if d2 == 2 and blockreg[b] == nb and blockcnt[b] < nb and (
            nfull[0, b] >= theta or nfull[1, b] >= theta
        ):
            flood(b)
    for b in range(nz):
        if blockcnt[b] < blockreg[b]:
            sweep(b, True)

    while True:
        if tops[0] > 0:
            tops[0] -= 1
            w = stack[tops[0]]
            if occ[w]:
                continue
            b = w // nb
            if d2 == 1:
                la = b
                lb = 0
            elif d2 == 2:
                x = (w - b * nb) // n
                la = b * n + (w - b * nb - x * n)
                lb = b * n + x
            else:
                la = 0
                lb = 0
            open_site(w, b, la, lb, False)
        elif tops[1] > 0:
            tops[1] -= 1
            code = fills[tops[1]]
            j = code // nl
            L = code % nl
            if d2 == 1:
                for x in range(n):
                    w = L * nb + x
                    if not occ[w] and (full or inreg[w]):
                        open_site(w, L, L, 0, True)
            elif d2 == 2:
                b = L // n
                r = L - b * n
                for x in range(n):
                    if blockcnt[b] == nb:
                        break
                    if j == 0:
                        w = b * nb + x * n + r
                        la = L
                        lb = b * n + x
                    else:
                        w = b * nb + r * n + x
                        la = b * n + x
                        lb = L
                    if not occ[w] and (full or inreg[w]):
                        open_site(w, b, la, lb, True)
            else:
                s = ks[j]
                base = (L // s) * (s * n) + L % s
                for x in range(n):
                    w = base + x * s
                    if not occ[w] and (full or inreg[w]):
                        open_site(w, w // nb, 0, 0, True)
        elif tops[2] > 0:
            tops[2] -= 1
            b = dirty[tops[2]]
            dflag[b] = 0
            if blockcnt[b] < blockreg[b]:
                sweep(b, False)
        else:
            break
    return tops[3]
