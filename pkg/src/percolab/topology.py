"""Vertex set and neighbourhood structure of Z_m^d1 x K_n^d2.

Sites are flattened row-major with the cycle coordinates outermost, so the
n**d2 sites sharing one cycle coordinate vector (a "Hamming plane" when
d2 == 2) form one contiguous block of indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

INDEX_LIMIT = 2**62


class RangeError(IndexError, ValueError):
    """A coordinate or flat index lies outside the vertex set."""


@dataclass(frozen=True)
class GraphShape:
    """Parameters of the product graph Z_m^d1 x K_n^d2 and the threshold."""

    d1: int
    d2: int
    m: int
    n: int
    theta: int

    def __post_init__(self):
        for name in ("d1", "d2", "m", "n", "theta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {value!r}")
        if self.d1 < 0:
            raise ValueError("d1 must be nonnegative")
        if self.d2 < 1:
            raise ValueError("d2 must be at least 1")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.n < 2:
            raise ValueError("n must be at least 2 (K_1 has no edges)")
        if self.theta < 1:
            raise ValueError("theta must be positive")
        if self.m**self.d1 * self.n**self.d2 > INDEX_LIMIT:
            raise OverflowError(
                f"m^d1 * n^d2 = {self.m ** self.d1 * self.n ** self.d2} "
                f"exceeds the index limit {INDEX_LIMIT}"
            )

    @property
    def block_size(self) -> int:
        """Number of sites with a fixed cycle coordinate vector (n**d2)."""
        return self.n**self.d2

    @property
    def num_blocks(self) -> int:
        return self.m**self.d1

    @property
    def size(self) -> int:
        return self.num_blocks * self.block_size

    @property
    def degree(self) -> int:
        return degree(self)

    def with_theta(self, theta: int) -> "GraphShape":
        return GraphShape(self.d1, self.d2, self.m, self.n, theta)


@dataclass(frozen=True)
class Site:
    """A vertex: d1 cycle coordinates followed by d2 complete-graph coordinates."""

    z: tuple[int, ...]
    k: tuple[int, ...]

    def __init__(self, z: Sequence[int] = (), k: Sequence[int] = ()):
        object.__setattr__(self, "z", tuple(int(c) for c in z))
        object.__setattr__(self, "k", tuple(int(c) for c in k))


def _check_site(shape: GraphShape, site: Site) -> None:
    if len(site.z) != shape.d1 or len(site.k) != shape.d2:
        raise RangeError(
            f"site has {len(site.z)}+{len(site.k)} coordinates, "
            f"shape needs {shape.d1}+{shape.d2}"
        )
    for c in site.z:
        if not 0 <= c < shape.m:
            raise RangeError(f"cycle coordinate {c} not in [0, {shape.m})")
    for c in site.k:
        if not 0 <= c < shape.n:
            raise RangeError(f"complete-graph coordinate {c} not in [0, {shape.n})")


def index_of(shape: GraphShape, site: Site) -> int:
    _check_site(shape, site)
    idx = 0
    for c in site.z:
        idx = idx * shape.m + c
    for c in site.k:
        idx = idx * shape.n + c
    return idx


def site_of(shape: GraphShape, idx: int) -> Site:
    if not 0 <= idx < shape.size:
        raise RangeError(f"index {idx} not in [0, {shape.size})")
    k = []
    for _ in range(shape.d2):
        idx, c = divmod(idx, shape.n)
        k.append(c)
    z = []
    for _ in range(shape.d1):
        idx, c = divmod(idx, shape.m)
        z.append(c)
    return Site(tuple(reversed(z)), tuple(reversed(k)))


def neighbors(shape: GraphShape, site: Site) -> list[Site]:
    """Distinct neighbours of ``site``.

    Cycle directions contribute +-1 mod m (one neighbour when m == 2, none
    when m == 1); each complete-graph direction contributes the n - 1 other
    sites of the same line.
    """
    _check_site(shape, site)
    out = []
    for j, c in enumerate(site.z):
        for c2 in sorted({(c + 1) % shape.m, (c - 1) % shape.m} - {c}):
            z = list(site.z)
            z[j] = c2
            out.append(Site(z, site.k))
    for j, c in enumerate(site.k):
        for c2 in range(shape.n):
            if c2 != c:
                k = list(site.k)
                k[j] = c2
                out.append(Site(site.z, k))
    return out


def cycle_degree(m: int) -> int:
    return min(m - 1, 2)


def degree(shape: GraphShape) -> int:
    return shape.d1 * cycle_degree(shape.m) + shape.d2 * (shape.n - 1)
