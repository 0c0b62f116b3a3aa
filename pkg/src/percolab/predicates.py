"""Structural predicates on Hamming planes, cycle slabs and lattice sets.

Plane predicates take one copy of K_n^2 as an (n, n) boolean array or as a
Configuration of shape d1=0, d2=2. Slab predicates take a Configuration on
Z_m x K_n^2 or an (m, n, n) array, plane i being ``grid[i]``.

Counting conventions used throughout:

* R[x] and C[y] are the open counts of row x and column y of a plane, so a
  site (x, y) has R[x] + C[y] - 2*occ(x, y) open Hamming neighbours.
* cycle neighbours are the distinct planes i-1 and i+1 mod m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from percolab.engine import _NO_MASK, Configuration, closure
from percolab.errors import BudgetError, ParameterError, UnsupportedError

# ---------------------------------------------------------------------------
# input normalisation


def _as_plane(plane) -> np.ndarray:
    if isinstance(plane, Configuration):
        s = plane.shape
        if s.d1 != 0 or s.d2 != 2:
            raise ParameterError("a plane configuration needs d1 == 0 and d2 == 2")
        return plane.occupied.reshape(s.n, s.n)
    g = np.asarray(plane, dtype=np.bool_)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 2:
        raise ParameterError(f"a plane must be an (n, n) array with n >= 2, got {g.shape}")
    return g


def _as_stack(config) -> np.ndarray:
    if isinstance(config, Configuration):
        s = config.shape
        if s.d1 != 1 or s.d2 != 2:
            raise ParameterError("this check needs a Z_m x K_n^2 configuration (d1=1, d2=2)")
        return config.occupied.reshape(s.m, s.n, s.n)
    g = np.asarray(config, dtype=np.bool_)
    if g.ndim != 3 or g.shape[1] != g.shape[2] or g.shape[1] < 2:
        raise ParameterError(f"expected an (m, n, n) array, got {g.shape}")
    return g


def _theta_of(config, theta) -> int:
    if theta is not None:
        return int(theta)
    if isinstance(config, Configuration):
        return config.shape.theta
    raise ParameterError("theta is required when passing a bare array")


def _need_cycle(grid: np.ndarray) -> None:
    if grid.shape[0] <= 2:
        raise UnsupportedError("cyclic interval checks need m >= 3")


def hamming_counts(grid: np.ndarray) -> np.ndarray:
    """Open Hamming neighbours of every site, for a plane or a stack of planes."""
    g = grid.astype(np.int32)
    return g.sum(axis=-1, keepdims=True) + g.sum(axis=-2, keepdims=True) - 2 * g


def cycle_counts(grid: np.ndarray) -> np.ndarray:
    """Open cycle neighbours of every site of an (m, n, n) stack."""
    g = grid.astype(np.int32)
    m = g.shape[0]
    if m == 1:
        return np.zeros_like(g)
    out = np.roll(g, 1, axis=0)
    if m >= 3:
        out += np.roll(g, -1, axis=0)
    return out


# ---------------------------------------------------------------------------
# single planes


def is_k_viable(plane, k: int) -> bool:
    g = _as_plane(plane)
    best = max(int(g.sum(axis=1).max()), int(g.sum(axis=0).max()))
    return best >= k


def is_k_IS(plane, k: int) -> bool:
    """Threshold-k dynamics restricted to the plane fills it."""
    g = _as_plane(plane)
    if k <= 0 or g.all():
        return True
    occ = np.ascontiguousarray(g).reshape(-1).copy()
    closure(occ, _NO_MASK, True, 0, 2, 1, g.shape[0], int(k))
    return bool(occ.all())


def is_k_II(plane, k: int) -> bool:
    """One synchronous threshold-k step inside the plane adds nothing."""
    g = _as_plane(plane)
    return not bool(((hamming_counts(g) >= k) & ~g).any())


def _inert_all(grid: np.ndarray, k: int) -> np.ndarray:
    total = hamming_counts(grid) + cycle_counts(grid)
    return ~((total >= k) & ~grid).any(axis=(1, 2))


def is_k_inert(slab, k: int, i: int) -> bool:
    """No closed site of plane i sees k open neighbours, counting planes i-1 and i+1."""
    g = _as_stack(slab)
    m = g.shape[0]
    i %= m
    total = hamming_counts(g[i])
    if m >= 2:
        total = total + g[(i + 1) % m]
    if m >= 3:
        total = total + g[(i - 1) % m]
    return not bool(((total >= k) & ~g[i]).any())


def subsquares(n: int) -> list[tuple[slice, slice]]:
    """Row/column slices of the four congruent subsquares of K_n^2.

    For even n the last row and column are dropped first; the side is then
    odd and the central row and column belong to no subsquare.
    """
    n2 = n if n % 2 else n - 1
    h = n2 // 2
    lo, hi = slice(0, h), slice(h + 1, 2 * h + 1)
    return [(r, c) for r in (lo, hi) for c in (lo, hi)]


def is_k_proper(plane, k: int, theta: int) -> bool:
    """Every subsquare has theta rows and theta columns with at least k points inside it."""
    g = _as_plane(plane)
    n = g.shape[0]
    if n < 2 * theta + 2:
        raise UnsupportedError(f"k-proper needs n >= 2*theta + 2, got n={n}, theta={theta}")
    for rs, cs in subsquares(n):
        sub = g[rs, cs]
        if int((sub.sum(axis=1) >= k).sum()) < theta or int((sub.sum(axis=0) >= k).sum()) < theta:
            return False
    return True


# ---------------------------------------------------------------------------
# classification of the planes of Z_m x K_n^2


@dataclass(frozen=True)
class PlaneClass:
    """Predicate values of one plane, keyed by k."""

    index: int
    viable: dict = field(default_factory=dict)
    internally_spanned: dict = field(default_factory=dict)
    internally_inert: dict = field(default_factory=dict)
    inert: dict = field(default_factory=dict)
    proper: dict = field(default_factory=dict)
    exceptional: bool = False

    def as_dict(self) -> dict:
        out = asdict(self)
        for key in ("viable", "internally_spanned", "internally_inert", "inert", "proper"):
            out[key] = {str(k): v for k, v in out[key].items()}
        return out


def classify_planes(config, theta=None, ks=None) -> list[PlaneClass]:
    """Evaluate the plane predicates for k in ``ks`` (default theta-2, theta-1, theta).

    A plane is exceptional if it is theta-IS or not (theta-1)-IS.
    """
    g = _as_stack(config)
    theta = _theta_of(config, theta)
    ks = tuple(ks) if ks is not None else (theta - 2, theta - 1, theta)
    n = g.shape[1]
    inert = {k: _inert_all(g, k) for k in ks}
    out = []
    for i in range(g.shape[0]):
        plane = g[i]
        isk = {k: is_k_IS(plane, k) for k in set(ks) | {theta - 1, theta}}
        out.append(
            PlaneClass(
                index=i,
                viable={k: is_k_viable(plane, k) for k in ks},
                internally_spanned={k: isk[k] for k in ks},
                internally_inert={k: is_k_II(plane, k) for k in ks},
                inert={k: bool(inert[k][i]) for k in ks},
                proper={k: is_k_proper(plane, k, theta) for k in ks} if n >= 2 * theta + 2 else {},
                exceptional=isk[theta] or not isk[theta - 1],
            )
        )
    return out


# ---------------------------------------------------------------------------
# blocking intervals


@dataclass(frozen=True)
class BlockingInterval:
    """Cyclic interval i1, i1+1, ..., i2 of planes."""

    i1: int
    i2: int

    def planes(self, m: int) -> list[int]:
        length = (self.i2 - self.i1) % m + 1
        return [(self.i1 + t) % m for t in range(length)]


def _blocking_tables(g: np.ndarray, theta: int):
    m = g.shape[0]
    h = hamming_counts(g)
    inert = _inert_all(g, theta)
    up = np.roll(g, -1, axis=0)  # up[i] = g[i+1]
    down = np.roll(g, 1, axis=0)  # down[i] = g[i-1]
    low_fwd = (h + up).reshape(m, -1).max(axis=1) <= theta - 2
    low_bwd = (h + down).reshape(m, -1).max(axis=1) <= theta - 2
    return inert, low_fwd, low_bwd


def find_blocking_intervals(config, theta=None, limit: Optional[int] = None) -> list[BlockingInterval]:
    """All cyclic blocking intervals, in order of (i1, length); at most ``limit`` of them."""
    g = _as_stack(config)
    _need_cycle(g)
    theta = _theta_of(config, theta)
    m = g.shape[0]
    inert, low_fwd, low_bwd = _blocking_tables(g, theta)
    out: list[BlockingInterval] = []
    for i1 in range(m):
        if not low_fwd[i1]:
            continue
        for t in range(1, m):
            i2 = (i1 + t) % m
            if low_bwd[i2]:
                out.append(BlockingInterval(i1, i2))
                if limit is not None and len(out) >= limit:
                    return out
            if not inert[i2]:
                break
    return out


def has_blocking(config, theta=None) -> bool:
    return bool(find_blocking_intervals(config, theta, limit=1))


# ---------------------------------------------------------------------------
# spanning conditions


def sufficient_condition(config, theta=None) -> bool:
    """Every plane is (theta-2)-IS, some plane is theta-IS, and cyclically between
    any two consecutive planes that are not (theta-1)-IS lies a theta-IS plane."""
    g = _as_stack(config)
    _need_cycle(g)
    theta = _theta_of(config, theta)
    m = g.shape[0]
    if not all(is_k_IS(g[i], theta - 2) for i in range(m)):
        return False
    good = [is_k_IS(g[i], theta) for i in range(m)]
    if not any(good):
        return False
    bad = [not is_k_IS(g[i], theta - 1) for i in range(m)]
    bads = [i for i in range(m) if bad[i]]
    if len(bads) < 2:
        return True
    for a, b in zip(bads, bads[1:] + [bads[0] + m]):
        if not any(good[j % m] for j in range(a + 1, b)):
            return False
    return True


def necessary_condition(config, theta=None) -> bool:
    """No blocking interval exists, and some plane is not theta-inert unless all is occupied."""
    g = _as_stack(config)
    _need_cycle(g)
    theta = _theta_of(config, theta)
    if has_blocking(g, theta):
        return False
    return bool(g.all()) or not bool(_inert_all(g, theta).all())


Z_ASSISTED_VARIANTS = {
    # name: (open cycle neighbours needed, shortfall of Hamming neighbours below theta)
    "one_z_theta_minus_2": (1, 2),
    "one_z_theta_minus_1": (1, 1),
    "two_z_theta_minus_2": (2, 2),
}


def count_z_assisted(config, theta=None, variant: str = "one_z_theta_minus_2") -> int:
    """Number of sites with enough open cycle neighbours and open Hamming neighbours.

    Every site counts, open or not.
    """
    if variant not in Z_ASSISTED_VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; choose from {sorted(Z_ASSISTED_VARIANTS)}")
    g = _as_stack(config)
    theta = _theta_of(config, theta)
    zneed, short = Z_ASSISTED_VARIANTS[variant]
    hit = (cycle_counts(g) >= zneed) & (hamming_counts(g) >= theta - short)
    return int(hit.sum())


# ---------------------------------------------------------------------------
# safe boxes on Z_m^d x K_n


@dataclass(frozen=True)
class SafeBox:
    """Box with lower corner ``corner`` spanning two cycle values along ``doubled_axes``."""

    corner: tuple
    doubled_axes: tuple

    def cells(self, m: int) -> list[tuple]:
        out = []
        for shift in itertools.product((0, 1), repeat=len(self.doubled_axes)):
            z = list(self.corner)
            for a, s in zip(self.doubled_axes, shift):
                z[a] = (z[a] + s) % m
            out.append(tuple(z))
        return sorted(set(out))


def find_empty_safe_box(config, theta=None) -> Optional[SafeBox]:
    """An empty safe box if one exists (then spanning is impossible), else None."""
    if isinstance(config, Configuration):
        s = config.shape
        if s.d2 != 1:
            raise ParameterError("safe boxes need d2 == 1")
        d = s.d1
        lines = config.occupied.reshape((s.m,) * d + (s.n,))
    else:
        lines = np.asarray(config, dtype=np.bool_)
        d = lines.ndim - 1
    theta = _theta_of(config, theta)
    if not d + 1 <= theta <= 2 * d + 1:
        raise UnsupportedError(f"safe boxes need d+1 <= theta <= 2d+1, got d={d}, theta={theta}")
    empty = ~lines.any(axis=-1)
    s_axes = 2 * d + 1 - theta
    for axes in itertools.combinations(range(d), s_axes):
        box = empty
        for a in axes:
            box = box & np.roll(box, -1, axis=a)
        hits = np.argwhere(box)
        if len(hits):
            return SafeBox(tuple(int(c) for c in hits[0]), axes)
    return None


# ---------------------------------------------------------------------------
# finite check of the small-set lattice lemma


def _outside_ok(cells: frozenset, d: int, theta: int) -> bool:
    """Some point of ``cells`` has at least theta lattice neighbours outside it."""
    for c in cells:
        out = 0
        for a in range(d):
            for s in (-1, 1):
                nb = c[:a] + (c[a] + s,) + c[a + 1:]
                if nb not in cells:
                    out += 1
        if out >= theta:
            return True
    return False


def _normalize(cells) -> frozenset:
    lo = [min(c[a] for c in cells) for a in range(len(next(iter(cells))))]
    return frozenset(tuple(x - l for x, l in zip(c, lo)) for c in cells)


def lattice_animals(d: int, max_size: int, budget: int = 2_000_000):
    """Yield every connected subset of Z^d with at most ``max_size`` points, up to translation."""
    level = {frozenset({(0,) * d})}
    total = 0
    for size in range(1, max_size + 1):
        total += len(level)
        if total > budget:
            raise BudgetError(f"more than {budget} lattice animals needed")
        yield from level
        if size == max_size:
            return
        nxt = set()
        for a in level:
            for c in a:
                for ax in range(d):
                    for s in (-1, 1):
                        nb = c[:ax] + (c[ax] + s,) + c[ax + 1:]
                        if nb not in a:
                            nxt.add(_normalize(a | {nb}))
        level = nxt


def small_lattice_counterexample(d: int, theta: int, bound: Optional[int] = None,
                                 method: str = "animals", budget: int = 2_000_000):
    """A set A in [0, bound)^d with |A| < 2^(2d+1-theta) in which every point has fewer
    than theta outside neighbours, or None if there is none.

    ``method="animals"`` checks connected sets only (a component of a
    counterexample is itself one); ``method="subsets"`` checks every subset.
    """
    if not d + 1 <= theta <= 2 * d + 1:
        raise UnsupportedError(f"the lemma needs d+1 <= theta <= 2d+1, got d={d}, theta={theta}")
    max_size = 2 ** (2 * d + 1 - theta) - 1
    bound = 2 * (max_size + 1) if bound is None else int(bound)
    if max_size == 0:
        return None
    if method == "animals":
        for a in lattice_animals(d, max_size, budget):
            if max(max(c) for c in a) >= bound:
                continue
            if not _outside_ok(a, d, theta):
                return sorted(a)
        return None
    if method == "subsets":
        cells = list(itertools.product(range(bound), repeat=d))
        need = sum(math.comb(len(cells), k) for k in range(1, max_size + 1))
        if need > budget:
            raise BudgetError(f"{need} subsets exceed the budget of {budget}")
        for k in range(1, max_size + 1):
            for combo in itertools.combinations(cells, k):
                if not _outside_ok(frozenset(combo), d, theta):
                    return sorted(combo)
        return None
    raise ParameterError(f"unknown method {method!r}")


def verify_small_lattice_lemma(d: int, theta: int, bound: Optional[int] = None,
                               method: str = "animals", budget: int = 2_000_000) -> bool:
    return small_lattice_counterexample(d, theta, bound, method, budget) is None
