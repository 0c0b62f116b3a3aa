import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from percolab import predicates as P
from percolab.engine import Configuration, Region, run_naive, spans, step_sync
from percolab.errors import BudgetError, ParameterError, UnsupportedError
from percolab.topology import GraphShape, Site, neighbors, site_of


def plane(n, pts):
    g = np.zeros((n, n), dtype=bool)
    for p in pts:
        g[p] = True
    return g


def random_plane(rng, n, p):
    return rng.random((n, n)) < p


def stack_config(g, theta):
    m, n, _ = g.shape
    return Configuration(GraphShape(1, 2, m, n, theta), g.reshape(-1))


# single planes


def test_viable_examples():
    assert P.is_k_viable(plane(4, [(2, 3)]), 1)
    assert P.is_k_viable(plane(4, [(1, 0), (1, 3)]), 2)
    assert not P.is_k_viable(plane(4, [(1, 0), (2, 3)]), 2)


def test_viable_matches_scan():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        g = random_plane(rng, n, rng.uniform(0, 0.6))
        k = int(rng.integers(0, n + 1))
        best = 0
        for i in range(n):
            best = max(best, sum(g[i, j] for j in range(n)), sum(g[j, i] for j in range(n)))
        assert P.is_k_viable(g, k) == (best >= k)


def test_internally_spanned_examples():
    assert P.is_k_IS(plane(3, [(0, 0), (1, 1)]), 2)
    assert not P.is_k_IS(plane(3, [(0, 0), (0, 1), (0, 2)]), 2)
    full = np.ones((5, 5), dtype=bool)
    assert all(P.is_k_IS(full, k) for k in range(0, 12))


def test_internally_inert_examples():
    assert P.is_k_II(plane(3, [(0, 0), (0, 1), (0, 2)]), 2)
    assert P.is_k_II(np.zeros((4, 4), dtype=bool), 1)
    assert not P.is_k_II(plane(3, [(0, 0), (1, 1)]), 2)


def test_plane_predicates_match_engine():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(2, 8))
        k = int(rng.integers(1, 6))
        g = random_plane(rng, n, rng.uniform(0.05, 0.5))
        c = Configuration(GraphShape(0, 2, 1, n, k), g.reshape(-1))
        assert P.is_k_IS(g, k) == run_naive(c)[1].spanned
        assert P.is_k_II(g, k) == (step_sync(c) == c)
        assert P.is_k_IS(c, k) == P.is_k_IS(g, k)


def test_inert_examples():
    assert P.is_k_inert(np.zeros((3, 4, 4), dtype=bool), 1, 1)
    g = np.ones((3, 4, 4), dtype=bool)
    g[1] = False
    assert not P.is_k_inert(g, 2, 1)


def test_inert_matches_slab_step():
    rng = np.random.default_rng(2)
    for _ in range(200):
        m = int(rng.integers(3, 7))
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, 6))
        i = int(rng.integers(0, m))
        g = rng.random((m, n, n)) < rng.uniform(0.05, 0.5)
        c = stack_config(g, k)
        nxt = step_sync(c, Region.slab(c.shape, i - 1, i + 1)).occupied.reshape(m, n, n)
        assert P.is_k_inert(g, k, i) == (not (nxt[i] & ~g[i]).any())


def test_subsquares_exclude_central_line():
    for n in range(2, 12):
        sq = P.subsquares(n)
        h = (n - 1) // 2
        assert len(sq) == 4
        rows = sorted({r for rs, _ in sq for r in range(n)[rs]})
        if n % 2:
            assert rows == [r for r in range(n) if r != h]
        else:
            assert rows == [r for r in range(n - 1) if r != h]
        assert all(len(range(n)[rs]) == h for rs, _ in sq)


def proper_scan(g, k, theta):
    n = g.shape[0]
    h = (n - 1) // 2
    halves = [range(0, h), range(n - h - (0 if n % 2 else 1), n - (0 if n % 2 else 1))]
    for rs in halves:
        for cs in halves:
            rows = sum(1 for r in rs if sum(g[r, c] for c in cs) >= k)
            cols = sum(1 for c in cs if sum(g[r, c] for r in rs) >= k)
            if rows < theta or cols < theta:
                return False
    return True


def test_proper():
    for n in (6, 7, 10, 11):
        theta = (n - 2) // 2
        for k in range(1, n // 2):
            assert P.is_k_proper(np.ones((n, n), dtype=bool), k, theta) == (k <= (n - 1) // 2)
        assert not P.is_k_proper(np.zeros((n, n), dtype=bool), 1, theta)
    rng = np.random.default_rng(3)
    for _ in range(300):
        n = int(rng.integers(6, 14))
        theta = int(rng.integers(1, (n - 2) // 2 + 1))
        k = int(rng.integers(1, 4))
        g = random_plane(rng, n, rng.uniform(0.1, 0.9))
        assert P.is_k_proper(g, k, theta) == proper_scan(g, k, theta)
    with pytest.raises(UnsupportedError):
        P.is_k_proper(np.ones((5, 5), dtype=bool), 1, 2)


def test_plane_input_validation():
    with pytest.raises(ParameterError):
        P.is_k_IS(np.zeros((3, 4), dtype=bool), 1)
    with pytest.raises(ParameterError):
        P.is_k_IS(Configuration(GraphShape(1, 2, 3, 3, 2)), 1)


# classification


def test_classify_full_and_empty():
    g = np.ones((4, 5, 5), dtype=bool)
    for pc in P.classify_planes(g, 3):
        assert pc.internally_spanned[3] and pc.internally_spanned[2]
        assert pc.exceptional  # theta-IS planes count as exceptional
    for pc in P.classify_planes(np.zeros((4, 5, 5), dtype=bool), 2):
        assert not pc.internally_spanned[1] and pc.exceptional


def test_classify_consistent():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m, n, theta = int(rng.integers(3, 6)), int(rng.integers(2, 11)), int(rng.integers(2, 5))
        g = rng.random((m, n, n)) < rng.uniform(0.05, 0.4)
        for pc in P.classify_planes(stack_config(g, theta)):
            i = pc.index
            for k in (theta - 2, theta - 1, theta):
                assert pc.viable[k] == P.is_k_viable(g[i], k)
                assert pc.internally_spanned[k] == P.is_k_IS(g[i], k)
                assert pc.internally_inert[k] == P.is_k_II(g[i], k)
                assert pc.inert[k] == P.is_k_inert(g, k, i)
                if n >= 2 * theta + 2:
                    assert pc.proper[k] == P.is_k_proper(g[i], k, theta)
            assert pc.exceptional == (P.is_k_IS(g[i], theta) or not P.is_k_IS(g[i], theta - 1))
            assert set(pc.as_dict()["viable"]) == {str(k) for k in (theta - 2, theta - 1, theta)}


# blocking, sufficient and necessary conditions


def test_two_empty_planes_block():
    g = np.ones((5, 4, 4), dtype=bool)
    g[2] = g[3] = False
    blocks = P.find_blocking_intervals(g, 2)
    assert P.BlockingInterval(2, 3) in blocks
    assert not spans(stack_config(g, 2))
    assert not P.necessary_condition(g, 2)
    assert P.BlockingInterval(4, 1).planes(5) == [4, 0, 1]


def test_full_config_conditions():
    g = np.ones((4, 4, 4), dtype=bool)
    assert P.find_blocking_intervals(g, 3) == []
    assert P.sufficient_condition(g, 3)
    assert P.necessary_condition(g, 3)


def test_empty_config_conditions():
    g = np.zeros((4, 4, 4), dtype=bool)
    assert not P.sufficient_condition(g, 2)
    assert not P.necessary_condition(g, 2)


def test_all_planes_theta_is():
    # every plane theta-IS although not full
    g = np.zeros((4, 5, 5), dtype=bool)
    g[:, [0, 1], [0, 1]] = True
    assert all(P.is_k_IS(g[i], 2) for i in range(4))
    assert P.sufficient_condition(g, 2)


def test_cyclic_checks_need_three_planes():
    g = np.ones((2, 4, 4), dtype=bool)
    for f in (P.find_blocking_intervals, P.sufficient_condition, P.necessary_condition):
        with pytest.raises(UnsupportedError):
            f(g, 2)


@st.composite
def stacks(draw):
    m = draw(st.integers(3, 7))
    n = draw(st.integers(2, 8))
    theta = draw(st.integers(2, 6))
    p = draw(st.floats(0.02, 0.7))
    gen = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return gen.random((m, n, n)) < p, theta


@settings(max_examples=300, deadline=None)
@given(stacks())
def test_condition_implications(arg):
    g, theta = arg
    s = spans(stack_config(g, theta))
    if P.sufficient_condition(g, theta):
        assert s
    if s:
        assert P.necessary_condition(g, theta)
    if P.has_blocking(g, theta):
        assert not s


def test_blocking_interval_is_never_invaded():
    # occupying everything outside a blocking interval leaves it closed
    rng = np.random.default_rng(5)
    found = 0
    for _ in range(400):
        m, n, theta = int(rng.integers(3, 7)), int(rng.integers(2, 7)), int(rng.integers(2, 5))
        g = rng.random((m, n, n)) < rng.uniform(0.02, 0.3)
        for b in P.find_blocking_intervals(g, theta):
            inside = np.zeros(m, dtype=bool)
            inside[b.planes(m)] = True
            h = g.copy()
            h[~inside] = True
            final = run_naive(stack_config(h, theta))[0].occupied.reshape(m, n, n)
            assert np.array_equal(final[inside], g[inside])
            found += 1
    assert found > 20


# Z-assisted sites


def z_assisted_recount(config, zneed, short):
    s = config.shape
    total = 0
    for v in range(s.size):
        site = site_of(s, v)
        z = h = 0
        for w in neighbors(s, site):
            if w in config:
                if w.z != site.z:
                    z += 1
                else:
                    h += 1
        total += z >= zneed and h >= s.theta - short
    return total


def test_z_assisted():
    s = GraphShape(1, 2, 4, 4, 3)
    for v in P.Z_ASSISTED_VARIANTS:
        assert P.count_z_assisted(Configuration.empty(s), variant=v) == 0
        assert P.count_z_assisted(Configuration.full(s), variant=v) == s.size
    rng = np.random.default_rng(6)
    for _ in range(20):
        s = GraphShape(1, 2, int(rng.integers(3, 6)), int(rng.integers(2, 6)), int(rng.integers(2, 6)))
        c = Configuration(s, rng.random(s.size) < 0.3)
        for v, (zn, sh) in P.Z_ASSISTED_VARIANTS.items():
            assert P.count_z_assisted(c, variant=v) == z_assisted_recount(c, zn, sh)
    with pytest.raises(ParameterError):
        P.count_z_assisted(c, variant="nope")


# safe boxes


def test_safe_box_full_and_lines():
    s = GraphShape(2, 1, 4, 3, 5)
    assert P.find_empty_safe_box(Configuration.full(s)) is None
    occ = np.ones(s.size, dtype=bool)
    occ[(1 * 4 + 2) * 3:(1 * 4 + 2) * 3 + 3] = False
    box = P.find_empty_safe_box(Configuration(s, occ))
    assert box == P.SafeBox((1, 2), ())
    assert box.cells(4) == [(1, 2)]


def test_safe_box_cells_wrap():
    assert P.SafeBox((3, 0), (0,)).cells(4) == [(0, 0), (3, 0)]


def brute_safe_box_ok(shape, box):
    """Every vertex of the box has exactly theta - 1 neighbours outside it."""
    cells = set(box.cells(shape.m))
    for z in cells:
        for k in range(shape.n):
            out = sum(1 for w in neighbors(shape, Site(z, (k,))) if w.z not in cells)
            if out != shape.theta - 1:
                return False
    return True


def test_safe_box_geometry_and_blocking():
    rng = np.random.default_rng(7)
    hits = 0
    for _ in range(300):
        d = int(rng.integers(1, 4))
        theta = int(rng.integers(d + 1, 2 * d + 2))
        s = GraphShape(d, 1, int(rng.integers(3, 6)), int(rng.integers(2, 5)), theta)
        c = Configuration(s, rng.random(s.size) < rng.uniform(0.05, 0.6))
        box = P.find_empty_safe_box(c)
        if box is not None:
            hits += 1
            assert brute_safe_box_ok(s, box)
            assert not spans(c)
    assert hits > 30


def test_safe_box_range():
    with pytest.raises(UnsupportedError):
        P.find_empty_safe_box(Configuration.full(GraphShape(2, 1, 4, 3, 2)))
    with pytest.raises(ParameterError):
        P.find_empty_safe_box(Configuration.full(GraphShape(1, 2, 4, 3, 2)))


# small lattice sets


def test_lattice_animal_counts():
    # fixed polyominoes and polycubes by size
    sizes = Counter(len(a) for a in P.lattice_animals(2, 6))
    assert [sizes[k] for k in range(1, 7)] == [1, 2, 6, 19, 63, 216]
    sizes = Counter(len(a) for a in P.lattice_animals(3, 5))
    assert [sizes[k] for k in range(1, 6)] == [1, 3, 15, 86, 534]
    with pytest.raises(BudgetError):
        list(P.lattice_animals(3, 7, budget=1000))


def test_lattice_lemma_examples():
    assert P.verify_small_lattice_lemma(1, 2)
    assert P.verify_small_lattice_lemma(2, 3, bound=6, method="subsets")
    assert P.verify_small_lattice_lemma(2, 5)
    assert P.verify_small_lattice_lemma(2, 4, bound=4, method="subsets")


def test_lattice_lemma_range():
    with pytest.raises(UnsupportedError):
        P.small_lattice_counterexample(2, 2)


def test_outside_ok_on_square():
    square = frozenset(itertools.product(range(2), repeat=2))
    assert not P._outside_ok(square, 2, 3)
    assert P._outside_ok(square, 2, 2)


@settings(max_examples=200, deadline=None)
@given(stacks())
def test_empty_plane_blocks_at_theta_three(arg):
    # a site of an empty plane sees at most two open cycle neighbours
    g, _ = arg
    g = g.copy()
    g[0] = False
    assert not spans(stack_config(g, 3))
