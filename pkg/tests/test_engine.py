from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from percolab.engine import (
    Configuration,
    LineCounters,
    Region,
    adjacency,
    final_density,
    run_fast,
    run_naive,
    spans,
    step_sync,
)
from percolab.topology import GraphShape, Site


def plane_config(n, theta, pts):
    s = GraphShape(0, 2, 1, n, theta)
    return Configuration.from_sites(s, [Site((), p) for p in pts])


def test_step_fixpoints():
    s = GraphShape(1, 2, 3, 3, 2)
    full = Configuration.full(s)
    assert step_sync(full) == full
    empty = Configuration.empty(s)
    assert step_sync(empty) == empty


def test_step_on_plane():
    c = plane_config(3, 2, [(0, 0), (1, 1)])
    nxt = step_sync(c)
    assert set(nxt.sites()) == {Site((), p) for p in [(0, 0), (1, 1), (0, 1), (1, 0)]}


def test_plane_fills_in_two_rounds():
    c = plane_config(3, 2, [(0, 0), (1, 1)])
    final, stats = run_naive(c)
    # (2,2) sees nothing until its row and column have filled
    assert stats.rounds == 3 and stats.spanned and stats.activations == 7


def test_complete_graph_copy():
    s = GraphShape(1, 1, 4, 6, 3)
    reg = Region.block(s, 2)
    base = 2 * s.n
    c = Configuration.from_sites(s, [base, base + 1, base + 4])
    for run in (run_naive, run_fast):
        final, stats = run(c, reg)
        assert final.occupied[reg.mask].all() and not final.occupied[~reg.mask].any()
        assert stats.spanned
    c = Configuration.from_sites(s, [base, base + 1])
    for run in (run_naive, run_fast):
        final, stats = run(c, reg)
        assert final == c and not stats.spanned


def test_one_full_plane_alone_is_stuck():
    # every site next to the full plane has a single open neighbour
    s = GraphShape(1, 2, 3, 3, 2)
    occ = np.zeros(s.size, dtype=bool)
    occ[: s.block_size] = True
    c = Configuration(s, occ)
    for run in (run_naive, run_fast):
        final, stats = run(c)
        assert final == c and not stats.spanned


def test_full_plane_plus_seed_spreads():
    s = GraphShape(1, 2, 3, 3, 2)
    occ = np.zeros(s.size, dtype=bool)
    occ[: s.block_size] = True
    occ[s.block_size + 4] = True
    c = Configuration(s, occ)
    final, stats = run_naive(c)
    assert stats.spanned
    assert run_fast(c)[0] == final


def test_empty_and_full():
    s = GraphShape(2, 2, 4, 3, 2)
    for run in (run_naive, run_fast):
        final, stats = run(Configuration.empty(s))
        assert final.occupied_count == 0 and stats.activations == 0 and not stats.spanned
        final, stats = run(Configuration.full(s))
        assert final.occupied_count == s.size and stats.activations == 0 and stats.spanned


def test_spans_examples():
    s = GraphShape(1, 2, 4, 2, 5)
    assert s.degree == 4
    assert spans(Configuration.full(s))
    assert not spans(Configuration.empty(s))
    rng = np.random.default_rng(0)
    for _ in range(50):
        occ = rng.random(s.size) < 0.9
        occ[rng.integers(s.size)] = False
        assert not spans(Configuration(s, occ))


def test_final_density():
    s = GraphShape(1, 2, 5, 4, 3)
    assert final_density(Configuration.full(s)) == 1
    assert final_density(Configuration.empty(s)) == 0
    rng = np.random.default_rng(1)
    for _ in range(20):
        c = Configuration(s, rng.random(s.size) < 0.15)
        assert final_density(c) >= Fraction(c.occupied_count, s.size)


def test_theta_override():
    s = GraphShape(1, 2, 4, 4, 9)
    c = Configuration(s, np.arange(s.size) % 5 == 0)
    assert run_fast(c, theta=2)[0] == run_naive(c, theta=2)[0]
    assert run_fast(c)[0] == c


def test_line_counters_match_adjacency():
    rng = np.random.default_rng(2)
    for shape in (GraphShape(1, 2, 5, 4, 1), GraphShape(2, 1, 3, 3, 1), GraphShape(1, 3, 2, 3, 1),
                  GraphShape(1, 1, 1, 4, 1)):
        c = Configuration(shape, rng.random(shape.size) < 0.4)
        a = adjacency(shape.d1, shape.d2, shape.m, shape.n)
        assert np.array_equal(LineCounters(c).neighbor_counts(), a @ c.occupied.astype(int))


def test_region_restricts_growth():
    s = GraphShape(1, 2, 5, 3, 2)
    occ = np.zeros(s.size, dtype=bool)
    occ[: s.block_size] = True
    occ[s.block_size] = True
    occ[2 * s.block_size] = True
    reg = Region.slab(s, 0, 2)
    for run in (run_naive, run_fast):
        final, stats = run(Configuration(s, occ), reg)
        assert final.occupied[reg.mask].all()
        assert not final.occupied[3 * s.block_size:].any()
        assert stats.spanned


def test_region_mask_size_checked():
    s = GraphShape(1, 2, 3, 3, 2)
    with pytest.raises(ValueError):
        Region(s, np.ones(5, dtype=bool))
    with pytest.raises(ValueError):
        Configuration(s, np.ones(5, dtype=bool))


@st.composite
def instances(draw):
    d1 = draw(st.integers(0, 2))
    d2 = draw(st.integers(1, 3 if d1 == 0 else 2))
    s = GraphShape(d1, d2, draw(st.integers(1, 6)), draw(st.integers(2, 6 if d2 == 3 else 8)),
                   draw(st.integers(1, 7)))
    p = draw(st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.4, 0.5]))
    seed = draw(st.integers(0, 2**32 - 1))
    gen = np.random.default_rng(seed)
    c = Configuration(s, gen.random(s.size) < p)
    reg = Region(s, gen.random(s.size) < 0.75) if draw(st.booleans()) else None
    return c, reg


@settings(max_examples=300, deadline=None)
@given(instances())
def test_fast_equals_naive(arg):
    c, reg = arg
    a, sa = run_naive(c, reg)
    b, sb = run_fast(c, reg)
    assert a == b
    assert sa.activations == sb.activations and sa.spanned == sb.spanned


@settings(max_examples=100, deadline=None)
@given(instances())
def test_closure_properties(arg):
    c, reg = arg
    final, stats = run_fast(c, reg)
    # monotone, a fixpoint, and outside sites are untouched
    assert not (c.occupied & ~final.occupied).any()
    assert step_sync(final, reg) == final
    if reg is not None:
        assert np.array_equal(final.occupied[~reg.mask], c.occupied[~reg.mask])
    # growth is monotone in the initial set
    more = Configuration(c.shape, final.occupied | c.occupied)
    assert run_fast(more, reg)[0] == final
