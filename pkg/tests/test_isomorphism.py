"""Stagewise straightening maps: exactness, alignment, the doubling example."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ergodic_vc import (
    IntervalUnion,
    PiecewiseTranslation,
    build_map,
    doubling_comb,
    doubling_map,
    doubling_map_deviation,
    image_of_union,
    iu,
    measure_preservation_defect,
    normalize,
)
from ergodic_vc.isomorphism import initial_map, refine

F = Fraction


def rand_union(cells):
    return normalize([(F(j, 32), F(j + 1, 32)) for j in sorted(set(cells))])


def cell_strategy():
    return st.lists(st.integers(0, 31), min_size=1, max_size=10)


def probe_strategy():
    return st.lists(cell_strategy(), min_size=1, max_size=4)


# -- construction and evaluation ---------------------------------------------------


def test_initial_map_sends_set_to_prefix():
    c = iu("[1/4,1/2) u [3/4,1)")
    phi = initial_map(c)
    assert phi.stage == 1
    assert phi.image(c) == iu("[0,1/2)")
    assert phi.apply(F(1, 4)) == 0
    assert phi.apply(F(3, 4)) == F(1, 4)
    assert phi.apply(F(0)) == F(1, 2)


def test_refine_orders_inside_before_outside():
    phi = initial_map(iu("[1/2,1)"))
    phi2 = refine(phi, iu("[3/4,1)"))
    assert phi2.stage == 2
    assert phi2.image(iu("[3/4,1)")) == iu("[0,1/4)")
    assert phi2.image(iu("[1/2,3/4)")) == iu("[1/4,1/2)")


def test_map_is_bijection_on_probe_points():
    phi = build_map([iu("[1/3,2/3)"), iu("[0,1/2)")])
    xs = [F(k, 24) for k in range(24)]
    ys = sorted(phi.apply(x) for x in xs)
    assert len(set(ys)) == 24


def test_invalid_partitions_rejected():
    with pytest.raises(ValueError):
        PiecewiseTranslation([], 1)
    from ergodic_vc.isomorphism import Piece

    with pytest.raises(ValueError):
        PiecewiseTranslation([Piece(iu("[0,1/2)"), F(0))], 1)
    with pytest.raises(ValueError):
        PiecewiseTranslation(
            [Piece(iu("[0,1/2)"), F(0)), Piece(iu("[1/2,1)"), F(1, 4))], 1
        )


def test_json_round_trip():
    phi = build_map([iu("[1/3,2/3)"), iu("[0,1/2)")])
    back = PiecewiseTranslation.from_json(phi.to_json())
    assert back.stage == phi.stage
    assert [(p.source, p.beta) for p in back.pieces] == [
        (p.source, p.beta) for p in phi.pieces
    ]


# -- exact measure preservation ------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(probe_strategy(), probe_strategy())
def test_preimage_preserves_measure_exactly(set_cells, probe_cells):
    sets = [rand_union(cells) for cells in set_cells]
    phi = build_map(sets)
    probes = [rand_union(cells) for cells in probe_cells]
    assert measure_preservation_defect(phi, probes) == 0


@settings(max_examples=40, deadline=None)
@given(probe_strategy(), cell_strategy())
def test_image_and_preimage_invert(set_cells, u_cells):
    sets = [rand_union(cells) for cells in set_cells]
    phi = build_map(sets)
    u = rand_union(u_cells)
    assert phi.preimage(phi.image(u)) == u
    assert phi.image(phi.preimage(u)) == u


@settings(max_examples=30, deadline=None)
@given(probe_strategy(), st.data())
def test_cell_aligned_images_are_blocks(set_cells, data):
    sets = [rand_union(cells) for cells in set_cells]
    phi = build_map(sets)
    picks = data.draw(
        st.lists(st.integers(0, len(phi.pieces) - 1), min_size=1, unique=True)
    )
    aligned = IntervalUnion()
    for i in picks:
        aligned = aligned.union(phi.pieces[i].source)
    image, blocks = image_of_union(phi, aligned)
    assert image.symmetric_difference(blocks).measure == 0
    assert image.measure == aligned.measure


def test_unaligned_set_rejected():
    phi = build_map([iu("[0,1/2)")])
    with pytest.raises(ValueError):
        image_of_union(phi, iu("[0,1/4)"))


# -- the doubling example ------------------------------------------------------------


def test_doubling_comb_structure():
    c1 = doubling_comb(1)
    assert c1 == iu("[0,1/4) u [1/2,3/4)")
    assert doubling_comb(2).measure == F(1, 2)
    with pytest.raises(ValueError):
        doubling_comb(0)


def test_doubling_map_matches_two_x_on_coarse_grid():
    phi = doubling_map(6)
    for k in range(0, 64, 3):
        x = F(k, 64)
        assert abs(phi.apply(x) - (2 * x) % 1) <= F(1, 32)


def test_doubling_deviation_frozen_stage8():
    assert doubling_map_deviation(8, probe_order=10) == F(1, 512)


def test_doubling_deviation_within_stated_rate():
    for n in (3, 5, 8):
        assert doubling_map_deviation(n, probe_order=10) <= F(1, 1 << (n - 1))
