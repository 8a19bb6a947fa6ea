"""Shatter coefficients, growth bounds, dimension search, joins, witnesses."""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ergodic_vc import (
    SetFamily,
    dyadic_class,
    full_join_witness,
    is_shattered,
    iu,
    join,
    k_interval_class,
    normalize,
    run_pattern_class,
    sauer_bound,
    shatter_coefficient,
    subset_indexed_sets,
    trace_table,
    union_family,
    vc_dimension,
)
from ergodic_vc.errors import ResourceLimitError
from ergodic_vc.oracles import brute_shatter_coefficient, brute_vc_dimension

F = Fraction


def grid(order):
    den = 1 << (order + 1)
    return [F(2 * i + 1, den) for i in range(den // 2)]


def list_family(members):
    members = list(members)
    return SetFamily("listed", lambda i: members[i], size=len(members))


def random_union(draw_fixed, cells=4):
    picks = sorted(set(draw_fixed))
    return normalize([(F(j, 64), F(j + 1, 64)) for j in picks])


# -- shatter coefficient and the binomial-sum bound --------------------------------


def test_shatter_matches_brute_on_dyadic():
    fam = dyadic_class(3)
    pts = grid(4)
    sets = [fam.member(i) for i in range(fam.size)]
    assert shatter_coefficient(pts, fam, fam.size) == brute_shatter_coefficient(pts, sets)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 63), min_size=1, max_size=8, unique=True),
    st.lists(st.lists(st.integers(0, 63), min_size=1, max_size=6), min_size=1, max_size=8),
)
def test_shatter_and_dimension_match_brute(point_cells, member_cells):
    pts = [F(2 * j + 1, 128) for j in sorted(point_cells)]
    sets = [random_union(cells) for cells in member_cells]
    fam = list_family(sets)
    s = shatter_coefficient(pts, fam, fam.size)
    assert s == brute_shatter_coefficient(pts, sets)
    res = vc_dimension(fam, fam.size, pts, max_k=len(pts))
    assert res.dim == brute_vc_dimension(pts, sets, len(pts))
    bound = sauer_bound(len(pts), res.dim).exact
    assert s <= bound


def test_sauer_bound_values():
    assert sauer_bound(4, 0).exact == 1
    assert sauer_bound(4, 2).exact == 1 + 4 + 6
    assert sauer_bound(100, 2).exact == 1 + 100 + comb(100, 2)
    assert sauer_bound(100, 2).poly == 101 ** 2
    with pytest.raises(ValueError):
        sauer_bound(3, 5)


@given(st.integers(0, 12).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m))))
def test_sauer_bound_binomial_sum(mv):
    m, v = mv
    assert sauer_bound(m, v).exact == sum(comb(m, j) for j in range(v + 1))
    assert sauer_bound(m, v).exact <= sauer_bound(m, v).poly or v == 0


def test_trace_table_rows_are_distinct_subsets():
    fam = dyadic_class(2)
    pts = grid(3)
    table = trace_table(pts, fam, fam.size)
    assert len(table.rows) == fam.size
    assert len(table.distinct_rows()) == shatter_coefficient(pts, fam, fam.size)


# -- known dimensions ----------------------------------------------------------


def test_dyadic_dimension_two():
    fam = dyadic_class(4)
    res = vc_dimension(fam, fam.size, grid(5), max_k=4)
    assert res.dim == 2
    assert not res.at_cap
    assert is_shattered(res.witness, [fam.member(i) for i in range(fam.size)])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_k_interval_dimension_is_2k(k):
    fam = k_interval_class(k, 3)
    pts = [F(2 * i + 1, 32) for i in range(16)]
    res = vc_dimension(fam, fam.size, pts, max_k=2 * k + 2)
    assert res.dim == 2 * k


def test_run_pattern_dimension():
    pts = [F(2 * i + 1, 32) for i in range(16)]
    fam = run_pattern_class(2, pts)
    res = vc_dimension(fam, fam.size, pts, max_k=6)
    assert res.dim == 4


def test_union_with_small_family_adds_at_most_log_size():
    base = dyadic_class(3)
    extra = list_family([iu("[0,1/7)"), iu("[1/7,2/7) u [3/7,5/7)"), iu("[2/3,1)")])
    fam = union_family("both", base, extra)
    pts = grid(5)
    d_base = vc_dimension(base, base.size, pts, max_k=4).dim
    d_union = vc_dimension(fam, fam.size, pts, max_k=d_base + 4).dim
    assert d_base <= d_union <= d_base + 3


# -- joins and witnesses ---------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_subset_indexed_join_is_full_and_witnessed(k):
    sets = subset_indexed_sets(k)
    assert len(sets) == 1 << k
    jp = join(sets)
    assert jp.is_full
    assert len(jp.cells) == 1 << (1 << k)
    witness = full_join_witness(jp)
    assert len(witness) == k
    assert is_shattered(witness, sets)
    fam = list_family(sets)
    assert shatter_coefficient(witness, fam, fam.size) == 1 << k


def test_frozen_k4_witness():
    jp = join(subset_indexed_sets(4))
    witness = full_join_witness(jp)
    assert [str(x) for x in witness] == [
        "87381/131072",
        "104857/131072",
        "123361/131072",
        "130561/131072",
    ]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 31), min_size=1, max_size=5), min_size=1, max_size=5))
def test_join_cells_partition_the_interval(member_cells):
    sets = [
        normalize([(F(j, 32), F(j + 1, 32)) for j in sorted(set(cells))])
        for cells in member_cells
    ]
    jp = join(sets)
    total = sum((c.measure for c in jp.cells.values()), F(0))
    assert total == 1
    cells = list(jp.cells.values())
    for i, a in enumerate(cells):
        for b in cells[i + 1 :]:
            assert a.intersect(b).is_empty
    for mask, cell in jp.cells.items():
        probe = cell.parts[0]
        x = (probe.lo + probe.hi) / 2
        for bit, s in enumerate(sets):
            assert ((mask >> bit) & 1) == (1 if x in s else 0)


def test_join_set_count_cap():
    sets = [iu(f"[{j}/64,{j + 1}/64)") for j in range(21)]
    with pytest.raises(ResourceLimitError):
        join(sets)


def test_non_full_join_rejected_for_witness():
    sets = [iu("[0,1/2)"), iu("[0,1/2)")]
    jp = join(sets)
    assert not jp.is_full
    with pytest.raises(ValueError):
        full_join_witness(jp)
