from dataclasses import replace
from itertools import combinations

import pytest

from batchcodes.designs import (
    AFFINE,
    build_affine_plane,
    build_resolvable_td,
    format_design,
    parse_design_blocks,
    validate_design,
)
from batchcodes.errors import BlockSizeTooLarge, NotPrimePower


def test_td_3_4_shape():
    d = build_resolvable_td(3, 4)
    assert d.num_points == 12
    assert len(d.groups) == 3
    assert len(d.blocks) == 16
    assert len(d.parallel_classes) == 4
    assert all(len(c) == 4 for c in d.parallel_classes)
    assert validate_design(d).ok


def test_td_2_3_pairs():
    d = build_resolvable_td(2, 3)
    assert len(d.blocks) == 9
    for x in range(3):
        for y in range(3, 6):
            assert sum(1 for b in d.blocks if x in b and y in b) == 1


@pytest.mark.parametrize("ell,q", [(2, 3), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9)])
def test_validate_generated_td(ell, q):
    report = validate_design(build_resolvable_td(ell, q))
    assert report.ok, report.violations


def test_td_block_formula():
    # block (a, b) meets group i at a*i + b; with a = 0 every block is horizontal
    d = build_resolvable_td(3, 5)
    assert d.blocks[0] == (0, 5, 10)
    assert d.blocks[1] == (1, 6, 11)
    # a = 1, b = 0: elements 0, 1, 2 in groups 0, 1, 2
    assert d.blocks[5] == (0, 6, 12)


def test_affine_plane_shapes():
    a3 = build_affine_plane(3)
    assert a3.num_points == 9
    assert len(a3.blocks) == 12
    assert all(len(b) == 3 for b in a3.blocks)
    assert len(a3.parallel_classes) == 4
    assert validate_design(a3).ok

    a2 = build_affine_plane(2)
    assert (a2.num_points, len(a2.blocks), len(a2.parallel_classes)) == (4, 6, 3)
    assert validate_design(a2).ok


def test_affine_4_pairs_exhaustive():
    d = build_affine_plane(4)
    for x, y in combinations(range(16), 2):
        assert sum(1 for b in d.blocks if x in b and y in b) == 1


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_validate_affine(q):
    assert validate_design(build_affine_plane(q)).ok


def test_swap_breaks_pair_coverage():
    d = build_resolvable_td(3, 4)
    cls = d.parallel_classes[1]
    b0, b1 = (list(d.blocks[i]) for i in cls[:2])
    # swap the group-2 points of two blocks in one class
    b0[2], b1[2] = b1[2], b0[2]
    blocks = list(d.blocks)
    blocks[cls[0]], blocks[cls[1]] = tuple(b0), tuple(b1)
    report = validate_design(replace(d, blocks=tuple(blocks)))
    assert not report.ok
    assert "pair_coverage" in report.properties()
    assert any("expected exactly one" in v.detail for v in report.violations)


def test_dropped_block_is_reported():
    d = build_affine_plane(3)
    report = validate_design(replace(d, blocks=d.blocks[:-1]))
    assert {"block_count", "pair_coverage", "replication", "resolution"} <= report.properties()


def test_td_errors():
    with pytest.raises(BlockSizeTooLarge):
        build_resolvable_td(5, 4)
    with pytest.raises(NotPrimePower):
        build_resolvable_td(3, 6)
    with pytest.raises(NotPrimePower):
        build_affine_plane(10)


@pytest.mark.parametrize("ell,q", [(3, 4), (4, 5)])
def test_each_point_in_q_blocks(ell, q):
    d = build_resolvable_td(ell, q)
    for x in range(d.num_points):
        assert sum(1 for b in d.blocks if x in b) == q


def test_deterministic():
    assert build_resolvable_td(4, 7) == build_resolvable_td(4, 7)
    assert build_affine_plane(8) == build_affine_plane(8)


def test_export_round_trip():
    d = build_resolvable_td(3, 4)
    text = format_design(d)
    assert text.splitlines()[0] == "TD 3 4"
    kind, params, blocks = parse_design_blocks(text)
    assert params == (3, 4)
    assert tuple(blocks) == d.blocks

    a = build_affine_plane(3)
    kind, params, blocks = parse_design_blocks(format_design(a))
    assert kind == AFFINE and params == (3,)
    assert tuple(blocks) == a.blocks
