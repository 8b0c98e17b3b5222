"""Design verification against independent recounts and known controls."""

from collections import Counter

import numpy as np
import pytest

from qsteiner.exact_cover import CoverProblem, SolveConfig, solve
from qsteiner.groups import orbit_partition, singer_normalizer
from qsteiner.subspace import Subspace, enumerate_subspaces, gaussian_binomial, subspaces_of
from qsteiner.verify import (
    BlockSet,
    derived_steiner_sample_check,
    expand_orbits,
    format_report,
    min_distance_certificate,
    packing_bound,
    verify_design,
)


def recount_histogram(blocks, t):
    """Coverage histogram by plain dict counting over enumerated t-subspaces."""
    counts = Counter()
    for i in range(blocks.num_blocks):
        for sub in subspaces_of(blocks.subspace(i), t):
            counts[sub.rows] += 1
    hist = Counter(counts.values())
    missed = gaussian_binomial(blocks.n, t, 2) - len(counts)
    if missed:
        hist[0] = missed
    return dict(hist)


def make_spread():
    subs = list(enumerate_subspaces(4, 2))
    opts = [(i, sorted(v for v in s.vectors() if v)) for i, s in enumerate(subs)]
    prob = CoverProblem(item_ids=list(range(1, 16)), options=opts)
    sols, _ = solve(prob, SolveConfig(max_solutions=1))
    return BlockSet.from_subspaces([subs[i] for i in sols[0].labels])


def test_blockset_accessors_and_round_trip(tmp_path):
    bs = make_spread()
    assert bs.num_blocks == 5 and bs.n == 4 and bs.k == 2
    subs = [bs.subspace(i) for i in range(bs.num_blocks)]
    assert all(s.dim == 2 and s.ambient == 4 for s in subs)
    path = tmp_path / "blocks.txt"
    bs.save(str(path))
    loaded = BlockSet.load(str(path))
    assert loaded.n == bs.n and loaded.k == bs.k
    assert np.array_equal(np.sort(loaded.blocks, axis=0), np.sort(bs.blocks, axis=0))


def test_blockset_rejects_malformed_rows():
    # rows not in reduced echelon form
    with pytest.raises(ValueError):
        BlockSet(4, 2, np.array([[3, 2]], dtype=np.uint64))
    # dependent rows (rank below k)
    with pytest.raises(ValueError):
        BlockSet(4, 2, np.array([[1, 0]], dtype=np.uint64))
    # duplicate blocks
    row = [[1, 2], [1, 2]]
    with pytest.raises(ValueError):
        BlockSet(4, 2, np.array(row, dtype=np.uint64))


def test_expand_orbits_counts_and_rejects_mixed_dims():
    group = singer_normalizer(6)
    table = orbit_partition(group, 3)
    reps = table.reps[: min(3, table.num_orbits)]
    blocks, lengths = expand_orbits(group, reps)
    assert blocks.num_blocks == sum(lengths)
    assert len(lengths) == len(reps)
    seen = {blocks.subspace(i).key for i in range(blocks.num_blocks)}
    assert len(seen) == blocks.num_blocks
    t2 = orbit_partition(group, 2)
    with pytest.raises(ValueError):
        expand_orbits(group, [table.reps[0], t2.reps[0]])


def test_spread_verifies_as_1_design():
    bs = make_spread()
    report = verify_design(bs, 1, 1)
    assert report.ok and report.histogram == {1: 15}
    assert report.total_t_subspaces == 15
    assert report.violations_total == 0
    text = format_report(report)
    assert "DESIGN n=4 k=2 t=1 lambda=1" in text
    assert "VERDICT pass" in text


def test_deleted_block_breaks_the_design():
    bs = make_spread()
    short = BlockSet(4, 2, bs.blocks[:-1].copy())
    report = verify_design(short, 1, 1)
    assert not report.ok
    assert report.histogram == {1: 12, 0: 3}
    assert report.violations_total == 3
    assert all(count == 0 for _, count in report.violations_shown)
    assert "VERDICT fail" in format_report(report)


def test_histogram_matches_dict_recount():
    group = singer_normalizer(5)
    table = orbit_partition(group, 2)
    reps = list(table.reps)
    blocks, _ = expand_orbits(group, reps)
    for t in (1, 2):
        report = verify_design(blocks, t, 1)
        assert report.histogram == recount_histogram(blocks, t)
    # a deliberately unbalanced set exercises the violation path
    some = BlockSet(5, 2, blocks.blocks[:7].copy())
    for t in (1, 2):
        report = verify_design(some, t, 1)
        assert report.histogram == recount_histogram(some, t)
        assert not report.ok


def test_verify_rejects_bad_parameters():
    bs = make_spread()
    with pytest.raises(ValueError):
        verify_design(bs, 3, 1)  # t above k
    with pytest.raises(ValueError):
        verify_design(bs, 0, 1)
    with pytest.raises(ValueError):
        verify_design(bs, 1, 0)


def test_packing_bound_values():
    assert packing_bound(13, 3, 2) == 1597245
    assert packing_bound(4, 2, 1) == 5
    assert packing_bound(7, 3, 2) == 381
    with pytest.raises(ValueError):
        packing_bound(5, 3, 2)


def test_min_distance_certificate_on_spread():
    bs = make_spread()
    report = verify_design(bs, 1, 1)
    assert min_distance_certificate(bs, report, samples=2000, seed=1) == 4


def test_certificates_require_a_passing_report():
    bs = make_spread()
    short = BlockSet(4, 2, bs.blocks[:-1].copy())
    bad = verify_design(short, 1, 1)
    with pytest.raises(ValueError):
        min_distance_certificate(short, bad, samples=100)
    good = verify_design(bs, 1, 1)
    with pytest.raises(ValueError):
        derived_steiner_sample_check(bs, good, samples=10)


def test_paper_design_verifies(paper_blocks, paper_report):
    assert paper_blocks.num_blocks == 1597245
    assert paper_report.ok
    assert paper_report.histogram == {1: 11180715}
    assert paper_report.total_t_subspaces == 11180715


def test_deleting_one_block_uncovers_exactly_seven_pairs(paper_blocks):
    short = BlockSet(13, 3, paper_blocks.blocks[:-1].copy())
    report = verify_design(short, 2, 1)
    assert not report.ok
    assert report.histogram == {1: 11180708, 0: 7}
    assert report.violations_total == 7


def test_paper_design_certificates(paper_blocks, paper_report):
    assert min_distance_certificate(paper_blocks, paper_report, samples=20000, seed=3) == 4
    out = derived_steiner_sample_check(paper_blocks, paper_report, samples=2000, seed=3)
    assert out["failures"] == 0 and out["examples"] == []
    assert out["tested"] > 0
