import filecmp
import os

import numpy as np
import pytest

from conftest import GOLDEN
from oracles import naive_census
from triquot.census import (CensusConfig, PAIRS_HEADER, enumerate_pairs, naive_pairs, resolve_all)
from triquot.signature import Triple, invariant_profile

GOLDEN_DIR = os.path.join(GOLDEN, "census_1e5")


def _rows(cfg):
    return [(n,) + a.as_tuple() + b.as_tuple() for n, a, b in enumerate_pairs(cfg)]


def test_config_validation():
    with pytest.raises(ValueError):
        CensusConfig(max_product=7)
    with pytest.raises(ValueError):
        CensusConfig(threads=0)
    bounds = CensusConfig(max_product=1000, shards=7).shard_bounds()
    assert bounds[0][0] == 8 and bounds[-1][1] == 1001
    assert all(a[1] == b[0] for a, b in zip(bounds, bounds[1:]))


def test_worked_pairs_present():
    rows = _rows(CensusConfig(max_product=22815))
    assert (22815, 9, 39, 65, 13, 15, 117) in rows
    rows = _rows(CensusConfig(max_product=39690))
    assert (39690, 15, 42, 63, 21, 21, 90) in rows
    assert 13 * 15 * 117 == 22815 and 15 * 42 * 63 == 39690


def test_small_census_empty():
    assert _rows(CensusConfig(max_product=1000)) == []
    report = resolve_all(CensusConfig(max_product=1000))
    assert report.candidate_pair_count == 0 and report.unresolved == 0


@pytest.mark.parametrize("n", [2000, 30000])
def test_matches_naive_small(n):
    assert _rows(CensusConfig(max_product=n)) == naive_census(n) == naive_pairs(n)
    assert (_rows(CensusConfig(max_product=n, even_filter=False))
            == naive_census(n, even_filter=False) == naive_pairs(n, even_filter=False))


def test_pair_conditions_hold():
    for n, a, b in enumerate_pairs(CensusConfig(max_product=10**5)):
        pa, pb = invariant_profile(a), invariant_profile(b)
        assert a < b and a != b and pa.product == pb.product == n
        assert pa.first_difference(pb) is None
        assert pa.even_count <= 1 and pb.even_count <= 1


def test_even_filter_symmetric():
    # ab_e is even exactly when two entries are even, so the filter cannot split a pair
    for _, a, b in enumerate_pairs(CensusConfig(max_product=50000, even_filter=False)):
        ea = sum(x % 2 == 0 for x in a) > 1
        eb = sum(x % 2 == 0 for x in b) > 1
        assert ea == eb


@pytest.mark.parametrize("shards", [1, 3, 16])
def test_shard_count_invariance(shards):
    base = _rows(CensusConfig(max_product=60000, shards=1))
    assert _rows(CensusConfig(max_product=60000, shards=shards, threads=min(shards, 4))) == base


def test_backends_agree():
    pytest.importorskip("numba")
    a = _rows(CensusConfig(max_product=60000, backend="numba"))
    b = _rows(CensusConfig(max_product=60000, backend="numpy"))
    assert a == b


def test_shared_entry_empty_to_1e6():
    for _, a, b in enumerate_pairs(CensusConfig(max_product=10**6)):
        assert not set(a.as_tuple()) & set(b.as_tuple())


def test_golden_output(tmp_path):
    report = resolve_all(CensusConfig(max_product=10**5, out_dir=str(tmp_path)))
    for name in ("pairs.tsv", "certificates.jsonl", "summary.txt"):
        assert filecmp.cmp(tmp_path / name, os.path.join(GOLDEN_DIR, name), shallow=False), name
    assert report.candidate_pair_count == 95
    assert sum(report.stage_counts.values()) == report.candidate_pair_count
    assert report.unresolved == 0


def test_pairs_file_format():
    lines = open(os.path.join(GOLDEN_DIR, "pairs.tsv")).read().splitlines()
    assert lines[0].split("\t") == list(PAIRS_HEADER)
    for i, line in enumerate(lines[1:]):
        f = line.split("\t")
        assert len(f) == len(PAIRS_HEADER)
        assert f[4] == f"cert:{i}"
        Triple.parse(f[1]), Triple.parse(f[2])
        assert int(f[0]) == np.prod([int(x) for x in f[1].split(",")])


def test_report_flags():
    report = resolve_all(CensusConfig(max_product=10**5))
    for rec in report.records:
        assert rec.stage in report.stage_counts
        if rec.s4_prime:
            assert rec.s4
    fc = report.flag_counts
    assert fc["applicable_stage4_prime_q"] <= fc["applicable_stage4_suppression"]
    assert report.shared_entry_pairs == 0 and report.multi_even_pairs == 0
