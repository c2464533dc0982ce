"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a one-line PASS/FAIL verdict that is printed in the
"acceptance criteria" section at the end of the pytest run.
"""
import math
import os
import random
import time
from functools import lru_cache

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import abelianization_snf, l2_valid, naive_census, set_partitions
from triquot.census import SUPPRESSION_PAIR, CensusConfig, resolve_all
from triquot.groups import Dihedral, Psl2, realize
from triquot.l2set import l2_set
from triquot.oracle import (OracleConfig, dihedral_quotient_brute, dihedral_quotient_test,
                            is_quotient, is_smooth_quotient)
from triquot.psl2 import macbeath_generated
from triquot.signature import Triple, abelianization, is_exceptional, is_hyperbolic
from triquot.witness import DistinguishConfig, distinguish, verify

FROZEN_COPRIME_COUNT = 1733
THREADS = 8


def record(k, ok, detail):
    ACCEPTANCE_LINES[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[k])
    assert ok, ACCEPTANCE_LINES[k]


@pytest.fixture(scope="module")
def full_census():
    start = time.perf_counter()
    report = resolve_all(CensusConfig(max_product=12_000_000, threads=THREADS))
    return report, time.perf_counter() - start


def test_criterion_01_census_count(full_census):
    report, elapsed = full_census
    funnel = ", ".join(f"{k}={v}" for k, v in report.funnel.items())
    stages = ", ".join(f"{k}={v}" for k, v in report.stage_counts.items())
    ok = report.candidate_pair_count == 3581 and elapsed <= 15 * 60
    record(1, ok, f"{report.candidate_pair_count} pairs (want 3581) in {elapsed:.0f} s; "
                  f"filters: {funnel}; stages: {stages}")


def test_criterion_02_unresolved(full_census):
    report, _ = full_census
    record(2, report.unresolved == 0, f"unresolved = {report.unresolved}")


def test_criterion_03_suppression_only(full_census):
    report, _ = full_census
    only = [(str(a), str(b)) for a, b in report.suppression_only]
    ok = report.suppression_only == [SUPPRESSION_PAIR]
    record(3, ok, f"suppression-only pairs: {only}")


def test_criterion_04_coprime_count(full_census):
    report, _ = full_census
    n = report.flag_counts["coprime_flag"]
    ok = 1600 <= n <= 2000 and n == FROZEN_COPRIME_COUNT
    record(4, ok, f"coprime flag count {n} (band [1600, 2000], frozen {FROZEN_COPRIME_COUNT})")


def test_criterion_05_worked_example():
    start = time.perf_counter()
    t1, t2 = Triple(13, 15, 117), Triple(9, 39, 65)
    cfg = DistinguishConfig(oracle=OracleConfig(max_group_order=10**4, search_budget=None))
    cert = distinguish(t1, t2, cfg)
    group = cert.group
    order = realize(group).order
    on_quotient_side = bool(is_quotient(group, (t1, t2)[cert.quotient_side], cfg.oracle))
    on_other_side = bool(is_quotient(group, (t1, t2)[1 - cert.quotient_side], cfg.oracle))
    checked = bool(verify(cert, t1, t2, cfg))
    elapsed = time.perf_counter() - start
    ok = (group == Psl2(19) and order == 3420 and on_quotient_side and not on_other_side
          and (t1, t2)[cert.quotient_side] == t2 and checked and elapsed <= 30)
    record(5, ok, f"{cert.kind} with {group.label()} (order {order}): quotient of {t2} "
                  f"{on_quotient_side}, of {t1} {on_other_side}; verify {checked}; "
                  f"{elapsed:.1f} s")


def test_criterion_06_macbeath():
    start = time.perf_counter()
    cfg = OracleConfig(max_group_order=15000, search_budget=None)
    triples = [Triple(r, s, t) for r in range(2, 21) for s in range(r, 21) for t in range(s, 21)]
    triples = [t for t in triples if is_hyperbolic(t) and not is_exceptional(t)]
    disagreements, checks = [], 0
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31):
        group = realize(Psl2(p))
        for tr in triples:
            claim = macbeath_generated(p, tr)
            # raw search over the realized group, without symbolic pruning
            raw = group.find_pair(*tr, exact=True) is not None
            oracle = bool(is_smooth_quotient(Psl2(p), tr, cfg))
            checks += 1
            if not claim == raw == oracle:
                disagreements.append((p, str(tr)))
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed <= 600
    record(6, ok, f"{checks} (p, triple) checks, {len(disagreements)} disagreements "
                  f"{disagreements[:5]}; {elapsed:.1f} s")


def test_criterion_07_abelianization():
    rng = random.Random(2024)
    bad = []
    for _ in range(10**4):
        r, s, t = (rng.randint(2, 50) for _ in range(3))
        if abelianization(Triple(r, s, t)) != abelianization_snf(r, s, t):
            bad.append((r, s, t))
    record(7, not bad, f"10000 random triples, {len(bad)} disagreements with the SNF oracle")


@lru_cache(maxsize=None)
def _valid_partitions(k, masks):
    """Set partitions of k primes (as tuples of blocks of prime indices) in
    which every entry's prime support lies inside a single block."""
    out = []
    for part in set_partitions(range(k)):
        blocks = [sum(1 << i for i in b) for b in part]
        if all(any(m & ~b == 0 for b in blocks) for m in masks):
            out.append(tuple(sorted(tuple(sorted(b)) for b in part)))
    return tuple(out)


def test_criterion_08_l2_properties():
    from oracles import trial_division_factor
    fact_cache = {}
    prop_fail, uniq_fail, uniq_checked, total = [], [], 0, 0
    for r in range(2, 201):
        for s in range(r, 201):
            for t in range(s, 201):
                total += 1
                members = l2_set(Triple(r, s, t)).members
                if not l2_valid(members, (r, s, t)):
                    prop_fail.append((r, s, t))
                    continue
                lcm = math.lcm(r, s, t)
                if lcm > 5040:
                    continue
                if lcm not in fact_cache:
                    fact_cache[lcm] = trial_division_factor(lcm)
                fact = fact_cache[lcm]
                masks = tuple(sorted(sum(1 << i for i, (p, _) in enumerate(fact) if x % p == 0)
                                     for x in (r, s, t)))
                cands = []
                for part in _valid_partitions(len(fact), masks):
                    cands.append(sorted(math.prod(fact[i][0] ** fact[i][1] for i in b)
                                        for b in part))
                finest = [c for c in cands if len(c) == max(len(x) for x in cands)]
                coarser_ok = all(all(any(c % m == 0 for c in other) for m in members)
                                 for other in cands)
                uniq_checked += 1
                if finest != [list(members)] or not coarser_ok:
                    uniq_fail.append((r, s, t))
    ok = not prop_fail and not uniq_fail
    record(8, ok, f"{total} triples: {len(prop_fail)} property failures; uniqueness "
                  f"(finest valid partition) checked on {uniq_checked} with lcm <= 5040, "
                  f"{len(uniq_fail)} failures")


def test_criterion_09_dihedral():
    bad, total = [], 0
    for m in range(3, 13):
        for r in range(2, 25):
            for s in range(r, 25):
                for t in range(s, 25):
                    tr = Triple(r, s, t)
                    total += 1
                    if dihedral_quotient_test(tr, m) != dihedral_quotient_brute(tr, m):
                        bad.append((m, str(tr)))
    record(9, not bad, f"{total} (m, triple) cases, {len(bad)} disagreements")


def test_criterion_10_determinism(tmp_path):
    outs = {}
    for threads in (1, 8):
        out = tmp_path / f"t{threads}"
        resolve_all(CensusConfig(max_product=10**5, threads=threads, out_dir=str(out)))
        outs[threads] = {name: (out / name).read_bytes()
                         for name in ("pairs.tsv", "certificates.jsonl", "summary.txt")}
    identical = outs[1] == outs[8]
    lines = outs[1]["pairs.tsv"].decode().splitlines()[1:]
    ours = [(int(f[0]),) + tuple(int(x) for x in f[1].split(",")) + tuple(
        int(x) for x in f[2].split(",")) for f in (line.split("\t") for line in lines)]
    naive = naive_census(10**5)
    ok = identical and ours == naive
    record(10, ok, f"1 vs 8 threads byte-identical: {identical}; {len(ours)} pairs, naive "
                   f"enumerator {len(naive)}, equal: {ours == naive}")
