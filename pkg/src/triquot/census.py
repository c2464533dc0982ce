"""Census of candidate pairs: distinct hyperbolic triples with equal product
(<= N), lcm, pairwise sum, gcd and abelianization, then batch resolution
through the distinguishing pipeline."""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .arith import SPF_BUDGET
from .certio import dumps
from .errors import ResourceLimitError
from .signature import Triple
from .witness import STAGE_NAMES, DistinguishConfig, Unresolved, coprime_flag, run_stages

log = logging.getLogger(__name__)

DEFAULT_MAX_PRODUCT = 12_000_000
FUNNEL_KEYS = ("triples", "pairs_equal_pairwise_sum", "pairs_equal_gcd", "pairs_equal_lcm",
               "candidate_pairs")
SUPPRESSION_PAIR = (Triple(17, 162, 459), Triple(27, 34, 1377))


@dataclass(frozen=True)
class CensusConfig:
    max_product: int = DEFAULT_MAX_PRODUCT
    even_filter: bool = True
    threads: int = 1
    shards: int | None = None        # default: 4 per thread, at least 1
    backend: str | None = None       # "numba", "numpy" or the process default
    spf_budget: int = SPF_BUDGET
    out_dir: str | None = None
    distinguish: DistinguishConfig = field(default_factory=DistinguishConfig)

    def __post_init__(self):
        if self.max_product < 8:
            raise ValueError("max_product must be >= 8")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def shard_bounds(self):
        hi = self.max_product + 1
        count = self.shards or 4 * self.threads
        count = max(1, min(count, hi - 8))
        edges = np.linspace(8, hi, count + 1).astype(np.int64)
        return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _scan(cfg: CensusConfig):
    backend = _kernels._resolve(cfg.backend)
    spf = None
    if backend == "numba":
        if cfg.max_product > cfg.spf_budget:
            raise ResourceLimitError(f"spf table for N = {cfg.max_product} exceeds budget "
                                     f"{cfg.spf_budget}")
        spf = _kernels.spf_sieve(cfg.max_product, backend=backend)
    bounds = cfg.shard_bounds()

    def work(i):
        lo, hi = bounds[i]
        try:
            return _kernels.scan_products(lo, hi, cfg.even_filter, spf=spf, backend=backend)
        except MemoryError as exc:
            raise ResourceLimitError(f"shard {i} [{lo},{hi}) ran out of memory",
                                     shard=i) from exc

    if cfg.threads == 1:
        results = [work(i) for i in range(len(bounds))]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, range(len(bounds))))
    pairs = _kernels.sort_pairs(np.concatenate([r[0] for r in results]))
    counters = np.sum([r[1] for r in results], axis=0)
    return pairs, counters


def enumerate_pairs(cfg: CensusConfig):
    """Yield (product, t1, t2) for every candidate pair, sorted."""
    pairs, _ = _scan(cfg)
    for row in pairs:
        n, r, s, t, u, v, w = (int(x) for x in row)
        yield n, Triple(r, s, t), Triple(u, v, w)


@dataclass
class PairRecord:
    product: int
    t1: Triple
    t2: Triple
    stage: str
    certificate: object
    coprime: bool
    s3: bool
    s4: bool
    s4_prime: bool
    s5: bool


@dataclass
class CensusReport:
    max_product: int
    even_filter: bool
    funnel: dict
    records: list
    stage_counts: dict
    flag_counts: dict
    suppression_only: list
    shared_entry_pairs: int
    multi_even_pairs: int
    multi_even_beyond_dihedral: int

    @property
    def candidate_pair_count(self):
        return len(self.records)

    @property
    def triple_count(self):
        return self.funnel["triples"]

    @property
    def unresolved(self):
        return self.stage_counts["unresolved"]

    def summary_lines(self):
        out = [f"max_product = {self.max_product}",
               f"even_filter = {'on' if self.even_filter else 'off'}"]
        out += [f"{k} = {self.funnel[k]}" for k in FUNNEL_KEYS]
        for i, name in enumerate(STAGE_NAMES):
            out.append(f"resolved_stage{i}_{name.replace('-', '_')} = {self.stage_counts[name]}")
        out.append(f"unresolved = {self.stage_counts['unresolved']}")
        out += [f"{k} = {v}" for k, v in self.flag_counts.items()]
        out.append(f"suppression_only = {len(self.suppression_only)}")
        out.append("suppression_only_pairs = "
                   + ";".join(f"{a}|{b}" for a, b in self.suppression_only))
        out.append(f"shared_entry_pairs = {self.shared_entry_pairs}")
        out.append(f"multi_even_pairs = {self.multi_even_pairs}")
        out.append(f"multi_even_beyond_dihedral = {self.multi_even_beyond_dihedral}")
        return out

    def summary_text(self):
        return "\n".join(self.summary_lines()) + "\n"


PAIRS_HEADER = ("product", "triple1", "triple2", "stage", "certificate", "coprime", "s3", "s4", "s5")


def _fmt(tr: Triple):
    return f"{tr.r},{tr.s},{tr.t}"


def resolve_pair(n, t1, t2, dcfg):
    results = run_stages(t1, t2, dcfg, first_only=False)
    found = {name: cert for name, cert, _ in results if cert is not None}
    stage = next((name for name, _, _ in results if name in found), "unresolved")
    if stage == "unresolved":
        cert = Unresolved(tuple((name, note) for name, _, note in results))
    else:
        cert = found[stage]
    s4 = "suppression" in found
    return PairRecord(n, t1, t2, stage, cert, coprime_flag(t1, t2), "l2-split" in found, s4,
                      s4 and not found["suppression"].extended_scope, "direct-product" in found)


def resolve_all(cfg: CensusConfig, progress=None) -> CensusReport:
    pairs, counters = _scan(cfg)
    funnel = dict(zip(FUNNEL_KEYS, (int(c) for c in counters)))
    records = []
    shared = multi_even = multi_even_late = 0
    for k, row in enumerate(pairs):
        n, r, s, t, u, v, w = (int(x) for x in row)
        t1, t2 = Triple(r, s, t), Triple(u, v, w)
        if set(t1.as_tuple()) & set(t2.as_tuple()):
            shared += 1
        evens = [sum(1 for x in tr if x % 2 == 0) for tr in (t1, t2)]
        if cfg.even_filter and max(evens) > 1:
            raise AssertionError(f"even filter violated by {t1}, {t2}")
        try:
            rec = resolve_pair(n, t1, t2, cfg.distinguish)
        except Exception as exc:  # keep the run going; record the failure
            log.error("pair %s %s failed: %s", t1, t2, exc)
            rec = PairRecord(n, t1, t2, "unresolved", Unresolved((("error", str(exc)),)),
                             coprime_flag(t1, t2), False, False, False, False)
        if max(evens) > 1:
            multi_even += 1
            if rec.stage == "unresolved" or STAGE_NAMES.index(rec.stage) > 2:
                multi_even_late += 1
        records.append(rec)
        if progress is not None:
            progress(k + 1, len(pairs))
    stage_counts = {name: 0 for name in STAGE_NAMES}
    stage_counts["unresolved"] = 0
    for rec in records:
        stage_counts[rec.stage] += 1
    flag_counts = {
        "applicable_stage3_l2_split": sum(r.s3 for r in records),
        "applicable_stage4_suppression": sum(r.s4 for r in records),
        "applicable_stage4_prime_q": sum(r.s4_prime for r in records),
        "applicable_stage5_direct_product": sum(r.s5 for r in records),
        "coprime_flag": sum(r.coprime and r.s3 for r in records),
        "coprime_any": sum(r.coprime for r in records),
    }
    only = [(r.t1, r.t2) for r in records if r.s4 and not r.s3 and not r.s5]
    report = CensusReport(cfg.max_product, cfg.even_filter, funnel, records, stage_counts,
                          flag_counts, only, shared, multi_even, multi_even_late)
    if cfg.out_dir:
        write_outputs(report, cfg.out_dir)
    return report


def write_outputs(report: CensusReport, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "pairs.tsv"), "w", newline="\n") as fh:
        fh.write("\t".join(PAIRS_HEADER) + "\n")
        for i, r in enumerate(report.records):
            fh.write("\t".join([str(r.product), _fmt(r.t1), _fmt(r.t2), r.stage, f"cert:{i}",
                                str(int(r.coprime)), str(int(r.s3)), str(int(r.s4)),
                                str(int(r.s5))]) + "\n")
    with open(os.path.join(out_dir, "certificates.jsonl"), "w", newline="\n") as fh:
        for r in report.records:
            fh.write(dumps(r.certificate, r.t1, r.t2, compact=True) + "\n")
    with open(os.path.join(out_dir, "summary.txt"), "w", newline="\n") as fh:
        fh.write(report.summary_text())


def naive_pairs(max_product: int, even_filter: bool = True):
    """Reference enumerator: plain triple loop, no sieve, no sharding."""
    by_product = {}
    r = 2
    while r * r * r <= max_product:
        s = r
        while r * s * s <= max_product:
            t = s
            while r * s * t <= max_product:
                if r * s + r * t + s * t < r * s * t:
                    evens = (r % 2 == 0) + (s % 2 == 0) + (t % 2 == 0)
                    if not even_filter or evens <= 1:
                        by_product.setdefault(r * s * t, []).append((r, s, t))
                t += 1
            s += 1
        r += 1
    out = []
    for n in sorted(by_product):
        trs = sorted(by_product[n])
        for i in range(len(trs)):
            for j in range(i + 1, len(trs)):
                a, b = trs[i], trs[j]
                if (a[0] * a[1] + a[0] * a[2] + a[1] * a[2] == b[0] * b[1] + b[0] * b[2] + b[1] * b[2]
                        and math.gcd(*a) == math.gcd(*b) and math.lcm(*a) == math.lcm(*b)
                        and _ab_e(a) == _ab_e(b)):
                    out.append((n,) + a + b)
    return out


def _ab_e(x):
    r, s, t = x
    return math.lcm(math.gcd(r, s), math.gcd(r, t), math.gcd(s, t))
