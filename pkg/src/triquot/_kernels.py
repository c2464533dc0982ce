"""Hot loops: the smallest-prime-factor sieve and the census product scan.

Each kernel exists twice: a numba version (``*_nb``) and a pure-numpy
version (``*_np``).  The public wrappers pick one according to
``backend`` ("numba", "numpy" or None for the process default).

Census scan contract (both backends)
------------------------------------
For every product n in [lo, hi) enumerate the sorted triples r <= s <= t,
r >= 2, with rst = n that are hyperbolic (rs + rt + st < rst) and, when
``even_filter`` is set, have at most one even entry.  Two distinct triples
of the same product form a candidate pair when they also agree on the
pairwise sum, gcd, lcm and on lcm(gcd(r,s), gcd(r,t), gcd(s,t)).

Returns ``(pairs, counters)`` where ``pairs`` is an int64 array of rows
``(n, r, s, t, u, v, w)`` with (r,s,t) < (u,v,w) lexicographically, sorted,
and ``counters`` is int64[5]:

    0  triples kept
    1  same-product pairs with equal pairwise sum
    2  ... and equal gcd
    3  ... and equal lcm
    4  ... and equal ab_e  (== number of candidate pairs)
"""
import numpy as np

from ._accel import HAVE_NUMBA, default_backend, njit

N_COUNTERS = 5


def _resolve(backend):
    backend = backend or default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


# ----------------------------------------------------------------------------
# smallest prime factor sieve

@njit(cache=True)
def _spf_sieve_nb(limit):
    spf = np.zeros(limit + 1, np.int32)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= limit:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


def _spf_sieve_np(limit):
    spf = np.zeros(limit + 1, np.int32)
    if limit >= 2:
        spf[2:] = np.arange(2, limit + 1, dtype=np.int32)
    p = 2
    while p * p <= limit:
        if spf[p] == p:
            block = spf[p * p::p]
            # later (larger) primes must not overwrite an earlier factor
            mask = block == np.arange(p * p, limit + 1, p, dtype=np.int32)
            block[mask] = p
        p += 1
    return spf


def spf_sieve(limit, backend=None):
    if _resolve(backend) == "numba":
        return _spf_sieve_nb(int(limit))
    return _spf_sieve_np(int(limit))


# ----------------------------------------------------------------------------
# census scan, numba

@njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _lcm(a, b):
    return a // _gcd(a, b) * b


@njit(cache=True, nogil=True)
def _scan_nb(spf, lo, hi, even_filter):
    counters = np.zeros(5, np.int64)
    cap = 1024
    out = np.empty((cap, 7), np.int64)
    npairs = 0
    divs = np.empty(16384, np.int64)
    tcap = 4096
    rr = np.empty(tcap, np.int64)
    ss = np.empty(tcap, np.int64)
    tt = np.empty(tcap, np.int64)
    ps = np.empty(tcap, np.int64)
    for n in range(lo, hi):
        nd = 1
        divs[0] = 1
        m = n
        while m > 1:
            p = np.int64(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            cur = nd
            pk = np.int64(1)
            for _ in range(e):
                pk *= p
                for i in range(cur):
                    divs[nd] = divs[i] * pk
                    nd += 1
        d = np.sort(divs[:nd])
        k = 0
        for i in range(1, nd):
            r = d[i]
            if r * r * r > n:
                break
            mm = n // r
            for j in range(i, nd):
                s = d[j]
                if s * s > mm:
                    break
                if mm % s != 0:
                    continue
                t = mm // s
                psum = r * s + r * t + s * t
                if psum >= n:
                    continue
                if even_filter:
                    ev = 0
                    if r % 2 == 0:
                        ev += 1
                    if s % 2 == 0:
                        ev += 1
                    if t % 2 == 0:
                        ev += 1
                    if ev > 1:
                        continue
                if k == tcap:
                    tcap *= 2
                    rr2 = np.empty(tcap, np.int64)
                    ss2 = np.empty(tcap, np.int64)
                    tt2 = np.empty(tcap, np.int64)
                    ps2 = np.empty(tcap, np.int64)
                    rr2[:k] = rr[:k]
                    ss2[:k] = ss[:k]
                    tt2[:k] = tt[:k]
                    ps2[:k] = ps[:k]
                    rr, ss, tt, ps = rr2, ss2, tt2, ps2
                rr[k] = r
                ss[k] = s
                tt[k] = t
                ps[k] = psum
                k += 1
        counters[0] += k
        if k < 2:
            continue
        order = np.argsort(ps[:k], kind="mergesort")
        a0 = 0
        while a0 < k:
            a1 = a0 + 1
            while a1 < k and ps[order[a1]] == ps[order[a0]]:
                a1 += 1
            for x in range(a0, a1):
                for y in range(x + 1, a1):
                    ia = order[x]
                    ib = order[y]
                    if ia > ib:
                        ia, ib = ib, ia
                    r, s, t = rr[ia], ss[ia], tt[ia]
                    u, v, w = rr[ib], ss[ib], tt[ib]
                    counters[1] += 1
                    if _gcd(_gcd(r, s), t) != _gcd(_gcd(u, v), w):
                        continue
                    counters[2] += 1
                    if _lcm(_lcm(r, s), t) != _lcm(_lcm(u, v), w):
                        continue
                    counters[3] += 1
                    e1 = _lcm(_lcm(_gcd(r, s), _gcd(r, t)), _gcd(s, t))
                    e2 = _lcm(_lcm(_gcd(u, v), _gcd(u, w)), _gcd(v, w))
                    if e1 != e2:
                        continue
                    counters[4] += 1
                    if npairs == cap:
                        cap *= 2
                        out2 = np.empty((cap, 7), np.int64)
                        out2[:npairs] = out[:npairs]
                        out = out2
                    out[npairs, 0] = n
                    out[npairs, 1] = r
                    out[npairs, 2] = s
                    out[npairs, 3] = t
                    out[npairs, 4] = u
                    out[npairs, 5] = v
                    out[npairs, 6] = w
                    npairs += 1
            a0 = a1
    return out[:npairs].copy(), counters


# ----------------------------------------------------------------------------
# census scan, numpy

def _triples_np(lo, hi, even_filter):
    """All kept triples with product in [lo, hi) as int64 arrays."""
    rs_, ss_, ts_ = [], [], []
    r = 2
    while r * r * r < hi:
        smax = int(np.sqrt((hi - 1) // r)) + 1
        while smax * smax * r > hi - 1:
            smax -= 1
        if smax >= r:
            s = np.arange(r, smax + 1, dtype=np.int64)
            rs = r * s
            t_lo = np.maximum(s, -(-lo // rs))
            t_hi = (hi - 1) // rs
            cnt = np.maximum(t_hi - t_lo + 1, 0)
            total = int(cnt.sum())
            if total:
                srep = np.repeat(s, cnt)
                start = np.repeat(t_lo, cnt)
                offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
                t = start + offs
                rs_.append(np.full(total, r, dtype=np.int64))
                ss_.append(srep)
                ts_.append(t)
        r += 1
    if not rs_:
        empty = np.empty(0, np.int64)
        return empty, empty, empty
    r = np.concatenate(rs_)
    s = np.concatenate(ss_)
    t = np.concatenate(ts_)
    keep = r * s + r * t + s * t < r * s * t
    if even_filter:
        keep &= ((r % 2 == 0).astype(np.int8) + (s % 2 == 0) + (t % 2 == 0)) <= 1
    return r[keep], s[keep], t[keep]


def _scan_np(lo, hi, even_filter):
    counters = np.zeros(N_COUNTERS, np.int64)
    r, s, t = _triples_np(lo, hi, even_filter)
    counters[0] = r.size
    empty = np.empty((0, 7), np.int64)
    if r.size < 2:
        return empty, counters
    n = r * s * t
    psum = r * s + r * t + s * t
    order = np.lexsort((t, s, r, psum, n))
    n, psum, r, s, t = n[order], psum[order], r[order], s[order], t[order]
    same = (n[1:] == n[:-1]) & (psum[1:] == psum[:-1])
    if not same.any():
        return empty, counters
    # runs of equal (n, psum); expand each run into its index pairs
    starts = np.flatnonzero(np.concatenate(([True], ~same)))
    lengths = np.diff(np.concatenate((starts, [n.size])))
    ia_list, ib_list = [], []
    for length in np.unique(lengths[lengths >= 2]):
        base = starts[lengths == length]
        iu, ju = np.triu_indices(int(length), 1)
        ia_list.append((base[:, None] + iu[None, :]).ravel())
        ib_list.append((base[:, None] + ju[None, :]).ravel())
    ia = np.concatenate(ia_list)
    ib = np.concatenate(ib_list)
    counters[1] = ia.size
    r1, s1, t1 = r[ia], s[ia], t[ia]
    r2, s2, t2 = r[ib], s[ib], t[ib]
    ok = np.gcd(np.gcd(r1, s1), t1) == np.gcd(np.gcd(r2, s2), t2)
    counters[2] = ok.sum()
    ok &= np.lcm(np.lcm(r1, s1), t1) == np.lcm(np.lcm(r2, s2), t2)
    counters[3] = ok.sum()
    e1 = np.lcm(np.lcm(np.gcd(r1, s1), np.gcd(r1, t1)), np.gcd(s1, t1))
    e2 = np.lcm(np.lcm(np.gcd(r2, s2), np.gcd(r2, t2)), np.gcd(s2, t2))
    ok &= e1 == e2
    counters[4] = ok.sum()
    pairs = np.stack([n[ia], r1, s1, t1, r2, s2, t2], axis=1)[ok]
    return sort_pairs(pairs), counters


def sort_pairs(pairs):
    if pairs.shape[0] == 0:
        return pairs
    keys = tuple(pairs[:, j] for j in range(6, -1, -1))
    return pairs[np.lexsort(keys)]


def scan_products(lo, hi, even_filter=True, spf=None, backend=None):
    """Census scan over products in [lo, hi). ``spf`` is required for numba."""
    lo = max(int(lo), 8)
    hi = int(hi)
    if hi <= lo:
        return np.empty((0, 7), np.int64), np.zeros(N_COUNTERS, np.int64)
    if _resolve(backend) == "numba":
        if spf is None or spf.shape[0] < hi:
            spf = spf_sieve(hi - 1, backend="numba")
        pairs, counters = _scan_nb(spf, lo, hi, bool(even_filter))
        return sort_pairs(pairs), counters
    return _scan_np(lo, hi, bool(even_filter))
