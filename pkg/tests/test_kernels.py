"""numba and numpy kernels must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest

from triquot import _accel, _kernels

numba = pytest.importorskip("numba")


@pytest.mark.parametrize("limit", [1, 2, 10, 97, 10**5])
def test_spf_backends_agree(limit):
    a = _kernels.spf_sieve(limit, backend="numba")
    b = _kernels.spf_sieve(limit, backend="numpy")
    assert np.array_equal(a, b)


@pytest.mark.parametrize("lo,hi", [(8, 5000), (5000, 40000), (39000, 40000), (100, 100)])
@pytest.mark.parametrize("even_filter", [True, False])
def test_scan_backends_agree(lo, hi, even_filter):
    spf = _kernels.spf_sieve(hi, backend="numba")
    pa, ca = _kernels.scan_products(lo, hi, even_filter, spf=spf, backend="numba")
    pb, cb = _kernels.scan_products(lo, hi, even_filter, backend="numpy")
    assert np.array_equal(pa, pb)
    assert np.array_equal(ca, cb)
    assert pa.dtype == np.int64 and pa.shape[1] == 7


def test_scan_counts_triples():
    # every hyperbolic triple with product below 200, by direct loop
    want = sum(1 for r in range(2, 200) for s in range(r, 200) for t in range(s, 200)
               if r * s * t < 200 and r * s + r * t + s * t < r * s * t)
    _, c = _kernels.scan_products(8, 200, False, backend="numpy")
    assert int(c[0]) == want


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.spf_sieve(10, backend="cuda")


def test_env_flag_disables_numba():
    code = "from triquot import _accel; print(_accel.USE_NUMBA, _accel.default_backend())"
    env = dict(os.environ, TRIQUOT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["False", "numpy"]
    env["TRIQUOT_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["True", "numba"]
    assert _accel.HAVE_NUMBA
