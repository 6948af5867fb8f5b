"""Benchmark the hot kernels: numba-compiled against the pure fallbacks.

Run via `orthocount bench`.  When numba is unavailable (or disabled by
ORTHOCOUNT_NO_NUMBA) both columns time the same fallback code and the
speedup column reads 1.0.
"""

import time

import numpy as np

from ._accel import USE_NUMBA
from .padic import make_ring
from .series import SeriesRing, _mul_kernel, _mul_py


def _time(fn, *a, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*a)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_theta(bound):
    from ._enum import _theta_walk_nb, _theta_walk_py, cholesky_plan
    gram = [
        [2, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, 0, 0],
        [0, 0, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, -1],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0],
        [0, 0, 0, 0, -1, 0, 0, 2],
    ]
    mults, lds, lns, scale, safe = cholesky_plan(gram, bound)

    def run_nb():
        arr = np.zeros(bound + 1, dtype=np.int64)
        _theta_walk_nb(np.array(mults, dtype=np.int64), np.array(lds, dtype=np.int64),
                       np.array(lns, dtype=np.int64), np.int64(scale),
                       np.int64(bound), arr)
        return arr

    def run_py():
        counts = [0] * (bound + 1)
        _theta_walk_py(mults, lds, lns, scale, bound, counts)
        return counts

    nb = run_nb()
    py = run_py()
    assert [2 * int(x) for x in nb] == [2 * c for c in py]
    t_nb = _time(run_nb) if USE_NUMBA and safe else None
    t_py = _time(run_py, repeat=1)
    return t_nb, t_py


def bench_density(ell, rank, depth):
    from .density import _count_naive_nb, _count_naive_np
    mod = ell ** depth
    gram = [[2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(rank)]
            for i in range(rank)]
    qd = np.array([gram[i][i] // 2 for i in range(rank)], dtype=np.int64)
    G = np.array(gram, dtype=np.int64) % mod
    total = mod ** rank
    a_nb = _count_naive_nb(qd % mod, G, mod, 1, total)
    a_py = _count_naive_np(qd % mod, G, mod, 1, total)
    assert a_nb == a_py
    t_nb = _time(lambda: _count_naive_nb(qd % mod, G, mod, 1, total)) if USE_NUMBA else None
    t_py = _time(lambda: _count_naive_np(qd % mod, G, mod, 1, total), repeat=1)
    return t_nb, t_py


def bench_series(tmax):
    ring = make_ring(5, 8, 2, minpoly_modp=(-2 % 5 ** 8, 0, 1))
    sr = SeriesRing(ring, tmax)
    import random
    rng = random.Random(1)
    A = sr.zero_series()
    B = sr.zero_series()
    for t in range(0, tmax, 2):
        A = A.add(sr.monomial(t, rng.randrange(1, ring.modulus)))
        B = B.add(sr.monomial(t + 1 if t + 1 <= tmax else t, rng.randrange(1, ring.modulus)))
    sig, red = ring.as_matrix_int64()

    def run(kernel):
        out = sr.zero_series()
        kernel(out.pval, out.unit, A.pval, A.unit, B.pval, B.unit,
               red, ring.p, ring.R, ring.modulus, ring.deg, sr.tmax)
        return out

    o_nb = run(_mul_kernel)
    o_py = run(_mul_py)
    assert np.all(o_nb.pval == o_py.pval) and np.all(o_nb.unit == o_py.unit)
    t_nb = _time(lambda: run(_mul_kernel)) if USE_NUMBA else None
    t_py = _time(lambda: run(_mul_py), repeat=1)
    return t_nb, t_py


def run_benchmarks(quick=False):
    rows = []
    for name, fn, size in [
        ("theta_walk_e8", bench_theta, 6 if quick else 12),
        ("density_count", bench_density, (3, 5, 2) if quick else (3, 6, 2)),
        ("series_convolution", bench_series, 200 if quick else 500),
    ]:
        if isinstance(size, tuple):
            t_nb, t_py = fn(*size)
            size_lbl = "x".join(map(str, size))
        else:
            t_nb, t_py = fn(size)
            size_lbl = str(size)
        speed = (t_py / t_nb) if t_nb else 1.0
        rows.append((name, size_lbl,
                     round(t_nb, 6) if t_nb is not None else None,
                     round(t_py, 6), round(speed, 2)))
    return rows
