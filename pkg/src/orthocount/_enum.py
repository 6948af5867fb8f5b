"""Branch-and-bound lattice point enumeration (Fincke-Pohst style).

The pruning data comes from an exact rational completion of squares
Q(v) = sum_i c_i (v_i + sum_{j>i} L_ij v_j)^2, rescaled to a single integer
plan so the hot loop is integer-only -- no floating point in any bound.
When the exact worst-case intermediate fits in int64 the numba kernel runs;
otherwise (or under ORTHOCOUNT_NO_NUMBA=1) a Python big-int walker performs
the same traversal.

Vectors are visited up to sign: the outermost nonzero coordinate is forced
positive and counts are doubled afterwards.
"""

from fractions import Fraction
from math import isqrt, lcm

import numpy as np

from ._accel import USE_NUMBA, njit
from .intmat import invert_rational

INT64_SAFE = 1 << 62


def cholesky_plan(gram, bound):
    """Integer pruning plan for enumerating Q(v) <= bound.

    Level i (processed from i = r-1 down to 0) uses
        w_i  = lds[i]*v_i + sum_{j>i} lns[i][j]*v_j,
        test   mults[i] * w_i^2 <= T,
        descend with T - mults[i]*w_i^2,
    starting from T = bound*scale; the accumulated sum of terms is
    Q(v)*scale.  `safe` certifies every intermediate fits in int64.
    """
    r = len(gram)
    A = [[Fraction(gram[i][j], 2) for j in range(r)] for i in range(r)]
    c = [Fraction(0)] * r
    L = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        c[i] = A[i][i]
        if c[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, r):
            L[i][j] = A[i][j] / c[i]
        for j in range(i + 1, r):
            for k in range(j, r):
                A[j][k] -= A[i][j] * A[i][k] / c[i]
                A[k][j] = A[j][k]
    lds = [lcm(1, *(f.denominator for f in L[i][i + 1:])) for i in range(r)]
    scale = lcm(1, *((c[i] / lds[i] ** 2).denominator for i in range(r)))
    mults = [int(c[i] * scale) // lds[i] ** 2 for i in range(r)]
    lns = [[int(L[i][j] * lds[i]) for j in range(r)] for i in range(r)]

    # exact worst-case magnitude certification for the int64 kernel
    Ginv = invert_rational(gram)
    vmax = [isqrt(int(2 * bound * Ginv[j][j])) + 1 for j in range(r)]
    safe = 2 * bound * scale + 1 < INT64_SAFE
    for i in range(r):
        wb = lds[i] * vmax[i] + sum(abs(lns[i][j]) * vmax[j] for j in range(i + 1, r))
        if mults[i] * wb * wb >= INT64_SAFE:
            safe = False
    return mults, lds, lns, scale, safe


def _theta_walk_py(mults, lds, lns, scale, bound, counts, collect=None):
    """Exact big-int traversal; counts[Q(v)] += 1 per nonzero vector (up to sign)."""
    r = len(mults)
    v = [0] * r
    base = [0] * r

    def descend(i, t, qs, started):
        if i < 0:
            if started:
                counts[qs // scale] += 1
                if collect is not None:
                    collect.append(v[:])
            return
        m, ld, b = mults[i], lds[i], base[i]
        B = isqrt(t // m)
        lo = -((B + b) // ld)
        hi = (B - b) // ld
        if not started and lo < 0:
            lo = 0
        for x in range(lo, hi + 1):
            w = ld * x + b
            term = m * w * w
            if term > t:
                continue
            v[i] = x
            for k in range(i):
                base[k] += lns[k][i] * x
            descend(i - 1, t - term, qs + term, started or x != 0)
            for k in range(i):
                base[k] -= lns[k][i] * x
        v[i] = 0

    descend(r - 1, bound * scale, 0, False)


@njit(cache=True)
def _theta_walk_nb(mults, lds, lns, scale, bound, counts):  # pragma: no cover
    r = mults.shape[0]
    v = np.zeros(r, np.int64)
    base = np.zeros(r, np.int64)
    tres = np.zeros(r + 1, np.int64)
    qacc = np.zeros(r + 1, np.int64)
    lov = np.zeros(r, np.int64)
    hiv = np.zeros(r, np.int64)
    started = np.zeros(r + 1, np.int64)

    tres[r] = bound * scale
    i = r - 1
    entering = True
    while i < r:
        if entering:
            lim = tres[i + 1] // mults[i]
            B = np.int64(np.sqrt(np.float64(lim)))
            while B * B > lim:
                B -= 1
            while (B + 1) * (B + 1) <= lim:
                B += 1
            b = base[i]
            ld = lds[i]
            lo = -((B + b) // ld)
            hi = (B - b) // ld
            if started[i + 1] == 0 and lo < 0:
                lo = 0
            lov[i] = lo
            hiv[i] = hi
            v[i] = lo - 1
        # advance coordinate at level i
        x = v[i]
        if x >= lov[i]:
            for k in range(i):
                base[k] -= lns[k, i] * x
        x += 1
        ok = False
        while x <= hiv[i]:
            w = lds[i] * x + base[i]
            if mults[i] * w * w <= tres[i + 1]:
                ok = True
                break
            x += 1
        if not ok:
            v[i] = 0
            i += 1
            entering = False
            continue
        v[i] = x
        for k in range(i):
            base[k] += lns[k, i] * x
        w = lds[i] * x + base[i]
        term = mults[i] * w * w
        tres[i] = tres[i + 1] - term
        qacc[i] = qacc[i + 1] + term
        if started[i + 1] != 0 or x != 0:
            started[i] = 1
        else:
            started[i] = 0
        if i == 0:
            if started[0] != 0:
                counts[qacc[0] // scale] += 1
            entering = False
        else:
            i -= 1
            entering = True
    return counts


def block_components(gram):
    """Connected components of the basis graph (edges at nonzero gram[i][j])."""
    r = len(gram)
    seen = [False] * r
    comps = []
    for s in range(r):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(r):
                if not seen[j] and gram[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _theta_one_block(gram, bound):
    mults, lds, lns, scale, safe = cholesky_plan(gram, bound)
    if USE_NUMBA and safe:
        arr = np.zeros(bound + 1, dtype=np.int64)
        _theta_walk_nb(
            np.array(mults, dtype=np.int64),
            np.array(lds, dtype=np.int64),
            np.array(lns, dtype=np.int64),
            np.int64(scale),
            np.int64(bound),
            arr,
        )
        counts = [int(x) for x in arr]
    else:
        counts = [0] * (bound + 1)
        _theta_walk_py(mults, lds, lns, scale, bound, counts)
    counts = [2 * x for x in counts]
    counts[0] += 1
    return counts


def theta_counts(gram, bound):
    """[#{v : Q(v)=q} for q = 0..bound], split over orthogonal blocks."""
    if bound < 0:
        return []
    total = None
    for comp in block_components(gram):
        sub = [[gram[i][j] for j in comp] for i in comp]
        cnt = _theta_one_block(sub, bound)
        if total is None:
            total = cnt
        else:
            new = [0] * (bound + 1)
            for a, ca in enumerate(total):
                if ca:
                    for b in range(bound + 1 - a):
                        if cnt[b]:
                            new[a + b] += ca * cnt[b]
            total = new
    return total


def short_vectors(gram, bound):
    """All v with 0 < Q(v) <= bound, one per +-pair (exact Python walker)."""
    mults, lds, lns, scale, _ = cholesky_plan(gram, bound)
    counts = [0] * (bound + 1)
    out = []
    _theta_walk_py(mults, lds, lns, scale, bound, counts, collect=out)
    return out
