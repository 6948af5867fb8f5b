"""Truncated two-variable arithmetic: power series in t (degree <= T_max)
whose coefficients are truncated Witt vectors over an unramified extension.

A coefficient is stored as (pval, unit-vector): the value p^pval * u(x) with
u a basis vector mod p^R, renormalized so u is not divisible by p.  Series
are dense int64 arrays; the convolution kernel is the package's hottest loop
and runs under numba with a pure-Python twin selected by ORTHOCOUNT_NO_NUMBA.

Addition of coefficients with far-apart valuations drops the smaller term
once the gap reaches R; this is the truncation semantics (relative precision
R everywhere).
"""

from dataclasses import dataclass

import numpy as np

from ._accel import USE_NUMBA, njit
from .padic import PINF, UnramifiedRing


@dataclass(frozen=True, eq=False)
class SeriesRing:
    ring: UnramifiedRing
    tmax: int

    def zero_series(self):
        d = self.ring.deg
        pv = np.full(self.tmax + 1, PINF, dtype=np.int64)
        un = np.zeros((self.tmax + 1, d), dtype=np.int64)
        return TSeries(self, pv, un)

    def from_terms(self, terms):
        """terms: iterable of (t_exp, coeff) with coeff a ring element tuple
        or plain int; later terms add."""
        s = self.zero_series()
        for texp, coeff in terms:
            if texp > self.tmax:
                continue
            if isinstance(coeff, int):
                coeff = self.ring.from_int(coeff)
            s = s.add(self.monomial(texp, coeff))
        return s

    def monomial(self, texp, coeff, pshift=0):
        s = self.zero_series()
        if texp > self.tmax:
            return s
        if isinstance(coeff, int):
            coeff = self.ring.from_int(coeff)
        v = self.ring.val(coeff)
        if v >= PINF:
            return s
        M = self.ring.modulus
        unit = tuple((c // self.ring.p ** v) % M for c in coeff)
        s.pval[texp] = v + pshift
        s.unit[texp] = unit
        return s


class TSeries:
    __slots__ = ("sr", "pval", "unit")

    def __init__(self, sr, pval, unit):
        self.sr = sr
        self.pval = pval
        self.unit = unit

    def copy(self):
        return TSeries(self.sr, self.pval.copy(), self.unit.copy())

    def is_zero(self):
        return bool(np.all(self.pval >= PINF))

    def t_valuation(self):
        nz = np.nonzero(self.pval < PINF)[0]
        return int(nz[0]) if nz.size else None

    def coeff(self, texp):
        return int(self.pval[texp]), tuple(int(x) for x in self.unit[texp])

    def min_pval(self):
        m = int(self.pval.min())
        return None if m >= PINF else m

    def terms(self):
        for t in np.nonzero(self.pval < PINF)[0]:
            yield int(t), int(self.pval[t]), tuple(int(x) for x in self.unit[t])

    def add(self, other):
        out = self.copy()
        _accumulate(out, other)
        return out

    def neg(self):
        out = self.copy()
        M = self.sr.ring.modulus
        nz = self.pval < PINF
        out.unit[nz] = (-out.unit[nz]) % M
        return out

    def sub(self, other):
        return self.add(other.neg())

    def pshift(self, k):
        """Multiply by p^k (k may be negative)."""
        out = self.copy()
        nz = out.pval < PINF
        out.pval[nz] += k
        return out

    def scale(self, coeff):
        """Multiply by a ring element."""
        if isinstance(coeff, int):
            coeff = self.sr.ring.from_int(coeff)
        v = self.sr.ring.val(coeff)
        if v >= PINF:
            return self.sr.zero_series()
        mono = self.sr.monomial(0, coeff)
        return self.mul(mono)

    def mul(self, other):
        out = self.sr.zero_series()
        _mul_acc(out, self, other)
        _renormalize(out)
        return out

    def sigma_twist(self, k=1):
        """sigma on coefficients and t -> t^p, applied k times."""
        sr = self.sr
        ring = sr.ring
        out = self
        for _ in range(k):
            new = sr.zero_series()
            for t in np.nonzero(out.pval < PINF)[0]:
                t2 = int(t) * ring.p
                if t2 > sr.tmax:
                    continue
                new.pval[t2] = out.pval[t]
                new.unit[t2] = ring.sigma(tuple(int(x) for x in out.unit[t]))
            out = new
        return out

    def __repr__(self):
        parts = []
        for t, pv, un in list(self.terms())[:6]:
            parts.append(f"t^{t}*p^{pv}*{un}")
        return "TSeries(" + " + ".join(parts) + (" + ..." if len(list(self.terms())) > 6 else "") + ")"


# ---------------------------------------------------------------------------
# kernels

@njit(cache=True)
def _acc_kernel(cpv, cun, tpos, tv, tun, p, R, mod, d):  # pragma: no cover
    """Accumulate a single term (tpos, tv, tun) into (cpv, cun)."""
    if tv >= PINF:
        return
    av = cpv[tpos]
    if av >= PINF:
        cpv[tpos] = tv
        for i in range(d):
            cun[tpos, i] = tun[i]
        return
    diff = tv - av
    if diff >= R:
        return
    if diff >= 0:
        pk = 1
        for _ in range(diff):
            pk *= p
        for i in range(d):
            cun[tpos, i] = (cun[tpos, i] + tun[i] * pk) % mod
    else:
        pk = 1
        for _ in range(-diff):
            pk *= p
        for i in range(d):
            cun[tpos, i] = (cun[tpos, i] * pk + tun[i]) % mod
        cpv[tpos] = tv


@njit(cache=True)
def _mul_kernel(cpv, cun, apv, aun, bpv, bun, red, p, R, mod, d, tmax):  # pragma: no cover
    tmp = np.zeros(2 * d - 1, np.int64)
    term = np.zeros(d, np.int64)
    for t1 in range(tmax + 1):
        v1 = apv[t1]
        if v1 >= PINF:
            continue
        for t2 in range(tmax + 1 - t1):
            v2 = bpv[t2]
            if v2 >= PINF:
                continue
            # unit-vector product with reduction
            for k in range(2 * d - 1):
                tmp[k] = 0
            for i in range(d):
                ai = aun[t1, i]
                if ai != 0:
                    for j in range(d):
                        tmp[i + j] = (tmp[i + j] + ai * bun[t2, j]) % mod
            for i in range(d):
                term[i] = tmp[i]
            for k in range(d - 1):
                c = tmp[d + k]
                if c != 0:
                    for i in range(d):
                        term[i] = (term[i] + c * red[k, i]) % mod
            # renormalize the product unit (it may pick up p factors)
            tv = v1 + v2
            allzero = True
            for i in range(d):
                if term[i] != 0:
                    allzero = False
                    break
            if allzero:
                continue
            while True:
                divisible = True
                for i in range(d):
                    if term[i] % p != 0:
                        divisible = False
                        break
                if not divisible:
                    break
                for i in range(d):
                    term[i] //= p
                tv += 1
            _acc_kernel(cpv, cun, t1 + t2, tv, term, p, R, mod, d)


def _acc_py(cpv, cun, tpos, tv, tun, p, R, mod, d):
    if tv >= PINF:
        return
    av = cpv[tpos]
    if av >= PINF:
        cpv[tpos] = tv
        cun[tpos] = tun
        return
    diff = int(tv - av)
    if diff >= R:
        return
    if diff >= 0:
        pk = p ** diff
        cun[tpos] = (cun[tpos] + np.asarray(tun) * pk) % mod
    else:
        pk = p ** (-diff)
        cun[tpos] = (cun[tpos] * pk + np.asarray(tun)) % mod
        cpv[tpos] = tv


def _mul_py(cpv, cun, apv, aun, bpv, bun, red, p, R, mod, d, tmax):
    anz = np.nonzero(apv < PINF)[0]
    bnz = np.nonzero(bpv < PINF)[0]
    for t1 in anz:
        for t2 in bnz:
            t = int(t1) + int(t2)
            if t > tmax:
                break
            tmp = [0] * (2 * d - 1)
            for i in range(d):
                ai = int(aun[t1, i])
                if ai:
                    for j in range(d):
                        tmp[i + j] = (tmp[i + j] + ai * int(bun[t2, j])) % mod
            term = tmp[:d]
            for k in range(d - 1):
                c = tmp[d + k]
                if c:
                    for i in range(d):
                        term[i] = (term[i] + c * int(red[k, i])) % mod
            if not any(term):
                continue
            tv = int(apv[t1]) + int(bpv[t2])
            while all(x % p == 0 for x in term):
                term = [x // p for x in term]
                tv += 1
            _acc_py(cpv, cun, t, tv, np.array(term, dtype=np.int64), p, R, mod, d)


def _mul_acc(out, A, B):
    sr = out.sr
    ring = sr.ring
    sig, red = ring.as_matrix_int64()
    if ring.deg == 1:
        red = np.zeros((0, 1), dtype=np.int64)
    if USE_NUMBA:
        _mul_kernel(out.pval, out.unit, A.pval, A.unit, B.pval, B.unit,
                    red, ring.p, ring.R, ring.modulus, ring.deg, sr.tmax)
    else:
        _mul_py(out.pval, out.unit, A.pval, A.unit, B.pval, B.unit,
                red, ring.p, ring.R, ring.modulus, ring.deg, sr.tmax)


def _accumulate(out, other):
    sr = out.sr
    ring = sr.ring
    for t in np.nonzero(other.pval < PINF)[0]:
        if USE_NUMBA:
            _acc_kernel(out.pval, out.unit, int(t), int(other.pval[t]),
                        other.unit[t], ring.p, ring.R, ring.modulus, ring.deg)
        else:
            _acc_py(out.pval, out.unit, int(t), int(other.pval[t]),
                    other.unit[t], ring.p, ring.R, ring.modulus, ring.deg)
    _renormalize(out)


def _renormalize(s):
    ring = s.sr.ring
    p = ring.p
    for t in np.nonzero(s.pval < PINF)[0]:
        u = s.unit[t]
        if not u.any():
            s.pval[t] = PINF
            continue
        while not (u % p).any():
            u //= p
            s.pval[t] += 1
        s.unit[t] = u


# ---------------------------------------------------------------------------
# matrices of series

class TSeriesMatrix:
    def __init__(self, sr, entries):
        self.sr = sr
        self.entries = entries  # list of lists of TSeries
        self.dim = len(entries)

    @staticmethod
    def zero(sr, dim):
        return TSeriesMatrix(sr, [[sr.zero_series() for _ in range(dim)]
                                  for _ in range(dim)])

    @staticmethod
    def identity(sr, dim):
        M = TSeriesMatrix.zero(sr, dim)
        for i in range(dim):
            M.entries[i][i] = sr.monomial(0, 1)
        return M

    @staticmethod
    def from_constant(sr, mat, pshifts=None):
        """Constant-in-t matrix from ring elements (or ints); pshifts adds
        a p-power valuation shift per entry."""
        dim = len(mat)
        M = TSeriesMatrix.zero(sr, dim)
        for i in range(dim):
            for j in range(dim):
                c = mat[i][j]
                if isinstance(c, int) and c == 0:
                    continue
                shift = pshifts[i][j] if pshifts else 0
                M.entries[i][j] = sr.monomial(0, c, pshift=shift)
        return M

    def copy(self):
        return TSeriesMatrix(self.sr, [[e.copy() for e in row] for row in self.entries])

    def add(self, other):
        return TSeriesMatrix(self.sr, [[a.add(b) for a, b in zip(r1, r2)]
                                       for r1, r2 in zip(self.entries, other.entries)])

    def sub(self, other):
        return TSeriesMatrix(self.sr, [[a.sub(b) for a, b in zip(r1, r2)]
                                       for r1, r2 in zip(self.entries, other.entries)])

    def mul(self, other):
        out = TSeriesMatrix.zero(self.sr, self.dim)
        for i in range(self.dim):
            for j in range(self.dim):
                acc = out.entries[i][j]
                for k in range(self.dim):
                    _mul_acc(acc, self.entries[i][k], other.entries[k][j])
                _renormalize(acc)
        return out

    def sigma_twist(self, k=1):
        return TSeriesMatrix(self.sr, [[e.sigma_twist(k) for e in row]
                                       for row in self.entries])

    def mul_vector(self, vec):
        """vec: list of TSeries; returns list of TSeries."""
        out = []
        for i in range(self.dim):
            acc = self.sr.zero_series()
            for k in range(self.dim):
                _mul_acc(acc, self.entries[i][k], vec[k])
            _renormalize(acc)
            out.append(acc)
        return out

    def pshift(self, k):
        return TSeriesMatrix(self.sr, [[e.pshift(k) for e in row] for row in self.entries])

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def min_t_valuation(self):
        vals = [e.t_valuation() for row in self.entries for e in row]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def block(self, rows, cols):
        return [[self.entries[i][j].copy() for j in cols] for i in rows]


def series_block_mul(sr, A, B):
    """Product of rectangular blocks (lists of lists of TSeries)."""
    n, k, m = len(A), len(B), len(B[0])
    out = [[sr.zero_series() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = out[i][j]
            for l in range(k):
                _mul_acc(acc, A[i][l], B[l][j])
            _renormalize(acc)
    return out


def series_block_sigma(block_, k=1):
    return [[e.sigma_twist(k) for e in row] for row in block_]
