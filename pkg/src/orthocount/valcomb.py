"""t-adic valuation combinatorics: weights and minimal valuations of index
tuples, the superspecial candidate sets, and the decay/index schedules.

Everything here is exact integer/Fraction arithmetic; the minimum searches
are exhaustive by design (they are the oracle for the structural lemmas).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

MIN_SET_GUARD = 10 ** 7


@dataclass(frozen=True)
class ValuationProfile:
    """n, p and the valuations a = (a_1, ..., a_{n+1}) of the curve series."""
    n: int
    p: int
    a: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.a) != self.n + 1:
            raise ValueError("need exactly n+1 valuations")
        if any(x < 1 for x in self.a):
            raise ValueError("valuations must be positive")


@dataclass(frozen=True)
class SuperspecialProfile:
    p: int
    h: int
    hprime: int
    a: int

    def __post_init__(self):
        if not (2 * self.a <= self.h and (self.p + 1) * self.a <= self.hprime):
            raise ValueError("need 2a <= h and (p+1)a <= h'")


def weight(I):
    return sum(I)


def nu(I, prof):
    """sum_j p^(i_1 + ... + i_{j-1}) * a_{i_j}, exact."""
    total = 0
    exp = 0
    for i in I:
        if not 1 <= i <= prof.n + 1:
            raise ValueError("index out of range")
        total += prof.p ** exp * prof.a[i - 1]
        exp += i
    return total


def min_set(r, prof):
    """(nu_r, sorted argmin tuples) by exhaustive search over (n+1)^r tuples."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if (prof.n + 1) ** r > MIN_SET_GUARD:
        raise ValueError("index space too large to enumerate")
    best = None
    argmin = []
    for I in itertools.product(range(1, prof.n + 2), repeat=r):
        v = nu(I, prof)
        if best is None or v < best:
            best = v
            argmin = [I]
        elif v == best:
            argmin.append(I)
    return best, sorted(argmin)


@dataclass
class MinvalReport:
    r_max: int
    checked: int
    violations: list  # (r, property, witness)

    @property
    def ok(self):
        return not self.violations


def verify_minval(prof, r_max):
    """Exhaustively verify the structure of the minimizing sets for r <= r_max:

    (1) truncation/extension closure, (2) monotone indices with antitone
    valuations, (3) coordinatewise mixing closure, (4) weight spread < n+1,
    (5) unique maximal- and minimal-weight members (with distinct weights
    whenever the set has more than one element).
    """
    viol = []
    sets = {}
    checked = 0
    for r in range(1, r_max + 1):
        _, sets[r] = min_set(r, prof)
    for r in range(1, r_max + 1):
        cur = sets[r]
        cur_set = set(cur)
        checked += len(cur)
        if r >= 2:
            prev = set(sets[r - 1])
            for I in cur:
                if I[1:] not in prev:
                    viol.append((r, 1, I))
            for J in sets[r - 1]:
                if not any(I[1:] == J for I in cur):
                    viol.append((r, 1, ("no extension", J)))
        for I in cur:
            if list(I) != sorted(I):
                viol.append((r, 2, I))
            avals = [prof.a[i - 1] for i in I]
            if avals != sorted(avals, reverse=True):
                viol.append((r, 2, ("a-values", I)))
        for I in cur:
            for J in cur:
                for mix in itertools.product(*zip(I, J)):
                    if mix not in cur_set:
                        viol.append((r, 3, (I, J, mix)))
                if abs(weight(I) - weight(J)) >= prof.n + 1:
                    viol.append((r, 4, (I, J)))
        if len(cur) > 1:
            weights = [weight(I) for I in cur]
            if len(set(weights)) == 1:
                viol.append((r, 5, ("all weights equal", cur)))
            if weights.count(max(weights)) != 1 or weights.count(min(weights)) != 1:
                viol.append((r, 5, ("extreme weight not unique", cur)))
    return MinvalReport(r_max, checked, viol)


# ---------------------------------------------------------------------------
# superspecial candidate sets

def ssp_term_valuation(kind, alpha, beta, prof, xs_val=None):
    """t-adic valuation of the candidate product with alpha top-block factors
    and beta bridge pairs; kind 2 appends one more column factor (default
    valuation a, override via xs_val for columns s > 1)."""
    v = prof.a + prof.h * sum(prof.p ** i for i in range(1, alpha + 1)) \
        + prof.hprime * sum(prof.p ** (alpha + 2 * j - 1) for j in range(1, beta + 1))
    if kind == 2:
        v += (prof.a if xs_val is None else xs_val) * prof.p ** (alpha + 2 * beta + 1)
    return v


def ssp_min_valuation(kind, r, prof, xs_val=None):
    """(min valuation, argmin set of (alpha, beta)) over the candidate set.

    kind 1: alpha + beta = r + 1; kind 2 (one extra column factor):
    alpha + beta = r.
    """
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    total = r + 1 if kind == 1 else r
    best = None
    argmin = []
    for alpha in range(total + 1):
        beta = total - alpha
        v = ssp_term_valuation(kind, alpha, beta, prof, xs_val)
        if best is None or v < best:
            best, argmin = v, [(alpha, beta)]
        elif v == best:
            argmin.append((alpha, beta))
    return best, argmin


# ---------------------------------------------------------------------------
# decay schedules

def schedule_h(h, p, r_max):
    """[h_0, ..., h_{r_max}] with h_r = floor(h (p^r + ... + p + 1 + 1/p))."""
    out = []
    for r in range(r_max + 1):
        s = sum(Fraction(p) ** k for k in range(r + 1)) + Fraction(1, p)
        out.append(int(h * s))  # int() floors positive Fractions
    return out


def schedule_hprime(h, p, r_max, a=None):
    """[h'_{-1}, h'_0, ..., h'_{r_max}], h'_r = floor(h(p^r+...+1) + a/p)."""
    a = Fraction(h, 2) if a is None else Fraction(a)
    out = [int(a / p)]
    for r in range(r_max + 1):
        s = h * sum(Fraction(p) ** k for k in range(r + 1)) + a / p
        out.append(int(s))
    return out


def schedules(h, p, r_max, a=None):
    return schedule_h(h, p, r_max), schedule_hprime(h, p, r_max, a)


@dataclass(frozen=True)
class DecaySchedule:
    case: str  # "generic" | "ssp-case1" | "ssp-case2"
    windows: tuple  # ((n_lo, n_hi, exponent), ...) consecutive, e nondecreasing

    def __post_init__(self):
        for (l1, h1, e1), (l2, h2, e2) in zip(self.windows, self.windows[1:]):
            if l2 != h1 + 1:
                raise ValueError("windows must be consecutive")
            if e2 < e1:
                raise ValueError("exponents must be nondecreasing")

    def exponent_at(self, n):
        for lo, hi, e in self.windows:
            if lo <= n <= hi:
                return e
        return None  # uncovered


def predicted_index(n, case, h, p, a=None, r_cap=64):
    """Lower-bound exponent e with |L_1/L_n| >= p^e from the decay theorems,
    or None where the theorems leave n uncovered (below the first window, or
    inside a genuine inter-window gap when a p^r is fractional)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if case == "generic":
        hr = schedule_h(h, p, r_cap)
        if n <= hr[0]:
            return None
        for r in range(r_cap - 1):
            if hr[r] + 1 <= n <= hr[r + 1]:
                return 2 + 2 * r
        raise ValueError("increase r_cap")
    a = Fraction(h, 2) if a is None else Fraction(a)
    hp = schedule_hprime(h, p, r_cap, a)  # hp[r+1] = h'_r
    if case == "ssp-case1":
        for r in range(r_cap - 1):
            if n < hp[r] + a * p ** r + 1:
                return None
            if n <= hp[r + 1]:
                return 1 + 2 * r
            if n <= hp[r + 1] + a * p ** (r + 1):
                return 2 + 2 * r
        raise ValueError("increase r_cap")
    if case == "ssp-case2":
        if n < hp[0] + a + 1:
            return None
        if n <= hp[1]:
            return 1
        for r in range(r_cap - 2):
            if hp[r + 1] + 1 <= n <= hp[r + 2]:
                return 3 + 2 * r
        raise ValueError("increase r_cap")
    raise ValueError(f"unknown case {case!r}")


def build_schedule(case, h, p, a=None, r_max=4):
    """DecaySchedule over the windows the theorem covers up to level r_max."""
    a_frac = Fraction(h, 2) if a is None else Fraction(a)
    windows = []
    if case == "generic":
        hr = schedule_h(h, p, r_max + 1)
        for r in range(r_max + 1):
            if hr[r] + 1 <= hr[r + 1]:
                windows.append((hr[r] + 1, hr[r + 1], 2 + 2 * r))
    elif case == "ssp-case1":
        hp = schedule_hprime(h, p, r_max + 1, a_frac)
        for r in range(r_max + 1):
            lo1 = int(hp[r] + a_frac * p ** r) + 1
            if lo1 <= hp[r + 1]:
                windows.append((lo1, hp[r + 1], 1 + 2 * r))
            hi2 = int(hp[r + 1] + a_frac * p ** (r + 1))
            if hp[r + 1] + 1 <= hi2:
                windows.append((hp[r + 1] + 1, hi2, 2 + 2 * r))
    elif case == "ssp-case2":
        hp = schedule_hprime(h, p, r_max + 1, a_frac)
        lo = int(hp[0] + a_frac) + 1
        if lo <= hp[1]:
            windows.append((lo, hp[1], 1))
        for r in range(r_max):
            if hp[r + 1] + 1 <= hp[r + 2]:
                windows.append((hp[r + 1] + 1, hp[r + 2], 3 + 2 * r))
    else:
        raise ValueError(f"unknown case {case!r}")
    return DecaySchedule(case, tuple(windows))
