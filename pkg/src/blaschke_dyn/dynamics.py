"""Exact orbits of Blaschke products over Q(i) and their heights.

Maps act on P^1(Q(i)) through homogeneous forms N(X, Y), D(X, Y) with
Gaussian-integer coefficients.  For coprime (X, Y) any common factor of
N(X, Y) and D(X, Y) divides the resultant of the two forms, so reducing an
image to lowest terms only costs a gcd against that fixed, small number.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .blaschke import make_fbp
from .errors import DomainError, GrowthCapError
from .gaussian import (ONE, ZERO, GaussianRational, as_gaussian, g_conj, g_divmod, g_gcd,
                       g_exact_div, g_is_zero, g_mul, g_neg, g_pow, g_sub, naive_height,
                       unit_to_canonical)

DEFAULT_BIT_CAP = 1 << 20
PRIME_BITS = 61
SIEVE_PRIMES = 4
PREPERIODIC_HEIGHT = 1e-6


# ---------------------------------------------------------------------------
# exact maps
# ---------------------------------------------------------------------------

def _reduce_pair(n, d, bound):
    """Divide out gcd(n, d), known to divide ``bound``; normalise the denominator."""
    if g_is_zero(d):
        return ONE, ZERO
    if g_is_zero(n):
        return ZERO, ONE
    g = g_gcd(bound, g_divmod(n, bound)[1])
    if g != ONE:
        g = g_gcd(g, g_divmod(d, g)[1])
        if g != ONE:
            n = g_exact_div(n, g)
            d = g_exact_div(d, g)
    u = unit_to_canonical(d)
    return g_mul(n, u), g_mul(d, u)


class ExactBlaschke:
    """rho * prod (z - a)/(1 - conj(a) z) with rho and a_j in Q(i).

    ``|rho|^2 = 1`` and ``|a_j|^2 < 1`` are checked in exact arithmetic.
    """

    def __init__(self, rho, zeros):
        rho = as_gaussian(rho)
        zeros = tuple(as_gaussian(a) for a in zeros)
        if rho.is_infinite or rho.norm() != 1:
            raise DomainError(f"rho must lie on the unit circle exactly, got {rho}")
        if not zeros:
            raise DomainError("an exact Blaschke product needs at least one zero")
        for a in zeros:
            if a.is_infinite or a.norm() >= 1:
                raise DomainError(f"zero {a} is not inside the unit disk")
        self.rho = rho
        self.zeros = zeros
        # N = cn * prod (q X - p Y),  D = cd * prod (conj(q) Y - conj(p) X)
        cn, cd = rho.num, rho.den
        for a in zeros:
            cn = g_mul(cn, g_conj(a.den))
            cd = g_mul(cd, a.den)
        self._cn, self._cd = cn, cd
        self._lin = tuple((a.den, g_neg(a.num)) for a in zeros)
        self._lin_d = tuple((g_neg(g_conj(a.num)), g_conj(a.den)) for a in zeros)
        res = g_mul(g_pow(cn, self.degree), g_pow(cd, self.degree))
        for (x1, y1) in self._lin:
            for (x2, y2) in self._lin_d:
                res = g_mul(res, g_sub(g_mul(x1, y2), g_mul(y1, x2)))
        self._resultant = res

    @property
    def degree(self):
        return len(self.zeros)

    @property
    def resultant(self):
        return self._resultant

    def forms(self):
        """Leading constants and linear factors of the numerator and denominator forms."""
        return self._cn, self._lin, self._cd, self._lin_d

    def apply_projective(self, X, Y):
        n, d = self._cn, self._cd
        for (a, b) in self._lin:
            n = g_mul(n, _lin_eval(a, b, X, Y))
        for (a, b) in self._lin_d:
            d = g_mul(d, _lin_eval(a, b, X, Y))
        return _reduce_pair(n, d, self._resultant)

    def __call__(self, x):
        x = as_gaussian(x)
        n, d = self.apply_projective(x.num, x.den)
        return GaussianRational(n, d, _reduced=True)

    def factors(self):
        return (self,)

    def to_fbp(self):
        """Floating-point counterpart."""
        return make_fbp(complex(self.rho), [complex(a) for a in self.zeros])

    def to_dict(self):
        return {"rho": str(self.rho), "zeros": [str(a) for a in self.zeros]}

    @classmethod
    def from_dict(cls, data):
        return cls(data["rho"], data["zeros"])

    def __repr__(self):
        return f"ExactBlaschke(rho={self.rho}, zeros=[{', '.join(map(str, self.zeros))}])"


def _lin_eval(a, b, X, Y):
    u, v = g_mul(a, X), g_mul(b, Y)
    return (u[0] + v[0], u[1] + v[1])


class ExactComposite:
    """factors[0] o factors[1] o ... evaluated innermost first."""

    def __init__(self, *factors):
        flat = []
        for f in factors:
            flat.extend(f.factors())
        if not flat:
            raise DomainError("empty composite")
        self._factors = tuple(flat)

    @property
    def degree(self):
        return math.prod(f.degree for f in self._factors)

    def factors(self):
        return self._factors

    def apply_projective(self, X, Y):
        for f in reversed(self._factors):
            X, Y = f.apply_projective(X, Y)
        return X, Y

    def __call__(self, x):
        x = as_gaussian(x)
        n, d = self.apply_projective(x.num, x.den)
        return GaussianRational(n, d, _reduced=True)

    def to_dict(self):
        return {"composite": [f.to_dict() for f in self._factors]}

    def __repr__(self):
        return "ExactComposite(" + ", ".join(map(repr, self._factors)) + ")"


def exact_compose(*maps):
    return ExactComposite(*maps)


def exact_power(n, rho=1):
    if n < 1:
        raise DomainError("power map needs n >= 1")
    return ExactBlaschke(rho, [0] * n)


def exact_iota(a):
    """z -> (z + a)/(1 + conj(a) z)."""
    return ExactBlaschke(1, [-as_gaussian(a)])


def exact_map_from_dict(data):
    if "composite" in data:
        return ExactComposite(*[exact_map_from_dict(d) for d in data["composite"]])
    return ExactBlaschke.from_dict(data)


# ---------------------------------------------------------------------------
# orbits and heights
# ---------------------------------------------------------------------------

class Orbit(list):
    """[x, f(x), ..., f^N(x)] plus cycle data ``(preperiod, period)`` when a repeat was seen."""

    cycle = None

    @property
    def is_preperiodic(self):
        return self.cycle is not None


def orbit(f, x, N, bit_cap=DEFAULT_BIT_CAP):
    """Exact forward orbit of x of length N + 1 (x itself is iterate 0)."""
    if N < 0:
        raise DomainError("N must be >= 0")
    x = as_gaussian(x)
    out = Orbit([x])
    seen = {x: 0}
    for i in range(1, N + 1):
        prev = out[-1]
        if out.cycle is not None:
            mu, lam = out.cycle
            out.append(out[mu + (i - mu) % lam])
            continue
        n, d = f.apply_projective(prev.num, prev.den)
        y = GaussianRational(n, d, _reduced=True)
        bits = y.bits()
        if bits > bit_cap:
            raise GrowthCapError(f"orbit exceeded {bit_cap} bits at iterate {i}", i, bits)
        if y in seen:
            out.cycle = (seen[y], i - seen[y])
        else:
            seen[y] = i
        out.append(y)
    return out


@dataclass(frozen=True)
class HeightEstimate:
    naive: float
    canonical_estimate: float
    iterations_used: int
    trace: tuple = field(default=(), repr=False)
    differences: tuple = field(default=(), repr=False)
    preperiodic: bool = False


def canonical_height_estimate(f, x, N, bit_cap=DEFAULT_BIT_CAP):
    """h(f^N(x)) / (deg f)^N, with the whole sequence of such quotients as a trace."""
    d = f.degree
    if d < 2:
        raise DomainError("canonical heights need deg f >= 2")
    orb = orbit(f, x, N, bit_cap)
    trace = tuple(naive_height(y) / d ** m for m, y in enumerate(orb))
    diffs = tuple(b - a for a, b in zip(trace, trace[1:]))
    return HeightEstimate(trace[0], trace[-1], N, trace, diffs, orb.is_preperiodic)


# ---------------------------------------------------------------------------
# orbit intersections through reduction modulo split primes
# ---------------------------------------------------------------------------

def _is_probable_prime(n):
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:   # deterministic below 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def split_primes(count, start=1 << PRIME_BITS):
    """Primes p = 1 mod 4 below ``start`` with a square root of -1 in F_p."""
    out = []
    p = start - (start % 4) + 1
    if p >= start:
        p -= 4
    while len(out) < count:
        if _is_probable_prime(p):
            c = 2
            while pow(c, (p - 1) // 2, p) != p - 1:
                c += 1
            out.append((p, pow(c, (p - 1) // 4, p)))
        p -= 4
    return out


def _red(a, p, s):
    return (a[0] + a[1] * s) % p


def _good_reduction(f, p, s):
    return all(_red(h.resultant, p, s) != 0 for h in f.factors())


def _fingerprints(f, x, N, p, s):
    X, Y = _red(x.num, p, s), _red(x.den, p, s)
    steps = []
    for h in reversed(f.factors()):
        cn, lin, cd, lin_d = h.forms()
        steps.append((_red(cn, p, s), [(_red(a, p, s), _red(b, p, s)) for a, b in lin],
                      _red(cd, p, s), [(_red(a, p, s), _red(b, p, s)) for a, b in lin_d]))
    out = []
    for i in range(N + 1):
        out.append(X * pow(Y, -1, p) % p if Y else -1)
        for cn, lin, cd, lin_d in steps:
            n, d = cn, cd
            for a, b in lin:
                n = n * (a * X + b * Y) % p
            for a, b in lin_d:
                d = d * (a * X + b * Y) % p
            X, Y = n, d
    return out


def orbit_intersection(f, x, g, y, N, bit_cap=DEFAULT_BIT_CAP, primes=SIEVE_PRIMES):
    """All (i, j, point) with i, j <= N and f^i(x) = g^j(y) exactly.

    Candidates come from a hash join on reductions modulo several primes of
    good reduction (equality survives reduction, so nothing is missed); each
    candidate is then confirmed in exact arithmetic.
    """
    x, y = as_gaussian(x), as_gaussian(y)
    chosen = []
    for p, s in split_primes(4 * primes):
        if _good_reduction(f, p, s) and _good_reduction(g, p, s):
            chosen.append((p, s))
            if len(chosen) == primes:
                break
    if len(chosen) < primes:
        raise DomainError("could not find enough primes of good reduction")
    fp_f = list(zip(*[_fingerprints(f, x, N, p, s) for p, s in chosen]))
    fp_g = list(zip(*[_fingerprints(g, y, N, p, s) for p, s in chosen]))
    table = {}
    for i, key in enumerate(fp_f):
        table.setdefault(key, []).append(i)
    candidates = [(i, j) for j, key in enumerate(fp_g) for i in table.get(key, ())]
    if not candidates:
        return []
    orb_f = orbit(f, x, max(i for i, _ in candidates), bit_cap)
    orb_g = orbit(g, y, max(j for _, j in candidates), bit_cap)
    hits = [(i, j, orb_f[i]) for i, j in candidates if orb_f[i] == orb_g[j]]
    return sorted(hits, key=lambda h: (h[0], h[1]))


# ---------------------------------------------------------------------------
# degree growth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthReport:
    rows: tuple                 # (m, h(f^m x), h(g^m x))
    rate_f: float               # fitted log growth factor per step
    rate_g: float
    ratio: float                # h(big^N x) / h(small^N x)
    threshold: float            # (deg big / deg small)^(N/2)
    separated: bool
    canonical_large: float


def _fit_rate(heights):
    m = np.array([k for k, h in enumerate(heights) if k >= 1 and h > 0], dtype=float)
    if m.size < 2:
        return float("nan")
    logs = np.log([heights[int(k)] for k in m])
    return float(np.polyfit(m, logs, 1)[0])


def degree_growth_experiment(f, g, x, N, bit_cap=DEFAULT_BIT_CAP):
    """Compare height growth along exact orbits of maps of different degree."""
    if f.degree == g.degree:
        raise DomainError("the experiment needs deg f != deg g")
    if N < 2:
        raise DomainError("N must be >= 2")
    x = as_gaussian(x)
    orb_f = orbit(f, x, N, bit_cap)
    orb_g = orbit(g, x, N, bit_cap)
    big, small = (orb_g, orb_f) if g.degree > f.degree else (orb_f, orb_g)
    d_big, d_small = max(f.degree, g.degree), min(f.degree, g.degree)
    if big.is_preperiodic:
        raise DomainError(f"{x} is preperiodic for the larger-degree map")
    h_f = [naive_height(z) for z in orb_f]
    h_g = [naive_height(z) for z in orb_g]
    h_big, h_small = (h_g, h_f) if big is orb_g else (h_f, h_g)
    canon = h_big[-1] / d_big ** N
    if canon <= PREPERIODIC_HEIGHT:
        raise DomainError(f"{x} has canonical height estimate {canon:.3g} for the larger-degree map")
    ratio = h_big[-1] / h_small[-1] if h_small[-1] > 0 else math.inf
    threshold = (d_big / d_small) ** (N / 2)
    rows = tuple((m, h_f[m], h_g[m]) for m in range(N + 1))
    return GrowthReport(rows, _fit_rate(h_f), _fit_rate(h_g), ratio, threshold,
                        ratio >= threshold, canon)
