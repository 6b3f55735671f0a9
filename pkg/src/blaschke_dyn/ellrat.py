"""Elliptic rational functions n_tau obtained by descending z -> n z through wp.

n_tau is the degree-n rational map with n_tau(wp_tau(z)) = wp_{n tau}(n z).
The point at infinity is the value ``INFINITY`` (complex infinity).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import elliptic
from .blaschke import cluster_points, poly_roots
from .errors import DomainError, NumericalError

INFINITY = elliptic.INFINITY
FIT_HOLDOUT_TOL = 1e-6
EQUIV_TOL = 1e-5
CROSS_RATIO_TOL = 1e-6
MAX_FIT_DEGREE = 8


@dataclass(frozen=True)
class EllipticRationalParams:
    n: int
    tau: elliptic.ModularTau

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "tau", elliptic.as_tau(self.tau))


@dataclass(frozen=True)
class ModularMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if int(v) != v:
                raise DomainError(f"matrix entries must be integers, got {name} = {v}")
            object.__setattr__(self, name, int(v))
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"determinant must be 1, got {self.a * self.d - self.b * self.c}")

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]


def _params(n, tau=None):
    if isinstance(n, EllipticRationalParams):
        return n
    return EllipticRationalParams(n, tau)


def is_infinite(x):
    return not np.isfinite(complex(x))


def ell_rat_eval(params, x, tau=None):
    """n_tau(x) = wp_{n tau}(n z) where wp_tau(z) = x."""
    p = _params(params, tau)
    t = p.tau.value
    x_arr = np.asarray(x, dtype=complex)
    z = np.asarray(elliptic.inverse_p(x_arr, p.tau), dtype=complex)
    out = elliptic.weierstrass_p(p.n * z, p.n * t)
    # wp_tau has its pole at 0, which n z sends to a pole again
    out = np.where(np.isfinite(x_arr), out, INFINITY)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CriticalValueSet:
    """Critical values of n_tau.

    ``values`` are what the map actually has; ``half_period_values`` is the
    set wp_{n tau}(E_{n tau}[2]) (three finite values plus infinity).  For
    n >= 3 the two coincide; for n = 2 only two of the four occur.
    """

    n: int
    values: tuple
    half_period_values: tuple
    degree_two: bool = False


def ell_rat_critical_values(params, tau=None):
    p = _params(params, tau)
    nt = p.n * p.tau.value
    half = (0.5, 0.5 * nt, 0.5 * (1.0 + nt))
    e = tuple(complex(v) for v in elliptic.weierstrass_p(np.array(half), nt))
    lemma = e + (INFINITY,)
    if p.n == 2:
        # the degree-two map has two critical points, over wp_{2tau}(1/2) and wp_{2tau}((1+2tau)/2)
        return CriticalValueSet(2, (e[0], e[2]), lemma, True)
    return CriticalValueSet(p.n, lemma, lemma, False)


# ---------------------------------------------------------------------------
# rational fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFit:
    """P(x)/Q(x) in the scaled variable x / scale; coefficients highest first."""

    n: int
    tau: complex
    scale: float
    num: np.ndarray = field(repr=False)
    den: np.ndarray = field(repr=False)
    holdout_residual: float = 0.0

    def __call__(self, x):
        s = np.asarray(x, dtype=complex) / self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.polyval(self.num, s) / np.polyval(self.den, s)
        return complex(out) if np.ndim(out) == 0 else out

    def coefficients(self):
        """Unscaled coefficients (highest first) of numerator and denominator."""
        m = len(self.num) - 1
        powers = self.scale ** -np.arange(m, -1, -1, dtype=float)
        return self.num * powers, self.den * powers

    def critical_points(self):
        p, q = self.num, self.den
        wr = np.polysub(np.polymul(np.polyder(p), q), np.polymul(p, np.polyder(q)))
        return poly_roots(wr, polish_steps=3) * self.scale

    def critical_values(self, pole_radius=1e-3):
        """Critical values, with INFINITY for critical points that are poles.

        A Wronskian root within ``pole_radius`` (scaled variable) of a root
        of the denominator is a multiple pole; its value is infinity.
        """
        pts = self.critical_points() / self.scale
        den_roots = poly_roots(self.den)
        finite = []
        has_inf = False
        for c in pts:
            near_pole = den_roots.size and np.min(np.abs(den_roots - c)) < pole_radius
            v = self(c * self.scale)
            if near_pole or not np.isfinite(v):
                has_inf = True
            else:
                finite.append(v)
        rad = 1e-6 * max(1.0, max((abs(v) for v in finite), default=1.0))
        out = [c for c, _ in cluster_points(finite, radius=rad, multiplicity_aware=False)]
        if has_inf:
            out.append(INFINITY)
        return out


def _fit_radius(p):
    e = elliptic.weierstrass_data(p.tau).e_values
    poles = [elliptic.weierstrass_p(j / p.n, p.tau) for j in range(1, p.n)]
    return 1.5 * max([abs(v) for v in e] + [abs(v) for v in poles] + [1.0])


def ell_rat_fit(params, tau=None, tol=FIT_HOLDOUT_TOL):
    """Least-squares rational interpolant of degree n over degree n."""
    p = _params(params, tau)
    n = p.n
    if n > MAX_FIT_DEGREE:
        raise DomainError(f"rational fit is limited to n <= {MAX_FIT_DEGREE}")
    radius = _fit_radius(p)
    m = 4 * n + 4
    theta = 2.0 * np.pi * (np.arange(m) + 0.37) / m
    x = radius * np.exp(1j * theta)
    y = np.asarray(ell_rat_eval(p, x), dtype=complex)
    s = x / radius
    yscale = float(np.max(np.abs(y)))
    vander = np.vander(s, n + 1)
    a = np.hstack([vander, -(y / yscale)[:, None] * vander])
    _, sing, vh = np.linalg.svd(a)
    null = vh[-1].conj()
    num = null[: n + 1] * yscale
    den = null[n + 1:]
    # normalise so the largest denominator coefficient is 1
    piv = den[np.argmax(np.abs(den))]
    num, den = num / piv, den / piv
    fit = RationalFit(n, p.tau.value, radius, num, den)
    hold_theta = 2.0 * np.pi * (np.arange(2 * n) + 0.71) / (2 * n)
    hold = 0.8 * radius * np.exp(1j * hold_theta) + 0.05j * radius
    want = np.asarray(ell_rat_eval(p, hold), dtype=complex)
    got = fit(hold)
    resid = float(np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want))))
    if not resid < tol:
        raise NumericalError("rational fit failed its holdout check",
                             n=n, tau=p.tau.value, residual=resid,
                             singular_values=sing[-3:].tolist())
    return RationalFit(n, p.tau.value, radius, num, den, resid)


def match_critical_values(computed, reference, tol=1e-6):
    """Largest distance from a computed value to the nearest reference value.

    Infinity matches only infinity.  Relative distance is used for large values.
    """
    worst = 0.0
    for c in computed:
        best = math.inf
        for r in reference:
            ci, ri = is_infinite(c), is_infinite(r)
            if ci or ri:
                d = 0.0 if ci and ri else math.inf
            else:
                d = abs(c - r) / max(1.0, abs(r))
            best = min(best, d)
        worst = max(worst, best)
    return worst


# ---------------------------------------------------------------------------
# modular group action
# ---------------------------------------------------------------------------

def gamma0_member(m, n):
    if not isinstance(m, ModularMatrix):
        m = ModularMatrix.from_rows(m)
    return m.c % n == 0


def gamma0_apply(m, tau):
    if not isinstance(m, ModularMatrix):
        m = ModularMatrix.from_rows(m)
    t = elliptic.as_tau(tau).value
    return elliptic.ModularTau((m.a * t + m.b) / (m.c * t + m.d))


def cross_ratio(z1, z2, z3, z4):
    """(z1, z2; z3, z4) = (z1-z3)(z2-z4) / ((z1-z4)(z2-z3)), allowing one infinity."""
    pts = [complex(z) for z in (z1, z2, z3, z4)]
    inf = [not np.isfinite(z) for z in pts]
    if sum(inf) > 1:
        raise DomainError("cross ratio needs at most one point at infinity")
    pairs_num = [(0, 2), (1, 3)]
    pairs_den = [(0, 3), (1, 2)]

    def prod(pairs):
        out = 1.0 + 0j
        for i, j in pairs:
            if inf[i] or inf[j]:
                continue
            out *= pts[i] - pts[j]
        return out

    return prod(pairs_num) / prod(pairs_den)


def j_invariant_of_points(points):
    """j of the elliptic curve branched over four points of the sphere."""
    if len(points) != 4:
        raise DomainError(f"need exactly four branch points, got {len(points)}")
    lam = cross_ratio(*points)
    return 256.0 * (lam * lam - lam + 1.0) ** 3 / (lam * lam * (lam - 1.0) ** 2)


def _j_close(j1, j2):
    return abs(j1 - j2) / max(1.0, abs(j1), abs(j2))


@dataclass(frozen=True)
class EquivalenceReport:
    n: int
    tau: complex
    tau2: complex
    gamma: complex
    max_deviation: float
    cross_ratio_deviation: float
    verified: bool
    message: str = ""


def _sample_points(tau, count=32):
    t = elliptic.as_tau(tau).value
    j = np.arange(count)
    u = 0.13 + 0.71 * ((j * 0.6180339887498949) % 1.0)
    v = 0.11 + 0.67 * ((j * 0.7548776662466927) % 1.0)
    return elliptic.weierstrass_p(u + v * t, t)


def equivalence_check(n, tau, m, tol=EQUIV_TOL):
    """Check the predicted conjugacy between n_tau and n_{M tau} for M in Gamma0(n).

    With gamma = c tau + d both conjugators are x -> gamma^2 x, i.e.
    gamma^2 n_tau(x) = n_{M tau}(gamma^2 x).
    """
    if not isinstance(m, ModularMatrix):
        m = ModularMatrix.from_rows(m)
    if not gamma0_member(m, n):
        raise DomainError(f"matrix {m.rows()} is not in Gamma0({n})")
    t1 = elliptic.as_tau(tau).value
    t2 = gamma0_apply(m, t1).value
    g = m.c * t1 + m.d
    g2 = g * g
    x = _sample_points(t1)
    lhs = g2 * np.asarray(ell_rat_eval(n, x, t1))
    rhs = np.asarray(ell_rat_eval(n, g2 * x, t2))
    dev = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))))
    cv1 = ell_rat_critical_values(n, t1).half_period_values
    cv2 = ell_rat_critical_values(n, t2).half_period_values
    jdev = _j_close(j_invariant_of_points(cv1), j_invariant_of_points(cv2))
    ok = dev < tol and jdev < CROSS_RATIO_TOL
    msg = "verified" if ok else "deviation above tolerance"
    return EquivalenceReport(n, t1, t2, g, dev, float(jdev), bool(ok), msg)


# ---------------------------------------------------------------------------
# the loop C_tau
# ---------------------------------------------------------------------------

def jordan_loop(tau, m):
    """m samples of wp_tau along Im z = Im(tau)/4, Re z = j/m."""
    if m < 8:
        raise DomainError("jordan_loop needs m >= 8")
    t = elliptic.as_tau(tau).value
    z = np.arange(m) / m + 0.25j * t.imag
    return elliptic.weierstrass_p(z, t)


def distance_to_loop(w, tau):
    """How far the wp-preimage of w sits from the lines Im z = +-Im(tau)/4."""
    t = elliptic.as_tau(tau).value
    z = np.asarray(elliptic.inverse_p(w, t), dtype=complex)
    y = np.mod(z.imag, t.imag)
    return np.minimum(np.abs(y - 0.25 * t.imag), np.abs(y - 0.75 * t.imag))


def winding_number(loop, point):
    loop = np.asarray(loop, dtype=complex)
    d = np.append(loop, loop[0]) - point
    ang = np.angle(d[1:] / d[:-1])
    return int(round(float(np.sum(ang)) / (2.0 * np.pi)))


def cheby_ellrat_j_invariants(n, t):
    """j-invariants of T_{n,t} and of n_{tau/2} (tau = 4ti/pi) from critical values."""
    g = elliptic.gamma_of_t(n * t)
    pts = (g, -g, 1.0 / g, -1.0 / g)
    tau_half = 2.0j * t / math.pi
    ell = ell_rat_critical_values(n, tau_half).half_period_values
    return j_invariant_of_points(pts), j_invariant_of_points(ell)
