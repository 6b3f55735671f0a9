"""Factorisation tools for the composition monoid of finite Blaschke products.

Recognisers split three families explicitly (totally ramified maps,
Chebyshev-Blaschke maps, maps with a rotational symmetry); for anything
else block systems of the monodromy group only certify which degrees a
factorisation could have.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment, minimize

from . import elliptic
from .blaschke import (DiskAutomorphism, FiniteBlaschkeProduct, associated, compose,
                       critical_data, equals_fbp, identity_tolerance, iota, iterate,
                       make_fbp, multiply, power_map, pre_post, pseudo_hyperbolic,
                       totally_ramified_normal_form, cluster_points)
from .cheby import cheby_blaschke
from .errors import DomainError, NumericalError
from .monodromy import block_systems, numerical_monodromy


def smallest_prime_factor(n):
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return p
    return n


def _boundary_check(f, g, h, tol):
    zs = np.exp(1j * (0.37 + 2.0 * np.pi * np.arange(4 * f.degree + 3) / (4 * f.degree + 3)))
    dev = float(np.max(np.abs(g(h(zs)) - f(zs))))
    return dev, dev <= tol


@dataclass(frozen=True)
class Decomposition:
    """Result of decompose_recognized.

    ``kind`` is one of "totally_ramified", "chebyshev", "rotational",
    "symmetry_only" or "degrees_only".  ``outer`` and ``inner`` are set
    when explicit factors were found (f = outer o inner).
    """

    kind: str
    outer: FiniteBlaschkeProduct = None
    inner: FiniteBlaschkeProduct = None
    deviation: float = None
    details: dict = field(default_factory=dict)
    block_sizes: tuple = ()

    @property
    def has_factors(self):
        return self.outer is not None

    def __iter__(self):
        # allows g, h = decomposition
        yield self.outer
        yield self.inner


# ---------------------------------------------------------------------------
# recognisers
# ---------------------------------------------------------------------------

def _recognise_totally_ramified(f, tol):
    nf = totally_ramified_normal_form(f)
    if nf is None:
        return None
    s = nf.s
    p = smallest_prime_factor(s)
    if p == s:
        return None
    g = compose(nf.eph.as_fbp(), power_map(p))
    h = compose(power_map(s // p), nf.eps.as_fbp())
    dev, ok = _boundary_check(f, g, h, tol)
    if not ok:
        return None
    return Decomposition("totally_ramified", g, h, dev,
                         {"p": nf.p, "v": nf.v, "rho": nf.rho, "s": s})


def cheby_parameter_from_values(v1, v2, n):
    """t such that the critical values of T_{n,t} have the hyperbolic spread of v1, v2."""
    delta = pseudo_hyperbolic(v1, v2)
    if not 0.0 < delta < 1.0:
        return None
    gam = (1.0 - math.sqrt(1.0 - delta * delta)) / delta

    def resid(log_s):
        return math.log(elliptic.gamma_of_t(math.exp(log_s))) - math.log(gam)

    lo, hi = math.log(1e-3), math.log(50.0)
    if resid(lo) * resid(hi) > 0:
        return None
    s = math.exp(brentq(resid, lo, hi, xtol=1e-15, rtol=1e-15))
    return s / n


def _recognise_chebyshev(f, tol):
    n = f.degree
    cd = critical_data(f)
    if len(cd.critical_values) != 2 or any(m != 1 for _, m in cd.critical_points):
        return None
    t = cheby_parameter_from_values(cd.critical_values[0], cd.critical_values[1], n)
    if t is None:
        return None
    T = cheby_blaschke(n, t)
    witness = associated(f, T.product)
    if witness is None:
        return None
    eps, eph = witness
    m = smallest_prime_factor(n)
    if m == n:
        return None
    k = n // m
    outer = compose(eph.as_fbp(), cheby_blaschke(m, k * t).product)
    inner = compose(cheby_blaschke(k, t).product, eps.as_fbp())
    dev, ok = _boundary_check(f, outer, inner, tol)
    if not ok:
        return None
    return Decomposition("chebyshev", outer, inner, dev,
                         {"n": n, "t": t, "chi": n * t, "outer_degree": m,
                          "eps": eps, "eph": eph})


def conformal_barycenter(points):
    """Point c minimising sum -log(1 - |iota_{-c}(a)|^2) over the given disk points."""
    pts = np.asarray(points, dtype=complex)

    def energy(xy):
        c = complex(xy[0], xy[1])
        if abs(c) >= 0.999:
            return 1e6 * abs(c)
        w = (pts - c) / (1.0 - np.conj(c) * pts)
        return float(-np.sum(np.log1p(-np.abs(w) ** 2)))

    start = np.mean(pts)
    res = minimize(energy, [start.real, start.imag], method="Nelder-Mead",
                   options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000})
    return complex(res.x[0], res.x[1])


def _multiset_invariant(points, zeta, tol):
    if len(points) == 0:
        return True
    a = np.asarray(points)
    b = a * zeta
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return bool(np.max(cost[r, c]) <= tol)


def rotational_symmetry(f, tol=1e-7):
    """(center, k, r): nonzero centred zeros are invariant under exp(2 pi i / k); r zeros sit at the center."""
    c = conformal_barycenter(f.zeros)
    # snap to a zero when the barycentre lands on one
    za = f.zeros_array
    near = np.argmin(np.abs(za - c))
    if abs(za[near] - c) < 1e-6:
        c = complex(za[near])
    w = (za - c) / (1.0 - np.conj(c) * za)
    at_center = np.abs(w) < 1e-6
    r = int(np.sum(at_center))
    rest = w[~at_center]
    if rest.size == 0:
        return c, f.degree, r
    for k in range(rest.size, 1, -1):
        if rest.size % k:
            continue
        if _multiset_invariant(rest, np.exp(2j * np.pi / k), tol):
            return c, k, r
    return c, 1, r


def _recognise_rotational(f, tol):
    c, k, r = rotational_symmetry(f)
    if k < 2:
        return None
    d = math.gcd(k, r)
    if d < 2:
        return Decomposition("symmetry_only", details={"center": c, "k": k, "r": r})
    za = f.zeros_array
    w = (za - c) / (1.0 - np.conj(c) * za)
    # G has one zero per orbit of w -> exp(2 pi i/d) w, located at w^d
    groups = cluster_points((w ** d).tolist(), radius=1e-6)
    g_zeros = []
    for val, mult in groups:
        if mult % d:
            return Decomposition("symmetry_only", details={"center": c, "k": k, "r": r})
        g_zeros.extend([0.0 if abs(val) < 1e-12 else val] * (mult // d))
    inner = make_fbp(1.0, [c] * d)
    probe = 0.37 + 0.41j
    base = make_fbp(1.0, g_zeros)
    val = f(probe) / base(inner(probe))
    outer = make_fbp(val / abs(val), g_zeros)
    dev, ok = _boundary_check(f, outer, inner, tol)
    if not ok:
        return None
    return Decomposition("rotational", outer, inner, dev, {"center": c, "k": k, "r": r, "d": d})


def _block_sizes(f):
    try:
        rep = numerical_monodromy(f)
        return tuple(sorted({b.block_size for b in block_systems(rep)}))
    except NumericalError:
        return ()


def decompose_recognized(f, tol=None):
    """Try the family recognisers in order; see Decomposition for the result shapes.

    Returns None when no recogniser applies and no proper block system exists.
    """
    n = f.degree
    tol = identity_tolerance(n) if tol is None else tol
    if n < 4 or smallest_prime_factor(n) == n:
        return None
    fallback = None
    for recogniser in (_recognise_totally_ramified, _recognise_chebyshev, _recognise_rotational):
        out = recogniser(f, tol)
        if out is None:
            continue
        if out.has_factors:
            return out
        fallback = out
    sizes = _block_sizes(f)
    if fallback is not None:
        return Decomposition(fallback.kind, details=fallback.details, block_sizes=sizes)
    if sizes:
        return Decomposition("degrees_only", block_sizes=sizes)
    return None


# ---------------------------------------------------------------------------
# Ritt moves
# ---------------------------------------------------------------------------

def fbp_power(g, k):
    """g(z)^k as a product."""
    return make_fbp(g.rho ** k, list(g.zeros) * k)


def ritt_move_power(k, r, g, tol=None):
    """Both sides of z^r g(z)^k o z^k = z^k o z^r g(z^k)."""
    if k < 1 or r < 0:
        raise DomainError("need k >= 1 and r >= 0")
    if math.gcd(k, r) != 1:
        raise DomainError(f"gcd(k, r) must be 1, got gcd({k}, {r}) = {math.gcd(k, r)}")
    zk = power_map(k)
    left_outer = fbp_power(g, k) if r == 0 else multiply(power_map(r), fbp_power(g, k))
    lhs = compose(left_outer, zk)
    inner = compose(g, zk)
    right_inner = inner if r == 0 else multiply(power_map(r), inner)
    rhs = compose(zk, right_inner)
    tol = identity_tolerance(lhs.degree) if tol is None else tol
    if not equals_fbp(lhs, rhs, tol):
        raise NumericalError("power-type Ritt move produced unequal sides", k=k, r=r)
    return lhs, rhs


def ritt_move_cheby(p, q, t, tol=None):
    """Both sides of T_{p,qt} o T_{q,t} = T_{q,pt} o T_{p,t}."""
    if p < 2 or q < 2:
        raise DomainError("need p, q >= 2")
    lhs = compose(cheby_blaschke(p, q * t).product, cheby_blaschke(q, t).product)
    rhs = compose(cheby_blaschke(q, p * t).product, cheby_blaschke(p, t).product)
    tol = identity_tolerance(lhs.degree) if tol is None else tol
    if not equals_fbp(lhs, rhs, tol):
        raise NumericalError("Chebyshev-type Ritt move produced unequal sides", p=p, q=q, t=t)
    return lhs, rhs


# ---------------------------------------------------------------------------
# presentations and bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompletePresentation:
    """f = factors[0] o factors[1] o ... ; irreducibility is the caller's claim."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise DomainError("a presentation needs at least one factor")

    def composite(self):
        out = self.factors[-1]
        for u in reversed(self.factors[:-1]):
            out = compose(u, out)
        return out

    def degrees(self):
        return [u.degree for u in self.factors]


def presentation_length(pres, index):
    """Product of the degrees of the factors before position ``index`` (1-based)."""
    degs = pres.degrees() if isinstance(pres, CompletePresentation) else list(pres)
    if not 1 <= index <= len(degs):
        raise DomainError(f"index {index} outside 1..{len(degs)}")
    return math.prod(degs[: index - 1])


def zieve_muller_bound(n):
    if n < 2:
        raise DomainError("bound is stated for n >= 2")
    return int(math.floor(max(8.0, 2.0 + 2.0 * math.log2(n))))


@dataclass(frozen=True)
class CommonIteration:
    exponents: tuple  # (k, l) or None
    complete: bool
    tested: tuple = ()
    skipped: tuple = ()


def _iterate_values(f, k, z):
    for _ in range(k):
        z = f(z)
    return z


def common_iteration(f, g, max_exponent, degree_cap=4096, tol=None):
    """First (k, l) with f^k = g^l, searching k <= max_exponent."""
    df, dg = f.degree, g.degree
    if df < 2 or dg < 2:
        raise DomainError("common iteration needs degrees >= 2")
    tested, skipped = [], []
    probe = 0.83 * np.exp(1j * (0.3 + 2.0 * np.pi * np.arange(7) / 7))
    for k in range(1, max_exponent + 1):
        target = df ** k
        l = round(math.log(target) / math.log(dg))
        if l < 1 or dg ** l != target:
            continue
        if target > degree_cap:
            skipped.append((k, l))
            continue
        tested.append((k, l))
        if np.max(np.abs(_iterate_values(f, k, probe) - _iterate_values(g, l, probe))) > 1e-6:
            continue
        fk, gl = iterate(f, k, degree_cap), iterate(g, l, degree_cap)
        if equals_fbp(fk, gl, identity_tolerance(target) if tol is None else tol):
            return CommonIteration((k, l), not skipped, tuple(tested), tuple(skipped))
    return CommonIteration(None, not skipped, tuple(tested), tuple(skipped))


# ---------------------------------------------------------------------------
# Bilu-Tichy type pairs
# ---------------------------------------------------------------------------

def _as_fbp_or_one(p):
    return None if p is None or p == 1 else p


def bilu_tichy_pair(case_id, strict=False, **params):
    """Construct the pair {f1, g1} of the requested family.

    case_id in {"i", "ii", "iii", "iv", "v"}.  Parameters:
      i:   m, r, p (product or None)     -> {z^m, z^r p^m}, r >= 1, gcd(r, m) = 1
      ii:  a, p                          -> {z^2, z (z-a)/(1-conj(a) z) p^2}, a != 0
      iii: m, n, t                       -> {T_{m,nt}, T_{n,mt}}, gcd(m, n) = 1
      iv:  m, n, t                       -> {T_{m,nt}, -T_{n,mt}}, gcd(m, n) > 1
      v:   a, b                          -> {((z^2-a^2)/(1-conj(a)^2 z^2))^3, z^3 (z-b)/(1-conj(b) z)}
    ``strict`` enforces m, n >= 3 in cases iii and iv; otherwise m, n >= 2.
    The algebraic relation tying a and b in case v is not checked.
    """
    case = str(case_id).lower()
    if case == "i":
        m, r = int(params["m"]), int(params["r"])
        p = _as_fbp_or_one(params.get("p"))
        if m < 1:
            raise DomainError("case i: m must be >= 1")
        if r < 1:
            raise DomainError("case i: r must be >= 1")
        if math.gcd(r, m) != 1:
            raise DomainError("case i: r and m must be coprime")
        g = power_map(r) if p is None else multiply(power_map(r), fbp_power(p, m))
        return power_map(m), g
    if case == "ii":
        a = complex(params["a"])
        p = _as_fbp_or_one(params.get("p"))
        if a == 0:
            raise DomainError("case ii: a must be nonzero")
        if not abs(a) < 1:
            raise DomainError("case ii: a must lie in the unit disk")
        g = make_fbp(1.0, [0.0, a])
        if p is not None:
            g = multiply(g, fbp_power(p, 2))
        return power_map(2), g
    if case in ("iii", "iv"):
        m, n, t = int(params["m"]), int(params["n"]), float(params["t"])
        low = 3 if strict else 2
        if m < low or n < low:
            raise DomainError(f"case {case}: m and n must be >= {low}")
        if t <= 0:
            raise DomainError(f"case {case}: t must be positive")
        if case == "iii" and math.gcd(m, n) != 1:
            raise DomainError("case iii: m and n must be coprime")
        if case == "iv" and math.gcd(m, n) == 1:
            raise DomainError("case iv: m and n must share a factor")
        f1 = cheby_blaschke(m, n * t).product
        g1 = cheby_blaschke(n, m * t).product
        if case == "iv":
            g1 = make_fbp(-g1.rho, g1.zeros)
        return f1, g1
    if case == "v":
        a, b = complex(params["a"]), complex(params["b"])
        if not (abs(a) < 1 and abs(b) < 1):
            raise DomainError("case v: a and b must lie in the unit disk")
        f1 = make_fbp(1.0, [a, -a] * 3)
        g1 = make_fbp(1.0, [0.0, 0.0, 0.0, b])
        return f1, g1
    raise DomainError(f"unknown case {case_id!r}; expected one of i, ii, iii, iv, v")
