"""Finite Blaschke products as endomorphisms of the unit disk.

A product is stored in zero form: a unimodular constant ``rho`` and the
multiset of zeros, all strictly inside the disk.  Polynomial coefficients
are derived on demand and never stored.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from .errors import DomainError, NumericalError

CONSTRUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-8
CLUSTER_RADIUS = 1e-7
FLAT_TOL = 1e-9
PREIMAGE_CLUSTER = 1e-5
DEGREE_CAP = 4096
RHO_PROBE = 0.987


def identity_tolerance(degree):
    """Default tolerance for identity checks at a given degree."""
    return 1e-8 if degree <= 16 else 1e-6


@dataclass(frozen=True)
class FiniteBlaschkeProduct:
    rho: complex
    zeros: tuple = field(default_factory=tuple)

    def __post_init__(self):
        rho = complex(self.rho)
        zeros = tuple(complex(a) for a in np.ravel(np.asarray(self.zeros, dtype=complex)))
        if not math.isfinite(abs(rho)) or abs(abs(rho) - 1.0) > CONSTRUCTION_TOL:
            raise DomainError(f"rho must be unimodular, |rho| = {abs(rho)!r}")
        if not zeros:
            raise DomainError("a finite Blaschke product needs at least one zero")
        for a in zeros:
            if not abs(a) < 1.0:
                raise DomainError(f"zero {a} is not inside the unit disk")
        object.__setattr__(self, "rho", rho / abs(rho))
        object.__setattr__(self, "zeros", zeros)

    @property
    def degree(self):
        return len(self.zeros)

    @property
    def zeros_array(self):
        return np.array(self.zeros, dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = kernels.blaschke_eval(self.rho, self.zeros_array, z)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        _, der = kernels.blaschke_eval_deriv(self.rho, self.zeros_array, z)
        return complex(der) if der.ndim == 0 else der

    def value_and_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return kernels.blaschke_eval_deriv(self.rho, self.zeros_array, z)

    def numerator(self):
        """Coefficients (highest first) of rho * prod (z - a)."""
        return self.rho * np.poly(self.zeros_array)

    def denominator(self):
        """Coefficients (highest first) of prod (1 - conj(a) z)."""
        q = np.array([1.0 + 0j])
        for a in self.zeros:
            q = np.convolve(q, [-np.conj(a), 1.0])
        return q

    def to_dict(self):
        return {
            "rho": {"re": self.rho.real, "im": self.rho.imag},
            "zeros": [{"re": a.real, "im": a.imag} for a in self.zeros],
        }

    @classmethod
    def from_dict(cls, data):
        rho = complex(data["rho"]["re"], data["rho"]["im"])
        zeros = [complex(a["re"], a["im"]) for a in data["zeros"]]
        return cls(rho, tuple(zeros))

    def __repr__(self):
        zs = ", ".join(f"{a:.6g}" for a in self.zeros)
        return f"FiniteBlaschkeProduct(rho={self.rho:.6g}, zeros=[{zs}])"


def make_fbp(rho, zeros):
    return FiniteBlaschkeProduct(complex(rho), tuple(np.ravel(np.asarray(zeros, dtype=complex))))


def eval_fbp(f, z):
    return f(z)


def eval_derivative(f, z):
    return f.derivative(z)


def power_map(n, rho=1.0):
    """rho * z^n."""
    if n < 1:
        raise DomainError("power map needs n >= 1")
    return make_fbp(rho, [0.0] * n)


def identity():
    return power_map(1)


def mobius_factor(a, rho=1.0):
    """rho * (z - a)/(1 - conj(a) z)."""
    return make_fbp(rho, [a])


# ---------------------------------------------------------------------------
# disk automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskAutomorphism:
    """z -> rotation * (z + center) / (1 + conj(center) z)."""

    rotation: complex = 1.0
    center: complex = 0.0

    def __post_init__(self):
        lam = complex(self.rotation)
        a = complex(self.center)
        if abs(abs(lam) - 1.0) > CONSTRUCTION_TOL:
            raise DomainError(f"rotation must be unimodular, got |rotation| = {abs(lam)}")
        if not abs(a) < 1.0:
            raise DomainError(f"center {a} must lie inside the unit disk")
        object.__setattr__(self, "rotation", lam / abs(lam))
        object.__setattr__(self, "center", a)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        a = self.center
        out = self.rotation * (z + a) / (1.0 + np.conj(a) * z)
        return complex(out) if out.ndim == 0 else out

    def matrix(self):
        lam, a = self.rotation, self.center
        return np.array([[lam, lam * a], [np.conj(a), 1.0]], dtype=complex)

    @classmethod
    def from_matrix(cls, m):
        (p, q), (_, s) = m
        return cls(p / s, q / p)

    def inverse(self):
        lam = self.rotation
        return DiskAutomorphism(np.conj(lam), -lam * self.center)

    def then(self, other):
        """other o self."""
        return DiskAutomorphism.from_matrix(other.matrix() @ self.matrix())

    def as_fbp(self):
        # lam (z + a)/(1 + conj(a) z) has zero -a
        return make_fbp(self.rotation, [-self.center])

    @classmethod
    def iota(cls, a):
        return cls(1.0, a)

    @classmethod
    def rotation_by(cls, lam):
        return cls(lam, 0.0)


def iota(a):
    """The automorphism z -> (z + a)/(1 + conj(a) z)."""
    return DiskAutomorphism.iota(a)


def pseudo_hyperbolic(z, w):
    z, w = complex(z), complex(w)
    return abs(z - w) / abs(1.0 - np.conj(w) * z)


# ---------------------------------------------------------------------------
# root finding helpers
# ---------------------------------------------------------------------------

def _polish(coeffs, roots, steps=2):
    """Newton polishing; a step is kept only when it lowers the residual."""
    dcoeffs = np.polyder(coeffs)
    roots = np.array(roots, dtype=complex)
    for _ in range(steps):
        val = np.polyval(coeffs, roots)
        der = np.polyval(dcoeffs, roots)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = roots - val / der
        ok = np.isfinite(cand) & (np.abs(np.polyval(coeffs, cand)) < np.abs(val))
        roots = np.where(ok, cand, roots)
    return roots


def poly_roots(coeffs, polish_steps=2):
    coeffs = np.asarray(coeffs, dtype=complex)
    # leading coefficients at rounding level only produce spurious huge roots
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    lead = 0
    while lead < coeffs.size and abs(coeffs[lead]) <= 1e-14 * scale:
        lead += 1
    coeffs = coeffs[lead:]
    if coeffs.size <= 1:
        return np.array([], dtype=complex)
    return _polish(coeffs, np.roots(coeffs), polish_steps)


def _cluster_radius(m, base=CLUSTER_RADIUS):
    # a root of multiplicity m moves by about eps^(1/m) under rounding
    if m <= 1:
        return base
    return max(base, 30.0 * 1e-15 ** (1.0 / m))


def _link(points, radius):
    """Single-linkage components at the given radius (lists of indices)."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        if abs(points[i] - points[j]) <= radius:
            parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return [[points[i] for i in c] for c in comps.values()]


def _diameter(pts):
    return max((abs(a - b) for a, b in itertools.combinations(pts, 2)), default=0.0)


def _flat(pts, values, base):
    # a perturbed m-fold critical point keeps f constant to order m + 1,
    # so distinct critical points that merely sit close show up in f
    if values is None or _diameter(pts) <= base:
        return True
    v = [values(p) for p in pts]
    return _diameter(v) <= FLAT_TOL


def _split(pts, base, values=None):
    if len(pts) == 1 or (_diameter(pts) <= _cluster_radius(len(pts), base)
                         and _flat(pts, values, base)):
        return [pts]
    for m in range(len(pts) - 1, 0, -1):
        comps = _link(pts, _cluster_radius(m, base))
        if len(comps) > 1:
            return [c for comp in comps for c in _split(comp, base, values)]
    return [[p] for p in pts]


def cluster_points(points, radius=CLUSTER_RADIUS, multiplicity_aware=True, values=None):
    """Group nearby points; returns a sorted list of (centroid, multiplicity).

    A root of multiplicity m is perturbed by roughly eps^(1/m) under
    floating point, so a group of m points is accepted as one cluster when
    its diameter is below ``max(radius, 30 * 1e-15 ** (1/m))``.  Without
    ``multiplicity_aware`` plain single linkage at ``radius`` is used.
    When ``values`` is given, a wide group is only merged if that function
    is constant on it to within ``FLAT_TOL``.
    """
    pts = [complex(p) for p in points]
    if not pts:
        return []
    if multiplicity_aware:
        groups = _split(pts, radius, values)
    else:
        groups = _link(pts, radius)
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    out.sort(key=lambda cm: (round(cm[0].real, 9), round(cm[0].imag, 9)))
    return out


# ---------------------------------------------------------------------------
# composition and iteration
# ---------------------------------------------------------------------------

def _rho_from_probe(target, zeros, count=16):
    # on the circle the zero-only product is unimodular, so averaging the
    # ratio over several points damps the error from any one evaluation
    zeros = np.asarray(zeros, dtype=complex)
    z = np.exp(2j * np.pi * (np.arange(count) + 0.123) / count)
    base = kernels.blaschke_eval(1.0, zeros, z)
    want = np.array([target(w) for w in z], dtype=complex)
    ok = np.isfinite(want) & (np.abs(base) > 0.5)
    if np.any(ok):
        ratio = want[ok] / base[ok]
        rho = np.mean(ratio / np.abs(ratio))
        if abs(rho) > 1e-6:
            return rho / abs(rho)
    for z0 in (RHO_PROBE, 0.5 + 0.5j, -0.3 + 0.8j, 0.1 - 0.6j):
        w = target(z0)
        b = kernels.blaschke_eval(1.0, zeros, np.array([z0]))[0]
        if abs(b) > 1e-8 and np.isfinite(w):
            return (w / b) / abs(w / b)
    raise NumericalError("could not fix the unimodular constant", zeros=list(zeros))


def _refine_cluster(coeffs, pts, steps=4):
    """Re-solve a tight group of m roots about its centre.

    The centre is a simple root of the (m-1)th derivative, so it is well
    conditioned; the offsets then come from the local Taylor polynomial.
    """
    m = len(pts)
    centre = complex(np.mean(pts))
    d = np.polyder(coeffs, m - 1)
    dd = np.polyder(d)
    for _ in range(steps):
        den = np.polyval(dd, centre)
        if den == 0:
            break
        step = np.polyval(d, centre) / den
        if not np.isfinite(step) or abs(step) > 1e-4:
            break
        centre -= step
    taylor = []
    q = np.asarray(coeffs, dtype=complex)
    for j in range(m + 1):
        taylor.append(np.polyval(q, centre) / math.factorial(j))
        q = np.polyder(q)
    w = np.roots(taylor[::-1]) if abs(taylor[m]) > 0 else np.zeros(m, dtype=complex)
    if w.size != m:
        w = np.concatenate([w, np.zeros(m - w.size, dtype=complex)])
    return centre + w


def _refine_preimages(g, a, coeffs, r):
    out = []
    # near-multiple preimages split by at most a few eps^(1/m); anything
    # farther apart is resolved well enough by Newton on the product form
    for grp in _link([complex(x) for x in r], PREIMAGE_CLUSTER):
        if len(grp) == 1:
            out.append(_polish_preimages(g, a, grp)[0])
        else:
            out.extend(_refine_cluster(coeffs, grp).tolist())
    return np.array(out, dtype=complex)


def _polish_preimages(g, a, r, steps=3):
    # expanded coefficients lose digits when the zeros of g cluster;
    # Newton on the product form does not
    zs = np.asarray(g.zeros, dtype=complex)
    r = np.array(r, dtype=complex)
    val, der = kernels.blaschke_eval_deriv(g.rho, zs, r)
    res = np.abs(val - a)
    for _ in range(steps):
        with np.errstate(all="ignore"):
            cand = r - (val - a) / der
        v2, d2 = kernels.blaschke_eval_deriv(g.rho, zs, cand)
        r2 = np.abs(v2 - a)
        better = np.isfinite(r2) & (r2 < res) & (np.abs(cand - r) < 1e-3)
        r = np.where(better, cand, r)
        val = np.where(better, v2, val)
        der = np.where(better, d2, der)
        res = np.where(better, r2, res)
    return r


def _conformal_centre(zeros, rounds=8):
    """A point about which the zeros look spread out (a barycentre in the disk)."""
    zs = np.asarray(zeros, dtype=complex)
    p = 0j
    for _ in range(rounds):
        w = (zs - p) / (1.0 - np.conj(p) * zs)
        step = complex(np.mean(w))
        # move by the hyperbolic mean of the recentred zeros, damped
        step *= 0.5
        p = (step + p) / (1.0 + np.conj(p) * step)
        if abs(step) < 1e-12:
            break
    return p


def _preimages(g, a, p):
    """All solutions of g(z) = a, solved in the coordinate w with z = iota_p(w)."""
    zs = np.asarray(g.zeros, dtype=complex)
    if p != 0:
        b = (zs - p) / (1.0 - np.conj(p) * zs)
        rho = _rho_from_probe(lambda w: g((w + p) / (1.0 + np.conj(p) * w)), b)
        h = FiniteBlaschkeProduct(rho, tuple(complex(x) for x in b))
    else:
        h = g
    c = h.numerator() - a * h.denominator()
    r = poly_roots(c)
    if r.size != g.degree:
        raise NumericalError("wrong number of preimages in composition", a=a, found=r.size)
    r = _refine_preimages(h, a, c, r)
    if p != 0:
        r = (r + p) / (1.0 + np.conj(p) * r)
        r = _polish_preimages(g, a, r)
    return r


def compose(f, g):
    """f o g as a new product."""
    deg = f.degree * g.degree
    if deg > DEGREE_CAP:
        raise DomainError(f"composite degree {deg} exceeds the cap {DEGREE_CAP}")
    # solving about the zeros' barycentre keeps the coefficient form well
    # conditioned when the zeros of g bunch up near one boundary point
    p = _conformal_centre(g.zeros)
    if abs(p) < 0.1:
        p = 0j
    zeros = []
    for a in f.zeros:
        if a == 0:
            # preimages of 0 are the zeros of g, known exactly
            zeros.extend(g.zeros)
            continue
        zeros.extend(_preimages(g, a, p).tolist())
    zeros = np.array(zeros, dtype=complex)
    if np.any(np.abs(zeros) >= 1.0 - 1e-12):
        raise NumericalError("composition produced a zero on or outside the unit circle",
                             max_modulus=float(np.max(np.abs(zeros))))
    rho = _rho_from_probe(lambda z: f(g(z)), zeros)
    return make_fbp(rho, zeros)


def compose_many(*maps):
    """maps[0] o maps[1] o ... o maps[-1]."""
    if not maps:
        raise ValueError("nothing to compose")
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def iterate(f, k, cap=DEGREE_CAP):
    if k < 1:
        raise DomainError("iterate needs k >= 1")
    if f.degree ** k > cap:
        raise DomainError(f"iterate degree {f.degree}^{k} exceeds the cap {cap}")
    out = f
    for _ in range(k - 1):
        # f^(j+1) = f^j o f keeps every root solve at degree deg f
        out = compose(out, f)
    return out


def multiply(f, g):
    return make_fbp(f.rho * g.rho, f.zeros + g.zeros)


def conjugate_by(f, phi):
    """phi o f o phi^{-1} for a disk automorphism phi."""
    return compose(phi.as_fbp(), compose(f, phi.inverse().as_fbp()))


def pre_post(eph, f, eps):
    """eph o f o eps."""
    return compose(eph.as_fbp(), compose(f, eps.as_fbp()))


# ---------------------------------------------------------------------------
# critical data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalData:
    critical_points: tuple  # ((point, multiplicity), ...)
    critical_values: tuple

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.critical_points)


def _dedupe(values, radius=CLUSTER_RADIUS):
    out = []
    for v in values:
        if all(abs(v - w) > radius for w in out):
            out.append(complex(v))
    return out


def _refine_simple(f, c, steps=3, h=1e-5):
    """Newton on f' = 0 directly, with f'' from a central difference of f'."""
    for _ in range(steps):
        d0 = f.derivative(c)
        d2 = (f.derivative(c + h) - f.derivative(c - h)) / (2.0 * h)
        if d2 == 0 or not np.isfinite(d2):
            break
        step = d0 / d2
        if abs(step) > 1e-4 or abs(f.derivative(c - step)) >= abs(d0):
            break
        c = c - step
    return complex(c)


def _distinct_zeros(zeros, tol=1e-13):
    groups = _link([complex(a) for a in zeros], tol)
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _log_derivative_numerator(distinct):
    """Numerator of f'/f = sum m (1 - |b|^2) / ((z - b)(1 - conj(b) z)) over distinct zeros b."""
    factors = [np.polymul([1.0, -b], [-np.conj(b), 1.0]) for b, _ in distinct]
    total = np.zeros(1, dtype=complex)
    for i, (b, m) in enumerate(distinct):
        term = np.array([m * (1.0 - abs(b) ** 2)], dtype=complex)
        for j, fac in enumerate(factors):
            if j != i:
                term = np.polymul(term, fac)
        total = np.polyadd(total, term)
    return total


def _raw_critical_points(zeros, degree):
    distinct = _distinct_zeros(zeros)
    # a zero of multiplicity m is a critical point of multiplicity m - 1;
    # the remaining ones are the interior roots of the log-derivative numerator
    known = [(b, m - 1) for b, m in distinct if m > 1]
    want = len(distinct) - 1
    inside = np.array([], dtype=complex)
    if want > 0:
        roots = poly_roots(_log_derivative_numerator(distinct), polish_steps=3)
        inside = roots[np.abs(roots) < 1.0]
        if inside.size != want:
            # roots near the circle are ambiguous; fall back on pairing with reflections
            order = np.argsort(np.abs(roots))
            inside = roots[order[:want]]
            if np.any(np.abs(inside) >= 1.0 - 1e-9):
                raise NumericalError("interior critical point count mismatch",
                                     degree=degree, found=int(np.sum(np.abs(roots) < 1.0)))
    return known, inside


def critical_data(f):
    if f.degree < 2:
        raise DomainError("critical data needs degree >= 2")
    # work about the zeros' barycentre, as in compose; critical points move
    # with the automorphism and keep their multiplicities
    p = _conformal_centre(f.zeros)
    if abs(p) < 0.1:
        p = 0j
    zs = np.asarray(f.zeros, dtype=complex)
    b = (zs - p) / (1.0 - np.conj(p) * zs)
    known, inside = _raw_critical_points(b, f.degree)

    def back(w):
        return (w + p) / (1.0 + np.conj(p) * w)

    known = [(complex(back(c)) if p else c, m) for c, m in known]
    inside = back(inside) if p else inside
    clusters = [(_refine_simple(f, c) if m == 1 else c, m) for c, m in cluster_points(inside, values=f)]
    clusters = sorted(known + clusters, key=lambda cm: (round(cm[0].real, 9), round(cm[0].imag, 9)))
    values = _dedupe([f(c) for c, _ in clusters])
    values.sort(key=lambda v: (round(v.real, 9), round(v.imag, 9)))
    return CriticalData(tuple(clusters), tuple(values))


# ---------------------------------------------------------------------------
# total ramification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TotallyRamifiedForm:
    """f = eph o z^s o eps.  ``self_conjugate`` means eps = iota_{-p}, eph = iota_p o rho."""

    p: complex
    v: complex
    rho: complex
    s: int
    eps: DiskAutomorphism
    eph: DiskAutomorphism
    self_conjugate: bool

    def reconstruct(self):
        return pre_post(self.eph, power_map(self.s), self.eps)


def _single_critical_cluster(f):
    cd = critical_data(f)
    if len(cd.critical_points) == 1 and cd.critical_points[0][1] == f.degree - 1:
        return _recentre(f, cd.critical_points[0][0])
    return None


def _recentre(f, p, rounds=2):
    # the roots of f = f(p) sit symmetrically about the true ramification
    # point, so their mean is far better conditioned than the cluster itself
    for _ in range(rounds):
        c = np.asarray(f.numerator() - f(p) * f.denominator(), dtype=complex)
        if c.size != f.degree + 1 or abs(c[0]) < 1e-12 * np.max(np.abs(c)):
            break
        # mean of the roots straight from the two leading coefficients
        q = complex(-c[1] / (f.degree * c[0]))
        if not abs(q) < 1.0 or abs(q - p) > 1e-4:
            break
        p = q
    return p


def totally_ramified_normal_form(f, tol=None):
    """Normal form of a totally ramified product, or None.

    With p the critical point and v = f(p): f = iota_v o (rho z^s) o iota_{-p}.
    """
    s = f.degree
    if s < 2:
        raise DomainError("total ramification needs degree >= 2")
    p = _single_critical_cluster(f)
    if p is None:
        return None
    tol = identity_tolerance(s) if tol is None else tol
    v = f(p)
    eps = iota(-p)
    w0 = 0.6 + 0.3j
    # rho w0^s = iota_{-v}(f(iota_p(w0)))
    rho = iota(-v)(f(iota(p)(w0))) / w0 ** s
    if abs(abs(rho) - 1.0) > 1e-6:
        return None
    rho = rho / abs(rho)
    eph = DiskAutomorphism(rho, 0.0).then(iota(v))
    self_conj = abs(p - v) <= tol
    form = TotallyRamifiedForm(p, v, rho, s, eps, eph, self_conj)
    zs = np.exp(2j * np.pi * np.arange(2 * s + 1) / (2 * s + 1))
    if np.max(np.abs(pre_post(eph, power_map(s), eps)(zs) - f(zs))) > tol:
        return None
    return form


def is_totally_ramified(f):
    if f.degree < 2:
        raise DomainError("total ramification needs degree >= 2")
    return totally_ramified_normal_form(f) is not None


# ---------------------------------------------------------------------------
# association f = eph o g o eps
# ---------------------------------------------------------------------------

def _boundary_samples(count, phase=0.123):
    return np.exp(1j * (phase + 2.0 * np.pi * np.arange(count) / count))


def _same_witness(w1, w2, tol=1e-6):
    return all(abs(a.rotation - b.rotation) < tol and abs(a.center - b.center) < tol
               for a, b in zip(w1, w2))


def _automorphism_through(p1, p2, q1, q2):
    """Automorphisms eps with eps(p1) = q1 and eps(p2) = q2 (0, 1 or 2 of them)."""
    # move p1 and q1 to the origin; then a rotation must send iota_{-p1}(p2) to iota_{-q1}(q2)
    a = iota(-p1)(p2)
    b = iota(-q1)(q2)
    if abs(abs(a) - abs(b)) > 1e-5 or abs(a) < 1e-12:
        return None
    theta = b / a
    theta /= abs(theta)
    return iota(-p1).then(DiskAutomorphism(theta, 0.0)).then(iota(q1))


def _solve_eph(f, g, eps, samples):
    """eph with f = eph o g o eps, determined from two interior samples."""
    z = samples
    gz = g(eps(z))
    fz = f(z)
    for i, j in itertools.combinations(range(len(z)), 2):
        if abs(gz[i] - gz[j]) > 1e-3:
            return _automorphism_through(gz[i], gz[j], fz[i], fz[j])
    return None


def associated(f, g, tol=None, all_witnesses=False):
    """Disk automorphisms (eps, eph) with f = eph o g o eps, or None.

    With ``all_witnesses=True`` a list of distinct witnesses is returned.
    """
    if f.degree != g.degree:
        return [] if all_witnesses else None
    n = f.degree
    tol = identity_tolerance(n) if tol is None else tol
    if n == 1:
        eps = DiskAutomorphism()
        eph = as_automorphism(g).inverse().then(as_automorphism(f))
        return [(eps, eph)] if all_witnesses else (eps, eph)
    zs = _boundary_samples(2 * n + 1)
    interior = np.array([0.1 + 0.05j, -0.4 + 0.2j, 0.3 - 0.5j, 0.6j, -0.7, 0.2 + 0.7j])

    def verify(eps, eph):
        return np.max(np.abs(eph(g(eps(zs))) - f(zs))) <= tol

    nf_f = totally_ramified_normal_form(f)
    nf_g = totally_ramified_normal_form(g)
    if (nf_f is None) != (nf_g is None):
        return [] if all_witnesses else None
    if nf_f is not None:
        # f = A z^s B, g = C z^s D  =>  f = (A C^{-1}) g (D^{-1} B)
        eps = nf_f.eps.then(nf_g.eps.inverse())
        eph = nf_g.eph.inverse().then(nf_f.eph)
        if verify(eps, eph):
            return [(eps, eph)] if all_witnesses else (eps, eph)
        return [] if all_witnesses else None

    cf = critical_data(f)
    cg = critical_data(g)
    pts_f = cf.critical_points
    pts_g = cg.critical_points
    if sorted(m for _, m in pts_f) != sorted(m for _, m in pts_g):
        return [] if all_witnesses else None
    found = []
    # the hyperbolically closest pair is the best conditioned anchor
    (p1, m1), (p2, m2) = min(itertools.permutations(pts_f, 2),
                             key=lambda pq: pseudo_hyperbolic(pq[0][0], pq[1][0]))
    d_f = pseudo_hyperbolic(p1, p2)
    for (q1, n1), (q2, n2) in itertools.permutations(pts_g, 2):
        if n1 != m1 or n2 != m2:
            continue
        if abs(pseudo_hyperbolic(q1, q2) - d_f) > 1e-5:
            continue
        eps = _automorphism_through(p1, p2, q1, q2)
        if eps is None:
            continue
        eph = _solve_eph(f, g, eps, interior)
        if eph is None or not verify(eps, eph):
            continue
        if not any(_same_witness((eps, eph), w) for w in found):
            found.append((eps, eph))
        if not all_witnesses:
            break
    if all_witnesses:
        return found
    return found[0] if found else None


def as_automorphism(f):
    """The degree-one product rho (z - a)/(1 - conj(a) z) as a DiskAutomorphism."""
    if f.degree != 1:
        raise DomainError("only degree-one products are automorphisms")
    return DiskAutomorphism(f.rho, -f.zeros[0])


def equals_fbp(f, g, tol=None):
    if f.degree != g.degree:
        return False
    tol = identity_tolerance(f.degree) if tol is None else tol
    if abs(f.rho - g.rho) > tol:
        return False
    a = f.zeros_array
    b = g.zeros_array
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return bool(np.max(cost[rows, cols]) <= tol)


def max_deviation(f, g, samples):
    return float(np.max(np.abs(f(samples) - g(samples))))


def random_fbp(rng, degree, radius=0.9):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, degree))
    th = rng.uniform(0.0, 2.0 * np.pi, degree)
    return make_fbp(np.exp(1j * rng.uniform(0, 2 * np.pi)), r * np.exp(1j * th))
