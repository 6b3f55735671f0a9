"""Chebyshev-Blaschke products T_{n,t}.

T_{n,t} descends multiplication by n on the cd-uniformised curve with
tau = 4 t i / pi.  Zeros come from an explicit cd formula; every product is
cross-checked against the transcendental route before it is handed out.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import elliptic
from .blaschke import FiniteBlaschkeProduct, compose, make_fbp
from .errors import ConstructionError, DomainError
from .permutations import Permutation

CROSS_CHECK_TOL = 1e-8
CROSS_CHECK_POINTS = 64
EQUIOSC_GRID = 2048
EQUIOSC_REL = 1e-6


@dataclass(frozen=True)
class ChebyBlaschke:
    n: int
    t: float
    product: FiniteBlaschkeProduct
    chi: float

    def __call__(self, z):
        return self.product(z)

    @property
    def degree(self):
        return self.n

    @property
    def gamma(self):
        return elliptic.gamma_of_t(self.t)

    @property
    def gamma_image(self):
        return elliptic.gamma_of_t(self.n * self.t)


def _tau_of_t(t):
    return 4.0j * t / math.pi


def _moduli(t):
    d = elliptic.modulus_from_t(t)
    return d.k, d.kp, d.K, d.Kp


def cheby_unscaled(n, t, w, branch=0):
    """The descent map on cd-coordinates: cd(u; k(tau)) -> cd(n K_n/K u; k(n tau)).

    ``branch`` selects which preimage u of w is used (0: as found, 1: the
    reflected representative -u + 4K + 2iK'); the result does not depend on it.
    """
    k, kp, big_k, big_kp = _moduli(t)
    kn, kpn, big_kn, _ = _moduli(n * t)
    u = np.asarray(elliptic.inverse_cd(w, k, kp), dtype=complex)
    if branch == 1:
        u = -u + 4.0 * big_k + 2.0j * big_kp
    scale = n * big_kn / big_k
    return elliptic.jacobi_functions(scale * u, kn, kpn).cd


def eval_cheby_transcendental(n, t, z, branch=0):
    """T_{n,t}(z) evaluated through inverse_cd and cd (no zero formula)."""
    _check_params(n, t)
    z = np.asarray(z, dtype=complex)
    sk = math.sqrt(_moduli(t)[0])
    skn = math.sqrt(_moduli(n * t)[0])
    out = skn * cheby_unscaled(n, t, z / sk, branch)
    return complex(out) if np.ndim(out) == 0 else out


def _check_params(n, t):
    if int(n) != n or n < 1:
        raise DomainError(f"degree n must be a positive integer, got {n}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")


def cheby_zeros(n, t):
    k, kp, big_k, _ = _moduli(t)
    u = (2.0 * np.arange(1, n + 1) - 1.0) * big_k / n
    cd = elliptic.jacobi_functions(u, k, kp).cd.real
    return math.sqrt(k) * cd


def _cross_check_points():
    # spiral of points filling the closed disk, away from symmetric coincidences
    j = np.arange(CROSS_CHECK_POINTS)
    r = 0.98 * np.sqrt((j + 0.5) / CROSS_CHECK_POINTS)
    return r * np.exp(2.0j * np.pi * j * 0.6180339887498949 + 0.1j)


def cheby_blaschke(n, t, validate=True):
    """Build T_{n,t}, normalised by T(gamma(t)) = gamma(nt)."""
    _check_params(n, t)
    n = int(n)
    t = float(t)
    zeros = cheby_zeros(n, t)
    g_t = elliptic.gamma_of_t(t)
    g_nt = elliptic.gamma_of_t(n * t)
    base = make_fbp(1.0, zeros)
    val = base(g_t)
    rho = g_nt / val
    if abs(abs(rho) - 1.0) > 1e-8:
        raise ConstructionError("normalisation constant is not unimodular",
                                n=n, t=t, rho=rho)
    rho = 1.0 if rho.real > 0 else -1.0
    product = make_fbp(rho, zeros)
    if validate and n > 1:
        z = _cross_check_points()
        dev = float(np.max(np.abs(product(z) - eval_cheby_transcendental(n, t, z))))
        if not dev < CROSS_CHECK_TOL:
            raise ConstructionError("zero formula and transcendental route disagree",
                                    n=n, t=t, max_deviation=dev)
    return ChebyBlaschke(n, t, product, n * t)


def moduli_chi(f):
    if f.n < 3:
        raise DomainError("the moduli are only well defined for degree >= 3")
    return f.n * f.t


def nested(m, n, t):
    """T_{m,nt} o T_{n,t}."""
    return compose(cheby_blaschke(m, n * t).product, cheby_blaschke(n, t).product)


def chebyshev_poly(n, x):
    """Classical Chebyshev polynomial T_n by the three-term recurrence."""
    if n < 0:
        raise DomainError("Chebyshev degree must be >= 0")
    x = np.asarray(x)
    t0 = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return t0 if t0.ndim else t0[()]
    t1 = x * 1.0
    for _ in range(n - 1):
        t0, t1 = t1, 2.0 * x * t1 - t0
    return t1


def chebyshev_representation(n):
    """The pair of involutions (sigma, tau) describing the monodromy of T_n.

    sigma swaps i and n+2-i for 2 <= i; tau swaps 1 and 2 and swaps i and
    n+3-i for i >= 3.  Both are products of disjoint transpositions.
    """
    if n < 2:
        raise DomainError("the representation needs n >= 2")
    sigma = [(i, n + 2 - i) for i in range(2, n + 1) if i < n + 2 - i]
    tau = [(1, 2)] + [(i, n + 3 - i) for i in range(3, n + 1) if i < n + 3 - i]
    return Permutation.from_cycles(n, sigma), Permutation.from_cycles(n, tau)


def equioscillation_points(f, grid=EQUIOSC_GRID, rel=EQUIOSC_REL):
    """Points of [-gamma(t), gamma(t)] where |T| reaches gamma(nt), with signs.

    Local maxima of |T| on a Chebyshev-spaced grid are refined by a bounded
    scalar search over the neighbouring cells before the threshold test.
    """
    g = f.gamma
    target = f.gamma_image
    j = np.arange(grid)
    x = -g * np.cos(np.pi * j / (grid - 1))
    y = f(x.astype(complex)).real
    a = np.abs(y)
    cell = 4.0 * np.pi * g / grid
    hits = []
    for i in range(grid):
        left = a[i - 1] if i > 0 else -np.inf
        right = a[i + 1] if i < grid - 1 else -np.inf
        if a[i] < left or a[i] < right:
            continue
        xi, yi = x[i], y[i]
        if 0 < i < grid - 1:
            res = minimize_scalar(lambda s: -abs(f(complex(s)).real),
                                  bounds=(x[i - 1], x[i + 1]), method="bounded",
                                  options={"xatol": 1e-14})
            if -res.fun > abs(yi):
                xi, yi = res.x, f(complex(res.x)).real
        if abs(yi) >= target * (1.0 - rel):
            # neighbouring grid maxima refining to one extremum count once
            if hits and hits[-1][1] == np.sign(yi) and abs(hits[-1][0] - xi) < cell:
                continue
            hits.append((float(xi), float(np.sign(yi))))
    return hits


def equioscillation_count(f, grid=EQUIOSC_GRID, rel=EQUIOSC_REL):
    """Length of the longest alternating run of extremal points."""
    hits = equioscillation_points(f, grid, rel)
    if not hits:
        return 0
    best = run = 1
    for (_, s0), (_, s1) in zip(hits, hits[1:]):
        run = run + 1 if s1 == -s0 else 1
        best = max(best, run)
    return best
