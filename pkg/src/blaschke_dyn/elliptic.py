"""Theta functions, elliptic moduli, Jacobi and Weierstrass functions.

Everything is parameterised by a point ``tau`` of the upper half plane with
nome ``q = exp(i*pi*tau)``.  Conventions:

* ``k = theta2(q)^2 / theta3(q)^2`` and ``k' = theta4(q)^2 / theta3(q)^2``;
* ``K = pi / (2 agm(1, k'))`` and ``K' = pi / (2 agm(1, k))`` for real moduli,
  so that ``K'/K = -i tau`` on the imaginary axis;
* the Weierstrass function belongs to the lattice generated by ``1`` and
  ``tau``; its half-period values are ordered as ``wp(1/2), wp(tau/2),
  wp((1+tau)/2)``.

All functions accept numpy arrays where that makes sense and are pure.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import elliprf

from . import kernels
from .errors import DomainError, NumericalError

THETA_TAIL = 1e-17
NOME_LIMIT = 1.0 - 1e-3
POLE_RADIUS = 1e-8
CD_POLE_REL = 1e-14

INFINITY = complex(np.inf, 0.0)


def is_infinity(x):
    return ~np.isfinite(np.asarray(x))


@dataclass(frozen=True)
class ModularTau:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not v.imag > 0.0:
            raise DomainError(f"tau must lie in the upper half plane, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def nome(self):
        return complex(np.exp(1j * np.pi * self.value))

    @property
    def is_imaginary(self):
        return self.value.real == 0.0


def as_tau(tau):
    return tau if isinstance(tau, ModularTau) else ModularTau(complex(tau))


@dataclass(frozen=True)
class EllipticModulusData:
    tau: ModularTau
    nome_q: complex
    modulus_k: complex
    comp_modulus_kp: complex
    quarter_K: complex
    quarter_Kp: complex

    @property
    def k(self):
        return self.modulus_k.real if self.tau.is_imaginary else self.modulus_k

    @property
    def kp(self):
        return self.comp_modulus_kp.real if self.tau.is_imaginary else self.comp_modulus_kp

    @property
    def K(self):
        return self.quarter_K.real if self.tau.is_imaginary else self.quarter_K

    @property
    def Kp(self):
        return self.quarter_Kp.real if self.tau.is_imaginary else self.quarter_Kp


@dataclass(frozen=True)
class WeierstrassData:
    tau: ModularTau
    e_values: tuple
    g2: complex
    g3: complex


# ---------------------------------------------------------------------------
# theta functions
# ---------------------------------------------------------------------------

def _theta_terms(tau, z):
    """Number of series terms so the dropped tail is below THETA_TAIL."""
    t = tau.value
    q_abs = math.exp(-math.pi * t.imag)
    if q_abs >= NOME_LIMIT:
        raise DomainError(f"theta series does not converge usefully: |q| = {q_abs:.6f}")
    y = float(np.max(np.abs(np.imag(z)))) if np.size(z) else 0.0
    a = math.pi * t.imag
    # exponent of term n is -a n^2 + 2 n y; go past its peak until below the tail
    peak = y / a
    width = math.sqrt(-math.log(THETA_TAIL) / a)
    return int(math.ceil(peak + width)) + 2


def theta(j, z, tau):
    """Jacobi theta function theta_j(z | tau), j in 1..4, vectorised over z."""
    tau = as_tau(tau)
    z = np.asarray(z, dtype=complex)
    t = tau.value
    nmax = _theta_terms(tau, z)
    zz = z[..., None]
    if j in (1, 2):
        n = np.arange(nmax)
        half = n + 0.5
        base = 1j * np.pi * t * half ** 2
        plus = np.exp(base + 1j * (2 * n + 1) * zz)
        minus = np.exp(base - 1j * (2 * n + 1) * zz)
        if j == 1:
            sign = (-1.0) ** n
            return np.sum(-1j * sign * (plus - minus), axis=-1)
        return np.sum(plus + minus, axis=-1)
    if j in (3, 4):
        n = np.arange(1, nmax)
        base = 1j * np.pi * t * n ** 2
        terms = np.exp(base + 2j * n * zz) + np.exp(base - 2j * n * zz)
        if j == 4:
            terms = terms * (-1.0) ** n
        return 1.0 + np.sum(terms, axis=-1)
    raise ValueError("theta index must be 1, 2, 3 or 4")


def theta_null(j, tau):
    return complex(theta(j, 0.0, tau))


# ---------------------------------------------------------------------------
# moduli
# ---------------------------------------------------------------------------

def agm(a, b, tol=4e-16, maxiter=100):
    """Arithmetic-geometric mean with the 'right' square-root choice."""
    a = complex(a)
    b = complex(b)
    for _ in range(maxiter):
        if abs(a - b) <= tol * abs(a):
            break
        an = 0.5 * (a + b)
        bn = np.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        a, b = an, bn
    else:
        raise NumericalError("AGM did not converge", a=a, b=b)
    if a.imag == 0.0 and b.imag == 0.0:
        return a.real
    return a


def modulus_data(tau):
    """Nome, modulus, complementary modulus and quarter periods of ``tau``."""
    tau = as_tau(tau)
    t = tau.value
    inverted = ModularTau(-1.0 / t)
    use_inverted = inverted.value.imag > t.imag
    src = inverted if use_inverted else tau
    th2 = theta_null(2, src)
    th3 = theta_null(3, src)
    th4 = theta_null(4, src)
    ratio2 = th2 * th2 / (th3 * th3)
    ratio4 = th4 * th4 / (th3 * th3)
    # theta2^2 and theta4^2 trade places under tau -> -1/tau
    k, kp = (ratio4, ratio2) if use_inverted else (ratio2, ratio4)
    q = tau.nome
    if tau.is_imaginary:
        k = complex(k.real, 0.0)
        kp = complex(kp.real, 0.0)
        big_k = math.pi / (2.0 * agm(1.0, kp.real)) if kp.real > 0 else math.inf
        big_kp = math.pi / (2.0 * agm(1.0, k.real)) if k.real > 0 else math.inf
        return EllipticModulusData(tau, complex(q.real, 0.0), k, kp,
                                   complex(big_k), complex(big_kp))
    th3_sq = th3 * th3 / (-1j * t) if use_inverted else th3 * th3
    big_k = 0.5 * math.pi * th3_sq
    return EllipticModulusData(tau, q, k, kp, big_k, -1j * t * big_k)


def gamma_of_t(t):
    """sqrt(k(4 t i / pi)): the endpoint of the invariant interval."""
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"gamma_of_t needs t > 0, got {t}")
    return math.sqrt(modulus_data(4.0j * t / math.pi).k)


def gamma_complement(t):
    """1 - gamma(t), accurate when gamma(t) rounds to 1 in double precision."""
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"gamma_complement needs t > 0, got {t}")
    data = modulus_data(4.0j * t / math.pi)
    k, kp = data.k, data.kp
    return (kp * kp / (1.0 + k)) / (1.0 + math.sqrt(k))


def modulus_from_t(t):
    return modulus_data(4.0j * float(t) / math.pi)


# ---------------------------------------------------------------------------
# Jacobi functions
# ---------------------------------------------------------------------------

class JacobiValues(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray
    cd: np.ndarray
    pole: np.ndarray


def _real_moduli(k, kp):
    k = float(np.real(k))
    if kp is None:
        kp = math.sqrt((1.0 - k) * (1.0 + k))
    kp = float(np.real(kp))
    if not (0.0 <= k <= 1.0 and 0.0 <= kp <= 1.0):
        raise DomainError(f"real modulus must lie in [0, 1], got k={k}, k'={kp}")
    return k, kp


def quarter_periods(k, kp=None):
    k, kp = _real_moduli(k, kp)
    big_k = math.pi / (2.0 * agm(1.0, kp)) if kp > 0 else math.inf
    big_kp = math.pi / (2.0 * agm(1.0, k)) if k > 0 else math.inf
    return big_k, big_kp


def _jacobi_reduced(u, k, kp, big_k, big_kp):
    """Complex-argument sn, cn, dn at the reduced point plus the iK' shift count."""
    x = u.real
    y = u.imag
    if math.isfinite(big_k):
        x = x - 4.0 * big_k * np.round(x / (4.0 * big_k))
    if math.isfinite(big_kp):
        j = np.round(y / big_kp).astype(int)
        y = y - j * big_kp
    else:
        j = np.zeros(u.shape, dtype=int)
    s, c, d = kernels.landen_sncndn(x, k, kp)
    s1, c1, d1 = kernels.landen_sncndn(y, kp, k)
    m = k * k
    den = c1 * c1 + m * s * s * s1 * s1
    sn = (s * d1 + 1j * c * d * s1 * c1) / den
    cn = (c * c1 - 1j * s * d * s1 * d1) / den
    dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
    return sn, cn, dn, j


def _jacobi_real_modulus(u, k, kp):
    big_k, big_kp = quarter_periods(k, kp)
    s, c, d, j = _jacobi_reduced(u, k, kp, big_k, big_kp)
    odd = (j % 2) == 1
    flip = np.where((j % 4) >= 2, -1.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        at_pole = odd & (np.abs(k * s) < 1e-300)
        s_safe = np.where(at_pole, 1.0, s)
        sn = np.where(at_pole, INFINITY, np.where(odd, 1.0 / (k * s_safe), s))
        cn = np.where(at_pole, INFINITY, flip * np.where(odd, -1j * d / (k * s_safe), c))
        dn = np.where(at_pole, INFINITY, flip * np.where(odd, -1j * c / s_safe, d))
        cd_num = np.where(odd, d, c)
        cd_den = np.where(odd, k * c, d)
        # within about 1e-14 of a pole (in u) the quotient carries no
        # information; near a pole |cd| ~ 1/(k |u - u0|), hence the factor k
        pole = np.abs(cd_den) <= CD_POLE_REL * k * np.abs(cd_num)
        cd = np.where(pole, INFINITY, cd_num / np.where(pole, 1.0, cd_den))
        ratio = np.where(odd, -s / (k * c * c), s / (d * d))
        dcd = -(kp * kp) * ratio
    return sn, cn, dn, cd, pole, dcd


def _jacobi_complex_modulus(u, k):
    # descending Landen with complex arithmetic; accuracy degrades as Im k grows
    k = complex(k)
    kp = np.sqrt(1.0 - k * k)
    a_seq, c_seq = [1.0 + 0j], [k]
    a, b, c = 1.0 + 0j, kp, k
    while abs(c) > 1e-16 * abs(a) and len(a_seq) < 64:
        an, bn = 0.5 * (a + b), np.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        a, b, c = an, bn, 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    nsteps = len(a_seq) - 1
    phi = 2.0 ** nsteps * a_seq[nsteps] * u
    phi_prev = phi
    for jj in range(nsteps, 0, -1):
        phi_prev = phi
        phi = 0.5 * (phi + np.arcsin(c_seq[jj] * np.sin(phi) / a_seq[jj]))
    sn, cn = np.sin(phi), np.cos(phi)
    dn = cn / np.cos(phi_prev - phi) if nsteps else np.ones_like(sn)
    with np.errstate(divide="ignore", invalid="ignore"):
        pole = np.abs(dn) < 1e-300
        cd = np.where(pole, INFINITY, cn / np.where(pole, 1.0, dn))
        dcd = -(kp * kp) * sn / (dn * dn)
    return sn, cn, dn, cd, pole, dcd


def _jacobi_all(u, k, kp=None):
    u = np.asarray(u, dtype=complex)
    if np.iscomplexobj(k) and np.imag(k) != 0.0:
        return _jacobi_complex_modulus(u, k)
    k, kp = _real_moduli(k, kp)
    return _jacobi_real_modulus(u, k, kp)


def jacobi_functions(u, k, kp=None):
    """sn, cn, dn and cd = cn/dn at complex ``u``.

    ``kp`` may be passed when it is known more accurately than
    ``sqrt(1 - k^2)`` (moduli very close to 1).  Poles of cd are reported
    through the ``pole`` mask, with ``cd`` set to complex infinity there.
    Complex ``k`` is accepted but uses a plain complex Landen recursion whose
    accuracy degrades with ``|Im k|``.
    """
    sn, cn, dn, cd, pole, _ = _jacobi_all(u, k, kp)
    return JacobiValues(sn, cn, dn, cd, pole)


def cd_with_derivative(u, k, kp=None):
    _, _, _, cd, pole, dcd = _jacobi_all(u, k, kp)
    return cd, dcd, pole


def _newton_polish(x, u, func, tol, maxiter=40):
    """Vectorised Newton for func(u) = x; returns (u, residual)."""
    for _ in range(maxiter):
        val, der = func(u)
        res = val - x
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.isfinite(res) & (der != 0), res / der, 0.0)
        step = np.where(np.isfinite(step), step, 0.0)
        u = u - step
        if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(u))):
            break
    val, _ = func(u)
    resid = np.abs(val - x)
    resid = np.where(np.isfinite(resid), resid, np.inf)
    return u, resid


def _grid_seeds(x, grid_u, grid_val, bad, count=6):
    out = []
    for idx in np.flatnonzero(bad):
        dist = np.abs(grid_val - x[idx])
        dist = np.where(np.isfinite(dist), dist, np.inf)
        out.append((idx, grid_u[np.argsort(dist)[:count]]))
    return out


def inverse_cd(x, k, kp=None, tol=1e-10, _reflect=True):
    """Some u with cd(u; k) = x.  Any lattice representative may be returned."""
    x_arr = np.asarray(x, dtype=complex)
    flat = x_arr.ravel()
    if np.iscomplexobj(k) and np.imag(k) != 0.0:
        raise DomainError("inverse_cd supports real moduli only")
    k, kp = _real_moduli(k, kp)
    big_k, big_kp = quarter_periods(k, kp)
    inf_mask = ~np.isfinite(flat)
    xs = np.where(inf_mask, 0.0, flat)
    if k > 0.0 and _reflect:
        # cd(u + iK') = 1/(k cd(u)); solve near the origin instead of near a pole
        far = np.abs(xs) > 1.0 / math.sqrt(k)
        if np.any(far):
            y = 1.0 / (k * xs[far])
            inner = inverse_cd(y, k, kp, tol=tol * min(1.0, float(np.min(np.abs(y)))),
                               _reflect=False)
            u_far = np.asarray(inner) + 1j * big_kp
            xs = np.where(far, 0.0, xs)
    else:
        far = np.zeros(xs.shape, dtype=bool)

    def func(u):
        cd, dcd, _ = cd_with_derivative(u, k, kp)
        return cd, dcd

    # sn^{-1}(x) = x R_F(1 - x^2, 1 - k^2 x^2, 1) and cd(u) = sn(K - u)
    with np.errstate(all="ignore"):
        # a tiny imaginary nudge keeps real |x| > 1 off the branch cut of R_F
        xn = xs + 1e-300j
        seed = big_k - xs * elliprf(1.0 - xn * xn + 1e-18j, 1.0 - k * k * xn * xn + 1e-18j, 1.0 + 0j)
    seed = np.where(np.isfinite(seed), seed, big_k)
    u, resid = _newton_polish(xs, seed, func, tol)
    scale = np.maximum(1.0, np.abs(xs))
    bad = (resid > tol * scale) & ~inf_mask
    if np.any(bad):
        # offsets keep seeds off the critical points of cd at multiples of K and iK'
        gx = np.linspace(-2.0 * big_k, 2.0 * big_k, 25) + 0.013 * big_k
        gy = (np.linspace(-big_kp, big_kp, 13) if math.isfinite(big_kp)
              else np.linspace(-2, 2, 13)) + 0.017
        grid_u = (gx[:, None] + 1j * gy[None, :]).ravel()
        grid_val, _ = func(grid_u)
        for idx, seeds in _grid_seeds(xs, grid_u, grid_val, bad):
            target = np.full(seeds.shape, xs[idx])
            cand, cres = _newton_polish(target, seeds.astype(complex), func, tol)
            best = int(np.argmin(cres))
            if cres[best] < resid[idx]:
                u[idx], resid[idx] = cand[best], cres[best]
        bad = (resid > tol * scale) & ~inf_mask
        if np.any(bad):
            raise NumericalError("inverse_cd: Newton did not converge",
                                 x=xs[bad].tolist(), residual=resid[bad].tolist(), k=k)
    u = np.where(inf_mask, big_k + 1j * big_kp, u)
    if np.any(far):
        u[far] = u_far
    return u.reshape(x_arr.shape) if x_arr.shape else complex(u[0])


# ---------------------------------------------------------------------------
# Weierstrass functions
# ---------------------------------------------------------------------------

def reduce_tau(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau_reduced, (a, b, c, d)) with tau_reduced = (a tau + b)/(c tau + d).
    """
    t = as_tau(tau).value
    a, b, c, d = 1, 0, 0, 1
    for _ in range(200):
        n = round(t.real)
        if n:
            t -= n
            a, b = a - n * c, b - n * d
        if abs(t) < 1.0 - 1e-14:
            t = -1.0 / t
            a, b, c, d = -c, -d, a, b
        else:
            break
    return t, (a, b, c, d)


def _lattice_setup(tau):
    t = as_tau(tau).value
    tr, (a, b, c, d) = reduce_tau(t)
    mu = 1.0 / (c * t + d)
    return tr, mu


def _reduce_mod_lattice(z, tr):
    m2 = np.round(z.imag / tr.imag)
    z = z - m2 * tr
    z = z - np.round(z.real)
    return z


def _rows_needed(tr):
    # |Im z| <= Im tau / 2 after reduction, so row r decays like exp(-2 pi Im tau (r - 1/2))
    return int(math.ceil(0.5 + (-math.log(1e-17)) / (2.0 * math.pi * tr.imag))) + 1


def _wp_constant(tr, nrows):
    n = np.arange(1, nrows + 1)
    e = np.exp(2j * np.pi * n * tr)
    inv_sin2 = -4.0 * np.pi ** 2 * e / (1.0 - e) ** 2
    return np.pi ** 2 / 3.0 + 2.0 * np.sum(inv_sin2)


def _wp_reduced(z, tr):
    nrows = _rows_needed(tr)
    zr = _reduce_mod_lattice(z, tr)
    pole = np.abs(zr) < POLE_RADIUS
    safe = np.where(pole, 0.25 + 0.25 * tr, zr)
    s, ds = kernels.wp_rowsum(safe, tr, nrows)
    val = s - _wp_constant(tr, nrows)
    val = np.where(pole, INFINITY, val)
    ds = np.where(pole, INFINITY, ds)
    return val, ds, pole


def weierstrass_p(z, tau, derivative=False):
    """wp(z) for the lattice <1, tau>; ``derivative=True`` also returns wp'(z).

    Points within POLE_RADIUS of a lattice point give complex infinity.
    """
    z_arr = np.asarray(z, dtype=complex)
    tr, mu = _lattice_setup(tau)
    val, der, _ = _wp_reduced(mu * z_arr.ravel(), tr)
    with np.errstate(invalid="ignore"):
        val = np.where(np.isfinite(val), mu * mu * val, val)
        der = np.where(np.isfinite(der), mu ** 3 * der, der)
    if not z_arr.shape:
        val, der = complex(val[0]), complex(der[0])
    else:
        val, der = val.reshape(z_arr.shape), der.reshape(z_arr.shape)
    return (val, der) if derivative else val


def weierstrass_p_theta(z, tau):
    """Independent route: wp from theta quotients (no lattice sums)."""
    t = as_tau(tau)
    tr, mu = _lattice_setup(t)
    zz = np.asarray(z, dtype=complex) * mu
    th2, th3 = theta_null(2, tr), theta_null(3, tr)
    th4 = theta_null(4, tr)
    e3 = -(np.pi ** 2 / 3.0) * (2.0 * th2 ** 4 + th4 ** 4)
    v = np.pi * zz
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.pi * th2 * th3 * theta(4, v, tr) / theta(1, v, tr)
    return mu * mu * (e3 + q * q)


def _sigma(n, power):
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


def _invariants(tau):
    """g2, g3 of <1, tau> from Eisenstein q-expansions."""
    t = as_tau(tau).value
    tr, mu = _lattice_setup(t)
    q2 = np.exp(2j * np.pi * tr)
    e4 = 1.0 + 0j
    e6 = 1.0 + 0j
    n = 1
    while True:
        qn = q2 ** n
        t4 = 240 * _sigma(n, 3) * qn
        t6 = -504 * _sigma(n, 5) * qn
        e4 += t4
        e6 += t6
        if abs(t6) < 1e-18 and n > 2:
            break
        n += 1
    g2 = (4.0 * np.pi ** 4 / 3.0) * e4 * mu ** 4
    g3 = (8.0 * np.pi ** 6 / 27.0) * e6 * mu ** 6
    return complex(g2), complex(g3)


def weierstrass_data(tau):
    tau = as_tau(tau)
    t = tau.value
    half = np.array([0.5, 0.5 * t, 0.5 * (1.0 + t)])
    e = weierstrass_p(half, tau)
    g2, g3 = _invariants(tau)
    return WeierstrassData(tau, tuple(complex(v) for v in e), g2, g3)


def inverse_p(x, tau, tol=1e-10):
    """Some z with wp(z; <1, tau>) = x.  The sign and lattice class are arbitrary."""
    tau = as_tau(tau)
    t = tau.value
    x_arr = np.asarray(x, dtype=complex)
    flat = x_arr.ravel()
    inf_mask = ~np.isfinite(flat)
    xs = np.where(inf_mask, 0.0, flat)
    e1, e2, e3 = weierstrass_data(tau).e_values

    def func(z):
        return weierstrass_p(z, tau, derivative=True)

    with np.errstate(all="ignore"):
        seed = elliprf(xs - e1, xs - e2, xs - e3)
    seed = np.where(np.isfinite(seed) & (np.abs(seed) > 1e-6), seed, 0.3 + 0.2 * t)
    z, resid = _newton_polish(xs, seed.astype(complex), func, tol)
    scale = np.maximum(1.0, np.abs(xs))
    bad = (resid > tol * scale) & ~inf_mask
    if np.any(bad):
        g = np.linspace(0.02, 0.98, 17)
        grid = (g[:, None] + g[None, :] * t).ravel()
        grid_val = weierstrass_p(grid, tau)
        for idx, seeds in _grid_seeds(xs, grid, grid_val, bad):
            target = np.full(seeds.shape, xs[idx])
            cand, cres = _newton_polish(target, seeds, func, tol)
            best = int(np.argmin(cres))
            if cres[best] < resid[idx]:
                z[idx], resid[idx] = cand[best], cres[best]
        bad = (resid > tol * scale) & ~inf_mask
        if np.any(bad):
            raise NumericalError("inverse_p: Newton did not converge",
                                 x=xs[bad].tolist(), residual=resid[bad].tolist(), tau=t)
    z = np.where(inf_mask, 0.0, z)
    return z.reshape(x_arr.shape) if x_arr.shape else complex(z[0])


def lattice_distance(z, tau):
    """Distance from z to the nearest point of <1, tau> (after reduction)."""
    t = as_tau(tau).value
    z = np.asarray(z, dtype=complex)
    m2 = np.round(z.imag / t.imag)
    zr = z - m2 * t
    zr = zr - np.round(zr.real)
    best = np.abs(zr)
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            best = np.minimum(best, np.abs(zr - da - db * t))
    return best
