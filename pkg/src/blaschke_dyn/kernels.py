"""Hot numeric kernels, each in two flavours.

Every kernel exists as a loop-based function compiled with ``numba.njit``
and as a vectorised numpy function.  The public names at the bottom of the
module dispatch to one or the other according to ``_config.USE_NUMBA``;
both flavours stay importable (``numba_impl`` / ``numpy_impl``) so tests and
the benchmark can compare them directly.

Kernels
-------
blaschke_eval(rho, zeros, z)            values of rho * prod (z-a)/(1-conj(a) z)
blaschke_eval_deriv(rho, zeros, z)      values and first derivatives
landen_sncndn(u, k, kp)                 sn, cn, dn for real u, 0 <= k <= 1 (AGM, cotangent form)
wp_rowsum(z, tau, nrows)                Eisenstein row sums for wp and wp'
track_path(rho, zeros, path, z0, ...)   continuation of a full fibre along a polyline
"""

import cmath
import math
from types import SimpleNamespace

import numpy as np

from . import _config

# status codes returned by track_path
TRACK_OK = 0
TRACK_STEP_UNDERFLOW = 1
TRACK_SHEET_COLLISION = 2

_NEWTON_TOL = 1e-11
_TINY_U = 1e-8


# ---------------------------------------------------------------------------
# loop flavour (compiled with numba when available)
# ---------------------------------------------------------------------------

def _blaschke_eval_loop(rho, zeros, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    n = zeros.shape[0]
    for p in range(z.shape[0]):
        w = z[p]
        acc = rho
        for i in range(n):
            a = zeros[i]
            acc *= (w - a) / (1.0 - a.conjugate() * w)
        out[p] = acc
    return out


def _blaschke_eval_deriv_loop(rho, zeros, z):
    m = z.shape[0]
    n = zeros.shape[0]
    val = np.empty(m, dtype=np.complex128)
    der = np.empty(m, dtype=np.complex128)
    fac = np.empty(n, dtype=np.complex128)
    for p in range(m):
        w = z[p]
        acc = rho
        for i in range(n):
            a = zeros[i]
            fac[i] = (w - a) / (1.0 - a.conjugate() * w)
            acc *= fac[i]
        val[p] = acc
        # product rule, safe at the zeros themselves
        d = 0.0 + 0.0j
        for i in range(n):
            a = zeros[i]
            den = 1.0 - a.conjugate() * w
            term = rho * (1.0 - (a.real * a.real + a.imag * a.imag)) / (den * den)
            for j in range(n):
                if j != i:
                    term *= fac[j]
            d += term
        der[p] = d
    return val, der


def _agm_chain(kp):
    # descending AGM on the complementary modulus; kp is used directly so that
    # moduli near 1 (kp tiny) keep full relative accuracy
    em = np.empty(40)
    en = np.empty(40)
    emc = kp * kp
    a = 1.0
    c = 1.0
    count = 0
    for i in range(40):
        em[i] = a
        emc = math.sqrt(emc)
        en[i] = emc
        count = i + 1
        c = 0.5 * (a + emc)
        if abs(a - emc) <= 1e-9 * a:
            break
        emc *= a
        a = c
    return em, en, count, c


def _landen_sncndn_loop(u, k, kp):
    m = u.shape[0]
    sn = np.empty(m)
    cn = np.empty(m)
    dn = np.empty(m)
    if kp == 0.0:
        for p in range(m):
            sn[p] = math.tanh(u[p])
            cn[p] = 1.0 / math.cosh(u[p])
            dn[p] = cn[p]
        return sn, cn, dn
    em, en, count, scale = _agm_chain(kp)
    for p in range(m):
        if abs(u[p]) < _TINY_U:
            # the cubic terms are below rounding here, and cot(v) would overflow
            sn[p] = u[p]
            cn[p] = 1.0 - 0.5 * u[p] * u[p]
            dn[p] = 1.0 - 0.5 * k * k * u[p] * u[p]
            continue
        v = u[p] * scale
        s = math.sin(v)
        co = math.cos(v)
        d = 1.0
        if s != 0.0:
            # cotangent form: the ratio c = cn/sn is carried through the
            # ascending steps, which avoids arcsin near +-1
            a = co / s
            c = scale * a
            for i in range(count - 1, -1, -1):
                b = em[i]
                a *= c
                c *= d
                d = (en[i] + a) / (b + a)
                a = c / b
            a = 1.0 / math.sqrt(c * c + 1.0)
            s = a if s >= 0.0 else -a
            co = c * s
        sn[p] = s
        cn[p] = co
        dn[p] = d
    return sn, cn, dn


def _inv_sin2_loop(w):
    # pi^2 / sin^2(pi w) written in exponentials so large |Im w| cannot overflow
    if w.imag >= 0.0:
        e = cmath.exp(2j * math.pi * w)
    else:
        e = cmath.exp(-2j * math.pi * w)
    return -4.0 * math.pi * math.pi * e / ((1.0 - e) * (1.0 - e))


def _cos_over_sin3_loop(w):
    # pi^3 cos(pi w) / sin^3(pi w), odd in w
    sign = 1.0
    if w.imag < 0.0:
        w = -w
        sign = -1.0
    e = cmath.exp(2j * math.pi * w)
    return sign * math.pi ** 3 * 4j * e * (1.0 + e) / ((1.0 - e) ** 3)


def _wp_rowsum_loop(z, tau, nrows):
    m = z.shape[0]
    wp = np.empty(m, dtype=np.complex128)
    dwp = np.empty(m, dtype=np.complex128)
    for p in range(m):
        s = 0.0 + 0.0j
        d = 0.0 + 0.0j
        for r in range(-nrows, nrows + 1):
            w = z[p] + r * tau
            s += _inv_sin2_loop(w)
            d += _cos_over_sin3_loop(w)
        wp[p] = s
        dwp[p] = -2.0 * d
    return wp, dwp


def _track_path_loop(rho, zeros, path, z0, max_halvings, min_sep):
    """Follow every sheet of f^{-1}(w) as w runs along ``path``.

    Returns (z_end, status, steps).  A step is accepted when the corrector
    Newton iteration has converged within three iterations, each correction
    shrinks, and no sheet moves more than a quarter of the current minimal
    sheet separation.
    """
    n = z0.shape[0]
    z = z0.copy()
    steps = 0
    one = np.empty(1, dtype=np.complex128)
    for seg in range(path.shape[0] - 1):
        w_a = path[seg]
        w_b = path[seg + 1]
        s = 0.0
        h = 1.0
        halvings = 0
        while s < 1.0:
            if s + h > 1.0:
                h = 1.0 - s
            w_new = w_a + (s + h) * (w_b - w_a)
            dw = h * (w_b - w_a)
            # minimal sheet separation at the current fibre
            sep = 1e300
            for i in range(n):
                for j in range(i + 1, n):
                    dd = abs(z[i] - z[j])
                    if dd < sep:
                        sep = dd
            if n > 1 and sep < min_sep:
                return z, TRACK_SHEET_COLLISION, steps
            z_try = np.empty(n, dtype=np.complex128)
            ok = True
            for i in range(n):
                one[0] = z[i]
                _, der = _blaschke_eval_deriv_loop(rho, zeros, one)
                zi = z[i] + dw / der[0]
                prev_corr = 1e300
                conv = False
                for it in range(3):
                    one[0] = zi
                    val, der = _blaschke_eval_deriv_loop(rho, zeros, one)
                    corr = (val[0] - w_new) / der[0]
                    zi = zi - corr
                    ac = abs(corr)
                    if ac > 0.5 * prev_corr and it > 0:
                        break
                    prev_corr = ac
                    if ac < _NEWTON_TOL * (1.0 + abs(zi)):
                        conv = True
                        break
                if (not conv) or abs(zi - z[i]) > 0.25 * sep:
                    ok = False
                    break
                z_try[i] = zi
            if ok:
                for i in range(n):
                    z[i] = z_try[i]
                s += h
                steps += 1
                halvings = 0
                h = min(2.0 * h, 1.0)
            else:
                h *= 0.5
                halvings += 1
                if halvings > max_halvings:
                    return z, TRACK_STEP_UNDERFLOW, steps
    return z, TRACK_OK, steps


# ---------------------------------------------------------------------------
# numpy flavour
# ---------------------------------------------------------------------------

def _blaschke_eval_np(rho, zeros, z):
    if zeros.size == 0:
        return np.full(z.shape, rho, dtype=np.complex128)
    fac = (z[:, None] - zeros[None, :]) / (1.0 - np.conj(zeros)[None, :] * z[:, None])
    return rho * np.prod(fac, axis=1)


def _blaschke_eval_deriv_np(rho, zeros, z):
    m = z.shape[0]
    n = zeros.shape[0]
    if n == 0:
        return np.full(m, rho, dtype=np.complex128), np.zeros(m, dtype=np.complex128)
    den = 1.0 - np.conj(zeros)[None, :] * z[:, None]
    fac = (z[:, None] - zeros[None, :]) / den
    val = rho * np.prod(fac, axis=1)
    # prefix/suffix products give prod_{j != i} fac_j without dividing by zero
    ones = np.ones((m, 1), dtype=np.complex128)
    prefix = np.cumprod(np.hstack([ones, fac[:, :-1]]), axis=1)
    suffix = np.cumprod(np.hstack([ones, fac[:, :0:-1]]), axis=1)[:, ::-1]
    others = prefix * suffix
    weight = (1.0 - np.abs(zeros) ** 2)[None, :] / den ** 2
    der = rho * np.sum(weight * others, axis=1)
    return val, der


def _landen_sncndn_np(u, k, kp):
    u = np.asarray(u, dtype=float)
    if kp == 0.0:
        with np.errstate(over="ignore"):
            c = 1.0 / np.cosh(u)
        return np.tanh(u), c, c.copy()
    em, en, count, scale = _agm_chain(kp)
    v = u * scale
    s = np.sin(v)
    co = np.cos(v)
    d = np.ones_like(u)
    live = np.abs(u) >= _TINY_U
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(live, co / np.where(live, s, 1.0), 0.0)
        c = scale * a
        for i in range(count - 1, -1, -1):
            b = em[i]
            a = a * c
            c = c * d
            d = (en[i] + a) / (b + a)
            a = c / b
    r = 1.0 / np.sqrt(c * c + 1.0)
    s_new = np.where(s >= 0.0, r, -r)
    sn = np.where(live, s_new, s)
    cn = np.where(live, c * s_new, co)
    dn = np.where(live, d, 1.0)
    tiny = np.abs(u) < _TINY_U
    if tiny.any():
        u2 = u * u
        sn = np.where(tiny, u, sn)
        cn = np.where(tiny, 1.0 - 0.5 * u2, cn)
        dn = np.where(tiny, 1.0 - 0.5 * k * k * u2, dn)
    return sn, cn, dn


def _inv_sin2_np(w):
    e = np.where(w.imag >= 0.0, np.exp(2j * np.pi * w), np.exp(-2j * np.pi * w))
    return -4.0 * np.pi ** 2 * e / (1.0 - e) ** 2


def _cos_over_sin3_np(w):
    sign = np.where(w.imag < 0.0, -1.0, 1.0)
    e = np.exp(2j * np.pi * (sign * w))
    return sign * np.pi ** 3 * 4j * e * (1.0 + e) / (1.0 - e) ** 3


def _wp_rowsum_np(z, tau, nrows):
    rows = np.arange(-nrows, nrows + 1)
    w = z[:, None] + rows[None, :] * tau
    return np.sum(_inv_sin2_np(w), axis=1), -2.0 * np.sum(_cos_over_sin3_np(w), axis=1)


def _track_path_np(rho, zeros, path, z0, max_halvings, min_sep):
    n = z0.shape[0]
    z = z0.copy()
    steps = 0
    iu = np.triu_indices(n, 1)
    for seg in range(path.shape[0] - 1):
        w_a, w_b = path[seg], path[seg + 1]
        s, h, halvings = 0.0, 1.0, 0
        while s < 1.0:
            h = min(h, 1.0 - s)
            w_new = w_a + (s + h) * (w_b - w_a)
            dw = h * (w_b - w_a)
            sep = np.min(np.abs(z[:, None] - z[None, :])[iu]) if n > 1 else np.inf
            if n > 1 and sep < min_sep:
                return z, TRACK_SHEET_COLLISION, steps
            _, der = _blaschke_eval_deriv_np(rho, zeros, z)
            zi = z + dw / der
            prev = np.full(n, np.inf)
            conv = np.zeros(n, dtype=bool)
            ok = True
            for it in range(3):
                val, der = _blaschke_eval_deriv_np(rho, zeros, zi)
                corr = np.where(conv, 0.0, (val - w_new) / der)
                zi = zi - corr
                ac = np.abs(corr)
                if it > 0 and np.any((ac > 0.5 * prev) & ~conv):
                    ok = False
                    break
                prev = ac
                conv |= ac < _NEWTON_TOL * (1.0 + np.abs(zi))
                if conv.all():
                    break
            ok = ok and conv.all() and np.all(np.abs(zi - z) <= 0.25 * sep)
            if ok:
                z = zi
                s += h
                steps += 1
                halvings = 0
                h = min(2.0 * h, 1.0)
            else:
                h *= 0.5
                halvings += 1
                if halvings > max_halvings:
                    return z, TRACK_STEP_UNDERFLOW, steps
    return z, TRACK_OK, steps


numpy_impl = SimpleNamespace(
    blaschke_eval=_blaschke_eval_np,
    blaschke_eval_deriv=_blaschke_eval_deriv_np,
    landen_sncndn=_landen_sncndn_np,
    wp_rowsum=_wp_rowsum_np,
    track_path=_track_path_np,
)

if _config.HAVE_NUMBA:
    from numba import njit

    _inv_sin2_loop = njit(cache=True)(_inv_sin2_loop)
    _agm_chain = njit(cache=True)(_agm_chain)
    _cos_over_sin3_loop = njit(cache=True)(_cos_over_sin3_loop)
    _blaschke_eval_deriv_loop = njit(cache=True)(_blaschke_eval_deriv_loop)
    numba_impl = SimpleNamespace(
        blaschke_eval=njit(cache=True)(_blaschke_eval_loop),
        blaschke_eval_deriv=_blaschke_eval_deriv_loop,
        landen_sncndn=njit(cache=True)(_landen_sncndn_loop),
        wp_rowsum=njit(cache=True)(_wp_rowsum_loop),
        track_path=njit(cache=True)(_track_path_loop),
    )
else:  # pragma: no cover
    numba_impl = None

_active = numba_impl if _config.USE_NUMBA else numpy_impl
BACKEND = "numba" if _config.USE_NUMBA else "numpy"


def _c128(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.complex128).ravel())


def blaschke_eval(rho, zeros, z):
    z = np.asarray(z)
    out = _active.blaschke_eval(complex(rho), _c128(zeros), _c128(z))
    return out.reshape(z.shape)


def blaschke_eval_deriv(rho, zeros, z):
    z = np.asarray(z)
    val, der = _active.blaschke_eval_deriv(complex(rho), _c128(zeros), _c128(z))
    return val.reshape(z.shape), der.reshape(z.shape)


def landen_sncndn(u, k, kp):
    u = np.asarray(u, dtype=float)
    flat = np.ascontiguousarray(u.ravel())
    sn, cn, dn = _active.landen_sncndn(flat, float(k), float(kp))
    return sn.reshape(u.shape), cn.reshape(u.shape), dn.reshape(u.shape)


def wp_rowsum(z, tau, nrows):
    z = np.asarray(z)
    s, d = _active.wp_rowsum(_c128(z), complex(tau), int(nrows))
    return s.reshape(z.shape), d.reshape(z.shape)


def track_path(rho, zeros, path, z0, max_halvings=40, min_sep=1e-6):
    return _active.track_path(complex(rho), _c128(zeros), _c128(path), _c128(z0),
                              int(max_halvings), float(min_sep))
