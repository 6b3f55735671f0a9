"""Identity suites run by ``blaschke-dyn verify``.

Each suite returns a :class:`SuiteResult` holding the largest deviation
seen, the tolerance it was held to, and one row per checked case.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import cheby, ellrat
from .blaschke import max_deviation, power_map, random_fbp
from .errors import DomainError
from .elliptic import modulus_from_t
from .factorization import ritt_move_cheby, ritt_move_power
from .monodromy import numerical_monodromy
from .permutations import group_order

DEFAULT_TS = (0.2, 0.5, 1.0)
GRID_POINTS = 200


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    cases: tuple = field(default=(), repr=False)


def disk_grid(count=GRID_POINTS):
    """Half interior spiral, half boundary circle."""
    m = count // 2
    j = np.arange(m)
    inner = 0.98 * np.sqrt((j + 0.5) / m) * np.exp(2j * np.pi * j * 0.6180339887498949 + 0.2j)
    outer = np.exp(2j * np.pi * (np.arange(count - m) + 0.31) / (count - m))
    return np.concatenate([inner, outer])


def _result(name, cases, tol):
    worst = max((c["deviation"] for c in cases), default=0.0)
    passed = all(c.get("ok", c["deviation"] < tol) for c in cases)
    return SuiteResult(name, bool(passed), float(worst), tol, tuple(cases))


def suite_nesting(ts=DEFAULT_TS, tol=1e-8):
    z = disk_grid()
    cases = []
    for t in ts:
        for m, n in ((2, 3), (3, 2), (2, 2)):
            whole = cheby.cheby_blaschke(m * n, t).product
            dev = max_deviation(whole, cheby.nested(m, n, t), z)
            cases.append({"case": f"T_{m * n},{t} = T_{m},{n * t} o T_{n},{t}", "deviation": dev})
    return _result("nesting", cases, tol)


def suite_commuting(ts=DEFAULT_TS, tol=1e-8):
    z = disk_grid()
    cases = []
    for t in ts:
        lhs, rhs = ritt_move_cheby(2, 3, t, tol=math.inf)
        cases.append({"case": f"p=2,q=3,t={t}", "deviation": max_deviation(lhs, rhs, z)})
    return _result("commuting", cases, tol)


def tt_deviation(n, t, z):
    """Product versus the rescaled descent map sqrt(k_n) T_n,tau(z / sqrt(k))."""
    f = cheby.cheby_blaschke(n, t)
    sk = math.sqrt(modulus_from_t(t).k)
    skn = math.sqrt(modulus_from_t(n * t).k)
    worst = 0.0
    for branch in (0, 1):
        rhs = skn * cheby.cheby_unscaled(n, t, z / sk, branch)
        worst = max(worst, float(np.max(np.abs(f(z) - rhs))))
    return worst


def suite_tt(ns=(3, 4), ts=(0.3, 0.7), tol=1e-8):
    z = disk_grid()
    cases = [{"case": f"n={n},t={t}", "deviation": tt_deviation(n, t, z)} for n in ns for t in ts]
    return _result("tt", cases, tol)


def suite_normalization(ns=(2, 3, 4, 5, 6), ts=DEFAULT_TS, tol=1e-9):
    cases = []
    for n in ns:
        for t in ts:
            f = cheby.cheby_blaschke(n, t)
            dev = abs(f(f.gamma) - f.gamma_image)
            count = cheby.equioscillation_count(f)
            cases.append({"case": f"n={n},t={t}", "deviation": dev, "equioscillation": count,
                          "ok": dev < tol and count == n + 1})
    return _result("normalization", cases, tol)


def suite_critval(ns=(2, 3), taus=(1j, 0.5 + 1j), tol=1e-6):
    cases = []
    for n in ns:
        for tau in taus:
            fit = ellrat.ell_rat_fit(n, tau)
            ref = ellrat.ell_rat_critical_values(n, tau)
            got = fit.critical_values()
            dev = ellrat.match_critical_values(got, ref.half_period_values)
            back = ellrat.match_critical_values(ref.values, got)
            cases.append({"case": f"n={n},tau={tau}", "deviation": max(dev, back),
                          "count": len(got)})
    return _result("critval", cases, tol)


def suite_gamma0(n=3, tau=1j, matrices=(((1, 1), (0, 1)), ((1, 0), (3, 1))),
                 non_members=(((1, 0), (1, 1)),), tol=1e-5):
    cases = []
    for m in matrices:
        rep = ellrat.equivalence_check(n, tau, m, tol=tol)
        cases.append({"case": f"M={m}", "deviation": rep.max_deviation, "ok": rep.verified})
    for m in non_members:
        try:
            ellrat.equivalence_check(n, tau, m, tol=tol)
            rejected = False
        except DomainError:
            rejected = True
        cases.append({"case": f"reject M={m}", "deviation": 0.0, "ok": rejected})
    return _result("gamma0", cases, tol)


def suite_monodromy(powers=range(2, 9), cheby_ns=(4, 5, 6), t=0.5):
    cases = []
    for n in powers:
        rep = numerical_monodromy(power_map(n))
        ok = rep.ordered_product().cycle_type() == (n,) and rep.is_transitive()
        cases.append({"case": f"z^{n}", "deviation": 0.0, "ok": ok})
    for n in cheby_ns:
        rep = numerical_monodromy(cheby.cheby_blaschke(n, t).product)
        sigma, tau_perm = cheby.chebyshev_representation(n)
        want = sorted([sigma.cycle_type(), tau_perm.cycle_type()])
        got = sorted(p.cycle_type() for p in rep.loops)
        ok = got == want and rep.group_order() == group_order([sigma, tau_perm], n)
        cases.append({"case": f"T_{n},{t}", "deviation": 0.0, "ok": ok,
                      "cycle_types": [list(c) for c in got]})
    return _result("monodromy", cases, 0.0)


def suite_ritt(draws=10, seed=0, tol=1e-8):
    rng = np.random.default_rng(seed)
    z = disk_grid()
    cases = []
    coprime = [(2, 1), (3, 1), (2, 3), (3, 2), (4, 1), (3, 4)]
    for d in range(draws):
        k, r = coprime[rng.integers(len(coprime))]
        g = random_fbp(rng, int(rng.integers(1, 3)), radius=0.8)
        lhs, rhs = ritt_move_power(k, r, g, tol=math.inf)
        cases.append({"case": f"power k={k},r={r},draw={d}", "deviation": max_deviation(lhs, rhs, z)})
        p, q = [(2, 3), (3, 2), (2, 2), (2, 5)][rng.integers(4)]
        t = float(rng.uniform(0.2, 1.0))
        lhs, rhs = ritt_move_cheby(p, q, t, tol=math.inf)
        cases.append({"case": f"cheby p={p},q={q},t={t:.4f}", "deviation": max_deviation(lhs, rhs, z)})
    return _result("ritt", cases, tol)


SUITES = {
    "nesting": suite_nesting,
    "commuting": suite_commuting,
    "tt": suite_tt,
    "normalization": suite_normalization,
    "critval": suite_critval,
    "gamma0": suite_gamma0,
    "monodromy": suite_monodromy,
    "ritt": suite_ritt,
}


def run_suites(names=None, t=None, draws=10, seed=0):
    names = list(SUITES) if not names or names == ["all"] else names
    out = []
    for name in names:
        if name not in SUITES:
            raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        kwargs = {}
        if t is not None and name in ("nesting", "commuting", "normalization", "tt"):
            kwargs["ts"] = (t,)
        if t is not None and name == "monodromy":
            kwargs["t"] = t
        if name == "ritt":
            kwargs.update(draws=draws, seed=seed)
        out.append(SUITES[name](**kwargs))
    return out

