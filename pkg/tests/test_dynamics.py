import math
import random

import numpy as np
import pytest

from blaschke_dyn import blaschke as B
from blaschke_dyn.dynamics import (
    ExactBlaschke,
    ExactComposite,
    canonical_height_estimate,
    degree_growth_experiment,
    exact_compose,
    exact_iota,
    exact_map_from_dict,
    exact_power,
    orbit,
    orbit_intersection,
    split_primes,
)
from blaschke_dyn.errors import DomainError, GrowthCapError
from blaschke_dyn.gaussian import GaussianRational, g_norm, naive_height, parse_gaussian

Q = parse_gaussian
LOG2 = math.log(2)


def _conj_square():
    # iota_{1/2} o z^2 o iota_{-1/2}
    return exact_compose(exact_iota(Q("1/2")), exact_power(2), exact_iota(Q("-1/2")))


def test_exact_map_validation():
    with pytest.raises(DomainError):
        ExactBlaschke("1/2", ["0"])
    with pytest.raises(DomainError):
        ExactBlaschke("1", ["1"])
    with pytest.raises(DomainError):
        ExactBlaschke("1", [])
    f = ExactBlaschke("3/5+4/5*i", ["1/2", "1/3*i"])
    assert f.degree == 2


def test_exact_matches_float_evaluation():
    f = ExactBlaschke("3/5+4/5*i", ["1/2", "-1/3*i", "1/4+1/4*i"])
    ff = f.to_fbp()
    for s in ("1/7", "2/3*i", "-1/5+3/7*i", "5/2"):
        assert complex(f(Q(s))) == pytest.approx(ff(complex(Q(s))), rel=1e-12, abs=1e-14)


def test_power_orbit_examples():
    f = exact_power(2)
    assert [str(v) for v in orbit(f, Q("1/2"), 3)] == ["1/2", "1/4", "1/16", "1/256"]
    orb = orbit(f, Q("i"), 4)
    assert [str(v) for v in orb[:3]] == ["i", "-1", "1"]
    assert orb.cycle == (2, 1)
    assert all(v == Q("1") for v in orb[2:])


def test_conjugated_orbit_stays_in_field():
    f = _conj_square()
    orb = orbit(f, Q("0"), 6)
    ff = B.compose(B.iota(0.5).as_fbp(), B.compose(B.power_map(2), B.iota(-0.5).as_fbp()))
    z = 0j
    for v in orb:
        assert isinstance(v, GaussianRational) and v.norm() < 1
        assert complex(v) == pytest.approx(z, abs=1e-12)
        z = ff(z)


def test_orbit_growth_cap():
    with pytest.raises(GrowthCapError) as exc:
        orbit(exact_power(2), Q("1/3"), 40, bit_cap=1000)
    assert exc.value.index <= 40


def test_orbit_includes_start_point():
    orb = orbit(exact_power(3), Q("2/5"), 0)
    assert list(orb) == [Q("2/5")]


def test_infinity_in_orbit():
    orb = orbit(exact_power(2), Q("inf"), 3)
    assert all(v.is_infinite for v in orb) and orb.cycle == (0, 1)


@pytest.mark.parametrize("N", [1, 3, 6, 10])
def test_canonical_height_power_map(N):
    est = canonical_height_estimate(exact_power(2), Q("1/2"), N)
    assert abs(est.canonical_estimate - LOG2) < 1e-12
    est2 = canonical_height_estimate(exact_power(2), Q("2"), N)
    assert abs(est2.canonical_estimate - LOG2) < 1e-12


def test_canonical_height_preperiodic_zero():
    est = canonical_height_estimate(exact_power(2), Q("0"), 5)
    assert est.canonical_estimate == 0.0 and est.preperiodic


def test_canonical_height_functional_equation():
    f = exact_power(3)
    x = Q("2/3+1/5*i")
    a = canonical_height_estimate(f, f(x), 4).canonical_estimate
    b = canonical_height_estimate(f, x, 5).canonical_estimate
    assert a == pytest.approx(3 * b, rel=1e-12)
    g = _conj_square()
    x = Q("1/3")
    a = canonical_height_estimate(g, g(x), 5).canonical_estimate
    b = canonical_height_estimate(g, x, 6).canonical_estimate
    assert abs(a - 2 * b) < 1e-9


def test_canonical_trace_stabilises():
    est = canonical_height_estimate(_conj_square(), Q("1/3"), 8)
    diffs = np.abs(est.differences)
    assert diffs[-1] < diffs[1]
    assert est.naive >= 0 and est.canonical_estimate >= 0


def _coefficient_bound(f):
    cn, lin, cd, lin_d = f.forms()

    def size(c, ls):
        return 0.5 * math.log(g_norm(c)) + sum(
            math.log(math.sqrt(g_norm(a)) + math.sqrt(g_norm(b))) for a, b in ls)

    return max(size(cn, lin), size(cd, lin_d))


def test_height_transformation_bounded():
    f = ExactBlaschke("3/5+4/5*i", ["1/2", "1/3*i"])
    rnd = random.Random(17)
    upper = _coefficient_bound(f)
    log_res = 0.5 * math.log(g_norm(f.resultant))
    gaps = []
    for k in range(100):
        size = 1 << (2 + k)          # heights grow across the sample
        x = GaussianRational((rnd.randint(-size, size), rnd.randint(-size, size)),
                             (rnd.randint(1, size), rnd.randint(-size, size)))
        gaps.append(naive_height(f(x)) - f.degree * naive_height(x))
    # |N(X, Y)| <= L1(N) max(|X|, |Y|)^d, and cancellation is limited by the resultant
    assert max(gaps) <= upper + 1e-9
    assert min(gaps) >= -log_res
    low, high = np.abs(gaps[:50]), np.abs(gaps[50:])
    assert high.max() <= max(low.max(), upper) + 1e-9


def test_intersection_examples():
    hits = orbit_intersection(exact_power(2), Q("1/2"), exact_power(3), Q("1/2"), 20)
    assert [(i, j, str(p)) for i, j, p in hits] == [(0, 0, "1/2")]
    hits = orbit_intersection(exact_power(2), Q("1/2"), exact_power(4), Q("1/2"), 10)
    assert [(i, j) for i, j, _ in hits] == [(2 * j, j) for j in range(6)]
    assert orbit_intersection(exact_power(2), Q("0"), exact_power(3), Q("1/2"), 15) == []


def test_intersection_symmetric():
    f, g = exact_power(2), exact_power(4)
    a = orbit_intersection(f, Q("1/3"), g, Q("1/9"), 8)
    b = orbit_intersection(g, Q("1/9"), f, Q("1/3"), 8)
    assert sorted((j, i) for i, j, _ in a) == sorted((i, j) for i, j, _ in b)
    assert a


def test_intersection_matches_exhaustive_search():
    f, g = _conj_square(), exact_compose(_conj_square(), _conj_square())
    x, y = Q("1/3"), Q("1/3")
    N = 6
    of, og = orbit(f, x, N), orbit(g, y, N)
    want = [(i, j) for i in range(N + 1) for j in range(N + 1) if of[i] == og[j]]
    got = [(i, j) for i, j, _ in orbit_intersection(f, x, g, y, N)]
    assert got == want and (2, 1) in got


def test_split_primes_are_split():
    for p, s in split_primes(4):
        assert p % 4 == 1 and p < 2 ** 61
        assert (s * s + 1) % p == 0


def test_degree_growth():
    rep = degree_growth_experiment(exact_power(2), exact_power(3), Q("1/2"), 10)
    assert rep.rate_f == pytest.approx(math.log(2), abs=1e-9)
    assert rep.rate_g == pytest.approx(math.log(3), abs=1e-9)
    assert rep.separated and rep.ratio >= 1.5 ** 5
    assert rep.rows[3] == (3, pytest.approx(8 * LOG2), pytest.approx(27 * LOG2))


def test_degree_growth_conjugates():
    g3 = exact_compose(exact_iota(Q("1/2")), exact_power(3), exact_iota(Q("-1/2")))
    rep = degree_growth_experiment(_conj_square(), g3, Q("1/3"), 6)
    assert rep.separated


def test_degree_growth_rejections():
    with pytest.raises(DomainError):
        degree_growth_experiment(exact_power(2), exact_power(2), Q("1/2"), 5)
    with pytest.raises(DomainError):
        degree_growth_experiment(exact_power(2), exact_power(3), Q("0"), 5)


def test_map_serialisation_round_trip():
    f = ExactComposite(ExactBlaschke("-i", ["1/2+1/3*i"]), exact_power(2))
    g = exact_map_from_dict(f.to_dict())
    x = Q("2/7-1/9*i")
    assert g(x) == f(x)
    h = exact_map_from_dict(ExactBlaschke("3/5-4/5*i", ["1/5"]).to_dict())
    assert str(h.rho) == "3/5-4/5*i"
