import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blaschke_dyn import blaschke as B
from blaschke_dyn.cheby import cheby_blaschke
from blaschke_dyn.errors import DomainError

from conftest import boundary

disk_points = st.builds(lambda r, th: r * complex(math.cos(th), math.sin(th)),
                        st.floats(0.0, 0.9), st.floats(0.0, 2 * math.pi))
fbps = st.builds(lambda rho, zs: B.make_fbp(complex(math.cos(rho), math.sin(rho)), zs),
                 st.floats(0, 2 * math.pi), st.lists(disk_points, min_size=1, max_size=4))


def test_construction_rejects_invalid_data():
    with pytest.raises(DomainError):
        B.make_fbp(1.0, [1.0])
    with pytest.raises(DomainError):
        B.make_fbp(1.1, [0.2])
    with pytest.raises(DomainError):
        B.make_fbp(1.0, [])


def test_evaluation_examples():
    a = 0.3 - 0.4j
    assert abs(B.mobius_factor(a)(a)) < 1e-16
    f = B.make_fbp(1.0, [0.3, -0.2 + 0.1j])
    # f(0) = prod(-a_i)
    assert f(0) == pytest.approx((-0.3) * (0.2 - 0.1j), abs=1e-16)
    z = np.exp(1j * np.linspace(0, 6, 50))
    assert np.max(np.abs(np.abs(B.power_map(2)(z)) - 1)) < 1e-15


def test_derivative_matches_finite_difference():
    f = B.make_fbp(np.exp(0.3j), [0.3, -0.2 + 0.1j, 0.5j])
    z = 0.2 + 0.1j
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.derivative(z) - fd) < 1e-8


@settings(max_examples=60, deadline=None)
@given(f=fbps)
def test_boundary_modulus_and_reflection(f):
    z = boundary(200)
    assert np.max(np.abs(np.abs(f(z)) - 1)) < 1e-10
    w = np.array([0.3 + 0.1j, -0.5j, 0.7])
    refl = f(w) * np.conj(f(1 / np.conj(w)))
    assert np.max(np.abs(refl - 1)) < 1e-9


def test_compose_examples():
    assert B.equals_fbp(B.compose(B.power_map(2), B.power_map(3)), B.power_map(6))
    f = B.make_fbp(np.exp(1j), [0.1, 0.4j])
    assert B.equals_fbp(B.compose(f, B.identity()), f)
    a = 0.36 - 0.15j
    h = B.compose(B.iota(a).as_fbp(), B.power_map(2))
    # zeros of (z^2 + a)/(1 + conj(a) z^2) are the square roots of -a
    want = np.sqrt(complex(-a)) * np.array([1, -1])
    got = np.array(h.zeros)
    assert np.max(np.min(np.abs(got[:, None] - want[None, :]), axis=1)) < 1e-12
    assert np.allclose(np.abs(got), math.sqrt(abs(a)))


@settings(max_examples=25, deadline=None)
@given(a=fbps, b=fbps, c=fbps)
def test_composition_associative_and_multiplicative(a, b, c):
    left = B.compose(B.compose(a, b), c)
    right = B.compose(a, B.compose(b, c))
    assert left.degree == right.degree == a.degree * b.degree * c.degree
    z = boundary(64)
    assert np.max(np.abs(left(z) - right(z))) < 1e-8


def test_iterate():
    assert B.equals_fbp(B.iterate(B.power_map(2), 3), B.power_map(8))
    f = B.make_fbp(1j, [0.2, 0.3])
    assert B.iterate(f, 1) is f or B.equals_fbp(B.iterate(f, 1), f)
    with pytest.raises(DomainError):
        B.iterate(B.power_map(2), 13)


def test_iterate_of_conjugated_square():
    a = 0.3 + 0.2j
    phi = B.iota(a)
    f = B.conjugate_by(B.power_map(2), phi)
    f2 = B.iterate(f, 2)
    assert f2.degree == 4
    cd = B.critical_data(f2)
    # the critical point of f is fixed, so f o f is totally ramified there
    assert len(cd.critical_points) == 1
    point, mult = cd.critical_points[0]
    assert mult == 3
    assert abs(point - phi(0)) < 1e-4


def test_critical_data_examples():
    cd = B.critical_data(B.power_map(5))
    assert cd.critical_points[0][1] == 4 and abs(cd.critical_points[0][0]) < 1e-3
    assert abs(cd.critical_values[0]) < 1e-12
    a = -0.25 + 0.4j
    cd = B.critical_data(B.compose(B.iota(a).as_fbp(), B.power_map(2)))
    assert len(cd.critical_values) == 1 and abs(cd.critical_values[0] - a) < 1e-12
    # z (z - 1/2)/(1 - z/2): critical points solve z^2 - 4z + 1 = 0
    cd = B.critical_data(B.make_fbp(1.0, [0.0, 0.5]))
    assert len(cd.critical_points) == 1
    assert cd.critical_points[0][0] == pytest.approx(2 - math.sqrt(3), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(f=fbps, g=fbps)
def test_critical_values_push_forward(f, g):
    if f.degree < 2:
        return
    h = B.compose(f, g)
    vals = np.array(B.critical_data(h).critical_values)
    for v in B.critical_data(f).critical_values:
        assert np.min(np.abs(vals - v)) < 1e-6
    total = sum(m for _, m in B.critical_data(h).critical_points)
    assert total == h.degree - 1


def test_totally_ramified():
    nf = B.totally_ramified_normal_form(B.power_map(4))
    assert nf.s == 4 and abs(nf.p) < 1e-6 and abs(nf.rho - 1) < 1e-8
    f = B.make_fbp(np.exp(0.7j), [0.3 - 0.1j, -0.5])
    assert B.is_totally_ramified(f)
    assert not B.is_totally_ramified(cheby_blaschke(3, 0.4).product)
    g = B.pre_post(B.iota(0.2 - 0.3j), B.power_map(3), B.iota(-0.1 + 0.4j))
    nf = B.totally_ramified_normal_form(g)
    assert nf is not None and nf.s == 3
    assert np.max(np.abs(nf.reconstruct()(boundary(64)) - g(boundary(64)))) < 1e-8


def test_associated_examples():
    f = cheby_blaschke(3, 0.5).product
    w = B.associated(f, f)
    assert w is not None
    eps, eph = w
    z = boundary(32)
    assert np.max(np.abs(eph(f(eps(z))) - f(z))) < 1e-8
    a = 0.4 - 0.2j
    conj = B.pre_post(B.iota(a), B.power_map(2), B.iota(-a))
    assert B.associated(conj, B.power_map(2)) is not None
    assert B.associated(cheby_blaschke(3, 0.4).product, cheby_blaschke(3, 0.7).product) is None


def test_associated_recovers_conjugation():
    T = cheby_blaschke(4, 0.6).product
    eph = B.DiskAutomorphism(np.exp(0.4j), 0.2 + 0.1j)
    eps = B.DiskAutomorphism(np.exp(-1j), -0.1 + 0.3j)
    F = B.pre_post(eph, T, eps)
    w = B.associated(F, T)
    assert w is not None
    e1, e2 = w
    z = boundary(40)
    assert np.max(np.abs(e2(T(e1(z))) - F(z))) < 1e-8


def test_equals_fbp():
    f = B.make_fbp(1.0, [0.1, 0.2j])
    assert B.equals_fbp(f, f)
    assert not B.equals_fbp(B.power_map(2), B.power_map(3))
    assert B.equals_fbp(B.compose(B.power_map(2), B.power_map(3)),
                        B.compose(B.power_map(3), B.power_map(2)))


def test_disk_automorphism_group_laws():
    a = B.DiskAutomorphism(np.exp(0.3j), 0.2 - 0.5j)
    b = B.DiskAutomorphism(-1j, 0.4)
    z = np.array([0.1, 0.3 + 0.4j, -0.7j])
    assert np.allclose(a.inverse()(a(z)), z, atol=1e-14)
    assert np.allclose(a.then(b)(z), b(a(z)), atol=1e-14)
    assert np.allclose(a.as_fbp()(z), a(z), atol=1e-14)


def test_json_round_trip():
    f = B.make_fbp(np.exp(0.2j), [0.1 + 0.2j, -0.3])
    d = f.to_dict()
    assert list(d) == ["rho", "zeros"]
    assert list(d["rho"]) == ["re", "im"]
    assert B.equals_fbp(B.FiniteBlaschkeProduct.from_dict(d), f, 1e-15)


def test_cluster_points_merges_triple_roots():
    pts = 1e-5 * np.exp(2j * np.pi * np.arange(3) / 3) + 0.3
    (c, m), = B.cluster_points(pts)
    assert m == 3 and abs(c - 0.3) < 1e-12
