import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leeyang import ising
from leeyang.decomposition import (
    A_batch,
    A_by_difference,
    decompose,
    decompose_batch,
    rescaled_activities,
    verify_A_nonzero,
)
from leeyang.graph import Graph, delete_vertex, generate
from leeyang.ising import ActivityAssignment, evaluate_Z
from leeyang.sampling import annulus_point, torus_point

from conftest import small_connected_graphs

K2 = generate("complete", n=2)
K3 = generate("complete", n=3)


def test_rescaled_activities_examples():
    beta = 0.4
    z = np.array([0.3 + 0.2j, 1.7 - 0.5j])
    np.testing.assert_allclose(rescaled_activities(K2, z, 0, "prime", beta), [z[1] / beta])
    np.testing.assert_allclose(rescaled_activities(K2, z, 0, "doubleprime", beta), [z[1] * beta])
    a, b, c = 0.5j, 2.0, -1.0 + 1j
    P3 = generate("path", n=3)
    np.testing.assert_allclose(rescaled_activities(P3, [a, b, c], 0, "prime", beta), [b / beta, c])
    with pytest.raises(ValueError):
        rescaled_activities(P3, [a, b, c], 0, "sideways", beta)


def test_decompose_K2():
    d = decompose(K2, ActivityAssignment(0.5, [0.7j, 1.0]), 0)
    assert d.A == pytest.approx(1.5) and d.B == pytest.approx(1.5)
    z0 = 0.7j
    assert d.value(z0) == pytest.approx(evaluate_Z(K2, ActivityAssignment(0.5, [z0, 1.0])))


def test_decompose_single_vertex():
    d = decompose(Graph(1), ActivityAssignment(0.5, [0.3]), 0)
    assert d.A == 1 and d.B == 1


def test_decompose_K3_random_pivot_values():
    rng = np.random.default_rng(0)
    for z0 in rng.normal(size=10) + 1j * rng.normal(size=10):
        a = ActivityAssignment(0.5, [z0, 1, 1])
        d = decompose(K3, a, 0)
        Z = evaluate_Z(K3, a)
        assert abs(d.value(z0) - Z) <= 1e-12 * abs(Z)


def test_B_recomputed_independently():
    g = generate("grid", rows=2, cols=3)
    a = ActivityAssignment(0.3, annulus_point(4, 0, 6))
    u = 1
    d = decompose(g, a, u)
    h, relabel = delete_vertex(g, u)
    zpp = np.empty(h.n, dtype=complex)
    for w, new in relabel.items():
        zpp[new] = a.z[w] * (a.beta if w in g.neighbors(u) else 1.0)
    assert d.B == pytest.approx(evaluate_Z(h, ActivityAssignment(a.beta, zpp)), rel=1e-14)


def test_batch_matches_scalar():
    g = generate("cycle", n=5)
    zs = np.array([annulus_point(1, i, 5) for i in range(4)])
    A, B, _, _ = decompose_batch(g, 0.6, zs, 2)
    A2, _ = A_batch(g, 0.6, zs, 2)
    for i, z in enumerate(zs):
        d = decompose(g, ActivityAssignment(0.6, z), 2)
        assert A[i] == pytest.approx(d.A, rel=1e-14) and B[i] == pytest.approx(d.B, rel=1e-14)
        assert A2[i] == A[i]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10), st.floats(0.0, 1.0), st.integers(0, 10**6), st.floats(0.05, 0.95), st.integers(0, 10**6))
def test_decomposition_identity_and_two_routes(n, p, gseed, beta, zseed):
    g = generate("gnp", n=n, p=p, seed=gseed)
    z = annulus_point(zseed, 0, n)
    a = ActivityAssignment(beta, z)
    Z = evaluate_Z(g, a)
    for u in range(n):
        d = decompose(g, a, u)
        assert abs(Z - d.value(z[u])) <= 1e-12 * (1 + abs(Z))
        assert abs(d.A - A_by_difference(g, a, u)) <= 1e-12 * abs(d.A)
        assert len(d.z_prime) == len(d.z_doubleprime) == n - 1


def test_rescaled_modulus_on_torus():
    beta = 0.3
    for g in small_connected_graphs():
        z = torus_point(2, 0, g.n)
        for u in range(g.n):
            zp = rescaled_activities(g, z, u, "prime", beta)
            _, relabel = delete_vertex(g, u)
            for w in g.neighbors(u):
                assert abs(zp[relabel[w]]) == pytest.approx(1 / beta, rel=1e-14)


def test_K2_minimum_of_A():
    # |A| = |e^{i theta} + beta| is minimized at theta = pi with value 1 - beta
    theta = 2 * np.pi * np.arange(100000) / 100000
    assert np.abs(np.exp(1j * theta) + 0.5).min() == pytest.approx(0.5, abs=1e-9)
    rep = verify_A_nonzero(K2, 0.5, samples=1000, seed=0)
    assert rep.passed
    assert rep.min_abs_A == pytest.approx(0.5, abs=1e-3)
    assert rep.min_abs_A >= 0.5 - 1e-12


def test_single_vertex_A_is_one():
    rep = verify_A_nonzero(Graph(1), 0.5, samples=10, seed=0)
    assert rep.min_abs_A == 1.0 and rep.passed


def test_K3_A_nonzero_and_grid_oracle():
    rep = verify_A_nonzero(K3, 0.5, samples=1000, seed=1)
    assert rep.passed and rep.min_abs_A > 0
    # dense grid over the two remaining angles bounds the true minimum from above
    th = 2 * np.pi * np.arange(400) / 400
    a, b = np.meshgrid(th, th)
    zs = np.stack([np.ones(a.size), np.exp(1j * a.ravel()), np.exp(1j * b.ravel())], axis=1)
    A, _ = A_batch(K3, 0.5, zs, 0)
    grid_min = np.abs(A).min()
    assert grid_min > 0
    assert rep.min_abs_A >= grid_min - 0.05


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
def test_A_nonzero_on_test_graphs(beta):
    for g in small_connected_graphs():
        rep = verify_A_nonzero(g, beta, samples=1000, seed=3)
        assert rep.passed and rep.min_abs_A > 0


def test_verify_A_rejects_bad_inputs():
    with pytest.raises(ValueError, match="connected"):
        verify_A_nonzero(Graph(3, ((0, 1),)), 0.5)
    with pytest.raises(ising.BetaRangeError):
        verify_A_nonzero(K2, 1.2)
