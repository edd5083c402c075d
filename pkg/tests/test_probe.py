import numpy as np
import pytest

from leeyang.graph import Graph, generate
from leeyang.ising import BetaRangeError, plus_spectrum
from leeyang.probe import (
    directional_zero,
    proof_probe,
    targeted_point,
    taylor_check,
    taylor_remainder,
)
from leeyang.sampling import torus_point

from conftest import small_connected_graphs

K2 = generate("complete", n=2)
K3 = generate("complete", n=3)


def test_directional_zero_examples():
    assert directional_zero(K2, 0.5, [0, 1], 0) == pytest.approx(-1.0, abs=1e-15)
    w = directional_zero(K2, 0.5, [0, 0.999], 0)
    assert w == pytest.approx(-(0.5 * 0.999 + 1) / (0.999 + 0.5), abs=1e-15)
    assert abs(w) > 1
    assert directional_zero(Graph(1), 0.5, [0.3], 0) == -1


def test_proof_probe_K2():
    rec = proof_probe(K2, 0.5, np.array([1, 1], dtype=complex), 0, 1e-3)
    assert rec.passed
    assert abs(rec.perturbed_Z) <= 1e-10 * rec.scale
    assert rec.u_coordinate_modulus >= 1
    # closed forms: f(t) = t^2 + t + 1, A(s z) = s + 0.5
    s = 1 - 1e-3
    assert rec.mu == pytest.approx(s * s + s + 1, rel=1e-15)
    assert rec.A0 == pytest.approx(1.5)
    assert rec.nu == pytest.approx(-1e-3, rel=1e-9)
    assert rec.tau == pytest.approx(-(s * s + s + 1) / (s + 0.5), rel=1e-14)
    assert rec.mu_restriction == pytest.approx(rec.mu, rel=1e-15)


def test_mu_taylor_remainder_fit():
    g = generate("cycle", n=5)
    z0 = torus_point(8, 0, 5)
    f = plus_spectrum(g, 0.5, z0)
    f1, fp1 = f.moment(0), f.moment(1)
    consts = []
    for eps in (1e-2, 1e-3, 1e-4):
        rec = proof_probe(g, 0.5, z0, 0, eps)
        consts.append(abs(rec.mu - (f1 - eps * fp1)) / eps**2)
    assert max(consts) <= 10 * min(consts)


def test_taylor_check_K2():
    rep = taylor_check(K2, 0.5, np.ones(2), 0, [1e-2, 1e-3, 1e-4])
    np.testing.assert_allclose(rep.r1, 1.0, rtol=1e-12)
    np.testing.assert_allclose(rep.r2, 1.0, rtol=1e-9)
    assert rep.r1_limit == pytest.approx(1.0) and rep.passed


def test_taylor_check_linear():
    rep = taylor_check(Graph(1), 0.5, np.ones(1), 0, [1e-2, 1e-3, 1e-4])
    assert np.all(rep.r1 == 0) and np.all(rep.r2 == 0) and rep.passed


def test_taylor_check_K3_random():
    z0 = torus_point(1, 0, 3)
    rep = taylor_check(K3, 0.5, z0, 1, [1e-2, 1e-3, 1e-4])
    assert rep.passed
    np.testing.assert_allclose(rep.r1[-1], rep.r1_limit, rtol=1e-3)
    np.testing.assert_allclose(rep.r2[-1], rep.r2_limit, rtol=1e-3)


def test_taylor_remainder_matches_direct():
    c = np.array([1, 0.3 - 0.2j, 2j, -1.5, 0.7])
    for eps in (0.1, 0.01):
        direct = np.polyval(c[::-1], 1 - eps) - c.sum() + eps * (np.arange(5) * c).sum()
        assert taylor_remainder(c, eps) == pytest.approx(direct, rel=1e-10)


def test_probe_validation():
    z0 = np.ones(2, dtype=complex)
    with pytest.raises(ValueError, match="torus"):
        proof_probe(K2, 0.5, np.array([1.0, 0.9]), 0, 1e-3)
    with pytest.raises(ValueError, match="epsilon"):
        proof_probe(K2, 0.5, z0, 0, 0.2)
    with pytest.raises(ValueError, match="connected"):
        proof_probe(Graph(2), 0.5, z0, 0, 1e-3)
    with pytest.raises(BetaRangeError):
        proof_probe(K2, 1.0, z0, 0, 1e-3)
    with pytest.raises(ValueError, match="3 points"):
        taylor_check(K2, 0.5, z0, 0, [1e-2, 1e-3])


def test_targeted_point_is_near_a_zero():
    g = generate("cycle", n=6)
    z0 = torus_point(4, 0, 6)
    zt = targeted_point(g, 0.5, z0, 2)
    assert np.allclose(np.abs(zt), 1, atol=1e-15)
    f = plus_spectrum(g, 0.5, zt)
    assert abs(f.moment(0)) < 1e-3 * f.abs_sum


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
def test_directional_zero_on_circle_and_expelled(beta):
    for g in small_connected_graphs():
        for s in range(20):
            z = torus_point(s, 0, g.n)
            for u in range(g.n):
                assert abs(abs(directional_zero(g, beta, z, u)) - 1) <= 1e-9
                if g.n >= 2:
                    assert abs(directional_zero(g, beta, (1 - 1e-3) * z, u)) > 1


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
def test_probe_invariants_random_and_targeted(beta):
    for g in small_connected_graphs():
        z0 = torus_point(21, 0, g.n)
        for u in range(g.n):
            for zp in (z0, targeted_point(g, beta, z0, u)):
                for eps in (1e-2, 1e-3, 1e-4):
                    rec = proof_probe(g, beta, zp, u, eps)
                    assert rec.passed, rec.checks
                assert taylor_check(g, beta, zp, u, [1e-2, 1e-3, 1e-4]).passed
