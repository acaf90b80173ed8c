import cmath
import math

import numpy as np
import pytest

from ellipticw.errors import StarNomeOutOfDomain
from ellipticw.identities import AUX_PROPERTY_IDS, PROPERTY_IDS, sample_spectral_points, verify_property
from ellipticw.rmatrix import (
    AlgebraParams,
    GaugeMatrices,
    build_R,
    build_Rhat,
    build_Rhat_star,
    build_S,
    component,
    gauge_transform,
    kappa_inv,
    partial_transpose2,
    swap,
    tau_N,
    weight_W,
)

Q, P_NOME = 0.4 + 0.1j, 0.09 + 0.02j


@pytest.fixture(scope="module")
def pts():
    return sample_spectral_points(np.random.default_rng(5), 4)


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("pid", PROPERTY_IDS + AUX_PROPERTY_IDS)
def test_identities(N, pid, pts):
    res = verify_property(pid, AlgebraParams(N, Q, P_NOME), pts)
    assert res.passed, res.line()
    assert res.samples == len(pts)


def test_unitarity_at_reference_point():
    P = AlgebraParams(2, 0.4, 0.09)
    xi = cmath.log(1.3) / (1j * math.pi)
    res = verify_property("UNITARITY", P, [(xi, 0.2)])
    assert res.max_residual < 1e-9


def test_weight_at_origin():
    P = AlgebraParams(3, Q, P_NOME)
    assert abs(weight_W((0, 0), 0, P.zeta, P.tau, 3) - 1 / 3) < 1e-14


def test_kappa_at_fixed_point():
    assert abs(kappa_inv(1.0, AlgebraParams(3, Q, P_NOME)) - 1) < 1e-14


def test_S_zn_symmetry_and_pattern():
    N = 3
    P = AlgebraParams(N, Q, P_NOME)
    S = build_S(0.13 + 0.02j, P.zeta, P.tau, N)
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    v = component(S, N, (a, b), (c, d))
                    assert abs(v - component(S, N, (a + 1, b + 1), (c + 1, d + 1))) < 1e-13
                    if (a + b - c - d) % N:
                        assert abs(v) < 1e-14


def test_gauge_involution_and_pattern():
    N = 3
    gm = GaugeMatrices.of(N)
    A = np.random.default_rng(0).normal(size=(N * N, N * N)) + 0j
    back = gauge_transform(gauge_transform(A, gm), gm, inverse=True)
    assert np.allclose(back, A, atol=1e-14)
    assert np.array_equal(gauge_transform(A, gm) == 0, A == 0)


def test_eight_vertex_zero_pattern():
    R = build_R(params=AlgebraParams(2, Q, P_NOME), xi=0.17 + 0.03j)
    nonzero = np.abs(R) > 1e-14
    expected = np.zeros((4, 4), dtype=bool)
    for i, j in [(0, 0), (3, 3), (1, 1), (2, 2), (1, 2), (2, 1), (0, 3), (3, 0)]:
        expected[i, j] = True
    assert np.array_equal(nonzero, expected)


def test_partial_transpose_and_swap_are_involutions():
    N = 3
    A = np.random.default_rng(1).normal(size=(N * N, N * N))
    assert np.array_equal(partial_transpose2(partial_transpose2(A, N), N), A)
    assert np.allclose(swap(swap(A, N), N), A)
    B = partial_transpose2(A, N)
    # (A^t2)^{ab}_{cd} = A^{ad}_{cb}
    assert component(B, N, (0, 1), (2, 0)) == component(A, N, (0, 0), (2, 1))


def test_tau_n_properties():
    P = AlgebraParams(3, Q, P_NOME)
    xi = 0.23 + 0.04j
    t = lambda v: tau_N(params=P, xi=v)  # noqa: E731
    assert abs(t(0) - 1) < 1e-14
    assert abs(t(xi) * t(-xi) - 1) < 1e-13
    assert abs(t(xi + 3 * P.zeta) - t(xi)) < 1e-12 * abs(t(xi))
    assert abs(t(xi) - tau_N(params=P, xi=xi, method="sum")) < 1e-12


def test_rhat_star():
    P = AlgebraParams(3, Q, P_NOME)
    xi = 0.21 + 0.01j
    assert np.allclose(build_Rhat_star(params=P, xi=xi), build_Rhat(params=P, xi=xi), atol=1e-14)
    ratio = build_Rhat(params=P, xi=xi) / np.where(build_R(params=P, xi=xi) == 0, 1, build_R(params=P, xi=xi))
    vals = ratio[np.abs(build_R(params=P, xi=xi)) > 1e-12]
    assert np.allclose(vals, vals[0])
    with pytest.raises(StarNomeOutOfDomain):
        AlgebraParams(3, Q, P_NOME, c=3).starred()


def test_generic_s_sum_equals_closed():
    res = verify_property("S_ROUTES", AlgebraParams(4, Q, P_NOME), sample_spectral_points(np.random.default_rng(2), 3))
    assert res.max_residual < 1e-10
