import cmath

import numpy as np
import pytest

from ellipticw.errors import HypothesisViolated, SurfaceViolated
from ellipticw.rmatrix import AlgebraParams, build_Rhat, swap
from ellipticw.series import contour_coefficients
from ellipticw.structure import (
    ClassicalLimitSpec,
    SurfaceSigma,
    bigF_M,
    bigF_single,
    bigM_matrix,
    bigT,
    bigY,
    dlnT_dc,
    dlnT_dc_analytic,
    dM_dc,
    f_classical,
    f_classical_logderiv,
    f_h,
    f_h_limit,
    f_quantum,
    f_quantum_spec,
    sum_rule,
)

Q, P_NOME = 0.4 + 0.1j, 0.09 + 0.02j
XS = [1.05 + 0.2j, 0.9 * cmath.exp(2.1j), 1.1 * cmath.exp(-0.7j)]


@pytest.mark.parametrize("N", [2, 3])
def test_criticality(N):
    P = AlgebraParams(N, Q, P_NOME, -N)
    for x in XS:
        assert abs(bigT(x, P) - 1) < 1e-9
        assert np.linalg.norm(bigM_matrix(x, P) - np.eye(N * N)) < 1e-8
        assert abs(dlnT_dc(x, P) - dlnT_dc_analytic(x, P)) < 1e-6
    assert np.linalg.norm(dM_dc(XS[0], P)) < 1e-6


def test_noncritical_is_nontrivial():
    P = AlgebraParams(2, Q, P_NOME, 0.3)
    assert abs(bigT(XS[0], P) - 1) > 1e-3
    assert np.linalg.norm(bigM_matrix(XS[0], P) - np.eye(4)) > 1e-3
    # x = 1 is a 0/0: tau_N(q^1/2 y) has a simple pole at y = 1, so the first
    # ratio tends to -1 while the second tends to 1 away from c = -N
    assert abs(bigT(cmath.exp(1e-9j), P) + 1) < 1e-6
    assert abs(bigT(cmath.exp(1e-9j), P.with_c(-2)) - 1) < 1e-6
    assert abs(bigT(XS[1], P) - bigT(XS[1], P, method="sum")) < 1e-12


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_classical_function(N):
    for x in XS:
        f = f_classical(x, N, Q)
        assert abs(f + f_classical(1 / x, N, Q)) < 1e-12
        assert abs(f - f_classical_logderiv(x, N, Q)) < 1e-10 * max(1, abs(f))
        assert abs(sum_rule(x, N, Q)) < 1e-10


def test_F_symmetry_routes_and_quasiperiodicity():
    N = 2
    x = XS[0]
    assert abs(bigF_single(x, N, Q) - bigF_single(1 / x, N, Q)) < 1e-12
    assert abs(bigF_single(x, N, Q) - bigF_single(x, N, Q, method="tau")) < 1e-12
    for M in (1, -1, 2, -2):
        P = AlgebraParams(N, Q, P_NOME)
        a, b = bigF_M(M, x, P), bigF_M(M, x, P, method="iterated")
        assert abs(a - b) < 1e-10 * max(1, abs(b))
    # R-hat_21((-p^1/2)^{NM} x) = F(M, x) R-hat_21(x)
    P = AlgebraParams(N, Q, P_NOME)
    M = 1
    xi = cmath.log(x) / (1j * cmath.pi)
    shift = N * M * (2 * P.tau / 2 + 1)  # (-p^1/2)^{NM} in additive form
    lhs = swap(build_Rhat(params=P, xi=xi + shift), N)
    rhs = bigF_M(M, x, P) * swap(build_Rhat(params=P, xi=xi), N)
    assert np.linalg.norm(lhs - rhs) < 1e-9 * np.linalg.norm(rhs)


def test_surface_construction():
    s = SurfaceSigma.build(2, 1, 0.5, 0.25)
    assert s.residual < 1e-12
    assert s.S == 2 and SurfaceSigma.build(2, -1, 0.5, 0.25).S == 1
    with pytest.raises(SurfaceViolated):
        SurfaceSigma.build(2, 1, 0.5, 0.25, tol=-1.0)


@pytest.mark.parametrize("N,h,M", [(2, 1, 1), (3, -2, -1), (2, 2, -1)])
def test_y_trivial_when_p_is_q_power(N, h, M):
    q = complex(Q)
    surf = SurfaceSigma.build(N, M, q, q ** (N * h))
    for x in XS:
        assert abs(bigY(x, surf) - 1) < 1e-9


def test_Y_routes_and_inversion():
    surf = SurfaceSigma.build(3, 1, 0.3, 0.8)
    for x in XS:
        y = bigY(x, surf)
        assert abs(y - bigY(x, surf, method="ratio")) < 1e-9 * abs(y)
        assert abs(y * bigY(1 / x, surf) - 1) < 1e-10


def test_f_h_even_normalization_and_antisymmetry():
    N, M, h = 3, 1, 2
    for x in XS:
        k = -0.5 * N * N * M * (N * M + 1) * h
        assert abs(f_h(x, h, M, N, Q) - k * f_classical_logderiv(x, N, Q)) < 1e-9 * abs(f_h(x, h, M, N, Q))
        assert abs(f_h(x, 1, M, N, Q) + f_h(1 / x, 1, M, N, Q)) < 1e-11


def test_f_h_limit_extrapolation():
    # higher orders in beta grow near |x| = 1, so stay away from it
    x = 1.1 + 0.3j
    for N, h, M in [(2, 1, 1), (3, -1, 1), (2, 2, 1)]:
        ref = f_h(x, h, M, N, Q)
        assert abs(f_h_limit(x, h, M, N, Q) - ref) < 1e-5 * abs(ref)


def test_classical_limit_validation():
    with pytest.raises(ValueError):
        ClassicalLimitSpec(2, 1, 1, Q, 0.0)
    with pytest.raises(ValueError):
        ClassicalLimitSpec(2, 0, 1, Q, 1e-3)


def test_quantum_function():
    surf = SurfaceSigma.build(2, 1, 0.3, 0.6)
    assert abs(f_quantum(0.0 + 1e-300j, surf) - 1) < 1e-14
    for x in XS:
        assert abs(bigY(x, surf) - f_quantum(x, surf) / f_quantum(1 / x, surf)) < 1e-9
    spec = f_quantum_spec(surf)
    T = spec.taylor(16)
    C = contour_coefficients(spec, 1.0, 0, 16)
    assert max(abs(T[l] - C[l]) / max(1, abs(C[l])) for l in range(17)) < 1e-10


def test_quantum_hypothesis():
    with pytest.raises(HypothesisViolated):
        f_quantum(1.1, SurfaceSigma.build(2, 1, 0.5, 0.3))
