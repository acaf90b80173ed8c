"""Numerical checks of the R-matrix identities at sample points.

Residuals are relative Frobenius norms ||L - R|| / max(1, ||R||), so they
stay comparable between the identity-valued checks and the rest.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import PoleHit, SamplePointDegenerate
from .report import CheckResult
from .rmatrix import (
    AlgebraParams,
    GaugeMatrices,
    S_closed,
    S_entry_from_weights,
    build_R,
    build_Rhat,
    build_Rtilde,
    build_S,
    build_S_closed,
    component,
    embed3,
    gluing_constant,
    gluing_lhs,
    partial_transpose2,
    Rtilde_entry_closed,
    swap,
)
from .theta import DEFAULT_POLICY, PI, TruncationPolicy, theta_char

PROPERTY_IDS = (
    "YBE",
    "UNITARITY",
    "CROSSING",
    "ANTISYMMETRY",
    "QUASIPERIODICITY",
    "INV_TRANSPOSE",
    "S_IDENTITY_1",
    "S_IDENTITY_2",
)
AUX_PROPERTY_IDS = (
    "INV_TRANSPOSE_HAT",
    "S_ROUTES",
    "S_FOURIER",
    "RTILDE_ENTRIES",
    "GLUING",
    "S_SHIFTS",
)


def sample_spectral_points(rng: np.random.Generator, count: int, pairs: bool = True):
    """Additive spectral points with 0.8 < |z| < 1.25 and arg z at least 0.1 from pi."""
    out = []
    for _ in range(count):
        pt = []
        for _ in range(2 if pairs else 1):
            r = math.exp(rng.uniform(math.log(0.8), math.log(1.25)))
            th = rng.uniform(-PI + 0.1, PI - 0.1)
            pt.append(cmath.log(r * cmath.exp(1j * th)) / (1j * PI))
        out.append(tuple(pt) if pairs else pt[0])
    return out


def rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs)))


def _cond(A) -> float:
    return float(np.linalg.cond(A))


def _theta11(x, tau, policy):
    return theta_char((0.5, 0.5), x, tau, policy)


def _residual_at(pid: str, xi, eta, P: AlgebraParams, policy: TruncationPolicy):
    """Return (residual, condition number or None, note or None)."""
    N = P.N
    one = np.eye(N * N)
    R = lambda x: build_R(params=P, policy=policy, xi=x)  # noqa: E731
    Rh = lambda x: build_Rhat(params=P, policy=policy, xi=x)  # noqa: E731

    if pid == "UNITARITY":
        A = R(xi)
        return rel_residual(A @ swap(R(-xi), N), one), _cond(A), None
    if pid == "CROSSING":
        A = partial_transpose2(R(xi), N)
        B = partial_transpose2(swap(R(-xi - N * P.zeta), N), N)
        return rel_residual(A @ B, one), _cond(A), None
    if pid == "ANTISYMMETRY":
        gm = GaugeMatrices.of(N)
        g1 = np.kron(gm.g, np.eye(N))
        g1i = np.kron(np.linalg.inv(gm.g), np.eye(N))
        base = g1i @ R(xi) @ g1
        lhs = R(xi + 1)
        res = rel_residual(lhs, P.omega * base)
        note = None
        if res >= policy.tol:
            if rel_residual(lhs, base / P.omega) < policy.tol:
                note = "passes with omega^-1 instead of omega (sign-flipped near-pass)"
            elif rel_residual(R(xi - 1), P.omega * base) < policy.tol:
                note = "passes only on the -z = exp(i pi (xi-1)) branch"
        return res, None, note
    if pid == "QUASIPERIODICITY":
        gm = GaugeMatrices.of(N)
        C = np.kron(gm.g_half @ gm.hshift @ gm.g_half, np.eye(N))
        inner = swap(Rh(-xi), N)
        rhs = np.linalg.inv(C) @ np.linalg.inv(inner) @ C
        lhs = Rh(xi + P.tau + 1)
        res = rel_residual(lhs, rhs)
        note = None
        if res >= policy.tol and rel_residual(Rh(xi + P.tau - 1), rhs) < policy.tol:
            note = "passes only on the -z p^1/2 = exp(i pi (xi + tau - 1)) branch"
        return res, _cond(inner), note
    if pid in ("INV_TRANSPOSE", "INV_TRANSPOSE_HAT"):
        F = R if pid == "INV_TRANSPOSE" else Rh
        A = partial_transpose2(F(xi), N)
        B = F(xi + N * P.zeta)
        return rel_residual(np.linalg.inv(A), partial_transpose2(np.linalg.inv(B), N)), max(_cond(A), _cond(B)), None
    if pid == "YBE":
        A = embed3(R(xi), N, "12")
        B = embed3(R(eta), N, "13")
        C = embed3(R(eta - xi), N, "23")
        return rel_residual(A @ B @ C, C @ B @ A), None, None
    if pid in ("S_IDENTITY_1", "S_IDENTITY_2"):
        z, t = P.zeta, P.tau
        S = lambda a, b, x: S_closed(a, b, x, z, t, N, policy)  # noqa: E731
        lhs = np.zeros((N, N), dtype=complex)
        for i in range(N):
            for j in range(N):
                if pid == "S_IDENTITY_1":
                    lhs[i, j] = sum(S(-i - k, i - k, xi) * S(-j - k, k - j, -xi) for k in range(N))
                else:
                    lhs[i, j] = sum(S(i - k, 0, xi) * S(j - k, 0, -xi - N * z) for k in range(N))
        th0 = _theta11(z, t, policy) ** 2
        if pid == "S_IDENTITY_1":
            val = _theta11(xi + z, t, policy) * _theta11(-xi + z, t, policy) / th0
        else:
            val = _theta11(xi, t, policy) * _theta11(-xi - N * z, t, policy) / th0
        return rel_residual(lhs, val * np.eye(N)), None, None
    if pid == "S_ROUTES":
        a = build_S(xi, P.zeta, P.tau, N, policy)
        b = build_S_closed(xi, P.zeta, P.tau, N, policy)
        return rel_residual(a, b), None, None
    if pid == "S_FOURIER":
        S = build_S(xi, P.zeta, P.tau, N, policy)
        worst = 0.0
        scale = max(1.0, float(np.abs(S).max()))
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    v = S_entry_from_weights(a, b, c, xi, P.zeta, P.tau, N, policy)
                    worst = max(worst, abs(v - component(S, N, (a, c + b), (c, a + b))) / scale)
        # everything outside the (a, c+b; c, a+b) pattern must vanish
        mask = np.ones_like(S, dtype=bool)
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    mask[(c % N) * N + (a + b) % N, a * N + (c + b) % N] = False
        worst = max(worst, float(np.abs(S[mask]).max(initial=0.0)) / scale)
        return worst, None, None
    if pid == "RTILDE_ENTRIES":
        Rt = build_Rtilde(params=P, policy=policy, xi=xi)
        worst = 0.0
        for a in range(N):
            for b in range(N):
                v = Rtilde_entry_closed(a, b, params=P, policy=policy, xi=xi)
                ref = component(Rt, N, (0, a + b), (a, b))
                worst = max(worst, abs(v - ref) / max(1.0, abs(ref)))
        return worst, None, None
    if pid == "GLUING":
        lhs = gluing_lhs(xi, P.tau, N, policy)
        rhs = gluing_constant(P.tau, N, policy) * _theta11(xi, P.tau, policy)
        return abs(lhs - rhs) / max(1.0, abs(rhs)), None, None
    if pid == "S_SHIFTS":
        z, t = P.zeta, P.tau
        worst = 0.0
        for lam in (1, -1, 2):
            for a in range(N):
                for b in range(N):
                    l1 = S_closed(a, b, xi, z + lam * t, t, N, policy)
                    r1 = cmath.exp(-2j * PI * lam * xi / N) * S_closed(a - lam, b, xi, z, t, N, policy)
                    l2 = S_closed(a, b, xi + lam * t, z, t, N, policy)
                    r2 = cmath.exp(-1j * PI * lam**2 * t - 2j * PI * lam * (xi + z / N + 0.5)) * S_closed(a, b + lam, xi, z, t, N, policy)
                    worst = max(worst, abs(l1 - r1) / max(1.0, abs(r1)), abs(l2 - r2) / max(1.0, abs(r2)))
        return worst, None, None
    raise ValueError(f"unknown property id {pid!r}")


def verify_property(property_id: str, params: AlgebraParams, sample_points,
                    policy: TruncationPolicy = DEFAULT_POLICY, tol: float | None = None) -> CheckResult:
    """Evaluate one identity over sample points given as (xi, eta) additive pairs.

    Points where a theta denominator or a pole is hit are counted as skipped.
    """
    tol = policy.tol if tol is None else tol
    out = CheckResult(f"{property_id}[N={params.N}]", tol,
                      params={"N": params.N, "q": _c(params.q), "p": _c(params.p)})
    for pt in sample_points:
        xi, eta = (pt, pt * 0.5 + 0.1) if not isinstance(pt, tuple) else pt
        try:
            res, cond, note = _residual_at(property_id, complex(xi), complex(eta), params, policy)
        except (PoleHit, SamplePointDegenerate, np.linalg.LinAlgError) as exc:
            out.skip(type(exc).__name__)
            continue
        if not math.isfinite(res):
            out.skip("non-finite residual")
            continue
        out.add(res, cond)
        if note and note not in out.notes:
            out.notes.append(note)
    return out


def _c(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]
