"""Scalar structure functions: T(x), M(x), f(x), F(M, x), Y(x), f_h(x), f_quantum(x).

x = w/z throughout, with additive form chi (x = exp(i pi chi)).  Functions
that only depend on x^2 take x directly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolated, PoleHit, SurfaceViolated
from .rmatrix import AlgebraParams, build_R, partial_transpose2, swap, tau_N
from .series import PoleSeries, ProductSpec
from .theta import DEFAULT_POLICY, IPI, PI, TruncationPolicy, theta_std, xi_of


def _chi(x, chi) -> complex:
    return complex(chi) if chi is not None else xi_of(x)


def _lnq(params) -> complex:
    return IPI * params.zeta


def _thetaQ(u, params, policy):
    """Theta_{q^{2N}}(u)."""
    Q = cmath.exp(2j * PI * params.N * params.zeta)
    return theta_std(u, Q, policy)


# T(x) and M(x)

def bigT(x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
         *, chi=None, method: str = "product") -> complex:
    chi = _chi(x, chi)
    z, c = params.zeta, params.c
    t = lambda lam: tau_N(params=params, policy=policy, xi=lam, method=method)  # noqa: E731
    return t(z / 2 - chi) * t((0.5 - c) * z + chi) / (t(z / 2 + chi) * t((0.5 - c) * z - chi))


def _U(u, P, policy) -> complex:
    """u d/du ln Theta_P(u), term by term."""
    out = 0j
    n = 0
    t1 = u
    t2 = P / u
    eps = policy.eps_trunc
    while abs(t1) >= eps or abs(t2) >= eps:
        out += -t1 / (1 - t1) + t2 / (1 - t2)
        t1 *= P
        t2 *= P
        n += 1
        if n > policy.max_terms:
            break
    return out


def log_derivative_tau(lam, params: AlgebraParams, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """y d/dy ln tau_N(y) at y = exp(i pi lam)."""
    N, zeta = params.N, params.zeta
    q = cmath.exp(IPI * zeta)
    P = cmath.exp(2j * PI * N * zeta)
    y2 = cmath.exp(2j * PI * lam)
    return (2 / N - 2) + 2 * _U(q * y2, P, policy) + 2 * _U(q / y2, P, policy)


def dlnT_dc_analytic(x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
                     *, chi=None) -> complex:
    chi = _chi(x, chi)
    s = (0.5 - params.c) * params.zeta
    D = lambda lam: log_derivative_tau(lam, params, policy)  # noqa: E731
    return -_lnq(params) * (D(s + chi) - D(s - chi))


def dlnT_dc(x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
            *, chi=None, step: float | None = None, richardson: bool = True) -> complex:
    """Central difference of ln T in c, optionally with one Richardson step."""
    chi = _chi(x, chi)
    c = params.c
    h = step if step is not None else 1e-4 * max(1.0, abs(c))

    def central(hh):
        up = bigT(params=params.with_c(c + hh), policy=policy, chi=chi)
        dn = bigT(params=params.with_c(c - hh), policy=policy, chi=chi)
        return cmath.log(up / dn) / (2 * hh)

    d1 = central(h)
    if not richardson:
        return d1
    return (4 * central(h / 2) - d1) / 3


def bigM_matrix(x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
                *, chi=None) -> np.ndarray:
    """((R21(x) R21(q^{c+N} x)^-1 R12(1/x)^-1)^t2 R12(q^c/x)^t2)^t2."""
    chi = _chi(x, chi)
    N, z, c = params.N, params.zeta, params.c
    R = lambda lam: build_R(params=params, policy=policy, xi=lam)  # noqa: E731
    inner = swap(R(chi), N) @ np.linalg.inv(swap(R(chi + (c + N) * z), N)) @ np.linalg.inv(R(-chi))
    t2 = lambda A: partial_transpose2(A, N)  # noqa: E731
    return t2(t2(inner) @ t2(R(-chi + c * z)))


def dM_dc(x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
          *, chi=None, step: float | None = None, richardson: bool = True) -> np.ndarray:
    chi = _chi(x, chi)
    c = params.c
    h = step if step is not None else 1e-4 * max(1.0, abs(c))

    def central(hh):
        return (bigM_matrix(params=params.with_c(c + hh), policy=policy, chi=chi)
                - bigM_matrix(params=params.with_c(c - hh), policy=policy, chi=chi)) / (2 * hh)

    d1 = central(h)
    if not richardson:
        return d1
    return (4 * central(h / 2) - d1) / 3


# pole-series shapes shared by f and f_h

def _ell_count(q_mod: float, N: int, Xmax: float, eps: float) -> int:
    # need |X| |q|^{2N l - 2} < eps for every dropped l
    if Xmax <= 0:
        return 1
    L = (math.log(eps) - math.log(Xmax) + 2 * math.log(q_mod)) / (2 * N * math.log(q_mod))
    return max(2, int(math.ceil(L)) + 1)


def _triplets(q2N_powers, q2, weight):
    w, a = [], []
    for b in q2N_powers:
        w += [2 * weight, -weight, -weight]
        a += [b, b * q2, b / q2]
    return w, a


def critical_xpart(N: int, zeta: complex, L: int):
    """Weights/positions of the x-part of f before antisymmetrization."""
    q2 = cmath.exp(2j * PI * zeta)
    powers = [cmath.exp(2j * PI * N * zeta * l) for l in range(L)]
    w, a = _triplets(powers, q2, 1.0)
    w += [-1.0, 0.5, 0.5]
    a += [1.0, q2, 1 / q2]
    return w, a


def h_odd_coefficients(N: int, M: int) -> tuple[int, int]:
    E = math.floor
    A = E(N * M / 2) * (E(N * M / 2) + 1)
    B = E((N * M + 1) / 2) ** 2
    return A, B


def h_odd_xpart(N: int, zeta: complex, M: int, L: int):
    A, B = h_odd_coefficients(N, M)
    q2 = cmath.exp(2j * PI * zeta)
    powers = [cmath.exp(2j * PI * N * zeta * l) for l in range(L)]
    half = [cmath.exp(2j * PI * N * zeta * (l + 0.5)) for l in range(L)]
    w1, a1 = _triplets(powers, q2, A)
    w2, a2 = _triplets(half, q2, B)
    w0, a0 = _triplets([1.0], q2, -0.5 * A)
    return w1 + w2 + w0, a1 + a2 + a0


def critical_pole_series(N: int, q, L: int | None = None, policy: TruncationPolicy = DEFAULT_POLICY,
                         Xmax: float = 1.0) -> PoleSeries:
    zeta = xi_of(q)
    L = L or _ell_count(abs(q), N, max(Xmax, 1 / Xmax), policy.eps_trunc)
    w, a = critical_xpart(N, zeta, L)
    return PoleSeries.antisymmetrized(w, a, -2 * IPI * zeta)


def h_odd_pole_series(N: int, q, M: int, L: int | None = None, policy: TruncationPolicy = DEFAULT_POLICY,
                      Xmax: float = 1.0) -> PoleSeries:
    """Normalized h-odd structure function: f_h/(-N h)."""
    zeta = xi_of(q)
    L = L or _ell_count(abs(q), N, max(Xmax, 1 / Xmax), policy.eps_trunc)
    w, a = h_odd_xpart(N, zeta, M, L)
    return PoleSeries.antisymmetrized(w, a, -2 * IPI * zeta)


def f_classical(x, N: int, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Poisson structure function at c = -N, partial sums over l."""
    X = complex(x) ** 2
    return critical_pole_series(N, q, policy=policy, Xmax=abs(X))(x)


def f_classical_logderiv(x=None, N: int = None, q=None, policy: TruncationPolicy = DEFAULT_POLICY,
                         *, chi=None) -> complex:
    """-ln q (D(q^1/2 x) - D(q^1/2 / x)) with D = y d/dy ln tau_N."""
    chi = _chi(x, chi)
    P = AlgebraParams(N, q, 0.5)  # p is irrelevant for tau_N
    z = P.zeta
    return -_lnq(P) * (log_derivative_tau(z / 2 + chi, P, policy) - log_derivative_tau(z / 2 - chi, P, policy))


def sum_rule(x, N: int, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """sum_{u=1}^{N} f(q^u x)."""
    return sum(f_classical(complex(q) ** u * complex(x), N, q, policy) for u in range(1, N + 1))


# F(x), F(M, x), Y(x)

def bigF_single(x=None, N: int = None, q=None, policy: TruncationPolicy = DEFAULT_POLICY,
                *, X=None, chi=None, method: str = "theta") -> complex:
    if method == "tau":
        chi = _chi(x, chi)
        P = AlgebraParams(N, q, 0.5)
        t = lambda lam: tau_N(params=P, policy=policy, xi=lam)  # noqa: E731
        return 1 / (t(P.zeta / 2 + chi) * t(P.zeta / 2 - chi))
    P = AlgebraParams(N, q, 0.5)
    return _F_of_X(complex(X) if X is not None else complex(x) ** 2, P, policy)


def _F_of_X(X, params, policy):
    q2 = cmath.exp(2j * PI * params.zeta)
    num = _thetaQ(X, params, policy) * _thetaQ(1 / X, params, policy)
    den = _thetaQ(q2 * X, params, policy) * _thetaQ(q2 / X, params, policy)
    if abs(den) < 1e-300:
        raise PoleHit("F has a pole here", location=X)
    return cmath.exp(IPI * params.zeta * (2 - 2 / params.N)) * num / den


def bigF_M(M: int, x=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
           *, X=None, method: str = "closed") -> complex:
    """F(M, x); 'closed' is the finite theta product, 'iterated' the product of F."""
    if M == 0:
        raise ValueError("M must be nonzero")
    X = complex(X) if X is not None else complex(x) ** 2
    N, p = params.N, params.p
    if method == "iterated":
        out = 1 + 0j
        if M > 0:
            for k in range(N * M):
                out *= _F_of_X(X * p**k, params, policy)
        else:
            for k in range(1, N * abs(M) + 1):
                out /= _F_of_X(X * p ** (-k), params, policy)
        return out
    q2 = cmath.exp(2j * PI * params.zeta)
    th = lambda u: _thetaQ(u, params, policy)  # noqa: E731
    if M > 0:
        out = cmath.exp(IPI * params.zeta * 2 * M * (N - 1))
        for k in range(N * M):
            out *= th(p ** (-k) / X) * th(X * p**k) / (th(q2 * p ** (-k) / X) * th(X * q2 * p**k))
    else:
        out = cmath.exp(-IPI * params.zeta * 2 * abs(M) * (N - 1))
        for k in range(1, N * abs(M) + 1):
            out *= th(q2 * p**k / X) * th(X * q2 * p ** (-k)) / (th(p**k / X) * th(X * p ** (-k)))
    return out


@dataclass(frozen=True)
class SurfaceSigma:
    """Point on (-p^1/2)^{NM} = q^{-c-N}; c is derived, never supplied."""

    N: int
    M_int: int
    params: AlgebraParams
    residual: float

    @classmethod
    def build(cls, N: int, M: int, q, p, tol: float = 1e-9) -> "SurfaceSigma":
        if M == 0:
            raise ValueError("M must be nonzero")
        q, p = complex(q), complex(p)
        minus_root = -cmath.sqrt(p)
        c = -N - N * M * cmath.log(minus_root) / cmath.log(q)
        params = AlgebraParams(N, q, p, c)
        lhs = minus_root ** (N * M)
        rhs = cmath.exp((-c - N) * cmath.log(q))
        res = abs(lhs - rhs) / max(1.0, abs(rhs))
        if not res < tol:
            raise SurfaceViolated(f"constraint residual {res:.3e}")
        return cls(N, M, params, res)

    @property
    def S(self) -> int:
        return self.N * self.M_int if self.M_int > 0 else self.N * abs(self.M_int) - 1


def bigY(x=None, surface: SurfaceSigma = None, policy: TruncationPolicy = DEFAULT_POLICY,
         *, X=None, method: str = "product") -> complex:
    """Exchange function of t(z); 'product' is the finite theta product, 'ratio' uses F."""
    X = complex(X) if X is not None else complex(x) ** 2
    P = surface.params
    M = surface.M_int
    if method == "ratio":
        qc2 = cmath.exp(2 * P.c * IPI * P.zeta)
        return bigF_M(M, params=P, policy=policy, X=qc2 * X) / bigF_M(M, params=P, policy=policy, X=P.p * X)
    q2 = cmath.exp(2j * PI * P.zeta)
    p = P.p
    th = lambda u: _thetaQ(u, P, policy)  # noqa: E731
    out = 1 + 0j
    for k in range(1, surface.S + 1):
        pk, pmk = p**k, p ** (-k)
        out *= (th(X * pmk) ** 2 * th(X * q2 * pk) * th(X / q2 * pk)) / (
            th(X * pk) ** 2 * th(X * q2 * pmk) * th(X / q2 * pmk))
    return out


# classical limits

@dataclass(frozen=True)
class ClassicalLimitSpec:
    """q^{N h} = p^{1 - beta}."""

    N: int
    h: int
    M_int: int
    q: complex
    beta: float

    def __post_init__(self):
        if self.h == 0:
            raise ValueError("h must be nonzero")
        if not 0 < self.beta <= 0.1:
            raise ValueError("beta must lie in (0, 0.1]")

    def surface(self, tol: float = 1e-9) -> SurfaceSigma:
        zeta = xi_of(self.q)
        tau = self.N * self.h * zeta / (2 * (1 - self.beta))
        return SurfaceSigma.build(self.N, self.M_int, self.q, cmath.exp(2j * PI * tau), tol)


def f_h_prefactor(N: int, M: int, h: int, zeta) -> complex:
    lnq = IPI * zeta
    if h % 2:
        return 2 * N * h * lnq
    return N * N * M * (N * M + 1) * h * lnq


def f_h_normalization(N: int, M: int, h: int) -> float:
    """Constant k with f_h = k * (normalized function built on -2 ln q)."""
    return -N * h if h % 2 else -0.5 * N * N * M * (N * M + 1) * h


def f_h(x, h: int, M: int, N: int, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Classical-limit structure function, odd and even h."""
    if h == 0:
        raise ValueError("h must be nonzero")
    X = complex(x) ** 2
    k = f_h_normalization(N, M, h)
    if h % 2:
        return k * h_odd_pole_series(N, q, M, policy=policy, Xmax=abs(X))(x)
    return k * critical_pole_series(N, q, policy=policy, Xmax=abs(X))(x)


def f_h_limit(x, h: int, M: int, N: int, q, betas=(2e-3, 1e-3, 5e-4, 2.5e-4),
              policy: TruncationPolicy = DEFAULT_POLICY, extrapolate: bool = True) -> complex:
    """(Y - 1)/beta at the given betas, extrapolated to beta = 0 by Neville's scheme.

    The higher-order terms in beta grow as |x| approaches 1, where the
    extrapolation is correspondingly less accurate.
    """
    vals = [(bigY(x, ClassicalLimitSpec(N, h, M, q, b).surface(), policy) - 1) / b for b in betas]
    if not extrapolate:
        return vals[-1]
    P, bs = list(vals), list(betas)
    for m in range(1, len(P)):
        for k in range(len(P) - 1, m - 1, -1):
            P[k] = (bs[k - m] * P[k] - bs[k] * P[k - 1]) / (bs[k - m] - bs[k])
    return P[-1]


# quantum exchange function

def hypothesis_holds(surface: SurfaceSigma) -> bool:
    P = surface.params
    return abs(P.p) < 1 and abs(P.q) < 1 and abs(P.p) ** (surface.S + 1) > abs(P.q) ** 2


def f_quantum_spec(surface: SurfaceSigma, policy: TruncationPolicy = DEFAULT_POLICY,
                   check_hypothesis: bool = True, Xmax: float = 1.0) -> ProductSpec:
    """Truncated product for f_{N,p,q,M} as factors (1 - b X)^e."""
    if check_hypothesis and not hypothesis_holds(surface):
        raise HypothesisViolated("need |p| < 1, |q| < 1 and |p|^{S+1} > |q|^2")
    P = surface.params
    N, p = P.N, P.p
    q = cmath.exp(IPI * P.zeta)
    Q = q ** (2 * N)
    q2 = q * q
    b, e = [], []
    for k in range(1, surface.S + 1):
        b.append(1.0)
        e.append(2)
        pk, pmk = p**k, p ** (-k)
        n = 0
        while True:
            Qn = Q**n
            nums = [pmk * Q * Qn, pk * q2 * Qn, pk * Q * Qn / q2]
            dens = [pk * Qn, pmk * Q * Qn / q2, pmk * q2 * Qn]
            if max(abs(t) for t in nums + dens) * Xmax < policy.eps_trunc and n > 0:
                break
            b += nums + dens
            e += [2, 1, 1, -2, -1, -1]
            n += 1
            if n > policy.max_terms:
                break
    return ProductSpec(b, e)


def f_quantum(x, surface: SurfaceSigma, policy: TruncationPolicy = DEFAULT_POLICY,
              check_hypothesis: bool = True) -> complex:
    X = complex(x) ** 2
    return f_quantum_spec(surface, policy, check_hypothesis, Xmax=max(1.0, abs(X))).evaluate_X(X)
