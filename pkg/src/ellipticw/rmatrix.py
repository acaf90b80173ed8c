"""Z_N elliptic R-matrix: S, R-tilde, gauge-transformed R, normalized R-hat.

Matrices on C^N (x) C^N are dense N^2 x N^2 numpy arrays in the usual
Kronecker layout: A[(i1, i2), (j1, j2)] with flat index i1*N + i2.  A
component A^{ab}_{cd} is stored as A[(c, d), (a, b)] (lower indices label
rows).  ``component`` and ``set_component`` hide that convention.

Every builder accepts either a multiplicative spectral parameter ``z`` or
its additive form ``xi`` (z = exp(i pi xi)).  Identity checks that shift z
by -1, by p^(1/2) or invert it go through ``xi`` so that the fractional
powers on both sides use the same branch.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NomeOutOfDomain, PoleHit, StarNomeOutOfDomain, ThetaZeroDenominator
from .theta import (
    DEFAULT_POLICY,
    IPI,
    PI,
    TruncationPolicy,
    check_nome,
    multi_pochhammer,
    pochhammer,
    tau_of,
    theta_char,
    theta_std,
    xi_of,
    zeta_of,
)

ZERO_TOL = 1e-13


@dataclass(frozen=True)
class AlgebraParams:
    """Parameter point (N, q, p, c).

    zeta and tau default to the principal logs of q and p; pass them
    explicitly (see ``from_additive``) to pin a different sheet.
    """

    N: int
    q: complex
    p: complex
    c: complex = 0j
    zeta: complex = field(default=None, compare=False)
    tau: complex = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "q", check_nome(self.q, "q"))
        object.__setattr__(self, "c", complex(self.c))
        if self.zeta is None:
            object.__setattr__(self, "zeta", zeta_of(self.q))
        if self.tau is None:
            object.__setattr__(self, "tau", tau_of(complex(self.p)))
        object.__setattr__(self, "p", complex(self.p))
        if self.p == 0:
            raise NomeOutOfDomain("p must be nonzero")

    @classmethod
    def from_additive(cls, N, zeta, tau, c=0j):
        zeta, tau = complex(zeta), complex(tau)
        return cls(N, cmath.exp(IPI * zeta), cmath.exp(2j * PI * tau), c, zeta=zeta, tau=tau)

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * PI / self.N)

    @property
    def tau_star(self) -> complex:
        # p* = p q^{-2c}
        return self.tau - self.c * self.zeta

    @property
    def p_star(self) -> complex:
        return cmath.exp(2j * PI * self.tau_star)

    def require_elliptic(self):
        check_nome(self.p, "p")
        return self

    def starred(self) -> "AlgebraParams":
        ps = self.p_star
        if not abs(ps) < 1:
            raise StarNomeOutOfDomain(f"|p*| = {abs(ps):.6g} >= 1")
        return AlgebraParams(self.N, self.q, ps, self.c, zeta=self.zeta, tau=self.tau_star)

    def with_c(self, c) -> "AlgebraParams":
        return AlgebraParams(self.N, self.q, self.p, c, zeta=self.zeta, tau=self.tau)


def _spectral(z, xi) -> complex:
    if xi is not None:
        return complex(xi)
    if z is None:
        raise TypeError("give either z or xi")
    return xi_of(z)


# tensor helpers

def component(A: np.ndarray, N: int, upper, lower) -> complex:
    """A^{upper}_{lower} with indices taken mod N."""
    (a, b), (c, d) = upper, lower
    return A[(c % N) * N + d % N, (a % N) * N + b % N]


def set_component(A: np.ndarray, N: int, upper, lower, value) -> None:
    (a, b), (c, d) = upper, lower
    A[(c % N) * N + d % N, (a % N) * N + b % N] = value


def partial_transpose2(A: np.ndarray, N: int) -> np.ndarray:
    """Transpose in the second tensor factor."""
    return A.reshape(N, N, N, N).transpose(0, 3, 2, 1).reshape(N * N, N * N)


@lru_cache(maxsize=None)
def _swap(N: int) -> np.ndarray:
    P = np.zeros((N * N, N * N))
    for i in range(N):
        for j in range(N):
            P[i * N + j, j * N + i] = 1.0
    return P


def swap(A: np.ndarray, N: int) -> np.ndarray:
    """A_12 -> A_21."""
    P = _swap(N)
    return P @ A @ P


def embed3(A: np.ndarray, N: int, slots: str) -> np.ndarray:
    """Place a two-site operator into sites '12', '13' or '23' of three."""
    B = A.reshape(N, N, N, N)
    one = np.eye(N)
    spec = {"12": "abcd,ef->abecdf", "13": "abcd,ef->aebcfd", "23": "abcd,ef->eabfcd"}[slots]
    return np.einsum(spec, B, one).reshape(N**3, N**3)


@dataclass(frozen=True)
class GaugeMatrices:
    N: int
    g: np.ndarray
    hshift: np.ndarray
    g_half: np.ndarray

    @classmethod
    def of(cls, N: int) -> "GaugeMatrices":
        return _gauge(N)

    def I(self, a1: int, a2: int) -> np.ndarray:
        return np.linalg.matrix_power(self.g, a2 % self.N) @ np.linalg.matrix_power(self.hshift, a1 % self.N)


@lru_cache(maxsize=None)
def _gauge(N: int) -> GaugeMatrices:
    j = np.arange(N)
    g = np.diag(np.exp(2j * PI * j / N))
    h = np.zeros((N, N), dtype=complex)
    h[j, (j + 1) % N] = 1
    g_half = np.diag(np.exp(1j * PI * j / N))
    for a in (g, h, g_half):
        a.setflags(write=False)
    return GaugeMatrices(N, g, h, g_half)


# weights and S

def _theta_denominator(value, label, scale=1.0):
    if abs(value) < ZERO_TOL * max(1.0, scale):
        raise ThetaZeroDenominator(f"theta denominator vanishes in {label}")
    return value


def weight_W(alpha, xi, zeta, tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    a1, a2 = alpha
    gam = (0.5 + (a1 % N) / N, 0.5 + (a2 % N) / N)
    num = theta_char(gam, xi + zeta / N, tau, policy)
    den = _theta_denominator(theta_char(gam, zeta / N, tau, policy), "W", abs(num))
    return num / (N * den)


def build_S(xi, zeta, tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """S as the weighted sum of I_alpha (x) I_alpha^{-1}."""
    gm = GaugeMatrices.of(N)
    S = np.zeros((N * N, N * N), dtype=complex)
    for a1 in range(N):
        for a2 in range(N):
            Ia = gm.I(a1, a2)
            S += weight_W((a1, a2), xi, zeta, tau, N, policy) * np.kron(Ia, np.linalg.inv(Ia))
    return S


def S_entry_from_weights(a: int, b: int, c: int, xi, zeta, tau, N: int,
                         policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """S^{a, c+b}_{c, a+b} as a discrete Fourier sum of the weights."""
    w = cmath.exp(2j * PI / N)
    return sum(weight_W((a - c, s), xi, zeta, tau, N, policy) * w ** (-b * s) for s in range(N))


def S_closed(a: int, b: int, xi, zeta, tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """S^{ab} = S^{0, a+b}_{a, b} from the product of N-tau thetas."""
    a, b = a % N, b % N
    Nt = N * tau
    num = theta_char(((b - a) / N + 0.5, 0.5), xi + zeta, Nt, policy)
    den = theta_char((-a / N + 0.5, 0.5), zeta, Nt, policy)
    pn = 1 + 0j
    for k in range(N):
        if k != b:
            pn *= theta_char((k / N + 0.5, 0.5), xi, Nt, policy)
    pd = 1 + 0j
    for k in range(1, N):
        pd *= theta_char((k / N + 0.5, 0.5), 0, Nt, policy)
    _theta_denominator(den * pd, "S^{ab}")
    return num * pn / (den * pd)


def build_S_closed(xi, zeta, tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Full S from the S^{ab} family and Z_N symmetry."""
    S = np.zeros((N * N, N * N), dtype=complex)
    for a in range(N):
        for b in range(N):
            v = S_closed(a, b, xi, zeta, tau, N, policy)
            for s in range(N):
                set_component(S, N, (s, a + b + s), (a + s, b + s), v)
    return S


# normalization and R-tilde

def kappa_inv(z2, params: AlgebraParams, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """1/kappa(z^2) from eight double-base products in (p, q^{2N})."""
    N, q, p = params.N, params.q, params.p
    z2 = complex(z2)
    Q = q ** (2 * N)
    bases = [p, Q]
    num_args = [Q / z2, q * q * z2, p / z2, p * q ** (2 * N - 2) * z2]
    den_args = [Q * z2, q * q / z2, p * z2, p * q ** (2 * N - 2) / z2]
    num = 1 + 0j
    den = 1 + 0j
    for u in num_args:
        num *= multi_pochhammer(u, bases, policy)
    for u in den_args:
        den *= multi_pochhammer(u, bases, policy)
    if abs(den) < ZERO_TOL * max(1.0, abs(num)):
        raise PoleHit("1/kappa has a pole at this z^2", location=z2)
    return num / den


def _rtilde_prefactor(xi, params: AlgebraParams, policy) -> complex:
    N, zeta, tau = params.N, params.zeta, params.tau
    z2 = cmath.exp(2j * PI * xi)
    top = theta_char((0.5, 0.5), zeta, tau, policy)
    bottom = theta_char((0.5, 0.5), xi + zeta, tau, policy)
    _theta_denominator(bottom, "R-tilde prefactor", abs(top))
    return cmath.exp(IPI * xi * (2 / N - 2)) * kappa_inv(z2, params, policy) * top / bottom


def build_Rtilde(z=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
                 *, xi=None) -> np.ndarray:
    xi = _spectral(z, xi)
    params.require_elliptic()
    S = build_S(xi, params.zeta, params.tau, params.N, policy)
    return _rtilde_prefactor(xi, params, policy) * S


def gluing_lhs(xi, tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    out = 1 + 0j
    for k in range(N):
        out *= theta_char((k / N + 0.5, 0.5), xi, N * tau, policy)
    return out


def gluing_constant(tau, N: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """C with prod_k theta[k/N+1/2, 1/2](xi, N tau) = C theta[1/2, 1/2](xi, tau).

    C = p^{(N^2-1)/24} (p^N;p^N)^N / prod_{k<N} (p^{N-k};p^N).  The
    denominator product telescopes to (p;p).
    """
    p = cmath.exp(2j * PI * tau)
    pN = cmath.exp(2j * PI * N * tau)
    den = 1 + 0j
    for k in range(N):
        den *= pochhammer(cmath.exp(2j * PI * (N - k) * tau), pN, policy)
    return cmath.exp(2j * PI * tau * (N * N - 1) / 24) * pochhammer(pN, pN, policy) ** N / den


def Rtilde_entry_closed(a: int, b: int, z=None, params: AlgebraParams = None,
                        policy: TruncationPolicy = DEFAULT_POLICY, *, xi=None) -> complex:
    """R-tilde^{ab} = R-tilde^{0,a+b}_{a,b} in terms of Theta_p and Theta_{p^N}.

    The ratio Theta_{p^N}(p^N)/Theta_p(p) is 0/0 as written; it is replaced
    by its limit (p^N;p^N)^3/(p;p)^3.
    """
    xi = _spectral(z, xi)
    N, zeta, tau = params.N, params.zeta, params.tau
    a, b = a % N, b % N
    p, q = params.p, params.q
    pN = p**N
    z2 = cmath.exp(2j * PI * xi)
    q2 = cmath.exp(2j * PI * zeta)
    pref = cmath.exp(2j * PI * tau * (-a * b / N) + IPI * zeta * 2 * b / N + IPI * xi * (-2 / N) * (N + a - 1))
    ratio = (pochhammer(pN, pN, policy) / pochhammer(p, p, policy)) ** 3
    num = theta_std(p ** (N + b - a) * q2 * z2, pN, policy) * theta_std(p * q2, p, policy) * theta_std(p * z2, p, policy)
    den = theta_std(p ** (N + b) * z2, pN, policy) * theta_std(p ** (N - a) * q2, pN, policy) * theta_std(p * q2 * z2, p, policy)
    if abs(den) < ZERO_TOL * max(1.0, abs(num)):
        raise ThetaZeroDenominator("theta denominator vanishes in R-tilde^{ab}")
    return kappa_inv(z2, params, policy) * pref * ratio * num / den


def gauge_transform(Rt: np.ndarray, gm: GaugeMatrices, inverse: bool = False) -> np.ndarray:
    """(g^1/2 (x) g^1/2) Rt (g^-1/2 (x) g^-1/2); diagonal, so done entrywise."""
    d = np.kron(np.diag(gm.g_half), np.diag(gm.g_half))
    if inverse:
        d = 1 / d
    return (d[:, None] * Rt) / d[None, :]


def build_R(z=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
            *, xi=None) -> np.ndarray:
    xi = _spectral(z, xi)
    return gauge_transform(build_Rtilde(params=params, policy=policy, xi=xi), GaugeMatrices.of(params.N))


def tau_N(z=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
          *, xi=None, method: str = "product") -> complex:
    """z^{2/N-2} Theta_{q^2N}(q z^2)/Theta_{q^2N}(q z^-2); only N and q are used."""
    xi = _spectral(z, xi)
    N, zeta = params.N, params.zeta
    Q = cmath.exp(2j * PI * N * zeta)
    q = cmath.exp(IPI * zeta)
    z2 = cmath.exp(2j * PI * xi)
    num = theta_std(q * z2, Q, policy, method)
    den = theta_std(q / z2, Q, policy, method)
    if abs(den) < ZERO_TOL * max(1.0, abs(num)):
        raise PoleHit("tau_N has a pole here", location=cmath.exp(IPI * xi))
    return cmath.exp(IPI * xi * (2 / N - 2)) * num / den


def build_Rhat(z=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
               *, xi=None) -> np.ndarray:
    xi = _spectral(z, xi)
    return tau_N(params=params, policy=policy, xi=params.zeta / 2 - xi) * build_R(params=params, policy=policy, xi=xi)


def build_Rhat_star(z=None, params: AlgebraParams = None, policy: TruncationPolicy = DEFAULT_POLICY,
                    *, xi=None) -> np.ndarray:
    xi = _spectral(z, xi)
    return build_Rhat(params=params.starred(), policy=policy, xi=xi)
