"""Theta functions, infinite products and q-numbers.

Spectral variables are carried in additive form wherever a branch matters:
z = exp(i*pi*xi), q = exp(i*pi*zeta), p = exp(2i*pi*tau).  Helpers at the
bottom of this module convert with the principal logarithm.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DegenerateQ,
    NomeOutOfDomain,
    NonconvergentTau,
    TruncationBudgetExceeded,
)

PI = math.pi
IPI = 1j * math.pi


@dataclass(frozen=True)
class TruncationPolicy:
    eps_trunc: float = 1e-16
    max_terms: int = 1_000_000
    series_rmax: int = 12
    tol: float = 1e-9  # default pass threshold for identity residuals

    def __post_init__(self):
        if not 0 < self.eps_trunc < 1:
            raise ValueError("eps_trunc must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.series_rmax < 1:
            raise ValueError("series_rmax must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


def check_nome(value, name="nome") -> complex:
    value = complex(value)
    if value == 0 or not abs(value) < 1:
        raise NomeOutOfDomain(f"{name}={value!r} must satisfy 0 < |{name}| < 1")
    return value


@dataclass(frozen=True)
class ThetaChar:
    """Rational characteristic (gamma1, gamma2) with denominators dividing N."""

    gamma1: Fraction
    gamma2: Fraction

    @classmethod
    def of(cls, gamma1, gamma2, N: int | None = None) -> "ThetaChar":
        g1, g2 = Fraction(gamma1).limit_denominator(10**6), Fraction(gamma2).limit_denominator(10**6)
        if N is not None:
            for g in (g1, g2):
                if N % g.denominator:
                    raise ValueError(f"denominator of {g} does not divide N={N}")
        return cls(g1, g2)

    def shifted(self, lam1, lam2) -> "ThetaChar":
        return ThetaChar(self.gamma1 + Fraction(lam1), self.gamma2 + Fraction(lam2))

    def as_floats(self) -> tuple[float, float]:
        return float(self.gamma1), float(self.gamma2)


def _gamma_pair(gamma) -> tuple[float, float]:
    if isinstance(gamma, ThetaChar):
        return gamma.as_floats()
    g1, g2 = gamma
    return float(g1), float(g2)


def qnum(r: int, q: complex) -> complex:
    """[r]_q = (q^r - q^-r)/(q - 1/q)."""
    q = complex(q)
    if q == 0 or q == 1 or q == -1:
        raise DegenerateQ(f"q-number undefined at q={q}")
    if r == 0:
        return 0j
    return (q**r - q ** (-r)) / (q - 1 / q)


def pochhammer(z: complex, base: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """(z; base)_inf for a single base."""
    return multi_pochhammer(z, [base], policy)


def _compositions(total: int, parts: int):
    # multi-indices of fixed total degree, lexicographic order
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        idx = []
        for b in bars:
            idx.append(b - prev - 1)
            prev = b
        idx.append(total + parts - 2 - prev)
        yield tuple(idx)


def multi_pochhammer(z: complex, bases, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """prod over n_i >= 0 of (1 - z p_1^n_1 ... p_m^n_m), graded enumeration.

    A factor is dropped once |z| prod |p_i|^n_i < eps_trunc.  Because every
    base has modulus below one, the largest monomial of degree d+1 is smaller
    than the largest of degree d, so the enumeration stops at the first degree
    whose monomials are all below the cutoff.
    """
    z = complex(z)
    bases = [check_nome(b, "base") for b in bases]
    if z == 0:
        return 1 + 0j
    eps = policy.eps_trunc
    if len(bases) == 1:
        b = bases[0]
        prod = 1 + 0j
        t = z
        n = 0
        while abs(t) >= eps:
            prod *= 1 - t
            t *= b
            n += 1
            if n > policy.max_terms:
                raise TruncationBudgetExceeded(f"more than {policy.max_terms} factors")
        return prod
    mods = [abs(b) for b in bases]
    az = abs(z)
    prod = 1 + 0j
    count = 0
    degree = 0
    while True:
        any_kept = False
        for idx in _compositions(degree, len(bases)):
            mono = az
            for m, n in zip(mods, idx):
                mono *= m**n
            if mono < eps:
                continue
            any_kept = True
            term = z
            for b, n in zip(bases, idx):
                term *= b**n
            prod *= 1 - term
            count += 1
            if count > policy.max_terms:
                raise TruncationBudgetExceeded(f"more than {policy.max_terms} factors")
        if not any_kept:
            return prod
        degree += 1


def theta_std(z: complex, p: complex, policy: TruncationPolicy = DEFAULT_POLICY,
              method: str = "product") -> complex:
    """Theta_p(z) = (z;p)(p/z;p)(p;p)."""
    z = complex(z)
    p = check_nome(p, "p")
    if z == 0:
        raise ValueError("theta_std needs z != 0")
    if method == "product":
        return pochhammer(z, p, policy) * pochhammer(p / z, p, policy) * pochhammer(p, p, policy)
    if method == "sum":
        # Theta_p(w) = theta[0, 1/2](xi', tau') with exp(2i pi xi') = w p^{-1/2}
        tau = tau_of(p)
        xi = cmath.log(z) / (2j * PI) - tau / 2
        return theta_char((0.0, 0.5), xi, tau, policy)
    raise ValueError(f"unknown method {method!r}")


def theta_char(gamma, xi: complex, tau: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Lattice sum for theta[gamma1, gamma2](xi, tau).

    Summation starts at the dominant index and walks outwards; each side
    stops once its terms fall below eps_trunc times the largest term seen.
    """
    g1, g2 = _gamma_pair(gamma)
    tau = complex(tau)
    xi = complex(xi)
    if tau.imag <= 0:
        raise NonconvergentTau(f"Im tau must be positive, got tau={tau}")
    center = -g1 - xi.imag / tau.imag
    m0 = int(round(center))

    def log_term(m):
        a = m + g1
        return IPI * a * a * tau + 2j * PI * a * (xi + g2)

    first = log_term(m0)
    biggest = first.real
    logs = [first]
    for direction in (1, -1):
        m = m0 + direction
        n = 0
        while True:
            lt = log_term(m)
            logs.append(lt)
            biggest = max(biggest, lt.real)
            # past the Gaussian peak the terms only shrink
            if (m - center) * direction > 0 and lt.real - biggest < math.log(policy.eps_trunc) - 2:
                break
            m += direction
            n += 1
            if n > policy.max_terms:
                raise TruncationBudgetExceeded("theta lattice sum did not converge")
    # shift by the largest exponent before summing to avoid overflow
    return _stable_sum(logs, biggest)


def _stable_sum(logs, shift) -> complex:
    re = []
    im = []
    for lt in logs:
        v = cmath.exp(lt - shift)
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im)) * math.exp(shift)


def theta_char_product(gamma, xi: complex, tau: complex,
                       policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """theta[gamma](xi, tau) through the Theta_p product representation."""
    g1, g2 = _gamma_pair(gamma)
    tau = complex(tau)
    xi = complex(xi)
    if tau.imag <= 0:
        raise NonconvergentTau(f"Im tau must be positive, got tau={tau}")
    p = cmath.exp(2j * PI * tau)
    pref = cmath.exp(IPI * g1 * g1 * tau + 2j * PI * g1 * (xi + g2))
    u = -cmath.exp(2j * PI * g2 + 2j * PI * tau * (g1 + 0.5) + 2j * PI * xi)
    return pref * theta_std(u, p, policy)


# additive coordinates

def xi_of(z: complex) -> complex:
    """xi with z = exp(i pi xi), principal branch."""
    z = complex(z)
    if z == 0:
        raise ValueError("spectral parameter must be nonzero")
    return cmath.log(z) / IPI


def zeta_of(q: complex) -> complex:
    return xi_of(q)


def tau_of(p: complex) -> complex:
    p = complex(p)
    if p == 0:
        raise ValueError("nome must be nonzero")
    return cmath.log(p) / (2j * PI)


def e_ipi(x: complex) -> complex:
    return cmath.exp(IPI * x)
