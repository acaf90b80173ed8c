"""Series machinery in the variable X = x^2.

PoleSeries   const + sum_k w_k a_k X / (1 - a_k X), i.e. simple poles only;
             this is the shape of every classical structure function.
ProductSpec  const * prod_k (1 - b_k X)^{e_k}, integer exponents; used for the
             quantum function and for rational test functions.
LaurentTable coefficients of x^{2r} valid on a labeled annulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonconvergentSeries, PoleHit, PoleOrderMisclassified

MERGE_RTOL = 1e-9


@dataclass(frozen=True)
class LaurentTable:
    """Map r -> coefficient of x^{2r}; ``annulus`` is in |x|."""

    coeffs: dict
    sector: int = 0
    annulus: tuple = (0.0, math.inf)

    def __getitem__(self, r):
        return self.coeffs.get(r, 0j)

    @property
    def rmax(self) -> int:
        return max(abs(r) for r in self.coeffs) if self.coeffs else 0

    def evaluate(self, x) -> complex:
        X = complex(x) ** 2
        return complex(sum(c * X**r for r, c in self.coeffs.items()))

    def max_abs_diff(self, other: "LaurentTable", relative: bool = True) -> float:
        worst = 0.0
        for r in set(self.coeffs) | set(other.coeffs):
            a, b = self[r], other[r]
            scale = max(1.0, abs(b)) if relative else 1.0
            worst = max(worst, abs(a - b) / scale)
        return worst


# simple-pole series

@dataclass
class PoleSeries:
    const: complex = 0j
    w: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    a: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=complex)
        self.a = np.asarray(self.a, dtype=complex)

    @classmethod
    def antisymmetrized(cls, weights, positions, prefactor=1.0) -> "PoleSeries":
        """pref * (g(X) - g(1/X)) with g(X) = sum w a X/(1 - a X).

        Each inverse term -w (a/X)/(1 - a/X) equals w + w (X/a)/(1 - X/a).
        """
        w = np.asarray(weights, dtype=complex) * prefactor
        a = np.asarray(positions, dtype=complex)
        return cls(complex(w.sum()), np.concatenate([w, w]), np.concatenate([a, 1 / a]))

    def __add__(self, other: "PoleSeries") -> "PoleSeries":
        return PoleSeries(self.const + other.const, np.concatenate([self.w, other.w]),
                          np.concatenate([self.a, other.a]))

    def scaled(self, factor) -> "PoleSeries":
        return PoleSeries(self.const * factor, self.w * factor, self.a.copy())

    def rescaled_argument(self, s) -> "PoleSeries":
        """The series of X -> F(s X)."""
        return PoleSeries(self.const, self.w.copy(), self.a * s)

    def evaluate_X(self, X) -> complex:
        X = complex(X)
        t = self.a * X
        if np.any(np.abs(1 - t) < 1e-14):
            raise PoleHit("evaluation on a pole", location=X)
        return complex(self.const + np.sum(self.w * t / (1 - t)))

    def __call__(self, x) -> complex:
        return self.evaluate_X(complex(x) ** 2)

    def poles_X(self) -> np.ndarray:
        return 1 / self.a

    def laurent(self, radius: float, rmax: int) -> dict:
        """Coefficients of X^s, |s| <= rmax, valid on |x| = radius."""
        rho2 = radius * radius
        mod = np.abs(self.a) * rho2
        if np.any(np.abs(mod - 1) < 1e-12):
            raise NonconvergentSeries(f"a pole lies on |x| = {radius}")
        out = {s: 0j for s in range(-rmax, rmax + 1)}
        out[0] += self.const
        inner = mod < 1
        wi, ai = self.w[inner], self.a[inner]
        wo, ao = self.w[~inner], self.a[~inner]
        pw = ai.copy()
        for s in range(1, rmax + 1):
            out[s] += complex(np.sum(wi * pw))
            pw *= ai
        # outside: w a X/(1 - a X) = -sum_{s>=0} (a X)^{-s}
        inv = 1 / ao
        pw = np.ones_like(ao)
        for s in range(0, rmax + 1):
            out[-s] -= complex(np.sum(wo * pw))
            pw *= inv
        return out


# rational products

@dataclass
class ProductSpec:
    """const * prod (1 - b_k X)^{e_k}."""

    b: np.ndarray
    e: np.ndarray
    const: complex = 1 + 0j

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=complex)
        self.e = np.asarray(self.e, dtype=int)

    def evaluate_X(self, X) -> complex:
        X = complex(X)
        f = 1 - self.b * X
        if np.any((np.abs(f) < 1e-14) & (self.e < 0)):
            raise PoleHit("evaluation on a pole", location=X)
        return complex(self.const * np.prod(f.astype(complex) ** self.e))

    def __call__(self, x) -> complex:
        return self.evaluate_X(complex(x) ** 2)

    def merged(self) -> "ProductSpec":
        """Combine factors with equal b (within MERGE_RTOL) and drop zero exponents."""
        bs: list = []
        es: list = []
        for b, e in zip(self.b, self.e):
            for k, b0 in enumerate(bs):
                if abs(b - b0) <= MERGE_RTOL * max(abs(b), abs(b0)):
                    es[k] += int(e)
                    break
            else:
                bs.append(complex(b))
                es.append(int(e))
        keep = [k for k, e in enumerate(es) if e != 0]
        return ProductSpec([bs[k] for k in keep], [es[k] for k in keep], self.const)

    def poles(self) -> list:
        """(alpha, order) pairs; the pole sits at X = 1/alpha."""
        m = self.merged()
        return sorted(((complex(b), -int(e)) for b, e in zip(m.b, m.e) if e < 0),
                      key=lambda t: -abs(t[0]))

    def taylor(self, lmax: int) -> np.ndarray:
        """Coefficients of X^0..X^lmax by multiplying truncated factor series."""
        out = np.zeros(lmax + 1, dtype=complex)
        out[0] = self.const
        for b, e in zip(self.b, self.e):
            out = _mul_trunc(out, _binomial_series(b, int(e), lmax), lmax)
        return out

    def deflated(self, alpha: complex) -> "ProductSpec":
        """Remove every factor (1 - alpha X)^e with b equal to alpha."""
        keep = [k for k, b in enumerate(self.b)
                if abs(b - alpha) > MERGE_RTOL * max(abs(b), abs(alpha))]
        return ProductSpec(self.b[keep], self.e[keep], self.const)

    def local_taylor(self, X0: complex, order: int) -> np.ndarray:
        """Taylor coefficients g_0..g_{order-1} of this product about X = X0."""
        vals = 1 - self.b * X0
        if np.any(np.abs(vals) < 1e-12):
            raise PoleOrderMisclassified("deflated function is singular at the pole")
        g0 = complex(self.const * np.prod(vals.astype(complex) ** self.e))
        # log g(X0 + d) = log g(X0) + sum_k e_k log(1 - beta_k d), beta_k = b_k/(1 - b_k X0)
        beta = self.b / vals
        logc = np.zeros(order, dtype=complex)
        pw = np.ones_like(beta)
        for s in range(1, order):
            pw = pw * beta
            logc[s] = -np.sum(self.e * pw) / s
        return g0 * _exp_series(logc, order - 1)

    def derivative_x(self, x: complex) -> complex:
        """d/dx of the product at x, term by term."""
        X = x * x
        vals = 1 - self.b * X
        g = complex(self.const * np.prod(vals.astype(complex) ** self.e))
        return g * complex(np.sum(self.e * (-2 * x * self.b) / vals))


def _mul_trunc(a, b, n):
    return np.convolve(a, b)[: n + 1]


def _binomial_series(b, e, n):
    """(1 - b X)^e truncated at degree n."""
    out = np.zeros(n + 1, dtype=complex)
    c = 1 + 0j
    for s in range(n + 1):
        out[s] = c
        c = c * (e - s) / (s + 1) * (-b)
    return out


def _exp_series(c, n):
    """exp of a power series with c[0] = 0, truncated at degree n."""
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1
    # out' = c' out  =>  k out_k = sum_j j c_j out_{k-j}
    for k in range(1, n + 1):
        out[k] = sum(j * c[j] * out[k - j] for j in range(1, k + 1)) / k
    return out


def pole_jump(g: np.ndarray, alpha: complex, order: int, l: int) -> complex:
    """Coefficient of X^l in (outer Laurent) - (inner Laurent) across X = 1/alpha.

    g holds the Taylor coefficients about the pole of the deflated function
    (1 - alpha X)^order f(X).  For a simple pole this is -alpha^l g_0.
    """
    out = 0j
    for s in range(order):
        k = order - s  # effective pole order of the s-th piece
        binom = 1.0
        for t in range(1, k):
            binom *= (l + t) / t
        out += g[s] * (-1 / alpha) ** s * binom
    return -out * alpha**l


def contour_coefficients(func, radius: float, rmin: int, rmax: int, nodes: int = 2048,
                         check: bool = True, check_tol: float = 1e-12) -> dict:
    """Coefficients of x^{2r}, rmin <= r <= rmax, by the trapezoid rule on |x| = radius.

    With ``check`` the computation is repeated with twice the nodes and the
    change (relative to max(1, |c|)) must stay below check_tol.
    """
    def run(K):
        k = np.arange(K)
        xs = radius * np.exp(2j * np.pi * k / K)
        vals = np.array([func(x) for x in xs], dtype=complex)
        fft = np.fft.fft(vals) / K
        out = {}
        for r in range(rmin, rmax + 1):
            n = 2 * r
            out[r] = complex(fft[n % K] * radius ** (-n))
        return out

    res = run(nodes)
    if check:
        fine = run(2 * nodes)
        worst = max(abs(fine[r] - res[r]) / max(1.0, abs(fine[r])) for r in res)
        if worst > check_tol:
            raise NonconvergentSeries(f"quadrature not converged: node doubling changed coefficients by {worst:.2e}")
        res = fine
    return res
