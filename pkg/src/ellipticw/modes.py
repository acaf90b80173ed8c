"""Sectors, pole ladders and mode coefficients.

Conventions
-----------
x = w/z and X = x^2.  A classical mode coefficient c_r multiplies the product
of modes t_{n-2r} t_{m+2r}; it is the coefficient of x^{-2r} in the expansion
of the structure function on the sector annulus.  With symmetrized contours
the two orderings of radii are averaged:

    c_r = (L_A[-r] + L_{1/A}[-r]) / 2

where L_A is the Laurent expansion on the annulus A in |x| and L_{1/A} the
one on the reciprocal annulus.

Quantum coefficients f_l follow the exchange relation convention: f_l is
the coefficient of x^{2l} of f, and sector j0 tables hold f_l^{(j0)} for
l in [-rmax, rmax].

Sector k (k >= 0) is the annulus in |x| between boundaries B_k and B_{k+1}
where B_0 = 1 and B_1 < B_2 < ... are the distinct pole moduli above one.
Negative k (non-symmetrized contours only) mirrors that: sector -k-1 is the
reciprocal of sector k.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import HypothesisViolated, IndexOutOfRange, PoleOrderMisclassified, SectorOutOfRange
from .series import LaurentTable, PoleSeries, ProductSpec, contour_coefficients, pole_jump
from .structure import (
    _ell_count,
    critical_xpart,
    h_odd_coefficients,
    h_odd_xpart,
)
from .theta import DEFAULT_POLICY, IPI, PI, TruncationPolicy, qnum, xi_of

LEVEL_RTOL = 1e-9
WEIGHT_ATOL = 1e-12

REGIMES = ("CRITICAL", "H_ODD", "H_EVEN", "QUANTUM")


# trapezoid weights

@dataclass(frozen=True)
class EtaTrapezoid:
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise IndexOutOfRange("i and j must be positive")

    def __call__(self, u) -> float:
        return max(0.0, min(min(self.i, self.j), (self.i + self.j) / 2 - abs(u)))

    def support(self) -> list:
        """u from 1-(i+j)/2 to (i+j)/2-1 in unit steps."""
        s = self.i + self.j
        return [k / 2 for k in range(2 - s, s - 1, 2)]


def eta_sum_direct(i: int, j: int, r: int, q, which: str):
    """sum over u of eta(u) q^{e u r} restricted to one side.

    which: 'pos+' -> u > 0, exponent +2ur; 'pos-' -> u > 0, exponent -2ur;
           'neg+' -> u < 0, exponent +2ur; 'neg-' -> u < 0, exponent -2ur.
    """
    eta = EtaTrapezoid(i, j)
    side, sign = which[:3], 1 if which[3] == "+" else -1
    total = 0j
    for u in eta.support():
        if (u > 0 and side == "pos") or (u < 0 and side == "neg"):
            total += eta(u) * complex(q) ** (2 * u * r * sign)
    return total


def eta_sum_closed(i: int, j: int, r: int, q, which: str):
    """Closed forms of the one-sided eta sums (requires i <= j, r != 0)."""
    if i > j:
        i, j = j, i
    q = complex(q)
    d = q**r - q ** (-r)
    even = (i + j) % 2 == 0
    if which in ("pos+", "neg-"):
        lift = q**r if even else 1.0
        return (q ** (r * j) * (q ** (r * i) - q ** (-r * i)) - i * lift * d) / d**2
    lift = q ** (-r) if even else 1.0
    return -(q ** (-r * j) * (q ** (r * i) - q ** (-r * i)) - i * lift * d) / d**2


# closed-form coefficients

def _ratio(a: int, b: int, c: int, r: int, q) -> complex:
    """[a r][b r]/[c r] with the r = 0 value taken as the limit 0."""
    if r == 0:
        return 0j
    return qnum(a * r, q) * qnum(b * r, q) / qnum(c * r, q)


def _pref(q) -> complex:
    q = complex(q)
    return -2 * cmath.log(q) * (q - 1 / q)


def coeff_k0_t(N: int, q, r: int) -> complex:
    return _pref(q) * _ratio(N - 1, 1, N, r, q)


def coeff_k0_s(N: int, q, i: int, j: int, r: int) -> complex:
    _check_ij(N, i, j)
    return _pref(q) * _ratio(N - max(i, j), min(i, j), N, r, q)


def coeff_h(N: int, q, M: int, h: int, i: int, j: int, r: int) -> complex:
    """Normalized k = 0 coefficients of the h-labeled Poisson brackets."""
    _check_ij(N, i, j)
    if h == 0:
        raise ValueError("h must be nonzero")
    if h % 2 == 0:
        return coeff_k0_s(N, q, i, j, r)
    if r == 0:
        return 0j
    A, B = h_odd_coefficients(N, M)
    v = A * _ratio(N - max(i, j), min(i, j), N, r, q) - B * _ratio(i, j, N, r, q)
    if i + j > N:
        v -= B * qnum((N - i - j) * r, q)
    return _pref(q) * v


def _check_ij(N, i, j):
    if not (1 <= i <= N - 1 and 1 <= j <= N - 1):
        raise IndexOutOfRange(f"need 1 <= i, j <= N-1, got i={i}, j={j}, N={N}")


# structure functions of the composite fields as pole series

def fij_series(N: int, q, i: int, j: int, regime: str = "CRITICAL", M: int = 1,
               policy: TruncationPolicy = DEFAULT_POLICY, Xmax: float = 1.0) -> PoleSeries:
    """sum_u eta(u) F(q^u x) for F the critical (or normalized h-odd) structure function."""
    _check_ij(N, i, j)
    zeta = xi_of(q)
    span = abs(complex(q)) ** (-(i + j))
    L = _ell_count(abs(complex(q)), N, max(Xmax, 1 / Xmax) * span, policy.eps_trunc)
    if regime == "H_ODD":
        w, a = h_odd_xpart(N, zeta, M, L)
    else:
        w, a = critical_xpart(N, zeta, L)
    base = PoleSeries.antisymmetrized(w, a, -2 * IPI * zeta)
    eta = EtaTrapezoid(i, j)
    out = PoleSeries()
    for u in eta.support():
        e = eta(u)
        if e:
            out = out + base.rescaled_argument(cmath.exp(2j * PI * zeta * u)).scaled(e)
    return _merge_series(out)


def _merge_series(s: PoleSeries) -> PoleSeries:
    """Combine equal positions and drop terms whose weights cancel."""
    order = np.argsort(np.abs(s.a))
    a_sorted, w_sorted = s.a[order], s.w[order]
    pos, wts = [], []
    for a, w in zip(a_sorted, w_sorted):
        for k in range(len(pos) - 1, max(-1, len(pos) - 40), -1):
            if abs(pos[k] - a) <= LEVEL_RTOL * abs(a):
                wts[k] += w
                break
        else:
            pos.append(a)
            wts.append(w)
    keep = [k for k, w in enumerate(wts) if abs(w) > WEIGHT_ATOL]
    return PoleSeries(s.const, [wts[k] for k in keep], [pos[k] for k in keep])


# ladders

@dataclass(frozen=True)
class LadderEntry:
    position: complex  # pole location in X = x^2
    modulus: float  # |x| at the pole
    order: int = 1
    weight: complex | None = None


@dataclass
class PoleLadder:
    """Poles grouped into sector boundaries B_1 < B_2 < ... (moduli in |x|, above one)."""

    entries: list = field(default_factory=list)
    boundaries: list = field(default_factory=list)
    has_unit_pole: bool = False
    complete: bool = False  # every pole is listed, so the last sector is unbounded

    @classmethod
    def from_entries(cls, entries, complete: bool = False) -> "PoleLadder":
        entries = sorted(entries, key=lambda e: e.modulus)
        levels: list = []
        unit = False
        for e in entries:
            if abs(e.modulus - 1) <= LEVEL_RTOL:
                unit = True
                continue
            if e.modulus < 1:
                continue
            if not levels or e.modulus > levels[-1] * (1 + LEVEL_RTOL):
                levels.append(e.modulus)
        return cls(entries, levels, unit, complete)

    def annulus(self, k: int) -> tuple:
        """Bounds in |x| of sector k; negative k gives the mirrored sector."""
        if k < 0:
            lo, hi = self.annulus(-k - 1)
            return (1 / hi, 1 / lo)
        last = len(self.boundaries) - (0 if self.complete else 1)
        if k > last:
            raise SectorOutOfRange(f"ladder only resolves sectors up to {last}")
        lo = 1.0 if k == 0 else self.boundaries[k - 1]
        return (lo, self.boundaries[k] if k < len(self.boundaries) else math.inf)

    def radius(self, k: int) -> float:
        lo, hi = self.annulus(k)
        return 2 * lo if math.isinf(hi) else math.sqrt(lo * hi)

    def at_boundary(self, b: int, inner: bool = False) -> list:
        """Entries on boundary b >= 1 (or on its reciprocal when inner)."""
        m = self.boundaries[b - 1]
        if inner:
            m = 1 / m
        return [e for e in self.entries if abs(e.modulus - m) <= LEVEL_RTOL * m]

    def exponents(self, q) -> list:
        """Boundaries as P with B = |q|^{-P}."""
        lq = math.log(abs(complex(q)))
        return [-math.log(b) / lq for b in self.boundaries]


def ladder_from_series(series: PoleSeries) -> PoleLadder:
    s = _merge_series(series)
    entries = [LadderEntry(complex(1 / a), float(abs(1 / a)) ** 0.5, 1, complex(w)) for w, a in zip(s.w, s.a)]
    return PoleLadder.from_entries(entries)


def pole_ladder_classical(N: int, q, i: int, j: int, h_parity: str | None = None, M: int = 1,
                          max_modulus: float | None = None) -> PoleLadder:
    """Sector boundaries of f_ij (critical) or of its h-odd analogue."""
    _check_ij(N, i, j)
    if max_modulus is None:
        max_modulus = abs(complex(q)) ** (-3 * N)
    regime = "H_ODD" if h_parity == "odd" else "CRITICAL"
    s = fij_series(N, q, i, j, regime, M, Xmax=max_modulus**2)
    lad = ladder_from_series(s)
    keep = [e for e in lad.entries if 1 / max_modulus <= e.modulus <= max_modulus]
    return PoleLadder.from_entries(keep)


# classical coefficients in any sector

def classical_sector_coeffs(series: PoleSeries, annulus: tuple, rmax: int, symmetrized: bool = True) -> dict:
    """Mode coefficients c_r, |r| <= rmax, from the analytic Laurent expansion."""
    rho = math.sqrt(annulus[0] * annulus[1])
    LA = series.laurent(rho, rmax)
    if not symmetrized:
        return {r: LA[-r] for r in range(-rmax, rmax + 1)}
    LB = series.laurent(1 / rho, rmax)
    return {r: 0.5 * (LA[-r] + LB[-r]) for r in range(-rmax, rmax + 1)}


def delta_correction_classical(ladder: PoleLadder, k: int, source_f: PoleSeries, r: int,
                               symmetrized: bool = True) -> complex:
    """Change of c_r between sector 0 and sector k (sum over crossed boundaries).

    Moving a contour outward past a pole w a X/(1 - a X) changes the
    X^s coefficient by -w a^s for every s; moving the reciprocal contour
    inward past the mirrored pole changes it by +w a^s.  Symmetrized
    contours take half of each.
    """
    if k < 0:
        if symmetrized:
            raise SectorOutOfRange("symmetrized sectors are labeled by k >= 0")
        return _delta_inner(ladder, -k, source_f, r)
    if k > len(ladder.boundaries) - 1:
        raise SectorOutOfRange(f"sector {k} beyond ladder")
    if k == 0:
        return 0j
    s = _merge_series(source_f)
    mods = np.abs(1 / s.a) ** 0.5
    out = 0j
    for b in range(1, k + 1):
        B = ladder.boundaries[b - 1]
        outer = np.abs(mods - B) <= LEVEL_RTOL * B
        jump = -np.sum(s.w[outer] * s.a[outer] ** (-r))
        if symmetrized:
            inner = np.abs(mods - 1 / B) <= LEVEL_RTOL / B
            jump_in = np.sum(s.w[inner] * s.a[inner] ** (-r))
            out += 0.5 * (jump + jump_in)
        else:
            out += jump
    return complex(out)


def _delta_inner(ladder, kk, source_f, r):
    # non-symmetrized negative sectors: the contour ratio shrinks below one
    s = _merge_series(source_f)
    mods = np.abs(1 / s.a) ** 0.5
    out = 0j
    for b in range(1, kk):
        B = ladder.boundaries[b - 1]
        inner = np.abs(mods - 1 / B) <= LEVEL_RTOL / B
        out += np.sum(s.w[inner] * s.a[inner] ** (-r))
    if ladder.has_unit_pole:
        unit = np.abs(mods - 1) <= LEVEL_RTOL
        out += np.sum(s.w[unit] * s.a[unit] ** (-r))
    return complex(out)


# double-sum expansion, term by term at high precision

def double_sum_expand(N: int, q, i: int, j: int, r_max: int, policy: TruncationPolicy = DEFAULT_POLICY,
                     dps: int = 40) -> LaurentTable:
    """Sector-0 coefficients of x^{2r} of f_ij, expanding every pole term separately.

    Individual terms are far larger than the resulting coefficients for
    large |r|, so the sum runs in mpmath at ``dps`` digits.
    """
    _check_ij(N, i, j)
    with mpmath.workdps(dps):
        qm = mpmath.mpc(complex(q))
        lq = mpmath.log(qm)
        q2 = qm**2
        Q = qm ** (2 * N)
        rho2 = abs(qm) ** (mpmath.mpf(-1) / 2 if (i + j) % 2 else -1)  # |x|^2 on the contour
        eps = mpmath.mpf(10) ** (-dps)
        eta = EtaTrapezoid(i, j)
        # x-part weights/positions of f, expressed through mpmath powers
        xw, xa = [], []
        l = 0
        while True:
            b = Q**l
            if abs(b) * abs(qm) ** (-2 - (i + j)) * max(rho2, 1 / rho2) < eps and l > 0:
                break
            xw += [2, -1, -1]
            xa += [b, b * q2, b / q2]
            l += 1
        xw += [-1, mpmath.mpf(1) / 2, mpmath.mpf(1) / 2]
        xa += [mpmath.mpf(1), q2, 1 / q2]
        pref = -2 * lq
        coeffs_A = {s: mpmath.mpc(0) for s in range(-r_max, r_max + 1)}
        coeffs_B = {s: mpmath.mpc(0) for s in range(-r_max, r_max + 1)}
        for u in eta.support():
            e = eta(u)
            if not e:
                continue
            shift = qm ** (2 * u)
            const = 0
            for w, a in zip(xw, xa):
                const += pref * e * w
                # x-part term and the re-expressed inverse term
                for ww, aa in ((pref * e * w, a * shift), (pref * e * w, shift / a)):
                    for rho, target in ((rho2, coeffs_A), (1 / rho2, coeffs_B)):
                        _expand_term(ww, aa, rho, r_max, target)
            coeffs_A[0] += const
            coeffs_B[0] += const
        out = {s: complex(0.5 * (coeffs_A[s] + coeffs_B[s])) for s in range(-r_max, r_max + 1)}
    lo = abs(complex(q)) ** (0.5 if (i + j) % 2 else 1.0)
    return LaurentTable(out, 0, (lo, 1 / lo))


def _expand_term(w, a, rho2, rmax, target):
    m = abs(a) * rho2
    if m < 1:
        p = a
        for s in range(1, rmax + 1):
            target[s] += w * p
            p *= a
    else:
        inv = 1 / a
        p = mpmath.mpf(1)
        for s in range(0, rmax + 1):
            target[-s] -= w * p
            p *= inv


def double_sum_resummed(N: int, q, i: int, j: int, r: int) -> complex:
    """Coefficient of x^{2r} after resumming over l, with closed-form eta sums."""
    _check_ij(N, i, j)
    if r == 0:
        return 0j
    if i > j:
        i, j = j, i
    q = complex(q)
    rr = abs(r)
    d = q**rr - q ** (-rr)
    ratio = qnum(rr, q) / qnum(N * rr, q)
    eta = EtaTrapezoid(i, j)
    if (i + j) % 2:
        tail = eta(0.5) * qnum(N * rr, q) / qnum(rr, q)
    else:
        tail = eta(0) * qnum((N - 1) * rr, q) / qnum(rr, q)
    S = lambda which: eta_sum_closed(i, j, rr, q, which)  # noqa: E731
    if r > 0:
        bracket = q ** (N * rr) * S("neg+") + q ** (-N * rr) * S("pos+") - tail
        return -2 * cmath.log(q) * ratio * d * bracket
    bracket = q ** (-N * rr) * S("neg-") + q ** (N * rr) * S("pos-") - tail
    return 2 * cmath.log(q) * ratio * d * bracket


# quantum regime

def quantum_ladder(spec: ProductSpec, complete: bool = False) -> PoleLadder:
    """Ladder of a product; ``complete`` marks an exact (untruncated) rational function."""
    entries = [LadderEntry(1 / a, float(abs(1 / a)) ** 0.5, order) for a, order in spec.poles()]
    return PoleLadder.from_entries(entries, complete)


def quantum_taylor(f_spec: ProductSpec, l_max: int, policy: TruncationPolicy = DEFAULT_POLICY,
                   check_hypothesis: bool = True) -> LaurentTable:
    """Taylor coefficients f_0..f_lmax, valid for |x| below the first pole modulus."""
    poles = [abs(1 / a) ** 0.5 for a, _ in f_spec.poles()]
    first = min(poles) if poles else math.inf
    if check_hypothesis and first <= 1:
        raise HypothesisViolated(f"pole at |x| = {first:.6g} inside the unit circle")
    coeffs = f_spec.taylor(l_max)
    return LaurentTable({l: complex(coeffs[l]) for l in range(l_max + 1)}, 0, (0.0, first))


def _pole_groups(ladder: PoleLadder, j0: int) -> list:
    if j0 < 0:
        raise SectorOutOfRange("j0 must be >= 0")
    if j0 > len(ladder.boundaries):
        raise SectorOutOfRange(f"only {len(ladder.boundaries)} boundaries known")
    out = []
    for b in range(1, j0 + 1):
        out += ladder.at_boundary(b)
    return out


def sector_correction_quantum(f_spec: ProductSpec, ladder: PoleLadder, j0: int, r: int,
                              symmetrized: bool = True) -> complex:
    """Total change of f_r when the contour ratio crosses the first j0 boundaries.

    Each pole of order m contributes half (symmetrized) or all of its
    Laurent jump; the jump is built from the Taylor data of the deflated
    function at the pole.
    """
    total = 0j
    for e in _pole_groups(ladder, j0):
        alpha = 1 / e.position
        net = -sum(int(x) for b, x in zip(f_spec.b, f_spec.e) if abs(b - alpha) <= LEVEL_RTOL * abs(alpha))
        if net != e.order:
            # the deflated function would vanish (net < order) or blow up (net > order) at the pole
            raise PoleOrderMisclassified(f"pole at X = {e.position} has order {net}, not {e.order}")
        g = f_spec.deflated(alpha).local_taylor(e.position, e.order)
        if not np.all(np.isfinite(g)) or abs(g[0]) < 1e-300:
            raise PoleOrderMisclassified(f"deflated value at pole {e.position} is {g[0]}")
        jump = pole_jump(g, alpha, e.order, r)
        total += 0.5 * jump if symmetrized else jump
    return total


def simple_pole_term(f_spec: ProductSpec, alpha: complex, l: int) -> complex:
    """-1/2 alpha^l [(1 - alpha x^2) f](alpha^{-1/2})."""
    x0 = cmath.sqrt(1 / alpha)
    return -0.5 * alpha**l * f_spec.deflated(alpha)(x0)


def double_pole_term(f_spec: ProductSpec, alpha: complex, l: int) -> complex:
    """-1/2 (l+1) alpha^l g(x0) + 1/4 alpha^{l-1/2} g'(x0), g the deflated function."""
    x0 = cmath.sqrt(1 / alpha)
    g = f_spec.deflated(alpha)
    root = cmath.sqrt(alpha)  # alpha^{1/2}, the same root as x0 = 1/root
    return -0.5 * (l + 1) * alpha**l * g(x0) + 0.25 * alpha**l / root * g.derivative_x(x0)


def quantum_sector_coeffs(f_spec: ProductSpec, ladder: PoleLadder, j0: int, rmax: int,
                          symmetrized: bool = True) -> dict:
    taylor = f_spec.taylor(rmax)
    out = {}
    for l in range(-rmax, rmax + 1):
        base = complex(taylor[l]) if l >= 0 else 0j
        out[l] = base + sector_correction_quantum(f_spec, ladder, j0, l, symmetrized)
    return out


def quantum_sector_oracle(func, ladder: PoleLadder, j0: int, rmax: int, symmetrized: bool = True,
                          nodes: int = 2048) -> dict:
    """Direct coefficients by quadrature: annulus Laurent (and inner Taylor when symmetrized)."""
    first = ladder.boundaries[0]
    L = contour_coefficients(func, ladder.radius(j0), -rmax, rmax, nodes)
    if not symmetrized or j0 == 0:
        return L
    T = contour_coefficients(func, math.sqrt(first), -rmax, rmax, nodes)
    return {l: 0.5 * (T[l] + L[l]) for l in range(-rmax, rmax + 1)}


# tables

@dataclass
class ModeCoeffTable:
    regime: str
    N: int
    i: int
    j: int
    sector: int
    coeffs: dict
    symmetrized: bool = True
    M_int: int | None = None
    h: int | None = None
    annulus: tuple | None = None
    side: str = "t(n-2r) t(m+2r)"
    extra: dict = field(default_factory=dict)

    def rows(self):
        return [(r, complex(self.coeffs[r])) for r in sorted(self.coeffs)]

    def to_dict(self) -> dict:
        out = {
            "regime": self.regime,
            "N": self.N,
            "i": self.i,
            "j": self.j,
            "sector": self.sector,
            "symmetrized": self.symmetrized,
            "M": self.M_int,
            "h": self.h,
            "annulus": list(self.annulus) if self.annulus else None,
            "side": self.side,
            "coeffs": [{"r": r, "re": c.real, "im": c.imag} for r, c in self.rows()],
        }
        if self.extra:
            out["extra"] = self.extra
        return out


def exchange_relation_coeffs(regime: str, N: int, q, i: int = 1, j: int = 1, sector: int = 0,
                             r_max: int = 8, *, M: int = 1, h: int | None = None, p=None,
                             symmetrized: bool = True, y_plus: ProductSpec | None = None,
                             y_minus: ProductSpec | None = None,
                             policy: TruncationPolicy = DEFAULT_POLICY) -> ModeCoeffTable:
    """Assemble the coefficient table of one regime and sector.

    Classical regimes: k = 0 closed forms plus boundary corrections.
    QUANTUM: f_l^{(j0)} of f_{N,p,q,M} (i = j = 1), or, when y_plus and
    y_minus are supplied, the two families for Y_- (coeffs) and Y_+
    (extra['y_plus']) on the merged ladder of both functions.
    """
    regime = regime.upper()
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}")
    if regime == "QUANTUM":
        return _quantum_table(N, q, i, j, sector, r_max, M, p, symmetrized, y_plus, y_minus, policy)
    if regime == "H_ODD" and (h is None or h % 2 == 0):
        h = 1 if h is None else h
        if h % 2 == 0:
            raise ValueError("H_ODD needs an odd h")
    if regime == "H_EVEN":
        h = 2 if h is None else h
        if h % 2:
            raise ValueError("H_EVEN needs an even h")
    _check_ij(N, i, j)
    src_regime = "H_ODD" if regime == "H_ODD" else "CRITICAL"
    ladder = pole_ladder_classical(N, q, i, j, "odd" if regime == "H_ODD" else None, M)
    if sector > len(ladder.boundaries) - 1:
        ladder = pole_ladder_classical(N, q, i, j, "odd" if regime == "H_ODD" else None, M,
                                       max_modulus=abs(complex(q)) ** (-(sector + 3) * N))
    hi = ladder.annulus(sector)[1] if sector >= 0 else 1 / ladder.annulus(sector)[0]
    source = fij_series(N, q, i, j, src_regime, M, policy, Xmax=hi**2)
    if symmetrized:
        coeffs = {}
        for r in range(-r_max, r_max + 1):
            base = coeff_h(N, q, M, h, i, j, r) if regime == "H_ODD" else coeff_k0_s(N, q, i, j, r)
            coeffs[r] = base + delta_correction_classical(ladder, sector, source, r)
    else:
        coeffs = classical_sector_coeffs(source, ladder.annulus(sector), r_max, symmetrized=False)
    return ModeCoeffTable(regime, N, i, j, sector, coeffs, symmetrized,
                          M if regime != "CRITICAL" else None, h, ladder.annulus(sector))


def _quantum_table(N, q, i, j, sector, r_max, M, p, symmetrized, y_plus, y_minus, policy):
    from .structure import SurfaceSigma, f_quantum_spec

    if y_plus is None and y_minus is None:
        if (i, j) != (1, 1):
            raise ValueError("for (i, j) != (1, 1) supply y_plus and y_minus")
        if p is None:
            raise ValueError("QUANTUM needs p")
        surf = SurfaceSigma.build(N, M, q, p)
        spec = f_quantum_spec(surf, policy, Xmax=abs(complex(p)) ** (-2 * (sector + 2)))
        ladder = quantum_ladder(spec)
        coeffs = quantum_sector_coeffs(spec, ladder, sector, r_max, symmetrized)
        return ModeCoeffTable("QUANTUM", N, i, j, sector, coeffs, symmetrized, M, None,
                              ladder.annulus(sector) if sector < len(ladder.boundaries) else None,
                              side="f_l of t(n-2l) t(m+2l) - t(m-2l) t(n+2l)")
    if y_plus is None or y_minus is None:
        raise ValueError("give both y_plus and y_minus")
    merged = quantum_ladder(ProductSpec(np.concatenate([y_plus.b, y_minus.b]),
                                        np.concatenate([y_plus.e, y_minus.e])))
    fam = {}
    for name, spec in (("y_minus", y_minus), ("y_plus", y_plus)):
        own = quantum_ladder(spec)
        lo, hi = merged.annulus(sector)
        crossed = sum(1 for b in own.boundaries if b <= lo * (1 + LEVEL_RTOL))
        fam[name] = quantum_sector_coeffs(spec, own, crossed, r_max, symmetrized)
    return ModeCoeffTable("QUANTUM", N, i, j, sector, fam["y_minus"], symmetrized, M, None,
                          merged.annulus(sector),
                          side="Y_-(l) of s_i(n-2l) s_j(m+2l); Y_+(l) in extra",
                          extra={"y_plus": {str(l): [c.real, c.imag] for l, c in fam["y_plus"].items()}})


def split_poisson(f_coeffs: dict, g_coeffs: dict, same_field: bool, rmax: int) -> dict:
    """Classical bracket coefficients from Y_- = 1 + beta f, Y_+ = 1 + beta g.

    i != j: -(f_l - g_{-l});  i = j: -(f_l - g_{-l} - f_{-l} + g_l).
    """
    F = lambda l: f_coeffs.get(l, 0j)  # noqa: E731
    G = lambda l: g_coeffs.get(l, 0j)  # noqa: E731
    out = {}
    for l in range(-rmax, rmax + 1):
        if same_field:
            out[l] = -(F(l) - G(-l) - F(-l) + G(l))
        else:
            out[l] = -(F(l) - G(-l))
    return out
