import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipticw import modes
from ellipticw.errors import HypothesisViolated, IndexOutOfRange, PoleOrderMisclassified, SectorOutOfRange
from ellipticw.series import ProductSpec, contour_coefficients
from ellipticw.structure import SurfaceSigma, f_quantum_spec
from ellipticw.theta import qnum

Q = 0.4 + 0.1j


@settings(max_examples=40, deadline=None)
@given(i=st.integers(1, 6), j=st.integers(1, 6))
def test_eta_trapezoid_shape(i, j):
    eta = modes.EtaTrapezoid(i, j)
    half = (i + j) / 2
    assert eta(half) == 0 and eta(-half) == 0 and eta(half + 1) == 0
    us = eta.support()
    assert max(eta(u) for u in us) == min(i, j)
    for u in us:
        assert eta(u) == eta(-u)
        assert eta(u) == int(eta(u)) and eta(u) >= 1
    steps = [abs(eta(a) - eta(b)) for a, b in zip(us, us[1:])]
    assert set(steps) <= {0, 1}


def test_eta_index_check():
    with pytest.raises(IndexOutOfRange):
        modes.EtaTrapezoid(0, 2)


@pytest.mark.parametrize("i,j", [(1, 2), (2, 2), (1, 3), (2, 4), (3, 3)])
def test_eta_sum_closed_forms(i, j):
    for r in (1, 2, 5):
        for which in ("pos+", "pos-", "neg+", "neg-"):
            a = modes.eta_sum_direct(i, j, r, Q, which)
            b = modes.eta_sum_closed(i, j, r, Q, which)
            assert abs(a - b) < 1e-12 * max(1, abs(b))


def test_k0_formulas():
    N = 4
    for r in range(-5, 6):
        assert modes.coeff_k0_s(N, Q, 1, 1, r) == modes.coeff_k0_t(N, Q, r)
        assert modes.coeff_k0_s(N, Q, 1, 3, r) == modes.coeff_k0_s(N, Q, 3, 1, r)
        assert abs(modes.coeff_k0_t(N, Q, r) + modes.coeff_k0_t(N, Q, -r)) < 1e-14
    assert modes.coeff_k0_t(3, Q, 0) == 0
    # N = 2 is -2 ln q (q - 1/q) [r]^2/[2r]
    import cmath
    for r in (1, 3):
        ref = -2 * cmath.log(Q) * (Q - 1 / Q) * qnum(r, Q) ** 2 / qnum(2 * r, Q)
        assert abs(modes.coeff_k0_t(2, Q, r) - ref) < 1e-14


def test_k0_matches_double_sum_at_reference_point():
    table = modes.double_sum_expand(4, Q, 1, 2, 3)
    assert abs(table[-1] - modes.coeff_k0_s(4, Q, 1, 2, 1)) < 1e-12


def test_double_sum_full_n3():
    for i in (1, 2):
        for j in (1, 2):
            t = modes.double_sum_expand(3, Q, i, j, 12)
            for r in range(-12, 13):
                c = modes.coeff_k0_s(3, Q, i, j, -r)
                assert abs(t[r] - c) <= 1e-10 * max(abs(c), 1e-300) or (c == 0 and abs(t[r]) < 1e-14)


def test_coeff_h_cases():
    N = 3
    for r in range(-4, 5):
        assert modes.coeff_h(N, Q, 1, 2, 1, 2, r) == modes.coeff_k0_s(N, Q, 1, 2, r)
    A, B = 2, 4  # E(3/2)(E(3/2)+1), E(2)^2
    r = 2
    ref = -2 * np.log(Q) * (Q - 1 / Q) * (A * qnum(2 * r, Q) * qnum(r, Q) / qnum(3 * r, Q)
                                          - B * qnum(r, Q) * qnum(r, Q) / qnum(3 * r, Q))
    assert abs(modes.coeff_h(N, Q, 1, 1, 1, 1, r) - ref) < 1e-13
    # the third term appears only for i + j > N and vanishes at i + j = N
    assert qnum(0, Q) == 0
    a = modes.coeff_h(N, Q, 1, 1, 2, 2, r)
    no_third = -2 * np.log(Q) * (Q - 1 / Q) * (A * qnum(r, Q) * qnum(2 * r, Q) / qnum(3 * r, Q)
                                               - B * qnum(2 * r, Q) ** 2 / qnum(3 * r, Q))
    assert abs(a - (no_third - 2 * np.log(Q) * (Q - 1 / Q) * (-B) * qnum(-r, Q))) < 1e-12
    with pytest.raises(ValueError):
        modes.coeff_h(N, Q, 1, 0, 1, 1, 1)


def test_classical_ladder_n3():
    lad = modes.pole_ladder_classical(3, Q, 1, 1)
    assert lad.has_unit_pole
    assert [round(e, 9) for e in lad.exponents(Q)[:4]] == [1, 2, 3, 4]
    wide = modes.pole_ladder_classical(3, Q, 1, 2)
    assert [round(e, 9) for e in wide.exponents(Q)[:3]] == [0.5, 1.5, 2.5]
    mods = sorted(e.modulus for e in lad.entries)
    for m in mods:
        assert any(abs(m * k - 1) < 1e-9 for k in mods)
    with pytest.raises(IndexOutOfRange):
        modes.pole_ladder_classical(3, Q, 3, 1)


def test_h_odd_ladder_adds_half_period_family():
    plain = modes.pole_ladder_classical(3, Q, 1, 1).exponents(Q)
    odd = modes.pole_ladder_classical(3, Q, 1, 1, "odd").exponents(Q)
    assert set(np.round(plain, 9)) < set(np.round(odd, 9))
    assert 0.5 in set(np.round(odd, 9))


def test_delta_corrections():
    N = 3
    lad = modes.pole_ladder_classical(N, Q, 1, 1)
    src = modes.fij_series(N, Q, 1, 1, Xmax=1e6)
    assert modes.delta_correction_classical(lad, 0, src, 3) == 0
    # k = 1 equals the direct re-expansion in the k = 1 annulus
    direct = modes.classical_sector_coeffs(src, lad.annulus(1), 6)
    for r in range(-6, 7):
        got = modes.coeff_k0_s(N, Q, 1, 1, r) + modes.delta_correction_classical(lad, 1, src, r)
        assert abs(got - direct[r]) < 1e-12 * max(1, abs(direct[r]))
    # crossing down again undoes the step
    step = modes.delta_correction_classical(lad, 2, src, 2) - modes.delta_correction_classical(lad, 1, src, 2)
    assert abs(modes.delta_correction_classical(lad, 2, src, 2) - step
               - modes.delta_correction_classical(lad, 1, src, 2)) < 1e-13 * abs(step)
    with pytest.raises(SectorOutOfRange):
        modes.delta_correction_classical(lad, 99, src, 1)


def test_nonsymmetrized_negative_sectors_mirror():
    N = 2
    lad = modes.pole_ladder_classical(N, Q, 1, 1)
    src = modes.fij_series(N, Q, 1, 1, Xmax=1e6)
    lo, hi = lad.annulus(-1)
    assert abs(lo * lad.annulus(0)[1] - 1) < 1e-12 and hi == 1
    plain = modes.exchange_relation_coeffs("CRITICAL", N, Q, 1, 1, 1, 4, symmetrized=False)
    direct = contour_coefficients(src, lad.radius(1), -4, 4)
    for r in range(-4, 5):
        assert abs(plain.coeffs[r] - direct[-r]) < 1e-11 * max(1, abs(direct[-r]))


def test_quantum_taylor_reference_example():
    # this point lies outside the factorization hypothesis, so only the Taylor part is checked
    surf = SurfaceSigma.build(2, 1, 0.5, 0.3)
    spec = f_quantum_spec(surf, check_hypothesis=False, Xmax=1e3)
    with pytest.raises(HypothesisViolated):
        modes.quantum_taylor(spec, 8)
    t = modes.quantum_taylor(spec, 8, check_hypothesis=False)
    first = t.annulus[1]
    c = contour_coefficients(spec, 0.9 * first, 0, 8)
    assert t[0] == 1
    assert max(abs(t[l] - c[l]) / max(1, abs(c[l])) for l in range(9)) < 1e-10


def test_toy_function_sector_one():
    alpha = 0.3 + 0.2j
    spec = ProductSpec([alpha], [-1])
    lad = modes.quantum_ladder(spec, complete=True)
    assert modes.sector_correction_quantum(spec, lad, 0, 2) == 0
    got = modes.quantum_sector_coeffs(spec, lad, 1, 5, symmetrized=False)
    for l in range(-5, 6):
        assert abs(got[l] - (-(alpha**l) if l < 0 else 0)) < 1e-14 * max(1, abs(alpha**l))


def test_pole_order_misclassified():
    lad = modes.PoleLadder.from_entries([modes.LadderEntry(2.0, math.sqrt(2.0), 1)])
    for spec in (ProductSpec([0.5, 0.5], [-1, -1]), ProductSpec([0.5, 0.5], [-1, 1])):
        with pytest.raises(PoleOrderMisclassified):
            modes.sector_correction_quantum(spec, lad, 1, 0)


def test_quantum_first_crossing_n2():
    surf = SurfaceSigma.build(2, 1, 0.3, 0.6)
    spec = f_quantum_spec(surf, Xmax=1e4)
    lad = modes.quantum_ladder(spec)
    got = modes.quantum_sector_coeffs(spec, lad, 1, 6)
    ref = modes.quantum_sector_oracle(spec, lad, 1, 6)
    assert max(abs(got[l] - ref[l]) / max(1, abs(ref[l])) for l in got) < 1e-9


def test_quantum_table_sector0_is_taylor():
    table = modes.exchange_relation_coeffs("QUANTUM", 2, 0.3, sector=0, r_max=6, M=1, p=0.6)
    spec = f_quantum_spec(SurfaceSigma.build(2, 1, 0.3, 0.6), Xmax=1e4)
    t = modes.quantum_taylor(spec, 6)
    for l in range(0, 7):
        assert abs(table.coeffs[l] - t[l]) < 1e-13
        assert table.coeffs[-l] == 0 or l == 0


def test_two_function_pathway_reduces():
    spec = f_quantum_spec(SurfaceSigma.build(3, 1, 0.3, 0.8), Xmax=1e4)
    single = modes.exchange_relation_coeffs("QUANTUM", 3, 0.3, sector=2, r_max=4, M=1, p=0.8)
    pair = modes.exchange_relation_coeffs("QUANTUM", 3, 0.3, sector=2, r_max=4, y_plus=spec, y_minus=spec)
    for l in range(-4, 5):
        assert abs(pair.coeffs[l] - single.coeffs[l]) < 1e-12
        assert abs(complex(*pair.extra["y_plus"][str(l)]) - single.coeffs[l]) < 1e-12


def test_two_function_merged_ladder():
    a = ProductSpec([0.5], [-2])
    b = ProductSpec([0.2], [-1])
    t = modes.exchange_relation_coeffs("QUANTUM", 2, 0.3, sector=1, r_max=3, y_plus=a, y_minus=b)
    # sector 1 of the merged ladder lies beyond the pole of a only
    assert t.annulus == pytest.approx((math.sqrt(2), math.sqrt(5)))
    assert t.coeffs[-1] == 0  # y_minus has not crossed its pole yet
    # a double pole has no X^-1 term outside; X^-2 is the first one
    assert complex(*t.extra["y_plus"]["-1"]) == 0
    assert abs(complex(*t.extra["y_plus"]["-2"]) - 0.5 * 4) < 1e-14


def test_split_poisson_formula():
    f = {1: 2.0, -1: 0.5}
    g = {1: 0.25, -1: 3.0}
    same = modes.split_poisson(f, g, True, 1)
    diff = modes.split_poisson(f, g, False, 1)
    assert same[1] == -(2.0 - 3.0 - 0.5 + 0.25)
    assert diff[1] == -(2.0 - 3.0)
    assert same[0] == 0


def test_table_serialization():
    t = modes.exchange_relation_coeffs("H_ODD", 3, Q, 2, 2, 0, 3, M=1, h=1)
    d = t.to_dict()
    assert d["regime"] == "H_ODD" and len(d["coeffs"]) == 7
    with pytest.raises(ValueError):
        modes.exchange_relation_coeffs("H_ODD", 3, Q, 1, 1, 0, 3, h=2)
    with pytest.raises(ValueError):
        modes.exchange_relation_coeffs("NOPE", 3, Q)
