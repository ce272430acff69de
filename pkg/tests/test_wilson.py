from fractions import Fraction as F

import mpmath
import pytest

from qhahn import brf
from qhahn.qcore import InvalidParams, QParams
from qhahn.wilson import (
    HahnParams,
    WilsonParams,
    check_hahn_biorthogonality,
    check_wilson_biorthogonality,
    hahn_U,
    hahn_h,
    hahn_u,
    hahn_v,
    hahn_weight,
    induced_wilson_params,
    limit_h,
    limit_u,
    limit_v,
    limit_weight,
    qto1_convergence_check,
    wilson_h,
    wilson_limit_check,
    wilson_u,
    wilson_v,
    wilson_weight,
)

from conftest import CANONICAL

WILSON_PANEL = [
    WilsonParams(F(1, 2), F(3), F(5), F(7), F(11), 2),
    WilsonParams(F(1, 2), F(3), F(5), F(7), F(11), 4),
    WilsonParams(F(2, 3), F(5), F(7), F(11), F(13), 3),
    WilsonParams(F(1, 2), F(3), F(5), F(7), F(11), 0),
]
HAHN_PANEL = [
    HahnParams(F(-5), F(9), 3),
    HahnParams(F(-7, 2), F(17, 2), 4),
    HahnParams(F(-7), F(12), 6),
]
LIMIT_INSTANCE = QParams(F(1, 2), F(8), F(1, 32), 2)


def test_parameter_constraints_hold_by_construction():
    for wp in WILSON_PANEL:
        assert wp.qa * wp.qb == wp.q ** -wp.N
        assert wp.qa * wp.qb * wp.qc * wp.qd * wp.qe * wp.qf == wp.q


def test_swapped_exchanges_the_two_families():
    wp = WILSON_PANEL[0]
    sw = wp.swapped()
    assert sw.qa == wp.qb and sw.qb == wp.qa
    assert sw.qe == wp.qf and sw.qf == wp.qe
    assert sw.qc == wp.qc and sw.qd == wp.qd
    assert sw.swapped() == wp


def test_u0_and_v0_are_one():
    wp = WILSON_PANEL[0]
    for x in range(wp.N + 1):
        assert wilson_u(0, x, wp) == 1
        assert wilson_v(0, x, wp) == 1


def test_wilson_biorthogonality_exact():
    for wp in WILSON_PANEL:
        report = check_wilson_biorthogonality(wp)
        assert report.status == "pass", report.violations[:2]


def test_wilson_norms_are_nonzero():
    wp = WILSON_PANEL[0]
    for n in range(wp.N + 1):
        assert wilson_h(n, wp) != 0


def test_n0_instance_reduces_to_total_mass():
    # at N = 0 the only identity is w_0 = h_0, with u_0 = v_0 = 1
    wp = WILSON_PANEL[3]
    assert wilson_weight(0, wp) == wilson_h(0, wp)


def test_gram_diagonal_matches_h_directly():
    wp = WILSON_PANEL[0]
    for n in range(wp.N + 1):
        gram = sum(
            wilson_weight(x, wp) * wilson_u(n, x, wp) * wilson_v(n, x, wp)
            for x in range(wp.N + 1)
        )
        assert gram == wilson_h(n, wp)


@pytest.mark.parametrize("knob", ["include_qn", "squared_head", "anchored_tail"])
def test_each_norm_correction_is_load_bearing(knob):
    # reverting any one of the three corrections must break biorthogonality
    wp = WILSON_PANEL[0]
    report = check_wilson_biorthogonality(wp, **{knob: False})
    assert report.status == "fail"


def test_uncorrected_norms_differ_pointwise():
    wp = WILSON_PANEL[0]
    n = 1
    good = wilson_h(n, wp)
    assert wilson_h(n, wp, include_qn=False) != good
    assert wilson_h(n, wp, squared_head=False) != good
    assert wilson_h(n, wp, anchored_tail=False) != good


def test_wilson_limit_decays_geometrically():
    report = wilson_limit_check(LIMIT_INSTANCE, [8, 12, 16, 20], F(3))
    assert report.status == "pass"
    assert float(report.details["ratio_bound_float"]) < 1
    devs = [F(v) for v in report.details["deviations"].values()]
    assert all(a > b for a, b in zip(devs, devs[1:]))


def test_wilson_limit_canonical_instance_further_out(canonical):
    # the canonical instance carries a larger constant; further along the
    # sequence it shows the same q^4 ratio
    report = wilson_limit_check(canonical, [16, 20, 24, 28], F(3))
    assert report.status == "pass"
    assert float(report.details["ratio_bound_float"]) < F(1, 10)


def test_wilson_limit_requires_shrinking_q():
    grow = QParams(F(3, 2), F(32, 243), F(19683, 512), 3)
    with pytest.raises(InvalidParams):
        wilson_limit_check(grow, [8, 12], F(3))


def test_wilson_limit_skips_degenerate_members():
    # m = 0 makes qa = 1, a degenerate head; with fewer than two valid
    # members left the check reports a skip instead of a verdict
    report = wilson_limit_check(LIMIT_INSTANCE, [0, 8], F(3))
    assert report.status == "skip"


def test_induced_params_satisfy_wilson_constraints():
    for m in (8, 12):
        wp = induced_wilson_params(CANONICAL, m, F(3))
        assert wp.qa == CANONICAL.q ** -m
        assert wp.qa * wp.qb == wp.q ** -wp.N
        assert wp.qa * wp.qb * wp.qc * wp.qd * wp.qe * wp.qf == wp.q


def test_limit_targets_match_brf_weight():
    for p in (CANONICAL, LIMIT_INSTANCE):
        bare = brf._bare_weight(p)
        for x in range(p.N + 1):
            assert limit_weight(x, p.q, p.A, p.B, p.N) == bare[x]


def test_limit_targets_match_brf_series():
    for p in (CANONICAL, LIMIT_INSTANCE):
        for n in range(p.N + 1):
            u = brf.brf_u(n, p)
            pref = brf.u_prefactor(n, p)
            for x in range(p.N + 1):
                assert pref * limit_u(n, x, p.q, p.A, p.B, p.N) == u[x]


def test_limit_targets_match_brf_norm():
    for p in (CANONICAL, LIMIT_INSTANCE):
        for n in range(p.N + 1):
            assert limit_h(n, p.q, p.A, p.B, p.N) == brf._hbar(n, p)


def test_limit_v_is_reflected_u():
    for p in (CANONICAL, LIMIT_INSTANCE):
        refl = brf.reflected_params(p)
        for n in range(p.N + 1):
            for x in range(p.N + 1):
                assert limit_v(n, x, p.q, p.A, p.B, p.N) == limit_u(
                    n, p.N - x, refl.q, refl.A, refl.B, refl.N
                )


def test_limit_u0_is_one_even_in_floating_point():
    # the n = 0 member is identically 1, so its q -> 1 deviation vanishes
    # exactly at every h
    with mpmath.workprec(60):
        q = mpmath.exp(mpmath.mpf(1) / 8)
        for x in range(3):
            assert limit_u(0, x, q, q**-5, q**9, 2) == 1


def test_hahn_biorthogonality_exact():
    for hp in HAHN_PANEL:
        assert check_hahn_biorthogonality(hp).status == "pass"


def test_hahn_u0_is_one():
    for hp in HAHN_PANEL:
        assert all(v == 1 for v in hahn_U(0, hp))
        assert hahn_u(0, 0, hp) == 1


def test_hahn_total_mass_is_h0():
    for hp in HAHN_PANEL:
        total = sum(hahn_weight(x, hp) for x in range(hp.N + 1))
        assert total == hahn_h(0, hp)
        assert total != 1  # the q = 1 weight is not normalized


def test_hahn_values_are_rational_and_finite():
    hp = HAHN_PANEL[0]
    for n in range(hp.N + 1):
        for x in range(hp.N + 1):
            assert isinstance(hahn_u(n, x, hp), F)
            assert isinstance(hahn_v(n, x, hp), F)


def test_qto1_convergence_order_one():
    hp = HahnParams(F(-3), F(5), 2)
    report = qto1_convergence_check(hp, [F(1, 8), F(1, 16), F(1, 32)])
    assert report.status == "pass"
    devs = [float(v) for v in report.details["deviations"].values()]
    assert all(a > b for a, b in zip(devs, devs[1:]))
    for order in report.details["orders"]:
        assert 0.5 <= order <= 2


def test_qto1_orders_march_to_linear():
    hp = HahnParams(F(-5), F(9), 3)
    report = qto1_convergence_check(hp, [F(1, 16), F(1, 32), F(1, 64), F(1, 128)])
    assert report.status == "pass"
    orders = report.details["orders"]
    assert all(b > a for a, b in zip(orders, orders[1:]))
    assert abs(orders[-1] - 1) < 0.1


def test_qto1_requires_integer_exponents():
    with pytest.raises(InvalidParams):
        qto1_convergence_check(HahnParams(F(-7, 2), F(17, 2), 4), [F(1, 8), F(1, 16)])


def test_qto1_requires_positive_h():
    with pytest.raises(InvalidParams):
        qto1_convergence_check(HahnParams(F(-3), F(5), 2), [F(1, 8), F(-1, 16)])
