import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhahn.algebra import (
    NCPoly,
    StructureConstants,
    casimir_matrix,
    casimir_poly,
    check_casimir,
    check_meta_relations,
    check_potential,
    check_rqhahn_relations,
    check_structure_constants,
    cyclic_derivative,
    evaluate_poly,
    meta_relation_polys,
    potential_meta,
    potential_rqhahn,
    rqhahn_relation_polys,
    solve_structure_constants,
    structure_constants,
)
from qhahn.operators import Basis, Operator, build_operator
from qhahn.qcore import QHahnError, qnum, qpow

from conftest import CANONICAL, PANEL, SMALL_PANEL

words = st.text(alphabet="XYZV", min_size=0, max_size=3)
coeffs = st.fractions(min_value=F(-3), max_value=F(3), max_denominator=6)
polys = st.dictionaries(words, coeffs, max_size=3).map(
    lambda d: NCPoly({tuple(w): c for w, c in d.items()})
)
cyclic_polys = st.dictionaries(words, coeffs, max_size=3).map(
    lambda d: NCPoly({tuple(w): c for w, c in d.items()}, cyclic=True)
)


@given(polys, polys, polys)
@settings(max_examples=30)
def test_ncpoly_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert a - a == NCPoly.zero()


@given(polys, coeffs)
@settings(max_examples=30)
def test_ncpoly_scalar_action(a, c):
    assert c * a == NCPoly({w: c * v for w, v in a.terms.items()})


def test_ncpoly_unit_and_monomials():
    one = NCPoly.monomial("")
    x = NCPoly.monomial("X")
    assert one * x == x and x * one == x
    assert NCPoly.monomial("XY") * NCPoly.monomial("Z") == NCPoly.monomial("XYZ")
    assert x.coefficient("X") == 1
    assert x.coefficient("Y") == 0


def test_cyclic_words_identify_rotations():
    assert NCPoly.cyclic_word("XYZ") == NCPoly.cyclic_word("YZX")
    assert NCPoly.cyclic_word("XYZ") == NCPoly.cyclic_word("ZXY")
    assert NCPoly.cyclic_word("XYZ") != NCPoly.cyclic_word("XZY")
    assert NCPoly.cyclic_word("XXY") + NCPoly.cyclic_word("XYX") == NCPoly.cyclic_word("XXY", 2)


def test_cyclic_product_is_undefined():
    c = NCPoly.cyclic_word("XY")
    with pytest.raises(QHahnError):
        c * c
    with pytest.raises(QHahnError):
        c * NCPoly.monomial("X")


def test_cyclic_and_plain_do_not_mix():
    with pytest.raises(QHahnError):
        NCPoly.cyclic_word("XY") + NCPoly.monomial("XY")


def test_cyclic_derivative_displayed_rule():
    # d[XY]/dX = Y, d[XXX]/dX = 3 X^2, d[XYZ]/dY = ZX
    assert cyclic_derivative(NCPoly.cyclic_word("XY"), "X") == NCPoly.monomial("Y")
    assert cyclic_derivative(NCPoly.cyclic_word("XXX"), "X") == NCPoly.monomial("XX", 3)
    assert cyclic_derivative(NCPoly.cyclic_word("XYZ"), "Y") == NCPoly.monomial("ZX")
    assert cyclic_derivative(NCPoly.cyclic_word("XY"), "Z") == NCPoly.zero()


@given(cyclic_polys, cyclic_polys, coeffs, st.sampled_from("XYZV"))
@settings(max_examples=30)
def test_cyclic_derivative_is_linear(a, b, c, gen):
    lhs = cyclic_derivative(a + c * b, gen)
    rhs = cyclic_derivative(a, gen) + c * cyclic_derivative(b, gen)
    assert lhs == rhs


def test_evaluate_poly_matches_matrix_products(canonical):
    mats = {g.value: build_operator(g, Basis.POINT, canonical) for g in Operator}
    poly = NCPoly.monomial("XZ", F(2)) + NCPoly.monomial("Y", F(-1, 3))
    direct = F(2) * (mats["X"] @ mats["Z"]) + F(-1, 3) * mats["Y"]
    assert evaluate_poly(poly, mats, canonical).entries == direct.entries


def test_rqhahn_relations_exact_on_panel():
    for p in PANEL:
        assert check_rqhahn_relations(p).status == "pass"


def test_meta_relations_exact_on_panel():
    for p in PANEL:
        assert check_meta_relations(p).status == "pass"


def test_relation_negative_control_xi5(canonical):
    sc = structure_constants(canonical)
    xi = list(sc.xi)
    xi[5] += 1
    tampered = dataclasses.replace(sc, xi=tuple(xi))
    assert check_rqhahn_relations(canonical, constants=tampered).status == "fail"


def test_relation_negative_control_eta2_sign(canonical):
    # the sign of eta_2 is load-bearing: its flip must break the ZV relation
    sc = structure_constants(canonical)
    eta = list(sc.eta)
    eta[2] = -eta[2]
    tampered = dataclasses.replace(sc, eta=tuple(eta))
    report = check_meta_relations(canonical, constants=tampered)
    assert report.status == "fail"


def test_structure_constant_closed_forms(canonical):
    # spot anchors: xi_2 = q^-1 [beta - N], eta_1 = [beta - N + 1],
    # gamma_2 = [beta - N + 1]
    p = canonical
    sc = structure_constants(p)
    assert sc.xi[2] == qpow(p, -1) * qnum(p, -p.N, 0, 1)
    assert sc.eta[1] == qnum(p, 1 - p.N, 0, 1)
    assert sc.gamma_at(2) == qnum(p, 1 - p.N, 0, 1)
    assert sc.eta[2] == qpow(p, -p.N, 0, 1) * qnum(p, 2)


def test_solve_back_recovers_constants():
    for p in PANEL:
        report = check_structure_constants(p)
        if p.N <= 2:
            assert report.status == "skip"
        else:
            assert report.status == "pass"


def test_solve_back_equals_closed_forms(canonical):
    solved = solve_structure_constants(canonical)
    closed = structure_constants(canonical)
    assert solved.xi == closed.xi


def test_casimirs_central_on_panel():
    for p in PANEL:
        assert check_casimir("rqhahn", p).status == "pass"
        assert check_casimir("meta", p).status == "pass"


def test_casimir_matrices_shape(canonical):
    # the realization sits on the zero surface of the cubic Casimir and
    # maps the meta Casimir to a nonzero scalar
    assert casimir_matrix("rqhahn", canonical).is_zero()
    meta = casimir_matrix("meta", canonical)
    scalarval = meta.entries[0][0]
    assert scalarval == F(-773977, 131072)
    for i in range(canonical.N + 1):
        for j in range(canonical.N + 1):
            assert meta.entries[i][j] == (scalarval if i == j else 0)


def test_casimir_reports_scalar_flag(canonical):
    r = check_casimir("meta", canonical)
    assert r.details["is_scalar"] is True
    r2 = check_casimir("rqhahn", canonical)
    assert r2.details["is_scalar"] is True


def test_potentials_give_relations_with_unit_scale():
    for p in SMALL_PANEL:
        for which in ("rqhahn", "meta"):
            report = check_potential(which, p)
            assert report.status == "pass"
            assert set(report.details["scales"].values()) == {"-1/1"}


def test_potential_words_are_cyclic(canonical):
    phi = potential_rqhahn(canonical)
    assert phi.cyclic
    psi = potential_meta(canonical)
    assert psi.cyclic


def test_potential_derivative_matches_relation_poly(canonical):
    # one pair spelled out: d(Phi)/dY + the XZ relation = 0 in the free algebra
    phi = potential_rqhahn(canonical)
    rel = rqhahn_relation_polys(canonical)["XZ"]
    assert cyclic_derivative(phi, "Y") + rel == NCPoly.zero()


def test_meta_potential_derivative_matches_relation_poly(canonical):
    psi = potential_meta(canonical)
    rel = meta_relation_polys(canonical)["XZ"]
    assert cyclic_derivative(psi, "V") + rel == NCPoly.zero()


def test_relation_polys_evaluate_to_zero(canonical):
    mats = {g.value: build_operator(g, Basis.POINT, canonical) for g in Operator}
    for poly in rqhahn_relation_polys(canonical).values():
        assert evaluate_poly(poly, mats, canonical).is_zero()
    for poly in meta_relation_polys(canonical).values():
        assert evaluate_poly(poly, mats, canonical).is_zero()


def test_casimir_poly_has_cubic_leading_terms(canonical):
    qpoly = casimir_poly("rqhahn", canonical)
    assert qpoly.coefficient("XYZ") == 1 - canonical.q
    mpoly = casimir_poly("meta", canonical)
    assert mpoly.coefficient("XVZ") == 1 - canonical.q
