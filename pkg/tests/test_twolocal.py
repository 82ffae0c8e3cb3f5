from fractions import Fraction
from random import Random

import pytest

from wittlocal import (
    Algebra,
    Element,
    SparseVector,
    Window,
    WindowTooSmall,
    WitnessCertificate,
    additivity_violation,
    basis_rigidity_check,
    centralizer,
    forced_image_space,
    leibniz_check,
    parse_element,
    rigidity_check,
    thin_delta,
    thin_derivation,
    thin_witness,
    verify_pair,
)
from wittlocal.derivations import ThinDerivationParams

from helpers import rand_element


def thin(text):
    return parse_element(text, Algebra.THIN)


def unit(i):
    return SparseVector({i: 1})


# -- the non-additive map ------------------------------------------------------


def test_thin_delta_cases():
    assert thin_delta(thin("e_1 + e_2")) == thin("e_2")
    assert thin_delta(thin("2*e_2")).is_zero()
    assert thin_delta(thin("0")).is_zero()
    assert thin_delta(thin("-3*e_1 + e_4 - e_7")) == thin("e_4 - e_7")


def test_thin_delta_homogeneous_within_case():
    rng = Random(53)
    for _ in range(60):
        x = rand_element(rng, Algebra.THIN, range(1, 10))
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 3)) * rng.choice((1, -1))
        assert thin_delta(x.scale(lam)) == thin_delta(x).scale(lam)


def test_additivity_counterexample():
    x, y = thin("e_1 + e_2"), thin("-e_1 + e_2")
    out = additivity_violation(thin_delta, x, y)
    assert out.violated
    assert out.residual == thin("-2*e_2")
    assert thin_delta(x + y).is_zero()
    assert thin_delta(x) + thin_delta(y) == thin("2*e_2")


def test_additivity_holds_on_tail_pairs():
    out = additivity_violation(thin_delta, thin("e_3"), thin("e_4"))
    assert not out.violated
    assert out.residual.is_zero()


def test_linear_maps_never_violate_additivity():
    rng = Random(59)
    table = thin_derivation(ThinDerivationParams(alpha={2: 1}, beta={2: -3}), 14)
    for _ in range(40):
        x = rand_element(rng, Algebra.THIN, range(1, 12))
        y = rand_element(rng, Algebra.THIN, range(1, 12))
        assert not additivity_violation(table.apply, x, y).violated


# -- witnesses ------------------------------------------------------------------


def test_witness_case_zero():
    cert = thin_witness(thin("2*e_2"), thin("e_3"))
    assert cert.case == "zero"
    assert cert.witness.image(1).is_zero()
    assert verify_pair(thin_delta, cert).passed


def test_witness_case_scaled():
    cert = thin_witness(thin("e_2"), thin("e_1 + 3*e_2"))
    assert cert.case == "e1-scaled"
    assert cert.witness.image(1) == thin("3*e_2")
    assert cert.witness.image(2).is_zero()
    assert verify_pair(thin_delta, cert).passed


def test_witness_case_scaled_swapped_roles():
    cert = thin_witness(thin("2*e_1 + e_3"), thin("5*e_4"))
    assert cert.case == "e1-scaled"
    assert cert.witness.image(1) == thin("1/2*e_3")
    assert verify_pair(thin_delta, cert).passed


def test_witness_case_identity():
    cert = thin_witness(thin("e_1 + e_2"), thin("-e_1 + e_2"))
    assert cert.case == "tail-identity"
    assert cert.witness.image(1).is_zero()
    assert cert.witness.image(2) == thin("e_2")
    assert cert.witness.image(3) == thin("e_3")
    v = verify_pair(thin_delta, cert)
    assert v.passed
    assert cert.witness.apply(thin("e_1 + e_2")) == thin("e_2")


def test_witness_randomized():
    rng = Random(61)
    for _ in range(300):
        x = rand_element(rng, Algebra.THIN, range(1, 13))
        y = rand_element(rng, Algebra.THIN, range(1, 13))
        cert = thin_witness(x, y)
        assert verify_pair(thin_delta, cert).passed, (str(x), str(y), cert.case)


def test_witnesses_are_derivations():
    rng = Random(67)
    for _ in range(40):
        x = rand_element(rng, Algebra.THIN, range(1, 13))
        y = rand_element(rng, Algebra.THIN, range(1, 13))
        cert = thin_witness(x, y)
        table = cert.witness
        assert leibniz_check(table, table.window.hi).passed


def test_verify_pair_rejects_wrong_witness():
    from wittlocal import LinearMapTable

    x, y = thin("e_1 + e_2"), thin("e_3")
    cert = WitnessCertificate(x, y, "zero", LinearMapTable.zero(Algebra.THIN, Window(1, 5)))
    v = verify_pair(thin_delta, cert)
    assert not v.passed
    assert v.residual_x == thin("e_2")
    assert v.residual_y.is_zero()


def test_verify_pair_zero_pair():
    from wittlocal import LinearMapTable

    z = Element.zero(Algebra.THIN)
    cert = WitnessCertificate(z, z, "zero", LinearMapTable.zero(Algebra.THIN, Window(1, 3)))
    assert verify_pair(thin_delta, cert).passed


def test_inner_element_witness_applies_through_embedding():
    a = Element(Algebra.WPLUS_EXT, {0: 1})
    x = parse_element("e_1 + e_2", Algebra.WPLUS)
    cert = WitnessCertificate(x, x, "inner", a)
    assert cert.apply(x) == parse_element("e_1 + 2*e_2", Algebra.WPLUS)


# -- centralizers ---------------------------------------------------------------


def test_centralizer_examples():
    c0 = centralizer(Algebra.WITT, parse_element("e_0", Algebra.WITT), Window(-10, 10))
    assert c0.dim == 1 and c0.basis == [unit(0)]
    c1 = centralizer(Algebra.WITT, parse_element("e_1", Algebra.WITT), Window(-10, 10))
    assert c1.dim == 1 and c1.basis == [unit(1)]
    c2 = centralizer(
        Algebra.WPLUS_EXT, parse_element("e_2", Algebra.WPLUS_EXT), Window(0, 15)
    )
    assert c2.dim == 1 and c2.basis == [unit(2)]


def test_centralizer_window_guard():
    with pytest.raises(WindowTooSmall):
        centralizer(Algebra.WPLUS, parse_element("e_1", Algebra.WPLUS), Window(0, 5))


# -- forced image spaces ---------------------------------------------------------


def test_forced_image_examples():
    witt = Algebra.WITT
    e2 = parse_element("e_2", witt)
    f0 = forced_image_space(witt, 0, e2, Window(-10, 10))
    assert f0.dim == 1 and f0.basis == [unit(2)]
    f1 = forced_image_space(witt, 1, e2, Window(-10, 10))
    assert f1.dim == 1 and f1.basis == [unit(3)]
    f_self = forced_image_space(witt, 0, parse_element("e_0", witt), Window(-10, 10))
    assert f_self.dim == 0


# -- rigidity ---------------------------------------------------------------------


def test_basis_rigidity_witt():
    tr = basis_rigidity_check(Algebra.WITT, 5, Window(-10, 10))
    assert tr.probes == [0, 1]
    assert [s.basis for s in tr.forced] == [[unit(5)], [unit(6)]]
    assert tr.rigid
    tr_neg = basis_rigidity_check(Algebra.WITT, -3, Window(-10, 10))
    assert [s.basis for s in tr_neg.forced] == [[unit(-3)], [unit(-2)]]
    assert tr_neg.rigid


def test_basis_rigidity_wplus():
    tr = basis_rigidity_check(Algebra.WPLUS, 7, Window(0, 15))
    assert tr.probes == [1, 2]
    assert [s.basis for s in tr.forced] == [[unit(8)], [unit(9)]]
    assert tr.rigid


def test_basis_rigidity_guards():
    with pytest.raises(ValueError):
        basis_rigidity_check(Algebra.WITT, 0, Window(-5, 5))
    with pytest.raises(ValueError):
        basis_rigidity_check(Algebra.WPLUS, 2, Window(0, 5))
    with pytest.raises(ValueError):
        basis_rigidity_check(Algebra.THIN, 5, Window(1, 5))


def test_rigidity_probe_choice_and_traces():
    x = parse_element("e_2", Algebra.WITT)
    tr = rigidity_check(Algebra.WITT, x, Window(-12, 12))
    assert tr.probes == [0, 5]
    assert tr.rigid

    mixed = parse_element("3*e_-2 + e_1", Algebra.WITT)
    tr2 = rigidity_check(Algebra.WITT, mixed, Window(-12, 12))
    assert tr2.probes == [0, 5]
    assert [s.basis for s in tr2.forced] == [
        [SparseVector({-2: 1, 1: Fraction(-1, 6)})],
        [SparseVector({3: 1, 6: Fraction(4, 21)})],
    ]
    assert tr2.rigid

    wp = parse_element("e_1 + e_2", Algebra.WPLUS)
    tr3 = rigidity_check(Algebra.WPLUS, wp, Window(0, 12))
    assert tr3.probes == [1, 5]
    assert tr3.rigid


def test_rigidity_intersection_inside_forced_spaces():
    rng = Random(71)
    for _ in range(30):
        x = rand_element(rng, Algebra.WITT, range(-5, 6), nonzero=True)
        tr = rigidity_check(Algebra.WITT, x, Window(-15, 15))
        assert tr.rigid
        for v in tr.intersection.basis:
            for s in tr.forced:
                assert s.contains(v)


def test_rigidity_window_guard():
    x = parse_element("e_4", Algebra.WITT)  # needs probe index 9
    with pytest.raises(WindowTooSmall):
        rigidity_check(Algebra.WITT, x, Window(-5, 5))
    with pytest.raises(ValueError):
        rigidity_check(Algebra.WITT, Element.zero(Algebra.WITT), Window(-5, 5))
