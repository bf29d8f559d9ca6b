import pytest

from homq.scalars import ScalarField
from homq.ncpoly import Presentation, NCPoly
from homq.hombialg import (HomBialgebra, MorphismError, delta, apply_alpha,
                           twist_hom_bialgebra, verify_morphism,
                           verify_hom_bialgebra, pairwise_product)


F = ScalarField(("t", "lambda"))


def qm2_presentation():
    rules = [
        ("ba", {"ab": "q"}),
        ("ca", {"ac": "q"}),
        ("cb", {"bc": 1}),
        ("db", {"bd": "q"}),
        ("dc", {"cd": "q"}),
        ("da", {"ad": 1, "bc": "q - q^-1"}),
    ]
    return Presentation("abcd", rules, F, max_degree=4, name="qm2")


DELTA = {
    "a": {("a", "a"): 1, ("b", "c"): 1},
    "b": {("a", "b"): 1, ("b", "d"): 1},
    "c": {("c", "a"): 1, ("d", "c"): 1},
    "d": {("c", "b"): 1, ("d", "d"): 1},
}

ALPHA = {
    "a": {"a": 1},
    "b": {"b": "lambda"},
    "c": {"c": "lambda^-1"},
    "d": {"d": 1},
}


def plain():
    return HomBialgebra(qm2_presentation(), DELTA, name="qm2")


def twisted():
    return twist_hom_bialgebra(plain(), ALPHA, name="qm2_t")


def det_poly(P):
    return P.poly({"ad": 1, "bc": "-q^-1"})


# frozen coproduct and twisting-map values ------------------------------------


def test_delta_of_a():
    H = plain()
    P = H.pres
    assert delta(H, P.gen("a")) == P.tensor(2, {("a", "a"): 1, ("b", "c"): 1})


def test_delta_of_product_is_matrix_square():
    # Delta(ab) expands through the compatibility rule
    H = plain()
    P = H.pres
    got = delta(H, P.gen("a") * P.gen("b"))
    want = pairwise_product(H, delta(H, P.gen("a")), delta(H, P.gen("b")))
    assert got == want


def test_determinant_is_group_like():
    H = plain()
    P = H.pres
    det = det_poly(P)
    want = {}
    for w1, c1 in det.terms.items():
        for w2, c2 in det.terms.items():
            want[(w1, w2)] = c1 * c2
    assert delta(H, det).terms == want


def test_alpha_scales_generators():
    H = twisted()
    P = H.pres
    assert apply_alpha(H, P.gen("b")) == P.poly({"b": "lambda"})
    assert apply_alpha(H, P.gen("c")) == P.poly({"c": "lambda^-1"})
    assert apply_alpha(H, P.gen("a")) == P.gen("a")


def test_alpha_fixes_determinant():
    H = twisted()
    P = H.pres
    det = det_poly(P)
    assert apply_alpha(H, det) == det


def test_twisted_delta_of_b():
    # matrix form: each b leg picks up one lambda
    H = twisted()
    P = H.pres
    got = delta(H, P.gen("b"))
    assert got == P.tensor(2, {("a", "b"): "lambda", ("b", "d"): "lambda"})


def test_twisted_delta_group_like_image():
    # group-likes stay group-like after the twist, with alpha-scaled legs
    H = twisted()
    P = H.pres
    det = det_poly(P)
    img = apply_alpha(H, det)
    want = {}
    for w1, c1 in img.terms.items():
        for w2, c2 in img.terms.items():
            want[(w1, w2)] = c1 * c2
    assert delta(H, det).terms == want


def test_twisted_product():
    H = twisted()
    P = H.pres
    # mu_alpha(b, c) = alpha(bc) = bc (lambda cancels)
    assert H.product(P.gen("b"), P.gen("c")) == P.poly({"bc": 1})
    # mu_alpha(b, b) = alpha(b^2) = lambda^2 b^2
    assert H.product(P.gen("b"), P.gen("b")) == P.poly({"bb": "lambda^2"})


# morphism checks ----------------------------------------------------------------


def test_alpha_is_morphism():
    rep = verify_morphism(ALPHA, plain())
    assert rep.passed


def test_scaling_group_morphism():
    # a -> a scaled consistently with the relation da = ad + (q - q^-1)bc
    # requires the b and c scalings to cancel; breaking that must fail
    bad = dict(ALPHA)
    bad["c"] = {"c": 1}
    rep = verify_morphism(bad, plain())
    assert not rep.passed
    names = [c.name for c in rep.failures()]
    assert "relations_preserved" in names


def test_broken_delta_compat_detected():
    # swapping the b and c coproducts preserves the relations (the scalings
    # are untouched) but breaks the coproduct compatibility
    P = qm2_presentation()
    H = HomBialgebra(P, DELTA)
    endo = {"a": {"a": 1}, "b": {"c": 1}, "c": {"b": 1}, "d": {"d": 1}}
    rep = verify_morphism(endo, H)
    assert not rep.passed


def test_twist_rejects_non_morphism():
    bad = dict(ALPHA)
    bad["c"] = {"c": 1}
    with pytest.raises(MorphismError):
        twist_hom_bialgebra(plain(), bad)


def test_twist_requires_untwisted_base():
    H = twisted()
    with pytest.raises(Exception):
        twist_hom_bialgebra(H, ALPHA)


# axiom suite -------------------------------------------------------------------


def test_plain_instance_passes_degree_2():
    rep = verify_hom_bialgebra(plain(), 2)
    assert rep.passed, rep.to_json()


def test_twisted_instance_passes_degree_2():
    rep = verify_hom_bialgebra(twisted(), 2)
    assert rep.passed, rep.to_json()


def test_identity_twist_equals_plain_verification():
    P = qm2_presentation()
    H = HomBialgebra(P, DELTA)
    ident = {g: {g: 1} for g in "abcd"}
    T = twist_hom_bialgebra(H, ident)
    r1 = verify_hom_bialgebra(H, 2)
    r2 = verify_hom_bialgebra(T, 2)
    assert [(c.name, c.status) for c in r1._sorted()] == \
        [(c.name, c.status) for c in r2._sorted()]


def test_nonidentity_alpha_without_twist_breaks_hom_associativity():
    # plain product with a nontrivial twisting map violates the twisted
    # associativity shape: alpha(b)(1*1) != (b*1)alpha(1)
    P = qm2_presentation()
    H = HomBialgebra(P, DELTA, ALPHA, twisted=False)
    rep = verify_hom_bialgebra(H, 1)
    failed = {c.name for c in rep.failures()}
    assert "hom_associativity" in failed


def test_untwisted_coproduct_with_twisted_product_fails_coassociativity():
    # emulate a structure whose coproduct was left untwisted: compose the
    # coproduct table with the inverse scaling so delta(alpha(x)) = delta(x)
    P = qm2_presentation()
    delta_table = {
        "a": {("a", "a"): 1, ("b", "c"): 1},
        "b": {("a", "b"): "lambda^-1", ("b", "d"): "lambda^-1"},
        "c": {("c", "a"): "lambda", ("d", "c"): "lambda"},
        "d": {("c", "b"): 1, ("d", "d"): 1},
    }
    H = HomBialgebra(P, delta_table, ALPHA, twisted=True)
    rep = verify_hom_bialgebra(H, 1)
    failed = {c.name for c in rep.failures()}
    assert "hom_coassociativity" in failed


# serialization ---------------------------------------------------------------


def test_json_round_trip():
    H = twisted()
    data = H.to_json()
    back = HomBialgebra.from_json(data, F, name="qm2_t")
    assert back.to_json() == data
    P = back.pres
    assert back.delta(P.gen("b")) == P.tensor(
        2, {("a", "b"): "lambda", ("b", "d"): "lambda"})


def test_report_shape():
    rep = verify_hom_bialgebra(plain(), 1)
    data = rep.to_json()
    assert data["passed"] is True
    names = [c["name"] for c in data["checks"]]
    assert names == sorted(names)
    assert {"multiplicativity", "hom_associativity", "comultiplicativity",
            "hom_coassociativity", "product_coproduct_compatibility"} == \
        set(names)
    assert all(c["wall_time"] is None for c in data["checks"])
    timed_data = rep.to_json(timings=True)
    assert all(isinstance(c["wall_time"], float) for c in timed_data["checks"])
