import random
from fractions import Fraction

import pytest

from rclkit.category import (FinLinCategory, Morphism, ObjectExpr, Subcategory,
                             compose, hom_dim_expr, hom_space, ideal_subspace,
                             is_isomorphic, unflatten, validate_category)
from rclkit.errors import PresentationError
from rclkit.field import QQ


def test_validate_single_generator():
    cat = FinLinCategory(QQ, ["G"], {("G", "G"): ("e",)},
                         {("G", "G", "G"): [[(Fraction(1),)]]},
                         {"G": (Fraction(1),)})
    assert validate_category(cat).ok_all


def test_validate_fixture(ws_a2):
    assert validate_category(ws_a2.categories["A2"]).ok_all


def test_corrupted_composition_fails(ws_a2):
    cat = ws_a2.categories["A2"]
    comp = {k: [[list(vec) for vec in row] for row in v] for k, v in cat.comp.items()}
    # soc then the P1 endomorphism should still be soc; corrupt it
    comp[("S2", "P1", "P1")][0][0] = (Fraction(2),)
    bad = FinLinCategory(cat.field, cat.generators, cat.hom_bases, comp,
                         cat.identities, name="bad")
    rep = validate_category(bad)
    assert not rep.ok_all
    assert rep.has_failures("identity") or rep.has_failures("associativity")


def test_hom_space_dims(ws_a2):
    cat = ws_a2.categories["A2"]
    assert hom_space(cat, cat.obj("P1"), cat.obj("S1"))["dimension"] == 1
    assert hom_space(cat, cat.obj("S1"), cat.obj("S2"))["dimension"] == 0
    assert hom_space(cat, ObjectExpr(()), cat.obj("S2"))["dimension"] == 0


def test_hom_additivity(ws_a2):
    cat = ws_a2.categories["A2"]
    a = cat.obj("P1", "S2")
    ap = cat.obj("S1")
    b = cat.obj("P1", "S1")
    lhs = hom_space(cat, ObjectExpr(a.summands + ap.summands), b)["dimension"]
    assert lhs == hom_space(cat, a, b)["dimension"] + hom_space(cat, ap, b)["dimension"]


def test_compose_identity_law(ws_a2):
    cat = ws_a2.categories["A2"]
    soc = Morphism.basis_element(cat, "S2", "P1", 0)
    assert compose(Morphism.identity(cat, cat.obj("P1")), soc).equal(soc)
    assert compose(soc, Morphism.identity(cat, cat.obj("S2"))).equal(soc)


def test_compose_socle_projection_vanishes(ws_a2):
    cat = ws_a2.categories["A2"]
    soc = Morphism.basis_element(cat, "S2", "P1", 0)
    top = Morphism.basis_element(cat, "P1", "S1", 0)
    assert compose(top, soc).is_zero()


def test_compose_boundary_mismatch(ws_a2):
    cat = ws_a2.categories["A2"]
    soc = Morphism.basis_element(cat, "S2", "P1", 0)
    with pytest.raises(PresentationError):
        compose(soc, soc)


def test_block_composition_is_matrix_product(ws_a2):
    cat = ws_a2.categories["A2"]
    rng = random.Random(5)

    def rand_mor(a, b):
        d = hom_dim_expr(cat, a, b)
        return unflatten(cat, a, b, [Fraction(rng.randint(-3, 3)) for _ in range(d)])

    a = cat.obj("S2", "P1")
    b = cat.obj("P1", "P1", "S1")
    c = cat.obj("S1", "S2")
    d = cat.obj("P1",)
    for _ in range(25):
        f = rand_mor(a, b)
        g = rand_mor(b, c)
        h = rand_mor(c, d)
        assert compose(h, compose(g, f)).equal(compose(compose(h, g), f))


def test_is_isomorphic(ws_a2):
    cat = ws_a2.categories["A2"]
    assert is_isomorphic(cat, cat.obj("S1"), cat.obj("S1")) is True
    assert is_isomorphic(cat, cat.obj("S1"), cat.obj("P1")) is False
    assert is_isomorphic(cat, cat.obj("P1", "P1"), cat.obj("P1", "P1")) is True
    # permuted listing of the same multiset
    assert is_isomorphic(cat, cat.obj("S1", "P1"), cat.obj("P1", "S1")) is True


def test_is_isomorphic_unknown_in_char_p():
    from rclkit.field import PrimeField
    from rclkit.fixture_gen import build_fix_a2
    ws = build_fix_a2(PrimeField(101))
    cat = ws.categories["A2"]
    assert is_isomorphic(cat, cat.obj("S1"), cat.obj("P1")) is None
    assert is_isomorphic(cat, cat.obj("S1"), cat.obj("S1")) is True


def test_ideal_subspace_examples(ws_a2):
    cat = ws_a2.categories["A2"]
    p1 = cat.obj("P1")
    full_end = ideal_subspace(cat, p1, p1, Subcategory(cat, ["P1"]))
    assert full_end.dim == 1
    through_s2 = ideal_subspace(cat, p1, p1, Subcategory(cat, ["S2"]))
    assert through_s2.dim == 0
    empty = ideal_subspace(cat, p1, p1, Subcategory(cat, []))
    assert empty.dim == 0


def test_subcategory_membership(ws_a2):
    cat = ws_a2.categories["A2"]
    sub = Subcategory(cat, ["S2"])
    assert sub.contains_object(ObjectExpr(()))
    assert sub.contains_object(cat.obj("S2", "S2"))
    assert not sub.contains_object(cat.obj("S2", "P1"))
    with pytest.raises(PresentationError):
        Subcategory(cat, ["nope"])
