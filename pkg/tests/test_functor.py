from fractions import Fraction

from rclkit.category import Morphism, ObjectExpr
from rclkit.field import QQ
from rclkit.functor import (LinearFunctor, compose_functors, identity_functor,
                            image_subcategory, is_full_embedding,
                            kernel_subcategory, validate_functor)
from rclkit.linalg import Mat


def test_identity_functor_valid(ws_a2):
    idf = identity_functor(ws_a2.categories["A2"])
    assert validate_functor(idf).ok_all
    assert image_subcategory(idf).members == ("S1", "S2", "P1")
    assert kernel_subcategory(idf).members == ()


def test_restriction_functor_valid(ws_a2):
    ju = ws_a2.functors["ju"]
    assert validate_functor(ju).ok_all
    assert ju.object_map["S1"].summands == ("W",)
    assert ju.object_map["S2"].is_zero()
    assert kernel_subcategory(ju).members == ("S2",)


def test_corrupted_hom_map_fails(ws_a2):
    ib = ws_a2.functors["ib"]
    hom_maps = dict(ib.hom_maps)
    hom_maps[("S2", "S2")] = Mat(QQ, 1, 1, [[Fraction(2)]])
    bad = LinearFunctor(ib.source, ib.target, ib.object_map, hom_maps, name="bad")
    rep = validate_functor(bad)
    assert not rep.ok_all
    assert any("S2" in (e.witness or "") for e in rep.failures())


def test_image_of_embedding(ws_a2):
    assert image_subcategory(ws_a2.functors["il"]).members == ("S2",)


def test_zero_functor_kernel_and_image(ws_a2):
    cat = ws_a2.categories["A2"]
    tgt = ws_a2.categories["ModKL"]
    zero = LinearFunctor(cat, tgt, {g: ObjectExpr(()) for g in cat.generators},
                         {}, name="zero")
    assert validate_functor(zero).ok_all
    assert image_subcategory(zero).members == ()
    assert kernel_subcategory(zero).members == cat.generators


def test_kernel_image_monotone_under_composition(ws_a2):
    ju = ws_a2.functors["ju"]
    jl = ws_a2.functors["jl"]
    comp = compose_functors(jl, ju)
    assert set(kernel_subcategory(ju).members) <= set(kernel_subcategory(comp).members)
    assert set(image_subcategory(comp).members) <= set(image_subcategory(jl).members)


def test_functor_application_blockwise(ws_a2):
    cat = ws_a2.categories["A2"]
    ju = ws_a2.functors["ju"]
    obj = cat.obj("P1", "S2", "S1")
    assert ju.apply_obj(obj).summands == ("W", "W")
    ident = Morphism.identity(cat, obj)
    assert ju.apply(ident).equal(Morphism.identity(ju.target, ju.apply_obj(obj)))


def test_full_embedding_detection(ws_a2):
    assert is_full_embedding(ws_a2.functors["il"])
    assert is_full_embedding(ws_a2.functors["jb"])
    assert not is_full_embedding(ws_a2.functors["ju"])
