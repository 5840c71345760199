from fractions import Fraction

import pytest

from rclkit.category import Morphism, ObjectExpr, Subcategory, compose
from rclkit.errors import PreconditionError
from rclkit.field import QQ
from rclkit.mutation import (MutationData, check_mutation_pair,
                             image_mutation_pair, induced_exact_functor,
                             make_D_monic, mutation_shift, standard_triangle,
                             verify_quotient_triangulation)
from rclkit.triangulated import Triangle, identity_triangle


def test_check_mutation_pair_fixture(ws_stab3):
    assert check_mutation_pair(ws_stab3.mutations["MU"]).ok_all


def test_check_mutation_pair_empty_d_fails(ws_stab3):
    """With nothing to approximate through, the only candidate triangle for
    M1 ends at its shift M2, which falls outside Z = add(M1)."""
    tri = ws_stab3.triangulated["TC"]
    cat = tri.cat
    z = Subcategory(cat, ["M1"])
    d = Subcategory(cat, [])
    ident = identity_triangle(tri, "M1")
    rot = tri.rotate(ident)  # (M1, 0, M2, 0, 0, -1)
    m = MutationData(tri, z, d, {"M1": rot})
    rep = check_mutation_pair(m)
    assert not rep.ok_all
    assert rep.has_failures("condition1.M1")


def test_check_mutation_pair_vacuous(ws_stab3):
    tri = ws_stab3.triangulated["TC"]
    cat = tri.cat
    m = MutationData(tri, Subcategory(cat, []), Subcategory(cat, []), {})
    assert check_mutation_pair(m).ok_all


def test_sigma_object_and_identity(ws_stab3):
    m = ws_stab3.mutations["MU"]
    assert m.quotient.survivors == ("M1",)
    assert m.sigma.object_map["M1"].summands == ("M1",)
    pres = m.quotient.presentation
    ident = Morphism.identity(pres, pres.obj("M1"))
    assert mutation_shift(m, ident).equal(ident)
    zero = ident.scale(Fraction(0))
    assert mutation_shift(m, zero).is_zero()


def test_mutation_shift_ladder_freedom(ws_stab3):
    """Different valid ladder solutions give the same residue class."""
    m = ws_stab3.mutations["MU"]
    cat = m.tri.cat
    f = Morphism.identity(cat, cat.obj("M1"))
    d0, z0 = m._solve_shift("M1", "M1", f)
    base = m.to_quotient(z0)
    for null in m.shift_nullspace("M1", "M1"):
        d1 = d0.add(null)
        _, z1 = m._solve_shift("M1", "M1", f, d_override=d1)
        assert m.to_quotient(z1).equal(base)


def test_standard_triangle_identity(ws_stab3):
    m = ws_stab3.mutations["MU"]
    cat = m.tri.cat
    one = Morphism.identity(cat, cat.obj("M1"))
    monic = make_D_monic(m, one)
    st = standard_triangle(m, monic)
    assert st.qx.summands == ("M1",)
    assert compose(st.qg, st.qf).is_zero()
    assert compose(st.qz, st.qg).is_zero()


def test_standard_triangle_identity_witness(ws_stab3):
    """The identity with its identity-triangle witness yields (X, X, 0)."""
    m = ws_stab3.mutations["MU"]
    tri = m.tri
    one = Morphism.identity(tri.cat, tri.cat.obj("M1"))
    st = standard_triangle(m, one, witness=identity_triangle(tri, "M1"))
    assert st.qx.summands == ("M1",)
    assert st.qy.summands == ("M1",)
    assert st.qz_obj.is_zero()
    assert st.qf.equal(Morphism.identity(m.quotient.presentation,
                                         m.quotient.presentation.obj("M1")))


def test_standard_triangle_socle(ws_stab3):
    """The socle map is monic-side; in the quotient its triangle reads
    (M1, 0, M1) with an invertible connecting class."""
    m = ws_stab3.mutations["MU"]
    cat = m.tri.cat
    soc = Morphism.basis_element(cat, "M1", "M2", 0)
    st = standard_triangle(m, soc)
    assert st.qy.is_zero()
    assert st.qz_obj.summands == ("M1",)
    from rclkit.adjunction import morphism_inverse
    assert morphism_inverse(st.qz) is not None


def test_standard_triangle_rejects_non_monic(ws_stab3):
    m = ws_stab3.mutations["MU"]
    cat = m.tri.cat
    zero_to_zero = Morphism.zero(cat, cat.obj("M1"), ObjectExpr(()))
    with pytest.raises(PreconditionError) as exc:
        standard_triangle(m, zero_to_zero)
    assert "M2" in exc.value.witness


def test_standard_triangle_rejects_bad_witness(ws_stab3):
    m = ws_stab3.mutations["MU"]
    cat = m.tri.cat
    soc = Morphism.basis_element(cat, "M1", "M2", 0)
    bogus = Triangle(cat.obj("M1"), cat.obj("M2"), cat.obj("M2"),
                     soc, Morphism.zero(cat, cat.obj("M2"), cat.obj("M2")),
                     Morphism.zero(cat, cat.obj("M2"), cat.obj("M2")),
                     name="bogus")
    with pytest.raises(PreconditionError):
        standard_triangle(m, soc, witness=bogus)


def test_verify_quotient_triangulation(ws_stab3):
    rep = verify_quotient_triangulation(ws_stab3.mutations["MU"])
    assert rep.ok_all
    keys = {e.key: e.status for e in rep.entries}
    assert keys.get("tr2") == "not-checked"
    assert keys.get("tr4") == "not-checked"


def test_verify_flags_corrupted_beta(ws_stab3):
    mu = ws_stab3.mutations["MU"]
    tri = mu.tri
    cat = tri.cat
    t1 = mu.fixed["M1"]
    bad_fixed = dict(mu.fixed)
    bad_fixed["M1"] = Triangle(t1.x, t1.y, t1.z, t1.f,
                               t1.g.scale(Fraction(0)), t1.h, name="bad")
    m2 = MutationData(tri, mu.z, mu.d, bad_fixed)
    assert not check_mutation_pair(m2).ok_all
    rep = verify_quotient_triangulation(m2)
    assert not rep.ok_all


def test_image_mutation_pair_identity(ws_stab3):
    from rclkit.mutation import ExactFunctorData
    from rclkit.functor import identity_functor
    tri = ws_stab3.triangulated["TC"]
    e = ExactFunctorData(identity_functor(tri.cat), tri, tri, None, name="id")
    m2, rep = image_mutation_pair(e, ws_stab3.mutations["MU"])
    assert rep.ok_all, [str(x) for x in rep.failures()]
    assert m2.z.members == ("M1", "M2")
    assert m2.d.members == ("M2",)


def test_image_mutation_pair_projection(ws_prod):
    e = ws_prod.exactdata["ex_ju"]
    m2, rep = image_mutation_pair(e, ws_prod.mutations["MU"])
    assert rep.ok_all, [str(x) for x in rep.failures()]
    assert m2.d.members == ()
    assert set(m2.z.members) == {"R.M1", "R.M2"}
    assert check_mutation_pair(m2).ok_all


def test_image_mutation_pair_rejects_non_full(ws_prod):
    """Corrupt a hom map so the functor is no longer full."""
    from rclkit.functor import LinearFunctor
    from rclkit.linalg import Mat
    from rclkit.mutation import ExactFunctorData
    ju = ws_prod.functors["ju"]
    hom_maps = dict(ju.hom_maps)
    hom_maps[("C2.M1", "C2.M2")] = Mat.zeros(QQ, 1, 1)
    bad = LinearFunctor(ju.source, ju.target, ju.object_map, hom_maps, name="bad")
    e = ExactFunctorData(bad, ws_prod.triangulated["TRI_C"],
                         ws_prod.triangulated["TRI_R"], None, name="bad")
    m2, rep = image_mutation_pair(e, ws_prod.mutations["MU"])
    assert m2 is None
    assert not rep.ok_all


def test_induced_exact_functor_identity(ws_stab3):
    from rclkit.mutation import ExactFunctorData
    from rclkit.functor import identity_functor
    tri = ws_stab3.triangulated["TC"]
    m = ws_stab3.mutations["MU"]
    verify_quotient_triangulation(m)  # registers standard triangles
    e = ExactFunctorData(identity_functor(tri.cat), tri, tri, None, name="id")
    tilde, rep = induced_exact_functor(e, m, m)
    assert rep.ok_all, [str(x) for x in rep.failures()]
    assert tilde.object_map["M1"].summands == ("M1",)
