import itertools
from dataclasses import replace
from fractions import Fraction

import pytest

from rclkit.category import ObjectExpr, Subcategory
from rclkit.errors import PreconditionError
from rclkit.field import QQ
from rclkit.functor import LinearFunctor, identity_functor
from rclkit.linalg import Mat
from rclkit.recollement import (check_recollement, lift_subcategory_pair,
                                normalize_recollement,
                                quotient_by_left_subcategory,
                                quotient_recollement, restrict_to_subcategory)
from rclkit.adjunction import solve_unit_counit

ALL_SUBSETS = [tuple(c) for k in range(4)
               for c in itertools.combinations(("S1", "S2", "P1"), k)]
HYP_OK = {(), ("S2",), ("S1", "S2", "P1")}


def test_fixture_passes_both_semantics(ws_a2):
    rec = ws_a2.recollements["R"]
    for sem in ("strict", "iso-closed"):
        rep = check_recollement(rec, sem)
        assert rep.ok_all, (sem, [str(e) for e in rep.failures()])


def test_degenerate_identity_recollement(ws_a2):
    """A' = A, A'' = zero category, i functors all the identity."""
    cat = ws_a2.categories["A2"]
    from rclkit.category import FinLinCategory
    zero_cat = FinLinCategory(QQ, [], {}, {}, {}, name="Zero")
    idf = identity_functor(cat)
    adj_id = solve_unit_counit(idf, idf, name="adj")
    to_zero = LinearFunctor(cat, zero_cat,
                            {g: ObjectExpr(()) for g in cat.generators}, {},
                            name="tozero")
    from_zero = LinearFunctor(zero_cat, cat, {}, {}, name="fromzero")
    adj_z1 = solve_unit_counit(from_zero, to_zero, name="z1")
    adj_z2 = solve_unit_counit(to_zero, from_zero, name="z2")
    assert adj_z1 is not None and adj_z2 is not None
    from rclkit.recollement import Recollement
    rec = Recollement(left=cat, middle=cat, right=zero_cat,
                      i_up=adj_id.left, i_lo=adj_id.right, i_bang=adj_id.left,
                      j_bang=adj_z1.left, j_up=adj_z1.right, j_lo=adj_z2.right,
                      adj_i=adj_id,
                      adj_ib=solve_unit_counit(adj_id.right, adj_id.left, name="b"),
                      adj_jb=adj_z1, adj_j=adj_z2)
    rep = check_recollement(rec, "strict")
    assert rep.ok_all, [str(e) for e in rep.failures()]


def test_checker_flags_wrong_embedding(ws_a2):
    """Replacing the closed-part embedding by one landing on S1 breaks the
    image/kernel condition."""
    rec = ws_a2.recollements["R"]
    modkl = ws_a2.categories["ModKL"]
    cat = ws_a2.categories["A2"]
    il_bad = LinearFunctor(modkl, cat, {"V": ObjectExpr(("S1",))},
                           {("V", "V"): Mat(QQ, 1, 1, [[Fraction(1)]])},
                           name="il_bad")
    mutant = replace(rec, i_lo=il_bad)
    rep = check_recollement(mutant, "strict")
    assert not rep.ok_all
    r3 = [e for e in rep.entries if e.key == "r3"][0]
    assert r3.status == "fail"
    assert "S1" in r3.witness and "S2" in r3.witness


def test_normalization_is_noop_on_strict_fixture(ws_a2):
    rec = ws_a2.recollements["R"]
    out, rep = normalize_recollement(rec)
    assert out.normalized
    assert any("already strict" in (e.witness or "") for e in rep.entries)
    assert out.i_up is rec.i_up and out.j_up is rec.j_up


def test_restrict_exhaustive(ws_a2):
    rec = ws_a2.recollements["R"]
    cat = ws_a2.categories["A2"]
    for sub in ALL_SUBSETS:
        x = Subcategory(cat, sub)
        if sub in HYP_OK:
            out, rep = restrict_to_subcategory(rec, x)
            assert rep.ok_all, (sub, [str(e) for e in rep.failures()])
        else:
            with pytest.raises(PreconditionError):
                restrict_to_subcategory(rec, x)


def test_restrict_s2_shape(ws_a2):
    rec = ws_a2.recollements["R"]
    cat = ws_a2.categories["A2"]
    out, rep = restrict_to_subcategory(rec, Subcategory(cat, ["S2"]))
    assert out.middle.generators == ("S2",)
    assert out.left.generators == ("V",)
    assert out.right.generators == ()


def test_quotient_recollement_iff_strict(ws_a2):
    rec = ws_a2.recollements["R"]
    cat = ws_a2.categories["A2"]
    ker = {"S2"}
    for sub in ALL_SUBSETS:
        if sub not in HYP_OK:
            continue
        x = Subcategory(cat, sub)
        diagram, rep = quotient_recollement(rec, x, "strict")
        predicate = set(sub) <= ker
        assert rep.ok_all == predicate, (sub, [str(e) for e in rep.failures()])
        assert not rep.has_failures("iff-consistency")


def test_quotient_recollement_iso_divergence(ws_a2):
    """Documented divergence: collapsing everything passes the iso-closed
    reading while the membership predicate is false."""
    rec = ws_a2.recollements["R"]
    cat = ws_a2.categories["A2"]
    x = Subcategory(cat, ["S1", "S2", "P1"])
    diagram, rep = quotient_recollement(rec, x, "iso-closed")
    assert rep.ok_all
    pred = [e for e in rep.entries if e.key == "predicate.x-in-ker-j_up"][0]
    assert pred.witness == "false"


def test_quotient_recollement_shapes(ws_a2):
    rec = ws_a2.recollements["R"]
    cat = ws_a2.categories["A2"]
    diagram, rep = quotient_recollement(rec, Subcategory(cat, ["S2"]), "strict")
    assert rep.ok_all
    assert diagram.q_left.survivors == ()           # mod k / everything
    assert diagram.q_mid.survivors == ("S1", "P1")
    assert diagram.q_right.survivors == ("W",)
    assert diagram.rec.middle.hom_dim("P1", "S1") == 1


def test_lift_subcategory_pair(ws_a2):
    rec = ws_a2.recollements["R"]
    modkl = ws_a2.categories["ModKL"]
    modkr = ws_a2.categories["ModKR"]
    x, restricted, rep = lift_subcategory_pair(
        rec, Subcategory(modkl, ["V"]), Subcategory(modkr, []))
    assert x.members == ("S2",)
    assert rep.ok_all

    x, restricted, rep = lift_subcategory_pair(
        rec, Subcategory(modkl, ["V"]), Subcategory(modkr, ["W"]))
    assert x.members == ("S1", "S2", "P1")
    assert rep.ok_all

    x, restricted, rep = lift_subcategory_pair(
        rec, Subcategory(modkl, []), Subcategory(modkr, []))
    assert x.members == ()
    assert rep.ok_all
    assert restricted.middle.generators == ()


def test_left_quotient_all_subsets(ws_a2):
    rec = ws_a2.recollements["R"]
    modkl = ws_a2.categories["ModKL"]
    for sub in ((), ("V",)):
        diagram, rep = quotient_by_left_subcategory(rec, Subcategory(modkl, sub))
        assert rep.ok_all, (sub, [str(e) for e in rep.failures()])


def test_left_quotient_on_product(ws_prod):
    rec = ws_prod.recollements["R"]
    cl = ws_prod.categories["CL"]
    diagram, rep = quotient_by_left_subcategory(rec, Subcategory(cl, ["L.M2"]))
    assert rep.ok_all, [str(e) for e in rep.failures()]
    assert diagram.q_mid.survivors == ("C1.M1", "C2.M1", "C2.M2")
    assert diagram.q_left.survivors == ("L.M1",)
    assert diagram.q_right.survivors == ("R.M1", "R.M2")
