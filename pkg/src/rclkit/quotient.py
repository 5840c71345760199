"""Morphism ideals, additive quotient categories, and induced data.

The ideal of morphisms factoring through a subcategory is computed per
generator pair; the quotient is re-presented on the generators whose identity
survives, with canonical echelon-complement coset representatives so that
quotient data is reproducible across runs.
"""

from __future__ import annotations

from .category import (FinLinCategory, Morphism, ObjectExpr, Subcategory,
                       compose, ideal_subspace, unflatten, validate_category)
from .errors import PreconditionError
from .functor import LinearFunctor, compose_functors
from .adjunction import Adjunction, hom_bijection, make_adjunction
from .linalg import Mat, SubspaceBasis
from .report import Report


class MorphismIdeal:
    """The two-sided ideal [X](a,b) of morphisms factoring through X."""

    def __init__(self, parent: FinLinCategory, through: Subcategory):
        if through.parent is not parent:
            raise PreconditionError("subcategory does not live in the parent category")
        self.parent = parent
        self.through = through
        self.table = {}
        for a in parent.generators:
            for b in parent.generators:
                self.table[(a, b)] = ideal_subspace(
                    parent, ObjectExpr((a,)), ObjectExpr((b,)), through)

    def subspace(self, a: str, b: str) -> SubspaceBasis:
        return self.table[(a, b)]

    def contains(self, mor: Morphism) -> bool:
        """Membership for a morphism between single generators."""
        a = mor.source.summands[0] if mor.source.summands else None
        b = mor.target.summands[0] if mor.target.summands else None
        if a is None or b is None:
            return True
        return self.table[(a, b)].contains_vector(mor.flatten())

    def validate(self) -> Report:
        """Two-sidedness on basis triples and identities of members."""
        rep = Report()
        cat = self.parent
        ok = True
        for (a, b), sub in self.table.items():
            for vec in sub.rows:
                w = unflatten(cat, ObjectExpr((a,)), ObjectExpr((b,)), vec)
                for c in cat.generators:
                    for p in range(cat.hom_dim(b, c)):
                        u = Morphism.basis_element(cat, b, c, p)
                        if not self.table[(a, c)].contains_vector(compose(u, w).flatten()):
                            ok = False
                            rep.fail("ideal.post-compose",
                                     "(%s,%s) composed into Hom(%s,%s)" % (a, b, a, c))
                    for p in range(cat.hom_dim(c, a)):
                        v = Morphism.basis_element(cat, c, a, p)
                        if not self.table[(c, b)].contains_vector(compose(w, v).flatten()):
                            ok = False
                            rep.fail("ideal.pre-compose",
                                     "(%s,%s) composed into Hom(%s,%s)" % (a, b, c, b))
        if ok:
            rep.ok("ideal.two-sided")
        ok = True
        for m in self.through.members:
            if not self.table[(m, m)].contains_vector(tuple(cat.identities[m])):
                ok = False
                rep.fail("ideal.member-identity", m)
        if ok:
            rep.ok("ideal.member-identity")
        return rep


class QuotientCategory:
    """Additive quotient re-presented on surviving generators.

    For each pair of survivors the quotient Hom basis is the canonical
    echelon complement of the ideal, named after the surviving parent basis
    elements; `section` lifts quotient coordinates to parent coordinates and
    `reduction` projects parent coordinates to quotient coordinates.
    """

    def __init__(self, parent: FinLinCategory, x: Subcategory, name: str = ""):
        self.parent = parent
        self.ideal = MorphismIdeal(parent, x)
        F = parent.field

        survivors = []
        for g in parent.generators:
            ident = tuple(parent.identities[g])
            if not self.ideal.subspace(g, g).contains_vector(ident):
                survivors.append(g)
        self.survivors = tuple(survivors)
        surv_set = set(survivors)

        self.section = {}
        self.reduction = {}
        hom_bases, comp, identities = {}, {}, {}
        for a in survivors:
            for b in survivors:
                d = parent.hom_dim(a, b)
                sub = self.ideal.subspace(a, b)
                free = sub.complement_coords()
                names = tuple(parent.basis_names(a, b)[i] for i in free)
                if names:
                    hom_bases[(a, b)] = names
                sec_cols = []
                for i in free:
                    col = [F.zero] * d
                    col[i] = F.one
                    sec_cols.append(col)
                self.section[(a, b)] = Mat(F, d, len(free),
                                           [[sec_cols[q][r] for q in range(len(free))]
                                            for r in range(d)])
                red_rows = []
                for r in range(d):
                    unit = [F.zero] * d
                    unit[r] = F.one
                    red_rows.append(sub.coset_coords(unit))
                self.reduction[(a, b)] = Mat(F, len(free), d,
                                             [[red_rows[c][r] for c in range(d)]
                                              for r in range(len(free))]) \
                    if d else Mat(F, len(free), 0, [[] for _ in range(len(free))])
        for a in survivors:
            identities[a] = self.reduce_coords(a, a, parent.identities[a])
        for a in survivors:
            for b in survivors:
                for c in survivors:
                    da = len(hom_bases.get((a, b), ()))
                    db = len(hom_bases.get((b, c), ()))
                    if da == 0 or db == 0:
                        continue
                    table = []
                    for p in range(db):
                        row = []
                        for q in range(da):
                            gp = self.lift_basis(b, c, p)
                            fq = self.lift_basis(a, b, q)
                            row.append(self.reduce_coords(a, c, compose(gp, fq).flatten()))
                        table.append(row)
                    comp[(a, b, c)] = table

        self.presentation = FinLinCategory(
            F, survivors, hom_bases, comp, identities,
            name=name or (parent.name + "/" + "+".join(x.members) if x.members
                          else parent.name + "/0"),
            assume_local=parent.assume_local)

        proj_objects = {}
        proj_maps = {}
        for g in parent.generators:
            proj_objects[g] = ObjectExpr((g,)) if g in surv_set else ObjectExpr(())
        for g in parent.generators:
            for h in parent.generators:
                d = parent.hom_dim(g, h)
                if d == 0:
                    continue
                if g in surv_set and h in surv_set:
                    proj_maps[(g, h)] = self.reduction[(g, h)]
                else:
                    proj_maps[(g, h)] = Mat.zeros(F, 0, d)
        self.projection = LinearFunctor(parent, self.presentation, proj_objects,
                                        proj_maps, name="Q")

    def reduce_coords(self, a: str, b: str, parent_coords):
        return tuple(self.reduction[(a, b)].apply(tuple(parent_coords)))

    def lift_basis(self, a: str, b: str, q: int) -> Morphism:
        """Parent representative of the q-th quotient basis element."""
        col = self.section[(a, b)].col(q)
        return unflatten(self.parent, ObjectExpr((a,)), ObjectExpr((b,)), col)

    def project_object(self, obj: ObjectExpr) -> ObjectExpr:
        surv = set(self.survivors)
        return ObjectExpr(tuple(g for g in obj.summands if g in surv))

    def project_morphism(self, mor: Morphism) -> Morphism:
        """Residue class of a parent morphism, between projected objects."""
        surv = set(self.survivors)
        src = self.project_object(mor.source)
        tgt = self.project_object(mor.target)
        keep_j = [j for j, g in enumerate(mor.source.summands) if g in surv]
        keep_i = [i for i, h in enumerate(mor.target.summands) if h in surv]
        blocks = []
        for i in keep_i:
            row = []
            for j in keep_j:
                a = mor.source.summands[j]
                b = mor.target.summands[i]
                row.append(self.reduce_coords(a, b, mor.blocks[i][j]))
            blocks.append(row)
        return Morphism(self.presentation, src, tgt, blocks)

    def lift_morphism(self, mor: Morphism) -> Morphism:
        """Canonical parent representative of a quotient morphism (section)."""
        blocks = []
        for i, b in enumerate(mor.target.summands):
            row = []
            for j, a in enumerate(mor.source.summands):
                row.append(tuple(self.section[(a, b)].apply(mor.blocks[i][j])))
            blocks.append(row)
        return Morphism(self.parent, ObjectExpr(mor.source.summands),
                        ObjectExpr(mor.target.summands), blocks)

    def validate(self) -> Report:
        rep = Report()
        rep.merge(self.ideal.validate())
        ok = True
        for a in self.parent.generators:
            for b in self.parent.generators:
                d = self.parent.hom_dim(a, b)
                di = self.ideal.subspace(a, b).dim
                if a in set(self.survivors) and b in set(self.survivors):
                    dq = self.presentation.hom_dim(a, b)
                else:
                    dq = 0
                    if d - di != 0:
                        ok = False
                        rep.fail("quotient.dimension",
                                 "(%s,%s): parent %d, ideal %d but a generator died"
                                 % (a, b, d, di))
                        continue
                if dq != d - di:
                    ok = False
                    rep.fail("quotient.dimension",
                             "(%s,%s): %d != %d - %d" % (a, b, dq, d, di))
        if ok:
            rep.ok("quotient.dimension")
        rep.merge(validate_category(self.presentation), prefix="quotient.")
        return rep


def build_quotient(cat: FinLinCategory, x: Subcategory, name: str = "") -> QuotientCategory:
    return QuotientCategory(cat, x, name=name)


def factor_through_quotient(f: LinearFunctor, q: QuotientCategory,
                            name: str = "") -> LinearFunctor:
    """The unique functor from the quotient with F = (result) o Q.

    Requires F to kill every member generator of the ideal's subcategory.
    """
    if f.source is not q.parent:
        raise PreconditionError("functor does not start at the quotient's parent")
    for m in q.ideal.through.members:
        if not f.object_map[m].is_zero():
            raise PreconditionError("functor does not kill the subcategory",
                                    witness="%s -> %r" % (m, f.object_map[m]))
    object_map = {g: f.object_map[g] for g in q.survivors}
    hom_maps = {}
    for a in q.survivors:
        for b in q.survivors:
            dq = q.presentation.hom_dim(a, b)
            if dq == 0:
                continue
            hom_maps[(a, b)] = f.hom_maps[(a, b)].mul(q.section[(a, b)])
    tilde = LinearFunctor(q.presentation, f.target, object_map, hom_maps,
                          name=name or (f.name + "~"))
    # Killing objects forces killing the ideal; verify on ideal basis vectors.
    for (a, b), sub in q.ideal.table.items():
        for vec in sub.rows:
            img = f.hom_maps[(a, b)].apply(vec)
            if any(not f.target.field.is_zero(x) for x in img):
                raise PreconditionError("functor does not kill the ideal",
                                        witness="pair (%s,%s)" % (a, b))
    return tilde


def induce_functor(f: LinearFunctor, q_src: QuotientCategory,
                   q_tgt: QuotientCategory, name: str = "") -> LinearFunctor:
    """Induced functor between quotients when f maps the source subcategory
    into the target one; satisfies Q' o f = (result) o Q."""
    if f.source is not q_src.parent or f.target is not q_tgt.parent:
        raise PreconditionError("functor boundaries do not match the quotients")
    x_tgt = q_tgt.ideal.through.member_set()
    for m in q_src.ideal.through.members:
        img = f.object_map[m]
        if not img.support() <= x_tgt:
            raise PreconditionError(
                "subcategory containment fails",
                witness="%s maps to %r outside the target subcategory" % (m, img))
    qf = compose_functors(q_tgt.projection, f, name=name or (f.name + "~"))
    return factor_through_quotient(qf, q_src, name=name or (f.name + "~"))


def induce_adjunction(adj: Adjunction, q_src: QuotientCategory,
                      q_tgt: QuotientCategory, name: str = "",
                      left=None, right=None) -> tuple:
    """Induced adjunction between quotients plus the well-definedness audit.

    q_src quotients the source of the left adjoint, q_tgt its target; the
    containment preconditions are those of induce_functor in each direction.
    Prebuilt induced functors may be passed in so callers can share
    instances.  Returns (adjunction, report): the report carries the audit
    that the Hom bijection maps ideal elements into ideal elements, which is
    guaranteed for genuine input and so flags data corruption when it fails.
    """
    rep = Report()
    L, R = adj.left, adj.right
    lt = left if left is not None else induce_functor(L, q_src, q_tgt, name=L.name + "~")
    rt = right if right is not None else induce_functor(R, q_tgt, q_src, name=R.name + "~")
    unit_comps = {}
    for g in q_src.survivors:
        unit_comps[g] = q_src.project_morphism(adj.unit.components[g])
    counit_comps = {}
    for h in q_tgt.survivors:
        counit_comps[h] = q_tgt.project_morphism(adj.counit.components[h])
    induced = make_adjunction(lt, rt, unit_comps, counit_comps,
                              name=name or (adj.name + "~"))

    ok = True
    A = L.source
    for a in A.generators:
        la = L.apply_obj(ObjectExpr((a,)))
        for b in R.source.generators:
            bobj = ObjectExpr((b,))
            ide = ideal_subspace(R.source, la, bobj, q_tgt.ideal.through)
            if ide.dim == 0:
                continue
            fwd, _ = hom_bijection(adj, ObjectExpr((a,)), bobj)
            target_ideal = ideal_subspace(A, ObjectExpr((a,)),
                                          R.apply_obj(bobj), q_src.ideal.through)
            for vec in ide.rows:
                img = fwd.apply(vec)
                if not target_ideal.contains_vector(img):
                    ok = False
                    rep.fail("well-defined",
                             "ideal element of Hom(L %s, %s) maps outside the ideal"
                             % (a, b))
    if ok:
        rep.ok("well-defined")
    return induced, rep
