"""Additive functors between finite presentations, and natural transformations."""

from __future__ import annotations

from .category import (FinLinCategory, Morphism, ObjectExpr, Subcategory,
                       basis_morphisms, compose, hom_dim_expr, unflatten)
from .errors import PresentationError
from .linalg import Mat
from .report import Report


class LinearFunctor:
    """Presented by generator images and linear maps on generator Hom spaces.

    hom_maps[(g,h)] is the matrix of Hom(g,h) -> Hom(F g, F h) in the flat
    coordinates of the target Hom space; keys with a zero-dimensional source
    or target space may be omitted.
    """

    def __init__(self, source: FinLinCategory, target: FinLinCategory,
                 object_map, hom_maps, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self.object_map = {}
        for g in source.generators:
            if g not in object_map:
                raise PresentationError("functor %s: no image for generator %s" % (name, g))
            img = object_map[g]
            if not isinstance(img, ObjectExpr):
                img = ObjectExpr(img)
            for s in img.summands:
                if s not in set(target.generators):
                    raise PresentationError("functor %s: image summand %s unknown" % (name, s))
            self.object_map[g] = img
        self.hom_maps = {}
        for g in source.generators:
            for h in source.generators:
                d = source.hom_dim(g, h)
                dim_img = hom_dim_expr(target, self.object_map[g], self.object_map[h])
                mat = hom_maps.get((g, h))
                if mat is None:
                    mat = Mat.zeros(target.field, dim_img, d)
                if mat.rows != dim_img or mat.cols != d:
                    raise PresentationError(
                        "functor %s: hom map (%s,%s) is %dx%d, expected %dx%d"
                        % (name, g, h, mat.rows, mat.cols, dim_img, d))
                self.hom_maps[(g, h)] = mat

    def apply_obj(self, obj: ObjectExpr) -> ObjectExpr:
        out = []
        for g in obj.summands:
            out.extend(self.object_map[g].summands)
        return ObjectExpr(out)

    def apply(self, mor: Morphism) -> Morphism:
        if mor.cat is not self.source:
            raise PresentationError("functor %s applied to foreign morphism" % self.name)
        src_img = self.apply_obj(mor.source)
        tgt_img = self.apply_obj(mor.target)
        F = self.target.field
        # Offsets of each original summand inside the image tuple.
        soff, pos = [], 0
        for g in mor.source.summands:
            soff.append(pos)
            pos += len(self.object_map[g].summands)
        toff, pos = [], 0
        for h in mor.target.summands:
            toff.append(pos)
            pos += len(self.object_map[h].summands)
        blocks = [[list((F.zero,) * self.target.hom_dim(s, t)) for s in src_img.summands]
                  for t in tgt_img.summands]
        for i, h in enumerate(mor.target.summands):
            for j, g in enumerate(mor.source.summands):
                vec = mor.blocks[i][j]
                if not vec:
                    continue
                img_coords = self.hom_maps[(g, h)].apply(vec)
                local = unflatten(self.target, self.object_map[g], self.object_map[h], img_coords)
                for li, _ in enumerate(local.target.summands):
                    for lj, _ in enumerate(local.source.summands):
                        blocks[toff[i] + li][soff[j] + lj] = list(local.blocks[li][lj])
        return Morphism(self.target, src_img, tgt_img,
                        [[tuple(v) for v in row] for row in blocks])

    def __repr__(self):
        return "LinearFunctor(%s: %s -> %s)" % (self.name or "?",
                                                self.source.name, self.target.name)


def identity_functor(cat: FinLinCategory) -> LinearFunctor:
    hom_maps = {}
    for g in cat.generators:
        for h in cat.generators:
            d = cat.hom_dim(g, h)
            if d:
                hom_maps[(g, h)] = Mat.identity(cat.field, d)
    return LinearFunctor(cat, cat, {g: ObjectExpr((g,)) for g in cat.generators},
                         hom_maps, name="id")


def compose_functors(outer: LinearFunctor, inner: LinearFunctor, name: str = "") -> LinearFunctor:
    """outer o inner (apply inner first)."""
    if inner.target is not outer.source:
        raise PresentationError("functor composition boundary mismatch")
    object_map = {g: outer.apply_obj(inner.object_map[g]) for g in inner.source.generators}
    hom_maps = {}
    for g in inner.source.generators:
        for h in inner.source.generators:
            d = inner.source.hom_dim(g, h)
            if d == 0:
                continue
            cols = []
            for q in range(d):
                f = Morphism.basis_element(inner.source, g, h, q)
                cols.append(outer.apply(inner.apply(f)).flatten())
            rows = hom_dim_expr(outer.target, object_map[g], object_map[h])
            hom_maps[(g, h)] = Mat(outer.target.field, rows, d,
                                   [[cols[q][r] for q in range(d)] for r in range(rows)])
    return LinearFunctor(inner.source, outer.target, object_map, hom_maps,
                         name=name or ("%s*%s" % (outer.name, inner.name)))


def functor_equal(f: LinearFunctor, g: LinearFunctor) -> bool:
    if f.source is not g.source or f.target is not g.target:
        return False
    for gen in f.source.generators:
        if f.object_map[gen].summands != g.object_map[gen].summands:
            return False
    for key, mat in f.hom_maps.items():
        if not mat.__eq__(g.hom_maps[key]):
            return False
    return True


def is_identity_functor(f: LinearFunctor) -> bool:
    return f.source is f.target and functor_equal(f, identity_functor(f.source))


def validate_functor(f: LinearFunctor) -> Report:
    """Identity preservation and F(gf) = F(g)F(f) on all basis pairs."""
    rep = Report()
    src = f.source
    ok_id = True
    for g in src.generators:
        ident = Morphism.identity(src, ObjectExpr((g,)))
        img = f.apply(ident)
        want = Morphism.identity(f.target, f.object_map[g])
        if not img.equal(want):
            ok_id = False
            rep.fail("preserves-identity", "at %s" % g)
    if ok_id:
        rep.ok("preserves-identity")

    ok_comp = True
    for a, b, q1, mor_f in basis_morphisms(src):
        for c in src.generators:
            for q2 in range(src.hom_dim(b, c)):
                mor_g = Morphism.basis_element(src, b, c, q2)
                lhs = f.apply(compose(mor_g, mor_f))
                rhs = compose(f.apply(mor_g), f.apply(mor_f))
                if not lhs.equal(rhs):
                    ok_comp = False
                    rep.fail("preserves-composition",
                             "witness pair (%s.%s, %s.%s)" % (
                                 a, src.basis_names(a, b)[q1],
                                 b, src.basis_names(b, c)[q2]))
    if ok_comp:
        rep.ok("preserves-composition")
    return rep


def image_subcategory(f: LinearFunctor) -> Subcategory:
    gens = set()
    for g in f.source.generators:
        gens |= f.object_map[g].support()
    return Subcategory(f.target, gens)


def kernel_subcategory(f: LinearFunctor) -> Subcategory:
    gens = [g for g in f.source.generators if f.object_map[g].is_zero()]
    return Subcategory(f.source, gens)


def is_full_embedding(f: LinearFunctor) -> bool:
    """Hom maps bijective on every generator pair."""
    from .linalg import rank
    for g in f.source.generators:
        for h in f.source.generators:
            d = f.source.hom_dim(g, h)
            mat = f.hom_maps[(g, h)]
            if mat.rows != d:
                return False
            if d and rank(mat) != d:
                return False
    return True


class NatTransform:
    """Componentwise natural transformation between parallel functors."""

    def __init__(self, from_f: LinearFunctor, to_f: LinearFunctor, components, name: str = ""):
        if from_f.source is not to_f.source or from_f.target is not to_f.target:
            raise PresentationError("natural transformation between non-parallel functors")
        self.from_f = from_f
        self.to_f = to_f
        self.name = name
        self.components = {}
        for g in from_f.source.generators:
            if g not in components:
                raise PresentationError("nat %s: missing component at %s" % (name, g))
            comp = components[g]
            if comp.source.summands != from_f.object_map[g].summands \
                    or comp.target.summands != to_f.object_map[g].summands:
                raise PresentationError("nat %s: component at %s has wrong boundary" % (name, g))
            self.components[g] = comp

    def at(self, obj: ObjectExpr) -> Morphism:
        """Component at a formal sum: block diagonal of generator components."""
        cat = self.from_f.target
        src = self.from_f.apply_obj(obj)
        tgt = self.to_f.apply_obj(obj)
        F = cat.field
        blocks = [[list((F.zero,) * cat.hom_dim(s, t)) for s in src.summands]
                  for t in tgt.summands]
        soff = toff = 0
        for g in obj.summands:
            comp = self.components[g]
            for li in range(len(comp.target.summands)):
                for lj in range(len(comp.source.summands)):
                    blocks[toff + li][soff + lj] = list(comp.blocks[li][lj])
            soff += len(comp.source.summands)
            toff += len(comp.target.summands)
        return Morphism(cat, src, tgt, [[tuple(v) for v in row] for row in blocks])

    def __repr__(self):
        return "NatTransform(%s: %s => %s)" % (self.name or "?",
                                               self.from_f.name, self.to_f.name)


def validate_nat(nt: NatTransform) -> Report:
    """Naturality squares on every basis morphism of the source."""
    rep = Report()
    src = nt.from_f.source
    ok = True
    for a, b, q, f in basis_morphisms(src):
        lhs = compose(nt.to_f.apply(f), nt.components[a])
        rhs = compose(nt.components[b], nt.from_f.apply(f))
        if not lhs.equal(rhs):
            ok = False
            rep.fail("naturality", "at basis %s.%s of Hom(%s,%s)"
                     % (a, src.basis_names(a, b)[q], a, b))
    if ok:
        rep.ok("naturality")
    return rep


def identity_nat(f: LinearFunctor) -> NatTransform:
    comps = {g: Morphism.identity(f.target, f.object_map[g]) for g in f.source.generators}
    return NatTransform(f, f, comps, name="id")


def nat_equal(a: NatTransform, b: NatTransform) -> bool:
    for g in a.from_f.source.generators:
        if not a.components[g].equal(b.components[g]):
            return False
    return True
