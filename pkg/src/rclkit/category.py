"""Finite presentations of additive k-linear categories.

A category is presented by a finite list of generator objects (intended to be
the pairwise non-isomorphic indecomposables), a chosen basis for every Hom
space between generators, structure constants for the bilinear composition,
and the coordinates of each identity.  General objects are formal direct sums
of generators; morphisms between sums are block matrices of Hom coordinates.
"""

from __future__ import annotations

from collections import Counter

from .errors import PresentationError
from .linalg import Mat, SubspaceBasis
from .report import Report


class ObjectExpr:
    """A formal finite direct sum of generators; the zero object is ()."""

    __slots__ = ("summands",)

    def __init__(self, summands=()):
        if isinstance(summands, str):
            summands = (summands,)
        self.summands = tuple(summands)

    @classmethod
    def zero(cls):
        return cls(())

    def is_zero(self) -> bool:
        return not self.summands

    def support(self):
        return set(self.summands)

    def multiplicities(self) -> Counter:
        return Counter(self.summands)

    def plus(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr(self.summands + other.summands)

    def __len__(self):
        return len(self.summands)

    def __eq__(self, other):
        # Object equality is multiset equality; block indexing uses .summands.
        return isinstance(other, ObjectExpr) and Counter(self.summands) == Counter(other.summands)

    def __hash__(self):
        return hash(tuple(sorted(self.summands)))

    def __repr__(self):
        return "+".join(self.summands) if self.summands else "0"


class FinLinCategory:
    """Presentation of an additive k-linear category on generator objects."""

    def __init__(self, field, generators, hom_bases, comp, identities,
                 name: str = "", assume_local: bool = False):
        self.field = field
        self.generators = tuple(generators)
        self.name = name
        self.assume_local = assume_local
        self.hom_bases = {}
        for (a, b), names in hom_bases.items():
            if names:
                self.hom_bases[(a, b)] = tuple(names)
        # comp[(a, b, c)][p][q] = coords in Hom(a,c) of (p-th basis of Hom(b,c)) o (q-th of Hom(a,b))
        self.comp = {}
        for key, table in comp.items():
            self.comp[key] = tuple(tuple(tuple(vec) for vec in row) for row in table)
        self.identities = {g: tuple(v) for g, v in identities.items()}
        gen_set = set(self.generators)
        if len(gen_set) != len(self.generators):
            raise PresentationError("duplicate generator names in %r" % (name,))
        for (a, b) in self.hom_bases:
            if a not in gen_set or b not in gen_set:
                raise PresentationError("hom pair (%s,%s) uses unknown generator" % (a, b))
        for g in self.generators:
            if self.hom_dim(g, g) == 0:
                raise PresentationError("generator %s has zero-dimensional End" % (g,))
            if g not in self.identities or len(self.identities[g]) != self.hom_dim(g, g):
                raise PresentationError("generator %s lacks identity coordinates" % (g,))

    def hom_dim(self, a: str, b: str) -> int:
        return len(self.hom_bases.get((a, b), ()))

    def basis_names(self, a: str, b: str):
        return self.hom_bases.get((a, b), ())

    def comp_vec(self, a: str, b: str, c: str, p: int, q: int):
        """Coordinates of (p-th basis of Hom(b,c)) o (q-th basis of Hom(a,b))."""
        table = self.comp.get((a, b, c))
        dim_ac = self.hom_dim(a, c)
        if table is None:
            return (self.field.zero,) * dim_ac
        return table[p][q]

    def obj(self, *gens) -> ObjectExpr:
        for g in gens:
            if g not in set(self.generators):
                raise PresentationError("unknown generator %r" % (g,))
        return ObjectExpr(gens)

    def all_gens_obj(self) -> ObjectExpr:
        return ObjectExpr(self.generators)

    def __repr__(self):
        return "FinLinCategory(%s: %s)" % (self.name or "?", ",".join(self.generators))


class Subcategory:
    """Additively closed full subcategory, recorded by its member generators."""

    def __init__(self, parent: FinLinCategory, members):
        members = set(members)
        unknown = members - set(parent.generators)
        if unknown:
            raise PresentationError("subcategory members not in parent: %s" % sorted(unknown))
        self.parent = parent
        # Keep parent generator order for determinism.
        self.members = tuple(g for g in parent.generators if g in members)

    def member_set(self):
        return set(self.members)

    def contains_object(self, obj: ObjectExpr) -> bool:
        return obj.support() <= self.member_set()

    def __eq__(self, other):
        return (isinstance(other, Subcategory) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return "Subcategory{%s}" % (",".join(self.members) or "")


class Morphism:
    """Block matrix of Hom coordinates between two formal sums.

    blocks[i][j] holds the coordinates, in the chosen basis of
    Hom(source.summands[j], target.summands[i]), of the (i,j) component.
    """

    __slots__ = ("cat", "source", "target", "blocks")

    def __init__(self, cat: FinLinCategory, source: ObjectExpr, target: ObjectExpr, blocks):
        self.cat = cat
        self.source = source
        self.target = target
        blocks = tuple(tuple(tuple(vec) for vec in row) for row in blocks)
        if len(blocks) != len(target.summands):
            raise PresentationError("morphism block rows %d != target summands %d"
                                    % (len(blocks), len(target.summands)))
        for i, row in enumerate(blocks):
            if len(row) != len(source.summands):
                raise PresentationError("morphism block cols mismatch in row %d" % i)
            for j, vec in enumerate(row):
                want = cat.hom_dim(source.summands[j], target.summands[i])
                if len(vec) != want:
                    raise PresentationError(
                        "block (%d,%d) has %d coords, expected %d for Hom(%s,%s)"
                        % (i, j, len(vec), want, source.summands[j], target.summands[i]))
        self.blocks = blocks

    @classmethod
    def zero(cls, cat, source: ObjectExpr, target: ObjectExpr):
        z = cat.field.zero
        blocks = [[(z,) * cat.hom_dim(s, t) for s in source.summands] for t in target.summands]
        return cls(cat, source, target, blocks)

    @classmethod
    def identity(cls, cat, obj: ObjectExpr):
        z = cat.field.zero
        blocks = []
        for i, t in enumerate(obj.summands):
            row = []
            for j, s in enumerate(obj.summands):
                if i == j:
                    row.append(cat.identities[s])
                else:
                    row.append((z,) * cat.hom_dim(s, t))
            blocks.append(row)
        return cls(cat, obj, obj, blocks)

    @classmethod
    def single(cls, cat, src_gen: str, tgt_gen: str, coords):
        return cls(cat, ObjectExpr((src_gen,)), ObjectExpr((tgt_gen,)), [[tuple(coords)]])

    @classmethod
    def basis_element(cls, cat, src_gen: str, tgt_gen: str, index: int):
        dim = cat.hom_dim(src_gen, tgt_gen)
        coords = [cat.field.zero] * dim
        coords[index] = cat.field.one
        return cls.single(cat, src_gen, tgt_gen, coords)

    def add(self, other: "Morphism") -> "Morphism":
        F = self.cat.field
        blocks = [[tuple(F.add(x, y) for x, y in zip(v1, v2))
                   for v1, v2 in zip(r1, r2)]
                  for r1, r2 in zip(self.blocks, other.blocks)]
        return Morphism(self.cat, self.source, self.target, blocks)

    def sub(self, other: "Morphism") -> "Morphism":
        return self.add(other.scale(self.cat.field.neg(self.cat.field.one)))

    def scale(self, c) -> "Morphism":
        F = self.cat.field
        blocks = [[tuple(F.mul(c, x) for x in vec) for vec in row] for row in self.blocks]
        return Morphism(self.cat, self.source, self.target, blocks)

    def is_zero(self) -> bool:
        F = self.cat.field
        return all(F.is_zero(x) for row in self.blocks for vec in row for x in vec)

    def flatten(self):
        out = []
        for row in self.blocks:
            for vec in row:
                out.extend(vec)
        return tuple(out)

    def equal(self, other: "Morphism") -> bool:
        return (self.cat is other.cat
                and self.source.summands == other.source.summands
                and self.target.summands == other.target.summands
                and self.flatten() == other.flatten())

    def __repr__(self):
        return "Morphism(%r -> %r)" % (self.source, self.target)


def hom_dim_expr(cat: FinLinCategory, a: ObjectExpr, b: ObjectExpr) -> int:
    return sum(cat.hom_dim(s, t) for t in b.summands for s in a.summands)


def hom_space(cat: FinLinCategory, a: ObjectExpr, b: ObjectExpr):
    """Dimension and deterministic (target, source, basis) index order."""
    index = []
    for i, t in enumerate(b.summands):
        for j, s in enumerate(a.summands):
            for q in range(cat.hom_dim(s, t)):
                index.append((i, j, q))
    return {"dimension": len(index), "index": tuple(index)}


def unflatten(cat: FinLinCategory, a: ObjectExpr, b: ObjectExpr, coords) -> Morphism:
    coords = list(coords)
    if len(coords) != hom_dim_expr(cat, a, b):
        raise PresentationError("coordinate vector length %d, expected %d"
                                % (len(coords), hom_dim_expr(cat, a, b)))
    pos = 0
    blocks = []
    for t in b.summands:
        row = []
        for s in a.summands:
            d = cat.hom_dim(s, t)
            row.append(tuple(coords[pos:pos + d]))
            pos += d
        blocks.append(row)
    return Morphism(cat, a, b, blocks)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """Composition g o f via the structure constants (apply f first)."""
    if g.cat is not f.cat:
        raise PresentationError("composition across different categories")
    if f.target.summands != g.source.summands:
        raise PresentationError("boundary mismatch: %r then %r" % (f, g))
    cat = f.cat
    F = cat.field
    src, mid, tgt = f.source, f.target, g.target
    blocks = []
    for i, c in enumerate(tgt.summands):
        row = []
        for j, a in enumerate(src.summands):
            acc = [F.zero] * cat.hom_dim(a, c)
            for m, b in enumerate(mid.summands):
                gvec = g.blocks[i][m]
                fvec = f.blocks[m][j]
                for p, gc in enumerate(gvec):
                    if F.is_zero(gc):
                        continue
                    for q, fc in enumerate(fvec):
                        if F.is_zero(fc):
                            continue
                        cv = cat.comp_vec(a, b, c, p, q)
                        coef = F.mul(gc, fc)
                        for idx, x in enumerate(cv):
                            acc[idx] = F.add(acc[idx], F.mul(coef, x))
            row.append(tuple(acc))
        blocks.append(row)
    return Morphism(cat, src, tgt, blocks)


def postcompose_mat(g: Morphism, a: ObjectExpr) -> Mat:
    """Matrix of Hom(a, g.source) -> Hom(a, g.target), h |-> g o h."""
    cat = g.cat
    dim_in = hom_dim_expr(cat, a, g.source)
    cols = []
    for q in range(dim_in):
        coords = [cat.field.zero] * dim_in
        coords[q] = cat.field.one
        h = unflatten(cat, a, g.source, coords)
        cols.append(compose(g, h).flatten())
    rows = hom_dim_expr(cat, a, g.target)
    return Mat(cat.field, rows, dim_in,
               [[cols[q][r] for q in range(dim_in)] for r in range(rows)])


def precompose_mat(f: Morphism, b: ObjectExpr) -> Mat:
    """Matrix of Hom(f.target, b) -> Hom(f.source, b), h |-> h o f."""
    cat = f.cat
    dim_in = hom_dim_expr(cat, f.target, b)
    cols = []
    for q in range(dim_in):
        coords = [cat.field.zero] * dim_in
        coords[q] = cat.field.one
        h = unflatten(cat, f.target, b, coords)
        cols.append(compose(h, f).flatten())
    rows = hom_dim_expr(cat, f.source, b)
    return Mat(cat.field, rows, dim_in,
               [[cols[q][r] for q in range(dim_in)] for r in range(rows)])


def basis_morphisms(cat: FinLinCategory):
    """All (src, tgt, index, morphism) basis elements, in deterministic order."""
    out = []
    for a in cat.generators:
        for b in cat.generators:
            for q in range(cat.hom_dim(a, b)):
                out.append((a, b, q, Morphism.basis_element(cat, a, b, q)))
    return out


def _end_algebra_tables(cat: FinLinCategory, g: str):
    """Left-multiplication matrices of End(g) in its chosen basis."""
    n = cat.hom_dim(g, g)
    mats = []
    for u in range(n):
        cols = [cat.comp_vec(g, g, g, u, v) for v in range(n)]
        mats.append(Mat(cat.field, n, n, [[cols[v][r] for v in range(n)] for r in range(n)]))
    return mats


def end_radical(cat: FinLinCategory, g: str):
    """Radical of End(g) as a subspace, via the trace form of the regular
    representation.  Valid in characteristic zero only."""
    F = cat.field
    if F.characteristic != 0:
        return None
    n = cat.hom_dim(g, g)
    left = _end_algebra_tables(cat, g)
    gram = []
    for u in range(n):
        row = []
        for v in range(n):
            prod = left[u].mul(left[v])
            tr = F.zero
            for i in range(n):
                tr = F.add(tr, prod.data[i][i])
            row.append(tr)
        gram.append(row)
    from .linalg import nullspace
    vecs = nullspace(Mat(F, n, n, gram))
    return SubspaceBasis.from_vectors(F, n, vecs)


def validate_category(cat: FinLinCategory) -> Report:
    """Associativity, identity laws and (char 0) locality of End rings."""
    rep = Report()
    F = cat.field
    gens = cat.generators

    for g in gens:
        ident = Morphism.single(cat, g, g, cat.identities[g])
        for h in gens:
            for q in range(cat.hom_dim(g, h)):
                f = Morphism.basis_element(cat, g, h, q)
                name = cat.basis_names(g, h)[q]
                if not compose(f, ident).equal(f):
                    rep.fail("identity.right", "%s o 1_%s != %s" % (name, g, name))
                ident_h = Morphism.single(cat, h, h, cat.identities[h])
                if not compose(ident_h, f).equal(f):
                    rep.fail("identity.left", "1_%s o %s != %s" % (h, name, name))
    if not rep.has_failures("identity"):
        rep.ok("identity")

    assoc_ok = True
    for a in gens:
        for b in gens:
            for q1 in range(cat.hom_dim(a, b)):
                f = Morphism.basis_element(cat, a, b, q1)
                for c in gens:
                    for q2 in range(cat.hom_dim(b, c)):
                        g = Morphism.basis_element(cat, b, c, q2)
                        gf = compose(g, f)
                        for d in gens:
                            for q3 in range(cat.hom_dim(c, d)):
                                h = Morphism.basis_element(cat, c, d, q3)
                                lhs = compose(h, gf)
                                rhs = compose(compose(h, g), f)
                                if not lhs.equal(rhs):
                                    assoc_ok = False
                                    rep.fail("associativity",
                                             "witness (%s.%s, %s.%s, %s.%s)" % (
                                                 a, cat.basis_names(a, b)[q1],
                                                 b, cat.basis_names(b, c)[q2],
                                                 c, cat.basis_names(c, d)[q3]))
    if assoc_ok:
        rep.ok("associativity")

    if F.characteristic == 0:
        for g in gens:
            radical = end_radical(cat, g)
            n = cat.hom_dim(g, g)
            if n - radical.dim != 1:
                rep.fail("locality", "End(%s)/rad has dimension %d" % (g, n - radical.dim))
        if not rep.has_failures("locality"):
            rep.ok("locality")
    else:
        note = "assumed (declared)" if cat.assume_local else "not verified (char p)"
        rep.info("locality", note)
    return rep


def generator_iso_classes(cat: FinLinCategory):
    """Partition of generators into isomorphism classes (char 0 only)."""
    if cat.field.characteristic != 0:
        return None
    gens = cat.generators
    radicals = {g: end_radical(cat, g) for g in gens}
    classes = []
    assigned = {}
    for g in gens:
        if g in assigned:
            continue
        cls = [g]
        assigned[g] = len(classes)
        for h in gens:
            if h in assigned or h == g:
                continue
            if _gens_isomorphic(cat, g, h, radicals[g]):
                cls.append(h)
                assigned[h] = len(classes)
        classes.append(tuple(cls))
    return classes, assigned


def _gens_isomorphic(cat: FinLinCategory, g: str, h: str, rad_g: SubspaceBasis) -> bool:
    d_gh = cat.hom_dim(g, h)
    d_hg = cat.hom_dim(h, g)
    if d_gh == 0 or d_hg == 0:
        return False
    for q in range(d_gh):
        f = Morphism.basis_element(cat, g, h, q)
        for p in range(d_hg):
            gg = Morphism.basis_element(cat, h, g, p)
            prod = compose(gg, f).flatten()
            if not rad_g.contains_vector(prod):
                return True
    return False


def is_isomorphic(cat: FinLinCategory, a: ObjectExpr, b: ObjectExpr):
    """Decide a ~ b in a Krull-Schmidt presentation.

    Returns True/False, or None when generator-level isomorphism cannot be
    decided (characteristic p) and the plain multiplicity vectors differ.
    """
    ma, mb = a.multiplicities(), b.multiplicities()
    if ma == mb:
        return True
    if cat.field.characteristic != 0:
        return None
    _, assigned = generator_iso_classes(cat)
    ca = Counter(assigned[g] for g in a.summands)
    cb = Counter(assigned[g] for g in b.summands)
    return ca == cb


def ideal_subspace(cat: FinLinCategory, a: ObjectExpr, b: ObjectExpr, x: Subcategory) -> SubspaceBasis:
    """Span of all composites a -> X_i -> b over member generators X_i.

    Factorizations through sums reduce to sums of these, so member
    generators suffice.
    """
    dim = hom_dim_expr(cat, a, b)
    vectors = []
    for m in x.members:
        mid = ObjectExpr((m,))
        d_in = hom_dim_expr(cat, a, mid)
        d_out = hom_dim_expr(cat, mid, b)
        for q in range(d_in):
            coords_in = [cat.field.zero] * d_in
            coords_in[q] = cat.field.one
            g = unflatten(cat, a, mid, coords_in)
            for p in range(d_out):
                coords_out = [cat.field.zero] * d_out
                coords_out[p] = cat.field.one
                h = unflatten(cat, mid, b, coords_out)
                vectors.append(compose(h, g).flatten())
    return SubspaceBasis.from_vectors(cat.field, dim, vectors)


def restrict_category(cat: FinLinCategory, members, name: str = "") -> FinLinCategory:
    """Full subcategory presentation on a subset of the generators."""
    keep = [g for g in cat.generators if g in set(members)]
    keep_set = set(keep)
    hom_bases = {k: v for k, v in cat.hom_bases.items() if k[0] in keep_set and k[1] in keep_set}
    comp = {k: v for k, v in cat.comp.items()
            if k[0] in keep_set and k[1] in keep_set and k[2] in keep_set}
    identities = {g: cat.identities[g] for g in keep}
    return FinLinCategory(cat.field, keep, hom_bases, comp, identities,
                          name=name or (cat.name + "|"), assume_local=cat.assume_local)


def morphism_in(cat: FinLinCategory, mor: Morphism) -> Morphism:
    """The same coordinate data read in another presentation (e.g. a full
    subcategory) sharing generator names and bases."""
    return Morphism(cat, ObjectExpr(mor.source.summands), ObjectExpr(mor.target.summands), mor.blocks)
