"""Desk-scale triangulated presentations: strict shift, a finite table of
basic triangles, and decidable membership in the distinguished class.

The distinguished class is the closure of the basic table under rotation,
finite direct sums and isomorphism of sextuples.  Membership is decided by
matching vertex multisets against sums of rotated basic triangles and then
searching for an isomorphism of sextuples; the isomorphism search solves the
linear commutation constraints and looks for an invertible point of the
solution space with a deterministic seeded sampler.
"""

from __future__ import annotations

import random

from .category import (Morphism, ObjectExpr, compose, hom_dim_expr,
                       postcompose_mat, precompose_mat, unflatten)
from .adjunction import morphism_inverse
from .errors import PresentationError
from .functor import LinearFunctor, compose_functors, is_identity_functor, validate_functor
from .linalg import Mat, nullspace, rank
from .report import Report

_SEARCH_SEED = 20240811


class Triangle:
    """A sextuple (x, y, z, f: x->y, g: y->z, h: z->T x)."""

    __slots__ = ("x", "y", "z", "f", "g", "h", "name")

    def __init__(self, x, y, z, f, g, h, name=""):
        self.x, self.y, self.z = x, y, z
        self.f, self.g, self.h = f, g, h
        self.name = name

    def vertices(self):
        return (self.x, self.y, self.z)

    def data_equal(self, other: "Triangle") -> bool:
        return (self.x.summands == other.x.summands
                and self.y.summands == other.y.summands
                and self.z.summands == other.z.summands
                and self.f.flatten() == other.f.flatten()
                and self.g.flatten() == other.g.flatten()
                and self.h.flatten() == other.h.flatten())

    def __repr__(self):
        return "Triangle(%s: %r -> %r -> %r)" % (self.name or "?", self.x, self.y, self.z)


class TriangulatedPresentation:
    def __init__(self, cat, shift: LinearFunctor, shift_inv: LinearFunctor,
                 triangles, name: str = ""):
        self.cat = cat
        self.shift = shift
        self.shift_inv = shift_inv
        self.triangles = tuple(triangles)
        self.name = name
        self._atoms = None

    def validate(self) -> Report:
        rep = Report()
        for label, f in (("shift", self.shift), ("shift-inverse", self.shift_inv)):
            sub = validate_functor(f)
            if sub.ok_all:
                rep.ok("tri.%s.functor" % label)
            else:
                for e in sub.failures():
                    rep.fail("tri.%s.functor.%s" % (label, e.key), e.witness)
        if is_identity_functor(compose_functors(self.shift, self.shift_inv)) and \
                is_identity_functor(compose_functors(self.shift_inv, self.shift)):
            rep.ok("tri.shift.strict-inverse")
        else:
            rep.fail("tri.shift.strict-inverse", "T o T^-1 or T^-1 o T is not Id")
        for t in self.triangles:
            key = "tri.triangle.%s" % (t.name or "?")
            ok = True
            if t.f.source.summands != t.x.summands or t.f.target.summands != t.y.summands \
                    or t.g.source.summands != t.y.summands or t.g.target.summands != t.z.summands \
                    or t.h.source.summands != t.z.summands \
                    or t.h.target.summands != self.shift.apply_obj(t.x).summands:
                rep.fail(key + ".boundaries", "maps do not match the vertices")
                continue
            if not compose(t.g, t.f).is_zero():
                ok = False
                rep.fail(key + ".composite", "g o f != 0")
            if not compose(t.h, t.g).is_zero():
                ok = False
                rep.fail(key + ".composite", "h o g != 0")
            if not compose(self.shift.apply(t.f), t.h).is_zero():
                ok = False
                rep.fail(key + ".composite", "T(f) o h != 0")
            if ok:
                rep.ok(key)
        for g in self.cat.generators:
            ident = identity_triangle(self, g)
            if self.membership(ident) is None:
                rep.fail("tri.identity-closure", "identity triangle of %s not found" % g)
        if not rep.has_failures("tri.identity-closure"):
            rep.ok("tri.identity-closure")
        return rep

    def rotate(self, t: Triangle) -> Triangle:
        """(y, z, Tx, g, h, -T f)."""
        tf = self.shift.apply(t.f)
        return Triangle(ObjectExpr(t.y.summands), ObjectExpr(t.z.summands),
                        self.shift.apply_obj(t.x), t.g, t.h,
                        tf.scale(self.cat.field.neg(self.cat.field.one)),
                        name=t.name + "'")

    def atoms(self):
        """All distinct rotations of the basic triangles."""
        if self._atoms is not None:
            return self._atoms
        out = []
        for t in self.triangles:
            cur = t
            for _ in range(64):
                if any(cur.data_equal(a) for a in out):
                    break
                out.append(cur)
                cur = self.rotate(cur)
            else:
                raise PresentationError("rotation of %s does not cycle" % t.name)
        self._atoms = out
        return out

    def direct_sum(self, parts) -> Triangle:
        cat = self.cat
        xs = ObjectExpr(sum((p.x.summands for p in parts), ()))
        ys = ObjectExpr(sum((p.y.summands for p in parts), ()))
        zs = ObjectExpr(sum((p.z.summands for p in parts), ()))
        f = _block_diag_mor(cat, xs, ys, [(p.x, p.y, p.f) for p in parts])
        g = _block_diag_mor(cat, ys, zs, [(p.y, p.z, p.g) for p in parts])
        tx = self.shift.apply_obj(xs)
        h = _block_diag_mor(cat, zs, tx, [(p.z, self.shift.apply_obj(p.x), p.h) for p in parts])
        return Triangle(xs, ys, zs, f, g, h, name="+".join(p.name or "?" for p in parts))

    def _candidate_combos(self, mx, my, mz):
        """Multisets of atoms whose summed vertex multisets match (mx,my,mz)."""
        atoms = self.atoms()
        results = []

        def rec(idx, remx, remy, remz, chosen):
            if not remx and not remy and not remz:
                results.append(list(chosen))
                return
            if idx == len(atoms):
                return
            a = atoms[idx]
            ax, ay, az = (_count(a.x), _count(a.y), _count(a.z))
            # Try zero or more copies of atom idx.
            copies = 0
            rx, ry, rz = dict(remx), dict(remy), dict(remz)
            while True:
                rec(idx + 1, rx, ry, rz, chosen + [a] * copies)
                if _fits(ax, rx) and _fits(ay, ry) and _fits(az, rz) \
                        and (ax or ay or az):
                    _subtract(ax, rx)
                    _subtract(ay, ry)
                    _subtract(az, rz)
                    copies += 1
                else:
                    break
            return

        rec(0, _count_obj(mx), _count_obj(my), _count_obj(mz), [])
        return results

    def membership(self, t: Triangle):
        """Witness that t is isomorphic to a sum of rotated basic triangles,
        or None.  The witness records the combination and the isomorphism."""
        for combo in self._candidate_combos(t.x, t.y, t.z):
            if not combo:
                if t.x.is_zero() and t.y.is_zero() and t.z.is_zero():
                    return {"combo": (), "iso": None}
                continue
            ts = self.direct_sum(combo)
            iso = triangle_iso(self, ts, t)
            if iso is not None:
                return {"combo": tuple(a.name for a in combo), "iso": iso}
        return None

    def complete_monic(self, f: Morphism):
        """A distinguished triangle whose first map is exactly f, or None.

        Searches sums of atoms with matching first two vertices and
        transports along an isomorphism of the first map.
        """
        cat = self.cat
        atoms = self.atoms()
        for combo in self._candidate_pairs(f.source, f.target):
            if not combo:
                continue
            ts = self.direct_sum(combo)
            pair = _solve_pair_iso(cat, ts.f, f)
            if pair is None:
                continue
            a, b = pair  # a: f.source -> ts.x, b: f.target -> ts.y, ts.f a = b f
            a_inv = morphism_inverse(a)
            if a_inv is None:
                continue
            b_inv = morphism_inverse(b)
            if b_inv is None:
                continue
            g2 = compose(ts.g, b)
            h2 = compose(self.shift.apply(a_inv), ts.h)
            return Triangle(ObjectExpr(f.source.summands), ObjectExpr(f.target.summands),
                            ObjectExpr(ts.z.summands), f, g2, h2,
                            name="completion")
        return None

    def _candidate_pairs(self, x, y):
        atoms = self.atoms()
        results = []

        def rec(idx, remx, remy, chosen):
            if not remx and not remy:
                results.append(list(chosen))
                return
            if idx == len(atoms):
                return
            a = atoms[idx]
            ax, ay = _count(a.x), _count(a.y)
            copies = 0
            rx, ry = dict(remx), dict(remy)
            while True:
                rec(idx + 1, rx, ry, chosen + [a] * copies)
                if _fits(ax, rx) and _fits(ay, ry) and (ax or ay):
                    _subtract(ax, rx)
                    _subtract(ay, ry)
                    copies += 1
                else:
                    break

        rec(0, _count_obj(x), _count_obj(y), [])
        return results


def _count(obj: ObjectExpr):
    out = {}
    for s in obj.summands:
        out[s] = out.get(s, 0) + 1
    return out


def _count_obj(obj: ObjectExpr):
    return _count(obj)


def _fits(small, big):
    return all(big.get(k, 0) >= v for k, v in small.items())


def _subtract(small, big):
    for k, v in small.items():
        big[k] -= v
        if big[k] == 0:
            del big[k]


def _block_diag_mor(cat, src: ObjectExpr, tgt: ObjectExpr, parts) -> Morphism:
    F = cat.field
    blocks = [[list((F.zero,) * cat.hom_dim(s, t)) for s in src.summands]
              for t in tgt.summands]
    soff = toff = 0
    for (ps, pt, pm) in parts:
        for li in range(len(pt.summands)):
            for lj in range(len(ps.summands)):
                blocks[toff + li][soff + lj] = list(pm.blocks[li][lj])
        soff += len(ps.summands)
        toff += len(pt.summands)
    return Morphism(cat, src, tgt, [[tuple(v) for v in row] for row in blocks])


def identity_triangle(tri: TriangulatedPresentation, g: str) -> Triangle:
    cat = tri.cat
    gobj = ObjectExpr((g,))
    zero = ObjectExpr(())
    return Triangle(gobj, ObjectExpr((g,)), zero,
                    Morphism.identity(cat, gobj),
                    Morphism.zero(cat, gobj, zero),
                    Morphism.zero(cat, zero, tri.shift.apply_obj(gobj)),
                    name="id(%s)" % g)


def _invertible_candidate(field, parts, basis, max_tries=400):
    """Search a linear space of morphism tuples for a simultaneously
    invertible point; deterministic (fixed seed)."""
    if not basis:
        mors = parts([])
        if all(morphism_inverse(m) is not None for m in mors):
            return mors
        return None

    def split(vec):
        return parts(vec)

    for v in basis:
        mors = split(v)
        invs = [morphism_inverse(m) for m in mors]
        if all(i is not None for i in invs):
            return mors
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            v = tuple(field.add(a, b) for a, b in zip(basis[i], basis[j]))
            mors = split(v)
            if all(morphism_inverse(m) is not None for m in mors):
                return mors
    rng = random.Random(_SEARCH_SEED)
    pool = field.sample_scalars() + [field.zero]
    n = len(basis[0])
    for _ in range(max_tries):
        vec = [field.zero] * n
        for b in basis:
            c = pool[rng.randrange(len(pool))]
            if field.is_zero(c):
                continue
            vec = [field.add(x, field.mul(c, y)) for x, y in zip(vec, b)]
        mors = split(vec)
        if all(morphism_inverse(m) is not None for m in mors):
            return mors
    return None


def triangle_iso(tri: TriangulatedPresentation, ts: Triangle, t: Triangle):
    """Isomorphism of sextuples (a, b, c): ts -> t, or None.

    Constraints: t.f a = b ts.f, t.g b = c ts.g, t.h c = T(a) ts.h.
    """
    cat = tri.cat
    F = cat.field
    da = hom_dim_expr(cat, ts.x, t.x)
    db = hom_dim_expr(cat, ts.y, t.y)
    dc = hom_dim_expr(cat, ts.z, t.z)
    total = da + db + dc
    if total == 0:
        mors = (Morphism.zero(cat, ts.x, t.x), Morphism.zero(cat, ts.y, t.y),
                Morphism.zero(cat, ts.z, t.z))
        if all(morphism_inverse(m) is not None for m in mors):
            return mors
        return None
    rows = []

    def add_constraint(post, pre, off_post, off_pre):
        # post * u - pre * v = 0 where u sits at off_post, v at off_pre
        for r in range(post.rows):
            row = [F.zero] * total
            for c in range(post.cols):
                row[off_post + c] = F.add(row[off_post + c], post.data[r][c])
            for c in range(pre.cols):
                row[off_pre + c] = F.sub(row[off_pre + c], pre.data[r][c])
            rows.append(row)

    add_constraint(postcompose_mat(t.f, ts.x), precompose_mat(ts.f, t.y), 0, da)
    add_constraint(postcompose_mat(t.g, ts.y), precompose_mat(ts.g, t.z), da, da + db)
    # t.h c = T(a) ts.h: as linear maps of c and a respectively.
    post_h = postcompose_mat(t.h, ts.z)
    # a |-> T(a) o ts.h: first apply shift hom map on a, then precompose.
    pre_h = precompose_mat(ts.h, tri.shift.apply_obj(t.x))
    shift_mat = _functor_hom_mat(tri.shift, ts.x, t.x)
    ta_mat = pre_h.mul(shift_mat)
    for r in range(post_h.rows):
        row = [F.zero] * total
        for c in range(post_h.cols):
            row[da + db + c] = F.add(row[da + db + c], post_h.data[r][c])
        for c in range(ta_mat.cols):
            row[c] = F.sub(row[c], ta_mat.data[r][c])
        rows.append(row)

    basis = nullspace(Mat(F, len(rows), total, rows)) if rows else \
        [tuple(F.one if i == j else F.zero for i in range(total)) for j in range(total)]

    def split(vec):
        if not vec:
            vec = [F.zero] * total
        return (unflatten(cat, ts.x, t.x, vec[:da]),
                unflatten(cat, ts.y, t.y, vec[da:da + db]),
                unflatten(cat, ts.z, t.z, vec[da + db:]))

    found = _invertible_candidate(F, split, basis)
    if found is None:
        return None
    return tuple(found)


def _functor_hom_mat(f: LinearFunctor, a: ObjectExpr, b: ObjectExpr) -> Mat:
    """Matrix of Hom(a,b) -> Hom(F a, F b) in flat coordinates."""
    cat = f.source
    d = hom_dim_expr(cat, a, b)
    cols = []
    for q in range(d):
        coords = [cat.field.zero] * d
        coords[q] = cat.field.one
        cols.append(f.apply(unflatten(cat, a, b, coords)).flatten())
    rows = hom_dim_expr(f.target, f.apply_obj(a), f.apply_obj(b))
    return Mat(f.target.field, rows, d,
               [[cols[q][r] for q in range(d)] for r in range(rows)])


def _solve_pair_iso(cat, f0: Morphism, f1: Morphism):
    """Invertible (a, b) with f0 a = b f1 (a: f1.src -> f0.src etc), or None."""
    F = cat.field
    da = hom_dim_expr(cat, f1.source, f0.source)
    db = hom_dim_expr(cat, f1.target, f0.target)
    total = da + db
    if total == 0:
        mors = (Morphism.zero(cat, f1.source, f0.source),
                Morphism.zero(cat, f1.target, f0.target))
        if all(morphism_inverse(m) is not None for m in mors):
            return mors
        return None
    rows = []
    post = postcompose_mat(f0, f1.source)   # a |-> f0 o a
    pre = precompose_mat(f1, f0.target)     # b |-> b o f1
    for r in range(post.rows):
        row = [F.zero] * total
        for c in range(post.cols):
            row[c] = F.add(row[c], post.data[r][c])
        for c in range(pre.cols):
            row[da + c] = F.sub(row[da + c], pre.data[r][c])
        rows.append(row)
    basis = nullspace(Mat(F, len(rows), total, rows)) if rows else \
        [tuple(F.one if i == j else F.zero for i in range(total)) for j in range(total)]

    def split(vec):
        if not vec:
            vec = [F.zero] * total
        return (unflatten(cat, f1.source, f0.source, vec[:da]),
                unflatten(cat, f1.target, f0.target, vec[da:]))

    found = _invertible_candidate(F, split, basis)
    if found is None:
        return None
    return tuple(found)


def is_D_epic(cat, f: Morphism, d) -> bool:
    """Post-composition surjective on Hom(D, -) for every member D."""
    for m in d.members:
        mobj = ObjectExpr((m,))
        mat = postcompose_mat(f, mobj)
        if rank(mat) != hom_dim_expr(cat, mobj, f.target):
            return False
    return True


def is_D_monic(cat, f: Morphism, d) -> bool:
    """Pre-composition surjective on Hom(-, D) for every member D."""
    for m in d.members:
        mobj = ObjectExpr((m,))
        mat = precompose_mat(f, mobj)
        if rank(mat) != hom_dim_expr(cat, f.source, mobj):
            return False
    return True


def d_monic_witness(cat, f: Morphism, d):
    """A member D where pre-composition fails to be surjective, or None."""
    for m in d.members:
        mobj = ObjectExpr((m,))
        mat = precompose_mat(f, mobj)
        if rank(mat) != hom_dim_expr(cat, f.source, mobj):
            return m
    return None


def canonical_right_approximation(cat, x: ObjectExpr, d) -> Morphism:
    """Evaluation morphism from a sum of member copies onto x; always a
    right approximation in a finite presentation."""
    F = cat.field
    src_summands = []
    cols = []
    for m in d.members:
        mobj = ObjectExpr((m,))
        dim = hom_dim_expr(cat, mobj, x)
        for q in range(dim):
            coords = [F.zero] * dim
            coords[q] = F.one
            src_summands.append(m)
            cols.append(unflatten(cat, mobj, x, coords))
    src = ObjectExpr(src_summands)
    blocks = []
    for i, t in enumerate(x.summands):
        row = []
        for j, mor in enumerate(cols):
            row.append(mor.blocks[i][0])
        blocks.append(row)
    return Morphism(cat, src, x, blocks)


def canonical_left_approximation(cat, x: ObjectExpr, d) -> Morphism:
    """Coevaluation morphism from x into a sum of member copies."""
    F = cat.field
    tgt_summands = []
    rows_m = []
    for m in d.members:
        mobj = ObjectExpr((m,))
        dim = hom_dim_expr(cat, x, mobj)
        for q in range(dim):
            coords = [F.zero] * dim
            coords[q] = F.one
            tgt_summands.append(m)
            rows_m.append(unflatten(cat, x, mobj, coords))
    tgt = ObjectExpr(tgt_summands)
    blocks = []
    for i, mor in enumerate(rows_m):
        blocks.append([mor.blocks[0][j] for j in range(len(x.summands))])
    return Morphism(cat, x, tgt, blocks)
