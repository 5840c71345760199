"""Brute-force construction of the bundled fixtures.

Nothing in the shipped fixture files is transcribed by hand: Hom bases are
enumerated as canonical nullspace bases of intertwining equations over
concrete linear-algebra models (representations of the two-vertex quiver;
modules over k[x]/(x^3) with stable reduction modulo maps factoring through
the free module), and all functor, adjunction, shift and triangle data is
evaluated on those bases.  Run as

    python -m rclkit.fixture_gen <output-directory>

to regenerate fix_a2.rcl, fix_stab3.rcl and fix_prod.rcl.
"""

from __future__ import annotations

import sys

from .adjunction import make_adjunction
from .category import FinLinCategory, Morphism, ObjectExpr, Subcategory
from .field import QQ
from .functor import LinearFunctor, NatTransform, compose_functors, identity_functor
from .linalg import Mat, SubspaceBasis, invert, nullspace, solve
from .mutation import ExactFunctorData, MutationData
from .recollement import Recollement
from .triangulated import Triangle, TriangulatedPresentation
from .workspace import Workspace, serialize


def _mat_flat(m: Mat):
    return tuple(x for row in m.data for x in row)


def _coords_in(field, basis_flats, flat):
    """Coordinates of flat in the span of basis_flats (must exist)."""
    if not basis_flats:
        if any(not field.is_zero(x) for x in flat):
            raise ValueError("vector outside an empty basis")
        return ()
    n = len(basis_flats[0])
    mat = Mat(field, n, len(basis_flats),
              [[basis_flats[q][r] for q in range(len(basis_flats))] for r in range(n)])
    sol = solve(mat, Mat.column(field, flat))
    if sol is None:
        raise ValueError("vector outside the spanned space")
    return sol.col(0)


# ---------------------------------------------------------------------------
# Representations of the quiver 1 -> 2


class _Rep:
    def __init__(self, field, d1, d2, arrow=None):
        self.field = field
        self.d1, self.d2 = d1, d2
        self.arrow = arrow if arrow is not None else Mat.zeros(field, d2, d1)


class _RepMor:
    def __init__(self, phi1: Mat, phi2: Mat):
        self.phi1, self.phi2 = phi1, phi2

    def flat(self):
        return _mat_flat(self.phi1) + _mat_flat(self.phi2)


def _rep_hom_basis(src: _Rep, tgt: _Rep):
    """Canonical basis of intertwiners (phi2 A = B phi1)."""
    F = src.field
    n1 = tgt.d1 * src.d1
    n2 = tgt.d2 * src.d2
    total = n1 + n2
    rows = []
    for r in range(tgt.d2):
        for c in range(src.d1):
            row = [F.zero] * total
            for k in range(src.d2):
                row[n1 + r * src.d2 + k] = F.add(row[n1 + r * src.d2 + k],
                                                 src.arrow.data[k][c])
            for k in range(tgt.d1):
                row[k * src.d1 + c] = F.sub(row[k * src.d1 + c],
                                            tgt.arrow.data[r][k])
            rows.append(row)
    if total == 0:
        vecs = []
    elif rows:
        vecs = nullspace(Mat(F, len(rows), total, rows))
    else:
        vecs = [tuple(F.one if i == j else F.zero for i in range(total))
                for j in range(total)]

    def unflat(vec):
        phi1 = Mat(F, tgt.d1, src.d1,
                   [[vec[r * src.d1 + c] for c in range(src.d1)] for r in range(tgt.d1)])
        phi2 = Mat(F, tgt.d2, src.d2,
                   [[vec[n1 + r * src.d2 + c] for c in range(src.d2)]
                    for r in range(tgt.d2)])
        return _RepMor(phi1, phi2)

    return [unflat(v) for v in vecs]


def _rep_compose(g: _RepMor, f: _RepMor) -> _RepMor:
    return _RepMor(g.phi1.mul(f.phi1), g.phi2.mul(f.phi2))


def _rep_identity(rep: _Rep) -> _RepMor:
    return _RepMor(Mat.identity(rep.field, rep.d1), Mat.identity(rep.field, rep.d2))


class _Concrete:
    """A presentation together with its concrete hom-basis models."""

    def __init__(self, cat, models, bases, coordinatize):
        self.cat = cat
        self.models = models
        self.bases = bases
        self.coordinatize = coordinatize

    def coords(self, a, b, model):
        return self.coordinatize[(a, b)](model)

    def single(self, a, b, model) -> Morphism:
        src = ObjectExpr((a,)) if a else ObjectExpr(())
        tgt = ObjectExpr((b,)) if b else ObjectExpr(())
        if not a or not b:
            return Morphism.zero(self.cat, src, tgt)
        return Morphism.single(self.cat, a, b, self.coords(a, b, model))


def _build_rep_category(field, gen_models, name) -> _Concrete:
    gens = [g for g, _ in gen_models]
    models = dict(gen_models)
    bases, coordinatize = {}, {}
    hom_bases = {}
    for a in gens:
        for b in gens:
            basis = _rep_hom_basis(models[a], models[b])
            bases[(a, b)] = basis
            flats = [m.flat() for m in basis]
            coordinatize[(a, b)] = (lambda fl: (lambda mor: _coords_in(field, fl, mor.flat())))(flats)
            if basis:
                hom_bases[(a, b)] = tuple("a%d" % i for i in range(len(basis)))
    comp = {}
    for a in gens:
        for b in gens:
            for c in gens:
                dab, dbc = len(bases[(a, b)]), len(bases[(b, c)])
                if dab == 0 or dbc == 0:
                    continue
                comp[(a, b, c)] = [
                    [coordinatize[(a, c)](_rep_compose(bases[(b, c)][p], bases[(a, b)][q]))
                     for q in range(dab)] for p in range(dbc)]
    identities = {g: coordinatize[(g, g)](_rep_identity(models[g])) for g in gens}
    cat = FinLinCategory(field, gens, hom_bases, comp, identities, name=name)
    return _Concrete(cat, models, bases, coordinatize)


def _coker(field, mat: Mat):
    """Column-space subspace; canonical projection is coset_coords."""
    cols = [mat.col(j) for j in range(mat.cols)]
    return SubspaceBasis.from_vectors(field, mat.rows, cols)


def _rep_functor(cc_src: _Concrete, cc_tgt: _Concrete, name, obj_names, push):
    """Functor with single-generator-or-zero images evaluated on basis models."""
    src, tgt = cc_src.cat, cc_tgt.cat
    object_map = {}
    for g in src.generators:
        img = obj_names[g]
        object_map[g] = ObjectExpr((img,)) if img else ObjectExpr(())
    hom_maps = {}
    for a in src.generators:
        for b in src.generators:
            d = src.hom_dim(a, b)
            if d == 0:
                continue
            ia, ib_ = obj_names[a], obj_names[b]
            rows = tgt.hom_dim(ia, ib_) if (ia and ib_) else 0
            cols = []
            for q in range(d):
                if rows == 0:
                    cols.append(())
                    continue
                img_model = push(a, b, cc_src.bases[(a, b)][q])
                cols.append(cc_tgt.coords(ia, ib_, img_model))
            hom_maps[(a, b)] = Mat(tgt.field, rows, d,
                                   [[cols[q][r] for q in range(d)] for r in range(rows)])
    return LinearFunctor(src, tgt, object_map, hom_maps, name=name)


def build_fix_a2(field=QQ) -> Workspace:
    """Module categories of the two-vertex quiver: the standard recollement
    with closed part the vertex-2 simples and open part restriction to
    vertex 1."""
    S1 = _Rep(field, 1, 0)
    S2 = _Rep(field, 0, 1)
    P1 = _Rep(field, 1, 1, Mat(field, 1, 1, [[field.one]]))
    VL = _Rep(field, 1, 0)  # mod k models carried on vertex 1
    WR = _Rep(field, 1, 0)

    cc = _build_rep_category(field, [("S1", S1), ("S2", S2), ("P1", P1)], "A2")
    ccl = _build_rep_category(field, [("V", VL)], "ModKL")
    ccr = _build_rep_category(field, [("W", WR)], "ModKR")

    ws = Workspace(field)
    ws.categories["A2"] = cc.cat
    ws.categories["ModKL"] = ccl.cat
    ws.categories["ModKR"] = ccr.cat

    models = cc.models
    cokers = {g: _coker(field, models[g].arrow) for g in cc.cat.generators}

    def coker_dim(g):
        return models[g].d2 - cokers[g].dim

    iu_obj = {g: ("V" if coker_dim(g) == 1 else None) for g in cc.cat.generators}

    def iu_push(a, b, mor: _RepMor):
        # Induced map on cokernels, read in canonical complement coordinates.
        ca, cb = cokers[a], cokers[b]
        free_a = ca.complement_coords()
        cols = []
        for j in free_a:
            unit = [field.zero] * models[a].d2
            unit[j] = field.one
            img = mor.phi2.apply(tuple(unit))
            cols.append(cb.coset_coords(img))
        rows = models[b].d2 - cb.dim
        mat = Mat(field, rows, len(free_a),
                  [[cols[q][r] for q in range(len(free_a))] for r in range(rows)])
        return _RepMor(mat, Mat.zeros(field, 0, 0))

    iu = _rep_functor(cc, ccl, "iu", iu_obj, iu_push)

    il_obj = {"V": "S2"}

    def il_push(a, b, mor: _RepMor):
        return _RepMor(Mat.zeros(field, 0, 0), mor.phi1)

    il = _rep_functor(ccl, cc, "il", il_obj, il_push)

    ib_obj = {g: ("V" if models[g].d2 == 1 else None) for g in cc.cat.generators}

    def ib_push(a, b, mor: _RepMor):
        return _RepMor(mor.phi2, Mat.zeros(field, 0, 0))

    ib = _rep_functor(cc, ccl, "ib", ib_obj, ib_push)

    ju_obj = {g: ("W" if models[g].d1 == 1 else None) for g in cc.cat.generators}

    def ju_push(a, b, mor: _RepMor):
        return _RepMor(mor.phi1, Mat.zeros(field, 0, 0))

    ju = _rep_functor(cc, ccr, "ju", ju_obj, ju_push)

    jb_obj = {"W": "P1"}

    def jb_push(a, b, mor: _RepMor):
        return _RepMor(mor.phi1, mor.phi1)

    jb = _rep_functor(ccr, cc, "jb", jb_obj, jb_push)

    jl_obj = {"W": "S1"}

    def jl_push(a, b, mor: _RepMor):
        return _RepMor(mor.phi1, Mat.zeros(field, 0, 0))

    jl = _rep_functor(ccr, cc, "jl", jl_obj, jl_push)

    for nm, f in (("iu", iu), ("il", il), ("ib", ib),
                  ("jb", jb), ("ju", ju), ("jl", jl)):
        ws.functors[nm] = f

    zero1 = Mat.zeros(field, 1, 1)
    one1 = Mat.identity(field, 1)
    e00 = Mat.zeros(field, 0, 0)
    e01 = Mat.zeros(field, 0, 1)
    e10 = Mat.zeros(field, 1, 0)

    # Unit of (iu, il): corestriction onto the cokernel part.
    u_i = {
        "S1": Morphism.zero(cc.cat, cc.cat.obj("S1"), ObjectExpr(())),
        "S2": cc.single("S2", "S2", _RepMor(e00, one1)),
        "P1": Morphism.zero(cc.cat, cc.cat.obj("P1"), ObjectExpr(())),
    }
    c_i = {"V": ccl.single("V", "V", _RepMor(one1, e00))}

    u_ib = {"V": ccl.single("V", "V", _RepMor(one1, e00))}
    c_ib = {
        "S1": Morphism.zero(cc.cat, ObjectExpr(()), cc.cat.obj("S1")),
        "S2": cc.single("S2", "S2", _RepMor(e00, one1)),
        "P1": cc.single("S2", "P1", _RepMor(e10, one1)),
    }

    u_jb = {"W": ccr.single("W", "W", _RepMor(one1, e00))}
    c_jb = {
        "S1": cc.single("P1", "S1", _RepMor(one1, e01)),
        "S2": Morphism.zero(cc.cat, ObjectExpr(()), cc.cat.obj("S2")),
        "P1": cc.single("P1", "P1", _RepMor(one1, models["P1"].arrow)),
    }

    u_j = {
        "S1": cc.single("S1", "S1", _RepMor(one1, e00)),
        "S2": Morphism.zero(cc.cat, cc.cat.obj("S2"), ObjectExpr(())),
        "P1": cc.single("P1", "S1", _RepMor(one1, e01)),
    }
    c_j = {"W": ccr.single("W", "W", _RepMor(one1, e00))}

    _register_adjunction(ws, "adj_i", "iu", "il", "A2", u_i, c_i)
    _register_adjunction(ws, "adj_ib", "il", "ib", "ModKL", u_ib, c_ib)
    _register_adjunction(ws, "adj_jb", "jb", "ju", "ModKR", u_jb, c_jb)
    _register_adjunction(ws, "adj_j", "ju", "jl", "A2", u_j, c_j)

    ws.recollements["R"] = Recollement(
        left=ccl.cat, middle=cc.cat, right=ccr.cat,
        i_up=iu, i_lo=il, i_bang=ib, j_bang=jb, j_up=ju, j_lo=jl,
        adj_i=ws.adjunctions["adj_i"], adj_ib=ws.adjunctions["adj_ib"],
        adj_jb=ws.adjunctions["adj_jb"], adj_j=ws.adjunctions["adj_j"])
    ws.rec_refs["R"] = {
        "left": "ModKL", "middle": "A2", "right": "ModKR",
        "i_up": "iu", "i_lo": "il", "i_bang": "ib",
        "j_bang": "jb", "j_up": "ju", "j_lo": "jl",
        "adj_i": "adj_i", "adj_ib": "adj_ib", "adj_jb": "adj_jb", "adj_j": "adj_j"}
    return ws


def _register_adjunction(ws, name, left_name, right_name, src_cat_name,
                         unit_comps, counit_comps):
    left = ws.functors[left_name]
    right = ws.functors[right_name]
    unit_name = "u_" + name[4:]
    counit_name = "c_" + name[4:]
    rl = compose_functors(right, left)
    lr = compose_functors(left, right)
    ws.nats[unit_name] = NatTransform(identity_functor(left.source), rl,
                                      unit_comps, name=unit_name)
    ws.nat_exprs[unit_name] = ("id %s" % src_cat_name,
                               "%s * %s" % (right_name, left_name))
    tgt_cat_name = None
    for nm, cat in ws.categories.items():
        if cat is right.source:
            tgt_cat_name = nm
    ws.nats[counit_name] = NatTransform(lr, identity_functor(right.source),
                                        counit_comps, name=counit_name)
    ws.nat_exprs[counit_name] = ("%s * %s" % (left_name, right_name),
                                 "id %s" % tgt_cat_name)
    ws.adjunctions[name] = make_adjunction(left, right, dict(unit_comps),
                                           dict(counit_comps), name=name)
    ws.adj_refs[name] = (left_name, right_name, unit_name, counit_name)


# ---------------------------------------------------------------------------
# Modules over k[x]/(x^3) and their stable category


def _nil_mat(field, dim):
    """Multiplication by x on the cyclic module of the given dimension."""
    m = [[field.zero] * dim for _ in range(dim)]
    for i in range(dim - 1):
        m[i + 1][i] = field.one
    return Mat(field, dim, dim, m)


def _module_hom_basis(field, xa: Mat, xb: Mat):
    """Intertwiners phi with phi xa = xb phi, canonical order."""
    da, db = xa.rows, xb.rows
    total = db * da
    rows = []
    for r in range(db):
        for c in range(da):
            row = [field.zero] * total
            for k in range(da):
                row[r * da + k] = field.add(row[r * da + k], xa.data[k][c])
            for k in range(db):
                row[k * da + c] = field.sub(row[k * da + c], xb.data[r][k])
            rows.append(row)
    vecs = nullspace(Mat(field, len(rows), total, rows)) if rows else []
    if not rows and total:
        vecs = [tuple(field.one if i == j else field.zero for i in range(total))
                for j in range(total)]
    out = []
    for v in vecs:
        out.append(Mat(field, db, da,
                       [[v[r * da + c] for c in range(da)] for r in range(db)]))
    return out


def _module_iso(field, xa: Mat, xb: Mat):
    """A deterministic invertible intertwiner, or None."""
    basis = _module_hom_basis(field, xa, xb)
    for m in basis:
        if invert(m) is not None:
            return m
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            m = basis[i].add(basis[j])
            if invert(m) is not None:
                return m
    return None


class _StableCore:
    """Everything the stable presentation of k[x]/(x^3) needs, computed from
    the module models: stable hom bases, composition, the syzygy shift and
    the connecting maps of the two defining short exact sequences."""

    def __init__(self, field):
        self.field = field
        dims = {"M1": 1, "M2": 2}
        self.x_act = {g: _nil_mat(field, d) for g, d in dims.items()}
        xa = _nil_mat(field, 3)
        self.x_free = xa
        gens = ("M1", "M2")
        self.gens = gens

        to_free, from_free = {}, {}
        for g in gens:
            to_free[g] = _module_hom_basis(field, self.x_act[g], xa)
            from_free[g] = _module_hom_basis(field, xa, self.x_act[g])
        stable_basis, stable_sub, full_basis = {}, {}, {}
        for a in gens:
            for b in gens:
                basis = _module_hom_basis(field, self.x_act[a], self.x_act[b])
                full_basis[(a, b)] = basis
                flats = [_mat_flat(m) for m in basis]
                proj_flats = []
                for phi in to_free[a]:
                    for psi in from_free[b]:
                        proj_flats.append(_coords_in(field, flats,
                                                     _mat_flat(psi.mul(phi))))
                sub = SubspaceBasis.from_vectors(field, len(basis), proj_flats)
                stable_sub[(a, b)] = sub
                stable_basis[(a, b)] = [basis[i] for i in sub.complement_coords()]
        self.full_basis = full_basis
        self.stable_sub = stable_sub
        self.stable_basis = stable_basis

        self.hom_bases = {}
        for a in gens:
            for b in gens:
                n = len(stable_basis[(a, b)])
                if n:
                    self.hom_bases[(a, b)] = tuple("a%d" % i for i in range(n))

        self.comp = {}
        for a in gens:
            for b in gens:
                for c in gens:
                    dab = len(stable_basis[(a, b)])
                    dbc = len(stable_basis[(b, c)])
                    if dab == 0 or dbc == 0:
                        continue
                    self.comp[(a, b, c)] = [
                        [self.stable_coords(a, c, stable_basis[(b, c)][p]
                                            .mul(stable_basis[(a, b)][q]))
                         for q in range(dab)] for p in range(dbc)]
        self.identities = {g: self.stable_coords(g, g, Mat.identity(field, dims[g]))
                           for g in gens}

        # Embeddings into the free module: 1 |-> x^(3-dim).
        self.embed = {}
        for g in gens:
            d = dims[g]
            cols = []
            for j in range(d):
                col = [field.zero] * 3
                col[3 - d + j] = field.one
                cols.append(col)
            self.embed[g] = Mat(field, 3, d,
                                [[cols[j][r] for j in range(d)] for r in range(3)])
        self.coker_sub = {g: _coker(field, self.embed[g]) for g in gens}
        # Identify each cokernel with the canonical module of its dimension.
        self.shift_obj = {}
        self.ident_iso = {}
        for g in gens:
            sub = self.coker_sub[g]
            free = sub.complement_coords()
            xbar_cols = []
            for j in free:
                unit = [field.zero] * 3
                unit[j] = field.one
                img = xa.apply(tuple(unit))
                xbar_cols.append(sub.coset_coords(img))
            xbar = Mat(field, len(free), len(free),
                       [[xbar_cols[c][r] for c in range(len(free))]
                        for r in range(len(free))])
            tgt = "M1" if len(free) == 1 else "M2"
            iso = _module_iso(field, xbar, self.x_act[tgt])
            if iso is None:
                raise RuntimeError("cannot identify the cokernel of %s" % g)
            self.shift_obj[g] = tgt
            self.ident_iso[g] = iso

        self.shift_mats = {}
        for a in gens:
            for b in gens:
                n = len(self.stable_basis[(a, b)])
                ta, tb = self.shift_obj[a], self.shift_obj[b]
                rows = len(self.stable_basis[(ta, tb)])
                cols = []
                for q in range(n):
                    img = self.shift_of(a, b, self.stable_basis[(a, b)][q])
                    cols.append(self.stable_coords(ta, tb, img))
                self.shift_mats[(a, b)] = Mat(field, rows, n,
                                              [[cols[q][r] for q in range(n)]
                                               for r in range(rows)])

        # Connecting maps of 0 -> M1 -> M2 -> M1 -> 0 and 0 -> M2 -> A -> M1 -> 0.
        sigma = Mat(field, 2, 1, [[field.zero], [field.one]])
        pi = Mat(field, 1, 2, [[field.one, field.zero]])
        self.sigma_model, self.pi_model = sigma, pi
        self.h1 = self._connecting("M1", self.x_act["M2"], sigma, pi, "M1")
        gmap = Mat(field, 1, 3, [[field.one, field.zero, field.zero]])
        self.h2 = self._connecting("M2", xa, self.embed["M2"], gmap, "M1")

    def stable_coords(self, a, b, model: Mat):
        flats = [_mat_flat(m) for m in self.full_basis[(a, b)]]
        full = _coords_in(self.field, flats, _mat_flat(model))
        return self.stable_sub[(a, b)].coset_coords(full)

    def _free_endo_solve(self, xy: Mat, constraint_src: Mat, constraint_tgt: Mat):
        """Module map e: (dom, xy) -> (A, x) with e . constraint_src =
        constraint_tgt, canonical solution."""
        field = self.field
        dom = xy.rows
        total = 3 * dom
        rows, rhs = [], []
        # e xy = x_free e
        for r in range(3):
            for c in range(dom):
                row = [field.zero] * total
                for k in range(dom):
                    row[r * dom + k] = field.add(row[r * dom + k], xy.data[k][c])
                for k in range(3):
                    row[k * dom + c] = field.sub(row[k * dom + c],
                                                 self.x_free.data[r][k])
                rows.append(row)
                rhs.append(field.zero)
        # e . constraint_src = constraint_tgt
        for r in range(3):
            for c in range(constraint_src.cols):
                row = [field.zero] * total
                for k in range(dom):
                    row[r * dom + k] = constraint_src.data[k][c]
                rows.append(row)
                rhs.append(constraint_tgt.data[r][c])
        sol = solve(Mat(field, len(rows), total, rows), Mat.column(field, rhs))
        if sol is None:
            raise RuntimeError("free-module extension does not exist")
        v = sol.col(0)
        return Mat(field, 3, dom, [[v[r * dom + c] for c in range(dom)]
                                   for r in range(3)])

    def shift_of(self, a, b, f: Mat) -> Mat:
        """Syzygy shift of a module map, between the canonical models."""
        field = self.field
        e = self._free_endo_solve(self.x_free, self.embed[a],
                                  self.embed[b].mul(f))
        sub_a, sub_b = self.coker_sub[a], self.coker_sub[b]
        free_a = sub_a.complement_coords()
        cols = []
        for j in free_a:
            unit = [field.zero] * 3
            unit[j] = field.one
            cols.append(sub_b.coset_coords(e.apply(tuple(unit))))
        raw = Mat(field, 3 - sub_b.dim, len(free_a),
                  [[cols[q][r] for q in range(len(free_a))]
                   for r in range(3 - sub_b.dim)])
        iso_a = invert(self.ident_iso[a])
        return self.ident_iso[b].mul(raw).mul(iso_a)

    def _connecting(self, xg, y_act, f: Mat, gmap: Mat, zg):
        """Connecting map Z -> (shift of X) of a short exact sequence,
        via an extension over the free-module embedding of X."""
        field = self.field
        e = self._free_endo_solve(y_act, f, self.embed[xg])
        sec = solve(gmap, Mat.identity(field, gmap.rows))
        if sec is None:
            raise RuntimeError("epimorphism has no linear section")
        sub = self.coker_sub[xg]
        comp = e.mul(sec)
        cols = [sub.coset_coords(comp.col(j)) for j in range(comp.cols)]
        raw = Mat(field, 3 - sub.dim, comp.cols,
                  [[cols[q][r] for q in range(comp.cols)]
                   for r in range(3 - sub.dim)])
        h = self.ident_iso[xg].mul(raw)
        tx = self.shift_obj[xg]
        lhs = h.mul(self.x_act[zg])
        rhs = self.x_act[tx].mul(h)
        if lhs != rhs:
            raise RuntimeError("connecting map is not a module map")
        return h


def _stable_category(field, core: _StableCore, name="STAB") -> FinLinCategory:
    return FinLinCategory(field, core.gens, core.hom_bases, core.comp,
                          core.identities, name=name)


def _shift_functors(field, core: _StableCore, cat: FinLinCategory):
    object_map = {g: ObjectExpr((core.shift_obj[g],)) for g in core.gens}
    hom_maps = {k: m for k, m in core.shift_mats.items() if cat.hom_dim(*k)}
    t = LinearFunctor(cat, cat, object_map, hom_maps, name="T")
    inv_obj = {g: ObjectExpr((core.shift_obj[g],)) for g in core.gens}
    inv_maps = {}
    for a in core.gens:
        for b in core.gens:
            sa, sb = core.shift_obj[a], core.shift_obj[b]
            mat = core.shift_mats[(sa, sb)]
            inv = invert(mat)
            if inv is None:
                raise RuntimeError("shift is not invertible on Hom(%s,%s)" % (a, b))
            inv_maps[(a, b)] = inv
    tinv = LinearFunctor(cat, cat, inv_obj, inv_maps, name="Tinv")
    return t, tinv


def _stable_triangles(field, core: _StableCore, cat, t):
    """The triangles of the two defining short exact sequences plus the
    identity triangle of the approximating generator."""
    m1, m2 = cat.obj("M1"), cat.obj("M2")
    zero = ObjectExpr(())
    sig = Morphism.single(cat, "M1", "M2",
                          core.stable_coords("M1", "M2", core.sigma_model))
    pi = Morphism.single(cat, "M2", "M1",
                         core.stable_coords("M2", "M1", core.pi_model))
    h1 = Morphism.single(cat, "M1", "M2",
                         core.stable_coords("M1", "M2", core.h1))
    t1 = Triangle(m1, m2, m1, sig, pi, h1, name="t1")
    h2 = Morphism.single(cat, "M1", "M1",
                         core.stable_coords("M1", "M1", core.h2))
    t2 = Triangle(m2, zero, m1, Morphism.zero(cat, m2, zero),
                  Morphism.zero(cat, zero, m1), h2, name="t2")
    t3 = Triangle(m2, ObjectExpr(("M2",)), zero, Morphism.identity(cat, m2),
                  Morphism.zero(cat, m2, zero),
                  Morphism.zero(cat, zero, t.apply_obj(m2)), name="t3")
    return [t1, t2, t3]


def build_fix_stab3(field=QQ) -> Workspace:
    """Stable module category of k[x]/(x^3) with its mutation data."""
    core = _StableCore(field)
    cat = _stable_category(field, core)
    t, tinv = _shift_functors(field, core, cat)
    triangles = _stable_triangles(field, core, cat, t)
    tri = TriangulatedPresentation(cat, t, tinv, triangles, name="TC")

    ws = Workspace(field)
    ws.categories["STAB"] = cat
    ws.functors["T"] = t
    ws.functors["Tinv"] = tinv
    ws.triangulated["TC"] = tri
    ws.tri_refs["TC"] = ("STAB", "T", "Tinv")
    ws.subcategories["Zall"] = Subcategory(cat, ["M1", "M2"])
    ws.subcategories["DM2"] = Subcategory(cat, ["M2"])
    fixed = {"M1": triangles[0], "M2": triangles[2]}
    ws.mutations["MU"] = MutationData(tri, ws.subcategories["Zall"],
                                      ws.subcategories["DM2"], fixed, name="MU")
    ws.mutation_refs["MU"] = ("TC", "Zall", "DM2")
    return ws


# ---------------------------------------------------------------------------
# Product of two copies of the stable category


def _prefixed(prefix, name):
    return prefix + name


def _component_category(field, core: _StableCore, prefixes, name):
    gens = []
    for p in prefixes:
        gens.extend(_prefixed(p, g) for g in core.gens)
    hom_bases, comp, identities = {}, {}, {}
    for p in prefixes:
        for a in core.gens:
            for b in core.gens:
                if (a, b) in core.hom_bases:
                    hom_bases[(_prefixed(p, a), _prefixed(p, b))] = core.hom_bases[(a, b)]
        for key, table in core.comp.items():
            a, b, c = key
            comp[(_prefixed(p, a), _prefixed(p, b), _prefixed(p, c))] = table
        for g in core.gens:
            identities[_prefixed(p, g)] = core.identities[g]
    return FinLinCategory(field, gens, hom_bases, comp, identities, name=name)


def _component_shift(field, core: _StableCore, cat, prefixes, name):
    object_map, hom_maps, inv_maps = {}, {}, {}
    for p in prefixes:
        for g in core.gens:
            object_map[_prefixed(p, g)] = ObjectExpr((_prefixed(p, core.shift_obj[g]),))
        for a in core.gens:
            for b in core.gens:
                key = (_prefixed(p, a), _prefixed(p, b))
                if cat.hom_dim(*key):
                    hom_maps[key] = core.shift_mats[(a, b)]
                    sa, sb = core.shift_obj[a], core.shift_obj[b]
                    inv_maps[key] = invert(core.shift_mats[(sa, sb)])
    t = LinearFunctor(cat, cat, object_map, hom_maps, name=name)
    tinv = LinearFunctor(cat, cat, {g: ObjectExpr(object_map[g].summands)
                                    for g in cat.generators},
                         inv_maps, name=name + "inv")
    return t, tinv


def _embed_triangle(cat, t_on_cat, core_triangle: Triangle, prefix, name):
    def conv_obj(obj):
        return ObjectExpr(tuple(_prefixed(prefix, g) for g in obj.summands))

    def conv_mor(mor, src, tgt):
        return Morphism(cat, src, tgt, mor.blocks)

    x, y, z = (conv_obj(core_triangle.x), conv_obj(core_triangle.y),
               conv_obj(core_triangle.z))
    tx = t_on_cat.apply_obj(x)
    return Triangle(x, y, z,
                    conv_mor(core_triangle.f, x, y),
                    conv_mor(core_triangle.g, y, z),
                    conv_mor(core_triangle.h, z, tx), name=name)


def _proj_functor(src_cat, tgt_cat, keep_prefix, strip, name):
    """Component projection: keep one prefix, send the other to zero."""
    object_map, hom_maps = {}, {}
    for g in src_cat.generators:
        if g.startswith(keep_prefix):
            object_map[g] = ObjectExpr((strip(g),))
        else:
            object_map[g] = ObjectExpr(())
    for a in src_cat.generators:
        for b in src_cat.generators:
            d = src_cat.hom_dim(a, b)
            if d == 0:
                continue
            if a.startswith(keep_prefix) and b.startswith(keep_prefix):
                hom_maps[(a, b)] = Mat.identity(src_cat.field, d)
            else:
                hom_maps[(a, b)] = Mat.zeros(src_cat.field, 0, d)
    return LinearFunctor(src_cat, tgt_cat, object_map, hom_maps, name=name)


def _incl_functor(src_cat, tgt_cat, add_prefix, name):
    object_map, hom_maps = {}, {}
    for g in src_cat.generators:
        object_map[g] = ObjectExpr((add_prefix(g),))
    for a in src_cat.generators:
        for b in src_cat.generators:
            d = src_cat.hom_dim(a, b)
            if d:
                hom_maps[(a, b)] = Mat.identity(src_cat.field, d)
    return LinearFunctor(src_cat, tgt_cat, object_map, hom_maps, name=name)


def build_fix_prod(field=QQ) -> Workspace:
    """Product of two copies of the stable category: the componentwise
    recollement carrying triangulated structure and mutation data on the
    closed component."""
    core = _StableCore(field)
    ws = Workspace(field)

    C = _component_category(field, core, ("C1.", "C2."), "C")
    CL = _component_category(field, core, ("L.",), "CL")
    CR = _component_category(field, core, ("R.",), "CR")
    ws.categories["C"] = C
    ws.categories["CL"] = CL
    ws.categories["CR"] = CR

    iu = _proj_functor(C, CL, "C1.", lambda g: "L." + g[3:], "iu")
    ib = _proj_functor(C, CL, "C1.", lambda g: "L." + g[3:], "ib")
    ju = _proj_functor(C, CR, "C2.", lambda g: "R." + g[3:], "ju")
    il = _incl_functor(CL, C, lambda g: "C1." + g[2:], "il")
    jb = _incl_functor(CR, C, lambda g: "C2." + g[2:], "jb")
    jl = _incl_functor(CR, C, lambda g: "C2." + g[2:], "jl")
    for nm, f in (("iu", iu), ("il", il), ("ib", ib),
                  ("jb", jb), ("ju", ju), ("jl", jl)):
        ws.functors[nm] = f

    def ident_comp(cat, g):
        return Morphism.identity(cat, ObjectExpr((g,)))

    u_i, c_i = {}, {}
    for g in C.generators:
        if g.startswith("C1."):
            u_i[g] = ident_comp(C, g)
        else:
            u_i[g] = Morphism.zero(C, ObjectExpr((g,)), ObjectExpr(()))
    for g in CL.generators:
        c_i[g] = ident_comp(CL, g)

    u_ib, c_ib = {}, {}
    for g in CL.generators:
        u_ib[g] = ident_comp(CL, g)
    for g in C.generators:
        if g.startswith("C1."):
            c_ib[g] = ident_comp(C, g)
        else:
            c_ib[g] = Morphism.zero(C, ObjectExpr(()), ObjectExpr((g,)))

    u_jb, c_jb = {}, {}
    for g in CR.generators:
        u_jb[g] = ident_comp(CR, g)
    for g in C.generators:
        if g.startswith("C2."):
            c_jb[g] = ident_comp(C, g)
        else:
            c_jb[g] = Morphism.zero(C, ObjectExpr(()), ObjectExpr((g,)))

    u_j, c_j = {}, {}
    for g in C.generators:
        if g.startswith("C2."):
            u_j[g] = ident_comp(C, g)
        else:
            u_j[g] = Morphism.zero(C, ObjectExpr((g,)), ObjectExpr(()))
    for g in CR.generators:
        c_j[g] = ident_comp(CR, g)

    _register_adjunction(ws, "adj_i", "iu", "il", "C", u_i, c_i)
    _register_adjunction(ws, "adj_ib", "il", "ib", "CL", u_ib, c_ib)
    _register_adjunction(ws, "adj_jb", "jb", "ju", "CR", u_jb, c_jb)
    _register_adjunction(ws, "adj_j", "ju", "jl", "C", u_j, c_j)

    ws.recollements["R"] = Recollement(
        left=CL, middle=C, right=CR,
        i_up=iu, i_lo=il, i_bang=ib, j_bang=jb, j_up=ju, j_lo=jl,
        adj_i=ws.adjunctions["adj_i"], adj_ib=ws.adjunctions["adj_ib"],
        adj_jb=ws.adjunctions["adj_jb"], adj_j=ws.adjunctions["adj_j"])
    ws.rec_refs["R"] = {
        "left": "CL", "middle": "C", "right": "CR",
        "i_up": "iu", "i_lo": "il", "i_bang": "ib",
        "j_bang": "jb", "j_up": "ju", "j_lo": "jl",
        "adj_i": "adj_i", "adj_ib": "adj_ib", "adj_jb": "adj_jb", "adj_j": "adj_j"}

    tc, tcinv = _component_shift(field, core, C, ("C1.", "C2."), "TC")
    tl, tlinv = _component_shift(field, core, CL, ("L.",), "TL")
    tr, trinv = _component_shift(field, core, CR, ("R.",), "TR")
    for nm, f in (("TC", tc), ("TCinv", tcinv), ("TL", tl), ("TLinv", tlinv),
                  ("TR", tr), ("TRinv", trinv)):
        ws.functors[nm] = f

    base_cat = _stable_category(field, core, name="_core")
    tbase, _ = _shift_functors(field, core, base_cat)
    core_triangles = _stable_triangles(field, core, base_cat, tbase)

    tri_c_triangles = []
    for p, tag in (("C1.", "c1_"), ("C2.", "c2_")):
        for t in core_triangles:
            tri_c_triangles.append(_embed_triangle(C, tc, t, p, tag + t.name))
    tri_c = TriangulatedPresentation(C, tc, tcinv, tri_c_triangles, name="TRI_C")
    tri_l = TriangulatedPresentation(
        CL, tl, tlinv,
        [_embed_triangle(CL, tl, t, "L.", t.name) for t in core_triangles],
        name="TRI_L")
    tri_r = TriangulatedPresentation(
        CR, tr, trinv,
        [_embed_triangle(CR, tr, t, "R.", t.name) for t in core_triangles],
        name="TRI_R")
    ws.triangulated["TRI_C"] = tri_c
    ws.triangulated["TRI_L"] = tri_l
    ws.triangulated["TRI_R"] = tri_r
    ws.tri_refs["TRI_C"] = ("C", "TC", "TCinv")
    ws.tri_refs["TRI_L"] = ("CL", "TL", "TLinv")
    ws.tri_refs["TRI_R"] = ("CR", "TR", "TRinv")

    for nm, fn, st, tt in (("ex_iu", "iu", "TRI_C", "TRI_L"),
                           ("ex_il", "il", "TRI_L", "TRI_C"),
                           ("ex_ib", "ib", "TRI_C", "TRI_L"),
                           ("ex_jb", "jb", "TRI_R", "TRI_C"),
                           ("ex_ju", "ju", "TRI_C", "TRI_R"),
                           ("ex_jl", "jl", "TRI_R", "TRI_C")):
        ws.exactdata[nm] = ExactFunctorData(ws.functors[fn],
                                            ws.triangulated[st],
                                            ws.triangulated[tt], None, name=nm)
        ws.exact_refs[nm] = (fn, st, tt, "identity")

    ws.subcategories["Zall"] = Subcategory(C, list(C.generators))
    ws.subcategories["D1"] = Subcategory(C, ["C1.M2"])

    by_name = {t.name: t for t in tri_c_triangles}
    fixed = {
        "C1.M1": by_name["c1_t1"],
        "C1.M2": by_name["c1_t3"],
        "C2.M2": by_name["c2_t2"],
    }
    rot3 = by_name["c2_t2"]
    for _ in range(3):
        rot3 = tri_c.rotate(rot3)
    fixed["C2.M1"] = Triangle(rot3.x, rot3.y, rot3.z, rot3.f, rot3.g, rot3.h,
                              name="c2_rot")
    ws.mutations["MU"] = MutationData(tri_c, ws.subcategories["Zall"],
                                      ws.subcategories["D1"], fixed, name="MU")
    ws.mutation_refs["MU"] = ("TRI_C", "Zall", "D1")
    return ws


BUILDERS = {
    "fix_a2": build_fix_a2,
    "fix_stab3": build_fix_stab3,
    "fix_prod": build_fix_prod,
}


def main(argv=None):
    argv = argv if argv is not None else sys.argv[1:]
    if len(argv) != 1:
        print("usage: python -m rclkit.fixture_gen <output-directory>")
        return 2
    import os
    outdir = argv[0]
    os.makedirs(outdir, exist_ok=True)
    for name, builder in BUILDERS.items():
        ws = builder()
        path = os.path.join(outdir, name + ".rcl")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(serialize(ws))
        print("wrote %s" % path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
