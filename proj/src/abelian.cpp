#include "cpk/abelian.hpp"

#include <stdexcept>

namespace cpk {

FgAbGroup FgAbGroup::free_group(int n) {
    FgAbGroup g;
    g.gens = n;
    g.rel = IntMatrix(n, 0);
    g.free_rank = n;
    return g;
}

FgAbGroup FgAbGroup::from_relations(const IntMatrix& rel) {
    FgAbGroup g;
    g.gens = rel.rows();
    g.rel = rel;
    SmithDecomposition s = smith_decompose(rel);
    g.free_rank = g.gens - s.rank;
    for (const bigint& d : s.diagonal())
        if (d > 1) g.torsion.push_back(d);
    return g;
}

bool FgAbGroup::element_is_zero(const IntMatrix& col) const {
    if (col.rows() != gens || col.cols() != 1)
        throw std::invalid_argument("element_is_zero: wrong shape");
    return in_column_span(rel, col);
}

nlohmann::ordered_json FgAbGroup::to_json() const {
    nlohmann::ordered_json j;
    j["free_rank"] = free_rank;
    auto arr = nlohmann::ordered_json::array();
    for (const bigint& d : torsion) arr.push_back(d.str());
    j["torsion"] = arr;
    return j;
}

GroupHom GroupHom::make(const FgAbGroup& dom, const FgAbGroup& cod, const IntMatrix& m) {
    if (m.rows() != cod.gens || m.cols() != dom.gens)
        throw std::invalid_argument("GroupHom::make: matrix shape does not match presentations");
    return GroupHom{dom, cod, m};
}

bool well_defined(const GroupHom& h) {
    // image of every relation of the domain must be a relation of the codomain
    return in_column_span(h.cod.rel, h.m * h.dom.rel);
}

bool homs_equal(const GroupHom& f, const GroupHom& g) {
    if (f.dom.gens != g.dom.gens || f.cod.gens != g.cod.gens)
        return false;
    return in_column_span(f.cod.rel, f.m - g.m);
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (f.cod.gens != g.dom.gens) throw std::invalid_argument("compose: middle groups differ");
    return GroupHom::make(f.dom, g.cod, g.m * f.m);
}

IsoCheck is_isomorphism(const GroupHom& h) {
    // All three verdicts are computed independently so that a partial
    // certificate (e.g. "injective but not surjective") is still meaningful.
    IsoCheck c;
    c.well_def = well_defined(h);

    // Surjective: generators of cod are hit modulo relations, i.e. the stacked
    // matrix [m | rel_cod] has full-rank Smith form with unit diagonal.
    IntMatrix stacked = IntMatrix::hstack(h.m, h.cod.rel);
    SmithDecomposition s = smith_decompose(stacked);
    c.surjective = (s.rank == h.cod.gens);
    for (int i = 0; i < s.rank && c.surjective; ++i)
        if (s.d.at(i, i) != 1) c.surjective = false;

    // Injective: if m x ≡ 0 (mod rel_cod) then x ≡ 0 (mod rel_dom).  The
    // solutions (x, w) of m x + rel_cod w = 0 are spanned by kernel columns;
    // project to x and check membership in the domain relations.
    IntMatrix ker = kernel_basis(stacked);
    c.injective = true;
    for (int j = 0; j < ker.cols() && c.injective; ++j) {
        IntMatrix x(h.dom.gens, 1);
        for (int i = 0; i < h.dom.gens; ++i) x.at(i, 0) = ker.at(i, j);
        if (!h.dom.element_is_zero(x)) c.injective = false;
    }

    if (!c.well_def)
        c.reason = "does not map relations into relations";
    else if (!c.surjective)
        c.reason = "not surjective onto the codomain quotient";
    else if (!c.injective)
        c.reason = "nontrivial kernel element";
    return c;
}

ExactnessCheck exact_at(const GroupHom& f, const GroupHom& g) {
    ExactnessCheck e;
    if (f.cod.gens != g.dom.gens)
        throw std::invalid_argument("exact_at: arrows do not share the middle group");

    // (1) g∘f = 0 in the quotient
    e.composite_zero = in_column_span(g.cod.rel, g.m * f.m);
    if (!e.composite_zero) {
        e.reason = "composite is nonzero in the target quotient";
        return e;
    }

    // (2) ker g ⊆ im f.  Kernel of the induced map on the middle quotient:
    // y with g y + rel_Z w = 0; each projected y must be f x + rel_Y v.
    IntMatrix ker = kernel_basis(IntMatrix::hstack(g.m, g.cod.rel));
    IntMatrix image = IntMatrix::hstack(f.m, f.cod.rel);
    e.kernel_in_image = true;
    for (int j = 0; j < ker.cols(); ++j) {
        IntMatrix y(g.dom.gens, 1);
        for (int i = 0; i < g.dom.gens; ++i) y.at(i, 0) = ker.at(i, j);
        if (!in_column_span(image, y)) {
            e.kernel_in_image = false;
            e.reason = "kernel element not in the image";
            return e;
        }
    }
    return e;
}

std::optional<GroupHom> solve_hom_constraints(const FgAbGroup& dom, const FgAbGroup& cod,
                                              const std::vector<HomConstraint>& constraints) {
    const int xg = cod.gens, xd = dom.gens;  // X is xg x xd
    const int nx = xg * xd;
    const int nw = cod.rel.cols() * dom.rel.cols();  // well-definedness witness W

    // column-major vec: entry (i,j) of an r x c matrix sits at j*r + i
    auto vec_x = [&](int i, int j) { return j * xg + i; };

    struct Block {
        IntMatrix l, r;          // L (p x xg), R (xd x q) on generators
        IntMatrix relp;          // relations of the constraint codomain
        IntMatrix c;             // rhs, p x q
    };
    std::vector<Block> blocks;
    int nunknown = nx + nw;
    std::vector<int> zoff;  // offset of each constraint's witness variables
    for (const auto& hc : constraints) {
        Block b;
        b.l = hc.left ? hc.left->m : IntMatrix::identity(xg);
        b.r = hc.right ? hc.right->m : IntMatrix::identity(xd);
        b.relp = hc.left ? hc.left->cod.rel : cod.rel;
        b.c = hc.rhs;
        if (b.c.rows() != b.l.rows() || b.c.cols() != b.r.cols())
            throw std::invalid_argument("solve_hom_constraints: rhs shape mismatch");
        if (hc.left && hc.left->dom.gens != xg)
            throw std::invalid_argument("solve_hom_constraints: left factor domain mismatch");
        if (hc.right && hc.right->cod.gens != xd)
            throw std::invalid_argument("solve_hom_constraints: right factor codomain mismatch");
        zoff.push_back(nunknown);
        nunknown += b.relp.cols() * b.c.cols();
        blocks.push_back(std::move(b));
    }

    int neq = xg * dom.rel.cols();
    for (const auto& b : blocks) neq += b.c.rows() * b.c.cols();

    IntMatrix sys(neq, nunknown);
    IntMatrix rhs(neq, 1);
    int row = 0;

    // X * rel_dom = rel_cod * W   (descends to the quotient)
    for (int j = 0; j < dom.rel.cols(); ++j)
        for (int a = 0; a < xg; ++a, ++row) {
            for (int i = 0; i < xd; ++i)
                if (dom.rel.at(i, j) != 0) sys.at(row, vec_x(a, i)) += dom.rel.at(i, j);
            for (int r = 0; r < cod.rel.cols(); ++r)
                if (cod.rel.at(a, r) != 0)
                    sys.at(row, nx + j * cod.rel.cols() + r) -= cod.rel.at(a, r);
        }

    // L X R - rel_P Z = C for each constraint
    for (size_t ci = 0; ci < blocks.size(); ++ci) {
        const Block& b = blocks[ci];
        const int p = b.c.rows(), q = b.c.cols();
        for (int pp = 0; pp < p; ++pp)
            for (int qq = 0; qq < q; ++qq, ++row) {
                for (int a = 0; a < xg; ++a) {
                    if (b.l.at(pp, a) == 0) continue;
                    for (int i = 0; i < xd; ++i)
                        if (b.r.at(i, qq) != 0)
                            sys.at(row, vec_x(a, i)) += b.l.at(pp, a) * b.r.at(i, qq);
                }
                for (int s = 0; s < b.relp.cols(); ++s)
                    if (b.relp.at(pp, s) != 0)
                        sys.at(row, zoff[ci] + qq * b.relp.cols() + s) -= b.relp.at(pp, s);
                rhs.at(row, 0) = b.c.at(pp, qq);
            }
    }

    auto sol = solve_in_integers(sys, rhs);
    if (!sol) return std::nullopt;

    IntMatrix xm(xg, xd);
    for (int i = 0; i < xg; ++i)
        for (int j = 0; j < xd; ++j) xm.at(i, j) = sol->at(vec_x(i, j), 0);
    GroupHom x = GroupHom::make(dom, cod, xm);

    // re-verify: well-defined, and every constraint holds in its quotient
    if (!well_defined(x)) throw std::logic_error("solve_hom_constraints: witness not well-defined");
    for (const auto& hc : constraints) {
        IntMatrix lhs = (hc.left ? hc.left->m : IntMatrix::identity(xg)) * xm *
                        (hc.right ? hc.right->m : IntMatrix::identity(xd));
        const IntMatrix& relp = hc.left ? hc.left->cod.rel : cod.rel;
        if (!in_column_span(relp, lhs - hc.rhs))
            throw std::logic_error("solve_hom_constraints: constraint verification failed");
    }
    return x;
}

}  // namespace cpk
