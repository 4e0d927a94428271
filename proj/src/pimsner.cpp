#include "cpk/pimsner.hpp"

namespace cpk {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i];
    }
    return s;
}

// shared assembly: groups and arrows of  0 -> K_top -> Z^n --B--> Z^n -> K_bot -> 0
// with K_bot = coker B presented by B and K_top = ker B embedded by its basis.
struct ExtensionData {
    FgAbGroup coker, kernel, free_n;
    GroupHom quotient;   // Z^n -> coker, identity on generators
    GroupHom inclusion;  // ker  -> Z^n, kernel basis
};

ExtensionData extension_data(const IntMatrix& b) {
    ExtensionData e;
    const int n = b.rows();
    e.free_n = FgAbGroup::free_group(n);
    e.coker = FgAbGroup::from_relations(b);
    IntMatrix k = kernel_basis(b);
    e.kernel = FgAbGroup::free_group(k.cols());
    e.quotient = GroupHom::make(e.free_n, e.coker, IntMatrix::identity(n));
    e.inclusion = GroupHom::make(e.kernel, e.free_n, k);
    return e;
}

}  // namespace

nlohmann::ordered_json KData::to_json() const {
    nlohmann::ordered_json j;
    j["algebra"] = algebra;
    j["mode"] = mode == KMode::Theory ? "k_theory" : "k_homology";
    j[mode == KMode::Theory ? "k0" : "k^0"] = k0.to_json();
    j[mode == KMode::Theory ? "k1" : "k^1"] = k1.to_json();
    return j;
}

KData cp_k_theory(const DirectedGraph& g) {
    IntMatrix b = IntMatrix::identity(g.n_vertices()) - adjacency(g).transpose();
    ExtensionData e = extension_data(b);
    KData k;
    k.mode = KMode::Theory;
    k.algebra = "O(G)";
    k.presentation = b;
    k.k0 = e.coker;
    k.k1 = e.kernel;
    k.map_in = e.quotient;
    k.map_out = e.inclusion;
    return k;
}

KData cp_k_homology(const DirectedGraph& g) {
    IntMatrix b = IntMatrix::identity(g.n_vertices()) - adjacency(g);
    ExtensionData e = extension_data(b);
    KData k;
    k.mode = KMode::Homology;
    k.algebra = "O(G)";
    k.presentation = b;
    k.k0 = e.kernel;  // K^0 = ker(1 - A), torsion-free by construction
    k.k1 = e.coker;   // K^1 = coker(1 - A)
    k.map_in = e.quotient;
    k.map_out = e.inclusion;
    return k;
}

KData dual_k_data(const DirectedGraph& g, DualChoice choice) {
    GraphPredicates p = graph_predicates(g);
    if (choice == DualChoice::Eop) {
        if (p.has_sinks)
            throw hypothesis_error("dual choice Eop needs a graph with no sinks; sinks: " +
                                   join(p.sink_vertices));
        // the opposite-orientation graph's own extension; its adjacency is the
        // transpose, so the presentation becomes 1 - A
        KData k = cp_k_theory(opposite_graph(g));
        k.algebra = "O(G_op)";
        return k;
    }

    if (p.has_sources)
        throw hypothesis_error("dual choice EbarOp needs a graph with no sources; sources: " +
                               join(p.source_vertices));
    // transpose functor on the K-data of O(G): transposing the presenting
    // matrix (1 - A^t)^t = 1 - A gives the presentation of the opposite algebra
    IntMatrix b = cp_k_theory(g).presentation.transpose();
    ExtensionData e = extension_data(b);
    KData k;
    k.mode = KMode::Theory;
    k.algebra = "O(G)_op";
    k.presentation = b;
    k.k0 = e.coker;
    k.k1 = e.kernel;
    k.map_in = e.quotient;
    k.map_out = e.inclusion;
    return k;
}

PairingData make_pairing(const DirectedGraph& g) {
    PairingData p;
    p.mu = IntMatrix::identity(g.n_vertices());
    p.beta = IntMatrix::identity(g.n_vertices());
    p.degree_shift = 0;
    return p;
}

CapProducts cap_products(const DirectedGraph& g) {
    const int n = g.n_vertices();
    IntMatrix a = adjacency(g);
    GraphPredicates pred = graph_predicates(g);
    CapProducts out;

    auto finish = [&](CapProduct& c) {
        if (c.available) c.matches_adjacency = (c.matrix == a);
    };

    // ---- products with mu: all land on l^2(G^1) with a(r(g)), b(s(g)) actions

    // edge module against mu: evaluate the left leg at the range and the right
    // leg at the source of each edge
    out.fund_e_mu.label = "[E]xmu";
    out.fund_e_mu.available = !pred.has_sources;
    if (pred.has_sources)
        out.fund_e_mu.gate_note = "needs no sources: " + join(pred.source_vertices);
    else {
        out.fund_e_mu.matrix = IntMatrix(n, n);
        for (const auto& e : g.edges) out.fund_e_mu.matrix.at(e.dst, e.src) += 1;
    }
    finish(out.fund_e_mu);

    // opposite-orientation module against mu: same recipe run in the opposite
    // graph, then transported back (range and source swap twice, landing on
    // the same cells)
    out.fund_eop_mu.label = "[Eop]xmu";
    out.fund_eop_mu.available = !pred.has_sources && !pred.has_sinks;
    if (!out.fund_eop_mu.available)
        out.fund_eop_mu.gate_note = "needs no sources and no sinks; sources: " +
                                    join(pred.source_vertices) +
                                    " sinks: " + join(pred.sink_vertices);
    else {
        DirectedGraph go = opposite_graph(g);
        out.fund_eop_mu.matrix = IntMatrix(n, n);
        for (const auto& e : go.edges)
            // e runs s_op -> r_op; transported to the base graph the left leg
            // evaluates at s_op(e) = r(original), the right leg at r_op(e)
            out.fund_eop_mu.matrix.at(e.src, e.dst) += 1;
    }
    finish(out.fund_eop_mu);

    // conjugate-opposite module against mu: the unitary identification sends
    // f otimes conj(h) otimes xi to the function g -> f(r(g)) conj(h(g)) xi(r(g)),
    // so both vertex legs read through the range while the edge leg carries the
    // count; the resulting class is the same range/source module
    out.fund_ebarop_mu.label = "[EbarOp]xmu";
    out.fund_ebarop_mu.available = !pred.has_sources;
    if (pred.has_sources)
        out.fund_ebarop_mu.gate_note = "needs no sources: " + join(pred.source_vertices);
    else {
        out.fund_ebarop_mu.matrix = IntMatrix(n, n);
        for (const auto& e : g.edges) out.fund_ebarop_mu.matrix.at(e.dst, e.src) += 1;
    }
    finish(out.fund_ebarop_mu);

    // ---- products with beta: all land on C(G^1) with right action
    //      h.(f1 x f2)(g) = h(g) f1(s(g)) f2(r(g)), inner product counting
    //      edges at (source, range); stored here with rows at range

    out.beta_e.label = "betax[E]";
    out.beta_e.available = !pred.has_sources;
    if (pred.has_sources)
        out.beta_e.gate_note = "needs no sources: " + join(pred.source_vertices);
    else {
        out.beta_e.matrix = IntMatrix(n, n);
        for (const auto& e : g.edges) {
            int f1_slot = e.src, f2_slot = e.dst;  // f1 at source, f2 at range
            out.beta_e.matrix.at(f2_slot, f1_slot) += 1;
        }
    }
    finish(out.beta_e);

    out.beta_eop.label = "betax[Eop]";
    out.beta_eop.available = !pred.has_sources && !pred.has_sinks;
    if (!out.beta_eop.available)
        out.beta_eop.gate_note = "needs no sources and no sinks; sources: " +
                                 join(pred.source_vertices) +
                                 " sinks: " + join(pred.sink_vertices);
    else {
        DirectedGraph go = opposite_graph(g);
        out.beta_eop.matrix = IntMatrix(n, n);
        for (const auto& e : go.edges) {
            int f1_slot = e.dst, f2_slot = e.src;  // op source/range swap back
            out.beta_eop.matrix.at(f2_slot, f1_slot) += 1;
        }
    }
    finish(out.beta_eop);

    out.beta_ebarop.label = "betax[EbarOp]";
    out.beta_ebarop.available = !pred.has_sources;
    if (pred.has_sources)
        out.beta_ebarop.gate_note = "needs no sources: " + join(pred.source_vertices);
    else {
        // identification V(a x b x conj(h))(g) = a(s(g)) b(s(g)) conj(h(g));
        // the product module is the same source/range module as for beta x [E]
        out.beta_ebarop.matrix = IntMatrix(n, n);
        for (const auto& e : g.edges) out.beta_ebarop.matrix.at(e.dst, e.src) += 1;
    }
    finish(out.beta_ebarop);

    auto consistent = [](std::initializer_list<const CapProduct*> ps) {
        const IntMatrix* first = nullptr;
        for (const CapProduct* p : ps) {
            if (!p->available) continue;
            if (!first)
                first = &p->matrix;
            else if (p->matrix != *first)
                return false;
        }
        return first != nullptr;
    };
    out.mu_family_consistent =
        consistent({&out.fund_e_mu, &out.fund_eop_mu, &out.fund_ebarop_mu});
    out.beta_family_consistent = consistent({&out.beta_e, &out.beta_eop, &out.beta_ebarop});
    return out;
}

ProjectionClass transpose_projection_class(const ProjectionClass& c) {
    return ProjectionClass{c.p.transpose(), c.algebra, !c.opposite};
}

}  // namespace cpk
