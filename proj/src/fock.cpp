// Truncated Fock representation, the frame partial isometry w with its
// projection path e_w(t), the word-algebra certificate for the projection
// identity, and the compressed Fredholm index counts.
//
// Everything structural is integer arithmetic on the creation tables; complex
// floating point appears only when the e_w(t) matrices are assembled.

#include <algorithm>
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "cpk/fock.hpp"

namespace cpk {

namespace {

std::vector<int> in_degrees(const DirectedGraph& g) {
    std::vector<int> deg(g.n_vertices(), 0);
    for (const auto& e : g.edges) ++deg[e.dst];
    return deg;
}

// Exact per-level path counts from adjacency powers, before anything is
// enumerated, so the size guard cannot be bypassed by an enumeration blowup.
std::vector<bigint> level_totals(const DirectedGraph& g, int L) {
    const int n = g.n_vertices();
    const IntMatrix a = adjacency(g);
    std::vector<bigint> beta(n, 1);
    std::vector<bigint> totals;
    totals.push_back(n);
    for (int lvl = 1; lvl <= L; ++lvl) {
        std::vector<bigint> next(n, 0);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (a.at(u, v) != 0) next[u] += a.at(u, v) * beta[v];
        bigint total = 0;
        for (const auto& c : next) total += c;
        totals.push_back(total);
        beta = std::move(next);
    }
    return totals;
}

}  // namespace

int TruncatedFockRep::basis_index(const Path& p, int base_vertex) const {
    if (p.empty()) {
        if (base_vertex < 0 || base_vertex >= graph.n_vertices()) return -1;
        return base_vertex;  // vacua head the basis, in vertex order
    }
    const int l = p.length();
    if (l > level) return -1;
    for (int i = level_offset[l]; i < level_offset[l + 1]; ++i)
        if (basis[i] == p) return i;
    return -1;
}

std::vector<std::vector<double>> TruncatedFockRep::creation_matrix(int e) const {
    std::vector<std::vector<double>> m(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < dim; ++i)
        if (create[e][i] >= 0) m[create[e][i]][i] = 1.0;
    return m;
}

std::vector<double> TruncatedFockRep::vertex_projection_diagonal(int v) const {
    std::vector<double> d(dim, 0.0);
    for (int i = 0; i < dim; ++i)
        if (range_of[i] == v) d[i] = 1.0;
    return d;
}

std::vector<double> TruncatedFockRep::band_diagonal(int lo, int hi) const {
    std::vector<double> d(dim, 0.0);
    for (int i = 0; i < dim; ++i)
        if (level_of[i] >= lo && level_of[i] <= hi) d[i] = 1.0;
    return d;
}

TruncatedFockRep build_fock_rep(const DirectedGraph& g, int L, std::int64_t max_dim) {
    if (L < 2) throw std::invalid_argument("build_fock_rep: level must be at least 2");
    if (g.n_vertices() == 0) throw std::invalid_argument("build_fock_rep: empty graph");

    const auto totals = level_totals(g, L);
    bigint running = 0;
    for (int l = 0; l <= L; ++l) {
        running += totals[l];
        if (running > bigint(max_dim)) {
            std::ostringstream os;
            os << "build_fock_rep: " << running << " basis paths through level " << l
               << " exceed the cap " << max_dim;
            throw std::length_error(os.str());
        }
    }

    TruncatedFockRep rep;
    rep.graph = g;
    rep.level = L;
    rep.dim = static_cast<int>(running.convert_to<std::int64_t>());

    rep.level_offset.assign(L + 2, 0);
    for (int v = 0; v < g.n_vertices(); ++v) {
        rep.basis.push_back(Path{});
        rep.range_of.push_back(v);
        rep.source_of.push_back(v);
        rep.level_of.push_back(0);
    }
    rep.level_offset[1] = g.n_vertices();
    for (int l = 1; l <= L; ++l) {
        for (auto& p : enumerate_paths(g, l)) {
            rep.range_of.push_back(path_range(g, p, -1));
            rep.source_of.push_back(path_source(g, p, -1));
            rep.level_of.push_back(l);
            rep.basis.push_back(std::move(p));
        }
        rep.level_offset[l + 1] = static_cast<int>(rep.basis.size());
    }
    if (static_cast<int>(rep.basis.size()) != rep.dim)
        throw std::logic_error("build_fock_rep: enumeration disagrees with adjacency counts");

    std::map<std::vector<int>, int> by_edges;
    for (int i = rep.level_offset[1]; i < rep.dim; ++i) by_edges[rep.basis[i].edges] = i;

    rep.create.assign(g.n_edges(), std::vector<int>(rep.dim, -1));
    for (int e = 0; e < g.n_edges(); ++e) {
        const int se = g.edges[e].src;
        for (int i = 0; i < rep.dim; ++i) {
            if (rep.level_of[i] >= L || rep.range_of[i] != se) continue;
            std::vector<int> key;
            key.reserve(rep.basis[i].edges.size() + 1);
            key.push_back(e);
            key.insert(key.end(), rep.basis[i].edges.begin(), rep.basis[i].edges.end());
            auto it = by_edges.find(key);
            if (it == by_edges.end())
                throw std::logic_error("build_fock_rep: missing composite basis path");
            rep.create[e][i] = it->second;
        }
    }

    // --- integer structural self-tests ---------------------------------
    // first_edge / parent tables (annihilation)
    std::vector<int> first_edge(rep.dim, -1), parent(rep.dim, -1);
    for (int e = 0; e < g.n_edges(); ++e)
        for (int i = 0; i < rep.dim; ++i)
            if (rep.create[e][i] >= 0) {
                const int j = rep.create[e][i];
                if (first_edge[j] != -1)
                    throw std::logic_error("build_fock_rep: creation tables overlap");
                first_edge[j] = e;
                parent[j] = i;
            }
    for (int j = 0; j < rep.dim; ++j) {
        if (rep.level_of[j] == 0) continue;
        if (first_edge[j] != rep.basis[j].edges.front() || parent[j] < 0)
            throw std::logic_error("build_fock_rep: annihilation table inconsistent");
    }

    // T_e* T_f = delta_{ef} diag(p_{s(e)}) on levels <= L-1
    for (int e = 0; e < g.n_edges(); ++e) {
        const int se = g.edges[e].src;
        for (int f = 0; f < g.n_edges(); ++f) {
            for (int i = 0; i < rep.dim; ++i) {
                if (rep.level_of[i] > L - 1) continue;
                const int up = rep.create[f][i];
                int got = -1;  // index of T_e* T_f delta_i, -1 = zero vector
                if (up >= 0 && first_edge[up] == e) got = parent[up];
                const int want = (e == f && rep.range_of[i] == se) ? i : -1;
                if (got != want)
                    throw std::logic_error("build_fock_rep: annihilation-creation identity fails");
            }
        }
    }

    // sum_{r(e)=v} T_e T_e* = p_v on levels 1..L, and the level-1 frame slice
    for (int j = 0; j < rep.dim; ++j) {
        if (rep.level_of[j] == 0) continue;
        const int e = first_edge[j];
        if (g.edges[e].dst != rep.range_of[j] ||
            rep.create[e][parent[j]] != j)
            throw std::logic_error("build_fock_rep: frame identity fails on the truncation");
    }

    return rep;
}

// --- w and e_w(t) --------------------------------------------------------

namespace {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;

void check_frame(const DirectedGraph& g, const std::vector<int>& frame_edges) {
    if (static_cast<int>(frame_edges.size()) != g.n_edges())
        throw std::invalid_argument("edge frame must list every edge exactly once");
    std::set<int> seen;
    for (int e : frame_edges) {
        if (e < 0 || e >= g.n_edges() || !seen.insert(e).second)
            throw std::invalid_argument("edge frame must list every edge exactly once");
    }
}

double masked_max_abs(const CMat& m, const std::vector<double>& row_mask,
                      const std::vector<double>& col_mask) {
    double worst = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        if (row_mask[i] == 0.0) continue;
        for (int j = 0; j < m.cols(); ++j) {
            if (col_mask[j] == 0.0) continue;
            worst = std::max(worst, std::abs(m(i, j)));
        }
    }
    return worst;
}

// e_w(t) over the truncated representation: 2k slots of dimension d.
CMat assemble_ew(const TruncatedFockRep& rep, const std::vector<int>& frame,
                 double t) {
    const int k = static_cast<int>(frame.size());
    const int d = rep.dim;
    const double s = 1.0 / (1.0 + t * t);
    CMat e = CMat::Zero(2 * k * d, 2 * k * d);
    const cdouble its(0.0, t * s);
    for (int i = 0; i < k; ++i) {
        const int ei = frame[i];
        const int sv = rep.graph.edges[ei].src;
        for (int x = 0; x < d; ++x) {
            const double q = (rep.range_of[x] == sv) ? 1.0 : 0.0;
            e(i * d + x, i * d + x) = 1.0 - s * q;  // 1_k - s q
            const int up = rep.create[ei][x];
            if (up >= 0) {
                e(i * d + x, k * d + up) = -its;  // -i t s w: annihilate e_i x -> x
                e(k * d + up, i * d + x) = its;   // i t s w*: create into slot 0
            }
        }
    }
    for (int x = 0; x < d; ++x) e(k * d + x, k * d + x) = s;  // s (1 + 0_{k-1})
    return e;
}

}  // namespace

WEwReport build_w_ew(const TruncatedFockRep& rep, const std::vector<int>& frame_edges,
                     const std::vector<double>& t_samples) {
    const DirectedGraph& g = rep.graph;
    check_frame(g, frame_edges);
    const int k = static_cast<int>(frame_edges.size());
    const int d = rep.dim;
    const int L = rep.level;

    WEwReport rpt;
    rpt.k = k;
    rpt.frame_edges = frame_edges;

    // ww* - q and w*w - (1 + 0_{k-1}) on the band 1..L-1
    const auto band = rep.band_diagonal(1, L - 1);
    {
        double worst = 0.0;
        for (int i = 0; i < k; ++i) {
            const int ei = frame_edges[i];
            for (int j = 0; j < k; ++j) {
                const int ej = frame_edges[j];
                const int svi = g.edges[ei].src;
                for (int x = 0; x < d; ++x) {
                    if (band[x] == 0.0) continue;
                    // (ww*)_{ij} delta_x = T_{e_i}* T_{e_j} delta_x
                    const int up = rep.create[ej][x];
                    for (int y = 0; y < d; ++y) {
                        if (band[y] == 0.0) continue;
                        double got = (up >= 0 && rep.create[ei][y] == up) ? 1.0 : 0.0;
                        double want = (i == j && x == y && rep.range_of[x] == svi) ? 1.0 : 0.0;
                        worst = std::max(worst, std::abs(got - want));
                    }
                }
            }
        }
        rpt.ww_star_band_residual = worst;
    }
    {
        // (w*w)_{00} = sum_e T_e T_e*; off-slots are exactly zero by shape
        double worst = 0.0;
        for (int x = 0; x < d; ++x) {
            if (band[x] == 0.0) continue;
            for (int y = 0; y < d; ++y) {
                if (band[y] == 0.0) continue;
                double got = 0.0;
                for (int e : frame_edges)
                    if (rep.level_of[x] >= 1 && rep.basis[x].edges.front() == e && x == y)
                        got = 1.0;
                const double want = (x == y) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(got - want));
            }
        }
        rpt.w_star_w_band_residual = worst;
    }

    // masks over the 2k-slot space
    const int n2 = 2 * k * d;
    std::vector<double> band_mask(n2, 0.0), full_mask(n2, 1.0);
    for (int slot = 0; slot < 2 * k; ++slot)
        for (int x = 0; x < d; ++x) band_mask[slot * d + x] = band[x];

    for (double t : t_samples) {
        WEwTValues row;
        row.t = t;
        const double s = 1.0 / (1.0 + t * t);
        row.vacuum_defect_predicted = t * t * s * s;

        CMat e = assemble_ew(rep, frame_edges, t);
        CMat defect = e * e - e;
        row.projection_residual = masked_max_abs(defect, band_mask, band_mask);
        double vac = 0.0;
        for (int v = 0; v < g.n_vertices(); ++v)
            vac = std::max(vac, std::abs(defect(k * d + v, k * d + v)));
        row.vacuum_defect = vac;

        double comm = 0.0;
        for (int v = 0; v < g.n_vertices(); ++v) {
            Eigen::VectorXd diag = Eigen::VectorXd::Zero(n2);
            for (int i = 0; i < k; ++i) {
                const int ei = frame_edges[i];
                if (g.edges[ei].dst != v) continue;
                const int sv = g.edges[ei].src;
                for (int x = 0; x < d; ++x)
                    if (rep.range_of[x] == sv) diag(i * d + x) = 1.0;
            }
            for (int i = 0; i < k; ++i)
                for (int x = 0; x < d; ++x)
                    if (rep.range_of[x] == v) diag((k + i) * d + x) = 1.0;
            CMat c = e * diag.asDiagonal();
            c -= diag.asDiagonal() * e;
            comm = std::max(comm, masked_max_abs(c, full_mask, full_mask));
        }
        row.commutation_residual = comm;
        rpt.t_rows.push_back(row);
    }

    auto cert = ew_symbolic_certificate();
    rpt.symbolic_certified = cert.ok;
    rpt.symbolic_note = cert.note;

    // unitary specialization: one slot, w replaced by a cyclic shift
    {
        const int n = 4;
        CMat u = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) u((i + 1) % n, i) = 1.0;
        double worst = 0.0;
        for (double t : t_samples) {
            const double s = 1.0 / (1.0 + t * t);
            CMat e = CMat::Zero(2 * n, 2 * n);
            for (int i = 0; i < n; ++i) {
                e(i, i) = t * t * s;
                e(n + i, n + i) = s;
            }
            e.block(0, n, n, n) = cdouble(0.0, -t * s) * u;
            e.block(n, 0, n, n) = cdouble(0.0, t * s) * u.adjoint();
            worst = std::max(worst, (e * e - e).cwiseAbs().maxCoeff());
        }
        rpt.rotation_form_residual = worst;
    }

    return rpt;
}

// --- word-algebra certificate -------------------------------------------

namespace {

// Gaussian rationals
struct GaussRat {
    bigrat re{0}, im{0};
    bool zero() const { return re == 0 && im == 0; }
};
GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// Span of {1, w, w*, p, q} closed under every product that arises in
// e_w(t)^2: the partial multiplication table below covers exactly those.
enum Sym { kOne = 0, kW, kWst, kP, kQ, kSymCount };

std::optional<Sym> sym_mul(Sym a, Sym b) {
    if (a == kOne) return b;
    if (b == kOne) return a;
    if (a == kQ && b == kQ) return kQ;
    if (a == kQ && b == kW) return kW;    // q w = w
    if (a == kW && b == kWst) return kQ;  // w w* = q
    if (a == kW && b == kP) return kW;    // w p = w
    if (a == kWst && b == kW) return kP;  // w* w = p
    if (a == kWst && b == kQ) return kWst;
    if (a == kP && b == kWst) return kWst;
    if (a == kP && b == kP) return kP;
    return std::nullopt;
}

struct Elem {
    std::array<GaussRat, kSymCount> c{};
    bool zero() const {
        for (const auto& x : c)
            if (!x.zero()) return false;
        return true;
    }
};
Elem operator+(const Elem& a, const Elem& b) {
    Elem r;
    for (int i = 0; i < kSymCount; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}
Elem operator-(const Elem& a, const Elem& b) {
    Elem r;
    for (int i = 0; i < kSymCount; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}
Elem mul(const Elem& a, const Elem& b) {
    Elem r;
    for (int i = 0; i < kSymCount; ++i) {
        if (a.c[i].zero()) continue;
        for (int j = 0; j < kSymCount; ++j) {
            if (b.c[j].zero()) continue;
            auto s = sym_mul(static_cast<Sym>(i), static_cast<Sym>(j));
            if (!s)
                throw std::logic_error("word algebra: product outside the closed span");
            r.c[*s] = r.c[*s] + a.c[i] * b.c[j];
        }
    }
    return r;
}

Elem scalar(const GaussRat& x, Sym s) {
    Elem e;
    e.c[s] = x;
    return e;
}

}  // namespace

SymbolicCertificate ew_symbolic_certificate(int n_points) {
    SymbolicCertificate cert;
    if (n_points < 1) n_points = 1;
    cert.points = n_points;

    const bigrat t_values[] = {bigrat(0),     bigrat(1),      bigrat(-1),
                               bigrat(2),     bigrat(-2),     bigrat(1, 2),
                               bigrat(3),     bigrat(-3),     bigrat(1, 3),
                               bigrat(5),     bigrat(-1, 2),  bigrat(7)};
    const int available = static_cast<int>(sizeof(t_values) / sizeof(t_values[0]));
    const int use = std::min(n_points, available);
    cert.points = use;

    bool ok = true;
    try {
        for (int pt = 0; pt < use; ++pt) {
            const bigrat t = t_values[pt];
            const bigrat s = bigrat(1) / (1 + t * t);
            // e = [[1 - s q, -i t s w], [i t s w*, s p]]
            Elem a = scalar({bigrat(1), bigrat(0)}, kOne) - scalar({s, bigrat(0)}, kQ);
            Elem b = scalar({bigrat(0), -t * s}, kW);
            Elem c = scalar({bigrat(0), t * s}, kWst);
            Elem d = scalar({s, bigrat(0)}, kP);
            Elem e11 = mul(a, a) + mul(b, c) - a;
            Elem e12 = mul(a, b) + mul(b, d) - b;
            Elem e21 = mul(c, a) + mul(d, c) - c;
            Elem e22 = mul(c, b) + mul(d, d) - d;
            if (!(e11.zero() && e12.zero() && e21.zero() && e22.zero())) ok = false;
        }
    } catch (const std::logic_error& err) {
        ok = false;
        cert.note = err.what();
        cert.ok = false;
        return cert;
    }
    cert.ok = ok;
    std::ostringstream os;
    os << "projection identity verified at " << use << " rational points";
    if (use >= 5)
        os << " (entries of (1+t^2)^2 (e^2-e) have degree <= 4 in t, so 5 suffice)";
    cert.note = os.str();
    return cert;
}

// --- compressed Fredholm index ------------------------------------------

FredholmIndexReport fredholm_index_compressed(const TruncatedFockRep& rep,
                                              const std::vector<int>& frame_edges) {
    const DirectedGraph& g = rep.graph;
    check_frame(g, frame_edges);
    const int k = static_cast<int>(frame_edges.size());
    const int L = rep.level;
    const auto indeg = in_degrees(g);

    FredholmIndexReport out;
    out.level = L;

    // codomain rows: (slot i, basis j) with r(basis j) = s(e_i)
    std::map<std::pair<int, int>, int> codomain;  // -> level of the row
    for (int i = 0; i < k; ++i) {
        const int sv = g.edges[frame_edges[i]].src;
        for (int j = 0; j < rep.dim; ++j)
            if (rep.range_of[j] == sv) codomain[{i, j}] = rep.level_of[j];
    }

    std::set<std::pair<int, int>> hit;
    bool ok = true;
    for (int x = 0; x < rep.dim; ++x) {
        if (rep.level_of[x] == 0) {
            // in the domain only when the vertex receives an edge; killed there
            if (indeg[rep.range_of[x]] > 0) ++out.dim_ker;
            continue;
        }
        const int e = rep.basis[x].edges.front();
        int slot = -1;
        for (int i = 0; i < k; ++i)
            if (frame_edges[i] == e) slot = i;
        // strip the leading edge
        Path tail = rep.basis[x];
        tail.edges.erase(tail.edges.begin());
        const int target = rep.basis_index(tail, rep.source_of[x]);
        if (slot < 0 || target < 0 || codomain.find({slot, target}) == codomain.end()) {
            ok = false;
            continue;
        }
        if (!hit.insert({slot, target}).second) ok = false;  // two columns, one row
    }
    out.partial_permutation_ok = ok;

    for (const auto& [key, lvl] : codomain) {
        if (hit.count(key)) continue;
        if (lvl == L)
            ++out.boundary_rows_excluded;  // preimage would have length L+1
        else
            ++out.dim_coker;
    }
    out.index = out.dim_ker - out.dim_coker;
    return out;
}

FredholmStability fredholm_index_stability(const DirectedGraph& g, int L,
                                           const std::vector<int>& frame_edges,
                                           std::int64_t max_dim) {
    FredholmStability st;
    st.at_level = fredholm_index_compressed(build_fock_rep(g, L, max_dim), frame_edges);
    st.at_level_plus_2 =
        fredholm_index_compressed(build_fock_rep(g, L + 2, max_dim), frame_edges);
    st.stable = st.at_level.partial_permutation_ok &&
                st.at_level_plus_2.partial_permutation_ok &&
                st.at_level.index == st.at_level_plus_2.index;
    return st;
}

}  // namespace cpk
