#include "cpk/watatani.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "cpk/pimsner.hpp"

namespace cpk {

namespace {

// levels[m][v] = #{paths of length m with range v}, m = 0..n.
std::vector<std::vector<bigint>> counts_up_to(const DirectedGraph& g, int n) {
    const int nv = g.n_vertices();
    IntMatrix a = adjacency(g);
    std::vector<std::vector<bigint>> levels;
    levels.emplace_back(nv, bigint(1));
    for (int m = 1; m <= n; ++m) {
        std::vector<bigint> next(nv, bigint(0));
        const auto& prev = levels.back();
        for (int u = 0; u < nv; ++u)
            for (int v = 0; v < nv; ++v)
                if (a.at(u, v) != 0) next[u] += a.at(u, v) * prev[v];
        levels.push_back(std::move(next));
    }
    return levels;
}

void validate_path(const DirectedGraph& g, const Path& alpha, const char* who) {
    if (alpha.empty())
        throw std::invalid_argument(std::string(who) + ": empty path not supported");
    for (int id : alpha.edges)
        if (id < 0 || id >= g.n_edges())
            throw std::invalid_argument(std::string(who) + ": edge id out of range");
    for (size_t i = 0; i + 1 < alpha.edges.size(); ++i)
        if (g.edges[alpha.edges[i]].src != g.edges[alpha.edges[i + 1]].dst)
            throw std::invalid_argument(std::string(who) + ": edges do not compose");
}

float50 to_f50(const bigrat& q) {
    return float50(boost::multiprecision::numerator(q)) /
           float50(boost::multiprecision::denominator(q));
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

// --- small numerics ----------------------------------------------------

struct LinFit {
    float50 slope{0};
    float50 intercept{0};
    float50 r2{0};
    bool ok = false;
};

LinFit fit_line(const std::vector<float50>& xs, const std::vector<float50>& ys) {
    LinFit f;
    const size_t n = xs.size();
    if (n < 3 || ys.size() != n) return f;
    float50 mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    float50 sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy == 0) {
        f.r2 = 1;
    } else {
        float50 rss = 0;
        for (size_t i = 0; i < n; ++i) {
            float50 e = ys[i] - (f.intercept + f.slope * xs[i]);
            rss += e * e;
        }
        f.r2 = 1 - rss / syy;
    }
    f.ok = true;
    return f;
}

std::vector<float50> aitken(const std::vector<float50>& s) {
    std::vector<float50> out;
    for (size_t i = 0; i + 2 < s.size(); ++i) {
        float50 d1 = s[i + 1] - s[i];
        float50 d2 = s[i + 2] - s[i + 1];
        float50 den = d2 - d1;
        if (abs(den) < float50("1e-45"))
            out.push_back(s[i + 2]);
        else
            out.push_back(s[i + 2] - d2 * d2 / den);
    }
    return out;
}

// Polynomial extrapolation to x = 0 through (xs[i], ys[i]).
float50 neville_at_zero(const std::vector<float50>& xs, std::vector<float50> p) {
    const int n = static_cast<int>(p.size());
    for (int lvl = 1; lvl < n; ++lvl)
        for (int i = 0; i + lvl < n; ++i)
            p[i] = (-xs[i + lvl] * p[i] + xs[i] * p[i + 1]) / (xs[i] - xs[i + lvl]);
    return p[0];
}

// How well the residuals |q_m - L| follow a geometric or polynomial decay law.
struct CandidateFit {
    bool valid = false;
    bool stabilized = false;  // residuals all below working precision
    DecayClass decay = DecayClass::None;
    float50 rate{0};
    float50 r2{-1};
};

CandidateFit classify_residuals(const std::vector<int>& ms, const std::vector<float50>& q,
                                const float50& L) {
    CandidateFit c;
    std::vector<float50> xs_lin, xs_log, ys;
    float50 r_first = -1, r_last = -1;
    size_t tiny = 0;
    for (size_t i = 0; i < ms.size(); ++i) {
        float50 r = abs(q[i] - L);
        if (r_first < 0) r_first = r;
        r_last = r;
        if (r < float50("1e-45")) {
            ++tiny;
            continue;
        }
        xs_lin.push_back(float50(ms[i]));
        xs_log.push_back(log(float50(ms[i])));
        ys.push_back(log(r));
    }
    if (tiny == ms.size()) {
        c.valid = true;
        c.stabilized = true;
        c.decay = DecayClass::Geometric;
        c.rate = 0;
        c.r2 = 1;
        return c;
    }
    if (ys.size() < 5) return c;
    if (!(r_last <= r_first * float50("0.9"))) return c;  // not actually decaying
    LinFit fg = fit_line(xs_lin, ys);
    LinFit fp = fit_line(xs_log, ys);
    bool g_ok = fg.ok && fg.slope < 0;
    bool p_ok = fp.ok && fp.slope < 0;
    if (!g_ok && !p_ok) return c;
    if (g_ok && (!p_ok || fg.r2 >= fp.r2)) {
        c.decay = DecayClass::Geometric;
        c.rate = exp(fg.slope);
        c.r2 = fg.r2;
    } else {
        c.decay = DecayClass::Polynomial;
        c.rate = -fp.slope;
        c.r2 = fp.r2;
    }
    c.valid = true;
    return c;
}

void annotate_closed_form(const DirectedGraph& g, int sv, int rv, int k, QLimitResult& r,
                          double tol) {
    GraphPredicates pred = graph_predicates(g);
    if (!pred.primitive || pred.has_sources || pred.has_sinks) return;
    PerronData pd = perron(g);
    if (!pd.data_valid) return;
    double cf = pd.w[sv] / (std::pow(pd.lambda, k) * pd.w[rv]);
    r.closed_form_checked = true;
    r.closed_form_value = cf;
    r.closed_form_gap = std::abs(r.limit - cf);
    if (r.closed_form_gap > std::max(tol, 1e-6) * std::max(1.0, std::abs(cf)))
        r.note += (r.note.empty() ? "" : "; ") + std::string("closed-form mismatch: Perron value ") +
                  fmt(cf);
}

}  // namespace

// --- exact counts ------------------------------------------------------

WatataniVector watatani_index(const DirectedGraph& g, int n) {
    if (n < 0) throw std::invalid_argument("watatani_index: negative level");
    WatataniVector w;
    w.n = n;
    w.values = counts_up_to(g, n).back();
    return w;
}

bigrat q_coefficient(const DirectedGraph& g, const Path& alpha, int n) {
    validate_path(g, alpha, "q_coefficient");
    const int k = alpha.length();
    if (n < k) throw std::invalid_argument("q_coefficient: level below path length");
    auto levels = counts_up_to(g, n);
    const int rv = path_range(g, alpha, 0);
    const int sv = path_source(g, alpha, 0);
    if (levels[n][rv] == 0)
        throw hypothesis_error("q_coefficient: no length-" + std::to_string(n) +
                               " paths arrive at '" + g.vertices[rv] +
                               "' (source vertices upstream); the conjugated coefficient is "
                               "undefined there");
    return bigrat(levels[n - k][sv], levels[n][rv]);
}

// --- Perron data -------------------------------------------------------

PerronData perron(const DirectedGraph& g, double tol, int max_iter) {
    GraphPredicates pred = graph_predicates(g);
    if (pred.has_sources || pred.has_sinks)
        throw hypothesis_error("perron: needs a graph with no sources and no sinks");
    PerronData pd;
    pd.primitive = pred.primitive;
    if (!pred.primitive) {
        pd.note = "adjacency matrix is not primitive; spectral data withheld";
        return pd;
    }
    const int nv = g.n_vertices();
    IntMatrix a = adjacency(g);
    std::vector<double> x(nv, 1.0), ax(nv, 0.0);
    std::vector<double> diffs;
    double lambda = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        double mx = 0.0;
        for (int u = 0; u < nv; ++u) {
            double s = 0.0;
            for (int v = 0; v < nv; ++v)
                s += a.at(u, v).convert_to<double>() * x[v];
            ax[u] = s;
            mx = std::max(mx, s);
        }
        double step = 0.0;
        for (int u = 0; u < nv; ++u) {
            double nu = ax[u] / mx;
            step = std::max(step, std::abs(nu - x[u]));
            x[u] = nu;
        }
        diffs.push_back(step);
        bool lambda_settled = std::abs(mx - lambda) <= tol * std::max(1.0, mx);
        lambda = mx;
        if (step <= tol && lambda_settled) {
            pd.converged = true;
            ++it;
            break;
        }
    }
    pd.iterations = it;
    pd.lambda = lambda;
    pd.w = x;
    double res = 0.0;
    for (int u = 0; u < nv; ++u) {
        double s = 0.0;
        for (int v = 0; v < nv; ++v)
            s += a.at(u, v).convert_to<double>() * x[v];
        res = std::max(res, std::abs(s - lambda * x[u]));
    }
    pd.residual = res;
    // observed per-step contraction ~ |second eigenvalue| / lambda
    std::vector<double> ratios;
    for (size_t i = 1; i < diffs.size(); ++i)
        if (diffs[i - 1] > 1e-14 && diffs[i] > 1e-15) ratios.push_back(diffs[i] / diffs[i - 1]);
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        double med = ratios[ratios.size() / 2];
        pd.contraction = std::clamp(med, 0.0, 1.0);
    }
    pd.spectral_gap = std::clamp(1.0 - pd.contraction, 0.0, 1.0);
    pd.data_valid = pd.converged;
    if (!pd.converged)
        pd.note = "power iteration did not meet tolerance within " + std::to_string(max_iter) +
                  " iterations";
    return pd;
}

// --- limit coefficients ------------------------------------------------

const char* decay_class_name(DecayClass c) {
    switch (c) {
        case DecayClass::Geometric: return "geometric";
        case DecayClass::Polynomial: return "polynomial";
        case DecayClass::DivergentToZero: return "divergent-to-zero";
        case DecayClass::None: return "none";
    }
    return "?";
}

QLimitResult q_limit(const DirectedGraph& g, const Path& alpha, int n_max, double tol) {
    validate_path(g, alpha, "q_limit");
    QLimitResult r;
    r.path = path_name(g, alpha);
    r.k = alpha.length();
    const int k = r.k;
    if (n_max < k + 16) n_max = k + 16;

    auto levels = counts_up_to(g, n_max);
    const int rv = path_range(g, alpha, 0);
    const int sv = path_source(g, alpha, 0);

    std::vector<int> ms;         // m = k .. n_max
    std::vector<bigrat> q;       // exact coefficients
    for (int m = k; m <= n_max; ++m) {
        if (levels[m][rv] == 0)
            throw hypothesis_error("q_limit: no length-" + std::to_string(m) +
                                   " paths arrive at '" + g.vertices[rv] +
                                   "' (source vertices upstream); the coefficient sequence is "
                                   "undefined");
        ms.push_back(m);
        q.emplace_back(levels[m - k][sv], levels[m][rv]);
    }

    // fit window [n_max/2, n_max]
    const int w0 = std::max(k, n_max / 2);
    std::vector<int> wm;
    std::vector<bigrat> wq;
    for (size_t i = 0; i < ms.size(); ++i)
        if (ms[i] >= w0) {
            wm.push_back(ms[i]);
            wq.push_back(q[i]);
        }
    for (const bigrat& v : wq) r.tail.push_back(v.convert_to<double>());

    // 1. constant tail: the limit is exact
    bool constant = true;
    for (size_t i = 1; i < wq.size(); ++i)
        if (wq[i] != wq[0]) {
            constant = false;
            break;
        }
    if (constant) {
        r.exact = true;
        r.exact_limit = wq[0];
        r.limit = wq[0].convert_to<double>();
        r.decay = DecayClass::Geometric;
        r.rate = 0.0;
        r.fit_r2 = 1.0;
        r.note = "constant tail (exact)";
        annotate_closed_form(g, sv, rv, k, r, tol);
        return r;
    }

    std::vector<float50> wf;
    for (const bigrat& v : wq) wf.push_back(to_f50(v));

    // 2. decay of the sequence itself (limit zero): needs positive, strictly
    //    decreasing values over the window
    bool pos_dec = true;
    for (size_t i = 0; i < wq.size() && pos_dec; ++i) {
        if (wq[i] <= 0) pos_dec = false;
        if (i > 0 && wq[i] >= wq[i - 1]) pos_dec = false;
    }
    if (pos_dec) {
        std::vector<float50> xs_lin, xs_log, ys;
        for (size_t i = 0; i < wm.size(); ++i) {
            xs_lin.push_back(float50(wm[i]));
            xs_log.push_back(log(float50(wm[i])));
            ys.push_back(log(wf[i]));
        }
        LinFit fg = fit_line(xs_lin, ys);
        LinFit fp = fit_line(xs_log, ys);
        bool g_ok = fg.ok && fg.r2 >= float50("0.9999") && fg.slope <= log(float50("0.95"));
        bool p_ok = false;
        if (fp.ok && fp.r2 >= float50("0.999") && -fp.slope >= float50("0.2")) {
            // curvature guard: the slope over each half-window must agree
            size_t h = wm.size() / 2;
            std::vector<float50> x1(xs_log.begin(), xs_log.begin() + h),
                y1(ys.begin(), ys.begin() + h), x2(xs_log.begin() + h, xs_log.end()),
                y2(ys.begin() + h, ys.end());
            LinFit f1 = fit_line(x1, y1), f2 = fit_line(x2, y2);
            float50 delta = -fp.slope;
            if (f1.ok && f2.ok &&
                abs(f1.slope - f2.slope) <= float50("0.1") * std::max(float50(1), delta))
                p_ok = true;
        }
        if (g_ok || p_ok) {
            if (g_ok && (!p_ok || fg.r2 >= fp.r2)) {
                r.decay = DecayClass::DivergentToZero;
                r.rate = exp(fg.slope).convert_to<double>();
                r.fit_r2 = fg.r2.convert_to<double>();
                r.note = "coefficient decays geometrically to zero";
            } else {
                r.decay = DecayClass::Polynomial;
                r.rate = (-fp.slope).convert_to<double>();
                r.fit_r2 = fp.r2.convert_to<double>();
                r.note = "coefficient decays polynomially to zero";
            }
            r.limit = 0.0;
            annotate_closed_form(g, sv, rv, k, r, tol);
            return r;
        }
    }

    // 3. nonzero limit: extrapolate two ways, keep whichever limit makes the
    //    residuals follow a decay law best
    const int m0 = std::max(k, n_max / 3);
    std::vector<float50> s;
    for (size_t i = 0; i < ms.size(); ++i)
        if (ms[i] >= m0) s.push_back(to_f50(q[i]));
    float50 L_g = s.back();
    {
        std::vector<float50> a1 = aitken(s);
        if (a1.size() >= 3) {
            std::vector<float50> a2 = aitken(a1);
            L_g = a2.empty() ? a1.back() : a2.back();
        } else if (!a1.empty()) {
            L_g = a1.back();
        }
    }
    float50 L_p;
    {
        const size_t P = 7;
        std::vector<float50> xs, ys;
        size_t start = ms.size() > P ? ms.size() - P : 0;
        for (size_t i = start; i < ms.size(); ++i) {
            xs.push_back(float50(1) / float50(ms[i]));
            ys.push_back(to_f50(q[i]));
        }
        L_p = neville_at_zero(xs, ys);
    }

    CandidateFit cg = classify_residuals(wm, wf, L_g);
    CandidateFit cp = classify_residuals(wm, wf, L_p);
    const CandidateFit* best = nullptr;
    float50 L;
    if (cg.valid && (!cp.valid || cg.r2 >= cp.r2)) {
        best = &cg;
        L = L_g;
    } else if (cp.valid) {
        best = &cp;
        L = L_p;
    }
    if (best == nullptr) {
        r.decay = DecayClass::None;
        r.limit = q.back().convert_to<double>();
        r.rate = 0.0;
        r.fit_r2 = 0.0;
        std::ostringstream os;
        os << "no stabilization by n_max = " << n_max << " (last values";
        for (size_t i = q.size() >= 4 ? q.size() - 4 : 0; i < q.size(); ++i)
            os << " " << fmt(q[i].convert_to<double>());
        os << ")";
        r.note = os.str();
        annotate_closed_form(g, sv, rv, k, r, tol);
        return r;
    }

    r.limit = L.convert_to<double>();
    r.decay = best->decay;
    r.rate = best->rate.convert_to<double>();
    r.fit_r2 = best->r2.convert_to<double>();
    if (best->stabilized) r.note = "stabilized within working precision";
    if (std::abs(r.limit) <= std::max(tol, 1e-10)) {
        r.limit = 0.0;
        if (r.decay == DecayClass::Geometric) r.decay = DecayClass::DivergentToZero;
        r.note += (r.note.empty() ? "" : "; ") + std::string("limit snapped to zero");
    }
    annotate_closed_form(g, sv, rv, k, r, tol);
    return r;
}

// --- the two hypotheses ------------------------------------------------

AssumptionOneReport assumption_one_check(const DirectedGraph& g, int k_max, int n_max,
                                         double tol) {
    if (k_max < 1) throw std::invalid_argument("assumption_one_check: k_max must be >= 1");
    AssumptionOneReport rep;
    rep.k_max = k_max;
    rep.n_max = n_max;
    int n_geo = 0, n_poly = 0, n_dtz = 0, n_none = 0;
    for (int k = 1; k <= k_max; ++k) {
        bool all_ok = true;
        for (const Path& p : enumerate_paths(g, k)) {
            QLimitResult ql = q_limit(g, p, n_max, tol);
            switch (ql.decay) {
                case DecayClass::Geometric: ++n_geo; break;
                case DecayClass::Polynomial: ++n_poly; break;
                case DecayClass::DivergentToZero: ++n_dtz; break;
                case DecayClass::None:
                    ++n_none;
                    all_ok = false;
                    break;
            }
            if (ql.decay == DecayClass::Polynomial) {
                if (!rep.min_poly_exponent || ql.rate < *rep.min_poly_exponent)
                    rep.min_poly_exponent = ql.rate;
            } else if (ql.decay != DecayClass::None && ql.rate > 0.0) {
                if (!rep.max_geom_ratio || ql.rate > *rep.max_geom_ratio)
                    rep.max_geom_ratio = ql.rate;
            }
            rep.rows.push_back(std::move(ql));
        }
        rep.holds_at.push_back(all_ok);
    }
    rep.holds = std::all_of(rep.holds_at.begin(), rep.holds_at.end(), [](bool b) { return b; });
    std::ostringstream os;
    os << (rep.holds ? "holds" : "fails") << ": " << rep.rows.size()
       << " path coefficients classified (" << n_geo << " geometric, " << n_poly
       << " polynomial, " << n_dtz << " divergent-to-zero, " << n_none << " unclassified";
    if (rep.min_poly_exponent) os << "; min polynomial exponent " << fmt(*rep.min_poly_exponent);
    if (rep.max_geom_ratio) os << "; max geometric ratio " << fmt(*rep.max_geom_ratio);
    os << ")";
    rep.summary = os.str();
    return rep;
}

SuperStrongReport super_strong_check(const DirectedGraph& g, int k_max, double tol, int n_max) {
    if (k_max < 1) throw std::invalid_argument("super_strong_check: k_max must be >= 1");
    SuperStrongReport rep;
    rep.k_checked = k_max;
    AssumptionOneReport a1 = assumption_one_check(g, k_max, n_max);
    rep.assumption_holds = a1.holds;
    if (!a1.holds) {
        rep.holds = false;
        rep.note = "convergence assumption fails; coefficient comparison not meaningful";
        return rep;
    }

    const int nv = g.n_vertices();
    const double cmp_tol = std::max(tol, 1e-8);
    bool all_exact = true;
    std::vector<std::string> unfed;
    for (int k = 1; k <= k_max && !rep.witness; ++k) {
        std::vector<double> ck(nv, 0.0);
        std::vector<bool> seen(nv, false);
        std::vector<bool> seen_exact(nv, false);
        std::vector<bigrat> exact_val(nv);
        std::vector<std::string> first_path(nv);
        for (const Path& p : enumerate_paths(g, k)) {
            QLimitResult ql = q_limit(g, p, n_max, 1e-9);
            const int rv = path_range(g, p, 0);
            const double val = ql.exact ? ql.exact_limit.convert_to<double>() : ql.limit;
            if (!seen[rv]) {
                seen[rv] = true;
                seen_exact[rv] = ql.exact;
                if (ql.exact) exact_val[rv] = ql.exact_limit;
                ck[rv] = val;
                first_path[rv] = ql.path;
                all_exact = all_exact && ql.exact;
                continue;
            }
            bool equal;
            if (ql.exact && seen_exact[rv])
                equal = (ql.exact_limit == exact_val[rv]);
            else
                equal = std::abs(val - ck[rv]) <= cmp_tol;
            if (!equal) {
                SuperStrongWitness w;
                w.k = k;
                w.vertex = g.vertices[rv];
                w.path_a = first_path[rv];
                w.path_b = ql.path;
                w.coeff_a = ck[rv];
                w.coeff_b = val;
                w.reason = "same-range paths with distinct limit coefficients";
                rep.witness = std::move(w);
                break;
            }
            all_exact = all_exact && ql.exact;
        }
        if (rep.witness) break;
        // a vanishing common coefficient also defeats invertibility
        for (int v = 0; v < nv && !rep.witness; ++v) {
            if (!seen[v]) {
                unfed.push_back("level " + std::to_string(k) + " at '" + g.vertices[v] + "'");
                continue;
            }
            if (std::abs(ck[v]) <= cmp_tol) {
                SuperStrongWitness w;
                w.k = k;
                w.vertex = g.vertices[v];
                w.path_a = first_path[v];
                w.coeff_a = ck[v];
                w.reason = "vanishing limit coefficient (c_" + std::to_string(k) +
                           " not invertible)";
                rep.witness = std::move(w);
            }
        }
        if (rep.witness) break;
        rep.c.push_back(std::move(ck));
    }
    rep.holds = !rep.witness.has_value();
    rep.c_exact = rep.holds && all_exact;
    std::ostringstream os;
    if (rep.holds) {
        os << "uniform coefficients c_k found for k <= " << k_max
           << (rep.c_exact ? " (exact)" : "");
    } else {
        const SuperStrongWitness& w = *rep.witness;
        os << "fails at k = " << w.k << ", vertex '" << w.vertex << "': ";
        if (!w.path_b.empty())
            os << "paths " << w.path_a << " and " << w.path_b << " give " << fmt(w.coeff_a)
               << " vs " << fmt(w.coeff_b);
        else
            os << "path " << w.path_a << " gives " << fmt(w.coeff_a);
    }
    if (!unfed.empty()) {
        os << "; unconstrained entries (no arriving paths): " << unfed.front();
        if (unfed.size() > 1) os << " and " << unfed.size() - 1 << " more";
    }
    rep.note = os.str();
    return rep;
}

// --- limit expectation -------------------------------------------------

PhiInfinityValue phi_infinity(const DirectedGraph& g, const Path& mu, const Path& nu,
                              int n_max) {
    validate_path(g, mu, "phi_infinity");
    validate_path(g, nu, "phi_infinity");
    PhiInfinityValue out;
    out.values.assign(g.n_vertices(), 0.0);
    out.diagonal = (mu == nu);
    if (!out.diagonal) {
        out.exact = true;
        out.exact_values.assign(g.n_vertices(), bigrat(0));
        out.note = "off-diagonal: the expectation vanishes";
        return out;
    }
    out.q = q_limit(g, mu, n_max, 1e-9);
    if (out.q.decay == DecayClass::None)
        throw hypothesis_error("phi_infinity: coefficient of path '" + out.q.path +
                               "' does not stabilize; the convergence assumption fails");
    const int rv = path_range(g, mu, 0);
    out.exact = out.q.exact;
    if (out.exact) {
        out.exact_values.assign(g.n_vertices(), bigrat(0));
        out.exact_values[rv] = out.q.exact_limit;
        out.values[rv] = out.q.exact_limit.convert_to<double>();
    } else {
        out.values[rv] = out.q.limit;
    }
    out.note = "supported at '" + g.vertices[rv] + "'";
    return out;
}

}  // namespace cpk
