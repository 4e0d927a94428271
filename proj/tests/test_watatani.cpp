// Path-count growth data: exact indices, Perron data, limit coefficients with
// their decay classes, the convergence / uniform-coefficient hypotheses, and
// the limit expectation.

#include <doctest.h>

#include <Eigen/Dense>

#include "cpk/pimsner.hpp"
#include "cpk/watatani.hpp"

using namespace cpk;

namespace {
DirectedGraph fixture(const std::string& name) {
    return load_graph_file(std::string(FIXTURE_DIR) + "/" + name + ".json");
}

Path path_of(const DirectedGraph& g, std::initializer_list<const char*> names) {
    Path p;
    for (const char* n : names) p.edges.push_back(g.edge_index(n));
    return p;
}

DirectedGraph sink_graph() {  // b emits nothing
    DirectedGraph g;
    g.vertices = {"a", "b"};
    g.edges.push_back({"e", 0, 1});
    g.edges.push_back({"l", 0, 0});
    return g;
}

DirectedGraph source_graph() {  // a receives nothing
    DirectedGraph g;
    g.vertices = {"a", "b"};
    g.edges.push_back({"e", 0, 1});
    g.edges.push_back({"l", 1, 1});
    return g;
}

// s0 -> v -> w with a loop at w: nothing of length 2 arrives at v, so the
// coefficient sequence of e1 is undefined past the start.
DirectedGraph starved_graph() {
    DirectedGraph g;
    g.vertices = {"s0", "v", "w"};
    g.edges.push_back({"e1", 0, 1});
    g.edges.push_back({"e2", 1, 2});
    g.edges.push_back({"l", 2, 2});
    return g;
}

// Two doubled 2-cycles feeding one vertex, one of them through an extra hop.
// The two count staircases arrive out of phase, so the coefficient of pv
// oscillates between 1/2 and 2/3 forever: genuinely no limit.
DirectedGraph beat_graph() {
    DirectedGraph g;
    g.vertices = {"p1", "p2", "z1", "z2", "m", "v"};
    g.edges.push_back({"pa", 0, 1});
    g.edges.push_back({"pb", 0, 1});
    g.edges.push_back({"pc", 1, 0});
    g.edges.push_back({"za", 2, 3});
    g.edges.push_back({"zb", 2, 3});
    g.edges.push_back({"zc", 3, 2});
    g.edges.push_back({"zm", 3, 4});
    g.edges.push_back({"mv", 4, 5});
    g.edges.push_back({"pv", 1, 5});
    return g;
}
}  // namespace

TEST_CASE("watatani_index: pinned values, recurrence, brute-force oracle") {
    SUBCASE("pinned") {
        CHECK(watatani_index(fixture("o2"), 3).values == std::vector<bigint>{8});
        CHECK(watatani_index(fixture("loop"), 0).values == std::vector<bigint>{1});
        CHECK(watatani_index(fixture("loop"), 7).values == std::vector<bigint>{1});
        CHECK(watatani_index(fixture("suq2"), 3).values == std::vector<bigint>{1, 4});
        CHECK(watatani_index(fixture("fibonacci"), 1).values == std::vector<bigint>{2, 1});
        CHECK(watatani_index(fixture("fibonacci"), 2).values == std::vector<bigint>{3, 2});
        CHECK(watatani_index(fixture("fibonacci"), 3).values == std::vector<bigint>{5, 3});
        CHECK(watatani_index(fixture("example24"), 3).values == std::vector<bigint>{15, 1});
    }
    for (const char* name : {"loop", "o2", "o3", "suq2", "example24", "fibonacci"}) {
        CAPTURE(name);
        DirectedGraph g = fixture(name);
        IntMatrix a = adjacency(g);

        SUBCASE("level zero is all ones") {
            auto w0 = watatani_index(g, 0);
            for (const bigint& v : w0.values) CHECK(v == 1);
        }
        SUBCASE("one-step recurrence against the adjacency matrix") {
            for (int n = 0; n < 6; ++n) {
                auto wn = watatani_index(g, n);
                auto wn1 = watatani_index(g, n + 1);
                for (int u = 0; u < g.n_vertices(); ++u) {
                    bigint s = 0;
                    for (int v = 0; v < g.n_vertices(); ++v) s += a.at(u, v) * wn.values[v];
                    CHECK(wn1.values[u] == s);
                }
            }
        }
        SUBCASE("brute-force path enumeration agrees for n <= 6") {
            for (int n = 1; n <= 6; ++n) {
                auto wn = watatani_index(g, n);
                for (int v = 0; v < g.n_vertices(); ++v)
                    CHECK(wn.values[v] ==
                          bigint(paths_with_range(g, n, v).size()));
            }
        }
    }
}

TEST_CASE("q_coefficient: exact values and conservation laws") {
    SUBCASE("pinned rationals") {
        auto o2 = fixture("o2");
        CHECK(q_coefficient(o2, path_of(o2, {"a"}), 5) == bigrat(1, 2));
        CHECK(q_coefficient(o2, path_of(o2, {"a", "b"}), 9) == bigrat(1, 4));
        auto s = fixture("suq2");
        CHECK(q_coefficient(s, path_of(s, {"f"}), 7) == bigrat(1, 8));
        CHECK(q_coefficient(s, path_of(s, {"g"}), 7) == bigrat(7, 8));
        // Fibonacci-number closed forms, F_1 = F_2 = 1
        auto fib = fixture("fibonacci");
        std::vector<bigint> F = {0, 1, 1};
        for (int i = 3; i <= 14; ++i) F.push_back(F[i - 1] + F[i - 2]);
        for (int n = 2; n <= 12; ++n) {
            CHECK(q_coefficient(fib, path_of(fib, {"a"}), n) == bigrat(F[n + 1], F[n + 2]));
            CHECK(q_coefficient(fib, path_of(fib, {"b"}), n) == bigrat(F[n], F[n + 2]));
            CHECK(q_coefficient(fib, path_of(fib, {"c"}), n) == bigrat(1));
        }
    }
    for (const char* name : {"loop", "o2", "o3", "suq2", "example24", "fibonacci"}) {
        CAPTURE(name);
        DirectedGraph g = fixture(name);

        SUBCASE("coefficients of the edges into each vertex sum to one, exactly") {
            for (int n : {3, 8}) {
                for (int v = 0; v < g.n_vertices(); ++v) {
                    bigrat sum = 0;
                    int in_edges = 0;
                    for (int e = 0; e < g.n_edges(); ++e)
                        if (g.edges[e].dst == v) {
                            ++in_edges;
                            sum += q_coefficient(g, Path{{e}}, n);
                        }
                    if (in_edges > 0) CHECK(sum == bigrat(1));
                }
            }
        }
        SUBCASE("extending a path at its source end redistributes its coefficient") {
            const int n = 9;
            for (int e = 0; e < g.n_edges(); ++e) {
                Path pe{{e}};
                for (int k : {1, 2}) {
                    bigrat sum = 0;
                    for (const Path& al : paths_with_range(g, k, g.edges[e].src))
                        sum += q_coefficient(g, concat(pe, al), n);
                    CHECK(sum == q_coefficient(g, pe, n));
                }
            }
        }
    }
    SUBCASE("random graphs: the same conservation laws") {
        std::mt19937_64 rng(515151);
        for (int t = 0; t < 10; ++t) {
            DirectedGraph g = random_graph_no_sources_sinks(rng, 2, 6);
            for (int v = 0; v < g.n_vertices(); ++v) {
                bigrat sum = 0;
                int in_edges = 0;
                for (int e = 0; e < g.n_edges(); ++e)
                    if (g.edges[e].dst == v) {
                        ++in_edges;
                        sum += q_coefficient(g, Path{{e}}, 6);
                    }
                if (in_edges > 0) CHECK(sum == bigrat(1));
            }
        }
    }
}

TEST_CASE("perron: fixtures, the eigenvalue oracle, and the gates") {
    SUBCASE("single-vertex graphs are immediate") {
        auto pd = perron(fixture("o2"));
        CHECK(pd.primitive);
        CHECK(pd.converged);
        CHECK(pd.data_valid);
        CHECK(pd.lambda == doctest::Approx(2.0).epsilon(1e-10));
        REQUIRE(pd.w.size() == 1);
        CHECK(pd.w[0] == doctest::Approx(1.0));
        CHECK(pd.residual < 1e-9);
        auto pl = perron(fixture("loop"));
        CHECK(pl.lambda == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("fibonacci: golden ratio, eigenvector, contraction") {
        auto pd = perron(fixture("fibonacci"));
        CHECK(pd.data_valid);
        CHECK(pd.lambda == doctest::Approx(1.6180339887498949).epsilon(1e-8));
        REQUIRE(pd.w.size() == 2);
        CHECK(pd.w[0] == doctest::Approx(1.0));
        CHECK(pd.w[1] == doctest::Approx(0.6180339887498949).epsilon(1e-6));
        CHECK(pd.contraction == doctest::Approx(0.3819660113).epsilon(0.15));
        CHECK(pd.spectral_gap == doctest::Approx(0.6180339887).epsilon(0.1));
        CHECK(pd.residual < 1e-9);
    }
    SUBCASE("non-primitive graphs withhold their data") {
        for (const char* name : {"suq2", "example24"}) {
            CAPTURE(name);
            auto pd = perron(fixture(name));
            CHECK_FALSE(pd.primitive);
            CHECK_FALSE(pd.data_valid);
            CHECK(pd.w.empty());
            CHECK_FALSE(pd.note.empty());
        }
    }
    SUBCASE("dense eigensolver oracle on the primitive fixtures") {
        for (const char* name : {"loop", "o2", "o3", "fibonacci"}) {
            CAPTURE(name);
            DirectedGraph g = fixture(name);
            IntMatrix a = adjacency(g);
            const int n = g.n_vertices();
            Eigen::MatrixXd m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = a.at(i, j).convert_to<double>();
            Eigen::EigenSolver<Eigen::MatrixXd> es(m);
            double radius = 0.0, second = 0.0;
            for (int i = 0; i < n; ++i) {
                double mod = std::abs(es.eigenvalues()[i]);
                if (mod > radius) {
                    second = radius;
                    radius = mod;
                } else if (mod > second) {
                    second = mod;
                }
            }
            auto pd = perron(g);
            CHECK(pd.lambda == doctest::Approx(radius).epsilon(1e-8));
            if (n > 1)
                CHECK(pd.contraction == doctest::Approx(second / radius).epsilon(0.2));
        }
    }
    SUBCASE("gates") {
        CHECK_THROWS_AS(perron(sink_graph()), hypothesis_error);
        CHECK_THROWS_AS(perron(source_graph()), hypothesis_error);
    }
}

TEST_CASE("q_limit: constant coefficients are recognized exactly") {
    SUBCASE("loop") {
        auto g = fixture("loop");
        auto r = q_limit(g, path_of(g, {"z"}));
        CHECK(r.exact);
        CHECK(r.exact_limit == bigrat(1));
        CHECK(r.limit == doctest::Approx(1.0));
        CHECK(r.decay == DecayClass::Geometric);
        CHECK(r.rate == 0.0);
        CHECK(r.fit_r2 == doctest::Approx(1.0));
        CHECK(r.closed_form_checked);
        CHECK(r.closed_form_gap < 1e-9);
    }
    SUBCASE("full-shift fixtures") {
        auto o2 = fixture("o2");
        auto r1 = q_limit(o2, path_of(o2, {"a"}));
        CHECK(r1.exact);
        CHECK(r1.exact_limit == bigrat(1, 2));
        auto r2 = q_limit(o2, path_of(o2, {"b", "a"}));
        CHECK(r2.exact);
        CHECK(r2.exact_limit == bigrat(1, 4));
        CHECK(r2.closed_form_checked);
        CHECK(r2.closed_form_value == doctest::Approx(0.25).epsilon(1e-8));
        auto o3 = fixture("o3");
        CHECK(q_limit(o3, path_of(o3, {"c"})).exact_limit == bigrat(1, 3));
    }
    SUBCASE("constant coefficients inside non-constant graphs") {
        auto s = fixture("suq2");
        auto re = q_limit(s, path_of(s, {"e"}));
        CHECK(re.exact);
        CHECK(re.exact_limit == bigrat(1));
        auto fib = fixture("fibonacci");
        auto rc = q_limit(fib, path_of(fib, {"c"}));
        CHECK(rc.exact);
        CHECK(rc.exact_limit == bigrat(1));
        CHECK(rc.closed_form_checked);
        CHECK(rc.closed_form_gap < 1e-6);
        auto e24 = fixture("example24");
        auto rg4 = q_limit(e24, path_of(e24, {"g4"}));
        CHECK(rg4.exact);
        CHECK(rg4.exact_limit == bigrat(1));
        CHECK_FALSE(rg4.closed_form_checked);  // not primitive: no Perron data
    }
}

TEST_CASE("q_limit: geometric convergence") {
    SUBCASE("fibonacci edge a converges to 1/phi at ratio 1/phi^2") {
        auto g = fixture("fibonacci");
        auto r = q_limit(g, path_of(g, {"a"}));
        CHECK_FALSE(r.exact);
        CHECK(r.limit == doctest::Approx(0.6180339887498949).epsilon(1e-10));
        CHECK(r.decay == DecayClass::Geometric);
        CHECK(r.rate > 0.34);
        CHECK(r.rate < 0.42);
        CHECK(r.fit_r2 > 0.999);
        CHECK(r.closed_form_checked);
        CHECK(r.closed_form_gap < 1e-8);
    }
    SUBCASE("fibonacci edge b converges to 1/phi^2") {
        auto g = fixture("fibonacci");
        auto r = q_limit(g, path_of(g, {"b"}));
        CHECK(r.limit == doctest::Approx(0.3819660112501051).epsilon(1e-10));
        CHECK(r.decay == DecayClass::Geometric);
        CHECK(r.closed_form_gap < 1e-8);
    }
    SUBCASE("example24 loop g1 converges to 1/2 at ratio 1/2") {
        auto g = fixture("example24");
        auto r = q_limit(g, path_of(g, {"g1"}));
        CHECK(r.limit == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(r.decay == DecayClass::Geometric);
        CHECK(r.rate == doctest::Approx(0.5).epsilon(0.05));
    }
}

TEST_CASE("q_limit: polynomial convergence (the SU_q(2) graph)") {
    auto g = fixture("suq2");
    SUBCASE("edge f: coefficient 1/(n+1) -> 0") {
        auto r = q_limit(g, path_of(g, {"f"}));
        CHECK(r.limit == 0.0);
        CHECK(r.decay == DecayClass::Polynomial);
        CHECK(r.rate > 0.8);
        CHECK(r.rate < 1.2);
        CHECK(r.fit_r2 > 0.99);
    }
    SUBCASE("edge g: coefficient n/(n+1) -> 1") {
        auto r = q_limit(g, path_of(g, {"g"}));
        CHECK(r.limit == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.decay == DecayClass::Polynomial);
        CHECK(r.rate > 0.8);
        CHECK(r.rate < 1.2);
    }
    SUBCASE("length-2 path through the corner") {
        auto r = q_limit(g, path_of(g, {"g", "f"}));
        CHECK(r.limit == 0.0);
        CHECK(r.decay == DecayClass::Polynomial);
    }
}

TEST_CASE("q_limit: a coefficient dying geometrically is divergent-to-zero") {
    auto g = fixture("example24");
    auto r = q_limit(g, path_of(g, {"g3"}));
    CHECK(r.limit == 0.0);
    CHECK(r.decay == DecayClass::DivergentToZero);
    CHECK(r.rate == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.fit_r2 > 0.999);
}

TEST_CASE("q_limit: an oscillating coefficient is reported unclassified") {
    auto g = beat_graph();
    auto r = q_limit(g, path_of(g, {"pv"}));
    CHECK(r.decay == DecayClass::None);
    CHECK(r.note.find("no stabilization") != std::string::npos);
    // the two subsequential limits really are distinct
    CHECK(q_coefficient(g, path_of(g, {"pv"}), 40) == bigrat(2, 3));
    CHECK(q_coefficient(g, path_of(g, {"pv"}), 41) == bigrat(1, 2));
}

TEST_CASE("q_limit: validation and starvation") {
    auto s = fixture("suq2");
    Path bad;
    bad.edges = {s.edge_index("f"), s.edge_index("g")};  // s(f) = v != w = r(g)
    CHECK_THROWS_AS(q_limit(s, bad), std::invalid_argument);
    CHECK_THROWS_AS(q_limit(s, Path{}), std::invalid_argument);
    auto st = starved_graph();
    CHECK_THROWS_AS(q_limit(st, path_of(st, {"e1"})), hypothesis_error);
    CHECK_THROWS_AS(q_coefficient(st, path_of(st, {"e1"}), 5), hypothesis_error);
}

TEST_CASE("q_limit: deterministic output") {
    auto g = fixture("fibonacci");
    auto a = q_limit(g, path_of(g, {"a"}));
    auto b = q_limit(g, path_of(g, {"a"}));
    CHECK(a.limit == b.limit);
    CHECK(a.rate == b.rate);
    CHECK(a.fit_r2 == b.fit_r2);
    CHECK(a.note == b.note);
}

TEST_CASE("assumption_one_check") {
    SUBCASE("o2: every coefficient is an exact constant") {
        auto rep = assumption_one_check(fixture("o2"), 3);
        CHECK(rep.holds);
        CHECK(rep.rows.size() == 2 + 4 + 8);
        for (const auto& row : rep.rows) {
            CHECK(row.exact);
            CHECK(row.decay == DecayClass::Geometric);
        }
        CHECK_FALSE(rep.min_poly_exponent.has_value());
        CHECK(rep.summary.find("holds") != std::string::npos);
    }
    SUBCASE("suq2: holds with polynomial exponent near 1") {
        auto rep = assumption_one_check(fixture("suq2"), 2);
        CHECK(rep.holds);
        CHECK(rep.rows.size() == 3 + 4);
        REQUIRE(rep.min_poly_exponent.has_value());
        CHECK(*rep.min_poly_exponent > 0.8);
        CHECK(*rep.min_poly_exponent < 1.2);
    }
    SUBCASE("fibonacci: holds geometrically at the squared spectral ratio") {
        auto rep = assumption_one_check(fixture("fibonacci"), 2);
        CHECK(rep.holds);
        REQUIRE(rep.max_geom_ratio.has_value());
        CHECK(*rep.max_geom_ratio > 0.34);
        CHECK(*rep.max_geom_ratio < 0.42);
        CHECK_FALSE(rep.min_poly_exponent.has_value());
    }
    SUBCASE("example24: divergent-to-zero coefficients still classify") {
        auto rep = assumption_one_check(fixture("example24"), 2);
        CHECK(rep.holds);
        REQUIRE(rep.max_geom_ratio.has_value());
        CHECK(*rep.max_geom_ratio == doctest::Approx(0.5).epsilon(0.1));
    }
    SUBCASE("the beat graph fails at level one") {
        auto rep = assumption_one_check(beat_graph(), 1);
        CHECK_FALSE(rep.holds);
        REQUIRE(rep.holds_at.size() == 1);
        CHECK_FALSE(rep.holds_at[0]);
        CHECK(rep.summary.find("fails") != std::string::npos);
    }
}

TEST_CASE("super_strong_check") {
    SUBCASE("loop: the coefficient is identically one") {
        auto rep = super_strong_check(fixture("loop"), 3);
        CHECK(rep.assumption_holds);
        CHECK(rep.holds);
        CHECK(rep.c_exact);
        REQUIRE(rep.c.size() == 3);
        for (const auto& ck : rep.c) {
            REQUIRE(ck.size() == 1);
            CHECK(ck[0] == doctest::Approx(1.0));
        }
    }
    SUBCASE("o2: c_k = 2^-k, exactly") {
        auto rep = super_strong_check(fixture("o2"), 3);
        CHECK(rep.holds);
        CHECK(rep.c_exact);
        REQUIRE(rep.c.size() == 3);
        CHECK(rep.c[0][0] == doctest::Approx(0.5));
        CHECK(rep.c[1][0] == doctest::Approx(0.25));
        CHECK(rep.c[2][0] == doctest::Approx(0.125));
    }
    SUBCASE("o3: c_k = 3^-k") {
        auto rep = super_strong_check(fixture("o3"), 2);
        CHECK(rep.holds);
        CHECK(rep.c[0][0] == doctest::Approx(1.0 / 3.0));
        CHECK(rep.c[1][0] == doctest::Approx(1.0 / 9.0));
    }
    SUBCASE("suq2: fails at w with coefficients 0 vs 1") {
        auto rep = super_strong_check(fixture("suq2"), 2);
        CHECK(rep.assumption_holds);
        CHECK_FALSE(rep.holds);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->k == 1);
        CHECK(rep.witness->vertex == "w");
        CHECK(rep.witness->path_a == "f");
        CHECK(rep.witness->path_b == "g");
        CHECK(rep.witness->coeff_a == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(rep.witness->coeff_b == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(rep.c.empty());
    }
    SUBCASE("fibonacci: primitive yet non-uniform; witness at u1") {
        auto rep = super_strong_check(fixture("fibonacci"), 2);
        CHECK(rep.assumption_holds);
        CHECK_FALSE(rep.holds);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->k == 1);
        CHECK(rep.witness->vertex == "u1");
        CHECK(rep.witness->path_a == "a");
        CHECK(rep.witness->path_b == "b");
        CHECK(rep.witness->coeff_a == doctest::Approx(0.6180339887).epsilon(1e-6));
        CHECK(rep.witness->coeff_b == doctest::Approx(0.3819660113).epsilon(1e-6));
    }
    SUBCASE("example24: fails at v") {
        auto rep = super_strong_check(fixture("example24"), 2);
        CHECK_FALSE(rep.holds);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->vertex == "v");
        CHECK(rep.witness->path_a == "g1");
        CHECK(rep.witness->path_b == "g3");
    }
    SUBCASE("the beat graph reports the failed assumption instead") {
        auto rep = super_strong_check(beat_graph(), 1);
        CHECK_FALSE(rep.assumption_holds);
        CHECK_FALSE(rep.holds);
        CHECK_FALSE(rep.witness.has_value());
    }
}

TEST_CASE("phi_infinity") {
    SUBCASE("o2 diagonal edge: one half, exactly") {
        auto g = fixture("o2");
        auto v = phi_infinity(g, path_of(g, {"a"}), path_of(g, {"a"}));
        CHECK(v.diagonal);
        CHECK(v.exact);
        REQUIRE(v.values.size() == 1);
        CHECK(v.values[0] == doctest::Approx(0.5));
        CHECK(v.exact_values[0] == bigrat(1, 2));
    }
    SUBCASE("off-diagonal vanishes") {
        auto g = fixture("o2");
        auto v = phi_infinity(g, path_of(g, {"a"}), path_of(g, {"b"}));
        CHECK_FALSE(v.diagonal);
        CHECK(v.exact);
        CHECK(v.values[0] == 0.0);
        CHECK(v.exact_values[0] == bigrat(0));
    }
    SUBCASE("loop: identically one") {
        auto g = fixture("loop");
        auto v = phi_infinity(g, path_of(g, {"z"}), path_of(g, {"z"}));
        CHECK(v.values[0] == doctest::Approx(1.0));
        CHECK(v.exact);
    }
    SUBCASE("fibonacci edge b matches the Perron closed form") {
        auto g = fixture("fibonacci");
        auto v = phi_infinity(g, path_of(g, {"b"}), path_of(g, {"b"}));
        REQUIRE(v.values.size() == 2);
        CHECK(v.values[0] == doctest::Approx(0.3819660113).epsilon(1e-8));
        CHECK(v.values[1] == 0.0);
        auto pd = perron(g);
        CHECK(v.values[0] ==
              doctest::Approx(pd.w[1] / (pd.lambda * pd.w[0])).epsilon(1e-7));
    }
    SUBCASE("a vanishing limit coefficient gives a vanishing expectation") {
        auto g = fixture("suq2");
        auto v = phi_infinity(g, path_of(g, {"f"}), path_of(g, {"f"}));
        CHECK(v.values[g.vertex_index("w")] == 0.0);
        CHECK(v.values[g.vertex_index("v")] == 0.0);
    }
    SUBCASE("errors") {
        auto g = fixture("o2");
        CHECK_THROWS_AS(phi_infinity(g, Path{}, Path{}), std::invalid_argument);
        auto bg = beat_graph();
        CHECK_THROWS_AS(phi_infinity(bg, path_of(bg, {"pv"}), path_of(bg, {"pv"})),
                        hypothesis_error);
    }
}
