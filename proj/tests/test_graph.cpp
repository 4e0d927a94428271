// Graph layer: fixture parsing, adjacency orientation, opposite and dual
// constructions, predicates, and path enumeration.  The adjacency values for
// the named fixtures are frozen here; everything else in the project leans on
// this orientation, so these are the tests that would catch a silent flip.

#include <doctest.h>

#include <set>

#include "cpk/graph.hpp"
#include "cpk/smith.hpp"

using namespace cpk;

namespace {
DirectedGraph fixture(const std::string& name) {
    return load_graph_file(std::string(FIXTURE_DIR) + "/" + name + ".json");
}
}  // namespace

TEST_CASE("fixture adjacency matrices are the pinned ones") {
    CHECK(adjacency(fixture("loop")) == IntMatrix::from_rows({{1}}));
    CHECK(adjacency(fixture("o2")) == IntMatrix::from_rows({{2}}));
    CHECK(adjacency(fixture("o3")) == IntMatrix::from_rows({{3}}));
    // rows index ranges, columns index sources, vertex order as listed
    CHECK(adjacency(fixture("suq2")) == IntMatrix::from_rows({{1, 0}, {1, 1}}));
    CHECK(adjacency(fixture("example24")) == IntMatrix::from_rows({{2, 1}, {0, 1}}));
    CHECK(adjacency(fixture("fibonacci")) == IntMatrix::from_rows({{1, 1}, {1, 0}}));
}

TEST_CASE("json parsing is strict") {
    auto parse = [](const char* text) {
        return DirectedGraph::from_json(nlohmann::json::parse(text));
    };
    CHECK_THROWS(parse(R"({"vertices": ["v"]})"));
    CHECK_THROWS(parse(R"({"vertices": ["v","v"], "edges": []})"));
    CHECK_THROWS(parse(R"({"vertices": ["v"], "edges": [{"name":"e","src":"v"}]})"));
    CHECK_THROWS(parse(R"({"vertices": ["v"], "edges": [{"name":"e","src":"v","dst":"u"}]})"));
    CHECK_THROWS(parse(R"({"vertices": ["v"], "edges": [], "extra": 1})"));
    CHECK_THROWS(parse(
        R"({"vertices": ["v"], "edges": [{"name":"e","src":"v","dst":"v"},{"name":"e","src":"v","dst":"v"}]})"));
    // round trip
    auto g = fixture("suq2");
    auto g2 = DirectedGraph::from_json(g.to_json());
    CHECK(adjacency(g) == adjacency(g2));
}

TEST_CASE("opposite graph transposes the adjacency") {
    for (const char* name : {"loop", "o2", "suq2", "example24", "fibonacci"}) {
        auto g = fixture(name);
        CHECK(adjacency(opposite_graph(g)) == adjacency(g).transpose());
    }
}

TEST_CASE("dual graph: edge count identity and pinned small cases") {
    // number of dual edges = sum over vertices of indeg * outdeg, because a
    // dual edge is exactly a composable pair of edges through a middle vertex
    for (const char* name : {"loop", "o2", "o3", "suq2", "example24", "fibonacci"}) {
        auto g = fixture(name);
        auto d = dual_graph(g);
        int expected = 0;
        std::vector<int> indeg(g.n_vertices(), 0), outdeg(g.n_vertices(), 0);
        for (const auto& e : g.edges) {
            outdeg[e.src]++;
            indeg[e.dst]++;
        }
        for (int v = 0; v < g.n_vertices(); ++v) expected += indeg[v] * outdeg[v];
        CHECK(d.n_edges() == expected);
        CHECK(d.n_vertices() == g.n_edges());
        // dual paths of length n biject with base paths of length n+1
        for (int len = 1; len <= 3; ++len)
            CHECK(enumerate_paths(d, len).size() == enumerate_paths(g, len + 1).size());
    }

    auto dl = dual_graph(fixture("loop"));
    CHECK(dl.n_edges() == 1);

    auto d2 = dual_graph(fixture("o2"));
    CHECK(d2.n_vertices() == 2);
    CHECK(d2.n_edges() == 4);  // complete with loops

    // the asymmetric fixture pins the orientation: pairs are (head, tail)
    auto ds = dual_graph(fixture("suq2"));
    std::set<std::string> names;
    for (const auto& e : ds.edges) names.insert(e.name);
    CHECK(names == std::set<std::string>{"(e,e)", "(f,e)", "(g,f)", "(g,g)"});

    // 8 composable pairs = 8 length-2 paths (A^2 entries sum to 8)
    CHECK(dual_graph(fixture("example24")).n_edges() == 8);
}

TEST_CASE("predicates: sources, sinks, primitivity") {
    auto p_loop = graph_predicates(fixture("loop"));
    CHECK(!p_loop.has_sources);
    CHECK(!p_loop.has_sinks);
    CHECK(p_loop.primitive);
    CHECK(p_loop.primitivity_exponent == 1);

    auto p_o2 = graph_predicates(fixture("o2"));
    CHECK(p_o2.primitive);

    // upper-triangular reducible: not primitive, but no sources/sinks
    auto p_su = graph_predicates(fixture("suq2"));
    CHECK(!p_su.has_sources);
    CHECK(!p_su.has_sinks);
    CHECK(!p_su.primitive);

    auto p_fib = graph_predicates(fixture("fibonacci"));
    CHECK(p_fib.primitive);
    CHECK(p_fib.primitivity_exponent == 2);

    // example24 receives nothing at w from outside... w has g3 out, g4 in/out;
    // v receives g1,g2,g3; nothing flows v -> w, so not primitive; w gets g4 so
    // no source; but check a graph with a genuine source/sink
    DirectedGraph chain;
    chain.vertices = {"a", "b"};
    chain.edges.push_back({"e", 0, 1});
    auto pc = graph_predicates(chain);
    CHECK(pc.has_sources);  // a receives nothing
    CHECK(pc.has_sinks);    // b emits nothing
    CHECK(pc.source_vertices == std::vector<std::string>{"a"});
    CHECK(pc.sink_vertices == std::vector<std::string>{"b"});
}

TEST_CASE("path enumeration counts match adjacency powers") {
    for (const char* name : {"o2", "suq2", "example24", "fibonacci"}) {
        auto g = fixture(name);
        IntMatrix a = adjacency(g);
        IntMatrix pw = IntMatrix::identity(g.n_vertices());
        for (int len = 1; len <= 4; ++len) {
            pw = pw * a;
            auto paths = enumerate_paths(g, len);
            // total = sum of entries of A^len
            bigint total = 0;
            for (int i = 0; i < pw.rows(); ++i)
                for (int j = 0; j < pw.cols(); ++j) total += pw.at(i, j);
            CHECK(bigint(paths.size()) == total);
            // per (range, source) cell
            for (int u = 0; u < g.n_vertices(); ++u)
                for (int v = 0; v < g.n_vertices(); ++v) {
                    int cnt = 0;
                    for (const auto& p : paths)
                        if (path_range(g, p, -1) == u && path_source(g, p, -1) == v) ++cnt;
                    CHECK(bigint(cnt) == pw.at(u, v));
                }
        }
    }
}

TEST_CASE("path composition rules") {
    auto g = fixture("suq2");
    int e = g.edge_index("e"), f = g.edge_index("f"), gg = g.edge_index("g");
    // f runs v -> w (src v, dst w); composing f after e needs s(f) = ... the
    // pair (f, e): s(f) = v, r(e) = v, so f.e is a path; (e, f) is not
    Path pf{{f}}, pe{{e}}, pg{{gg}};
    CHECK(composable(g, pf, pe));
    CHECK(!composable(g, pe, pf));
    CHECK(composable(g, pg, pf));
    auto fe = concat(pf, pe);
    CHECK(path_range(g, fe, -1) == g.vertex_index("w"));
    CHECK(path_source(g, fe, -1) == g.vertex_index("v"));
    CHECK(path_name(g, fe) == "f.e");

    // length-2 path inventory for the fixture
    auto p2 = enumerate_paths(g, 2);
    std::set<std::string> names;
    for (const auto& p : p2) names.insert(path_name(g, p));
    CHECK(names == std::set<std::string>{"e.e", "f.e", "g.f", "g.g"});
}

TEST_CASE("random graphs: never sources or sinks, deterministic in seed") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 50; ++i) {
        auto g = random_graph_no_sources_sinks(rng, 2, 6);
        auto p = graph_predicates(g);
        CHECK(!p.has_sources);
        CHECK(!p.has_sinks);
        CHECK(g.n_vertices() >= 2);
        CHECK(g.n_vertices() <= 6);
    }
    std::mt19937_64 r1(7), r2(7);
    auto a = random_graph_no_sources_sinks(r1, 2, 6);
    auto b = random_graph_no_sources_sinks(r2, 2, 6);
    CHECK(adjacency(a) == adjacency(b));
}
