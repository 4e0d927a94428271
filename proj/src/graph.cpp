#include "cpk/graph.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace cpk {

int DirectedGraph::vertex_index(const std::string& name) const {
    for (int i = 0; i < n_vertices(); ++i)
        if (vertices[i] == name) return i;
    throw std::invalid_argument("unknown vertex '" + name + "'");
}

int DirectedGraph::edge_index(const std::string& name) const {
    for (int i = 0; i < n_edges(); ++i)
        if (edges[i].name == name) return i;
    throw std::invalid_argument("unknown edge '" + name + "'");
}

DirectedGraph DirectedGraph::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw std::invalid_argument("graph JSON must be an object with 'vertices' and 'edges'");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "vertices" && it.key() != "edges" && it.key() != "name")
            throw std::invalid_argument("graph JSON has unexpected key '" + it.key() + "'");

    DirectedGraph g;
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw std::invalid_argument("graph 'name' must be a string");
        g.name = j.at("name").get<std::string>();
    }
    std::set<std::string> seen_v;
    for (const auto& v : j.at("vertices")) {
        std::string name = v.get<std::string>();
        if (!seen_v.insert(name).second)
            throw std::invalid_argument("duplicate vertex '" + name + "'");
        g.vertices.push_back(name);
    }
    std::set<std::string> seen_e;
    for (const auto& e : j.at("edges")) {
        if (!e.is_object() || !e.contains("name") || !e.contains("src") || !e.contains("dst") ||
            e.size() != 3)
            throw std::invalid_argument("each edge needs exactly {name, src, dst}");
        Edge edge;
        edge.name = e.at("name").get<std::string>();
        if (!seen_e.insert(edge.name).second)
            throw std::invalid_argument("duplicate edge '" + edge.name + "'");
        edge.src = g.vertex_index(e.at("src").get<std::string>());
        edge.dst = g.vertex_index(e.at("dst").get<std::string>());
        g.edges.push_back(edge);
    }
    return g;
}

nlohmann::ordered_json DirectedGraph::to_json() const {
    nlohmann::ordered_json j;
    if (!name.empty()) j["name"] = name;
    j["vertices"] = vertices;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : edges) {
        nlohmann::ordered_json je;
        je["name"] = e.name;
        je["src"] = vertices[e.src];
        je["dst"] = vertices[e.dst];
        arr.push_back(je);
    }
    j["edges"] = arr;
    return j;
}

DirectedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    nlohmann::json j;
    in >> j;
    return DirectedGraph::from_json(j);
}

IntMatrix adjacency(const DirectedGraph& g) {
    IntMatrix a(g.n_vertices(), g.n_vertices());
    for (const auto& e : g.edges) a.at(e.dst, e.src) += 1;
    return a;
}

DirectedGraph opposite_graph(const DirectedGraph& g) {
    DirectedGraph o;
    o.vertices = g.vertices;
    for (const auto& e : g.edges) o.edges.push_back({e.name + "_op", e.dst, e.src});
    return o;
}

DirectedGraph dual_graph(const DirectedGraph& g) {
    DirectedGraph d;
    for (const auto& e : g.edges) d.vertices.push_back(e.name);
    for (int i = 0; i < g.n_edges(); ++i)
        for (int j = 0; j < g.n_edges(); ++j)
            if (g.edges[i].src == g.edges[j].dst)
                // pair (e_i, e_j) composes to a length-2 path e_i e_j; the new
                // edge runs from the tail edge to the head edge
                d.edges.push_back({"(" + g.edges[i].name + "," + g.edges[j].name + ")", j, i});
    return d;
}

GraphPredicates graph_predicates(const DirectedGraph& g) {
    GraphPredicates p;
    const int n = g.n_vertices();
    std::vector<int> indeg(n, 0), outdeg(n, 0);
    for (const auto& e : g.edges) {
        outdeg[e.src]++;
        indeg[e.dst]++;
    }
    for (int v = 0; v < n; ++v) {
        if (indeg[v] == 0) {
            p.has_sources = true;
            p.source_vertices.push_back(g.vertices[v]);
        }
        if (outdeg[v] == 0) {
            p.has_sinks = true;
            p.sink_vertices.push_back(g.vertices[v]);
        }
    }

    // Primitivity: some A^k entrywise positive.  Wielandt's bound caps the
    // search at (n-1)^2 + 1, so the loop is a decision procedure, not a guess.
    IntMatrix a = adjacency(g);
    IntMatrix pow = IntMatrix::identity(n);
    int kmax = n <= 1 ? 2 : (n - 1) * (n - 1) + 1;
    for (int k = 1; k <= kmax; ++k) {
        pow = pow * a;
        bool all_pos = n > 0;
        for (int i = 0; i < n && all_pos; ++i)
            for (int j = 0; j < n && all_pos; ++j)
                if (pow.at(i, j) <= 0) all_pos = false;
        if (all_pos) {
            p.primitive = true;
            p.primitivity_exponent = k;
            break;
        }
    }
    return p;
}

int path_range(const DirectedGraph& g, const Path& p, int base_vertex) {
    return p.empty() ? base_vertex : g.edges[p.edges.front()].dst;
}

int path_source(const DirectedGraph& g, const Path& p, int base_vertex) {
    return p.empty() ? base_vertex : g.edges[p.edges.back()].src;
}

bool composable(const DirectedGraph& g, const Path& left, const Path& right) {
    if (left.empty() || right.empty()) return true;  // caller matches base vertices
    return g.edges[left.edges.back()].src == g.edges[right.edges.front()].dst;
}

Path concat(const Path& left, const Path& right) {
    Path p = left;
    p.edges.insert(p.edges.end(), right.edges.begin(), right.edges.end());
    return p;
}

std::vector<Path> enumerate_paths(const DirectedGraph& g, int length) {
    std::vector<Path> out;
    if (length == 0) return out;
    // grow from the range side: extend by edges whose range matches the
    // current source
    std::vector<Path> cur;
    for (int e = 0; e < g.n_edges(); ++e) cur.push_back(Path{{e}});
    for (int l = 1; l < length; ++l) {
        std::vector<Path> next;
        for (const auto& p : cur) {
            int tail_src = g.edges[p.edges.back()].src;
            for (int e = 0; e < g.n_edges(); ++e)
                if (g.edges[e].dst == tail_src) {
                    Path q = p;
                    q.edges.push_back(e);
                    next.push_back(std::move(q));
                }
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<Path> paths_with_range(const DirectedGraph& g, int length, int range_vertex) {
    std::vector<Path> out;
    for (auto& p : enumerate_paths(g, length))
        if (path_range(g, p, range_vertex) == range_vertex) out.push_back(std::move(p));
    return out;
}

std::vector<Path> paths_with_source(const DirectedGraph& g, int length, int source_vertex) {
    std::vector<Path> out;
    for (auto& p : enumerate_paths(g, length))
        if (path_source(g, p, source_vertex) == source_vertex) out.push_back(std::move(p));
    return out;
}

std::string path_name(const DirectedGraph& g, const Path& p) {
    if (p.empty()) return "()";
    std::string s;
    for (size_t i = 0; i < p.edges.size(); ++i) {
        if (i) s += ".";
        s += g.edges[p.edges[i]].name;
    }
    return s;
}

DirectedGraph random_graph_no_sources_sinks(std::mt19937_64& rng, int min_vertices,
                                            int max_vertices) {
    std::uniform_int_distribution<int> nv(min_vertices, max_vertices);
    const int n = nv(rng);
    DirectedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));

    std::uniform_int_distribution<int> pick(0, n - 1);
    int eid = 0;
    auto add = [&](int src, int dst) {
        g.edges.push_back({"e" + std::to_string(eid++), src, dst});
    };
    // one outgoing edge per vertex kills sinks; one incoming per vertex kills
    // sources (some of these may coincide, that's fine)
    std::vector<std::vector<int>> indeg(n);
    for (int v = 0; v < n; ++v) add(v, pick(rng));
    std::vector<int> got(n, 0);
    for (const auto& e : g.edges) got[e.dst]++;
    for (int v = 0; v < n; ++v)
        if (got[v] == 0) add(pick(rng), v);
    // extra edges, up to 2n, possibly parallel
    std::uniform_int_distribution<int> extra(0, 2 * n);
    int k = extra(rng);
    for (int i = 0; i < k; ++i) add(pick(rng), pick(rng));
    return g;
}

}  // namespace cpk
