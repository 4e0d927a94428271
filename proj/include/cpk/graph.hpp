#pragma once
// Finite directed graphs with named vertices and edges, the constructions the
// operator-algebra side needs (opposite graph, dual/edge graph), structural
// predicates, and path enumeration.
//
// Orientation bookkeeping, fixed once for the whole project: an edge e runs
// from its source s(e) to its range r(e); JSON stores src = s(e), dst = r(e).
// The adjacency matrix counts A[u][v] = #{ e : r(e) = u, s(e) = v }, so columns
// index sources and rows index ranges, and powers of A count paths by range.
// A path e1 e2 ... en is composable when s(e_i) = r(e_{i+1}); its range is
// r(e1) and its source is s(en).  A "source vertex" receives no edge
// (r^{-1}(v) empty) and a "sink vertex" emits none.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpk/intmatrix.hpp"

#include <nlohmann/json.hpp>

namespace cpk {

struct DirectedGraph {
    struct Edge {
        std::string name;
        int src = 0;  // s(e)
        int dst = 0;  // r(e)
    };

    std::string name;  // optional label carried through the JSON form
    std::vector<std::string> vertices;
    std::vector<Edge> edges;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }

    int vertex_index(const std::string& name) const;
    int edge_index(const std::string& name) const;

    static DirectedGraph from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

DirectedGraph load_graph_file(const std::string& path);

// A[u][v] = number of edges with range u and source v.
IntMatrix adjacency(const DirectedGraph& g);

// Same vertices, every edge reversed (name suffixed "_op").  Its adjacency is
// the transpose of the original.
DirectedGraph opposite_graph(const DirectedGraph& g);

// Edge graph: one vertex per edge of g, and one edge (e, f) whenever
// s(e) = r(f); the new edge has source f and range e, so paths in the dual of
// length n correspond to paths in g of length n+1.
DirectedGraph dual_graph(const DirectedGraph& g);

struct GraphPredicates {
    bool has_sources = false;      // some vertex receives no edge
    bool has_sinks = false;        // some vertex emits no edge
    bool primitive = false;        // some power of A is entrywise positive
    int primitivity_exponent = 0;  // smallest such power when primitive
    std::vector<std::string> source_vertices;
    std::vector<std::string> sink_vertices;
};
GraphPredicates graph_predicates(const DirectedGraph& g);

// --- paths -------------------------------------------------------------

// Edge ids listed range-to-source: path[0] is the leading (range-side) edge.
struct Path {
    std::vector<int> edges;

    int length() const { return static_cast<int>(edges.size()); }
    bool empty() const { return edges.empty(); }

    bool operator==(const Path& o) const { return edges == o.edges; }
    bool operator<(const Path& o) const { return edges < o.edges; }
};

// range / source of a path; for the empty path both are the given base vertex.
int path_range(const DirectedGraph& g, const Path& p, int base_vertex);
int path_source(const DirectedGraph& g, const Path& p, int base_vertex);

bool composable(const DirectedGraph& g, const Path& left, const Path& right);
Path concat(const Path& left, const Path& right);

// all composable paths of exactly the given length (length 0 not included here)
std::vector<Path> enumerate_paths(const DirectedGraph& g, int length);

// paths of given length with prescribed range or source vertex
std::vector<Path> paths_with_range(const DirectedGraph& g, int length, int range_vertex);
std::vector<Path> paths_with_source(const DirectedGraph& g, int length, int source_vertex);

std::string path_name(const DirectedGraph& g, const Path& p);

// --- random graphs for property suites --------------------------------

// Deterministic in the seed.  Every vertex gets at least one outgoing and one
// incoming edge (no sources, no sinks), then extra edges are sprinkled.
DirectedGraph random_graph_no_sources_sinks(std::mt19937_64& rng, int min_vertices,
                                            int max_vertices);

}  // namespace cpk
