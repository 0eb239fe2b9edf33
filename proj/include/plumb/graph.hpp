#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumb {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decorated tree: vertex ids are arbitrary integers, eulers are the
// self-intersection decorations. Vertices are kept sorted by id; all
// derived data is indexed by position in that order.
struct PlumbingGraph {
    struct Vertex {
        long id;
        long euler;
    };
    std::vector<Vertex> vertices;               // sorted by id
    std::vector<std::pair<long, long>> edges;   // normalized (small id, large id), sorted

    int size() const { return static_cast<int>(vertices.size()); }

    int index_of(long id) const;      // throws GraphError for unknown id
    long id_of(int index) const { return vertices[index].id; }

    // Valency of the vertex at internal index.
    int valency(int index) const;
    std::vector<int> neighbors(int index) const;

    std::vector<int> node_indices() const;  // valency >= 3
    std::vector<int> end_indices() const;   // valency == 1
};

// Text format: lines "vertex <id> <euler>", "edge <id1> <id2>",
// '#' comments and blank lines ignored. Validates tree shape and
// negative definiteness (positive definite associated matrix).
PlumbingGraph parse_graph(const std::string& text);

// Emits vertices sorted by id, then edges sorted lexicographically.
// Round-trips bit-exactly through parse_graph.
std::string to_text(const PlumbingGraph& g);

// Removes an end vertex keeping all other decorations. Throws if the
// vertex is not an end or is the only vertex.
PlumbingGraph delete_end_vertex(const PlumbingGraph& g, long id);

struct OrbifoldGraph {
    std::vector<long> vertices;                 // node ids, sorted
    std::vector<std::pair<long, long>> edges;   // node-free connecting paths
    std::map<long, int> valency;
};

// Nodes of g joined by an edge whenever the connecting path has only
// valency-2 interior vertices. Graphs without nodes yield the empty graph.
OrbifoldGraph orbifold_graph(const PlumbingGraph& g);

}  // namespace plumb
