#include "plumb/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "plumb/rational.hpp"

namespace plumb {

int PlumbingGraph::index_of(long id) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), id,
                               [](const Vertex& v, long x) { return v.id < x; });
    if (it == vertices.end() || it->id != id)
        throw GraphError("unknown vertex id " + std::to_string(id));
    return static_cast<int>(it - vertices.begin());
}

int PlumbingGraph::valency(int index) const {
    long id = vertices[index].id;
    int d = 0;
    for (const auto& e : edges)
        if (e.first == id || e.second == id) ++d;
    return d;
}

std::vector<int> PlumbingGraph::neighbors(int index) const {
    long id = vertices[index].id;
    std::vector<int> out;
    for (const auto& e : edges) {
        if (e.first == id) out.push_back(index_of(e.second));
        if (e.second == id) out.push_back(index_of(e.first));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> PlumbingGraph::node_indices() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (valency(i) >= 3) out.push_back(i);
    return out;
}

std::vector<int> PlumbingGraph::end_indices() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (valency(i) == 1) out.push_back(i);
    return out;
}

namespace {

// Positive definiteness of the matrix with A_vv = -e_v, A_vw = -1 on edges,
// by exact signs of leading principal minors (fraction-free elimination).
bool positive_definite(const PlumbingGraph& g) {
    int n = g.size();
    QMat a(n, QVec(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = Rational(-g.vertices[i].euler);
    for (const auto& e : g.edges) {
        int i = g.index_of(e.first), j = g.index_of(e.second);
        a[i][j] = a[j][i] = Rational(-1);
    }
    for (int k = 0; k < n; ++k) {
        if (a[k][k] <= 0) return false;
        for (int i = k + 1; i < n; ++i) {
            Rational f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return true;
}

void validate(const PlumbingGraph& g) {
    int n = g.size();
    if (n == 0) throw GraphError("empty graph");
    if (static_cast<int>(g.edges.size()) != n - 1)
        throw GraphError("not a tree: " + std::to_string(g.edges.size()) + " edges on " +
                         std::to_string(n) + " vertices");
    // connectivity (with n-1 edges this also rules out cycles)
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i]) throw GraphError("graph is disconnected");
    if (!positive_definite(g)) throw GraphError("not negative definite");
}

}  // namespace

PlumbingGraph parse_graph(const std::string& text) {
    PlumbingGraph g;
    std::set<long> ids;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::pair<long, long>> raw_edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "vertex") {
            long id, euler;
            if (!(ls >> id >> euler))
                throw GraphError("line " + std::to_string(lineno) + ": expected 'vertex <id> <euler>'");
            if (!ids.insert(id).second)
                throw GraphError("line " + std::to_string(lineno) + ": duplicate vertex " + std::to_string(id));
            g.vertices.push_back({id, euler});
        } else if (kind == "edge") {
            long a, b;
            if (!(ls >> a >> b))
                throw GraphError("line " + std::to_string(lineno) + ": expected 'edge <id1> <id2>'");
            if (a == b) throw GraphError("line " + std::to_string(lineno) + ": self loop");
            raw_edges.emplace_back(std::min(a, b), std::max(a, b));
        } else {
            throw GraphError("line " + std::to_string(lineno) + ": unknown directive '" + kind + "'");
        }
        std::string extra;
        if (ls >> extra)
            throw GraphError("line " + std::to_string(lineno) + ": trailing input '" + extra + "'");
    }
    std::sort(g.vertices.begin(), g.vertices.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(raw_edges.begin(), raw_edges.end());
    for (size_t i = 0; i + 1 < raw_edges.size(); ++i)
        if (raw_edges[i] == raw_edges[i + 1]) throw GraphError("duplicate edge");
    for (const auto& e : raw_edges) {
        if (!ids.count(e.first) || !ids.count(e.second))
            throw GraphError("edge references unknown vertex");
    }
    g.edges = raw_edges;
    validate(g);
    return g;
}

std::string to_text(const PlumbingGraph& g) {
    std::ostringstream out;
    for (const auto& v : g.vertices) out << "vertex " << v.id << " " << v.euler << "\n";
    for (const auto& e : g.edges) out << "edge " << e.first << " " << e.second << "\n";
    return out.str();
}

PlumbingGraph delete_end_vertex(const PlumbingGraph& g, long id) {
    int idx = g.index_of(id);
    if (g.size() == 1) throw GraphError("cannot delete the only vertex");
    if (g.valency(idx) != 1)
        throw GraphError("vertex " + std::to_string(id) + " is not an end vertex");
    PlumbingGraph out;
    for (const auto& v : g.vertices)
        if (v.id != id) out.vertices.push_back(v);
    for (const auto& e : g.edges)
        if (e.first != id && e.second != id) out.edges.push_back(e);
    return out;
}

OrbifoldGraph orbifold_graph(const PlumbingGraph& g) {
    OrbifoldGraph orb;
    std::vector<int> nodes = g.node_indices();
    for (int i : nodes) orb.vertices.push_back(g.id_of(i));
    std::set<int> node_set(nodes.begin(), nodes.end());
    // Walk from each node along every branch; a node-free path of
    // valency-2 vertices reaching another node is an orbifold edge.
    std::set<std::pair<long, long>> found;
    for (int start : nodes) {
        for (int nb : g.neighbors(start)) {
            int prev = start, cur = nb;
            while (!node_set.count(cur) && g.valency(cur) == 2) {
                for (int w : g.neighbors(cur))
                    if (w != prev) {
                        prev = cur;
                        cur = w;
                        break;
                    }
            }
            if (node_set.count(cur) && cur != start) {
                long a = g.id_of(start), b = g.id_of(cur);
                found.insert({std::min(a, b), std::max(a, b)});
            }
        }
    }
    orb.edges.assign(found.begin(), found.end());
    for (long v : orb.vertices) orb.valency[v] = 0;
    for (const auto& e : orb.edges) {
        orb.valency[e.first]++;
        orb.valency[e.second]++;
    }
    return orb;
}

}  // namespace plumb
