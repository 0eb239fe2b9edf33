#pragma once

#include <vector>

#include "plumb/graph.hpp"
#include "plumb/rational.hpp"

namespace plumb {

using IMat = std::vector<std::vector<Integer>>;

// Smith normal form data for the embedding L -> L', realizing H = L'/L.
// u * a * v = diag, with u, v unimodular. `factors` keeps the invariant
// factors > 1 (their product is det a).
struct SmithData {
    IMat u, v, diag;
    std::vector<Integer> factors;
};

struct Intersection {
    PlumbingGraph graph;
    IMat a;                        // positive definite matrix, -I
    QMat a_inv;                    // exact inverse; entrywise > 0
    Integer det;                   // |H|
    std::vector<QVec> dual_basis;  // dual_basis[v] = column v of a_inv
    QVec canonical;                // K, from the adjunction relations
    std::vector<int> nodes;        // valency >= 3, internal indices
    std::vector<int> ends;         // valency == 1
    std::vector<int> valency;
    SmithData smith;

    int size() const { return graph.size(); }
};

Intersection analyze(const PlumbingGraph& g);

// (x, y) under the intersection form: -x^T a y.
Rational intersection_pairing(const Intersection& ix, const QVec& x, const QVec& y);

struct ReducedMatrix {
    std::vector<int> subset;  // internal indices into the parent graph, sorted
    QMat matrix;              // indexed by position in subset
};

// Rational matrix of the subtree induced by `subset` (internal indices),
// computed by successive end-edge removals: deleting end i with neighbor j
// updates a_jj -= 1/a_ii. Throws GraphError unless the subset induces a
// subtree.
ReducedMatrix reduced_matrix(const Intersection& ix, const std::vector<int>& subset);

bool induces_subtree(const PlumbingGraph& g, const std::vector<int>& subset);

}  // namespace plumb
