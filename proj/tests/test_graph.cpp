#include <doctest.h>

#include <algorithm>
#include <set>

#include "plumb/graph.hpp"
#include "plumb/intersection.hpp"
#include "test_graphs.hpp"

using namespace plumb;

TEST_CASE("parse smallest tree") {
    PlumbingGraph g = parse_graph(testdata::single_m1);
    CHECK(g.size() == 1);
    CHECK(g.vertices[0].euler == -1);
    CHECK(g.edges.empty());
}

TEST_CASE("parse the ten-vertex example") {
    PlumbingGraph g = parse_graph(testdata::example10);
    CHECK(g.size() == 10);
    CHECK(g.node_indices().size() == 3);
    CHECK(g.end_indices().size() == 5);
    CHECK(g.node_indices() == std::vector<int>{0, 1, 2});
}

TEST_CASE("positive euler is rejected") {
    CHECK_THROWS_WITH_AS(parse_graph("vertex 1 1\n"), "not negative definite", GraphError);
}

TEST_CASE("non-tree inputs are rejected distinctly") {
    CHECK_THROWS_AS(parse_graph("vertex 1 -2\nvertex 2 -2\n"), GraphError);  // missing edge
    std::string cyclic =
        "vertex 1 -3\nvertex 2 -3\nvertex 3 -3\nvertex 4 -3\n"
        "edge 1 2\nedge 2 3\nedge 3 1\n";
    CHECK_THROWS_WITH_AS(parse_graph(cyclic), "graph is disconnected", GraphError);
    CHECK_THROWS_AS(parse_graph("vertex 1 -2\nvertx 1 -2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("vertex 1 -2\nedge 1 5\n"), GraphError);
}

TEST_CASE("serialization round trip is bit exact") {
    std::string noisy =
        "# comment\n\nedge 2 1\nvertex 2 -2\nvertex 1 -2\n   # another\n";
    PlumbingGraph g = parse_graph(noisy);
    std::string canon = to_text(g);
    CHECK(canon == "vertex 1 -2\nvertex 2 -2\nedge 1 2\n");
    PlumbingGraph g2 = parse_graph(canon);
    CHECK(to_text(g2) == canon);
}

TEST_CASE("delete end vertex") {
    PlumbingGraph g = parse_graph(testdata::chain2);
    PlumbingGraph h = delete_end_vertex(g, 2);
    CHECK(h.size() == 1);
    CHECK(h.vertices[0].euler == -2);

    PlumbingGraph c3 = parse_graph(testdata::chain3);
    CHECK_THROWS_AS(delete_end_vertex(c3, 2), GraphError);  // interior vertex
    PlumbingGraph one = parse_graph(testdata::single_m2);
    CHECK_THROWS_AS(delete_end_vertex(one, 1), GraphError);

    PlumbingGraph ex = parse_graph(testdata::example10);
    PlumbingGraph ex9 = delete_end_vertex(ex, 8);
    CHECK(ex9.size() == 9);
    CHECK_NOTHROW(analyze(ex9));  // still negative definite
}

TEST_CASE("orbifold graph") {
    OrbifoldGraph s = orbifold_graph(parse_graph(testdata::star_237));
    CHECK(s.vertices == std::vector<long>{0});
    CHECK(s.edges.empty());
    CHECK(s.valency.at(0) == 0);

    OrbifoldGraph ex = orbifold_graph(parse_graph(testdata::example10));
    CHECK(ex.vertices == std::vector<long>{0, 1, 2});
    CHECK(ex.edges == std::vector<std::pair<long, long>>{{0, 1}, {0, 2}});
    CHECK(ex.valency.at(0) == 2);
    CHECK(ex.valency.at(1) == 1);

    OrbifoldGraph lens = orbifold_graph(parse_graph(testdata::chain3));
    CHECK(lens.vertices.empty());
    CHECK(lens.edges.empty());
}

TEST_CASE("orbifold graph is stable under chain subdivision") {
    PlumbingGraph g = parse_graph(testdata::example10);
    OrbifoldGraph before = orbifold_graph(g);
    // subdivide every edge with a chain vertex (adjacency only; the orbifold
    // construction does not look at the decorations)
    PlumbingGraph sub;
    sub.vertices = g.vertices;
    long next = 100;
    for (const auto& e : g.edges) {
        sub.vertices.push_back({next, -2});
        sub.edges.push_back({std::min(e.first, next), std::max(e.first, next)});
        sub.edges.push_back({std::min(e.second, next), std::max(e.second, next)});
        ++next;
    }
    std::sort(sub.vertices.begin(), sub.vertices.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(sub.edges.begin(), sub.edges.end());
    OrbifoldGraph after = orbifold_graph(sub);
    CHECK(after.vertices == before.vertices);
    CHECK(after.edges == before.edges);
    CHECK(after.valency == before.valency);
}

TEST_CASE("intersection data on one vertex") {
    Intersection m1 = analyze(parse_graph(testdata::single_m1));
    CHECK(m1.a[0][0] == 1);
    CHECK(m1.a_inv[0][0] == 1);
    CHECK(m1.det == 1);
    CHECK(m1.dual_basis[0] == QVec{1});
    CHECK(m1.canonical == QVec{1});

    Intersection m2 = analyze(parse_graph(testdata::single_m2));
    CHECK(m2.a[0][0] == 2);
    CHECK(m2.a_inv[0][0] == Rational(1, 2));
    CHECK(m2.det == 2);
    CHECK(m2.dual_basis[0] == QVec{Rational(1, 2)});
    CHECK(m2.canonical == QVec{0});
}

TEST_CASE("intersection invariants hold on every test graph") {
    for (const auto& text : {testdata::single_m1, testdata::single_m2, testdata::chain2,
                             testdata::chain3, testdata::star_d4, testdata::star_237,
                             testdata::example10}) {
        Intersection ix = analyze(parse_graph(text));
        int n = ix.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational s = 0;
                for (int k = 0; k < n; ++k) s += Rational(ix.a[i][k]) * ix.a_inv[k][j];
                CHECK(s == (i == j ? 1 : 0));
                CHECK(ix.a_inv[i][j] > 0);
            }
        // dual relation: E_w = sum_v a_vw E*_v
        for (int w = 0; w < n; ++w) {
            QVec lhs(n, 0);
            for (int v = 0; v < n; ++v)
                for (int c = 0; c < n; ++c)
                    lhs[c] += Rational(ix.a[v][w]) * ix.dual_basis[v][c];
            for (int c = 0; c < n; ++c) CHECK(lhs[c] == (c == w ? 1 : 0));
        }
        // adjunction relations
        for (int v = 0; v < n; ++v) {
            QVec ev(n, 0);
            ev[v] = 1;
            CHECK(intersection_pairing(ix, ix.canonical, ev) ==
                  Rational(-2) - intersection_pairing(ix, ev, ev));
        }
        // Smith data: u a v = diag, factors multiply to det
        Integer prod = 1;
        for (const auto& f : ix.smith.factors) prod *= f;
        CHECK(prod == ix.det);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Integer s = 0;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        s += ix.smith.u[i][k] * ix.a[k][l] * ix.smith.v[l][j];
                CHECK(s == ix.smith.diag[i][j]);
                if (i != j) CHECK(ix.smith.diag[i][j] == 0);
            }
    }
}

TEST_CASE("example graph dual projections match the known values") {
    Intersection ix = analyze(parse_graph(testdata::example10));
    CHECK(ix.det == 1);
    auto proj = [&](int v) {
        std::vector<long> p;
        for (int c : {0, 1, 2}) p.push_back(static_cast<long>(ix.dual_basis[v][c].get_num().get_si()));
        return p;
    };
    std::multiset<std::vector<long>> nodes;
    for (int v : ix.nodes) nodes.insert(proj(v));
    CHECK(nodes == std::multiset<std::vector<long>>{
                       {84, 186, 72}, {42, 84, 36}, {36, 72, 42}});
    std::multiset<std::vector<long>> ends;
    for (int v : ix.ends) ends.insert(proj(v));
    CHECK(ends == std::multiset<std::vector<long>>{
                      {42, 93, 36}, {28, 62, 24}, {21, 42, 18}, {18, 36, 21}, {12, 24, 14}});
}

TEST_CASE("reduced matrix") {
    Intersection c2 = analyze(parse_graph(testdata::chain2));
    SUBCASE("whole vertex set gives the matrix itself") {
        ReducedMatrix r = reduced_matrix(c2, {0, 1});
        CHECK(r.matrix[0][0] == 2);
        CHECK(r.matrix[0][1] == -1);
    }
    SUBCASE("one removal step") {
        ReducedMatrix r = reduced_matrix(c2, {1});
        CHECK(r.matrix[0][0] == Rational(3, 2));
    }
    SUBCASE("subset must induce a subtree") {
        Intersection c3 = analyze(parse_graph(testdata::chain3));
        CHECK_THROWS_AS(reduced_matrix(c3, {0, 2}), GraphError);
    }
}

TEST_CASE("reduced matrix identities on the example graph") {
    Intersection ix = analyze(parse_graph(testdata::example10));
    for (const auto& subset : std::vector<std::vector<int>>{
             {0, 1, 2, 3, 4}, {0, 3, 1}, {0}, {1, 3}, {0, 4, 2, 8}}) {
        ReducedMatrix r = reduced_matrix(ix, subset);
        int k = static_cast<int>(r.subset.size());
        // oracle: the reduced matrix inverts the restriction of the inverse
        QMat m(k, QVec(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[i][j] = ix.a_inv[r.subset[i]][r.subset[j]];
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                Rational s = 0;
                for (int l = 0; l < k; ++l) s += m[i][l] * r.matrix[l][j];
                CHECK(s == (i == j ? 1 : 0));
            }
        // positive definite, by leading minors
        QMat a = r.matrix;
        for (int piv = 0; piv < k; ++piv) {
            CHECK(a[piv][piv] > 0);
            for (int i = piv + 1; i < k; ++i) {
                Rational f = a[i][piv] / a[piv][piv];
                for (int j = piv; j < k; ++j) a[i][j] -= f * a[piv][j];
            }
        }
    }
}
