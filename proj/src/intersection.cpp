#include "plumb/intersection.hpp"

#include <algorithm>
#include <set>

namespace plumb {

namespace {

QMat invert(const IMat& a) {
    int n = static_cast<int>(a.size());
    QMat m(n, QVec(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rational(a[i][j]);
        m[i][n + i] = 1;
    }
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) throw GraphError("singular intersection matrix");
        std::swap(m[k], m[p]);
        Rational piv = m[k][k];
        for (int j = 0; j < 2 * n; ++j) m[k][j] /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            Rational f = m[i][k];
            for (int j = 0; j < 2 * n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    QMat inv(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

// Fraction-free (Bareiss) determinant.
Integer determinant(const IMat& a) {
    int n = static_cast<int>(a.size());
    IMat m = a;
    Integer prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

SmithData smith_form(const IMat& a) {
    int n = static_cast<int>(a.size());
    SmithData s;
    s.diag = a;
    s.u.assign(n, std::vector<Integer>(n, 0));
    s.v.assign(n, std::vector<Integer>(n, 0));
    for (int i = 0; i < n; ++i) s.u[i][i] = s.v[i][i] = 1;
    auto& d = s.diag;

    auto row_op = [&](int i, int j, const Integer& f) {  // row_i -= f * row_j
        for (int c = 0; c < n; ++c) {
            d[i][c] -= f * d[j][c];
            s.u[i][c] -= f * s.u[j][c];
        }
    };
    auto col_op = [&](int i, int j, const Integer& f) {  // col_i -= f * col_j
        for (int r = 0; r < n; ++r) {
            d[r][i] -= f * d[r][j];
            s.v[r][i] -= f * s.v[r][j];
        }
    };
    auto swap_rows = [&](int i, int j) {
        std::swap(d[i], d[j]);
        std::swap(s.u[i], s.u[j]);
    };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < n; ++r) {
            std::swap(d[r][i], d[r][j]);
            std::swap(s.v[r][i], s.v[r][j]);
        }
    };

    for (int k = 0; k < n; ++k) {
        for (;;) {
            // find a nonzero pivot in the remaining block, smallest |value|
            int pi = -1, pj = -1;
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j)
                    if (d[i][j] != 0 &&
                        (pi < 0 || abs(d[i][j]) < abs(d[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            if (pi != k) swap_rows(k, pi);
            if (pj != k) swap_cols(k, pj);
            bool clean = true;
            for (int i = k + 1; i < n; ++i)
                if (d[i][k] != 0) {
                    Integer f;
                    mpz_fdiv_q(f.get_mpz_t(), d[i][k].get_mpz_t(), d[k][k].get_mpz_t());
                    row_op(i, k, f);
                    if (d[i][k] != 0) clean = false;
                }
            for (int j = k + 1; j < n; ++j)
                if (d[k][j] != 0) {
                    Integer f;
                    mpz_fdiv_q(f.get_mpz_t(), d[k][j].get_mpz_t(), d[k][k].get_mpz_t());
                    col_op(j, k, f);
                    if (d[k][j] != 0) clean = false;
                }
            if (!clean) continue;
            // pivot must divide the rest of the block
            bool divides = true;
            for (int i = k + 1; i < n && divides; ++i)
                for (int j = k + 1; j < n && divides; ++j)
                    if (d[i][j] % d[k][k] != 0) {
                        row_op(k, i, Integer(-1));  // fold row i into row k
                        divides = false;
                    }
            if (divides) break;
        }
        if (d[k][k] < 0) {
            for (int c = 0; c < n; ++c) {
                d[k][c] = -d[k][c];
                s.u[k][c] = -s.u[k][c];
            }
        }
    }
    for (int k = 0; k < n; ++k)
        if (d[k][k] > 1) s.factors.push_back(d[k][k]);
    return s;
}

}  // namespace

Intersection analyze(const PlumbingGraph& g) {
    Intersection ix;
    ix.graph = g;
    int n = g.size();
    ix.a.assign(n, std::vector<Integer>(n, 0));
    for (int i = 0; i < n; ++i) ix.a[i][i] = Integer(-g.vertices[i].euler);
    for (const auto& e : g.edges) {
        int i = g.index_of(e.first), j = g.index_of(e.second);
        ix.a[i][j] = ix.a[j][i] = -1;
    }
    ix.a_inv = invert(ix.a);
    ix.det = determinant(ix.a);
    ix.dual_basis.assign(n, QVec(n, 0));
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) ix.dual_basis[v][w] = ix.a_inv[w][v];
    // (K + E_v, E_v) + 2 = 0 gives (a K)_v = 2 - a_vv.
    ix.canonical.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        Rational rhs = Rational(2) - Rational(ix.a[v][v]);
        for (int w = 0; w < n; ++w) ix.canonical[w] += ix.a_inv[w][v] * rhs;
    }
    ix.valency.resize(n);
    for (int i = 0; i < n; ++i) ix.valency[i] = g.valency(i);
    ix.nodes = g.node_indices();
    ix.ends = g.end_indices();
    ix.smith = smith_form(ix.a);
    return ix;
}

Rational intersection_pairing(const Intersection& ix, const QVec& x, const QVec& y) {
    int n = ix.size();
    Rational s = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < n; ++j)
            if (y[j] != 0) s += x[i] * Rational(ix.a[i][j]) * y[j];
    }
    return -s;
}

bool induces_subtree(const PlumbingGraph& g, const std::vector<int>& subset) {
    if (subset.empty()) return false;
    std::set<int> in(subset.begin(), subset.end());
    int edges_inside = 0;
    for (const auto& e : g.edges)
        if (in.count(g.index_of(e.first)) && in.count(g.index_of(e.second))) ++edges_inside;
    if (edges_inside != static_cast<int>(subset.size()) - 1) return false;
    // connected: walk within the subset
    std::set<int> seen{subset[0]};
    std::vector<int> stack{subset[0]};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors(v))
            if (in.count(w) && !seen.count(w)) {
                seen.insert(w);
                stack.push_back(w);
            }
    }
    return seen.size() == subset.size();
}

ReducedMatrix reduced_matrix(const Intersection& ix, const std::vector<int>& subset) {
    std::vector<int> j(subset);
    std::sort(j.begin(), j.end());
    if (!induces_subtree(ix.graph, j)) throw GraphError("subset does not induce a subtree");

    std::vector<int> alive;
    for (int i = 0; i < ix.size(); ++i) alive.push_back(i);
    QMat m(ix.size(), QVec(ix.size(), 0));
    for (int r = 0; r < ix.size(); ++r)
        for (int c = 0; c < ix.size(); ++c) m[r][c] = Rational(ix.a[r][c]);
    std::set<int> keep(j.begin(), j.end());

    auto degree = [&](int v) {
        int d = 0;
        for (int w : alive)
            if (w != v && m[v][w] != 0) ++d;
        return d;
    };

    bool progress = true;
    while (alive.size() > j.size() && progress) {
        progress = false;
        for (size_t p = 0; p < alive.size(); ++p) {
            int v = alive[p];
            if (keep.count(v) || degree(v) != 1) continue;
            int nb = -1;
            for (int w : alive)
                if (w != v && m[v][w] != 0) nb = w;
            m[nb][nb] -= 1 / m[v][v];
            for (int w : alive) m[v][w] = m[w][v] = 0;
            alive.erase(alive.begin() + p);
            progress = true;
            break;
        }
    }
    if (alive.size() != j.size()) throw GraphError("subset does not induce a subtree");

    ReducedMatrix out;
    out.subset = j;
    int k = static_cast<int>(j.size());
    out.matrix.assign(k, QVec(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) out.matrix[r][c] = m[j[r]][j[c]];
    return out;
}

}  // namespace plumb
