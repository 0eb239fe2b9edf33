#include "plumb/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace plumb {

namespace {

// Positions of the invariant factors > 1 on the Smith diagonal.
std::vector<int> factor_positions(const SmithData& s) {
    std::vector<int> pos;
    for (int k = 0; k < static_cast<int>(s.diag.size()); ++k)
        if (s.diag[k][k] > 1) pos.push_back(k);
    return pos;
}

Integer mod_pos(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Integer inverse of a unimodular matrix.
IMat unimodular_inverse(const IMat& u) {
    int n = static_cast<int>(u.size());
    QMat m(n, QVec(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rational(u[i][j]);
        m[i][n + i] = 1;
    }
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m[p][k] == 0) ++p;
        std::swap(m[k], m[p]);
        Rational piv = m[k][k];
        for (int j = 0; j < 2 * n; ++j) m[k][j] /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            Rational f = m[i][k];
            for (int j = 0; j < 2 * n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    IMat inv(n, std::vector<Integer>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!is_integer(m[i][n + j])) throw LatticeError("matrix is not unimodular");
            inv[i][j] = m[i][n + j].get_num();
        }
    return inv;
}

}  // namespace

HClass class_zero(const Intersection& ix) {
    HClass h;
    h.c.assign(ix.smith.factors.size(), 0);
    return h;
}

HClass class_add(const Intersection& ix, const HClass& a, const HClass& b) {
    HClass h = class_zero(ix);
    for (size_t i = 0; i < h.c.size(); ++i)
        h.c[i] = mod_pos(a.c[i] + b.c[i], ix.smith.factors[i]);
    return h;
}

HClass class_neg(const Intersection& ix, const HClass& a) {
    HClass h = class_zero(ix);
    for (size_t i = 0; i < h.c.size(); ++i) h.c[i] = mod_pos(-a.c[i], ix.smith.factors[i]);
    return h;
}

std::vector<HClass> all_classes(const Intersection& ix) {
    std::vector<HClass> out{class_zero(ix)};
    for (size_t i = 0; i < ix.smith.factors.size(); ++i) {
        std::vector<HClass> next;
        for (const auto& h : out)
            for (Integer c = 0; c < ix.smith.factors[i]; ++c) {
                HClass e = h;
                e.c[i] = c;
                next.push_back(e);
            }
        out = next;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const HClass& h) {
    std::string s = "(";
    for (size_t i = 0; i < h.c.size(); ++i) {
        if (i) s += ",";
        s += h.c[i].get_str();
    }
    return s + ")";
}

bool in_dual_lattice(const Intersection& ix, const QVec& x) {
    int n = ix.size();
    for (int v = 0; v < n; ++v) {
        Rational s = 0;
        for (int w = 0; w < n; ++w) s += Rational(ix.a[v][w]) * x[w];
        if (!is_integer(s)) return false;
    }
    return true;
}

HClass class_of(const Intersection& ix, const QVec& x) {
    int n = ix.size();
    std::vector<Integer> c(n);
    for (int v = 0; v < n; ++v) {
        Rational s = 0;
        for (int w = 0; w < n; ++w) s += Rational(ix.a[v][w]) * x[w];
        if (!is_integer(s)) throw LatticeError("vector is not in the dual lattice");
        c[v] = s.get_num();
    }
    auto pos = factor_positions(ix.smith);
    HClass h = class_zero(ix);
    for (size_t i = 0; i < pos.size(); ++i) {
        Integer s = 0;
        for (int w = 0; w < n; ++w) s += ix.smith.u[pos[i]][w] * c[w];
        h.c[i] = mod_pos(s, ix.smith.factors[i]);
    }
    return h;
}

QVec unit_box_rep(const Intersection& ix, const HClass& h) {
    int n = ix.size();
    if (h.c.size() != ix.smith.factors.size()) throw LatticeError("class has wrong shape");
    auto pos = factor_positions(ix.smith);
    std::vector<Integer> y(n, 0);
    for (size_t i = 0; i < pos.size(); ++i) y[pos[i]] = h.c[i];
    IMat u_inv = unimodular_inverse(ix.smith.u);
    std::vector<Integer> c(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[i] += u_inv[i][j] * y[j];
    QVec x(n, 0);
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v) x[w] += ix.a_inv[w][v] * Rational(c[v]);
    for (auto& e : x) e = frac_q(e);
    return x;
}

QVec min_cone_rep(const Intersection& ix, const HClass& h) {
    QVec x = unit_box_rep(ix, h);
    int n = ix.size();
    long max_e = 0;
    for (const auto& v : ix.graph.vertices) max_e = std::max(max_e, std::abs(v.euler));
    Integer cap = 10 * ix.det * n * std::max<long>(max_e, 1);
    for (Integer it = 0; it <= cap; ++it) {
        int bad = -1;
        for (int v = 0; v < n && bad < 0; ++v) {
            Rational s = 0;
            for (int w = 0; w < n; ++w) s += Rational(ix.a[v][w]) * x[w];
            if (s < 0) bad = v;  // (x, E_v) = -s > 0
        }
        if (bad < 0) return x;
        x[bad] += 1;
    }
    throw LatticeError("minimal cone representative iteration did not terminate");
}

bool leq(const QVec& a, const QVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (b[i] < a[i]) return false;
    return true;
}

bool in_lipman_cone(const Intersection& ix, const QVec& x) {
    int n = ix.size();
    for (int v = 0; v < n; ++v) {
        Rational s = 0;
        for (int w = 0; w < n; ++w) s += Rational(ix.a[v][w]) * x[w];
        if (s < 0) return false;
    }
    return true;
}

bool in_lipman_interior(const Intersection& ix, const QVec& x) {
    int n = ix.size();
    for (int v = 0; v < n; ++v) {
        Rational s = 0;
        for (int w = 0; w < n; ++w) s += Rational(ix.a[v][w]) * x[w];
        if (s <= 0) return false;
    }
    return true;
}

QVec project_to(const QVec& x, const std::vector<int>& subset) {
    if (subset.empty()) throw LatticeError("empty projection subset");
    QVec out;
    out.reserve(subset.size());
    for (int i : subset) out.push_back(x[i]);
    return out;
}

QVec project_off_end(const Intersection& ix, const Intersection& deleted, long end_id,
                     const QVec& x) {
    int u = ix.graph.index_of(end_id);
    if (ix.valency[u] != 1) throw LatticeError("projection vertex is not an end");
    int n = ix.size();
    // dual-basis coordinates of x
    QVec c(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) c[v] += Rational(ix.a[v][w]) * x[w];
    QVec out(deleted.size(), 0);
    for (int v = 0; v < n; ++v) {
        if (v == u || c[v] == 0) continue;
        int dv = deleted.graph.index_of(ix.graph.id_of(v));
        for (int w = 0; w < deleted.size(); ++w) out[w] += deleted.a_inv[w][dv] * c[v];
    }
    return out;
}

std::string format_lattice_vector(const Intersection& ix, const QVec& x) {
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < ix.size(); ++i) {
        if (!first) out << ",";
        first = false;
        Rational q = x[i];
        q.canonicalize();
        out << "v" << ix.graph.id_of(i) << ":" << q.get_num().get_str() << "/"
            << q.get_den().get_str();
    }
    return out.str();
}

QVec parse_lattice_vector(const Intersection& ix, const std::string& text) {
    QVec x(ix.size(), 0);
    if (text.empty()) return x;
    std::istringstream in(text);
    std::string item;
    std::vector<Rational> bare;
    bool named = text[0] == 'v' && text.find_first_of(":=") != std::string::npos;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (named) {
            auto colon = item.find_first_of(":=");
            if (item[0] != 'v' || colon == std::string::npos)
                throw LatticeError("expected v<id>:<p/q> entry, got '" + item + "'");
            long id = std::stol(item.substr(1, colon - 1));
            Rational q(item.substr(colon + 1));
            q.canonicalize();
            x[ix.graph.index_of(id)] = q;
        } else {
            Rational q(item);
            q.canonicalize();
            bare.push_back(q);
        }
    }
    if (!named) {
        if (bare.size() > x.size()) throw LatticeError("too many coordinates");
        for (size_t i = 0; i < bare.size(); ++i) x[i] = bare[i];
    }
    return x;
}

}  // namespace plumb
