#include "plumb/quasipoly.hpp"

#include <algorithm>

namespace plumb::quasipoly {

using series::Context;
using series::RationalFunction;

Rational QuasiPolynomial::eval(const QVec& x) const {
    int n = static_cast<int>(x.size());
    QVec y(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (x[j] != 0) y[i] += Rational(ix->a[i][j]) * x[j];
    Rational v = c0;
    for (int i = 0; i < n; ++i)
        if (lin[i] != 0) v += lin[i] * y[i];
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (quad[i][j] != 0) v += quad[i][j] * y[i] * y[j];
    return v;
}

QVec subcone_apex(const Intersection& ix) {
    QVec apex(ix.size(), 0);
    for (int v = 0; v < ix.size(); ++v) {
        Rational c = Rational(ix.valency[v] - 2);
        if (c == 0) continue;
        for (int w = 0; w < ix.size(); ++w) apex[w] += ix.dual_basis[v][w] * c;
    }
    return apex;
}

namespace {

QVec dual_sum(const Intersection& ix) {
    QVec w(ix.size(), 0);
    for (int v = 0; v < ix.size(); ++v)
        for (int c = 0; c < ix.size(); ++c) w[c] += ix.dual_basis[v][c];
    return w;
}

bool is_deep(const Intersection& ix, const QVec& apex, const QVec& x) {
    QVec rel(ix.size());
    for (int i = 0; i < ix.size(); ++i) rel[i] = x[i] - apex[i];
    return in_lipman_interior(ix, rel);
}

}  // namespace

QVec deep_offset(const Intersection& ix, const QVec& x, const Integer& step) {
    QVec apex = subcone_apex(ix);
    QVec w = dual_sum(ix);
    int n = ix.size();
    // start from the rounded-up difference, then push along the integral
    // multiple of the dual sum until strictly inside
    QVec b(n);
    for (int i = 0; i < n; ++i) {
        Rational want = apex[i] + w[i] - x[i];
        b[i] = Rational(ceil_q(want / Rational(step))) * Rational(step);
    }
    QVec bump(n);
    for (int i = 0; i < n; ++i) bump[i] = w[i] * Rational(ix.det) * Rational(step);
    for (int guard = 0; guard < 4096; ++guard) {
        QVec cand(n);
        for (int i = 0; i < n; ++i) cand[i] = x[i] + b[i];
        if (is_deep(ix, apex, cand)) return b;
        for (int i = 0; i < n; ++i) b[i] += bump[i];
    }
    throw FitError("could not reach the interior of the validity cone");
}

std::vector<QVec> deep_samples(const Intersection& ix, int count) {
    QVec apex = subcone_apex(ix);
    QVec w = dual_sum(ix);
    int n = ix.size();
    auto classes = all_classes(ix);
    std::vector<QVec> out;
    for (int k = 0; out.size() < static_cast<size_t>(count); ++k) {
        const QVec r = unit_box_rep(ix, classes[k % classes.size()]);
        int m = 1 + (k % 3);
        QVec x(n);
        for (int i = 0; i < n; ++i) {
            Rational raw = apex[i] + m * w[i];
            x[i] = r[i] + Rational(ceil_q(raw - r[i]));
        }
        // spread across directions with valid integral shifts
        int dir = k % n;
        Rational scale = Rational(ix.det) * (1 + k / n % 3);
        for (int i = 0; i < n; ++i) x[i] += scale * ix.dual_basis[dir][i];
        while (!is_deep(ix, apex, x))
            for (int i = 0; i < n; ++i) x[i] += Rational(ix.det) * w[i];
        out.push_back(x);
    }
    return out;
}

std::vector<QVec> jems_samples(const Intersection& ix, int count) {
    QVec w = dual_sum(ix);
    int n = ix.size();
    auto classes = all_classes(ix);
    auto inside = [&](const QVec& x) {
        QVec rel(n);
        for (int i = 0; i < n; ++i) rel[i] = x[i] + ix.canonical[i];
        return in_lipman_interior(ix, rel);
    };
    std::vector<QVec> out;
    for (int k = 0; out.size() < static_cast<size_t>(count); ++k) {
        const QVec r = unit_box_rep(ix, classes[k % classes.size()]);
        int m = 1 + (k % 3);
        QVec x(n);
        for (int i = 0; i < n; ++i) {
            Rational raw = -ix.canonical[i] + m * w[i];
            x[i] = r[i] + Rational(ceil_q(raw - r[i]));
        }
        int dir = k % n;
        Rational scale = Rational(ix.det) * (1 + k / n % 2);
        for (int i = 0; i < n; ++i) x[i] += scale * ix.dual_basis[dir][i];
        while (!inside(x))
            for (int i = 0; i < n; ++i) x[i] += Rational(ix.det) * w[i];
        out.push_back(x);
    }
    return out;
}

namespace {

// exact solve of a square system by Gaussian elimination
QVec solve_linear(QMat a, QVec y) {
    int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) throw FitError("fit design is rank deficient");
        std::swap(a[k], a[p]);
        std::swap(y[k], y[p]);
        for (int i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            y[i] -= f * y[k];
        }
    }
    QVec x(n);
    for (int i = 0; i < n; ++i) x[i] = y[i] / a[i][i];
    return x;
}

std::vector<std::vector<long>> design_points(int n) {
    std::vector<std::vector<long>> pts;
    pts.push_back(std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) {
        std::vector<long> e(n, 0);
        e[i] = 1;
        pts.push_back(e);
        e[i] = 2;
        pts.push_back(e);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<long> e(n, 0);
            e[i] = e[j] = 1;
            pts.push_back(e);
        }
    return pts;
}

std::vector<std::vector<long>> holdout_points(int n, int count) {
    std::vector<std::vector<long>> pts;
    for (int k = 0; static_cast<int>(pts.size()) < count; ++k) {
        std::vector<long> e(n, 0);
        e[k % n] = 3 + k / n;
        if (n > 1) e[(k + 1) % n] = 1 + k % 2;
        pts.push_back(e);
    }
    return pts;
}

constexpr double kBruteBudget = 1e6;

// Edge/vertex combination of one- and two-variable counts; equals the full
// counting function inside the validity cone, at a fraction of the cost.
// The pieces are counted on their subtree presentations, which keep only
// the subtree's own denominator factors.
struct StructureEval {
    std::vector<std::pair<std::vector<int>, series::RationalFunction>> edges;
    std::vector<std::tuple<std::vector<int>, long long, series::RationalFunction>> vertices;

    StructureEval(const series::Context& ctx) {
        const Intersection& ix = *ctx.ix;
        for (const auto& e : ix.graph.edges) {
            int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
            std::vector<int> pair{std::min(a, b), std::max(a, b)};
            edges.push_back({pair, series::simplify_to_subtree(ctx, pair)});
        }
        for (int v = 0; v < ix.size(); ++v) {
            long long c = ix.valency[v] - 1;
            if (c == 0) continue;
            std::vector<int> one{v};
            vertices.push_back({one, c, series::simplify_to_subtree(ctx, one)});
        }
    }

    long long value(const series::Context& ctx, const HClass& h, const QVec& x) const {
        long long rhs = 0;
        for (const auto& [pair, fn] : edges)
            rhs += series::counting_function(ctx, fn, pair, h, x);
        for (const auto& [one, c, fn] : vertices)
            rhs -= c * series::counting_function(ctx, fn, one, h, x);
        return rhs;
    }
};

}  // namespace

QuasiPolynomial fit_quasipolynomial(const Context& ctx, const RationalFunction& full,
                                    const HClass& h, const FitOptions& options) {
    const Intersection& ix = *ctx.ix;
    int n = ix.size();
    QVec anchor = options.anchor ? *options.anchor : unit_box_rep(ix, h);
    Integer step0 = options.step ? *options.step : 1;
    Integer cap = step0 * 8;

    std::vector<int> allvars = options.subset ? *options.subset : full.vars;
    auto design = design_points(n);
    auto holdout = holdout_points(n, std::max(options.holdout, 5));

    // One integral cone direction per vertex: det*E*_v divided by the gcd of
    // its entries. Steps along these never leave the validity cone and stay
    // inside the coset of the anchor.
    std::vector<QVec> dirs(n, QVec(n, 0));
    std::vector<Integer> dir_scale(n);  // (a * dir_v)_v, the dual-coordinate step
    for (int v = 0; v < n; ++v) {
        Integer g = 0;
        QVec col(n);
        for (int i = 0; i < n; ++i) {
            Rational e = ix.dual_basis[v][i] * Rational(ix.det);
            if (!is_integer(e)) throw FitError("dual vector is not integral at the determinant");
            col[i] = e;
            g = gcd(g, e.get_num());
        }
        for (int i = 0; i < n; ++i) dirs[v][i] = col[i] / Rational(g);
        dir_scale[v] = ix.det / g;
    }

    QVec apex = subcone_apex(ix);
    std::optional<StructureEval> structure;
    auto sample = [&](const QVec& x) -> long long {
        // route infeasible brute enumerations through the structure
        // identity; its validity cone contains every design point
        if (!options.subset &&
            series::counting_cost_estimate(ctx, full, allvars, x) > kBruteBudget &&
            is_deep(ix, apex, x)) {
            if (!structure) structure.emplace(ctx);
            return structure->value(ctx, h, x);
        }
        return series::counting_function(ctx, full, allvars, h, x);
    };

    for (Integer step = step0; step <= cap; step *= 2) {
        QVec off = deep_offset(ix, anchor, step);
        QVec base(n);
        for (int i = 0; i < n; ++i) base[i] = anchor[i] + off[i];

        auto at_point = [&](const std::vector<long>& l) {
            QVec x = base;
            for (int j = 0; j < n; ++j) {
                if (l[j] == 0) continue;
                for (int i = 0; i < n; ++i) x[i] += Rational(step) * l[j] * dirs[j][i];
            }
            return x;
        };
        // In the dual coordinates y = a*x the design is diagonal:
        // y(x) = y(base) + step * dir_scale_j * l_j. Solve in the small
        // design coordinates and substitute exactly.
        int nm = 1 + n + n * (n + 1) / 2;
        QMat a;
        QVec y;
        for (const auto& l : design) {
            QVec row;
            row.reserve(nm);
            row.push_back(1);
            for (int i = 0; i < n; ++i) row.push_back(l[i]);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) row.push_back(Rational(l[i]) * l[j]);
            a.push_back(row);
            y.push_back(q_of(sample(at_point(l))));
        }
        QVec coeffs = solve_linear(a, y);

        Rational c0 = coeffs[0];
        QVec lin(coeffs.begin() + 1, coeffs.begin() + 1 + n);
        QMat quad(n, QVec(n, 0));
        int idx = 1 + n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) quad[i][j] = coeffs[idx++];

        QVec ybase(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (base[j] != 0) ybase[i] += Rational(ix.a[i][j]) * base[j];

        QuasiPolynomial qp;
        qp.anchor = anchor;
        qp.step = step;
        qp.ix = &ix;
        qp.lin.assign(n, 0);
        qp.quad.assign(n, QVec(n, 0));
        qp.c0 = c0;
        QVec m(n);
        for (int i = 0; i < n; ++i) m[i] = Rational(step) * Rational(dir_scale[i]);
        for (int i = 0; i < n; ++i) {
            qp.c0 -= lin[i] * ybase[i] / m[i];
            qp.lin[i] += lin[i] / m[i];
        }
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (quad[i][j] == 0) continue;
                Rational q = quad[i][j] / (m[i] * m[j]);
                qp.quad[i][j] += q;
                qp.lin[i] -= q * ybase[j];
                qp.lin[j] -= q * ybase[i];
                qp.c0 += q * ybase[i] * ybase[j];
            }

        bool ok = true;
        for (const auto& l : holdout) {
            QVec x = at_point(l);
            if (qp.eval(x) != q_of(sample(x))) {
                ok = false;
                break;
            }
        }
        if (ok) return qp;
    }
    throw FitError("counting function did not verify as a quadratic on any sublattice up to the cap");
}

}  // namespace plumb::quasipoly
