#include "plumb/surgery.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>

namespace plumb::surgery {

using quasipoly::FitOptions;
using series::Context;
using series::Expo;
using series::RationalFunction;

namespace {

constexpr long long kClassCap = 200;

struct Deleted {
    PlumbingGraph graph;
    Intersection ix;
    std::unique_ptr<Context> ctx;
    RationalFunction full;
};

Deleted deleted_setup(const Context& ctx, long end_id) {
    Deleted d;
    d.graph = delete_end_vertex(ctx.ix->graph, end_id);
    d.ix = analyze(d.graph);
    d.ctx = std::make_unique<Context>(d.ix);
    d.full = series::equivariant_function(*d.ctx);
    return d;
}

void require_end(const Context& ctx, long end_id) {
    int u = ctx.ix->graph.index_of(end_id);
    if (ctx.ix->valency[u] != 1) throw SurgeryError("vertex is not an end vertex");
}

void require_small_group(const Context& ctx) {
    if (ctx.table.order > kClassCap)
        throw SurgeryError("class group larger than the configured cap (200)");
}

std::string vec_note(const Intersection& ix, const QVec& x) {
    return format_lattice_vector(ix, x);
}

// One-variable restriction of the full function at an end vertex, in the
// presentation with a Laurent prefactor and a doubled dual factor, with the
// summation kernel t/(1-t) already multiplied in.
struct OneVar {
    RationalFunction fn;  // vars = {u}
    int u;
    long long period;     // numerator units
    long long max_num;    // largest numerator exponent
};

OneVar one_var_series(const Context& ctx, long end_id) {
    const Intersection& ix = *ctx.ix;
    OneVar ov;
    ov.u = ix.graph.index_of(end_id);
    ov.fn = series::simplify_to_subtree(ctx, {ov.u});
    // multiply by t_u (numerator shift) and append the 1/(1-t_u) factor
    series::LaurentPoly shifted;
    for (const auto& [e, c] : ov.fn.numerator.terms) {
        Expo en = e;
        en[0] += ctx.den;
        shifted.terms[en] = c;
    }
    ov.fn.numerator = shifted;
    ov.fn.denominator.push_back({0, Expo{ctx.den}});
    std::sort(ov.fn.denominator.begin(), ov.fn.denominator.end());

    long long a = ctx.dual_num[ov.u][ov.u];
    ov.period = std::lcm(a * ctx.table.order, ctx.den);
    ov.max_num = 0;
    series::LaurentPoly expanded = series::expanded_numerator(ctx, ov.fn);
    for (const auto& [e, c] : expanded.terms) ov.max_num = std::max(ov.max_num, e[0]);
    return ov;
}

Rational solve_quadratic_fit(const std::vector<std::pair<Rational, Rational>>& pts,
                             const Rational& at) {
    // exact 3-point quadratic through (w_i, y_i), evaluated at `at`
    QMat a(3, QVec(3));
    QVec y(3);
    for (int i = 0; i < 3; ++i) {
        a[i][0] = 1;
        a[i][1] = pts[i].first;
        a[i][2] = pts[i].first * pts[i].first;
        y[i] = pts[i].second;
    }
    for (int k = 0; k < 3; ++k) {
        int p = k;
        while (p < 3 && a[p][k] == 0) ++p;
        if (p == 3) throw SurgeryError("degenerate one-variable fit");
        std::swap(a[k], a[p]);
        std::swap(y[k], y[p]);
        for (int i = 0; i < 3; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (int j = 0; j < 3; ++j) a[i][j] -= f * a[k][j];
            y[i] -= f * y[k];
        }
    }
    QVec c(3);
    for (int i = 0; i < 3; ++i) c[i] = y[i] / a[i][i];
    return c[0] + c[1] * at + c[2] * at * at;
}

}  // namespace

bool SurgeryReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

Rational one_var_correction(const Context& ctx, long end_id, const HClass& h, const Rational& w) {
    require_end(ctx, end_id);
    OneVar ov = one_var_series(ctx, end_id);
    long long hidx = ctx.table.encode(h);
    long long wnum = ctx.to_num(w);
    long long j0 = 0;
    if (wnum <= ov.max_num) j0 = (ov.max_num - wnum) / ov.period + 1;
    auto coeff = [&](long long j) {
        QVec x(ctx.ix->size(), 0);
        x[ov.u] = q_of(wnum + (j0 + j) * ov.period) / q_of(ctx.den);
        return q_of(series::coefficient_at(ctx, ov.fn, {ov.u}, x).at(hidx));
    };
    std::vector<std::pair<Rational, Rational>> pts;
    for (long long j = 0; j < 3; ++j) pts.push_back({q_of(j0 + j), coeff(j)});
    for (long long j = 3; j < 8; ++j)
        if (solve_quadratic_fit(pts, q_of(j0 + j)) != coeff(j))
            throw SurgeryError("one-variable correction is not quadratic on the progression");
    return solve_quadratic_fit(pts, Rational(0));
}

std::vector<QVec> recursion_samples(const Context& ctx, long end_id, const HClass& h, int count) {
    const Intersection& ix = *ctx.ix;
    require_end(ctx, end_id);
    QVec r = unit_box_rep(ix, h);
    QVec off = quasipoly::deep_offset(ix, r);
    QVec x0(ix.size());
    for (int i = 0; i < ix.size(); ++i) x0[i] = r[i] + off[i];
    std::vector<QVec> out;
    for (int k = 0; k < count; ++k) {
        QVec x = x0;
        int dir = k % ix.size();
        Rational scale = Rational(ix.det) * (1 + k / ix.size());
        for (int i = 0; i < ix.size(); ++i) x[i] += scale * ix.dual_basis[dir][i];
        out.push_back(x);
    }
    return out;
}

SurgeryReport check_quasipoly_recursion(const Context& ctx, long end_id, int samples_per_class) {
    const Intersection& ix = *ctx.ix;
    require_end(ctx, end_id);
    require_small_group(ctx);
    Deleted del = deleted_setup(ctx, end_id);
    int u = ix.graph.index_of(end_id);
    int n = ix.size();
    RationalFunction full = series::equivariant_function(ctx);
    OneVar ov = one_var_series(ctx, end_id);
    long long dbar = del.ctx->den;

    SurgeryReport rep;
    rep.vertex_id = end_id;
    for (const HClass& h : all_classes(ix)) {
        QVec r = unit_box_rep(ix, h);
        QVec off = quasipoly::deep_offset(ix, r);
        QVec x0(n);
        for (int i = 0; i < n; ++i) x0[i] = r[i] + off[i];
        QVec px0 = project_off_end(ix, del.ix, end_id, x0);
        HClass hbar = class_of(del.ix, px0);

        auto fit_t = quasipoly::fit_quasipolynomial(ctx, full, h, {.anchor = x0});
        auto fit_u = quasipoly::fit_quasipolynomial(*del.ctx, del.full, hbar, {.anchor = px0});
        Integer mm = lcm(fit_t.step, fit_u.step);

        for (int k = 0; k < samples_per_class; ++k) {
            // shift inside the deleted graph plus a step along the end direction
            QVec x = x0;
            int dir_raw = k % n;
            int dir = dir_raw == u ? (u + 1) % n : dir_raw;
            long long jstep = k % 3;
            if (n > 1) x[dir] += Rational(mm) * (1 + k / n);
            x[u] += Rational(mm) * q_of(jstep * dbar);
            QVec px = project_off_end(ix, del.ix, end_id, x);

            Rational lhs = fit_t.eval(x);
            Rational rhs1 = fit_u.eval(px);
            Rational rhs2;
            {
                long long hidx = ctx.table.encode(h);
                long long wnum = ctx.to_num(x[u]);
                long long j0 = 0;
                if (wnum <= ov.max_num) j0 = (ov.max_num - wnum) / ov.period + 1;
                auto coeff = [&](long long j) {
                    QVec y(n, 0);
                    y[ov.u] = q_of(wnum + (j0 + j) * ov.period) / q_of(ctx.den);
                    return q_of(series::coefficient_at(ctx, ov.fn, {ov.u}, y).at(hidx));
                };
                std::vector<std::pair<Rational, Rational>> pts;
                for (long long j = 0; j < 3; ++j) pts.push_back({q_of(j0 + j), coeff(j)});
                for (long long j = 3; j < 8; ++j)
                    if (solve_quadratic_fit(pts, q_of(j0 + j)) != coeff(j))
                        throw SurgeryError("one-variable correction is not quadratic");
                rhs2 = solve_quadratic_fit(pts, Rational(0));
            }
            Row row;
            row.cls = h;
            row.identity = "counting quasipolynomial recursion";
            row.lhs = lhs;
            row.rhs = rhs1 + rhs2;
            row.pass = row.lhs == row.rhs;
            row.note = vec_note(ix, x);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

SurgeryReport check_quasipoly_recursion(const Context& ctx, long end_id,
                                        const std::vector<QVec>& samples) {
    const Intersection& ix = *ctx.ix;
    require_end(ctx, end_id);
    require_small_group(ctx);
    Deleted del = deleted_setup(ctx, end_id);
    int u = ix.graph.index_of(end_id);
    RationalFunction full = series::equivariant_function(ctx);

    SurgeryReport rep;
    rep.vertex_id = end_id;
    for (const QVec& x : samples) {
        HClass h = class_of(ix, x);
        QVec px = project_off_end(ix, del.ix, end_id, x);
        HClass hbar = class_of(del.ix, px);
        auto fit_t = quasipoly::fit_quasipolynomial(ctx, full, h, {.anchor = x});
        auto fit_u = quasipoly::fit_quasipolynomial(*del.ctx, del.full, hbar, {.anchor = px});
        Rational lhs = fit_t.eval(x);
        Rational rhs = fit_u.eval(px) + one_var_correction(ctx, end_id, h, x[u]);
        Row row{h, "counting quasipolynomial recursion", lhs, rhs, lhs == rhs, vec_note(ix, x)};
        rep.rows.push_back(row);
    }
    return rep;
}

SurgeryReport check_sw_surgery(const Context& ctx, long end_id) {
    const Intersection& ix = *ctx.ix;
    require_end(ctx, end_id);
    require_small_group(ctx);
    Deleted del = deleted_setup(ctx, end_id);
    int u = ix.graph.index_of(end_id);
    int n = ix.size();
    RationalFunction full = series::equivariant_function(ctx);

    SurgeryReport rep;
    rep.vertex_id = end_id;
    for (const HClass& h : all_classes(ix)) {
        QVec r = unit_box_rep(ix, h);
        QVec kr(n);
        for (int i = 0; i < n; ++i) kr[i] = ix.canonical[i] + 2 * r[i];
        Rational lhs = polypart::seiberg_witten(ctx, full, h) +
                       (intersection_pairing(ix, kr, kr) + n) / 8;

        QVec rp = project_off_end(ix, del.ix, end_id, r);
        HClass hbar = class_of(del.ix, rp);
        int nn = del.ix.size();
        QVec kru(nn);
        for (int i = 0; i < nn; ++i) kru[i] = del.ix.canonical[i] + 2 * rp[i];
        Rational swu = polypart::seiberg_witten(*del.ctx, del.full, hbar);
        Rational mid = (intersection_pairing(del.ix, kru, kru) + nn) / 8;

        RationalFunction one = series::reduce_to(ctx, full, {u}, false);
        auto dec = polypart::poly_part_one_var(ctx, one, u);
        Rational pcu = q_of(series::lp_eval_one(dec.poly_part).at(ctx.table.encode(h)));

        Row row;
        row.cls = h;
        row.identity = "sw surgery formula";
        row.lhs = lhs;
        row.rhs = swu + mid - pcu;
        row.pass = row.lhs == row.rhs;
        rep.rows.push_back(row);
    }
    return rep;
}

SurgeryReport check_pc_recursion_min_rep(const Context& ctx, long end_id) {
    const Intersection& ix = *ctx.ix;
    require_end(ctx, end_id);
    require_small_group(ctx);
    Deleted del = deleted_setup(ctx, end_id);
    int u = ix.graph.index_of(end_id);
    RationalFunction full = series::equivariant_function(ctx);

    SurgeryReport rep;
    rep.vertex_id = end_id;
    for (const HClass& h : all_classes(ix)) {
        QVec s = min_cone_rep(ix, h);
        QVec ps = project_off_end(ix, del.ix, end_id, s);
        HClass hbar = class_of(del.ix, ps);

        {
            QVec smin = min_cone_rep(del.ix, hbar);
            Row row;
            row.cls = h;
            row.identity = "minimal representative projects to minimal representative";
            row.lhs = 0;
            row.rhs = 0;
            row.pass = smin == ps;
            row.note = vec_note(del.ix, ps);
            rep.rows.push_back(row);
        }

        auto fit_t = quasipoly::fit_quasipolynomial(ctx, full, h, {.anchor = s});
        auto fit_u = quasipoly::fit_quasipolynomial(*del.ctx, del.full, hbar, {.anchor = ps});
        Rational lhs = fit_t.eval(s);
        Rational rhs = fit_u.eval(ps) + one_var_correction(ctx, end_id, h, s[u]);
        Row row;
        row.cls = h;
        row.identity = "pc recursion at minimal representatives";
        row.lhs = lhs;
        row.rhs = rhs;
        row.pass = lhs == rhs;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace plumb::surgery
