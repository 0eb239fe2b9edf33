#include "plumb/polypart.hpp"

#include <algorithm>
#include <numeric>

#include "plumb/graph.hpp"

namespace plumb::polypart {

using series::Context;
using series::Expo;
using series::Factor;
using series::GroupRing;
using series::LaurentPoly;
using series::RationalFunction;

namespace {

LaurentPoly lp_scale(const LaurentPoly& p, long long k) {
    LaurentPoly out;
    if (k == 0) return out;
    for (const auto& [e, c] : p.terms) {
        GroupRing g;
        for (const auto& [cls, v] : c.t) g.t[cls] = v * k;
        out.terms[e] = g;
    }
    return out;
}

struct ProductInfo {
    LaurentPoly expanded;
    Expo lead_exp;       // sum of the factor exponents
    long long lead_cls;  // sum of the factor classes
    int sign;            // (-1)^(number of factors)
};

ProductInfo expand_product(const Context& ctx, const std::vector<Factor>& factors, int nvars) {
    ProductInfo info;
    info.expanded = series::lp_one(nvars);
    info.lead_exp.assign(nvars, 0);
    info.lead_cls = 0;
    info.sign = factors.size() % 2 == 0 ? 1 : -1;
    for (const auto& fac : factors) {
        LaurentPoly bin = series::lp_one(nvars);
        series::lp_add_term(bin, fac.exp, fac.cls, -1);
        info.expanded = series::lp_mul(info.expanded, bin, ctx.table);
        for (int i = 0; i < nvars; ++i) info.lead_exp[i] += fac.exp[i];
        info.lead_cls = ctx.table.add(info.lead_cls, fac.cls);
    }
    return info;
}

// R -= q * product, where q = (exp, coeffs); returns q for accumulation.
void reduce_by(const Context& ctx, LaurentPoly& r, LaurentPoly& quotient, const Expo& qexp,
               const GroupRing& qc, const ProductInfo& prod) {
    series::lp_add_term(quotient, qexp, qc);
    for (const auto& [ed, cd] : prod.expanded.terms) {
        Expo en(qexp.size());
        for (size_t i = 0; i < en.size(); ++i) en[i] = qexp[i] + ed[i];
        series::lp_add_term(r, en, qc.times(cd, ctx.table).negated());
    }
}

// Quotient term cancelling `term` against the leading monomial of prod.
std::pair<Expo, GroupRing> quotient_term(const Context& ctx, const Expo& exp, const GroupRing& c,
                                         const ProductInfo& prod) {
    Expo qexp(exp.size());
    for (size_t i = 0; i < exp.size(); ++i) qexp[i] = exp[i] - prod.lead_exp[i];
    long long negcls = ctx.table.neg(prod.lead_cls);
    GroupRing qc;
    for (const auto& [cls, v] : c.t) qc.add(ctx.table.add(cls, negcls), -prod.sign * v);
    return {qexp, qc};
}

LaurentPoly reassemble_check_1v(const Context& ctx, const LaurentPoly& p, const ProductInfo& den,
                                const LaurentPoly& rem) {
    LaurentPoly t = series::lp_mul(p, den.expanded, ctx.table);
    return series::lp_add(t, rem);
}

}  // namespace

Decomposition1V poly_part_one_var(const Context& ctx, const RationalFunction& f, int v) {
    auto pos_list = ctx.positions(f.vars, {v});
    int p = pos_list[0];
    int nv = static_cast<int>(f.vars.size());

    for (const auto& fac : f.denominator)
        if (fac.exp[p] <= 0)
            throw PolypartError("one-variable part needs positive degree in every factor");
    LaurentPoly num = series::expanded_numerator(ctx, f);
    for (const auto& [e, c] : num.terms)
        if (e[p] < 0) throw PolypartError("one-variable part needs nonnegative numerator support");

    ProductInfo den = expand_product(ctx, f.denominator, nv);
    long long top = den.lead_exp[p];

    Decomposition1V out;
    out.var = v;
    out.denominator = f.denominator;
    LaurentPoly r = num;
    for (;;) {
        // highest division-variable degree still reducible
        const Expo* best = nullptr;
        const GroupRing* bestc = nullptr;
        for (const auto& [e, c] : r.terms)
            if (e[p] >= top && (!best || e[p] > (*best)[p] || (e[p] == (*best)[p] && e > *best))) {
                best = &e;
                bestc = &c;
            }
        if (!best) break;
        auto [qe, qc] = quotient_term(ctx, *best, *bestc, den);
        reduce_by(ctx, r, out.poly_part, qe, qc, den);
    }
    out.remainder = r;

    for (const auto& [e, c] : out.poly_part.terms)
        if (e[p] < 0) throw PolypartError("internal: polynomial part left the support cone");
    for (const auto& [e, c] : out.remainder.terms)
        if (e[p] < 0 || e[p] >= top)
            throw PolypartError("internal: remainder left the box support");
    if (!(reassemble_check_1v(ctx, out.poly_part, den, out.remainder) == num))
        throw PolypartError("internal: one-variable decomposition does not reassemble");
    return out;
}

namespace {

struct Plane {
    int p, q;              // positions of the two variables
    Expo alpha, beta;      // primitive ray vectors, (p,q) components
    long long det2;        // alpha_p beta_q - alpha_q beta_p > 0
    long long s_total;     // box size along alpha in primitive units
    long long r_total;     // along beta

    // arguments are two-component plane vectors
    long long s_num(const Expo& e2) const { return e2[0] * beta[1] - e2[1] * beta[0]; }
    long long r_num(const Expo& e2) const { return alpha[0] * e2[1] - alpha[1] * e2[0]; }
    bool s_high(const Expo& e2) const { return s_num(e2) >= s_total * det2; }
    bool r_high(const Expo& e2) const { return r_num(e2) >= r_total * det2; }
};

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

Decomposition2V poly_part_two_var(const Context& ctx, const RationalFunction& f, int v, int w) {
    auto pos = ctx.positions(f.vars, {std::min(v, w), std::max(v, w)});
    int p = v < w ? pos[0] : pos[1];
    int q = v < w ? pos[1] : pos[0];
    int nv = static_cast<int>(f.vars.size());
    if (f.denominator.empty()) {
        Decomposition2V out;
        out.var_v = v;
        out.var_w = w;
        out.main = series::expanded_numerator(ctx, f);
        return out;
    }

    // group the factors by primitive projected direction
    std::vector<std::pair<Expo, long long>> rays;  // primitive (p,q) vector, multiplier sum
    std::vector<int> ray_of(f.denominator.size());
    for (size_t i = 0; i < f.denominator.size(); ++i) {
        const auto& fac = f.denominator[i];
        long long ep = fac.exp[p], eq = fac.exp[q];
        if (ep <= 0 || eq <= 0)
            throw PolypartError("factor ray leaves the open positive quadrant");
        long long g = gcd_ll(ep, eq);
        Expo prim{ep / g, eq / g};
        int found = -1;
        for (size_t rix = 0; rix < rays.size(); ++rix)
            if (rays[rix].first == prim) found = static_cast<int>(rix);
        if (found < 0) {
            rays.push_back({prim, 0});
            found = static_cast<int>(rays.size()) - 1;
        }
        rays[found].second += g;
        ray_of[i] = found;
    }
    if (rays.size() != 2)
        throw PolypartError("denominator factors must project onto exactly two rays");

    // alpha is the ray closer to the first variable axis
    int ai = 0, bi = 1;
    // slope comparison e_q/e_p: alpha has the smaller slope
    if (rays[0].first[1] * rays[1].first[0] > rays[1].first[1] * rays[0].first[0]) std::swap(ai, bi);
    Plane pl;
    pl.p = p;
    pl.q = q;
    pl.alpha = rays[ai].first;
    pl.beta = rays[bi].first;
    pl.det2 = pl.alpha[0] * pl.beta[1] - pl.alpha[1] * pl.beta[0];
    pl.s_total = rays[ai].second;
    pl.r_total = rays[bi].second;
    if (pl.det2 <= 0) throw PolypartError("internal: ray orientation");

    Decomposition2V out;
    out.var_v = v;
    out.var_w = w;
    std::vector<Factor> afam, bfam;
    for (size_t i = 0; i < f.denominator.size(); ++i)
        (ray_of[i] == ai ? afam : bfam).push_back(f.denominator[i]);
    out.alpha_family = afam;
    out.beta_family = bfam;

    LaurentPoly num = series::expanded_numerator(ctx, f);
    auto plane_of = [&](const Expo& e) {
        Expo r{e[p], e[q]};
        return r;
    };
    for (const auto& [e, c] : num.terms) {
        Expo e2 = plane_of(e);
        if (pl.s_num(e2) < 0 || pl.r_num(e2) < 0)
            throw PolypartError("numerator leaves the cone of the two rays");
    }

    ProductInfo full = expand_product(ctx, f.denominator, nv);
    ProductInfo aprod = expand_product(ctx, afam, nv);
    ProductInfo bprod = expand_product(ctx, bfam, nv);

    LaurentPoly r1 = num, rho1, rho2, rho3;
    // both-high region: reduce by the whole denominator
    for (;;) {
        const Expo* best = nullptr;
        const GroupRing* bestc = nullptr;
        for (const auto& [e, c] : r1.terms) {
            Expo e2 = plane_of(e);
            if (pl.s_high(e2) && pl.r_high(e2) && (!best || e > *best)) {
                best = &e;
                bestc = &c;
            }
        }
        if (!best) break;
        auto [qe, qc] = quotient_term(ctx, *best, *bestc, full);
        reduce_by(ctx, r1, rho1, qe, qc, full);
    }
    // alpha-high strip: reduce by the alpha family
    for (;;) {
        const Expo* best = nullptr;
        const GroupRing* bestc = nullptr;
        for (const auto& [e, c] : r1.terms) {
            Expo e2 = plane_of(e);
            if (pl.s_high(e2) && (!best || e > *best)) {
                best = &e;
                bestc = &c;
            }
        }
        if (!best) break;
        auto [qe, qc] = quotient_term(ctx, *best, *bestc, aprod);
        reduce_by(ctx, r1, rho2, qe, qc, aprod);
    }
    // beta-high strip
    for (;;) {
        const Expo* best = nullptr;
        const GroupRing* bestc = nullptr;
        for (const auto& [e, c] : r1.terms) {
            Expo e2 = plane_of(e);
            if (pl.r_high(e2) && (!best || e > *best)) {
                best = &e;
                bestc = &c;
            }
        }
        if (!best) break;
        auto [qe, qc] = quotient_term(ctx, *best, *bestc, bprod);
        reduce_by(ctx, r1, rho3, qe, qc, bprod);
    }
    out.third = r1;

    // divide the alpha strip by the beta family, division variable t_v
    LaurentPoly rho2p;
    {
        long long cut = pl.r_total * pl.beta[0];  // compare e_p against r_total*beta_p
        for (;;) {
            const Expo* best = nullptr;
            const GroupRing* bestc = nullptr;
            for (const auto& [e, c] : rho2.terms)
                if (e[p] >= cut && (!best || e[p] > (*best)[p] || (e[p] == (*best)[p] && e > *best))) {
                    best = &e;
                    bestc = &c;
                }
            if (!best) break;
            auto [qe, qc] = quotient_term(ctx, *best, *bestc, bprod);
            reduce_by(ctx, rho2, rho2p, qe, qc, bprod);
        }
        out.second = rho2;
    }
    // divide the beta strip by the alpha family, division variable t_w
    LaurentPoly rho3p;
    {
        long long cut = pl.s_total * pl.alpha[1];  // compare e_q against s_total*alpha_q
        for (;;) {
            const Expo* best = nullptr;
            const GroupRing* bestc = nullptr;
            for (const auto& [e, c] : rho3.terms)
                if (e[q] >= cut && (!best || e[q] > (*best)[q] || (e[q] == (*best)[q] && e > *best))) {
                    best = &e;
                    bestc = &c;
                }
            if (!best) break;
            auto [qe, qc] = quotient_term(ctx, *best, *bestc, aprod);
            reduce_by(ctx, rho3, rho3p, qe, qc, aprod);
        }
        out.first = rho3;
    }
    out.main = series::lp_add(rho1, series::lp_add(rho2p, rho3p));

    // support conditions, checked on every call
    for (const auto& [e, c] : out.main.terms)
        if (e[p] < 0 && e[q] < 0)
            throw PolypartError("internal: polynomial part inside the negative quadrant");
    for (const auto& [e, c] : out.first.terms) {
        long long sprim = e[q];  // s' * alpha_q
        if (sprim < 0 || sprim >= pl.s_total * pl.alpha[1] ||
            e[p] * pl.alpha[1] - pl.alpha[0] * e[q] > 0)
            throw PolypartError("internal: first remainder support");
    }
    for (const auto& [e, c] : out.second.terms) {
        long long rprim = e[p];  // r' * beta_p
        if (rprim < 0 || rprim >= pl.r_total * pl.beta[0] ||
            e[q] * pl.beta[0] - pl.beta[1] * e[p] > 0)
            throw PolypartError("internal: second remainder support");
    }
    for (const auto& [e, c] : out.third.terms) {
        Expo e2 = plane_of(e);
        if (pl.s_num(e2) < 0 || pl.s_high(e2) || pl.r_num(e2) < 0 || pl.r_high(e2))
            throw PolypartError("internal: third remainder support");
    }
    LaurentPoly back = series::lp_mul(out.main, full.expanded, ctx.table);
    back = series::lp_add(back, series::lp_mul(out.first, bprod.expanded, ctx.table));
    back = series::lp_add(back, series::lp_mul(out.second, aprod.expanded, ctx.table));
    back = series::lp_add(back, out.third);
    if (!(back == num)) throw PolypartError("internal: two-variable decomposition does not reassemble");
    return out;
}

series::RationalFunction reduced_class_function(const Context& ctx, const RationalFunction& full,
                                                const HClass& h) {
    const Intersection& ix = *ctx.ix;
    if (ix.nodes.empty()) throw PolypartError("graph has no nodes");
    RationalFunction red = series::reduce_to(ctx, full, ix.nodes, true);
    return series::class_part(ctx, red, h);
}

series::LaurentPoly multivariable_poly_part(const Context& ctx, const RationalFunction& full,
                                            const HClass& h) {
    const Intersection& ix = *ctx.ix;
    RationalFunction fh = reduced_class_function(ctx, full, h);
    OrbifoldGraph orb = orbifold_graph(ix.graph);
    LaurentPoly p;
    for (const auto& e : orb.edges) {
        int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
        auto dec = poly_part_two_var(ctx, fh, std::min(a, b), std::max(a, b));
        p = series::lp_add(p, dec.main);
    }
    for (long id : orb.vertices) {
        long long c = orb.valency.at(id) - 1;
        if (c == 0) continue;
        auto dec = poly_part_one_var(ctx, fh, ix.graph.index_of(id));
        p = series::lp_sub(p, lp_scale(dec.poly_part, c));
    }
    return p;
}

Rational periodic_constant(const Context& ctx, const RationalFunction& full, const HClass& h,
                           PcMode mode) {
    const Intersection& ix = *ctx.ix;
    long long hidx = ctx.table.encode(h);
    switch (mode) {
        case PcMode::PolyPart: {
            if (ix.nodes.empty())
                throw PolypartError("polynomial-part mode needs at least one node");
            LaurentPoly p = multivariable_poly_part(ctx, full, h);
            return q_of(series::lp_eval_one(p).at(hidx));
        }
        case PcMode::Fit: {
            auto fitted = quasipoly::fit_quasipolynomial(ctx, full, h);
            return fitted.eval(unit_box_rep(ix, h));
        }
        case PcMode::Structure: {
            Rational pc = 0;
            for (const auto& e : ix.graph.edges) {
                int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
                std::vector<int> I{std::min(a, b), std::max(a, b)};
                RationalFunction g = series::reduce_to(ctx, full, I, false);
                auto dec = poly_part_two_var(ctx, g, I[0], I[1]);
                pc += q_of(series::lp_eval_one(dec.main).at(hidx));
            }
            for (int v = 0; v < ix.size(); ++v) {
                long long c = ix.valency[v] - 1;
                if (c == 0) continue;
                RationalFunction g = series::reduce_to(ctx, full, {v}, false);
                auto dec = poly_part_one_var(ctx, g, v);
                pc -= q_of(c) * q_of(series::lp_eval_one(dec.poly_part).at(hidx));
            }
            return pc;
        }
    }
    throw PolypartError("unknown periodic constant mode");
}

Rational seiberg_witten(const Context& ctx, const RationalFunction& full, const HClass& h) {
    const Intersection& ix = *ctx.ix;
    Rational pc = periodic_constant(ctx, full, h,
                                    ix.nodes.empty() ? PcMode::Structure : PcMode::PolyPart);
    QVec r = unit_box_rep(ix, h);
    QVec kr(ix.size());
    for (int i = 0; i < ix.size(); ++i) kr[i] = ix.canonical[i] + 2 * r[i];
    Rational square = intersection_pairing(ix, kr, kr);
    return -pc - (square + ix.size()) / 8;
}

}  // namespace plumb::polypart
