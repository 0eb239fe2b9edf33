#include "plumb/series.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace plumb::series {

namespace {
constexpr long long kMaxGroupOrder = 1LL << 40;
constexpr size_t kMaxExpandedTerms = 1u << 22;
constexpr int kMaxAlternatingVertices = 20;
}  // namespace

ClassTable::ClassTable(const Intersection& ix) {
    for (const auto& f : ix.smith.factors) {
        if (!f.fits_slong_p()) throw SeriesError("invariant factor too large");
        factors.push_back(f.get_si());
    }
    strides.assign(factors.size(), 1);
    for (size_t i = 0; i < factors.size(); ++i) {
        strides[i] = order;
        order *= factors[i];
        if (order > kMaxGroupOrder) throw SeriesError("group order too large");
    }
}

long long ClassTable::add(long long a, long long b) const {
    long long r = 0;
    for (size_t i = 0; i < factors.size(); ++i) {
        long long ai = (a / strides[i]) % factors[i];
        long long bi = (b / strides[i]) % factors[i];
        r += ((ai + bi) % factors[i]) * strides[i];
    }
    return r;
}

long long ClassTable::neg(long long a) const {
    long long r = 0;
    for (size_t i = 0; i < factors.size(); ++i) {
        long long ai = (a / strides[i]) % factors[i];
        r += ((factors[i] - ai) % factors[i]) * strides[i];
    }
    return r;
}

long long ClassTable::mul(long long a, long long k) const {
    long long r = 0;
    for (size_t i = 0; i < factors.size(); ++i) {
        long long ai = (a / strides[i]) % factors[i];
        long long ki = ((ai * (k % factors[i])) % factors[i] + factors[i]) % factors[i];
        r += ki * strides[i];
    }
    return r;
}

long long ClassTable::encode(const HClass& h) const {
    if (h.c.size() != factors.size()) throw SeriesError("class has wrong shape");
    long long r = 0;
    for (size_t i = 0; i < factors.size(); ++i) r += h.c[i].get_si() * strides[i];
    return r;
}

HClass ClassTable::decode(long long idx) const {
    HClass h;
    for (size_t i = 0; i < factors.size(); ++i)
        h.c.push_back(z_of((idx / strides[i]) % factors[i]));
    return h;
}

GroupRing GroupRing::unit(long long cls, long long c) {
    GroupRing g;
    if (c != 0) g.t[cls] = c;
    return g;
}

long long GroupRing::at(long long cls) const {
    auto it = t.find(cls);
    return it == t.end() ? 0 : it->second;
}

void GroupRing::add(long long cls, long long c) {
    if (c == 0) return;
    auto it = t.find(cls);
    if (it == t.end()) {
        t[cls] = c;
    } else {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
}

GroupRing& GroupRing::operator+=(const GroupRing& o) {
    for (const auto& [cls, c] : o.t) add(cls, c);
    return *this;
}

GroupRing& GroupRing::operator-=(const GroupRing& o) {
    for (const auto& [cls, c] : o.t) add(cls, -c);
    return *this;
}

GroupRing GroupRing::negated() const {
    GroupRing g;
    for (const auto& [cls, c] : t) g.t[cls] = -c;
    return g;
}

GroupRing GroupRing::shifted(long long cls, const ClassTable& tbl) const {
    GroupRing g;
    for (const auto& [c0, c] : t) g.t[tbl.add(c0, cls)] = c;
    return g;
}

GroupRing GroupRing::times(const GroupRing& o, const ClassTable& tbl) const {
    GroupRing g;
    for (const auto& [c1, a] : t)
        for (const auto& [c2, b] : o.t) g.add(tbl.add(c1, c2), a * b);
    return g;
}

LaurentPoly lp_one(int nvars) {
    LaurentPoly p;
    p.terms[Expo(nvars, 0)] = GroupRing::unit(0);
    return p;
}

LaurentPoly lp_monomial(const Expo& e, long long cls, long long coeff) {
    LaurentPoly p;
    if (coeff != 0) p.terms[e] = GroupRing::unit(cls, coeff);
    return p;
}

void lp_add_term(LaurentPoly& p, const Expo& e, long long cls, long long coeff) {
    if (coeff == 0) return;
    auto& g = p.terms[e];
    g.add(cls, coeff);
    if (g.zero()) p.terms.erase(e);
}

void lp_add_term(LaurentPoly& p, const Expo& e, const GroupRing& c) {
    if (c.zero()) return;
    auto& g = p.terms[e];
    g += c;
    if (g.zero()) p.terms.erase(e);
}

LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p = a;
    for (const auto& [e, c] : b.terms) lp_add_term(p, e, c);
    return p;
}

LaurentPoly lp_sub(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p = a;
    for (const auto& [e, c] : b.terms) lp_add_term(p, e, c.negated());
    return p;
}

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b, const ClassTable& tbl) {
    LaurentPoly p;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Expo e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            lp_add_term(p, e, ca.times(cb, tbl));
            if (p.terms.size() > kMaxExpandedTerms) throw SeriesError("polynomial too large");
        }
    return p;
}

LaurentPoly lp_mul_term(const LaurentPoly& a, const Expo& e, long long cls, long long coeff,
                        const ClassTable& tbl) {
    LaurentPoly p;
    for (const auto& [ea, ca] : a.terms) {
        Expo en(ea.size());
        for (size_t i = 0; i < en.size(); ++i) en[i] = ea[i] + e[i];
        GroupRing g;
        for (const auto& [c0, c] : ca.t) g.add(tbl.add(c0, cls), c * coeff);
        lp_add_term(p, en, g);
    }
    return p;
}

LaurentPoly lp_project(const LaurentPoly& a, const std::vector<int>& positions) {
    LaurentPoly p;
    for (const auto& [e, c] : a.terms) {
        Expo en;
        en.reserve(positions.size());
        for (int q : positions) en.push_back(e[q]);
        lp_add_term(p, en, c);
    }
    return p;
}

GroupRing lp_eval_one(const LaurentPoly& a) {
    GroupRing g;
    for (const auto& [e, c] : a.terms) g += c;
    return g;
}

Context::Context(const Intersection& ixr) : ix(&ixr), table(ixr) {
    if (!ixr.det.fits_slong_p()) throw SeriesError("determinant too large");
    den = ixr.det.get_si();
    int n = ixr.size();
    for (int v = 0; v < n; ++v) {
        Expo e(n);
        for (int w = 0; w < n; ++w) {
            Rational q = ixr.dual_basis[v][w] * q_of(den);
            if (!is_integer(q)) throw SeriesError("dual basis denominator does not divide det");
            if (!q.get_num().fits_slong_p()) throw SeriesError("exponent numerator too large");
            e[w] = q.get_num().get_si();
        }
        dual_num.push_back(e);
        dual_cls.push_back(table.encode(class_of(ixr, ixr.dual_basis[v])));
    }
}

long long Context::to_num(const Rational& q) const {
    Rational s = q * q_of(den);
    if (!is_integer(s)) throw SeriesError("coordinate is not in the exponent lattice");
    if (!s.get_num().fits_slong_p()) throw SeriesError("exponent numerator too large");
    return s.get_num().get_si();
}

Expo Context::to_expo(const QVec& x) const {
    Expo e;
    e.reserve(x.size());
    for (const auto& q : x) e.push_back(to_num(q));
    return e;
}

Expo Context::to_expo(const QVec& x, const std::vector<int>& vars) const {
    Expo e;
    e.reserve(vars.size());
    for (int v : vars) e.push_back(to_num(x[v]));
    return e;
}

std::vector<int> Context::positions(const std::vector<int>& vars,
                                    const std::vector<int>& subset) const {
    std::vector<int> pos;
    for (int s : subset) {
        auto it = std::lower_bound(vars.begin(), vars.end(), s);
        if (it == vars.end() || *it != s) throw SeriesError("subset is not among active variables");
        pos.push_back(static_cast<int>(it - vars.begin()));
    }
    return pos;
}

RationalFunction equivariant_function(const Context& ctx) {
    const Intersection& ix = *ctx.ix;
    int n = ix.size();
    RationalFunction f;
    f.vars.resize(n);
    for (int i = 0; i < n; ++i) f.vars[i] = i;
    f.numerator = lp_one(n);
    for (int v = 0; v < n; ++v) {
        int d = ix.valency[v];
        Factor fac{ctx.dual_cls[v], ctx.dual_num[v]};
        if (d >= 3)
            for (int k = 0; k < d - 2; ++k) f.numerator_factors.push_back(fac);
        else if (d == 1)
            f.denominator.push_back(fac);
        else if (d == 0) {
            f.denominator.push_back(fac);
            f.denominator.push_back(fac);
        }
    }
    std::sort(f.numerator_factors.begin(), f.numerator_factors.end());
    std::sort(f.denominator.begin(), f.denominator.end());
    f.canonical_full = true;
    return f;
}

LaurentPoly expanded_numerator(const Context& ctx, const RationalFunction& f) {
    LaurentPoly p = f.numerator;
    int nv = static_cast<int>(f.vars.size());
    for (const auto& fac : f.numerator_factors) {
        LaurentPoly bin = lp_one(nv);
        lp_add_term(bin, fac.exp, fac.cls, -1);
        p = lp_mul(p, bin, ctx.table);
    }
    return p;
}

namespace {

long long grade(const Expo& e) {
    long long s = 0;
    for (long long x : e) s += x;
    return s;
}

// Exact division num / prod(1 - h t^alpha) for factors with entrywise
// positive exponents. Works upward from the lowest total degree; the
// divisor's lowest term is the unit 1.
LaurentPoly divide_exact(const Context& ctx, const LaurentPoly& num,
                         const std::vector<Factor>& factors) {
    if (factors.empty()) return num;
    int nv = num.zero() ? 0 : static_cast<int>(num.terms.begin()->first.size());
    LaurentPoly d = lp_one(nv);
    for (const auto& fac : factors) {
        LaurentPoly bin = lp_one(nv);
        lp_add_term(bin, fac.exp, fac.cls, -1);
        d = lp_mul(d, bin, ctx.table);
    }
    long long top = 0;
    for (const auto& fac : factors) {
        long long g = grade(fac.exp);
        if (g <= 0) throw SeriesError("division needs positively graded factors");
        top += g;
    }
    long long gmax = 0;
    for (const auto& [e, c] : num.terms) gmax = std::max(gmax, grade(e));

    LaurentPoly q;
    LaurentPoly r = num;
    while (!r.zero()) {
        // lowest total degree, lexicographic tie-break
        auto best = r.terms.begin();
        long long bg = grade(best->first);
        for (auto it = std::next(r.terms.begin()); it != r.terms.end(); ++it) {
            long long g = grade(it->first);
            if (g < bg) {
                best = it;
                bg = g;
            }
        }
        if (bg + top > gmax) throw SeriesError("prefactor division is not exact");
        Expo e = best->first;
        GroupRing c = best->second;
        lp_add_term(q, e, c);
        for (const auto& [ed, cd] : d.terms) {
            Expo en(e.size());
            for (size_t i = 0; i < en.size(); ++i) en[i] = e[i] + ed[i];
            lp_add_term(r, en, c.times(cd, ctx.table).negated());
        }
    }
    return q;
}

}  // namespace

RationalFunction simplify_to_subtree(const Context& ctx, const std::vector<int>& J) {
    const Intersection& ix = *ctx.ix;
    std::vector<int> j(J);
    std::sort(j.begin(), j.end());
    if (!induces_subtree(ix.graph, j)) throw SeriesError("subset does not induce a subtree");
    std::set<int> in(j.begin(), j.end());
    int nv = static_cast<int>(j.size());

    auto proj = [&](const Expo& full) {
        Expo e;
        e.reserve(nv);
        for (int v : j) e.push_back(full[v]);
        return e;
    };

    std::vector<int> sub_val(ix.size(), 0);
    for (const auto& e : ix.graph.edges) {
        int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
        if (in.count(a) && in.count(b)) {
            sub_val[a]++;
            sub_val[b]++;
        }
    }

    LaurentPoly pos = lp_one(nv);
    std::vector<Factor> neg;
    auto mul_binomial = [&](int v, int copies) {
        Factor fac{ctx.dual_cls[v], proj(ctx.dual_num[v])};
        for (int k = 0; k < copies; ++k) {
            LaurentPoly bin = lp_one(nv);
            lp_add_term(bin, fac.exp, fac.cls, -1);
            pos = lp_mul(pos, bin, ctx.table);
        }
    };
    for (int v = 0; v < ix.size(); ++v) {
        if (in.count(v)) {
            mul_binomial(v, ix.valency[v] - sub_val[v]);
        } else {
            int e = ix.valency[v] - 2;
            if (e > 0)
                mul_binomial(v, e);
            else if (e < 0)
                for (int k = 0; k < -e; ++k) neg.push_back({ctx.dual_cls[v], proj(ctx.dual_num[v])});
        }
    }

    RationalFunction out;
    out.vars = j;
    out.numerator = divide_exact(ctx, pos, neg);
    for (int p = 0; p < nv; ++p) {
        int v = j[p];
        int dj = sub_val[v];
        Factor fac{ctx.dual_cls[v], proj(ctx.dual_num[v])};
        if (dj >= 3)
            for (int k = 0; k < dj - 2; ++k) out.numerator_factors.push_back(fac);
        else if (dj == 1)
            out.denominator.push_back(fac);
        else if (dj == 0) {
            out.denominator.push_back(fac);
            out.denominator.push_back(fac);
        }
    }
    std::sort(out.numerator_factors.begin(), out.numerator_factors.end());
    std::sort(out.denominator.begin(), out.denominator.end());
    return out;
}

RationalFunction class_part(const Context& ctx, const RationalFunction& f, const HClass& h) {
    long long hidx = ctx.table.encode(h);
    long long order = ctx.table.order;
    RationalFunction out;
    out.vars = f.vars;
    out.numerator = expanded_numerator(ctx, f);
    int nv = static_cast<int>(f.vars.size());
    for (const auto& fac : f.denominator) {
        if (fac.cls == 0) {
            out.denominator.push_back(fac);
            continue;
        }
        LaurentPoly geo;
        Expo e(nv, 0);
        for (long long k = 0; k < order; ++k) {
            lp_add_term(geo, e, ctx.table.mul(fac.cls, k), 1);
            for (int i = 0; i < nv; ++i) e[i] += fac.exp[i];
        }
        out.numerator = lp_mul(out.numerator, geo, ctx.table);
        Expo cleared(nv);
        for (int i = 0; i < nv; ++i) cleared[i] = order * fac.exp[i];
        out.denominator.push_back({0, cleared});
    }
    LaurentPoly filtered;
    for (const auto& [e, c] : out.numerator.terms) {
        long long v = c.at(hidx);
        if (v != 0) lp_add_term(filtered, e, hidx, v);
    }
    out.numerator = filtered;
    std::sort(out.denominator.begin(), out.denominator.end());
    return out;
}

RationalFunction reduce_to(const Context& ctx, const RationalFunction& f,
                           const std::vector<int>& subset, bool simplify) {
    if (subset.empty()) throw SeriesError("empty variable subset");
    std::vector<int> sub(subset);
    std::sort(sub.begin(), sub.end());
    if (sub == f.vars && !simplify) return f;
    if (simplify && f.canonical_full && induces_subtree(ctx.ix->graph, sub))
        return simplify_to_subtree(ctx, sub);

    auto pos = ctx.positions(f.vars, sub);
    RationalFunction out;
    out.vars = sub;
    out.numerator = lp_project(f.numerator, pos);
    auto project_factor = [&](const Factor& fac) {
        Expo e;
        e.reserve(pos.size());
        for (int p : pos) e.push_back(fac.exp[p]);
        return Factor{fac.cls, e};
    };
    for (const auto& fac : f.numerator_factors) out.numerator_factors.push_back(project_factor(fac));
    for (const auto& fac : f.denominator) {
        Factor pf = project_factor(fac);
        bool all_zero = std::all_of(pf.exp.begin(), pf.exp.end(), [](long long x) { return x == 0; });
        if (all_zero)
            throw SeriesError("denominator factor has zero exponent after projection");
        out.denominator.push_back(pf);
    }
    std::sort(out.numerator_factors.begin(), out.numerator_factors.end());
    std::sort(out.denominator.begin(), out.denominator.end());

    if (simplify) {
        // cancel (1 - g t^{k a}) / (1 - h t^a) with g = k h: numerator
        // factors ascending, each against the largest dividing denominator
        // exponent (the least geometric length k)
        auto size_of = [](const Expo& e) {
            long long s = 0;
            for (long long x : e) s += std::abs(x);
            return s;
        };
        auto multiple_of = [](const Expo& big, const Expo& small) -> long long {
            long long k = 0;
            for (size_t c = 0; c < big.size(); ++c) {
                if (small[c] == 0) {
                    if (big[c] != 0) return 0;
                } else if (big[c] % small[c] != 0) {
                    return 0;
                } else {
                    long long kk = big[c] / small[c];
                    if (k == 0)
                        k = kk;
                    else if (k != kk)
                        return 0;
                }
            }
            return k;
        };
        std::stable_sort(out.numerator_factors.begin(), out.numerator_factors.end(),
                         [&](const Factor& a, const Factor& b) {
                             return std::make_tuple(size_of(a.exp), a.exp, a.cls) <
                                    std::make_tuple(size_of(b.exp), b.exp, b.cls);
                         });
        for (size_t ni = 0; ni < out.numerator_factors.size();) {
            const Factor nf = out.numerator_factors[ni];
            size_t best = out.denominator.size();
            long long best_k = 0;
            for (size_t di = 0; di < out.denominator.size(); ++di) {
                const Factor& d = out.denominator[di];
                long long k = multiple_of(nf.exp, d.exp);
                if (k < 1 || nf.cls != ctx.table.mul(d.cls, k)) continue;
                if (best == out.denominator.size() || k < best_k ||
                    (k == best_k && d.exp < out.denominator[best].exp)) {
                    best = di;
                    best_k = k;
                }
            }
            if (best == out.denominator.size()) {
                ++ni;
                continue;
            }
            const Factor d = out.denominator[best];
            LaurentPoly geo;
            Expo e(d.exp.size(), 0);
            for (long long j = 0; j < best_k; ++j) {
                lp_add_term(geo, e, ctx.table.mul(d.cls, j), 1);
                for (size_t c = 0; c < e.size(); ++c) e[c] += d.exp[c];
            }
            out.numerator = lp_mul(out.numerator, geo, ctx.table);
            out.numerator_factors.erase(out.numerator_factors.begin() + ni);
            out.denominator.erase(out.denominator.begin() + best);
        }
        std::sort(out.denominator.begin(), out.denominator.end());
    }
    return out;
}

namespace {

struct NumTerm {
    Expo exp;
    long long cls;
    long long coeff;
};

struct Prepared {
    std::vector<NumTerm> num;
    std::vector<std::pair<Expo, long long>> den;  // restricted exponents, class
};

// Restrict f to the I-positions and flatten the numerator to class/coeff
// triples. Denominator exponents must stay nonnegative and nonzero.
Prepared prepare(const Context& ctx, const RationalFunction& f, const std::vector<int>& I) {
    auto pos = ctx.positions(f.vars, I);
    Prepared p;
    LaurentPoly num = expanded_numerator(ctx, f);
    for (const auto& [e, c] : num.terms) {
        Expo re;
        re.reserve(pos.size());
        for (int q : pos) re.push_back(e[q]);
        for (const auto& [cls, v] : c.t) p.num.push_back({re, cls, v});
    }
    for (const auto& fac : f.denominator) {
        Expo re;
        re.reserve(pos.size());
        bool all_zero = true;
        for (int q : pos) {
            if (fac.exp[q] < 0) throw SeriesError("denominator exponent negative");
            if (fac.exp[q] > 0) all_zero = false;
            re.push_back(fac.exp[q]);
        }
        if (all_zero) throw SeriesError("denominator factor vanishes on the variable subset");
        p.den.push_back({re, fac.cls});
    }
    return p;
}

}  // namespace

SeriesBox taylor_box(const Context& ctx, const RationalFunction& f, const Expo& bound) {
    for (long long b : bound)
        if (b < 0) throw SeriesError("taylor box bound has a negative coordinate");
    Prepared p = prepare(ctx, f, f.vars);
    int nv = static_cast<int>(f.vars.size());
    int m = static_cast<int>(p.den.size());
    SeriesBox box;
    box.vars = f.vars;
    box.bound = bound;

    Expo cur(nv);
    auto within = [&](const Expo& e) {
        for (int c = 0; c < nv; ++c)
            if (e[c] > bound[c]) return false;
        return true;
    };
    std::function<void(int, long long, long long)> rec = [&](int level, long long cls,
                                                             long long coeff) {
        if (!within(cur)) return;
        if (level == m) {
            lp_add_term(box.coeffs, cur, cls, coeff);
            return;
        }
        const auto& [alpha, fcls] = p.den[level];
        rec(level + 1, cls, coeff);
        long long steps = 0;
        long long c = cls;
        for (;;) {
            for (int i = 0; i < nv; ++i) cur[i] += alpha[i];
            ++steps;
            if (!within(cur)) break;
            c = ctx.table.add(c, fcls);
            rec(level + 1, c, coeff);
        }
        for (int i = 0; i < nv; ++i) cur[i] -= steps * alpha[i];
    };
    for (const auto& t : p.num) {
        cur = t.exp;
        rec(0, t.cls, t.coeff);
    }
    return box;
}

GroupRing coefficient_at(const Context& ctx, const RationalFunction& f,
                         const std::vector<int>& I, const QVec& x) {
    Prepared p = prepare(ctx, f, I);
    int nv = static_cast<int>(I.size());
    int m = static_cast<int>(p.den.size());
    Expo target = ctx.to_expo(x, I);
    GroupRing out;
    Expo cur(nv);
    auto within = [&](const Expo& e) {
        for (int c = 0; c < nv; ++c)
            if (e[c] > target[c]) return false;
        return true;
    };
    std::function<void(int, long long, long long)> rec = [&](int level, long long cls,
                                                             long long coeff) {
        if (!within(cur)) return;
        if (level == m) {
            if (cur == target) out.add(cls, coeff);
            return;
        }
        const auto& [alpha, fcls] = p.den[level];
        rec(level + 1, cls, coeff);
        long long steps = 0;
        long long c = cls;
        for (;;) {
            for (int i = 0; i < nv; ++i) cur[i] += alpha[i];
            ++steps;
            if (!within(cur)) break;
            c = ctx.table.add(c, fcls);
            rec(level + 1, c, coeff);
        }
        for (int i = 0; i < nv; ++i) cur[i] -= steps * alpha[i];
    };
    for (const auto& t : p.num) {
        cur = t.exp;
        rec(0, t.cls, t.coeff);
    }
    return out;
}

long long counting_function(const Context& ctx, const RationalFunction& f,
                            const std::vector<int>& I, const HClass& h, const QVec& x) {
    Prepared p = prepare(ctx, f, I);
    int nv = static_cast<int>(I.size());
    int m = static_cast<int>(p.den.size());
    Expo target = ctx.to_expo(x, I);
    long long hidx = ctx.table.encode(h);
    long long total = 0;
    Expo cur(nv);
    auto dominates = [&](const Expo& e) {
        for (int c = 0; c < nv; ++c)
            if (e[c] < target[c]) return false;
        return true;
    };
    std::function<void(int, long long, long long)> rec = [&](int level, long long cls,
                                                             long long coeff) {
        if (dominates(cur)) return;
        if (level == m) {
            if (cls == hidx) total += coeff;
            return;
        }
        const auto& [alpha, fcls] = p.den[level];
        rec(level + 1, cls, coeff);
        long long steps = 0;
        long long c = cls;
        for (;;) {
            for (int i = 0; i < nv; ++i) cur[i] += alpha[i];
            ++steps;
            if (dominates(cur)) break;
            c = ctx.table.add(c, fcls);
            rec(level + 1, c, coeff);
        }
        for (int i = 0; i < nv; ++i) cur[i] -= steps * alpha[i];
    };
    for (const auto& t : p.num) {
        cur = t.exp;
        rec(0, t.cls, t.coeff);
    }
    return total;
}

double counting_cost_estimate(const Context& ctx, const RationalFunction& f,
                              const std::vector<int>& I, const QVec& x) {
    Prepared p = prepare(ctx, f, I);
    int nv = static_cast<int>(I.size());
    Expo target = ctx.to_expo(x, I);
    long long xi_min = 0;
    for (const auto& t : p.num)
        for (int c = 0; c < nv; ++c) xi_min = std::min(xi_min, t.exp[c]);
    double total = 0;
    for (int c = 0; c < nv; ++c) {
        double prod = static_cast<double>(p.num.size());
        for (const auto& [alpha, cls] : p.den) {
            if (alpha[c] == 0) {
                prod = 1e30;
                break;
            }
            double slack = static_cast<double>(target[c] - xi_min);
            if (slack <= 0) {
                prod = 0;
                break;
            }
            prod *= std::max(1.0, slack / static_cast<double>(alpha[c]));
        }
        total += prod;
        if (total > 1e30) break;
    }
    return total;
}

GroupRing cumulative_coefficient(const Context& ctx, const RationalFunction& f,
                                 const std::vector<int>& I, const QVec& x, const QVec& shift) {
    Prepared p = prepare(ctx, f, I);
    int nv = static_cast<int>(I.size());
    int m = static_cast<int>(p.den.size());
    Expo target(nv);
    for (int c = 0; c < nv; ++c) target[c] = ctx.to_num(x[I[c]]) + ctx.to_num(shift[I[c]]);
    long long d = ctx.den;
    GroupRing out;
    Expo cur(nv);
    // a term contributes when target - cur is a positive multiple of the
    // lattice step in every active coordinate
    auto feasible = [&](const Expo& e) {
        for (int c = 0; c < nv; ++c)
            if (e[c] > target[c] - d) return false;
        return true;
    };
    std::function<void(int, long long, long long)> rec = [&](int level, long long cls,
                                                             long long coeff) {
        if (!feasible(cur)) return;
        if (level == m) {
            for (int c = 0; c < nv; ++c)
                if ((target[c] - cur[c]) % d != 0) return;
            out.add(cls, coeff);
            return;
        }
        const auto& [alpha, fcls] = p.den[level];
        rec(level + 1, cls, coeff);
        long long steps = 0;
        long long c = cls;
        for (;;) {
            for (int i = 0; i < nv; ++i) cur[i] += alpha[i];
            ++steps;
            if (!feasible(cur)) break;
            c = ctx.table.add(c, fcls);
            rec(level + 1, c, coeff);
        }
        for (int i = 0; i < nv; ++i) cur[i] -= steps * alpha[i];
    };
    for (const auto& t : p.num) {
        cur = t.exp;
        rec(0, t.cls, t.coeff);
    }
    return out;
}

GroupRing alternating_count_equivariant(const Context& ctx, const RationalFunction& f,
                                        const QVec& x) {
    int n = static_cast<int>(f.vars.size());
    if (n > kMaxAlternatingVertices)
        throw SeriesError("alternating count limited to 20 vertices");
    QVec zero(ctx.ix->size(), 0);
    GroupRing out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> I;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) I.push_back(f.vars[i]);
        GroupRing term = cumulative_coefficient(ctx, f, I, x, zero);
        if (__builtin_popcount(mask) % 2 == 1)
            out += term;
        else
            out -= term;
    }
    return out;
}

long long alternating_count(const Context& ctx, const RationalFunction& f, const QVec& x) {
    GroupRing c = alternating_count_equivariant(ctx, f, x);
    return c.at(ctx.table.encode(class_of(*ctx.ix, x)));
}

StructurePair structure_counts(const Context& ctx, const RationalFunction& f, const HClass& h,
                               const QVec& x, StructureMode mode) {
    const Intersection& ix = *ctx.ix;
    StructurePair out;
    QVec apex(ix.size(), 0);
    for (int v = 0; v < ix.size(); ++v) {
        Rational c = Rational(ix.valency[v] - 2);
        if (c == 0) continue;
        for (int w = 0; w < ix.size(); ++w) apex[w] += ix.dual_basis[v][w] * c;
    }
    QVec rel(ix.size());
    for (int w = 0; w < ix.size(); ++w) rel[w] = x[w] - apex[w];
    out.in_validity_cone = in_lipman_interior(ix, rel);

    if (mode == StructureMode::Full) {
        std::vector<int> all = f.vars;
        out.lhs = counting_function(ctx, f, all, h, x);
        long long rhs = 0;
        for (const auto& e : ix.graph.edges) {
            int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
            std::vector<int> I{std::min(a, b), std::max(a, b)};
            rhs += counting_function(ctx, f, I, h, x);
        }
        for (int v = 0; v < ix.size(); ++v) {
            long long c = ix.valency[v] - 1;
            if (c == 0) continue;
            rhs -= c * counting_function(ctx, f, {v}, h, x);
        }
        out.rhs = rhs;
    } else {
        if (ix.nodes.empty()) throw SeriesError("orbifold structure needs at least one node");
        out.lhs = counting_function(ctx, f, ix.nodes, h, x);
        OrbifoldGraph orb = orbifold_graph(ix.graph);
        long long rhs = 0;
        for (const auto& e : orb.edges) {
            int a = ix.graph.index_of(e.first), b = ix.graph.index_of(e.second);
            std::vector<int> I{std::min(a, b), std::max(a, b)};
            rhs += counting_function(ctx, f, I, h, x);
        }
        for (long id : orb.vertices) {
            long long c = orb.valency.at(id) - 1;
            if (c == 0) continue;
            rhs -= c * counting_function(ctx, f, {ix.graph.index_of(id)}, h, x);
        }
        out.rhs = rhs;
    }
    return out;
}

std::string to_string(const Context& ctx, const LaurentPoly& p) {
    std::ostringstream out;
    if (p.zero()) return "0";
    bool first = true;
    for (const auto& [e, c] : p.terms) {
        if (!first) out << " + ";
        first = false;
        out << "{";
        bool fc = true;
        for (const auto& [cls, v] : c.t) {
            if (!fc) out << ", ";
            fc = false;
            out << plumb::to_string(ctx.table.decode(cls)) << ": " << v;
        }
        out << "}*t^(";
        for (size_t i = 0; i < e.size(); ++i) {
            if (i) out << ",";
            out << e[i] << "/" << ctx.den;
        }
        out << ")";
    }
    return out.str();
}

std::string to_string(const Context& ctx, const RationalFunction& f) {
    std::ostringstream out;
    out << "(";
    bool first = true;
    for (const auto& fac : f.numerator_factors) {
        if (!first) out << " * ";
        first = false;
        out << "(1 - " << plumb::to_string(ctx.table.decode(fac.cls)) << "*t^(";
        for (size_t i = 0; i < fac.exp.size(); ++i) {
            if (i) out << ",";
            out << fac.exp[i] << "/" << ctx.den;
        }
        out << "))";
    }
    if (!first) out << " * ";
    out << "[" << to_string(ctx, f.numerator) << "]) / (";
    first = true;
    for (const auto& fac : f.denominator) {
        if (!first) out << " * ";
        first = false;
        out << "(1 - " << plumb::to_string(ctx.table.decode(fac.cls)) << "*t^(";
        for (size_t i = 0; i < fac.exp.size(); ++i) {
            if (i) out << ",";
            out << fac.exp[i] << "/" << ctx.den;
        }
        out << "))";
    }
    out << ")";
    return out.str();
}

}  // namespace plumb::series
