#pragma once

#include <map>
#include <string>
#include <vector>

#include "plumb/intersection.hpp"
#include "plumb/lattice.hpp"

namespace plumb::series {

struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H as mixed-radix indices over the invariant factors; keeps the counting
// loops on plain integers.
struct ClassTable {
    std::vector<long long> factors;
    std::vector<long long> strides;
    long long order = 1;

    ClassTable() = default;
    explicit ClassTable(const Intersection& ix);

    long long add(long long a, long long b) const;
    long long neg(long long a) const;
    long long mul(long long a, long long k) const;  // k-fold sum of a
    long long encode(const HClass& h) const;
    HClass decode(long long idx) const;
};

// Exponent numerators over the global denominator (= det of the graph).
using Expo = std::vector<long long>;

// Finitely supported integer function on H.
struct GroupRing {
    std::map<long long, long long> t;

    static GroupRing unit(long long cls, long long c = 1);
    bool zero() const { return t.empty(); }
    long long at(long long cls) const;
    void add(long long cls, long long c);
    GroupRing& operator+=(const GroupRing& o);
    GroupRing& operator-=(const GroupRing& o);
    GroupRing negated() const;
    GroupRing shifted(long long cls, const ClassTable& tbl) const;
    GroupRing times(const GroupRing& o, const ClassTable& tbl) const;
    bool operator==(const GroupRing& o) const { return t == o.t; }
};

// Sparse Laurent polynomial with GroupRing coefficients, canonical form
// (no zero coefficients), deterministic exponent order.
struct LaurentPoly {
    std::map<Expo, GroupRing> terms;

    bool zero() const { return terms.empty(); }
    bool operator==(const LaurentPoly& o) const { return terms == o.terms; }
};

LaurentPoly lp_one(int nvars);
LaurentPoly lp_monomial(const Expo& e, long long cls, long long coeff = 1);
void lp_add_term(LaurentPoly& p, const Expo& e, long long cls, long long coeff);
void lp_add_term(LaurentPoly& p, const Expo& e, const GroupRing& c);
LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b, const ClassTable& tbl);
LaurentPoly lp_mul_term(const LaurentPoly& a, const Expo& e, long long cls, long long coeff,
                        const ClassTable& tbl);
LaurentPoly lp_project(const LaurentPoly& a, const std::vector<int>& positions);
GroupRing lp_eval_one(const LaurentPoly& a);  // sum of all coefficients

// 1 - h t^exp
struct Factor {
    long long cls;
    Expo exp;
    bool operator==(const Factor& o) const = default;
    bool operator<(const Factor& o) const {
        return std::tie(exp, cls) < std::tie(o.exp, o.cls);
    }
};

// numerator_factors * numerator / prod(1 - h t^alpha). Every denominator
// exponent is nonzero with nonnegative coordinates in the active variable
// set, so the Taylor expansion at the origin is well defined.
struct RationalFunction {
    std::vector<int> vars;  // internal vertex indices, ascending
    std::vector<Factor> numerator_factors;
    LaurentPoly numerator;  // extra expanded part, defaults to 1
    std::vector<Factor> denominator;
    bool canonical_full = false;  // true only for the untouched full function
};

struct Context {
    const Intersection* ix;
    ClassTable table;
    long long den;
    std::vector<Expo> dual_num;       // numerators of the dual basis vectors
    std::vector<long long> dual_cls;  // class index of each dual vector

    explicit Context(const Intersection& ix);

    long long to_num(const Rational& q) const;
    Expo to_expo(const QVec& x) const;                          // all coordinates
    Expo to_expo(const QVec& x, const std::vector<int>& vars) const;
    std::vector<int> positions(const std::vector<int>& vars,
                               const std::vector<int>& subset) const;
};

// The equivariant function whose Taylor expansion is the topological
// Poincare series: one numerator factor per extra valency at a node, one
// denominator factor per end (two for an isolated vertex).
RationalFunction equivariant_function(const Context& ctx);

// The h-part: clears group elements from denominator factors with the
// order-|H| geometric identity, then keeps numerator terms of class h.
RationalFunction class_part(const Context& ctx, const RationalFunction& f, const HClass& h);

// Projects exponents onto the subset. With simplify, cancels denominator
// factors against numerator factors with proportional exponent and matching
// class (geometric-sum identity), greedily by ascending exponent size; a
// subset inducing a subtree of the full function switches to the subtree
// presentation below.
RationalFunction reduce_to(const Context& ctx, const RationalFunction& f,
                           const std::vector<int>& subset, bool simplify);

// Presentation of the full function restricted to a subtree J: an explicit
// Laurent-polynomial prefactor times the subtree's own vertex factors. The
// prefactor division is exact; a failed division throws.
RationalFunction simplify_to_subtree(const Context& ctx, const std::vector<int>& J);

LaurentPoly expanded_numerator(const Context& ctx, const RationalFunction& f);

struct SeriesBox {
    std::vector<int> vars;
    Expo bound;
    LaurentPoly coeffs;  // complete for every exponent <= bound
};

SeriesBox taylor_box(const Context& ctx, const RationalFunction& f, const Expo& bound);

// Single Taylor coefficient of f(t_I) at the projection of x.
GroupRing coefficient_at(const Context& ctx, const RationalFunction& f,
                         const std::vector<int>& I, const QVec& x);

// Sum of series coefficients of f(t_I) in class h over exponents that do
// not dominate the projection of x.
long long counting_function(const Context& ctx, const RationalFunction& f,
                            const std::vector<int>& I, const HClass& h, const QVec& x);

// Rough upper bound on the enumeration size of the counting above; lets
// callers route infeasible evaluations through the structure identity.
double counting_cost_estimate(const Context& ctx, const RationalFunction& f,
                              const std::vector<int>& I, const QVec& x);

// Coefficient of t_I^(x - shift) in the expansion of f(t_I) multiplied by
// the summation kernel prod_{i in I} t_i/(1-t_i).
GroupRing cumulative_coefficient(const Context& ctx, const RationalFunction& f,
                                 const std::vector<int>& I, const QVec& x, const QVec& shift);

// Alternating sum of cumulative coefficients over all nonempty variable
// subsets; equals the counting function on the class of x.
GroupRing alternating_count_equivariant(const Context& ctx, const RationalFunction& f,
                                        const QVec& x);
long long alternating_count(const Context& ctx, const RationalFunction& f, const QVec& x);

enum class StructureMode { Full, Orbifold };

struct StructurePair {
    long long lhs = 0;
    long long rhs = 0;
    bool in_validity_cone = false;
    bool equal() const { return lhs == rhs; }
};

// Left side: the counting function (full or reduced). Right side: the
// edge/vertex combination of one- and two-variable counting functions.
StructurePair structure_counts(const Context& ctx, const RationalFunction& f, const HClass& h,
                               const QVec& x, StructureMode mode);

std::string to_string(const Context& ctx, const LaurentPoly& p);
std::string to_string(const Context& ctx, const RationalFunction& f);

}  // namespace plumb::series
