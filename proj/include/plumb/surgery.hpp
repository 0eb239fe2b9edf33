#pragma once

#include "plumb/polypart.hpp"
#include "plumb/quasipoly.hpp"

namespace plumb::surgery {

struct SurgeryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Row {
    HClass cls;
    std::string identity;
    Rational lhs;
    Rational rhs;
    bool pass;
    std::string note;
};

struct SurgeryReport {
    long vertex_id;
    std::vector<Row> rows;
    bool all_pass() const;
};

// Recursion of the counting quasipolynomials under deletion of the end
// vertex: full graph at x = deleted graph at the projection of x plus the
// one-variable correction at the x_u coordinate. Both multivariable sides
// are evaluated through verified quadratic fits on aligned sublattices; the
// one-variable term through a verified progression fit.
SurgeryReport check_quasipoly_recursion(const series::Context& ctx, long end_id,
                                        int samples_per_class);
SurgeryReport check_quasipoly_recursion(const series::Context& ctx, long end_id,
                                        const std::vector<QVec>& samples);

// Surgery formula for the normalized invariants: the unit-box normalized
// value on the full graph equals the value on the deleted graph at the
// projected representative minus the periodic constant of the one-variable
// restriction.
SurgeryReport check_sw_surgery(const series::Context& ctx, long end_id);

// Recursion of the periodic constants normalized at the minimal cone
// representatives, including the projection property of the minimal
// representatives themselves.
SurgeryReport check_pc_recursion_min_rep(const series::Context& ctx, long end_id);

// Evaluation of the one-variable correction quasipolynomial at w for class
// h, through an exact progression fit.
Rational one_var_correction(const series::Context& ctx, long end_id, const HClass& h,
                            const Rational& w);

std::vector<QVec> recursion_samples(const series::Context& ctx, long end_id, const HClass& h,
                                    int count);

}  // namespace plumb::surgery
