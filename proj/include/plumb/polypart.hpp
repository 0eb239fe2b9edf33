#pragma once

#include "plumb/quasipoly.hpp"
#include "plumb/series.hpp"

namespace plumb::polypart {

struct PolypartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// f = poly_part + remainder / prod(denominator), with poly_part supported on
// nonnegative powers of the division variable and the remainder strictly
// below the combined denominator degree.
struct Decomposition1V {
    int var;  // internal vertex index
    series::LaurentPoly poly_part;
    series::LaurentPoly remainder;
    std::vector<series::Factor> denominator;
};

Decomposition1V poly_part_one_var(const series::Context& ctx, const series::RationalFunction& f,
                                  int v);

// Four-component decomposition in the plane of two variables. Denominator
// factors must split into two families projecting onto two rays strictly
// inside the positive quadrant; `first` keeps the alpha-family denominator,
// `second` the beta family, `third` both.
struct Decomposition2V {
    int var_v, var_w;
    series::LaurentPoly main;    // finitely supported polynomial part
    series::LaurentPoly first;   // numerator over the alpha family
    series::LaurentPoly second;  // numerator over the beta family
    series::LaurentPoly third;   // numerator over the full denominator
    std::vector<series::Factor> alpha_family, beta_family;
};

Decomposition2V poly_part_two_var(const series::Context& ctx, const series::RationalFunction& f,
                                  int v, int w);

// The reduced class function used for the multivariable polynomial part:
// project to the nodes, cancel matching factors, extract the class part.
series::RationalFunction reduced_class_function(const series::Context& ctx,
                                                const series::RationalFunction& full,
                                                const HClass& h);

// Combination of the one- and two-variable polynomial parts over the
// orbifold graph; a genuine Laurent polynomial in the node variables whose
// value at 1 is the periodic constant.
series::LaurentPoly multivariable_poly_part(const series::Context& ctx,
                                            const series::RationalFunction& full, const HClass& h);

enum class PcMode { PolyPart, Fit, Structure };

Rational periodic_constant(const series::Context& ctx, const series::RationalFunction& full,
                           const HClass& h, PcMode mode);

// Normalized invariant: -pc_h - ((K + 2 r_h)^2 + |V|) / 8.
Rational seiberg_witten(const series::Context& ctx, const series::RationalFunction& full,
                        const HClass& h);

}  // namespace plumb::polypart
