#pragma once

#include <optional>

#include "plumb/series.hpp"

namespace plumb::quasipoly {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadratic polynomial fitted to the counting function on anchor + step*L.
// Coefficients are stored against the dual coordinates y = a*x, where the
// design directions are diagonal. As a formula it extends to the whole
// coset of the anchor; evaluations elsewhere are the caller's
// responsibility.
struct QuasiPolynomial {
    QVec anchor;
    Integer step;
    const Intersection* ix;
    Rational c0;
    QVec lin;
    QMat quad;  // upper triangle i <= j

    Rational eval(const QVec& x) const;
};

struct FitOptions {
    std::optional<QVec> anchor;   // defaults to the unit-box representative
    std::optional<Integer> step;  // defaults to det, doubled up to 8*det
    int holdout = 5;              // extra verification points
    std::optional<std::vector<int>> subset;  // count over these variables only
};

// Samples the counting function of class h on a sparse sublattice through
// the anchor, solves the exact quadratic interpolation, and verifies the
// held-out samples exactly. Throws FitError when no step within the cap
// verifies.
QuasiPolynomial fit_quasipolynomial(const series::Context& ctx,
                                    const series::RationalFunction& full, const HClass& h,
                                    const FitOptions& options = {});

// sum_v (valency(v) - 2) E*_v, the apex shift of the validity cone.
QVec subcone_apex(const Intersection& ix);

// Integral vector b with x + b inside apex + int(S'), built from rounded-up
// dual sums; b is a multiple of `step` when given.
QVec deep_offset(const Intersection& ix, const QVec& x, const Integer& step = 1);

// Deterministic deep sample points inside apex + int(S'), spread over
// classes via unit-box representatives.
std::vector<QVec> deep_samples(const Intersection& ix, int count);

// Deterministic sample points inside -K + int(S').
std::vector<QVec> jems_samples(const Intersection& ix, int count);

}  // namespace plumb::quasipoly
