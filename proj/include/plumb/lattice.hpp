#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plumb/intersection.hpp"

namespace plumb {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element of H = L'/L in Smith normal form coordinates, one residue per
// invariant factor > 1 (0 <= c_i < d_i). The empty tuple is the trivial
// group.
struct HClass {
    std::vector<Integer> c;

    bool operator==(const HClass& o) const = default;
    bool operator<(const HClass& o) const { return c < o.c; }
};

HClass class_add(const Intersection& ix, const HClass& a, const HClass& b);
HClass class_neg(const Intersection& ix, const HClass& a);
HClass class_zero(const Intersection& ix);
std::vector<HClass> all_classes(const Intersection& ix);  // sorted; |H| entries
std::string to_string(const HClass& h);

// x in E-coordinates. Membership in L' means a*x is integral.
bool in_dual_lattice(const Intersection& ix, const QVec& x);

// Class of x in H. Throws LatticeError when x is not in L'.
HClass class_of(const Intersection& ix, const QVec& x);

// The representative of h with all coordinates in [0,1).
QVec unit_box_rep(const Intersection& ix, const HClass& h);

// The minimal representative of h inside the Lipman cone, computed by the
// Laufer-style iteration x -> x + E_v while (x, E_v) > 0. The iteration is
// capped at 10*d*|V|*max|e_v| steps.
QVec min_cone_rep(const Intersection& ix, const HClass& h);

bool leq(const QVec& a, const QVec& b);           // coordinatewise b - a >= 0
bool in_lipman_cone(const Intersection& ix, const QVec& x);       // a*x >= 0
bool in_lipman_interior(const Intersection& ix, const QVec& x);   // a*x > 0

// Coordinate projection onto the subset (internal indices, ascending).
QVec project_to(const QVec& x, const std::vector<int>& subset);

// Dual-basis projection killing the dual generator of the end vertex u:
// expresses x in the dual basis, drops the u component, and rebuilds the
// vector in the deleted graph. `deleted` must be analyze(delete_end_vertex).
QVec project_off_end(const Intersection& ix, const Intersection& deleted, long end_id,
                     const QVec& x);

std::string format_lattice_vector(const Intersection& ix, const QVec& x);
QVec parse_lattice_vector(const Intersection& ix, const std::string& text);

}  // namespace plumb
