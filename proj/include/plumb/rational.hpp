#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace plumb {

using Rational = mpq_class;
using Integer = mpz_class;

// Vector with exact rational entries, indexed by internal vertex position.
using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;

// gmpxx has no long long overloads; long is 64-bit on every supported target
inline Integer z_of(long long v) { return Integer(static_cast<long>(v)); }
inline Rational q_of(long long v) { return Rational(static_cast<long>(v)); }

inline Integer floor_q(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_q(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Rational frac_q(const Rational& q) { return q - Rational(floor_q(q)); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// "p/q" with "/q" omitted for integers.
inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

}  // namespace plumb
