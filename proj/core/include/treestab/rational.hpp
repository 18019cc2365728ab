#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace treestab {

// Exact rational arithmetic for every density comparison. cpp_int keeps the
// bounds (products like q*|A|*|B|, powers like p^13*m) overflow-free; floats
// appear only in reports.
using Int = boost::multiprecision::cpp_int;
using Q = boost::rational<Int>;

inline Q q_of(long long num, long long den = 1) { return Q(Int(num), Int(den)); }

inline double to_double(const Q& q) {
    return q.numerator().convert_to<double>() / q.denominator().convert_to<double>();
}

inline std::string to_string(const Q& q) {
    if (q.denominator() == 1) return q.numerator().str();
    return q.numerator().str() + "/" + q.denominator().str();
}

// Parses "3/4", "0.25", "2", "-1/8". Decimal strings become exact rationals.
Q parse_rational(const std::string& s);

// floor/ceil to Int.
inline Int floor_q(const Q& q) {
    Int n = q.numerator(), d = q.denominator();
    Int quo = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) quo -= 1;
    return quo;
}
inline Int ceil_q(const Q& q) {
    Int n = q.numerator(), d = q.denominator();
    Int quo = n / d;
    if (n % d != 0 && ((n < 0) == (d < 0))) quo += 1;
    return quo;
}
inline long long ceil_ll(const Q& q) { return ceil_q(q).convert_to<long long>(); }
inline long long floor_ll(const Q& q) { return floor_q(q).convert_to<long long>(); }

Q pow_q(const Q& base, unsigned long long e);  // exact, use only for small e

// A formula bound of the shape base^exponent * extra, where the exponent can
// be factorial-sized. Materialised lazily: exact when cheap, a sound dyadic
// lower bound 2^-j when the value is representable but the exact rational is
// not, and the clamp floor (flagged) otherwise.
struct GuaranteeBound {
    Q value;                 // always a *claimed* lower bound; see below_floor
    bool below_floor = false;    // true => value is the clamp floor, unverified
    bool dyadic_rounded = false; // true => value = 2^-j <= exact formula value
    std::string formula;         // human-readable provenance, e.g. "kappa^(10k)!"
};

// Saturating factorial (caps at 2^62 to keep exponent arithmetic finite).
unsigned long long saturating_factorial(unsigned long long n);

// base^e clamped below at floor_q (default 2^-40); flags per GuaranteeBound.
GuaranteeBound clamped_pow(const Q& base, unsigned long long e, const Q& floor_q,
                           const std::string& formula);

// Product of two clamped bounds (flags are sticky, result re-floored).
GuaranteeBound combine_bounds(const GuaranteeBound& a, const GuaranteeBound& b,
                              const Q& floor_q);

}  // namespace treestab
