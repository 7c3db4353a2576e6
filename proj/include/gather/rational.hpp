#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gather {

// Exact arithmetic everywhere: simulated times routinely exceed 1e30.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational from_big(const BigInt& z) { return Rational(z); }

// Always "num/den", also for integers, so traces have one shape.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

// Accepts "a", "a/b", "-a/b". Throws std::invalid_argument on junk.
Rational parse_rational(std::string_view text);
BigInt parse_bigint(std::string_view text);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);

// floor(log2 x) + 1 for x >= 1; the "length" |x| of a label.
int bit_length(std::uint64_t x);

// Conversion for reporting only (CSV ratios, logs); never fed back into the simulation.
double to_double(const Rational& r);
double log10_of(const Rational& r);

}  // namespace gather
