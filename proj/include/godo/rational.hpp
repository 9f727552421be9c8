#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace godo {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

// Accepts "p/q" or an integer.
Rational parse_rational(std::string_view text);

inline Rational ratio(std::uint64_t num, std::uint64_t den) { return Rational(BigInt(num), BigInt(den)); }

// 2^{-j}
Rational dyadic(int j);

// (num/den)^{2^n} >= bound, exactly.
bool power_at_least(std::uint64_t num, std::uint64_t den, int n, const Rational& bound);

}  // namespace godo
