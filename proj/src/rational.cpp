#include "godo/rational.hpp"

#include <cctype>

#include "godo/errors.hpp"

namespace godo {

std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace {

BigInt parse_int(std::string_view s, std::string_view whole) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) throw ConfigError("bad rational '" + std::string(whole) + "'");
    for (std::size_t k = i; k < s.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw ConfigError("bad rational '" + std::string(whole) + "'");
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(t, text));
    const BigInt num = parse_int(trim(t.substr(0, slash)), text);
    const BigInt den = parse_int(trim(t.substr(slash + 1)), text);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

Rational dyadic(int j) {
    BigInt den = 1;
    den <<= j;
    return Rational(BigInt(1), den);
}

bool power_at_least(std::uint64_t num, std::uint64_t den, int n, const Rational& bound) {
    BigInt a = num, b = den;
    for (int i = 0; i < n; ++i) {
        a *= a;
        b *= b;
    }
    return Rational(a, b) >= bound;
}

}  // namespace godo
