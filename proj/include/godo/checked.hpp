#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace godo {

using i64 = std::int64_t;

[[noreturn]] inline void overflow(const char* what) {
    throw std::overflow_error(std::string("int64 overflow in ") + what);
}

inline i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) overflow("add");
    return r;
}

inline i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) overflow("sub");
    return r;
}

inline i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("mul");
    return r;
}

inline i64 neg(i64 a) { return sub(0, a); }

// Euclidean remainder in [0, m), m > 0.
inline i64 emod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// Floor division matching emod: a == m * efloor(a, m) + emod(a, m).
inline i64 efloor(i64 a, i64 m) {
    i64 q = a / m;
    if (a % m < 0) --q;
    return q;
}

inline std::uint64_t umul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("index product");
    return r;
}

}  // namespace godo
