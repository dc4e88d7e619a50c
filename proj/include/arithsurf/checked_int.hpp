#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

// Exact 64-bit arithmetic with overflow detection. The Hirzebruch-Jung
// recurrences grow ray coordinates multiplicatively, so silent wraparound
// would corrupt chains; every arithmetic op here either returns the exact
// value or throws.

namespace arithsurf {

using i64 = long long;

[[noreturn]] inline void throw_overflow() {
    throw std::overflow_error("exact integer arithmetic overflowed 64 bits");
}

inline i64 add_i64(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw_overflow();
    return r;
}

inline i64 sub_i64(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw_overflow();
    return r;
}

inline i64 mul_i64(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw_overflow();
    return r;
}

inline i64 neg_i64(i64 a) {
    if (a == INT64_MIN) throw_overflow();
    return -a;
}

inline i64 abs_i64(i64 a) { return a < 0 ? neg_i64(a) : a; }

// Floor division, exact for negative operands.
inline i64 floor_div(i64 a, i64 b) {
    if (b == 0) throw std::domain_error("division by zero");
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline i64 ceil_div(i64 a, i64 b) {
    if (b == 0) throw std::domain_error("division by zero");
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

// Exact division; throws if b does not divide a.
inline i64 exact_div(i64 a, i64 b) {
    if (b == 0) throw std::domain_error("division by zero");
    if (a % b != 0) throw std::domain_error("exact_div: not divisible");
    return a / b;
}

inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(abs_i64(a), abs_i64(b)); }

inline i64 lcm_i64(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return mul_i64(exact_div(abs_i64(a), gcd_i64(a, b)), abs_i64(b));
}

inline bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace arithsurf
