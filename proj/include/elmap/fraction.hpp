#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>

#include "elmap/error.hpp"

namespace elmap {

// Reduced nonnegative-denominator rational, used for exact distance values.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) fail(ErrorKind::argument, "fraction with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }

    friend std::ostream& operator<<(std::ostream& os, const Fraction& f) {
        return os << f.num << '/' << f.den;
    }
};

}  // namespace elmap
