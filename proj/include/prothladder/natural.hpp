#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace prothladder {

/// Arbitrary-precision non-negative integer used for all exact arithmetic.
using Natural = boost::multiprecision::cpp_int;

inline Natural pow2(unsigned n) { return Natural(1) << n; }

inline std::string to_decimal(const Natural& v) { return v.str(); }

/// True when the value can be stored losslessly in a uint64_t.
inline bool fits_u64(const Natural& v) {
    return v >= 0 && v <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Natural& v) {
    return v.template convert_to<std::uint64_t>();
}

/// Parses a canonical decimal natural: digits only, no sign, no leading
/// zeros (except "0" itself). Returns false on any deviation.
inline bool parse_natural(std::string_view text, Natural& out) {
    if (text.empty()) return false;
    if (text.size() > 1 && text.front() == '0') return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    out = 0;
    for (char c : text) {
        out *= 10;
        out += c - '0';
    }
    return true;
}

} // namespace prothladder
