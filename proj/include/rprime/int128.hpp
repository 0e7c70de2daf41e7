#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

namespace rprime
{

using i128 = __int128;

inline std::string to_string(i128 v)
{
    if (v == 0) return "0";
    const bool neg = v < 0;
    // Work in the negative range so INT128_MIN does not overflow.
    std::string s;
    if (!neg) v = -v;
    while (v != 0) {
        const int digit = -static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + digit));
        v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

inline bool fits_int64(i128 v)
{
    return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
}

} // namespace rprime
