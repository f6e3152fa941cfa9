#pragma once
#include <charconv>
#include <string>

namespace topoclust {

// Shortest decimal string that parses back to exactly the same double; used
// everywhere a double is written to a file so that save/load round trips are
// bit-exact.
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace topoclust
