#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace inls {

// Locale-independent decimal formatting used everywhere results are written.
// Scientific form with 16 digits after the point (17 significant digits)
// round-trips every double exactly, so reruns produce byte-identical output.
inline std::string fmt_sci17(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

// Shortest round-trip form, for places where readability wins (manifests,
// key=value records) and byte-stability is still required.
inline std::string fmt_shortest(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_int(std::int64_t v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace inls
