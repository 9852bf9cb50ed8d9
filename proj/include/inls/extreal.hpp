#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace inls {

// Extended real with an explicit infinity tag so that arithmetic like 2/inf
// is exact rather than a float sentinel convention.
class ExtReal {
  public:
    constexpr ExtReal() : value_(0.0), infinite_(false) {}
    constexpr ExtReal(double v) : value_(v), infinite_(false) {}
    static constexpr ExtReal infinity() {
        ExtReal e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return infinite_; }
    // Finite value; calling this on infinity is a programming error, so the
    // accessor returns a quiet NaN to make misuse loud in tests.
    constexpr double value() const {
        return infinite_ ? std::numeric_limits<double>::quiet_NaN() : value_;
    }
    // Reciprocal with the exact convention 1/inf = 0.
    constexpr double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

    friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
        return a.value_ == b.value_;
    }
    friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) {
        return a < b || a == b;
    }

    std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

  private:
    double value_;
    bool infinite_;
};

}  // namespace inls
