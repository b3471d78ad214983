#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "multgame/measure.hpp"

namespace multgame {

using u128 = unsigned __int128;

/// 10^k for k in [0, 38].
u128 pow10_u128(int k);

std::string to_string_u128(u128 v);

/// Most significant digits accepted for a player or dealer number. Keeps the
/// product of two numbers within 128 bits.
inline constexpr int kMaxInputDigits = 18;

/// An exact terminating decimal mantissa in [1,10), stored as a scaled
/// integer: value = significand / 10^(digits-1) with
/// 10^(digits-1) <= significand < 10^digits.
class Decimal {
public:
    Decimal() = default;

    static Decimal from_scaled(u128 significand, int digits);

    /// Strict parse of a decimal in [1,10): "2", "2.1", "2.50".
    static Decimal parse(std::string_view text);

    /// Parses any positive decimal or integer and returns its mantissa, so
    /// "21", "2.1" and "0.021" all give 2.1.
    static Decimal parse_normalized(std::string_view text);

    /// The `digits`-digit decimal nearest to x; rejects x that is not within
    /// 1e-9 of such a decimal.
    static Decimal from_double(double x, int digits);

    /// Truncates x in [1,10) toward zero to `digits` significant digits.
    static Decimal truncate(double x, int digits);

    /// Shortest decimal that round-trips to x, for x in [1,10).
    static Decimal shortest(double x);

    u128 significand() const { return significand_; }
    int digits() const { return digits_; }
    int leading_digit() const;

    /// Same value with trailing zeros removed.
    Decimal canonical() const;

    /// Canonical rendering without trailing zeros: "2", "2.5", "1.05".
    std::string to_string() const;
    double to_double() const;

    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);
    friend bool operator==(const Decimal& a, const Decimal& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

private:
    Decimal(u128 s, int d) : significand_(s), digits_(d) {}

    u128 significand_ = 1;
    int digits_ = 1;
};

/// Exact mantissa of a*b.
Decimal multiply_mantissa(const Decimal& a, const Decimal& b);

/// A mantissa-domain winning set with endpoints converted to exact decimals
/// (the shortest round-trip rendering of each double endpoint), so membership
/// of an exact product is decided without floating-point error.
class ExactWinningSet {
public:
    explicit ExactWinningSet(const IntervalUnion& w);

    bool contains(const Decimal& m) const;
    const IntervalUnion& source() const { return source_; }

    struct Part {
        Decimal lo;
        Decimal hi;
        bool hi_is_ten = false;
    };
    const std::vector<Part>& parts() const { return parts_; }

private:
    IntervalUnion source_;
    std::vector<Part> parts_;
};

}  // namespace multgame
