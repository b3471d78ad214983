#pragma once

#include <array>
#include <cstdint>

#include <json.hpp>

#include "multgame/measure.hpp"

namespace multgame {

/// Outcome counts over all ordered pairs of n-digit integers.
struct CountResult {
    int n = 0;
    std::uint64_t casino_wins = 0;
    std::uint64_t player_wins = 0;
    std::uint64_t total = 0;
    /// histogram[d-1] = number of products with leading digit d.
    std::array<std::uint64_t, 9> histogram{};

    double casino_ratio() const {
        return static_cast<double>(casino_wins) / static_cast<double>(player_wins);
    }
    double casino_probability() const {
        return static_cast<double>(casino_wins) / static_cast<double>(total);
    }

    CountResult& operator+=(const CountResult& other);
    friend bool operator==(const CountResult&, const CountResult&) = default;
};

nlohmann::json to_json(const CountResult& r);

struct CountOptions {
    int max_n = 8;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Pair-by-pair enumeration, O(100^n).
CountResult count_products(int n, const IntervalUnion& w, const CountOptions& opts = {});

/// Threshold counting: for each i the j-range hitting each boundary comes
/// from one integer ceiling division, O(T * 10^n) for T boundaries.
CountResult count_products_fast(int n, const IntervalUnion& w, const CountOptions& opts = {});

struct LimitResult {
    double probability = 0.0;
    double error_estimate = 0.0;

    double casino_ratio() const { return probability / (1.0 - probability); }
};

/// Casino win probability when both mantissas are independent and uniform on
/// [1,10): (1/81) * integral over x of the length of {y : mantissa(xy) in w}.
/// Throws std::runtime_error when the quadrature error estimate exceeds `tol`.
LimitResult uniform_limit_value(const IntervalUnion& w, double tol = 1e-7);

}  // namespace multgame
