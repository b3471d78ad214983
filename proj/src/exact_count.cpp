#include "multgame/exact_count.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "multgame/decimal.hpp"

namespace multgame {

namespace {

// Endpoints with more significant digits than this are treated as inexact
// (typically images of irrational log endpoints).
constexpr int kMaxThresholdDigits = 15;

// A boundary c in [1,10] as the exact rational T / 10^(digits-1).
struct Threshold {
    u128 scaled;
    int digits;
};

struct ExactParts {
    std::vector<std::pair<Threshold, Threshold>> parts;
};

Threshold exact_threshold(double v) {
    if (v == 10.0) return {10, 1};
    const Decimal d = Decimal::shortest(v);
    if (d.digits() > kMaxThresholdDigits) {
        throw ValidationError("winning-set endpoint " + d.to_string() +
                              " is not an exact decimal of at most " +
                              std::to_string(kMaxThresholdDigits) + " digits");
    }
    return {d.significand(), d.digits()};
}

ExactParts exact_parts(const IntervalUnion& w) {
    if (w.domain() != Domain::Mantissa) {
        throw ValidationError("count: winning set must be in the mantissa domain");
    }
    ExactParts out;
    for (const auto& iv : w.parts()) {
        out.parts.push_back({exact_threshold(iv.lo), exact_threshold(iv.hi)});
    }
    return out;
}

void check_n(int n, const CountOptions& opts) {
    if (n < 1 || n > opts.max_n || n > 8) {
        throw ValidationError("digit count n must be in 1.." +
                              std::to_string(std::min(opts.max_n, 8)));
    }
}

std::uint64_t pow10_u64(int k) { return static_cast<std::uint64_t>(pow10_u128(k)); }

template <typename Body>
CountResult partitioned(int n, unsigned threads, Body body) {
    const std::uint64_t lo = pow10_u64(n - 1);
    const std::uint64_t hi = pow10_u64(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, hi - lo));

    std::vector<CountResult> partial(threads);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (hi - lo + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t a = lo + t * chunk;
        const std::uint64_t b = std::min(hi, a + chunk);
        if (threads == 1) {
            body(a, b, partial[t]);
        } else {
            pool.emplace_back([&, a, b, t] { body(a, b, partial[t]); });
        }
    }
    for (auto& th : pool) th.join();

    CountResult total;
    for (const auto& p : partial) total += p;
    total.n = n;
    total.total = (hi - lo) * (hi - lo);
    return total;
}

}  // namespace

CountResult& CountResult::operator+=(const CountResult& other) {
    casino_wins += other.casino_wins;
    player_wins += other.player_wins;
    total += other.total;
    for (std::size_t d = 0; d < histogram.size(); ++d) histogram[d] += other.histogram[d];
    return *this;
}

nlohmann::json to_json(const CountResult& r) {
    return {{"n", r.n},
            {"casino", r.casino_wins},
            {"player", r.player_wins},
            {"total", r.total},
            {"ratio", r.casino_ratio()},
            {"histogram", r.histogram}};
}

CountResult count_products(int n, const IntervalUnion& w, const CountOptions& opts) {
    check_n(n, opts);
    const ExactParts ex = exact_parts(w);
    const std::uint64_t lo = pow10_u64(n - 1);
    const std::uint64_t hi = pow10_u64(n);
    const std::uint64_t top_decade = pow10_u64(2 * n - 1);

    return partitioned(n, opts.threads, [&](std::uint64_t a, std::uint64_t b, CountResult& out) {
        for (std::uint64_t i = a; i < b; ++i) {
            for (std::uint64_t j = lo; j < hi; ++j) {
                const std::uint64_t p = i * j;
                const int k = p >= top_decade ? 2 * n - 1 : 2 * n - 2;
                const std::uint64_t unit = pow10_u64(k);
                ++out.histogram[p / unit - 1];
                // mantissa(p) = p / 10^k; compare against T / 10^(digits-1).
                bool win = false;
                for (const auto& [l, h] : ex.parts) {
                    const bool above_lo = static_cast<u128>(p) * pow10_u128(l.digits - 1) >=
                                          l.scaled * static_cast<u128>(unit);
                    const bool below_hi = static_cast<u128>(p) * pow10_u128(h.digits - 1) <
                                          h.scaled * static_cast<u128>(unit);
                    if (above_lo && below_hi) {
                        win = true;
                        break;
                    }
                }
                if (win) ++out.casino_wins; else ++out.player_wins;
            }
        }
    });
}

CountResult count_products_fast(int n, const IntervalUnion& w, const CountOptions& opts) {
    check_n(n, opts);
    const ExactParts ex = exact_parts(w);
    const std::uint64_t lo = pow10_u64(n - 1);
    const std::uint64_t hi = pow10_u64(n);
    const std::uint64_t width = hi - lo;

    return partitioned(n, opts.threads, [&](std::uint64_t a, std::uint64_t b, CountResult& out) {
        for (std::uint64_t i = a; i < b; ++i) {
            // #{j in [lo,hi) : i*j < t * 10^k} for t = T / 10^(digits-1).
            const auto below = [&](const Threshold& t, int k) -> std::uint64_t {
                const u128 num = t.scaled * pow10_u128(k);
                const u128 den = static_cast<u128>(i) * pow10_u128(t.digits - 1);
                const u128 jmax = (num + den - 1) / den;  // j < num/den  <=>  j < ceil(num/den)
                if (jmax <= lo) return 0;
                return static_cast<std::uint64_t>(std::min<u128>(jmax - lo, width));
            };
            std::uint64_t wins = 0;
            for (int k = 2 * n - 2; k <= 2 * n - 1; ++k) {
                for (int d = 1; d <= 9; ++d) {
                    out.histogram[d - 1] += below({static_cast<u128>(d + 1), 1}, k) -
                                            below({static_cast<u128>(d), 1}, k);
                }
                for (const auto& [l, h] : ex.parts) wins += below(h, k) - below(l, k);
            }
            out.casino_wins += wins;
            out.player_wins += width - wins;
        }
    });
}

LimitResult uniform_limit_value(const IntervalUnion& w, double tol) {
    if (w.domain() != Domain::Mantissa) {
        throw ValidationError("uniform_limit_value: winning set must be in the mantissa domain");
    }
    // The length of V_x is smooth between the points where some k*e/x crosses
    // 1 or 10, e an endpoint of w and k in {1, 10}.
    std::vector<double> breaks{1.0, 10.0};
    for (const auto& iv : w.parts()) {
        for (double e : {iv.lo, iv.hi}) {
            for (double c : {e / 10.0, e, 10.0 * e}) {
                if (c > 1.0 && c < 10.0) breaks.push_back(c);
            }
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 breaks.end());

    const auto length = [&](double x) {
        double total = 0.0;
        const IntervalUnion v = scale_mod_group(w, std::min(x, std::nextafter(10.0, 0.0)));
        for (const auto& iv : v.parts()) {
            total += iv.length();
        }
        return total;
    };

    using boost::math::quadrature::gauss_kronrod;
    double integral = 0.0;
    double error = 0.0;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        double piece_err = 0.0;
        integral += gauss_kronrod<double, 15>::integrate(length, breaks[s], breaks[s + 1], 15,
                                                         1e-12, &piece_err);
        error += piece_err;
    }
    LimitResult r{integral / 81.0, error / 81.0};
    if (!(r.error_estimate <= tol) || !std::isfinite(r.probability)) {
        throw std::runtime_error("uniform_limit_value: quadrature did not converge (error estimate " +
                                 std::to_string(r.error_estimate) + ")");
    }
    return r;
}

}  // namespace multgame
