#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "multgame/decimal.hpp"
#include "multgame/measure.hpp"
#include "multgame/rng.hpp"

namespace multgame {

/// Default cap on |X_n| for grid enumeration.
inline constexpr std::uint64_t kDefaultGridCap = 10'000'000;

/// Resolution (significant digits) continuous draws are truncated to before
/// adjudication.
inline constexpr int kDefaultResolution = 12;

namespace strategy {

struct PurePoint {
    Decimal x;
};

struct Discrete {
    std::vector<Decimal> points;  // strictly increasing
    std::vector<double> masses;
};

struct Benford {};

/// Same law as Benford; the label records that the number was chosen by
/// drawing its logarithm uniformly.
struct UniformLog {};

/// Uniform on [1,10) with density 1/9; the n -> infinity limit of uniform
/// integer play.
struct UniformMantissa {};

/// Uniform over the mantissas of the n-digit integers.
struct UniformDigits {
    int n = 1;
};

/// The discretized Benford law on X_n: 10^a rounded down to n digits.
struct BetaN {
    int n = 1;
};

}  // namespace strategy

/// A mixed strategy over [1,10).
class Strategy {
public:
    using Variant = std::variant<strategy::PurePoint, strategy::Discrete, strategy::Benford,
                                 strategy::UniformLog, strategy::UniformMantissa,
                                 strategy::UniformDigits, strategy::BetaN>;

    static Strategy pure(Decimal x);
    static Strategy pure(double x, int digits);
    static Strategy discrete(std::vector<Decimal> points, std::vector<double> masses);
    static Strategy benford();
    static Strategy uniform_log();
    static Strategy uniform_mantissa();
    static Strategy uniform_digits(int n);
    static Strategy beta_n(int n);

    const Variant& variant() const { return v_; }
    std::string type_name() const;

    /// Benford-distributed (either label).
    bool is_benford() const;
    /// Finitely supported on exact decimals.
    bool is_atomic() const;

    nlohmann::json to_json() const;
    static Strategy from_json(const nlohmann::json& j);

private:
    explicit Strategy(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Finite support with masses, points in increasing order.
struct Atoms {
    std::vector<Decimal> points;
    std::vector<double> masses;
};

/// Support and masses of an atomic strategy; throws for continuous ones.
Atoms atoms_of(const Strategy& s, std::uint64_t grid_cap = kDefaultGridCap);

/// The grid X_n as scaled integers m in [10^(n-1), 10^n); x = m / 10^(n-1).
std::vector<std::uint64_t> support_grid(int n, std::uint64_t cap = kDefaultGridCap);

/// beta_n{x} = log10(x + 10^-(n-1)) - log10(x) for x on the X_n grid.
double beta_n_mass(int n, double x);
double beta_n_mass(int n, const Decimal& x);

/// P(X <= x) for x in [1,10].
double cdf(const Strategy& s, double x);

/// One draw as a real number.
double sample(const Strategy& s, RngStream& rng);

/// One draw as an exact decimal; continuous laws are truncated to
/// `resolution` significant digits.
Decimal draw(const Strategy& s, RngStream& rng, int resolution = kDefaultResolution);

/// The beta_n draw for a given uniform a in [0,1): the largest n-digit
/// number not exceeding 10^a.
Decimal beta_n_from_uniform(int n, double a);

/// Probability that the casino wins, i.e. that mantissa(x*y) lands in w, when
/// the casino plays `casino` and the player plays `player`.
///
/// Supported pairings:
///   Benford/UniformLog vs anything         -> beta(w)
///   atomic vs atomic                       -> exact sum; products adjudicated
///                                             in scaled-integer arithmetic
///   UniformDigits(n) vs UniformDigits(n)   -> exact enumeration counts
///   UniformMantissa vs atomic              -> exact sum of interval lengths
///   UniformMantissa vs UniformMantissa     -> adaptive quadrature
double win_probability(const Strategy& casino, const Strategy& player, const IntervalUnion& w);

}  // namespace multgame
