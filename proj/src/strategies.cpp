#include "multgame/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "multgame/exact_count.hpp"

namespace multgame {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_n(int n) {
    if (n < 1 || n > kMaxInputDigits) {
        throw ValidationError("strategy digit count n must be in 1.." +
                              std::to_string(kMaxInputDigits));
    }
}

double grid_scale(int n) { return std::pow(10.0, n - 1); }

// Largest grid index m (x = m / 10^(n-1)) with m / 10^(n-1) <= x.
std::uint64_t grid_floor(int n, double x) {
    const double s = grid_scale(n);
    auto m = static_cast<std::uint64_t>(std::floor(x * s));
    if (static_cast<double>(m + 1) / s <= x) ++m;
    while (m > 0 && static_cast<double>(m) / s > x) --m;
    return m;
}

double log10_ratio(double num, double den) { return std::log1p((num - den) / den) / std::log(10.0); }

}  // namespace

Strategy Strategy::pure(Decimal x) { return Strategy(strategy::PurePoint{x}); }

Strategy Strategy::pure(double x, int digits) { return pure(Decimal::from_double(x, digits)); }

Strategy Strategy::discrete(std::vector<Decimal> points, std::vector<double> masses) {
    if (points.empty() || points.size() != masses.size()) {
        throw ValidationError("discrete strategy needs equally many points and masses (at least one)");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1] < points[i])) {
            throw ValidationError("discrete strategy points must be strictly increasing");
        }
    }
    long double total = 0.0L;
    for (double m : masses) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw ValidationError("discrete strategy masses must be non-negative");
        }
        total += m;
    }
    if (std::abs(total - 1.0L) > 1e-12L) {
        throw ValidationError("discrete strategy masses must sum to 1");
    }
    return Strategy(strategy::Discrete{std::move(points), std::move(masses)});
}

Strategy Strategy::benford() { return Strategy(strategy::Benford{}); }
Strategy Strategy::uniform_log() { return Strategy(strategy::UniformLog{}); }
Strategy Strategy::uniform_mantissa() { return Strategy(strategy::UniformMantissa{}); }

Strategy Strategy::uniform_digits(int n) {
    check_n(n);
    return Strategy(strategy::UniformDigits{n});
}

Strategy Strategy::beta_n(int n) {
    check_n(n);
    return Strategy(strategy::BetaN{n});
}

std::string Strategy::type_name() const {
    return std::visit(overloaded{
                          [](const strategy::PurePoint&) { return "pure"; },
                          [](const strategy::Discrete&) { return "discrete"; },
                          [](const strategy::Benford&) { return "benford"; },
                          [](const strategy::UniformLog&) { return "uniform_log"; },
                          [](const strategy::UniformMantissa&) { return "uniform_mantissa"; },
                          [](const strategy::UniformDigits&) { return "uniform_digits"; },
                          [](const strategy::BetaN&) { return "beta_n"; },
                      },
                      v_);
}

bool Strategy::is_benford() const {
    return std::holds_alternative<strategy::Benford>(v_) ||
           std::holds_alternative<strategy::UniformLog>(v_);
}

bool Strategy::is_atomic() const {
    return !is_benford() && !std::holds_alternative<strategy::UniformMantissa>(v_);
}

nlohmann::json Strategy::to_json() const {
    nlohmann::json j{{"type", type_name()}};
    std::visit(overloaded{
                   [&](const strategy::PurePoint& p) {
                       j["x"] = p.x.to_string();
                       j["digits"] = p.x.canonical().digits();
                   },
                   [&](const strategy::Discrete& d) {
                       nlohmann::json pts = nlohmann::json::array();
                       int digits = 1;
                       for (const auto& p : d.points) {
                           pts.push_back(p.to_string());
                           digits = std::max(digits, p.canonical().digits());
                       }
                       j["points"] = pts;
                       j["masses"] = d.masses;
                       j["digits"] = digits;
                   },
                   [&](const strategy::UniformDigits& u) { j["n"] = u.n; },
                   [&](const strategy::BetaN& b) { j["n"] = b.n; },
                   [](const auto&) {},
               },
               v_);
    return j;
}

namespace {

Decimal decimal_from_json(const nlohmann::json& v, std::optional<int> digits) {
    if (v.is_string()) {
        Decimal d = Decimal::parse(v.get<std::string>());
        if (digits && d.canonical().digits() > *digits) {
            throw ValidationError("point " + d.to_string() + " has more than " +
                                  std::to_string(*digits) + " digits");
        }
        return d;
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        return digits ? Decimal::from_double(x, *digits) : Decimal::shortest(x);
    }
    throw ValidationError("strategy point must be a number or a decimal string");
}

}  // namespace

Strategy Strategy::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ValidationError("strategy must be an object with a string \"type\"");
    }
    try {
        const auto type = j.at("type").get<std::string>();
        std::optional<int> digits;
        if (j.contains("digits")) digits = j.at("digits").get<int>();
        if (type == "pure") return pure(decimal_from_json(j.at("x"), digits));
        if (type == "discrete") {
            std::vector<Decimal> pts;
            for (const auto& p : j.at("points")) pts.push_back(decimal_from_json(p, digits));
            return discrete(std::move(pts), j.at("masses").get<std::vector<double>>());
        }
        if (type == "benford") return benford();
        if (type == "uniform_log") return uniform_log();
        if (type == "uniform_mantissa") return uniform_mantissa();
        if (type == "uniform_digits") return uniform_digits(j.at("n").get<int>());
        if (type == "beta_n") return beta_n(j.at("n").get<int>());
        throw ValidationError("unknown strategy type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed strategy: ") + e.what());
    }
}

std::vector<std::uint64_t> support_grid(int n, std::uint64_t cap) {
    check_n(n);
    const auto lo = static_cast<std::uint64_t>(pow10_u128(n - 1));
    const std::uint64_t count = 9 * lo;
    if (count > cap) {
        throw ValidationError("grid X_" + std::to_string(n) + " has " + std::to_string(count) +
                              " points, above the cap of " + std::to_string(cap));
    }
    std::vector<std::uint64_t> grid(count);
    std::iota(grid.begin(), grid.end(), lo);
    return grid;
}

double beta_n_mass(int n, const Decimal& x) {
    check_n(n);
    const Decimal c = x.canonical();
    if (c.digits() > n) {
        throw ValidationError(x.to_string() + " is not on the X_" + std::to_string(n) + " grid");
    }
    const auto m = static_cast<double>(c.significand() * pow10_u128(n - c.digits()));
    return log10_ratio(m + 1.0, m);
}

double beta_n_mass(int n, double x) { return beta_n_mass(n, Decimal::from_double(x, n)); }

Atoms atoms_of(const Strategy& s, std::uint64_t grid_cap) {
    return std::visit(
        overloaded{
            [](const strategy::PurePoint& p) { return Atoms{{p.x}, {1.0}}; },
            [](const strategy::Discrete& d) { return Atoms{d.points, d.masses}; },
            [&](const strategy::UniformDigits& u) {
                Atoms a;
                const auto grid = support_grid(u.n, grid_cap);
                const double mass = 1.0 / static_cast<double>(grid.size());
                a.points.reserve(grid.size());
                for (auto m : grid) a.points.push_back(Decimal::from_scaled(m, u.n));
                a.masses.assign(grid.size(), mass);
                return a;
            },
            [&](const strategy::BetaN& b) {
                Atoms a;
                const auto grid = support_grid(b.n, grid_cap);
                a.points.reserve(grid.size());
                a.masses.reserve(grid.size());
                for (auto m : grid) {
                    a.points.push_back(Decimal::from_scaled(m, b.n));
                    const auto md = static_cast<double>(m);
                    a.masses.push_back(log10_ratio(md + 1.0, md));
                }
                return a;
            },
            [](const auto&) -> Atoms {
                throw ValidationError("continuous strategy has no finite support");
            },
        },
        s.variant());
}

double cdf(const Strategy& s, double x) {
    if (!(x >= 1.0 && x <= 10.0)) throw ValidationError("cdf: x must lie in [1,10]");
    return std::visit(
        overloaded{
            [&](const strategy::PurePoint& p) { return p.x.to_double() <= x ? 1.0 : 0.0; },
            [&](const strategy::Discrete& d) {
                long double total = 0.0L;
                for (std::size_t i = 0; i < d.points.size(); ++i) {
                    if (d.points[i].to_double() <= x) total += d.masses[i];
                }
                return static_cast<double>(std::min(total, 1.0L));
            },
            [&](const strategy::Benford&) { return std::log10(x); },
            [&](const strategy::UniformLog&) { return std::log10(x); },
            [&](const strategy::UniformMantissa&) { return (x - 1.0) / 9.0; },
            [&](const strategy::UniformDigits& u) {
                const double lo = grid_scale(u.n);
                const double m = static_cast<double>(grid_floor(u.n, x));
                return std::min(1.0, (m - lo + 1.0) / (9.0 * lo));
            },
            [&](const strategy::BetaN& b) {
                // Masses telescope: F_n(x) = log10(g + 10^-(n-1)) for the
                // largest grid point g <= x.
                const double m = static_cast<double>(grid_floor(b.n, x));
                return std::min(1.0, log10_ratio(m + 1.0, grid_scale(b.n)));
            },
        },
        s.variant());
}

Decimal beta_n_from_uniform(int n, double a) {
    check_n(n);
    if (!(a >= 0.0 && a < 1.0)) throw ValidationError("beta_n draw: a must lie in [0,1)");
    const auto lo = static_cast<std::uint64_t>(pow10_u128(n - 1));
    const long double v = std::pow(10.0L, static_cast<long double>(a) + (n - 1));
    auto m = static_cast<std::uint64_t>(std::floor(v));
    m = std::clamp<std::uint64_t>(m, lo, 10 * lo - 1);
    return Decimal::from_scaled(m, n);
}

double sample(const Strategy& s, RngStream& rng) {
    const auto top = std::nextafter(10.0, 0.0);
    if (s.is_benford()) return std::min(std::pow(10.0, rng.uniform()), top);
    if (std::holds_alternative<strategy::UniformMantissa>(s.variant())) {
        return std::min(1.0 + 9.0 * rng.uniform(), top);
    }
    return draw(s, rng).to_double();
}

Decimal draw(const Strategy& s, RngStream& rng, int resolution) {
    const auto continuous = [&](double x) {
        return Decimal::truncate(std::clamp(x, 1.0, std::nextafter(10.0, 0.0)), resolution);
    };
    return std::visit(
        overloaded{
            [&](const strategy::PurePoint& p) { return p.x; },
            [&](const strategy::Discrete& d) {
                const double u = rng.uniform();
                long double acc = 0.0L;
                for (std::size_t i = 0; i < d.points.size(); ++i) {
                    acc += d.masses[i];
                    if (u < acc) return d.points[i];
                }
                // Rounding left u above the accumulated total; take the last
                // point carrying mass.
                for (std::size_t i = d.points.size(); i-- > 0;) {
                    if (d.masses[i] > 0.0) return d.points[i];
                }
                return d.points.back();
            },
            [&](const strategy::Benford&) { return continuous(std::pow(10.0, rng.uniform())); },
            [&](const strategy::UniformLog&) { return continuous(std::pow(10.0, rng.uniform())); },
            [&](const strategy::UniformMantissa&) { return continuous(1.0 + 9.0 * rng.uniform()); },
            [&](const strategy::UniformDigits& u) {
                const auto lo = static_cast<std::uint64_t>(pow10_u128(u.n - 1));
                return Decimal::from_scaled(rng.uniform_int(lo, 10 * lo), u.n);
            },
            [&](const strategy::BetaN& b) { return beta_n_from_uniform(b.n, rng.uniform()); },
        },
        s.variant());
}

namespace {

// Position of mantissa(x*y) in the ordered key space (decade, mantissa):
// decade is 0 when x*y < 10 and 1 otherwise.
struct ProductKey {
    int decade;
    Decimal mantissa;
};

ProductKey product_key(const Decimal& x, const Decimal& y) {
    const Decimal m = multiply_mantissa(x, y);
    const int raw_digits = x.digits() + y.digits() - 1;
    return {m.digits() > raw_digits ? 1 : 0, m};
}

bool key_less(const ProductKey& k, int decade, const Decimal& t) {
    if (k.decade != decade) return k.decade < decade;
    return k.mantissa < t;
}

// Player mass on {y : mantissa(x*y) in w}, for atoms sorted increasingly.
long double winning_mass(const Decimal& x, const Atoms& player,
                         const std::vector<long double>& prefix, const ExactWinningSet& w) {
    const auto& ys = player.points;
    const auto first_at_least = [&](int decade, const Decimal& t) {
        const auto it = std::partition_point(ys.begin(), ys.end(), [&](const Decimal& y) {
            return key_less(product_key(x, y), decade, t);
        });
        return static_cast<std::size_t>(it - ys.begin());
    };
    const Decimal one = Decimal::from_scaled(1, 1);
    long double total = 0.0L;
    for (int decade = 0; decade <= 1; ++decade) {
        for (const auto& part : w.parts()) {
            const std::size_t a = first_at_least(decade, part.lo);
            const std::size_t b = part.hi_is_ten ? first_at_least(decade + 1, one)
                                                 : first_at_least(decade, part.hi);
            if (b > a) total += prefix[b] - prefix[a];
        }
    }
    return total;
}

double atomic_vs_atomic(const Atoms& casino, const Atoms& player, const ExactWinningSet& w) {
    std::vector<long double> prefix(player.masses.size() + 1, 0.0L);
    for (std::size_t i = 0; i < player.masses.size(); ++i) {
        prefix[i + 1] = prefix[i] + player.masses[i];
    }
    long double total = 0.0L;
    for (std::size_t i = 0; i < casino.points.size(); ++i) {
        if (casino.masses[i] == 0.0) continue;
        total += casino.masses[i] * winning_mass(casino.points[i], player, prefix, w);
    }
    return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

double uniform_vs_atomic(const Atoms& atoms, const IntervalUnion& w) {
    long double total = 0.0L;
    for (std::size_t i = 0; i < atoms.points.size(); ++i) {
        double len = 0.0;
        const IntervalUnion v = scale_mod_group(w, atoms.points[i].to_double());
        for (const auto& iv : v.parts()) {
            len += iv.length();
        }
        total += atoms.masses[i] * (len / 9.0);
    }
    return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

}  // namespace

double win_probability(const Strategy& casino, const Strategy& player, const IntervalUnion& w) {
    if (w.domain() != Domain::Mantissa) {
        throw ValidationError("win_probability: winning set must be in the mantissa domain");
    }
    if (casino.is_benford() || player.is_benford()) return benford_measure(w);

    const auto* uc = std::get_if<strategy::UniformDigits>(&casino.variant());
    const auto* up = std::get_if<strategy::UniformDigits>(&player.variant());
    if (uc && up && uc->n == up->n && uc->n <= 8) {
        try {
            return count_products_fast(uc->n, w).casino_probability();
        } catch (const ValidationError&) {
            // Endpoints not exact enough for integer thresholds; fall through
            // to the atom sum, which compares against shortest decimals.
        }
    }

    const bool casino_uniform = std::holds_alternative<strategy::UniformMantissa>(casino.variant());
    const bool player_uniform = std::holds_alternative<strategy::UniformMantissa>(player.variant());
    if (casino_uniform && player_uniform) return uniform_limit_value(w).probability;
    if (casino_uniform) return uniform_vs_atomic(atoms_of(player), w);
    if (player_uniform) return uniform_vs_atomic(atoms_of(casino), w);

    return atomic_vs_atomic(atoms_of(casino), atoms_of(player), ExactWinningSet(w));
}

}  // namespace multgame
