#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "multgame/strategies.hpp"
#include "oracles.hpp"

using namespace multgame;

namespace {

const IntervalUnion kLow = canonicalize({{1, 4}}, Domain::Mantissa);
const IntervalUnion kPrime = canonicalize({{2, 4}, {5, 6}, {7, 8}}, Domain::Mantissa);
const double kLog4 = std::log10(4.0);

Decimal dec(const char* s) { return Decimal::parse(s); }

// Casino win probability of two discrete strategies by enumerating every pair
// and inspecting the digit string of the full integer product.
double discrete_oracle(const Atoms& c, const Atoms& p, const std::set<int>& digits) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (std::size_t j = 0; j < p.points.size(); ++j) {
            const auto prod = oracle::multiply_strings(oracle::digits_of(c.points[i].to_string()),
                                                       oracle::digits_of(p.points[j].to_string()));
            if (digits.count(prod[0] - '0')) total += c.masses[i] * p.masses[j];
        }
    }
    return total;
}

Strategy random_discrete(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> digits(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::map<Decimal, double> pts;
    const int k = size(gen);
    while (static_cast<int>(pts.size()) < k) {
        pts[Decimal::truncate(1.0 + 9.0 * u(gen), digits(gen))] = u(gen) + 0.01;
    }
    std::vector<Decimal> points;
    std::vector<double> masses;
    double sum = 0.0;
    for (const auto& [p, m] : pts) sum += m;
    for (const auto& [p, m] : pts) {
        points.push_back(p);
        masses.push_back(m / sum);
    }
    // Force the total to exactly 1 within rounding.
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < masses.size(); ++i) head += masses[i];
    masses.back() = 1.0 - head;
    return Strategy::discrete(points, masses);
}

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
    RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    bool differs_c = false, differs_d = false;
    for (int k = 0; k < 100; ++k) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_c |= x != c.next_u64();
        differs_d |= x != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);

    RngStream r(1, 2);
    std::array<int, 7> hist{};
    for (int k = 0; k < 70'000; ++k) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const auto v = r.uniform_int(3, 10);
        REQUIRE(v >= 3);
        REQUIRE(v < 10);
        ++hist[v - 3];
    }
    for (int h : hist) CHECK(std::abs(h - 10'000) < 400);
}

TEST_CASE("support grid") {
    const auto g1 = support_grid(1);
    CHECK(g1.size() == 9);
    CHECK(g1.front() == 1);
    CHECK(g1.back() == 9);
    const auto g2 = support_grid(2);
    CHECK(g2.size() == 90);
    CHECK(g2.front() == 10);
    CHECK(g2.back() == 99);
    CHECK_THROWS_AS(support_grid(8), ValidationError);
    CHECK_THROWS_AS(support_grid(0), ValidationError);
}

TEST_CASE("beta_n point masses") {
    CHECK(beta_n_mass(1, 1.0) == doctest::Approx(std::log10(2.0)).epsilon(1e-14));
    CHECK(beta_n_mass(1, 1.0) == doctest::Approx(0.3010300).epsilon(1e-7));
    CHECK(beta_n_mass(1, 9.0) == doctest::Approx(0.0457575).epsilon(1e-6));
    CHECK(beta_n_mass(3, dec("2.5")) == doctest::Approx(std::log10(2.51 / 2.5)).epsilon(1e-12));
    CHECK_THROWS_AS(beta_n_mass(1, 2.5), ValidationError);
    for (int n = 1; n <= 5; ++n) {
        const auto a = atoms_of(Strategy::beta_n(n));
        long double total = 0.0L;
        for (double m : a.masses) total += m;
        CHECK(std::abs(static_cast<double>(total) - 1.0) < 1e-12);
    }
}

TEST_CASE("cdf") {
    CHECK(cdf(Strategy::benford(), 4.0) == doctest::Approx(kLog4).epsilon(1e-15));
    CHECK(cdf(Strategy::uniform_log(), 4.0) == doctest::Approx(kLog4).epsilon(1e-15));
    CHECK(cdf(Strategy::pure(3.0, 1), 2.0) == 0.0);
    CHECK(cdf(Strategy::pure(3.0, 1), 5.0) == 1.0);
    CHECK(cdf(Strategy::uniform_mantissa(), 5.5) == doctest::Approx(0.5));
    CHECK(cdf(Strategy::uniform_digits(1), 3.5) == doctest::Approx(3.0 / 9.0));
    for (int n = 1; n <= 6; ++n) {
        const double one_plus = 1.0 + 1e-9;
        CHECK(cdf(Strategy::beta_n(n), one_plus) ==
              doctest::Approx(std::log10(1.0 + std::pow(10.0, -(n - 1)))).epsilon(1e-12));
        CHECK(cdf(Strategy::beta_n(n), 10.0) == doctest::Approx(1.0));
    }
    // Direct mass sum agrees with the telescoped form.
    const auto a = atoms_of(Strategy::beta_n(3));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.points.size(); i += 37) {
        acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += a.masses[k];
        CHECK(cdf(Strategy::beta_n(3), a.points[i].to_double()) == doctest::Approx(acc).epsilon(1e-12));
    }
    // Grid cdf bound: |F_n - F| <= log10(1 + 10^-(n-1)) everywhere.
    for (int n = 1; n <= 5; ++n) {
        const double bound = std::log10(1.0 + std::pow(10.0, -(n - 1)));
        double worst = 0.0;
        for (int k = 0; k <= 20'000; ++k) {
            const double x = 1.0 + 9.0 * k / 20'000.0;
            worst = std::max(worst, std::abs(cdf(Strategy::beta_n(n), x) - std::log10(x)));
        }
        CHECK(worst <= bound + 1e-12);
    }
    CHECK_THROWS_AS(cdf(Strategy::benford(), 0.5), ValidationError);
}

TEST_CASE("beta_n draw rule") {
    CHECK(beta_n_from_uniform(1, 0.0).to_string() == "1");
    CHECK(beta_n_from_uniform(1, 0.5).to_string() == "3");
    CHECK(beta_n_from_uniform(2, 0.5).to_string() == "3.1");
    CHECK(beta_n_from_uniform(3, std::nextafter(1.0, 0.0)).to_string() == "9.99");
    CHECK_THROWS_AS(beta_n_from_uniform(1, 1.0), ValidationError);
}

TEST_CASE("Benford sampler passes a Kolmogorov-Smirnov test on 10^6 draws") {
    RngStream rng(2026, 0);
    std::vector<double> xs(1'000'000);
    for (auto& x : xs) x = sample(Strategy::benford(), rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = std::log10(xs[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    // 1.95/sqrt(n) is the 0.1% critical value.
    CHECK(d < 1.95 / std::sqrt(n));
    CHECK(xs.front() >= 1.0);
    CHECK(xs.back() < 10.0);
}

TEST_CASE("beta_1 draws match their masses within 3 sigma") {
    RngStream rng(5, 0);
    const int draws = 200'000;
    std::array<int, 10> hist{};
    for (int k = 0; k < draws; ++k) ++hist[draw(Strategy::beta_n(1), rng).leading_digit()];
    for (int d = 1; d <= 9; ++d) {
        const double p = std::log10((d + 1.0) / d);
        const double sigma = std::sqrt(draws * p * (1 - p));
        CHECK(std::abs(hist[d] - draws * p) < 3 * sigma);
    }
}

TEST_CASE("draws are exact decimals on the expected grids") {
    RngStream rng(8, 3);
    for (int k = 0; k < 1000; ++k) {
        const auto u = draw(Strategy::uniform_digits(3), rng);
        CHECK(u.digits() == 3);
        const auto b = draw(Strategy::benford(), rng, 12);
        CHECK(b.digits() == 12);
        CHECK(b >= dec("1"));
        const auto p = draw(Strategy::pure(dec("2.75")), rng);
        CHECK(p == dec("2.75"));
    }
    const auto s = Strategy::discrete({dec("2"), dec("5")}, {0.0, 1.0});
    for (int k = 0; k < 100; ++k) CHECK(draw(s, rng) == dec("5"));
}

TEST_CASE("win probability examples") {
    for (const char* y : {"1", "2", "3.7", "9.99", "5.5"}) {
        CHECK(win_probability(Strategy::benford(), Strategy::pure(dec(y)), kLow) ==
              doctest::Approx(kLog4).epsilon(1e-15));
        CHECK(win_probability(Strategy::pure(dec(y)), Strategy::uniform_log(), kLow) ==
              doctest::Approx(kLog4).epsilon(1e-15));
    }
    CHECK(win_probability(Strategy::pure(2.0, 1), Strategy::pure(3.0, 1), kLow) == 0.0);
    CHECK(win_probability(Strategy::pure(5.0, 1), Strategy::pure(2.0, 1), kLow) == 1.0);
    CHECK(win_probability(Strategy::uniform_digits(1), Strategy::uniform_digits(1), kLow) ==
          doctest::Approx(44.0 / 81.0).epsilon(1e-15));
    CHECK(win_probability(Strategy::uniform_digits(2), Strategy::uniform_digits(2), kLow) ==
          doctest::Approx(4616.0 / 8100.0).epsilon(1e-15));
    // Different grids go through the atom sum.
    const auto a1 = atoms_of(Strategy::uniform_digits(1));
    const auto a2 = atoms_of(Strategy::uniform_digits(2));
    CHECK(win_probability(Strategy::uniform_digits(1), Strategy::uniform_digits(2), kLow) ==
          doctest::Approx(discrete_oracle(a1, a2, {1, 2, 3})).epsilon(1e-12));
    CHECK(win_probability(Strategy::uniform_mantissa(), Strategy::uniform_mantissa(), kLow) ==
          doctest::Approx(0.57001).epsilon(1e-4));
    // Uniform mantissa against y = 2: |V_2| / 9 = (1 + 5) / 9.
    CHECK(win_probability(Strategy::uniform_mantissa(), Strategy::pure(2.0, 1), kLow) ==
          doctest::Approx(6.0 / 9.0).epsilon(1e-12));
    CHECK_THROWS_AS(win_probability(Strategy::benford(), Strategy::benford(), to_log(kLow)),
                    ValidationError);
}

TEST_CASE("property: atomic win probability matches pair enumeration and is symmetric") {
    std::mt19937_64 gen(314);
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = random_discrete(gen);
        const auto p = random_discrete(gen);
        const double exact = win_probability(c, p, kPrime);
        CHECK(exact == doctest::Approx(discrete_oracle(atoms_of(c), atoms_of(p), {2, 3, 5, 7})).epsilon(1e-12));
        CHECK(exact == doctest::Approx(win_probability(p, c, kPrime)).epsilon(1e-12));
        CHECK(win_probability(c, p, kLow) ==
              doctest::Approx(discrete_oracle(atoms_of(c), atoms_of(p), {1, 2, 3})).epsilon(1e-12));
    }
}

TEST_CASE("beta_n against every pure player is within the cdf bound of log10 4") {
    // Four boundary crossings, each off by at most the grid cdf gap.
    for (int n = 1; n <= 3; ++n) {
        const double bound = 4.0 * std::log10(1.0 + std::pow(10.0, -(n - 1)));
        const auto grid = atoms_of(Strategy::uniform_digits(n)).points;
        for (std::size_t i = 0; i < grid.size(); i += std::max<std::size_t>(1, grid.size() / 50)) {
            const double f = win_probability(Strategy::beta_n(n), Strategy::pure(grid[i]), kLow);
            CHECK(std::abs(f - kLog4) <= bound);
        }
    }
}

TEST_CASE("strategy json round trip") {
    const std::vector<Strategy> all{
        Strategy::pure(dec("2.75")),
        Strategy::discrete({dec("1.5"), dec("3"), dec("7.25")}, {0.25, 0.5, 0.25}),
        Strategy::benford(),
        Strategy::uniform_log(),
        Strategy::uniform_mantissa(),
        Strategy::uniform_digits(3),
        Strategy::beta_n(4),
    };
    for (const auto& s : all) {
        const auto j = s.to_json();
        CAPTURE(j.dump());
        CHECK(Strategy::from_json(j).to_json() == j);
        CHECK(Strategy::from_json(nlohmann::json::parse(j.dump())).type_name() == s.type_name());
    }
    CHECK(Strategy::from_json(nlohmann::json::parse(R"({"type":"pure","x":2.5})")).to_json().at("x") == "2.5");
    CHECK(Strategy::from_json(nlohmann::json::parse(R"({"type":"pure","x":2.5,"digits":3})")).to_json().at("x") == "2.5");
    for (const char* bad : {R"({"type":"pure","x":"10"})", R"({"type":"pure","x":2.55,"digits":2})",
                            R"({"type":"discrete","points":["3","2"],"masses":[0.5,0.5]})",
                            R"({"type":"discrete","points":["2","3"],"masses":[0.6,0.6]})",
                            R"({"type":"discrete","points":["2","3"],"masses":[-0.5,1.5]})",
                            R"({"type":"discrete","points":[],"masses":[]})",
                            R"({"type":"uniform_digits","n":0})", R"({"type":"beta_n"})",
                            R"({"type":"gaussian"})", R"({"x":2})", R"([1,2])"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Strategy::from_json(nlohmann::json::parse(bad)), ValidationError);
    }
    CHECK_THROWS_AS(atoms_of(Strategy::benford()), ValidationError);
}
