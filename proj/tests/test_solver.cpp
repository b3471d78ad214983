#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "multgame/solver.hpp"
#include "oracles.hpp"

using namespace multgame;

namespace {

const IntervalUnion kLow = canonicalize({{1, 4}}, Domain::Mantissa);
const IntervalUnion kPrime = canonicalize({{2, 4}, {5, 6}, {7, 8}}, Domain::Mantissa);
const double kLog4 = std::log10(4.0);

GameMatrix random_matrix(std::mt19937_64& gen, std::size_t max_dim) {
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::bernoulli_distribution bit(0.5);
    const std::size_t r = dim(gen), c = dim(gen);
    std::vector<std::uint8_t> e(r * c);
    for (auto& v : e) v = bit(gen) ? 1 : 0;
    return GameMatrix(r, c, e);
}

// Balanced matrix a_ij = [(s(i) + t(j)) mod n < c] for random permutations.
GameMatrix random_balanced(std::mt19937_64& gen, std::size_t n, std::size_t c) {
    std::vector<std::size_t> s(n), t(n);
    std::iota(s.begin(), s.end(), 0);
    std::iota(t.begin(), t.end(), 0);
    std::shuffle(s.begin(), s.end(), gen);
    std::shuffle(t.begin(), t.end(), gen);
    std::vector<std::uint8_t> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = (s[i] + t[j]) % n < c ? 1 : 0;
    }
    return GameMatrix(n, n, e);
}

// Payoff the mixed row strategy p guarantees against every column, and the
// most the mixed column strategy q concedes against every row.
double guaranteed_row(const GameMatrix& m, const std::vector<double>& p) {
    double worst = 1e9;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) v += p[i] * m.at(i, j);
        worst = std::min(worst, v);
    }
    return worst;
}

double conceded_col(const GameMatrix& m, const std::vector<double>& q) {
    double worst = -1e9;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) v += q[j] * m.at(i, j);
        worst = std::max(worst, v);
    }
    return worst;
}

void check_probability_vector(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
}

}  // namespace

TEST_CASE("game value and fair payout") {
    CHECK(std::abs(game_value(kLow) - kLog4) < 1e-12);
    CHECK(std::abs(game_value(kPrime) - 0.438203) < 1e-6);
    CHECK(game_value(canonicalize({}, Domain::Mantissa)) == 0.0);
    CHECK(std::abs(fair_payout(kLow) - 1.5129) < 1e-4);
    CHECK(fair_payout(canonicalize({{1, std::sqrt(10.0)}}, Domain::Mantissa)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fair_payout(kPrime) == doctest::Approx(0.78001).epsilon(1e-5));
    CHECK_THROWS_AS(fair_payout(full_domain(Domain::Mantissa)), ValidationError);
    CHECK_THROWS_AS(game_value(to_log(kLow)), ValidationError);
}

TEST_CASE("V_y sets") {
    CHECK(v_y_set(kLow, 1.0).approx_equal(kLow, 1e-15));
    CHECK(v_y_set(kLow, 2.0).approx_equal(canonicalize({{1, 2}, {5, 10}}, Domain::Mantissa), 1e-12));
    CHECK_THROWS_AS(v_y_set(kLow, 10.0), ValidationError);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(1.0, 10.0);
    for (int k = 0; k < 100; ++k) {
        const double y = u(gen);
        const auto v = v_y_set(kLow, y);
        CHECK(std::abs(benford_measure(v) - kLog4) < 1e-10);
        CHECK(v.size() <= kLow.size() + 1);
    }
}

TEST_CASE("beta_n measure equals the direct mass sum") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(1.0, 10.0);
    for (int n = 1; n <= 4; ++n) {
        for (int k = 0; k < 25; ++k) {
            const auto v = v_y_set(kLow, u(gen));
            CHECK(beta_n_measure(n, v) == doctest::Approx(oracle::beta_n_direct(n, v)).epsilon(1e-12));
        }
        CHECK(beta_n_measure(n, kPrime) == doctest::Approx(oracle::beta_n_direct(n, kPrime)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(beta_n_measure(0, kLow), ValidationError);
    CHECK_THROWS_AS(beta_n_measure(2, to_log(kLow)), ValidationError);
}

TEST_CASE("beta_n gap") {
    // Grid points 1, 2, 3 carry log10(4) exactly at n = 1.
    CHECK(beta_n_gap(1, kLow, 1.0) < 1e-15);
    for (int n = 1; n <= 6; ++n) CHECK(beta_n_gap(n, kLow, 1.0) < 1e-12);
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(1.0, 10.0);
    for (int k = 0; k < 200; ++k) CHECK(beta_n_gap(4, kLow, u(gen)) <= 4e-3);
    CHECK(beta_n_gap_bound(1) == 4.0);
    CHECK(beta_n_gap_bound(4) == doctest::Approx(4e-3));
}

TEST_CASE("balanced matrix value") {
    CHECK(balanced_matrix_value(GameMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}})) ==
          doctest::Approx(2.0 / 3.0));
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::vector<int>> id(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
        CHECK(balanced_matrix_value(GameMatrix::from_rows(id)) == doctest::Approx(1.0 / n));
    }
    CHECK(balanced_matrix_value(GameMatrix::from_rows(std::vector<std::vector<int>>(4, {1, 1, 1, 1}))) == 1.0);
    CHECK_THROWS_AS(balanced_matrix_value(GameMatrix::from_rows({{1, 1}, {0, 0}})), ValidationError);
    CHECK_THROWS_AS(balanced_matrix_value(GameMatrix::from_rows({{1, 0, 1}})), ValidationError);
}

TEST_CASE("game matrix validation and json") {
    CHECK_THROWS_AS(GameMatrix::from_rows({}), ValidationError);
    CHECK_THROWS_AS(GameMatrix::from_rows({{1, 0}, {1}}), ValidationError);
    CHECK_THROWS_AS(GameMatrix::from_rows({{2}}), ValidationError);
    CHECK_THROWS_AS(GameMatrix(2, 2, {1, 0, 1}), ValidationError);
    const auto m = GameMatrix::from_rows({{1, 0, 1}, {0, 1, 1}});
    const auto j = m.to_json();
    CHECK(GameMatrix::from_json(j).to_json() == j);
    CHECK(GameMatrix::from_json(nlohmann::json::parse("[[1,0,1],[0,1,1]]")).to_json() == j);
    CHECK_THROWS_AS(GameMatrix::from_json(nlohmann::json::parse(R"({"rows":"x"})")), ValidationError);
}

TEST_CASE("fictitious play small cases") {
    const auto r = fictitious_play(GameMatrix::from_rows({{1, 0}, {0, 1}}));
    CHECK(r.converged);
    CHECK(r.value_lower <= 0.5 + 1e-12);
    CHECK(r.value_upper >= 0.5 - 1e-12);
    CHECK(r.gap() <= 1e-4);
    // Saddle point at (row 0, column 1).
    const auto s = fictitious_play(GameMatrix::from_rows({{1, 0}, {1, 1}}));
    CHECK(s.value_lower >= 1.0 - 1e-4);
    CHECK(s.value_upper <= 1.0 + 1e-12);
    const auto t = fictitious_play(GameMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}), {1e-4, 1'000'000});
    CHECK(t.value_lower <= 0.5 + 1e-9);
    CHECK(t.value_upper >= 0.5 - 1e-9);
    for (auto method : {SolveMethod::RegretMatchingPlus, SolveMethod::FictitiousPlay}) {
        const auto capped = fictitious_play(GameMatrix::from_rows({{1, 0}, {1, 1}}), {0.0, 1, method});
        CHECK(capped.converged == (capped.gap() <= 0.0));
        CHECK(capped.iterations == 1);
        const auto fp = fictitious_play(GameMatrix::from_rows({{1, 0}, {0, 1}}), {1e-4, 1'000'000, method});
        CHECK(fp.converged);
        CHECK(std::abs(fp.value_lower - 0.5) <= 1e-4);
    }
    CHECK_THROWS_AS(fictitious_play(GameMatrix::from_rows({{1}}), {-1.0, 10}), ValidationError);
    CHECK_THROWS_AS(fictitious_play(GameMatrix::from_rows({{1}}), {1e-4, 0}), ValidationError);
    const auto j = to_json(r);
    CHECK(j.at("converged") == true);
    CHECK(j.at("row_strategy").size() == 2);
}

TEST_CASE("property: fictitious play bounds are certified on 100 random matrices") {
    std::mt19937_64 gen(1001);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(gen, 8);
        const auto method = trial % 2 ? SolveMethod::FictitiousPlay : SolveMethod::RegretMatchingPlus;
        const auto r = fictitious_play(m, {1e-4, 200'000, method});
        CHECK(r.value_lower <= r.value_upper + 1e-12);
        check_probability_vector(r.row_strategy);
        check_probability_vector(r.col_strategy);
        CHECK(std::abs(guaranteed_row(m, r.row_strategy) - r.value_lower) < 1e-9);
        CHECK(std::abs(conceded_col(m, r.col_strategy) - r.value_upper) < 1e-9);
        // Pure maxmin and minmax bracket the mixed bounds.
        double maxmin = 0.0, minmax = 1.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            int lo = 1;
            for (std::size_t j = 0; j < m.cols(); ++j) lo = std::min(lo, m.at(i, j));
            maxmin = std::max(maxmin, static_cast<double>(lo));
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            int hi = 0;
            for (std::size_t i = 0; i < m.rows(); ++i) hi = std::max(hi, m.at(i, j));
            minmax = std::min(minmax, static_cast<double>(hi));
        }
        CHECK(maxmin <= r.value_upper + 1e-12);
        CHECK(r.value_lower <= minmax + 1e-12);
    }
}

TEST_CASE("property: balanced matrices solve to c/n") {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = dim(gen);
        const std::size_t c = std::uniform_int_distribution<std::size_t>(0, n)(gen);
        const auto m = random_balanced(gen, n, c);
        REQUIRE(m.balanced_line_sum() == c);
        const auto r = fictitious_play(m);
        CHECK(r.converged);
        CHECK(std::abs(r.value_lower - balanced_matrix_value(m)) <= 1e-4);
        CHECK(std::abs(r.value_upper - balanced_matrix_value(m)) <= 1e-4);
    }
}

TEST_CASE("finite groups") {
    const auto c10 = FiniteGroup::cyclic(10);
    CHECK(c10.is_abelian());
    CHECK(finite_group_value(c10, {0, 1, 2, 3, 4, 5}).value == doctest::Approx(0.6));
    CHECK(finite_group_value(c10, {}).value == 0.0);
    CHECK(finite_group_value(c10, {}).certified);
    const auto c7 = FiniteGroup::cyclic(7);
    const auto r = finite_group_value(c7, {1, 4, 5});
    CHECK(r.value == doctest::Approx(3.0 / 7.0));
    CHECK(r.certified);
    CHECK(r.wins_vs_pure_player == std::vector<std::size_t>(7, 3));

    const auto d4 = FiniteGroup::dihedral(4);
    CHECK(d4.order() == 8);
    CHECK_FALSE(d4.is_abelian());
    CHECK(finite_group_value(d4, {1, 5, 6}).certified);

    CHECK_THROWS_AS(finite_group_value(c7, {7}), ValidationError);
    CHECK_THROWS_AS(finite_group_value(c7, {1, 1}), ValidationError);
    CHECK_THROWS_AS(FiniteGroup({{0, 1}, {0, 1}}), ValidationError);          // no inverse for 1
    CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 2}}), ValidationError);          // out of range
    CHECK_THROWS_AS(FiniteGroup({{1, 0}, {0, 0}}), ValidationError);          // no identity
    CHECK_THROWS_AS(FiniteGroup({{0, 1, 2}, {1, 0, 0}, {2, 0, 0}}), ValidationError);
    CHECK_THROWS_AS(FiniteGroup::cyclic(0), ValidationError);
    CHECK_THROWS_AS(FiniteGroup::cyclic(FiniteGroup::kMaxOrder + 1), ValidationError);

    const auto j = d4.to_json();
    CHECK(FiniteGroup::from_json(j).to_json() == j);
    CHECK_THROWS_AS(FiniteGroup::from_json(nlohmann::json::parse(R"({"order":3,"table":[[0]]})")), ValidationError);
}

TEST_CASE("group game matrices") {
    const auto c3 = FiniteGroup::cyclic(3);
    const auto m = build_game_matrix(c3, {c3.identity()});
    for (std::size_t i = 0; i < 3; ++i) {
        int row = 0, col = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            row += m.at(i, j);
            col += m.at(j, i);
        }
        CHECK(row == 2);
        CHECK(col == 2);
    }
    const auto all = build_game_matrix(c3, {});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(all.at(i, j) == 1);

    // Row = player y, column = casino x; the player wins when x*y is outside w.
    const auto d3 = FiniteGroup::dihedral(3);
    const std::vector<std::size_t> w{1, 3};
    const auto md = build_game_matrix(d3, w);
    for (std::size_t y = 0; y < 6; ++y)
        for (std::size_t x = 0; x < 6; ++x) {
            const auto p = d3.multiply(x, y);
            CHECK(md.at(y, x) == (p == 1 || p == 3 ? 0 : 1));
        }
}

TEST_CASE("property: group matrices are balanced with value 1 - |w|/|G|") {
    std::mt19937_64 gen(64);
    for (std::size_t order = 1; order <= 24; ++order) {
        for (const auto& g : {FiniteGroup::cyclic(order), FiniteGroup::dihedral(order)}) {
            std::vector<std::size_t> elems(g.order());
            std::iota(elems.begin(), elems.end(), 0);
            std::shuffle(elems.begin(), elems.end(), gen);
            const std::size_t k = std::uniform_int_distribution<std::size_t>(0, g.order())(gen);
            const std::vector<std::size_t> w(elems.begin(), elems.begin() + static_cast<long>(k));
            const auto m = build_game_matrix(g, w);
            // Exact: every line holds |G| - |w| ones.
            REQUIRE(m.balanced_line_sum().has_value());
            CHECK(*m.balanced_line_sum() == g.order() - k);
            CHECK(finite_group_value(g, w).certified);
        }
    }
    // Fictitious play on a group matrix recovers the player's value.
    const auto g = FiniteGroup::cyclic(12);
    const auto r = fictitious_play(build_game_matrix(g, {0, 3, 4, 9, 11}));
    CHECK(std::abs(r.value_lower - 7.0 / 12.0) <= 1e-4);
    CHECK(std::abs(r.value_upper - 7.0 / 12.0) <= 1e-4);
}
