#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multgame/measure.hpp"

namespace multgame {

/// Finite 0/1 payoff matrix from the row player's (your) viewpoint:
/// a(i,j) = 1 when row i beats column j.
class GameMatrix {
public:
    GameMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries);

    static GameMatrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    /// The common line sum c when every row and column sums to c.
    std::optional<std::size_t> balanced_line_sum() const;

    nlohmann::json to_json() const;
    static GameMatrix from_json(const nlohmann::json& j);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> entries_;
};

/// Group from a Cayley table, with the axioms checked exhaustively at
/// construction.
class FiniteGroup {
public:
    static constexpr std::size_t kMaxOrder = 256;

    explicit FiniteGroup(std::vector<std::vector<std::size_t>> table,
                         std::vector<std::string> labels = {});

    static FiniteGroup cyclic(std::size_t order);
    /// Symmetries of a regular m-gon, order 2m; non-abelian for m >= 3.
    static FiniteGroup dihedral(std::size_t m);

    std::size_t order() const { return table_.size(); }
    std::size_t identity() const { return identity_; }
    std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inverse(std::size_t a) const { return inverse_[a]; }
    bool is_abelian() const;
    const std::vector<std::string>& labels() const { return labels_; }

    nlohmann::json to_json() const;
    static FiniteGroup from_json(const nlohmann::json& j);

private:
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::string> labels_;
    std::size_t identity_ = 0;
    std::vector<std::size_t> inverse_;
};

struct SolveReport {
    double value_lower = 0.0;  // guaranteed by row_strategy
    double value_upper = 1.0;  // conceded at most by col_strategy
    std::vector<double> row_strategy;
    std::vector<double> col_strategy;
    std::uint64_t iterations = 0;
    bool converged = false;

    double gap() const { return value_upper - value_lower; }
};

nlohmann::json to_json(const SolveReport& r);

/// Common value v1 = v2 of the continuous game: beta(w).
double game_value(const IntervalUnion& w);

/// Payout per unit stake making the game fair: beta(w) / (1 - beta(w)).
double fair_payout(const IntervalUnion& w);

/// V_y = {x : mantissa(x*y) in w}.
IntervalUnion v_y_set(const IntervalUnion& w, double y);

/// beta_n(S) for a mantissa set, by telescoping the masses of the X_n grid
/// points inside each part.
double beta_n_measure(int n, const IntervalUnion& s);

/// |beta_n(V_y) - beta(V_y)|.
double beta_n_gap(int n, const IntervalUnion& w, double y);

/// Conservative bound on beta_n_gap: 4 * 10^-(n-1).
double beta_n_gap_bound(int n);

/// c/n for a square matrix whose rows and columns all sum to c.
double balanced_matrix_value(const GameMatrix& m);

enum class SolveMethod {
    // Regret matching+ with alternating updates and linearly weighted
    // averages. Converges far faster than classic fictitious play.
    RegretMatchingPlus,
    // Classic simultaneous fictitious play (Brown-Robinson).
    FictitiousPlay,
};

struct FictitiousPlayOptions {
    double tol = 1e-4;
    std::uint64_t max_iter = 1'000'000;
    SolveMethod method = SolveMethod::RegretMatchingPlus;
};

/// Iterative best-response dynamics on a 0/1 matrix game; the row player
/// maximizes. Bounds are the best guarantees of any averaged strategy seen so
/// far, so value_lower <= value <= value_upper holds at every iteration.
SolveReport fictitious_play(const GameMatrix& m, const FictitiousPlayOptions& opts = {});

struct GroupValueReport {
    double value = 0.0;
    bool certified = false;
    /// Casino wins of the uniform casino strategy against each pure player
    /// element, and of each pure casino element against the uniform player.
    std::vector<std::size_t> wins_vs_pure_player;
    std::vector<std::size_t> wins_vs_pure_casino;
};

nlohmann::json to_json(const GroupValueReport& r);

/// |w| / |G|, certified by checking every pure strategy on both sides.
GroupValueReport finite_group_value(const FiniteGroup& g, const std::vector<std::size_t>& w);

/// Rows are the player's elements y_i, columns the casino's x_j; a(i,j) = 1 iff
/// the product x_j * y_i (casino on the left) is outside w.
GameMatrix build_game_matrix(const FiniteGroup& g, const std::vector<std::size_t>& w);

}  // namespace multgame
