#include "multgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace multgame {

// ---------------------------------------------------------------------------
// GameMatrix

GameMatrix::GameMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("game matrix must be non-empty");
    if (entries_.size() != rows_ * cols_) {
        throw ValidationError("game matrix entry count does not match its shape");
    }
    for (auto e : entries_) {
        if (e > 1) throw ValidationError("game matrix entries must be 0 or 1");
    }
}

GameMatrix GameMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty() || rows.front().empty()) throw ValidationError("game matrix must be non-empty");
    const std::size_t cols = rows.front().size();
    std::vector<std::uint8_t> entries;
    entries.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ValidationError("game matrix rows must have equal length");
        for (int v : r) {
            if (v != 0 && v != 1) throw ValidationError("game matrix entries must be 0 or 1");
            entries.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return GameMatrix(rows.size(), cols, std::move(entries));
}

std::optional<std::size_t> GameMatrix::balanced_line_sum() const {
    if (rows_ != cols_) return std::nullopt;
    std::optional<std::size_t> c;
    for (std::size_t i = 0; i < rows_; ++i) {
        std::size_t row = 0, col = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            row += at(i, j);
            col += at(j, i);
        }
        if (!c) c = row;
        if (row != *c || col != *c) return std::nullopt;
    }
    return c;
}

nlohmann::json GameMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < rows_; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t j = 0; j < cols_; ++j) r.push_back(at(i, j));
        rows.push_back(r);
    }
    return {{"rows", rows}};
}

GameMatrix GameMatrix::from_json(const nlohmann::json& j) {
    try {
        const auto& rows = j.is_array() ? j : j.at("rows");
        return from_rows(rows.get<std::vector<std::vector<int>>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed game matrix: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels)
    : table_(std::move(table)), labels_(std::move(labels)) {
    const std::size_t n = table_.size();
    if (n == 0) throw ValidationError("group must have at least one element");
    if (n > kMaxOrder) {
        throw ValidationError("group order " + std::to_string(n) + " exceeds the cap of " +
                              std::to_string(kMaxOrder));
    }
    for (const auto& row : table_) {
        if (row.size() != n) throw ValidationError("Cayley table must be square");
        for (auto v : row) {
            if (v >= n) throw ValidationError("Cayley table entry out of range");
        }
    }
    if (labels_.empty()) {
        for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
    } else if (labels_.size() != n) {
        throw ValidationError("group labels must match the order");
    }

    bool found = false;
    for (std::size_t e = 0; e < n && !found; ++e) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
        if (ok) {
            identity_ = e;
            found = true;
        }
    }
    if (!found) throw ValidationError("Cayley table has no identity element");

    inverse_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (table_[a][b] == identity_ && table_[b][a] == identity_) {
                inverse_[a] = b;
                break;
            }
        }
        if (inverse_[a] == n) {
            throw ValidationError("element " + labels_[a] + " has no inverse");
        }
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t ab = table_[a][b];
            for (std::size_t c = 0; c < n; ++c) {
                if (table_[ab][c] != table_[a][table_[b][c]]) {
                    throw ValidationError("Cayley table is not associative at (" + labels_[a] +
                                          "," + labels_[b] + "," + labels_[c] + ")");
                }
            }
        }
    }
}

FiniteGroup FiniteGroup::cyclic(std::size_t order) {
    if (order == 0) throw ValidationError("cyclic group order must be positive");
    std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
    for (std::size_t a = 0; a < order; ++a) {
        for (std::size_t b = 0; b < order; ++b) t[a][b] = (a + b) % order;
    }
    return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::dihedral(std::size_t m) {
    if (m == 0) throw ValidationError("dihedral group needs m >= 1");
    // Element (s, k) = s-fold reflection then rotation by k, indexed s*m + k.
    const std::size_t n = 2 * m;
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    std::vector<std::string> labels(n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t sa = a / m, ka = a % m;
        labels[a] = (sa ? "s" : "r") + std::to_string(ka);
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t sb = b / m, kb = b % m;
            // r^ka s^sa * r^kb s^sb = r^(ka + (-1)^sa kb) s^(sa xor sb)
            const std::size_t k = sa ? (ka + m - kb) % m : (ka + kb) % m;
            t[a][b] = (sa ^ sb) * m + k;
        }
    }
    return FiniteGroup(std::move(t), std::move(labels));
}

bool FiniteGroup::is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a) {
        for (std::size_t b = a + 1; b < order(); ++b) {
            if (table_[a][b] != table_[b][a]) return false;
        }
    }
    return true;
}

nlohmann::json FiniteGroup::to_json() const {
    return {{"order", order()}, {"table", table_}, {"labels", labels_}};
}

FiniteGroup FiniteGroup::from_json(const nlohmann::json& j) {
    try {
        auto table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
        if (j.contains("order") && j.at("order").get<std::size_t>() != table.size()) {
            throw ValidationError("group order does not match the Cayley table");
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        return FiniteGroup(std::move(table), std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed group: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Continuous game

double game_value(const IntervalUnion& w) { return benford_measure(w); }

double fair_payout(const IntervalUnion& w) {
    const double b = benford_measure(w);
    if (b >= 1.0 - kTolerance) {
        throw ValidationError("fair payout undefined: the casino wins with probability 1");
    }
    return b / (1.0 - b);
}

IntervalUnion v_y_set(const IntervalUnion& w, double y) { return scale_mod_group(w, y); }

namespace {

// Smallest grid index m with m / scale >= x, snapping x*scale onto an integer
// when floating-point noise leaves it a hair off.
double grid_ceil(double x, double scale) {
    const double v = x * scale;
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return r;
    return std::ceil(v);
}

}  // namespace

double beta_n_measure(int n, const IntervalUnion& s) {
    if (s.domain() != Domain::Mantissa) {
        throw ValidationError("beta_n_measure: expected a mantissa-domain set");
    }
    if (n < 1 || n > 15) throw ValidationError("beta_n_measure: n must be in 1..15");
    const double scale = std::pow(10.0, n - 1);
    double total = 0.0;
    for (const auto& iv : s.parts()) {
        // Masses of grid points in [lo, hi) telescope to log10(m_hi / m_lo).
        const double m_lo = grid_ceil(iv.lo, scale);
        const double m_hi = iv.hi >= 10.0 ? 10.0 * scale : grid_ceil(iv.hi, scale);
        if (m_hi > m_lo) total += std::log10(m_hi) - std::log10(m_lo);
    }
    return std::clamp(total, 0.0, 1.0);
}

double beta_n_gap(int n, const IntervalUnion& w, double y) {
    const IntervalUnion v = v_y_set(w, y);
    return std::abs(beta_n_measure(n, v) - benford_measure(v));
}

double beta_n_gap_bound(int n) { return 4.0 * std::pow(10.0, -(n - 1)); }

// ---------------------------------------------------------------------------
// Matrix games

double balanced_matrix_value(const GameMatrix& m) {
    const auto c = m.balanced_line_sum();
    if (!c) {
        throw ValidationError("matrix is not balanced (rows and columns must share one sum); "
                              "use fictitious play instead");
    }
    return static_cast<double>(*c) / static_cast<double>(m.rows());
}

nlohmann::json to_json(const SolveReport& r) {
    return {{"value_lower", r.value_lower}, {"value_upper", r.value_upper},
            {"row_strategy", r.row_strategy}, {"col_strategy", r.col_strategy},
            {"iterations", r.iterations},     {"converged", r.converged}};
}

namespace {

SolveReport brown_robinson(const GameMatrix& m, const FictitiousPlayOptions& opts) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<std::uint64_t> row_count(rows, 0), col_count(cols, 0);
    // row_payoff[i]: total payoff of row i against the column history.
    // col_loss[j]:   total payoff conceded by column j against the row history.
    std::vector<std::uint64_t> row_payoff(rows, 0), col_loss(cols, 0);

    SolveReport rep;
    rep.value_lower = -1.0;
    rep.value_upper = 2.0;
    const auto normalized = [](const std::vector<std::uint64_t>& counts, std::uint64_t t) {
        std::vector<double> p(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) {
            p[k] = static_cast<double>(counts[k]) / static_cast<double>(t);
        }
        return p;
    };

    std::size_t i = 0, j = 0;
    for (std::uint64_t t = 1; t <= opts.max_iter; ++t) {
        ++row_count[i];
        ++col_count[j];
        for (std::size_t r = 0; r < rows; ++r) row_payoff[r] += m.at(r, j);
        for (std::size_t c = 0; c < cols; ++c) col_loss[c] += m.at(i, c);

        // Best responses; lowest index wins ties.
        const auto best_row = std::max_element(row_payoff.begin(), row_payoff.end());
        const auto best_col = std::min_element(col_loss.begin(), col_loss.end());
        const double lower = static_cast<double>(*best_col) / static_cast<double>(t);
        const double upper = static_cast<double>(*best_row) / static_cast<double>(t);
        if (lower > rep.value_lower) {
            rep.value_lower = lower;
            rep.row_strategy = normalized(row_count, t);
        }
        if (upper < rep.value_upper) {
            rep.value_upper = upper;
            rep.col_strategy = normalized(col_count, t);
        }
        rep.iterations = t;
        if (rep.value_upper - rep.value_lower <= opts.tol) {
            rep.converged = true;
            break;
        }
        i = static_cast<std::size_t>(best_row - row_payoff.begin());
        j = static_cast<std::size_t>(best_col - col_loss.begin());
    }
    return rep;
}

void normalize_positive(const std::vector<double>& q, std::vector<double>& out) {
    double z = 0.0;
    for (double v : q) z += v;
    for (std::size_t k = 0; k < q.size(); ++k) {
        out[k] = z > 0.0 ? q[k] / z : 1.0 / static_cast<double>(q.size());
    }
}

SolveReport regret_matching_plus(const GameMatrix& m, const FictitiousPlayOptions& opts) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<double> row_regret(rows, 0.0), col_regret(cols, 0.0);
    std::vector<double> x(rows, 1.0 / static_cast<double>(rows));
    std::vector<double> y(cols, 1.0 / static_cast<double>(cols));
    std::vector<double> x_sum(rows, 0.0), y_sum(cols, 0.0);
    std::vector<double> u(rows), v(cols), x_avg(rows), y_avg(cols);

    SolveReport rep;
    rep.value_lower = -1.0;
    rep.value_upper = 2.0;
    for (std::uint64_t t = 1; t <= opts.max_iter; ++t) {
        // Row player moves against the current column mix, then the column
        // player answers the updated row mix.
        double ev = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            u[r] = 0.0;
            for (std::size_t c = 0; c < cols; ++c) u[r] += m.at(r, c) * y[c];
            ev += x[r] * u[r];
        }
        for (std::size_t r = 0; r < rows; ++r) row_regret[r] = std::max(0.0, row_regret[r] + u[r] - ev);
        normalize_positive(row_regret, x);

        ev = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            v[c] = 0.0;
            for (std::size_t r = 0; r < rows; ++r) v[c] += m.at(r, c) * x[r];
            ev += y[c] * v[c];
        }
        for (std::size_t c = 0; c < cols; ++c) col_regret[c] = std::max(0.0, col_regret[c] + ev - v[c]);
        normalize_positive(col_regret, y);

        const auto w = static_cast<double>(t);
        for (std::size_t r = 0; r < rows; ++r) x_sum[r] += w * x[r];
        for (std::size_t c = 0; c < cols; ++c) y_sum[c] += w * y[c];
        normalize_positive(x_sum, x_avg);
        normalize_positive(y_sum, y_avg);

        double lower = 2.0, upper = -1.0;
        for (std::size_t c = 0; c < cols; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < rows; ++r) s += m.at(r, c) * x_avg[r];
            lower = std::min(lower, s);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < cols; ++c) s += m.at(r, c) * y_avg[c];
            upper = std::max(upper, s);
        }
        if (lower > rep.value_lower) {
            rep.value_lower = lower;
            rep.row_strategy = x_avg;
        }
        if (upper < rep.value_upper) {
            rep.value_upper = upper;
            rep.col_strategy = y_avg;
        }
        rep.iterations = t;
        if (rep.value_upper - rep.value_lower <= opts.tol) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

}  // namespace

SolveReport fictitious_play(const GameMatrix& m, const FictitiousPlayOptions& opts) {
    if (!(opts.tol >= 0.0)) throw ValidationError("solver tolerance must be non-negative");
    if (opts.max_iter == 0) throw ValidationError("solver needs at least one iteration");
    return opts.method == SolveMethod::FictitiousPlay ? brown_robinson(m, opts)
                                                      : regret_matching_plus(m, opts);
}

// ---------------------------------------------------------------------------
// Finite groups

namespace {

std::vector<bool> membership(const FiniteGroup& g, const std::vector<std::size_t>& w) {
    std::vector<bool> in(g.order(), false);
    for (auto e : w) {
        if (e >= g.order()) {
            throw ValidationError("winning set element " + std::to_string(e) +
                                  " is not a group element");
        }
        if (in[e]) throw ValidationError("winning set lists element " + std::to_string(e) + " twice");
        in[e] = true;
    }
    return in;
}

}  // namespace

nlohmann::json to_json(const GroupValueReport& r) {
    return {{"value", r.value},
            {"certified", r.certified},
            {"wins_vs_pure_player", r.wins_vs_pure_player},
            {"wins_vs_pure_casino", r.wins_vs_pure_casino}};
}

GroupValueReport finite_group_value(const FiniteGroup& g, const std::vector<std::size_t>& w) {
    const auto in = membership(g, w);
    const std::size_t n = g.order();
    GroupValueReport rep;
    rep.value = static_cast<double>(w.size()) / static_cast<double>(n);
    rep.wins_vs_pure_player.assign(n, 0);
    rep.wins_vs_pure_casino.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (in[g.multiply(x, y)]) {
                ++rep.wins_vs_pure_player[y];
                ++rep.wins_vs_pure_casino[x];
            }
        }
    }
    const auto all_equal = [&](const std::vector<std::size_t>& v) {
        return std::all_of(v.begin(), v.end(), [&](std::size_t c) { return c == w.size(); });
    };
    rep.certified = all_equal(rep.wins_vs_pure_player) && all_equal(rep.wins_vs_pure_casino);
    return rep;
}

GameMatrix build_game_matrix(const FiniteGroup& g, const std::vector<std::size_t>& w) {
    const auto in = membership(g, w);
    const std::size_t n = g.order();
    std::vector<std::uint8_t> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = in[g.multiply(j, i)] ? 0 : 1;
    }
    return GameMatrix(n, n, std::move(entries));
}

}  // namespace multgame
