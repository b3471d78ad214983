#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multgame/decimal.hpp"
#include "multgame/measure.hpp"
#include "multgame/rng.hpp"
#include "multgame/strategies.hpp"

namespace multgame {

/// Money in integer cents.
using Cents = std::int64_t;

Cents parse_cents(const std::string& text);
std::string format_cents(Cents c);

/// The player risks `stake` each round and gains `win_return` on a win.
struct PayoutSchedule {
    Cents stake = 10000;
    Cents win_return = 14000;

    static PayoutSchedule make(Cents stake, Cents win_return);
    /// "STAKE:RETURN" in currency units, e.g. "100:140" or "100:151.29".
    static PayoutSchedule parse(const std::string& text);

    nlohmann::json to_json() const;
    static PayoutSchedule from_json(const nlohmann::json& j);
};

/// Outcome of one product, independent of money.
struct Adjudication {
    Decimal product_mantissa;
    int leading_digit = 1;
    bool casino_won = false;
};

/// Shared rule used by the simulator, the CLI and the server.
Adjudication adjudicate(const Decimal& casino_number, const Decimal& player_number,
                        const ExactWinningSet& w);

struct RoundRecord {
    Decimal casino_number;
    Decimal player_number;
    Decimal product_mantissa;
    int leading_digit = 1;
    bool casino_won = false;
    Cents settlement = 0;
    Cents bankroll_after = 0;

    nlohmann::json to_json() const;
};

Cents settle(const PayoutSchedule& payout, bool casino_won);

/// One round: the casino draws from its strategy, the player's number is
/// given. `bankroll_before` is carried into the record.
RoundRecord play_round(const Strategy& casino, const Decimal& player_number,
                       const ExactWinningSet& w, RngStream& rng, const PayoutSchedule& payout,
                       Cents bankroll_before = 0, int resolution = kDefaultResolution);

struct SessionStats {
    std::uint64_t rounds = 0;
    std::uint64_t casino_win_count = 0;
    Cents profit = 0;
    std::vector<Cents> bankroll;  // after each round
    std::vector<RoundRecord> records;

    double casino_win_rate() const {
        return rounds ? static_cast<double>(casino_win_count) / static_cast<double>(rounds) : 0.0;
    }

    nlohmann::json to_json(bool include_trajectory = true) const;
};

struct SimulateOptions {
    bool keep_records = false;
    bool keep_trajectory = true;
    int resolution = kDefaultResolution;
};

/// Stream ids used by simulate(): the casino draws from stream 2*session and
/// the player from stream 2*session + 1.
SessionStats simulate(std::uint64_t rounds, const Strategy& casino, const Strategy& player,
                      const IntervalUnion& w, const PayoutSchedule& payout, std::uint64_t seed,
                      const SimulateOptions& opts = {}, std::uint64_t session = 0);

/// Profit of each of `sessions` independent sessions, session s using the
/// stream pair of simulate(..., session = s). Runs on `threads` workers;
/// the result does not depend on the thread count.
std::vector<Cents> simulate_sessions(std::uint64_t sessions, std::uint64_t rounds,
                                     const Strategy& casino, const Strategy& player,
                                     const IntervalUnion& w, const PayoutSchedule& payout,
                                     std::uint64_t seed, unsigned threads = 0);

/// Expected player profit per round in currency units:
/// win_return * f - stake * (1 - f), f the player's win probability.
double expected_profit(const PayoutSchedule& payout, double player_win_prob);

/// CSV trajectory: round,casino_number,player_number,digit,won,bankroll.
void write_trajectory_csv(std::ostream& os, const SessionStats& stats);

}  // namespace multgame
