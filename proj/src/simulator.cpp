#include "multgame/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

namespace multgame {

Cents parse_cents(const std::string& text) {
    const auto bad = [&] { return ValidationError("'" + text + "' is not a currency amount"); };
    if (text.empty()) throw bad();
    std::size_t pos = 0;
    Cents whole = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = whole * 10 + (text[pos++] - '0');
        any = true;
        if (whole > 1'000'000'000'000LL) throw bad();
    }
    Cents frac = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int places = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (++places > 2) throw ValidationError("'" + text + "' has more than two decimal places");
            frac = frac * 10 + (text[pos++] - '0');
            any = true;
        }
        if (places == 1) frac *= 10;
    }
    if (!any || pos != text.size()) throw bad();
    return whole * 100 + frac;
}

std::string format_cents(Cents c) {
    const bool neg = c < 0;
    const Cents a = neg ? -c : c;
    std::string s = std::to_string(a / 100);
    const Cents frac = a % 100;
    if (frac != 0) {
        s += '.';
        s += static_cast<char>('0' + frac / 10);
        if (frac % 10 != 0) s += static_cast<char>('0' + frac % 10);
    }
    return neg ? "-" + s : s;
}

PayoutSchedule PayoutSchedule::make(Cents stake, Cents win_return) {
    if (stake <= 0 || win_return <= 0) {
        throw ValidationError("payout stake and win return must both be positive");
    }
    return {stake, win_return};
}

PayoutSchedule PayoutSchedule::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("payout '" + text + "' must look like STAKE:RETURN");
    }
    return make(parse_cents(text.substr(0, colon)), parse_cents(text.substr(colon + 1)));
}

nlohmann::json PayoutSchedule::to_json() const {
    return {{"stake", static_cast<double>(stake) / 100.0},
            {"win_return", static_cast<double>(win_return) / 100.0}};
}

PayoutSchedule PayoutSchedule::from_json(const nlohmann::json& j) {
    try {
        const auto amount = [](const nlohmann::json& v) {
            if (v.is_string()) return parse_cents(v.get<std::string>());
            const double d = v.get<double>();
            const double cents = std::round(d * 100.0);
            if (!std::isfinite(d) || std::abs(d * 100.0 - cents) > 1e-6) {
                throw ValidationError("currency amounts must have at most two decimal places");
            }
            return static_cast<Cents>(cents);
        };
        if (j.is_string()) return parse(j.get<std::string>());
        return make(amount(j.at("stake")), amount(j.at("win_return")));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed payout: ") + e.what());
    }
}

Adjudication adjudicate(const Decimal& casino_number, const Decimal& player_number,
                        const ExactWinningSet& w) {
    const Decimal m = multiply_mantissa(casino_number, player_number);
    return {m, m.leading_digit(), w.contains(m)};
}

Cents settle(const PayoutSchedule& payout, bool casino_won) {
    return casino_won ? -payout.stake : payout.win_return;
}

nlohmann::json RoundRecord::to_json() const {
    return {{"casino_number", casino_number.to_string()},
            {"player_number", player_number.to_string()},
            {"product_mantissa", product_mantissa.to_string()},
            {"leading_digit", leading_digit},
            {"casino_won", casino_won},
            {"settlement", static_cast<double>(settlement) / 100.0},
            {"bankroll_after", static_cast<double>(bankroll_after) / 100.0}};
}

RoundRecord play_round(const Strategy& casino, const Decimal& player_number,
                       const ExactWinningSet& w, RngStream& rng, const PayoutSchedule& payout,
                       Cents bankroll_before, int resolution) {
    RoundRecord r;
    r.casino_number = draw(casino, rng, resolution);
    r.player_number = player_number;
    const Adjudication a = adjudicate(r.casino_number, player_number, w);
    r.product_mantissa = a.product_mantissa;
    r.leading_digit = a.leading_digit;
    r.casino_won = a.casino_won;
    r.settlement = settle(payout, a.casino_won);
    r.bankroll_after = bankroll_before + r.settlement;
    return r;
}

nlohmann::json SessionStats::to_json(bool include_trajectory) const {
    nlohmann::json j{{"rounds", rounds},
                     {"casino_win_count", casino_win_count},
                     {"casino_win_rate", casino_win_rate()},
                     {"profit", static_cast<double>(profit) / 100.0}};
    if (include_trajectory) {
        nlohmann::json traj = nlohmann::json::array();
        for (auto b : bankroll) traj.push_back(static_cast<double>(b) / 100.0);
        j["bankroll"] = traj;
    }
    return j;
}

SessionStats simulate(std::uint64_t rounds, const Strategy& casino, const Strategy& player,
                      const IntervalUnion& w, const PayoutSchedule& payout, std::uint64_t seed,
                      const SimulateOptions& opts, std::uint64_t session) {
    if (rounds == 0) throw ValidationError("simulate: rounds must be at least 1");
    const ExactWinningSet exact(w);
    RngStream casino_rng(seed, 2 * session);
    RngStream player_rng(seed, 2 * session + 1);

    SessionStats stats;
    if (opts.keep_trajectory) stats.bankroll.reserve(rounds);
    for (std::uint64_t k = 0; k < rounds; ++k) {
        const Decimal y = draw(player, player_rng, opts.resolution);
        const RoundRecord r =
            play_round(casino, y, exact, casino_rng, payout, stats.profit, opts.resolution);
        ++stats.rounds;
        if (r.casino_won) ++stats.casino_win_count;
        stats.profit = r.bankroll_after;
        if (opts.keep_trajectory) stats.bankroll.push_back(r.bankroll_after);
        if (opts.keep_records) stats.records.push_back(r);
    }
    return stats;
}

std::vector<Cents> simulate_sessions(std::uint64_t sessions, std::uint64_t rounds,
                                     const Strategy& casino, const Strategy& player,
                                     const IntervalUnion& w, const PayoutSchedule& payout,
                                     std::uint64_t seed, unsigned threads) {
    std::vector<Cents> profits(sessions, 0);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(sessions, 1)));
    const SimulateOptions opts{false, false, kDefaultResolution};
    const auto work = [&](unsigned t) {
        for (std::uint64_t s = t; s < sessions; s += threads) {
            profits[s] = simulate(rounds, casino, player, w, payout, seed, opts, s).profit;
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return profits;
}

double expected_profit(const PayoutSchedule& payout, double player_win_prob) {
    if (!(player_win_prob >= 0.0 && player_win_prob <= 1.0)) {
        throw ValidationError("win probability must lie in [0,1]");
    }
    const double stake = static_cast<double>(payout.stake) / 100.0;
    const double ret = static_cast<double>(payout.win_return) / 100.0;
    return ret * player_win_prob - stake * (1.0 - player_win_prob);
}

void write_trajectory_csv(std::ostream& os, const SessionStats& stats) {
    os << "round,casino_number,player_number,digit,won,bankroll\n";
    for (std::size_t k = 0; k < stats.records.size(); ++k) {
        const auto& r = stats.records[k];
        os << (k + 1) << ',' << r.casino_number.to_string() << ',' << r.player_number.to_string()
           << ',' << r.leading_digit << ',' << (r.casino_won ? "casino" : "player") << ','
           << format_cents(r.bankroll_after) << '\n';
    }
}

}  // namespace multgame
