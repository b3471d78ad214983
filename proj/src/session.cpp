#include "multgame/session.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>
#include <openssl/rand.h>

namespace multgame {

namespace {

std::string to_hex(const unsigned char* data, std::size_t n) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(2 * n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = kHex[data[i] >> 4];
        out[2 * i + 1] = kHex[data[i] & 0xf];
    }
    return out;
}

std::uint64_t random_u64() {
    std::uint64_t v = 0;
    if (RAND_bytes(reinterpret_cast<unsigned char*>(&v), sizeof v) != 1) {
        throw std::runtime_error("RAND_bytes failed");
    }
    return v;
}

const nlohmann::json& first_of(const nlohmann::json& body, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (body.contains(k)) return body.at(k);
    }
    static const nlohmann::json kNull;
    return kNull;
}

Decimal player_number_from_json(const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("player_number")) {
        throw ValidationError("request needs a player_number");
    }
    const auto& v = body.at("player_number");
    if (v.is_string()) {
        const Decimal d = Decimal::parse(v.get<std::string>());
        if (body.contains("digits") && body.at("digits").is_number_integer() &&
            d.canonical().digits() > body.at("digits").get<int>()) {
            throw ValidationError("player_number has more digits than declared");
        }
        return d;
    }
    if (v.is_number()) {
        if (body.contains("digits")) {
            if (!body.at("digits").is_number_integer()) throw ValidationError("digits must be an integer");
            return Decimal::from_double(v.get<double>(), body.at("digits").get<int>());
        }
        return Decimal::shortest(v.get<double>());
    }
    throw ValidationError("player_number must be a decimal string or number");
}

nlohmann::json session_config_json(const SessionState& s) {
    return {{"payout", s.payout.to_json()},
            {"dealer", s.dealer.to_json()},
            {"winning_set", to_json(s.w)}};
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    return to_hex(md, len);
}

std::string commitment_digest(const Decimal& dealer_number, std::string_view nonce_hex) {
    std::string msg = dealer_number.to_string();
    msg.append(nonce_hex);
    return sha256_hex(msg);
}

std::string random_hex(std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(bytes)) != 1) {
        throw std::runtime_error("RAND_bytes failed");
    }
    return to_hex(buf.data(), bytes);
}

ApiResponse error_response(int status, std::string code, std::string message) {
    return {status, {{"code", std::move(code)}, {"message", std::move(message)}}};
}

SessionState::SessionState(std::string id_, PayoutSchedule payout_, Strategy dealer_,
                           IntervalUnion w_, std::uint64_t seed_, bool client_seeded_)
    : id(std::move(id_)),
      payout(payout_),
      dealer(std::move(dealer_)),
      w(w_),
      exact_w(w_),
      seed(seed_),
      client_seeded(client_seeded_),
      rng(seed_, 0) {}

SessionService::SessionService() : SessionService(Options{}) {}

SessionService::SessionService(Options opts) : opts_(std::move(opts)) {
    if (opts_.snapshot_dir) std::filesystem::create_directories(*opts_.snapshot_dir);
}

std::shared_ptr<SessionState> SessionService::find(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionService::session_count() const {
    std::shared_lock lock(map_mutex_);
    return sessions_.size();
}

void SessionService::append_snapshot(const SessionState& s, const nlohmann::json& event) const {
    if (!opts_.snapshot_dir) return;
    std::ofstream out(*opts_.snapshot_dir / (s.id + ".jsonl"), std::ios::app);
    out << event.dump() << '\n';
}

ApiResponse SessionService::create(const nlohmann::json& body) {
    if (!body.is_object()) return error_response(400, "invalid_request", "body must be a JSON object");
    try {
        const auto& payout_j = first_of(body, {"payout"});
        const PayoutSchedule payout =
            payout_j.is_null() ? PayoutSchedule{} : PayoutSchedule::from_json(payout_j);
        const auto& dealer_j = first_of(body, {"dealer", "strategy"});
        Strategy dealer = dealer_j.is_null() ? Strategy::benford() : Strategy::from_json(dealer_j);
        const auto& w_j = first_of(body, {"winning_set", "w"});
        const std::vector<int> default_digits{1, 2, 3};
        IntervalUnion w = w_j.is_null() ? from_leading_digits(default_digits)
                                        : interval_union_from_json(w_j);
        if (w.domain() != Domain::Mantissa) {
            throw ValidationError("winning set must be in the mantissa domain");
        }
        const auto& seed_j = first_of(body, {"seed"});
        bool client_seeded = false;
        std::uint64_t seed = 0;
        if (!seed_j.is_null()) {
            if (!seed_j.is_number_unsigned() && !seed_j.is_number_integer()) {
                throw ValidationError("seed must be a non-negative integer");
            }
            if (!seed_j.is_number_unsigned() && seed_j.get<std::int64_t>() < 0) {
                throw ValidationError("seed must be a non-negative integer");
            }
            seed = seed_j.get<std::uint64_t>();
            client_seeded = true;
        } else {
            seed = random_u64();
        }

        auto state = std::make_shared<SessionState>(random_hex(16), payout, std::move(dealer),
                                                    std::move(w), seed, client_seeded);
        {
            std::unique_lock lock(map_mutex_);
            sessions_.emplace(state->id, state);
        }
        nlohmann::json created = session_config_json(*state);
        created["event"] = "created";
        created["id"] = state->id;
        created["seed"] = seed;
        created["client_seeded"] = client_seeded;
        append_snapshot(*state, created);

        nlohmann::json out{{"session_id", state->id}, {"config", session_config_json(*state)}};
        if (client_seeded) out["seed"] = seed;
        return {201, out};
    } catch (const ValidationError& e) {
        return error_response(400, "invalid_request", e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_response(400, "invalid_request", e.what());
    }
}

ApiResponse SessionService::open_round(const std::string& id) {
    auto s = find(id);
    if (!s) return error_response(404, "not_found", "unknown session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (s->pending) {
        return error_response(409, "round_open", "a round is already open; play it first");
    }
    PendingCommitment c;
    c.dealer_number = draw(s->dealer, s->rng);
    c.nonce = random_hex(16);
    c.digest = commitment_digest(c.dealer_number, c.nonce);
    s->pending = c;
    append_snapshot(*s, {{"event", "opened"},
                         {"digest", c.digest},
                         {"nonce", c.nonce},
                         {"dealer_number", c.dealer_number.to_string()}});
    return {200, {{"commitment_digest", c.digest}, {"round", s->history.size() + 1}}};
}

ApiResponse SessionService::play(const std::string& id, const nlohmann::json& body) {
    auto s = find(id);
    if (!s) return error_response(404, "not_found", "unknown session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (!s->pending) {
        return error_response(409, "no_open_round", "no open round; call rounds/open first");
    }
    Decimal player;
    try {
        player = player_number_from_json(body);
    } catch (const ValidationError& e) {
        return error_response(422, "invalid_number", e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_response(422, "invalid_number", e.what());
    }

    const PendingCommitment c = *s->pending;
    RoundRecord r;
    r.casino_number = c.dealer_number;
    r.player_number = player;
    const Adjudication a = adjudicate(c.dealer_number, player, s->exact_w);
    r.product_mantissa = a.product_mantissa;
    r.leading_digit = a.leading_digit;
    r.casino_won = a.casino_won;
    r.settlement = settle(s->payout, a.casino_won);
    r.bankroll_after = s->bankroll + r.settlement;

    s->bankroll = r.bankroll_after;
    if (r.casino_won) ++s->casino_wins;
    s->history.push_back(r);
    s->pending.reset();
    append_snapshot(*s, {{"event", "settled"}, {"record", r.to_json()}});

    return {200,
            {{"round", s->history.size()},
             {"dealer_number", c.dealer_number.to_string()},
             {"player_number", player.to_string()},
             {"nonce", c.nonce},
             {"commitment_digest", c.digest},
             {"product_mantissa", r.product_mantissa.to_string()},
             {"leading_digit", r.leading_digit},
             {"casino_won", r.casino_won},
             {"settlement", static_cast<double>(r.settlement) / 100.0},
             {"bankroll", static_cast<double>(r.bankroll_after) / 100.0}}};
}

ApiResponse SessionService::stats(const std::string& id) const {
    auto s = find(id);
    if (!s) return error_response(404, "not_found", "unknown session '" + id + "'");
    std::lock_guard lock(s->mutex);
    const std::uint64_t rounds = s->history.size();
    nlohmann::json trajectory = nlohmann::json::array();
    nlohmann::json history = nlohmann::json::array();
    for (const auto& r : s->history) {
        trajectory.push_back(static_cast<double>(r.bankroll_after) / 100.0);
        history.push_back(r.to_json());
    }
    return {200,
            {{"session_id", s->id},
             {"rounds", rounds},
             {"casino_win_count", s->casino_wins},
             {"casino_win_rate", rounds ? static_cast<double>(s->casino_wins) / rounds : 0.0},
             {"profit", static_cast<double>(s->bankroll) / 100.0},
             {"bankroll", static_cast<double>(s->bankroll) / 100.0},
             {"trajectory", trajectory},
             {"history", history},
             {"round_open", s->pending.has_value()},
             {"config", session_config_json(*s)}}};
}

ApiResponse SessionService::config() const {
    return {200,
            {{"strategies", {"benford", "uniform_log", "uniform_mantissa", "uniform_digits",
                             "beta_n", "pure", "discrete"}},
             {"defaults",
              {{"payout", PayoutSchedule{}.to_json()},
               {"dealer", Strategy::benford().to_json()},
               {"winning_set", {{"digits", {1, 2, 3}}}}}},
             {"commitment", {{"hash", "sha256"}, {"message", "dealer_number || nonce_hex"},
                             {"nonce_bits", 128}}},
             {"rng", RngStream::generator_name()},
             {"resolution_digits", kDefaultResolution},
             {"reference_casino_win_rate", std::log10(4.0)},
             {"max_input_digits", kMaxInputDigits}}};
}

std::size_t SessionService::recover() {
    if (!opts_.snapshot_dir) return 0;
    std::size_t loaded = 0;
    for (const auto& entry : std::filesystem::directory_iterator(*opts_.snapshot_dir)) {
        if (entry.path().extension() != ".jsonl") continue;
        std::ifstream in(entry.path());
        std::string line;
        std::shared_ptr<SessionState> s;
        try {
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto ev = nlohmann::json::parse(line);
                const auto kind = ev.at("event").get<std::string>();
                if (kind == "created") {
                    s = std::make_shared<SessionState>(
                        ev.at("id").get<std::string>(), PayoutSchedule::from_json(ev.at("payout")),
                        Strategy::from_json(ev.at("dealer")),
                        interval_union_from_json(ev.at("winning_set")),
                        ev.at("seed").get<std::uint64_t>(), ev.at("client_seeded").get<bool>());
                } else if (s && kind == "opened") {
                    // Keep the dealer stream aligned with the draws already made.
                    const Decimal replayed = draw(s->dealer, s->rng);
                    PendingCommitment c{ev.at("digest").get<std::string>(),
                                        ev.at("nonce").get<std::string>(),
                                        Decimal::parse(ev.at("dealer_number").get<std::string>())};
                    if (!(replayed == c.dealer_number)) {
                        throw std::runtime_error("snapshot dealer draw does not match the seed");
                    }
                    s->pending = c;
                } else if (s && kind == "settled") {
                    const auto& rj = ev.at("record");
                    RoundRecord r;
                    r.casino_number = Decimal::parse(rj.at("casino_number").get<std::string>());
                    r.player_number = Decimal::parse(rj.at("player_number").get<std::string>());
                    const Adjudication a = adjudicate(r.casino_number, r.player_number, s->exact_w);
                    r.product_mantissa = a.product_mantissa;
                    r.leading_digit = a.leading_digit;
                    r.casino_won = a.casino_won;
                    r.settlement = settle(s->payout, a.casino_won);
                    r.bankroll_after = s->bankroll + r.settlement;
                    s->bankroll = r.bankroll_after;
                    if (r.casino_won) ++s->casino_wins;
                    s->history.push_back(r);
                    s->pending.reset();
                }
            }
        } catch (const std::exception&) {
            // Best effort: a damaged file loses that session only.
            continue;
        }
        if (s) {
            std::unique_lock lock(map_mutex_);
            sessions_[s->id] = s;
            ++loaded;
        }
    }
    return loaded;
}

}  // namespace multgame
