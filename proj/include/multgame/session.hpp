#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "multgame/decimal.hpp"
#include "multgame/measure.hpp"
#include "multgame/rng.hpp"
#include "multgame/simulator.hpp"
#include "multgame/strategies.hpp"

namespace multgame {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Commitment to a dealer number: SHA-256 over the canonical decimal
/// rendering of the number followed by the 32-hex-digit nonce.
std::string commitment_digest(const Decimal& dealer_number, std::string_view nonce_hex);

/// `bytes` bytes from the OS CSPRNG, hex encoded.
std::string random_hex(std::size_t bytes);

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

struct PendingCommitment {
    std::string digest;
    std::string nonce;
    Decimal dealer_number;
};

/// One live table: a dealer strategy against a human, with a strict
/// open -> play state machine per round.
struct SessionState {
    std::string id;
    PayoutSchedule payout;
    Strategy dealer = Strategy::benford();
    IntervalUnion w;
    ExactWinningSet exact_w;
    std::uint64_t seed = 0;
    bool client_seeded = false;
    RngStream rng;
    Cents bankroll = 0;
    std::uint64_t casino_wins = 0;
    std::vector<RoundRecord> history;
    std::optional<PendingCommitment> pending;
    /// Serializes state-machine transitions of this session.
    mutable std::mutex mutex;

    SessionState(std::string id_, PayoutSchedule payout_, Strategy dealer_, IntervalUnion w_,
                 std::uint64_t seed_, bool client_seeded_);
};

/// Session store behind the HTTP routes. Every method returns the status
/// code and JSON body the route sends; error bodies are {code, message}.
class SessionService {
public:
    struct Options {
        /// When set, each session appends JSON lines to <dir>/<id>.jsonl.
        std::optional<std::filesystem::path> snapshot_dir;
    };

    SessionService();
    explicit SessionService(Options opts);

    ApiResponse create(const nlohmann::json& body);
    ApiResponse open_round(const std::string& id);
    ApiResponse play(const std::string& id, const nlohmann::json& body);
    ApiResponse stats(const std::string& id) const;
    ApiResponse config() const;

    /// Rebuilds sessions from snapshot files; returns how many were loaded.
    std::size_t recover();

    std::size_t session_count() const;

private:
    std::shared_ptr<SessionState> find(const std::string& id) const;
    void append_snapshot(const SessionState& s, const nlohmann::json& event) const;

    Options opts_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<SessionState>> sessions_;
};

ApiResponse error_response(int status, std::string code, std::string message);

}  // namespace multgame
