#pragma once

#include <cstdint>
#include <random>

namespace multgame {

/// Deterministic random stream keyed by (seed, stream id). Identical keys give
/// identical draw sequences on every platform: the engine is mt19937_64 and
/// the seeding and the unit-interval conversion are done by hand.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform();

    /// Uniform integer in [lo, hi).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    static const char* generator_name() { return "mt19937_64/splitmix64-seeded"; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace multgame
