#include "multgame/rng.hpp"

#include <stdexcept>

namespace multgame {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    s = stream_id ^ a;
    return splitmix64(s);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix_key(seed, stream_id)) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t range = hi - lo;
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return lo + v % range;
}

}  // namespace multgame
