#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bb84 {

/// Raised when a simulation step breaks a modeling rule, e.g. an adversary
/// trying to steer a random source that is private to its owner.
class ModelingViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class SourceMode : std::uint8_t { Private, Compromised };

/// Master seed used when none is given on the command line.
inline constexpr std::uint64_t kDefaultSeed = 0x00000000BB840001ULL;

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the sub-stream `label` under `seed`. Pure function of both.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view label);

/// Per-session seed drawn from the batch master seed.
std::uint64_t session_seed(std::uint64_t master, std::uint64_t session_index);

/// A labelled, reproducible random stream (xoshiro256**, period 2^256 - 1).
///
/// The stream for a given (seed, label) pair is fixed. A Private source only
/// hands out values to its owner as they are consumed; a Compromised source
/// additionally lets an outside party read the next bit or dictate it.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::string label,
                 SourceMode mode = SourceMode::Private);

    int next_bit();
    /// Uniform double in [0, 1).
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Next bit without consuming it. Compromised sources only.
    int peek_bit();
    /// Forces the next next_bit() result. Compromised sources only.
    void override_bit(int value);

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& label() const noexcept { return label_; }
    SourceMode mode() const noexcept { return mode_; }
    std::uint64_t bits_consumed() const noexcept { return bits_consumed_; }

private:
    std::uint64_t next_u64();
    void require_compromised() const;

    std::uint64_t seed_;
    std::string label_;
    SourceMode mode_;
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
    std::optional<int> forced_;
    std::uint64_t bits_consumed_ = 0;
};

}  // namespace bb84
