#include "bb84/rng.hpp"

#include <bit>
#include <utility>

namespace bb84 {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state = mixed ^ fnv1a(label);
    splitmix64(state);
    return splitmix64(state);
}

std::uint64_t session_seed(std::uint64_t master, std::uint64_t session_index) {
    std::uint64_t state = master ^ (session_index * 0xD1B54A32D192ED03ULL);
    splitmix64(state);
    return splitmix64(state);
}

RandomSource::RandomSource(std::uint64_t seed, std::string label, SourceMode mode)
    : seed_(seed), label_(std::move(label)), mode_(mode) {
    std::uint64_t sm = derive_stream_seed(seed_, label_);
    for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t RandomSource::next_u64() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

int RandomSource::next_bit() {
    ++bits_consumed_;
    if (forced_) {
        const int value = *forced_;
        forced_.reset();
        // The forced bit replaces the natural one so the stream stays aligned.
        if (bits_left_ == 0) {
            bit_buffer_ = next_u64();
            bits_left_ = 64;
        }
        bit_buffer_ >>= 1;
        --bits_left_;
        return value;
    }
    if (bits_left_ == 0) {
        bit_buffer_ = next_u64();
        bits_left_ = 64;
    }
    const int bit = static_cast<int>(bit_buffer_ & 1U);
    bit_buffer_ >>= 1;
    --bits_left_;
    return bit;
}

double RandomSource::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RandomSource::below: n must be positive");
    // Reject the low values that would bias the modulo.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

void RandomSource::require_compromised() const {
    if (mode_ != SourceMode::Compromised) {
        throw ModelingViolation("private source not controllable");
    }
}

int RandomSource::peek_bit() {
    require_compromised();
    if (forced_) return *forced_;
    if (bits_left_ == 0) {
        bit_buffer_ = next_u64();
        bits_left_ = 64;
    }
    return static_cast<int>(bit_buffer_ & 1U);
}

void RandomSource::override_bit(int value) {
    require_compromised();
    if (value != 0 && value != 1) throw std::invalid_argument("override_bit: value must be 0 or 1");
    forced_ = value;
}

}  // namespace bb84
