#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bb84/alice.hpp"
#include "bb84/error.hpp"
#include "bb84/detector.hpp"
#include "bb84/eve.hpp"
#include "bb84/receiver.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

/// Everything one session needs. Ranges are checked by validate().
struct SessionConfig {
    std::uint64_t gates = 0;
    std::uint64_t seed = kDefaultSeed;
    ReceiverArchitecture receiver = ReceiverArchitecture::PassiveBS;
    SourceMode basis_rng_mode = SourceMode::Private;
    DetectorConfig detectors;
    ChannelConfig channel;
    AttackStrategy attack;
    double qber_sample_fraction = 0.1;
    /// Quantum channel unplugged: Bob sees a dark gate every gate.
    bool disconnected = false;
};

struct GateRecord {
    std::uint64_t gate_index = 0;
    PreparedQubit alice;
    EveGateRecord eve;
    std::optional<Basis> bob_basis;
    GateOutcome outcome;
};

struct SiftedBit {
    std::uint64_t gate_index = 0;
    int alice_bit = 0;
    int bob_bit = 0;
    bool eve_knows = false;
    std::optional<int> eve_bit;
    bool sampled = false;  ///< disclosed in the QBER sample, not part of the key
};

struct QberSample {
    std::uint64_t sample_size = 0;
    std::uint64_t mismatches = 0;
    double qber() const noexcept {
        return sample_size == 0 ? 0.0 : static_cast<double>(mismatches) / static_cast<double>(sample_size);
    }
};

struct SessionTranscript {
    std::uint64_t gates = 0;
    std::vector<GateRecord> records;
    std::vector<SiftedBit> sifted;
    QberSample qber_sample;
    std::uint64_t coincidence_count = 0;

    std::uint64_t key_length() const noexcept;
};

/// Throws ConfigError (see config.hpp) naming the offending field.
void validate(const SessionConfig& config);

/// prepare -> transmit -> intercept -> process_gate for every gate, then
/// sifting and QBER sampling. Deterministic in config.seed.
SessionTranscript run_session(const SessionConfig& config);

/// Keeps single clicks whose announced basis matches Alice's. Eve knows a
/// bit when she delivered a state in the basis Bob ended up measuring.
std::vector<SiftedBit> sift(std::span<const GateRecord> records);

/// Marks ceil(fraction * n) uniformly chosen sifted bits as sampled and
/// returns their mismatch count. Empty input gives qber 0.
QberSample estimate_qber(std::span<SiftedBit> sifted, double sample_fraction, RandomSource& rng);

/// Share of the final (unsampled) key that Eve holds correctly.
double eve_knowledge_fraction(const SessionTranscript& transcript);

/// Gate classification counts for bookkeeping checks.
struct GateTally {
    std::uint64_t no_click = 0;
    std::uint64_t coincidence = 0;
    std::uint64_t basis_mismatch = 0;
    std::uint64_t sifted = 0;
    /// Single clicks whose value Eve dictated and knows (before sifting).
    std::uint64_t eve_delivered = 0;
    std::uint64_t eve_acted = 0;
    double bright_photons_sent = 0.0;
};

GateTally tally(const SessionTranscript& transcript);

/// Line-oriented text dump; byte-identical for identical transcripts.
void write_transcript(std::ostream& os, const SessionTranscript& transcript);

}  // namespace bb84
