#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bb84/config.hpp"
#include "bb84/defense.hpp"

namespace bb84 {

inline bool operator==(const DefenseReport& a, const DefenseReport& b) {
    return a.p_c_prime_hat == b.p_c_prime_hat && a.p_c0_hat == b.p_c0_hat &&
           a.extra_coincidences == b.extra_coincidences && a.leaked_bits_bound == b.leaked_bits_bound &&
           a.sifted_length == b.sifted_length && a.qber == b.qber && a.final_key_bound == b.final_key_bound;
}

/// One row of the per-session CSV.
struct SessionResult {
    std::uint64_t session = 0;
    std::uint64_t seed = 0;
    std::uint64_t gates = 0;
    DefenseReport defense;
    double sifted_rate = 0.0;
    double eve_knowledge_fraction = 0.0;

    friend bool operator==(const SessionResult&, const SessionResult&) = default;
};

/// Runs one session plus its dark calibration and builds the CSV row.
SessionResult run_one(const SessionConfig& config, std::uint64_t session_index);

/// Runs `config.sessions` sessions with seeds derived from the master seed.
/// Sessions may run on several threads; results come back in index order.
std::vector<SessionResult> run_batch(const SimulationConfig& config, unsigned threads = 0);

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation, 0 for one session
};

struct BatchSummary {
    std::uint64_t count = 0;
    Stat sifted_rate;
    Stat qber;
    Stat coincidence_probability;
    Stat eve_knowledge_fraction;
    Stat leaked_bits_bound;
    Stat final_key_bound;
};

BatchSummary summarize(std::span<const SessionResult> results);

/// CSV schema 1. First line `# schema=1`, then the header, then one row per
/// session in index order. Doubles use the shortest round-trip form.
void write_csv(std::ostream& os, std::span<const SessionResult> results);
std::vector<SessionResult> read_csv(std::istream& is);

void write_json(std::ostream& os, const SimulationConfig& config, std::span<const SessionResult> results);

/// Writes sessions.csv and/or summary.json into config.out_dir. On failure
/// any file already written is removed and IoError is thrown.
void emit(const SimulationConfig& config, std::span<const SessionResult> results);

}  // namespace bb84
