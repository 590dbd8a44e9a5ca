#pragma once

#include <cstdint>

#include "bb84/protocol.hpp"

namespace bb84 {

/// Per-session output of the coincidence-monitoring countermeasure.
struct DefenseReport {
    double p_c_prime_hat = 0.0;  ///< coincidence probability seen while connected
    double p_c0_hat = 0.0;       ///< dark-calibrated coincidence probability
    std::int64_t extra_coincidences = 0;
    double leaked_bits_bound = 0.0;
    std::uint64_t sifted_length = 0;
    double qber = 0.0;
    double final_key_bound = 0.0;
};

/// coincidence_count / gates; 0 for an empty transcript.
double estimate_coincidence(const SessionTranscript& transcript);

/// Coincidences of a dark calibration run: the same session with the
/// quantum channel unplugged.
std::uint64_t calibration_coincidences(const SessionConfig& config);

/// Coincidence probability of the dark calibration run.
double calibrate_p_c0(const SessionConfig& config);

/// Every bit Eve acquires costs her two coincidences on average, so half
/// the coincidences above the calibrated level bound her knowledge:
/// max(0, count - p_c0 * gates) / 2.
double leaked_bits_bound(std::uint64_t coincidence_count, double p_c0, std::uint64_t total_gates);

/// Binary entropy in bits, with h(0) = h(1) = 0.
double binary_entropy(double p);

/// max(0, n * (1 - h(qber)) - leaked). qber must lie in [0, 0.5].
double final_key_bound(std::uint64_t sifted_length, double qber, double leaked);

/// Combines a finished session with its calibrated baseline. The final key
/// bound is taken over the key left after QBER sampling.
DefenseReport assess(const SessionTranscript& transcript, double p_c0_hat);

/// True when the observed coincidence rate exceeds `factor` times the
/// calibrated one.
bool strong_light_alarm(const DefenseReport& report, double factor = 10.0);

}  // namespace bb84
