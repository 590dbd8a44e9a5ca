#include "bb84/defense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bb84 {

double estimate_coincidence(const SessionTranscript& transcript) {
    if (transcript.gates == 0) return 0.0;
    return static_cast<double>(transcript.coincidence_count) / static_cast<double>(transcript.gates);
}

std::uint64_t calibration_coincidences(const SessionConfig& config) {
    SessionConfig dark = config;
    dark.disconnected = true;
    return run_session(dark).coincidence_count;
}

double calibrate_p_c0(const SessionConfig& config) {
    if (config.gates == 0) return 0.0;
    return static_cast<double>(calibration_coincidences(config)) / static_cast<double>(config.gates);
}

double leaked_bits_bound(std::uint64_t coincidence_count, double p_c0, std::uint64_t total_gates) {
    if (p_c0 < 0.0) throw std::domain_error("leaked_bits_bound: p_c0 must be >= 0");
    const double extra = static_cast<double>(coincidence_count) - p_c0 * static_cast<double>(total_gates);
    return std::max(0.0, extra) / 2.0;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double final_key_bound(std::uint64_t sifted_length, double qber, double leaked) {
    if (!(qber >= 0.0 && qber <= 0.5)) throw std::domain_error("final_key_bound: qber outside [0, 0.5]");
    if (leaked < 0.0) throw std::domain_error("final_key_bound: leaked must be >= 0");
    const double n = static_cast<double>(sifted_length);
    return std::max(0.0, n * (1.0 - binary_entropy(qber)) - leaked);
}

DefenseReport assess(const SessionTranscript& transcript, double p_c0_hat) {
    DefenseReport r;
    r.p_c_prime_hat = estimate_coincidence(transcript);
    r.p_c0_hat = p_c0_hat;
    const double expected = p_c0_hat * static_cast<double>(transcript.gates);
    r.extra_coincidences = static_cast<std::int64_t>(transcript.coincidence_count) - std::llround(expected);
    r.leaked_bits_bound = leaked_bits_bound(transcript.coincidence_count, p_c0_hat, transcript.gates);
    r.sifted_length = transcript.sifted.size();
    r.qber = transcript.qber_sample.qber();
    r.final_key_bound = final_key_bound(transcript.key_length(), std::min(r.qber, 0.5), r.leaked_bits_bound);
    return r;
}

bool strong_light_alarm(const DefenseReport& report, double factor) {
    return report.p_c_prime_hat > factor * report.p_c0_hat;
}

}  // namespace bb84
