#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "bb84/detector.hpp"
#include "bb84/optics.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

enum class AttackKind : std::uint8_t { NoAttack, InterceptResend, BlindingFull, BlindingPartial, RngControl };

/// Eavesdropper configuration. Unset powers and rates are resolved against
/// the receiver being attacked when an Eavesdropper is built.
struct AttackStrategy {
    AttackKind kind = AttackKind::NoAttack;
    double fraction = 0.0;                ///< BlindingPartial share of attacked gates
    std::optional<double> cw_power;       ///< default 4 * blind_threshold
    std::optional<double> pulse_power;    ///< default: centre of the faked-pulse window
    bool prudent_noise = false;
    std::optional<double> noise_rate;     ///< default: Bob's dark_prob
    /// BlindingPartial scheduling. 1 = independent per-gate choice; L > 1 =
    /// one contiguous attacked window of round(fraction * L) gates per block
    /// of L gates, at a random offset.
    std::uint64_t partial_run_length = 1000;
};

std::string to_string(const AttackStrategy& s);

struct EveGateRecord {
    bool acted = false;
    std::optional<Basis> measured_basis;
    std::optional<int> measured_bit;
    /// Eve sent Bob a state carrying her result this gate.
    bool knows_bob_outcome_candidate = false;
    /// CW plus bright photons sent this gate (signal photons excluded).
    double bright_photons_sent = 0.0;
};

/// Faked-state pulse powers that fire only the matching detector.
///
/// PassiveBS halves the pulse at its first splitter: the matching detector
/// sees P/2, each wrong-basis detector P/4, giving (2 P_th, 4 P_th).
/// ActivePEM and ExclusiveMirror send the whole pulse into one PBS: the
/// matching detector sees P, a wrong-basis pair P/2 each, giving (P_th, 2 P_th).
std::pair<double, double> faked_pulse_window(double click_threshold);
std::pair<double, double> faked_pulse_window(double click_threshold, ReceiverArchitecture architecture);

struct Interception {
    EveGateRecord record;
    GateIllumination to_bob;
};

class Eavesdropper {
public:
    /// `seed` is the session seed; Eve's streams are labelled "eve",
    /// "eve-noise" and "eve-schedule".
    Eavesdropper(const AttackStrategy& strategy, ReceiverArchitecture target,
                 const DetectorConfig& bob_detectors, std::uint64_t seed);

    /// One gate on the line between Alice and Bob. RngControl steers
    /// `bob_basis_rng` and throws ModelingViolation if that source is private.
    Interception intercept(const GateIllumination& incoming, RandomSource& bob_basis_rng);

    const AttackStrategy& strategy() const noexcept { return strategy_; }
    double cw_power() const noexcept { return cw_power_; }
    double pulse_power() const noexcept { return pulse_power_; }
    double noise_rate() const noexcept { return noise_rate_; }

private:
    struct Measurement {
        Basis basis;
        std::optional<int> bit;  // empty when no photon arrived
    };

    Measurement measure(const GateIllumination& incoming);
    bool partial_acts();
    Interception blind(const GateIllumination& incoming);

    AttackStrategy strategy_;
    double cw_power_;
    double pulse_power_;
    double noise_rate_;
    RandomSource rng_;
    RandomSource noise_;
    RandomSource schedule_;
    std::uint64_t gate_ = 0;
    std::uint64_t window_begin_ = 0;
    std::uint64_t window_end_ = 0;
};

}  // namespace bb84
