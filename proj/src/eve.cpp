#include "bb84/eve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bb84 {

std::string to_string(const AttackStrategy& s) {
    switch (s.kind) {
        case AttackKind::NoAttack: return "none";
        case AttackKind::InterceptResend: return "intercept";
        case AttackKind::BlindingFull: return "blind";
        case AttackKind::RngControl: return "rng-control";
        case AttackKind::BlindingPartial: {
            std::ostringstream os;
            os << "blind-partial:" << s.fraction;
            return os.str();
        }
    }
    return "?";
}

std::pair<double, double> faked_pulse_window(double click_threshold) {
    return faked_pulse_window(click_threshold, ReceiverArchitecture::PassiveBS);
}

std::pair<double, double> faked_pulse_window(double click_threshold, ReceiverArchitecture architecture) {
    if (!(click_threshold > 0.0)) throw std::domain_error("faked_pulse_window: threshold must be positive");
    if (architecture == ReceiverArchitecture::PassiveBS) return {2.0 * click_threshold, 4.0 * click_threshold};
    return {click_threshold, 2.0 * click_threshold};
}

Eavesdropper::Eavesdropper(const AttackStrategy& strategy, ReceiverArchitecture target,
                           const DetectorConfig& bob_detectors, std::uint64_t seed)
    : strategy_(strategy),
      cw_power_(strategy.cw_power.value_or(4.0 * bob_detectors.blind_threshold)),
      pulse_power_(strategy.pulse_power.value_or([&] {
          const auto [lo, hi] = faked_pulse_window(bob_detectors.click_threshold, target);
          return 0.5 * (lo + hi);
      }())),
      noise_rate_(strategy.noise_rate.value_or(bob_detectors.dark_prob)),
      rng_(seed, "eve"),
      noise_(seed, "eve-noise"),
      schedule_(seed, "eve-schedule") {}

Eavesdropper::Measurement Eavesdropper::measure(const GateIllumination& incoming) {
    Measurement m{basis_from_bit(rng_.next_bit()), std::nullopt};
    for (const LightPulse& pulse : incoming) {
        if (pulse.kind != PulseKind::SignalPhoton || pulse.photons < 1.0) continue;
        const auto pol_basis = basis_of(pulse.polarization);
        if (pol_basis && *pol_basis == m.basis)
            m.bit = *bit_of(pulse.polarization);
        else
            m.bit = rng_.next_bit();
        break;
    }
    return m;
}

bool Eavesdropper::partial_acts() {
    const std::uint64_t gate = gate_++;
    const std::uint64_t run = strategy_.partial_run_length;
    if (run <= 1) return schedule_.bernoulli(strategy_.fraction);

    if (gate % run == 0) {
        const auto width = static_cast<std::uint64_t>(std::llround(strategy_.fraction * static_cast<double>(run)));
        const std::uint64_t offset = schedule_.below(run - width + 1);
        window_begin_ = gate + offset;
        window_end_ = window_begin_ + width;
    }
    return gate >= window_begin_ && gate < window_end_;
}

Interception Eavesdropper::blind(const GateIllumination& incoming) {
    Interception out;
    const Measurement m = measure(incoming);
    out.record.acted = true;
    out.record.measured_basis = m.basis;
    out.record.measured_bit = m.bit;

    auto send = [&out](Polarization pol, double photons, PulseKind kind) {
        if (photons <= 0.0) return;
        out.to_bob.push_back({pol, photons, kind});
        out.record.bright_photons_sent += photons;
    };

    send(Polarization::Circular, cw_power_, PulseKind::CwBlinding);
    if (m.bit && pulse_power_ > 0.0) {
        send(encode(*m.bit, m.basis), pulse_power_, PulseKind::BrightPulse);
        out.record.knows_bob_outcome_candidate = true;
    }
    if (strategy_.prudent_noise) {
        // Mimic dark counts: one independent chance per detector state.
        for (Polarization pol : {Polarization::Lin0, Polarization::Lin90, Polarization::Lin45, Polarization::Lin135}) {
            if (noise_.bernoulli(noise_rate_)) send(pol, pulse_power_, PulseKind::BrightPulse);
        }
    }
    return out;
}

Interception Eavesdropper::intercept(const GateIllumination& incoming, RandomSource& bob_basis_rng) {
    switch (strategy_.kind) {
        case AttackKind::NoAttack:
            return {EveGateRecord{}, incoming};

        case AttackKind::BlindingFull:
            return blind(incoming);

        case AttackKind::BlindingPartial:
            if (partial_acts()) return blind(incoming);
            return {EveGateRecord{}, incoming};

        case AttackKind::InterceptResend:
        case AttackKind::RngControl: {
            Interception out;
            const Measurement m = measure(incoming);
            if (strategy_.kind == AttackKind::RngControl) bob_basis_rng.override_bit(basis_bit(m.basis));
            out.record.acted = true;
            out.record.measured_basis = m.basis;
            out.record.measured_bit = m.bit;
            if (m.bit) {
                out.to_bob.push_back({encode(*m.bit, m.basis), 1.0, PulseKind::SignalPhoton});
                out.record.knows_bob_outcome_candidate = true;
            }
            return out;
        }
    }
    throw std::logic_error("unknown attack kind");
}

}  // namespace bb84
