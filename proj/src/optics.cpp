#include "bb84/optics.hpp"

namespace bb84 {

std::string_view to_string(Basis b) noexcept {
    return b == Basis::Rectilinear ? "rectilinear" : "diagonal";
}

std::string_view to_string(Polarization p) noexcept {
    switch (p) {
        case Polarization::Lin0: return "lin0";
        case Polarization::Lin45: return "lin45";
        case Polarization::Lin90: return "lin90";
        case Polarization::Lin135: return "lin135";
        case Polarization::Circular: return "circular";
    }
    return "?";
}

std::string_view to_string(ReceiverArchitecture a) noexcept {
    switch (a) {
        case ReceiverArchitecture::PassiveBS: return "passive";
        case ReceiverArchitecture::ActivePEM: return "pem";
        case ReceiverArchitecture::ExclusiveMirror: return "mirror";
    }
    return "?";
}

double split_fraction(Polarization pol, Basis basis, int arm) {
    const auto pol_basis = basis_of(pol);
    if (!pol_basis || *pol_basis != basis) return 0.5;
    return *bit_of(pol) == arm ? 1.0 : 0.0;
}

namespace {

void add(DoseComponents& d, PulseKind kind, double photons) {
    switch (kind) {
        case PulseKind::CwBlinding: d.cw += photons; break;
        case PulseKind::BrightPulse: d.bright += photons; break;
        case PulseKind::SignalPhoton: d.signal += photons; break;
    }
}

// Power fraction reaching each detector for one polarization.
DetectorDose fractions(ReceiverArchitecture architecture, Polarization pol, Basis bob_basis) {
    DetectorDose f(detector_count(architecture));
    switch (architecture) {
        case ReceiverArchitecture::PassiveBS:
            for (Basis b : {Basis::Rectilinear, Basis::Diagonal})
                for (int arm = 0; arm < 2; ++arm)
                    f[detector_index(b, arm)].signal = 0.5 * split_fraction(pol, b, arm);
            break;
        case ReceiverArchitecture::ActivePEM:
            for (int arm = 0; arm < 2; ++arm)
                f[static_cast<std::size_t>(arm)].signal = split_fraction(pol, bob_basis, arm);
            break;
        case ReceiverArchitecture::ExclusiveMirror:
            for (int arm = 0; arm < 2; ++arm)
                f[detector_index(bob_basis, arm)].signal = split_fraction(pol, bob_basis, arm);
            break;
    }
    return f;
}

}  // namespace

DetectorDose route(ReceiverArchitecture architecture, const GateIllumination& illumination,
                   Basis bob_basis, RandomSource& rng) {
    DetectorDose dose(detector_count(architecture));
    for (const LightPulse& pulse : illumination) {
        if (pulse.photons <= 0.0) continue;
        const DetectorDose f = fractions(architecture, pulse.polarization, bob_basis);
        if (pulse.kind != PulseKind::SignalPhoton) {
            for (std::size_t i = 0; i < dose.size(); ++i) add(dose[i], pulse.kind, pulse.photons * f[i].signal);
            continue;
        }
        // Single photon: lands whole on one detector.
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::size_t target = dose.size() - 1;
        for (std::size_t i = 0; i < dose.size(); ++i) {
            cumulative += f[i].signal;
            if (u < cumulative) {
                target = i;
                break;
            }
        }
        dose[target].signal += 1.0;
    }
    return dose;
}

}  // namespace bb84
