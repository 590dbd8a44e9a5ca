#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include <boost/container/small_vector.hpp>
#include <boost/container/static_vector.hpp>

#include "bb84/rng.hpp"

namespace bb84 {

enum class Basis : std::uint8_t { Rectilinear = 0, Diagonal = 1 };

/// The four BB84 linear states plus the circular state used for blinding.
enum class Polarization : std::uint8_t { Lin0, Lin45, Lin90, Lin135, Circular };

enum class PulseKind : std::uint8_t { SignalPhoton, BrightPulse, CwBlinding };

enum class ReceiverArchitecture : std::uint8_t {
    PassiveBS,        ///< 50/50 beam splitter picks the basis, 4 detectors
    ActivePEM,        ///< RNG-driven modulator before one PBS, 2 detectors
    ExclusiveMirror,  ///< RNG-driven mirror sends all light to one basis, 4 detectors
};

constexpr Basis basis_from_bit(int bit) noexcept { return bit ? Basis::Diagonal : Basis::Rectilinear; }
constexpr int basis_bit(Basis b) noexcept { return static_cast<int>(b); }
constexpr Basis other(Basis b) noexcept { return b == Basis::Rectilinear ? Basis::Diagonal : Basis::Rectilinear; }

/// BB84 mapping: bit 0 -> 0 deg / 45 deg, bit 1 -> 90 deg / 135 deg.
constexpr Polarization encode(int bit, Basis basis) noexcept {
    if (basis == Basis::Rectilinear) return bit ? Polarization::Lin90 : Polarization::Lin0;
    return bit ? Polarization::Lin135 : Polarization::Lin45;
}

/// Basis a linear state belongs to; empty for Circular.
constexpr std::optional<Basis> basis_of(Polarization p) noexcept {
    switch (p) {
        case Polarization::Lin0:
        case Polarization::Lin90: return Basis::Rectilinear;
        case Polarization::Lin45:
        case Polarization::Lin135: return Basis::Diagonal;
        case Polarization::Circular: break;
    }
    return std::nullopt;
}

/// Classical bit a linear state encodes; empty for Circular.
constexpr std::optional<int> bit_of(Polarization p) noexcept {
    switch (p) {
        case Polarization::Lin0:
        case Polarization::Lin45: return 0;
        case Polarization::Lin90:
        case Polarization::Lin135: return 1;
        case Polarization::Circular: break;
    }
    return std::nullopt;
}

std::string_view to_string(Basis b) noexcept;
std::string_view to_string(Polarization p) noexcept;
std::string_view to_string(ReceiverArchitecture a) noexcept;

struct LightPulse {
    Polarization polarization = Polarization::Circular;
    double photons = 0.0;  ///< mean photon number per gate
    PulseKind kind = PulseKind::SignalPhoton;
};

/// Light reaching a receiver in one gate. Empty means a dark gate.
using GateIllumination = boost::container::small_vector<LightPulse, 4>;

struct DoseComponents {
    double cw = 0.0;
    double bright = 0.0;
    double signal = 0.0;
};

/// Per-detector dose. Index convention for 4-detector receivers:
/// 0 = rectilinear/bit 0, 1 = rectilinear/bit 1, 2 = diagonal/bit 0,
/// 3 = diagonal/bit 1. ActivePEM uses 0 = bit 0, 1 = bit 1 of the
/// selected basis.
using DetectorDose = boost::container::static_vector<DoseComponents, 4>;

constexpr std::size_t detector_count(ReceiverArchitecture a) noexcept {
    return a == ReceiverArchitecture::ActivePEM ? 2 : 4;
}

constexpr std::size_t detector_index(Basis basis, int bit) noexcept {
    return 2 * static_cast<std::size_t>(basis_bit(basis)) + static_cast<std::size_t>(bit);
}

/// Fraction of the power in `pol` leaving a PBS oriented along `basis`
/// on output `arm` (0 = the bit-0 state of the basis).
double split_fraction(Polarization pol, Basis basis, int arm);

/// Routes one gate of light through the receiver optics.
///
/// Bright and CW components split deterministically. A signal photon is
/// sent to exactly one detector, sampled from the same fractions with one
/// draw from `rng`. `bob_basis` is ignored by PassiveBS.
DetectorDose route(ReceiverArchitecture architecture, const GateIllumination& illumination,
                   Basis bob_basis, RandomSource& rng);

}  // namespace bb84
