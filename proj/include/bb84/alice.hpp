#pragma once

#include "bb84/optics.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

struct PreparedQubit {
    int bit = 0;
    Basis basis = Basis::Rectilinear;
    Polarization polarization = Polarization::Lin0;
    bool surviving = true;
};

/// Channel transmittances. `eta` applies end to end when nobody sits on the
/// line; with an eavesdropper the line is split into Alice->Eve (`eta_ae`)
/// and Eve->Bob (`eta_eb`).
struct ChannelConfig {
    double eta = 1.0;
    double eta_ae = 1.0;
    double eta_eb = 1.0;
};

/// Draws the bit then the basis bit from `rng` and encodes them.
PreparedQubit prepare(RandomSource& rng);

/// Sends one photon over a lossy line; sets q.surviving. One draw per call.
GateIllumination transmit(PreparedQubit& q, double transmittance, RandomSource& rng);

/// Line loss applied to arbitrary light: single photons survive with
/// probability `transmittance` (one draw each), classical light is scaled.
GateIllumination attenuate(const GateIllumination& light, double transmittance, RandomSource& rng);

}  // namespace bb84
