#include "bb84/alice.hpp"

namespace bb84 {

PreparedQubit prepare(RandomSource& rng) {
    PreparedQubit q;
    q.bit = rng.next_bit();
    q.basis = basis_from_bit(rng.next_bit());
    q.polarization = encode(q.bit, q.basis);
    return q;
}

GateIllumination transmit(PreparedQubit& q, double transmittance, RandomSource& rng) {
    q.surviving = rng.bernoulli(transmittance);
    GateIllumination out;
    if (q.surviving) out.push_back({q.polarization, 1.0, PulseKind::SignalPhoton});
    return out;
}

GateIllumination attenuate(const GateIllumination& light, double transmittance, RandomSource& rng) {
    GateIllumination out;
    for (LightPulse pulse : light) {
        if (pulse.kind == PulseKind::SignalPhoton) {
            if (!rng.bernoulli(transmittance)) continue;
        } else {
            pulse.photons *= transmittance;
        }
        out.push_back(pulse);
    }
    return out;
}

}  // namespace bb84
