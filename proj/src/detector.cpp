#include "bb84/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bb84 {

double detection_probability(double efficiency, double photons) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
        throw std::domain_error("detection_probability: efficiency outside [0,1]");
    if (!(photons >= 0.0) || std::isinf(photons))
        throw std::domain_error("detection_probability: photon number must be finite and >= 0");
    if (photons == 0.0 || efficiency == 0.0) return 0.0;
    if (efficiency == 1.0) return 1.0;
    return -std::expm1(photons * std::log1p(-efficiency));
}

double coincidence_probability(double p_detect) {
    if (!(p_detect >= 0.0 && p_detect <= 1.0))
        throw std::domain_error("coincidence_probability: p_detect outside [0,1]");
    return 0.5 * p_detect * p_detect;
}

Detection detect(const DetectorConfig& config, DetectorState state, const DoseComponents& dose,
                 RandomSource& noise) {
    const double u = noise.uniform();
    Detection out;
    out.next.blinded = dose.cw >= config.blind_threshold;
    if (state.blinded) {
        out.click = dose.bright >= config.click_threshold;
        return out;
    }
    double p_photon = detection_probability(config.efficiency, dose.cw + dose.bright + dose.signal);
    if (config.superlinear_exponent > 1.0 && p_photon > 0.0)
        p_photon = std::min(1.0, std::pow(p_photon, 1.0 / config.superlinear_exponent));
    const double p_click = 1.0 - (1.0 - p_photon) * (1.0 - config.dark_prob);
    out.click = u < p_click;
    return out;
}

}  // namespace bb84
