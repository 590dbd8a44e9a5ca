#pragma once

#include "bb84/optics.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

/// Gated avalanche photodiode parameters.
///
/// Defaults: efficiency from the usual 0.25 operating value, a low dark
/// rate, and blinding/click thresholds chosen so that a faked-state pulse
/// window exists for every receiver layout.
struct DetectorConfig {
    double efficiency = 0.25;
    double dark_prob = 1e-5;         ///< per-gate dark-count probability
    double blind_threshold = 100.0;  ///< CW photons per gate that blind the diode
    double click_threshold = 50.0;   ///< bright photons that fire a blinded diode
    double superlinear_exponent = 1.0;
};

struct DetectorState {
    bool blinded = false;
};

/// Probability that at least one of `photons` photons is detected:
/// 1 - (1 - efficiency)^photons. Non-integer photon numbers are allowed.
/// Throws std::domain_error outside efficiency in [0,1], photons >= 0.
double detection_probability(double efficiency, double photons);

/// Per-gate coincidence probability of two detectors newly exposed on a
/// basis switch (half of all gates): p_detect^2 / 2.
/// Throws std::domain_error for p_detect outside [0,1].
double coincidence_probability(double p_detect);

struct Detection {
    bool click = false;
    DetectorState next;
};

/// One gate of one detector.
///
/// Blinded: fires iff bright >= click_threshold, deterministic, no dark
/// counts. Linear mode: fires with the photon-detection probability over
/// cw + bright + signal, OR-ed with the dark-count probability. The detector
/// is blinded in the next gate iff cw >= blind_threshold now.
///
/// Exactly one uniform is drawn from `noise` per call, blinded or not, so
/// runs that differ only in illumination stay aligned draw for draw.
Detection detect(const DetectorConfig& config, DetectorState state, const DoseComponents& dose,
                 RandomSource& noise);

}  // namespace bb84
