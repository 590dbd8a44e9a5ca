#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bb84/detector.hpp"
#include "bb84/optics.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

struct NoClick {
    friend bool operator==(const NoClick&, const NoClick&) = default;
};

struct SingleClick {
    Basis basis = Basis::Rectilinear;
    int bit = 0;
    friend bool operator==(const SingleClick&, const SingleClick&) = default;
};

/// Two or more detectors fired; `detectors` is a bitmask over detector ids.
struct Coincidence {
    std::uint8_t detectors = 0;
    friend bool operator==(const Coincidence&, const Coincidence&) = default;
};

using GateOutcome = std::variant<NoClick, SingleClick, Coincidence>;

inline bool is_coincidence(const GateOutcome& o) { return std::holds_alternative<Coincidence>(o); }
inline const SingleClick* single_click(const GateOutcome& o) { return std::get_if<SingleClick>(&o); }

/// Maps a click pattern to an outcome. Four-detector patterns use the fixed
/// index convention; two-detector (PEM) patterns need the selected basis.
/// Throws std::invalid_argument for other lengths, or a 2-pattern without basis.
GateOutcome classify(std::span<const bool> clicks, std::optional<Basis> active_basis = std::nullopt);

struct GateResult {
    GateOutcome outcome;
    /// Basis the receiver measured in: the RNG choice for active receivers,
    /// inferred from the firing detector for PassiveBS single clicks.
    std::optional<Basis> chosen_basis;
};

/// Bob's station: basis choice, optics, detectors and outcome classification.
class Receiver {
public:
    Receiver(ReceiverArchitecture architecture, const DetectorConfig& config);
    Receiver(ReceiverArchitecture architecture, std::vector<DetectorConfig> configs);

    /// Mirror only: draws the warm-up basis bit that stands for gate -1.
    /// Called implicitly by the first process_gate if not called before.
    void start(RandomSource& basis_rng);

    /// Runs one gate. Active receivers draw exactly one bit from `basis_rng`
    /// per gate.
    /// On ExclusiveMirror a lone click on the unlit basis can only be a dark
    /// count; it is discarded and reported as NoClick.
    GateResult process_gate(const GateIllumination& illumination, RandomSource& basis_rng,
                            RandomSource& optics_rng, RandomSource& noise_rng);

    ReceiverArchitecture architecture() const noexcept { return architecture_; }
    std::span<const DetectorState> states() const noexcept { return states_; }
    std::span<const bool> last_clicks() const noexcept { return {clicks_.data(), states_.size()}; }
    /// Basis bit of the previous gate (mirror only; set after the warm-up draw).
    std::optional<Basis> previous_basis() const noexcept { return previous_basis_; }

private:
    ReceiverArchitecture architecture_;
    std::vector<DetectorConfig> configs_;
    std::vector<DetectorState> states_;
    std::array<bool, 4> clicks_{};
    std::optional<Basis> previous_basis_;
};

}  // namespace bb84
