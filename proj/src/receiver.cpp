#include "bb84/receiver.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace bb84 {

GateOutcome classify(std::span<const bool> clicks, std::optional<Basis> active_basis) {
    if (clicks.size() != 2 && clicks.size() != 4)
        throw std::invalid_argument("classify: click pattern must have 2 or 4 entries");
    if (clicks.size() == 2 && !active_basis)
        throw std::invalid_argument("classify: a 2-detector pattern needs the selected basis");

    std::uint8_t mask = 0;
    for (std::size_t i = 0; i < clicks.size(); ++i)
        if (clicks[i]) mask |= static_cast<std::uint8_t>(1U << i);

    const int fired = std::popcount(mask);
    if (fired == 0) return NoClick{};
    if (fired > 1) return Coincidence{mask};

    const int index = std::countr_zero(mask);
    if (clicks.size() == 2) return SingleClick{*active_basis, index};
    return SingleClick{basis_from_bit(index / 2), index % 2};
}

Receiver::Receiver(ReceiverArchitecture architecture, const DetectorConfig& config)
    : Receiver(architecture, std::vector<DetectorConfig>(detector_count(architecture), config)) {}

Receiver::Receiver(ReceiverArchitecture architecture, std::vector<DetectorConfig> configs)
    : architecture_(architecture), configs_(std::move(configs)), states_(configs_.size()) {
    if (configs_.size() != detector_count(architecture_))
        throw std::invalid_argument("Receiver: detector config count does not match architecture");
}

void Receiver::start(RandomSource& basis_rng) {
    if (architecture_ == ReceiverArchitecture::ExclusiveMirror && !previous_basis_)
        previous_basis_ = basis_from_bit(basis_rng.next_bit());
}

GateResult Receiver::process_gate(const GateIllumination& illumination, RandomSource& basis_rng,
                                  RandomSource& optics_rng, RandomSource& noise_rng) {
    std::optional<Basis> selected;
    if (architecture_ != ReceiverArchitecture::PassiveBS) {
        start(basis_rng);
        selected = basis_from_bit(basis_rng.next_bit());
    }

    const DetectorDose dose = route(architecture_, illumination, selected.value_or(Basis::Rectilinear), optics_rng);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const Detection d = detect(configs_[i], states_[i], dose[i], noise_rng);
        clicks_[i] = d.click;
        states_[i] = d.next;
    }

    GateResult result{classify(last_clicks(), architecture_ == ReceiverArchitecture::ActivePEM
                                                  ? selected
                                                  : std::nullopt),
                      selected};

    if (architecture_ == ReceiverArchitecture::ExclusiveMirror) {
        if (const auto* click = single_click(result.outcome); click && click->basis != *selected)
            result.outcome = NoClick{};
        previous_basis_ = selected;
    }
    if (architecture_ == ReceiverArchitecture::PassiveBS) {
        if (const auto* click = single_click(result.outcome)) result.chosen_basis = click->basis;
    }
    return result;
}

}  // namespace bb84
