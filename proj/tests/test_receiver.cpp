#include <doctest.h>

#include <array>
#include <vector>

#include "bb84/receiver.hpp"

using namespace bb84;

namespace {

GateIllumination cw(double photons) { return {{Polarization::Circular, photons, PulseKind::CwBlinding}}; }

GateIllumination cw_plus_pulse(double cw_photons, Polarization pol, double pulse) {
    return {{Polarization::Circular, cw_photons, PulseKind::CwBlinding}, {pol, pulse, PulseKind::BrightPulse}};
}

struct Streams {
    RandomSource basis;
    RandomSource optics;
    RandomSource noise;
    explicit Streams(std::uint64_t seed)
        : basis(seed, "bob-basis"), optics(seed, "bob-optics"), noise(seed, "detector-noise") {}
};

}  // namespace

TEST_CASE("classify four-detector patterns") {
    const std::array<bool, 4> none{};
    CHECK(classify(none) == GateOutcome{NoClick{}});
    const std::array<bool, 4> d2{false, false, true, false};
    CHECK(classify(d2) == GateOutcome{SingleClick{Basis::Diagonal, 0}});
    const std::array<bool, 4> d1{false, true, false, false};
    CHECK(classify(d1) == GateOutcome{SingleClick{Basis::Rectilinear, 1}});
    const std::array<bool, 4> d03{true, false, false, true};
    CHECK(classify(d03) == GateOutcome{Coincidence{0b1001}});
}

TEST_CASE("classify two-detector patterns needs the basis") {
    const std::array<bool, 2> arm1{false, true};
    CHECK(classify(arm1, Basis::Diagonal) == GateOutcome{SingleClick{Basis::Diagonal, 1}});
    const std::array<bool, 2> both{true, true};
    CHECK(classify(both, Basis::Rectilinear) == GateOutcome{Coincidence{0b11}});
    CHECK_THROWS_AS(classify(arm1), std::invalid_argument);
    const std::array<bool, 3> odd{};
    CHECK_THROWS_AS(classify(odd), std::invalid_argument);
}

TEST_CASE("dark gate on noiseless detectors gives no click") {
    DetectorConfig cfg;
    cfg.dark_prob = 0.0;
    for (auto arch : {ReceiverArchitecture::PassiveBS, ReceiverArchitecture::ActivePEM,
                      ReceiverArchitecture::ExclusiveMirror}) {
        Receiver bob(arch, cfg);
        Streams s(1);
        for (int g = 0; g < 100; ++g) REQUIRE(bob.process_gate({}, s.basis, s.optics, s.noise).outcome == GateOutcome{NoClick{}});
    }
}

TEST_CASE("blinded passive receiver fires the detector matching a faked pulse") {
    DetectorConfig cfg;
    Receiver bob(ReceiverArchitecture::PassiveBS, cfg);
    Streams s(2);
    bob.process_gate(cw(400), s.basis, s.optics, s.noise);
    for (auto st : bob.states()) REQUIRE(st.blinded);
    const auto r = bob.process_gate(cw_plus_pulse(400, Polarization::Lin0, 3 * cfg.click_threshold), s.basis,
                                    s.optics, s.noise);
    CHECK(r.outcome == GateOutcome{SingleClick{Basis::Rectilinear, 0}});
    CHECK(r.chosen_basis == Basis::Rectilinear);
}

TEST_CASE("blinded passive and PEM receivers stay coincidence-free") {
    DetectorConfig cfg;
    for (auto arch : {ReceiverArchitecture::PassiveBS, ReceiverArchitecture::ActivePEM}) {
        Receiver bob(arch, cfg);
        Streams s(3);
        RandomSource pick(3, "test");
        const double pulse = arch == ReceiverArchitecture::PassiveBS ? 150.0 : 75.0;
        for (int g = 0; g < 20'000; ++g) {
            const Polarization pol = encode(pick.next_bit(), basis_from_bit(pick.next_bit()));
            const auto r = bob.process_gate(cw_plus_pulse(400, pol, pulse), s.basis, s.optics, s.noise);
            if (g > 0) REQUIRE_FALSE(is_coincidence(r.outcome));
        }
    }
}

TEST_CASE("PEM registers the faked bit only when bases agree") {
    DetectorConfig cfg;
    Receiver bob(ReceiverArchitecture::ActivePEM, cfg);
    Streams s(4);
    bob.process_gate(cw(400), s.basis, s.optics, s.noise);
    int agree = 0;
    for (int g = 0; g < 10'000; ++g) {
        const auto r = bob.process_gate(cw_plus_pulse(400, Polarization::Lin135, 75.0), s.basis, s.optics, s.noise);
        if (r.chosen_basis == Basis::Diagonal) {
            REQUIRE(r.outcome == GateOutcome{SingleClick{Basis::Diagonal, 1}});
            ++agree;
        } else {
            REQUIRE(r.outcome == GateOutcome{NoClick{}});
        }
    }
    CHECK(std::abs(agree - 5000) < 250);
}

TEST_CASE("mirror under CW fires both new detectors on every basis switch") {
    DetectorConfig cfg;
    cfg.efficiency = 1.0;
    cfg.dark_prob = 0.0;
    Receiver bob(ReceiverArchitecture::ExclusiveMirror, cfg);
    Streams s(5);
    bob.start(s.basis);
    for (int g = 0; g < 10'000; ++g) {
        const Basis before = *bob.previous_basis();
        const auto r = bob.process_gate(cw(400), s.basis, s.optics, s.noise);
        const Basis now = *r.chosen_basis;
        if (g == 0 || now != before) {
            const std::uint8_t pair = now == Basis::Rectilinear ? 0b0011 : 0b1100;
            REQUIRE(r.outcome == GateOutcome{Coincidence{pair}});
        } else {
            REQUIRE(r.outcome == GateOutcome{NoClick{}});
        }
    }
}

TEST_CASE("mirror discards a lone click on the unlit basis") {
    DetectorConfig quiet;
    quiet.dark_prob = 0.0;
    DetectorConfig noisy = quiet;
    noisy.dark_prob = 1.0;
    Receiver bob(ReceiverArchitecture::ExclusiveMirror, {quiet, quiet, quiet, noisy});
    Streams s(6);
    for (int g = 0; g < 1000; ++g) {
        const auto r = bob.process_gate({}, s.basis, s.optics, s.noise);
        if (r.chosen_basis == Basis::Diagonal)
            REQUIRE(r.outcome == GateOutcome{SingleClick{Basis::Diagonal, 1}});
        else
            REQUIRE(r.outcome == GateOutcome{NoClick{}});
    }
}

TEST_CASE("basis bits consumed per architecture") {
    DetectorConfig cfg;
    const int gates = 500;
    auto consumed = [&](ReceiverArchitecture arch) {
        Receiver bob(arch, cfg);
        Streams s(7);
        for (int g = 0; g < gates; ++g) bob.process_gate({}, s.basis, s.optics, s.noise);
        return s.basis.bits_consumed();
    };
    CHECK(consumed(ReceiverArchitecture::PassiveBS) == 0);
    CHECK(consumed(ReceiverArchitecture::ActivePEM) == gates);
    CHECK(consumed(ReceiverArchitecture::ExclusiveMirror) == gates + 1);
}

TEST_CASE("ideal receivers never see coincidences from single photons") {
    DetectorConfig ideal;
    ideal.efficiency = 1.0;
    ideal.dark_prob = 0.0;
    RandomSource pick(8, "test");
    for (auto arch : {ReceiverArchitecture::PassiveBS, ReceiverArchitecture::ActivePEM,
                      ReceiverArchitecture::ExclusiveMirror}) {
        Receiver bob(arch, ideal);
        Streams s(8);
        for (int g = 0; g < 20'000; ++g) {
            const GateIllumination photon{
                {encode(pick.next_bit(), basis_from_bit(pick.next_bit())), 1.0, PulseKind::SignalPhoton}};
            const auto r = bob.process_gate(photon, s.basis, s.optics, s.noise);
            REQUIRE(single_click(r.outcome) != nullptr);
        }
    }
}

TEST_CASE("receiver rejects a mismatched detector list") {
    CHECK_THROWS_AS(Receiver(ReceiverArchitecture::ActivePEM, std::vector<DetectorConfig>(4)), std::invalid_argument);
}
