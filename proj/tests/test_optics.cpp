#include <doctest.h>

#include <array>
#include <numeric>

#include "bb84/optics.hpp"
#include "oracles.hpp"

using namespace bb84;

namespace {

constexpr std::array kAllPol = {Polarization::Lin0, Polarization::Lin45, Polarization::Lin90, Polarization::Lin135,
                                Polarization::Circular};
constexpr std::array kAllArch = {ReceiverArchitecture::PassiveBS, ReceiverArchitecture::ActivePEM,
                                 ReceiverArchitecture::ExclusiveMirror};

double total(const DoseComponents& d) { return d.cw + d.bright + d.signal; }

}  // namespace

TEST_CASE("encoding mapping") {
    CHECK(encode(0, Basis::Rectilinear) == Polarization::Lin0);
    CHECK(encode(1, Basis::Rectilinear) == Polarization::Lin90);
    CHECK(encode(0, Basis::Diagonal) == Polarization::Lin45);
    CHECK(encode(1, Basis::Diagonal) == Polarization::Lin135);
    for (int bit : {0, 1})
        for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
            CHECK(basis_of(encode(bit, b)) == b);
            CHECK(bit_of(encode(bit, b)) == bit);
        }
    CHECK_FALSE(basis_of(Polarization::Circular));
    CHECK_FALSE(bit_of(Polarization::Circular));
}

TEST_CASE("split fractions follow Malus' law") {
    CHECK(split_fraction(Polarization::Lin0, Basis::Rectilinear, 0) == 1.0);
    CHECK(split_fraction(Polarization::Lin0, Basis::Rectilinear, 1) == 0.0);
    CHECK(split_fraction(Polarization::Lin0, Basis::Diagonal, 0) == 0.5);
    CHECK(split_fraction(Polarization::Circular, Basis::Diagonal, 1) == 0.5);
    for (Polarization p : kAllPol)
        for (Basis b : {Basis::Rectilinear, Basis::Diagonal})
            for (int arm : {0, 1}) {
                CAPTURE(to_string(p));
                CHECK(split_fraction(p, b, arm) == doctest::Approx(oracle::malus_fraction(p, b, arm)).epsilon(1e-12));
            }
}

TEST_CASE("passive receiver spreads circular CW evenly") {
    RandomSource rng(1, "bob-optics");
    const GateIllumination light{{Polarization::Circular, 100.0, PulseKind::CwBlinding}};
    const auto dose = route(ReceiverArchitecture::PassiveBS, light, Basis::Rectilinear, rng);
    REQUIRE(dose.size() == 4);
    for (const auto& d : dose) CHECK(d.cw == doctest::Approx(25.0));
}

TEST_CASE("passive receiver splits a bright pulse in halves then by Malus") {
    RandomSource rng(1, "bob-optics");
    const GateIllumination light{{Polarization::Lin0, 150.0, PulseKind::BrightPulse}};
    const auto dose = route(ReceiverArchitecture::PassiveBS, light, Basis::Diagonal, rng);
    CHECK(dose[0].bright == doctest::Approx(75.0));
    CHECK(dose[1].bright == doctest::Approx(0.0));
    CHECK(dose[2].bright == doctest::Approx(37.5));
    CHECK(dose[3].bright == doctest::Approx(37.5));
}

TEST_CASE("mirror leaves the unselected basis dark") {
    RandomSource rng(2, "bob-optics");
    RandomSource pick(3, "test");
    for (int trial = 0; trial < 2000; ++trial) {
        GateIllumination light;
        const int pulses = static_cast<int>(pick.below(4));
        for (int k = 0; k < pulses; ++k)
            light.push_back({kAllPol[pick.below(5)], k == 0 ? 1.0 : 10.0 + 100.0 * pick.uniform(),
                             k == 0 ? PulseKind::SignalPhoton : PulseKind::BrightPulse});
        const Basis selected = basis_from_bit(pick.next_bit());
        const auto dose = route(ReceiverArchitecture::ExclusiveMirror, light, selected, rng);
        for (int arm : {0, 1}) REQUIRE(total(dose[detector_index(other(selected), arm)]) == 0.0);
    }
}

TEST_CASE("PEM rotates the measurement basis, not the detectors") {
    RandomSource rng(4, "bob-optics");
    const GateIllumination light{{Polarization::Lin135, 80.0, PulseKind::BrightPulse}};
    const auto diag = route(ReceiverArchitecture::ActivePEM, light, Basis::Diagonal, rng);
    REQUIRE(diag.size() == 2);
    CHECK(diag[0].bright == 0.0);
    CHECK(diag[1].bright == doctest::Approx(80.0));
    const auto rect = route(ReceiverArchitecture::ActivePEM, light, Basis::Rectilinear, rng);
    CHECK(rect[0].bright == doctest::Approx(40.0));
    CHECK(rect[1].bright == doctest::Approx(40.0));
}

TEST_CASE("classical power is conserved through every receiver") {
    RandomSource rng(5, "bob-optics");
    RandomSource pick(6, "test");
    for (ReceiverArchitecture arch : kAllArch)
        for (int trial = 0; trial < 500; ++trial) {
            GateIllumination light;
            double input = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double photons = 500.0 * pick.uniform();
                light.push_back({kAllPol[pick.below(5)], photons,
                                 pick.next_bit() ? PulseKind::CwBlinding : PulseKind::BrightPulse});
                input += photons;
            }
            const auto dose = route(arch, light, basis_from_bit(pick.next_bit()), rng);
            double out = 0.0;
            for (const auto& d : dose) out += total(d);
            REQUIRE(out == doctest::Approx(input).epsilon(1e-12));
        }
}

TEST_CASE("a signal photon lands on exactly one detector with Malus frequencies") {
    RandomSource rng(7, "bob-optics");
    const int n = 100'000;
    std::array<int, 4> hits{};
    const GateIllumination light{{Polarization::Lin0, 1.0, PulseKind::SignalPhoton}};
    for (int i = 0; i < n; ++i) {
        const auto dose = route(ReceiverArchitecture::PassiveBS, light, Basis::Rectilinear, rng);
        double sum = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            sum += dose[k].signal;
            if (dose[k].signal > 0.0) ++hits[k];
        }
        REQUIRE(sum == 1.0);
    }
    for (Basis b : {Basis::Rectilinear, Basis::Diagonal})
        for (int arm : {0, 1}) {
            const double expected = 0.5 * oracle::malus_fraction(Polarization::Lin0, b, arm);
            const double observed = static_cast<double>(hits[detector_index(b, arm)]) / n;
            CHECK(std::abs(observed - expected) <= 3 * oracle::binomial_sigma(expected, n) + 1e-12);
        }
}

TEST_CASE("detector counts per architecture") {
    CHECK(detector_count(ReceiverArchitecture::PassiveBS) == 4);
    CHECK(detector_count(ReceiverArchitecture::ActivePEM) == 2);
    CHECK(detector_count(ReceiverArchitecture::ExclusiveMirror) == 4);
    CHECK(detector_index(Basis::Diagonal, 1) == 3);
}
