#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bb84/config.hpp"

using namespace bb84;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("bb84sim-test-" + name);
    std::ofstream(path) << text;
    return path;
}

ConfigErrorKind kind_of(const std::string& text) {
    SimulationConfig c;
    std::istringstream in(text);
    try {
        apply_config_text(c, in);
        validate(c);
    } catch (const ConfigError& e) {
        return e.kind();
    }
    FAIL("config was accepted: " << text);
    return ConfigErrorKind::InvalidValue;
}

}  // namespace

TEST_CASE("every preset builds and validates") {
    for (const std::string& name : {"baseline", "fig1a-blind", "fig1b-blind", "fig1c-blind", "intercept",
                                    "rng-control", "weak-cw", "partial:0.1", "partial:1"}) {
        CAPTURE(name);
        const SimulationConfig c = preset(name);
        CHECK_NOTHROW(validate(c));
        CHECK(c.session.gates == 1'000'000);
        CHECK(c.preset == name);
    }
    CHECK_THROWS_AS(preset("fig9"), ConfigError);
    CHECK_THROWS_AS(preset("partial:1.5"), ConfigError);
}

TEST_CASE("preset contents") {
    CHECK(preset("fig1a-blind").session.receiver == ReceiverArchitecture::PassiveBS);
    CHECK(preset("fig1b-blind").session.receiver == ReceiverArchitecture::ActivePEM);
    CHECK(preset("fig1c-blind").session.receiver == ReceiverArchitecture::ExclusiveMirror);
    CHECK(preset("rng-control").session.basis_rng_mode == SourceMode::Compromised);
    const auto partial = preset("partial:0.25").session;
    CHECK(partial.attack.kind == AttackKind::BlindingPartial);
    CHECK(partial.attack.fraction == 0.25);
    CHECK(preset("baseline").session.detectors.dark_prob == 0.0);
}

TEST_CASE("flags override the preset") {
    CliFlags f;
    f.preset = "fig1c-blind";
    f.gates = 1'000'000;
    f.seed = 7;
    const SimulationConfig c = parse_config(f);
    CHECK(c.session.receiver == ReceiverArchitecture::ExclusiveMirror);
    CHECK(c.session.attack.kind == AttackKind::BlindingFull);
    CHECK(c.session.gates == 1'000'000);
    CHECK(c.session.seed == 7);
}

TEST_CASE("receiver and attack flags") {
    CliFlags f;
    f.receiver = "mirror";
    f.attack = "blind-partial:0.1";
    const SimulationConfig c = parse_config(f);
    CHECK(c.session.receiver == ReceiverArchitecture::ExclusiveMirror);
    CHECK(c.session.attack.kind == AttackKind::BlindingPartial);
    CHECK(c.session.attack.fraction == 0.1);
    f.attack = "blind-partial:x";
    CHECK_THROWS_AS(parse_config(f), ConfigError);
    f.attack = "laser";
    CHECK_THROWS_AS(parse_config(f), ConfigError);
    f.attack.reset();
    f.receiver = "telescope";
    CHECK_THROWS_AS(parse_config(f), ConfigError);
}

TEST_CASE("config file sections") {
    SimulationConfig c;
    std::istringstream in(R"(; comment
# another comment
[run]
gates = 5000
sessions = 3
seed = 12
qber_sample = 0.2
format = json

[receiver]
architecture = pem
basis_rng = compromised

[detectors]
epsilon = 0.5
dark_prob = 0.001
blind_threshold = 80
click_threshold = 30
superlinear_exponent = 1.5

[channel]
eta = 0.9
eta_ae = 0.8
eta_eb = 0.7

[attack]
strategy = blind-partial:0.3
p_cw = 500
p_pulse = 45
prudent_noise = true
noise_rate = 0.002
partial_run_length = 50
)");
    apply_config_text(c, in);
    const SessionConfig& s = c.session;
    CHECK(s.gates == 5000);
    CHECK(c.sessions == 3);
    CHECK(s.seed == 12);
    CHECK(s.qber_sample_fraction == 0.2);
    CHECK(c.format == OutputFormat::Json);
    CHECK(s.receiver == ReceiverArchitecture::ActivePEM);
    CHECK(s.basis_rng_mode == SourceMode::Compromised);
    CHECK(s.detectors.efficiency == 0.5);
    CHECK(s.detectors.dark_prob == 0.001);
    CHECK(s.detectors.blind_threshold == 80);
    CHECK(s.detectors.click_threshold == 30);
    CHECK(s.detectors.superlinear_exponent == 1.5);
    CHECK(s.channel.eta == 0.9);
    CHECK(s.channel.eta_ae == 0.8);
    CHECK(s.channel.eta_eb == 0.7);
    CHECK(s.attack.kind == AttackKind::BlindingPartial);
    CHECK(s.attack.fraction == 0.3);
    CHECK(s.attack.cw_power == 500);
    CHECK(s.attack.pulse_power == 45);
    CHECK(s.attack.prudent_noise);
    CHECK(s.attack.noise_rate == 0.002);
    CHECK(s.attack.partial_run_length == 50);
}

TEST_CASE("config errors are told apart") {
    CHECK(kind_of("[detectors]\nepsilon = 1.3\n") == ConfigErrorKind::InvalidValue);
    CHECK(kind_of("[detectors]\nefficiency = lots\n") == ConfigErrorKind::InvalidValue);
    CHECK(kind_of("[detectors]\nquantum = 1\n") == ConfigErrorKind::UnknownKey);
    CHECK(kind_of("[lasers]\npower = 1\n") == ConfigErrorKind::UnknownKey);
    CHECK(kind_of("gates = 5\n") == ConfigErrorKind::UnknownKey);
    CHECK(kind_of("[run\ngates = 5\n") == ConfigErrorKind::Syntax);
    CHECK(kind_of("[run]\njust words\n") == ConfigErrorKind::Syntax);

    CHECK(exit_code(ConfigErrorKind::InvalidValue) == 2);
    CHECK(exit_code(ConfigErrorKind::MissingFile) == 4);
    CHECK(exit_code(ConfigErrorKind::Syntax) == 5);
    CHECK(exit_code(ConfigErrorKind::UnknownKey) == 6);
}

TEST_CASE("an invalid value names its field") {
    CliFlags f;
    f.config_path = write_temp("eps.ini", "[detectors]\nefficiency = 1.3\n");
    try {
        parse_config(f);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::InvalidValue);
        CHECK(e.field() == "detectors.efficiency");
        CHECK(exit_code(e.kind()) == kExitConfig);
    }
}

TEST_CASE("missing config file") {
    CliFlags f;
    f.config_path = "/nonexistent/bb84sim.ini";
    try {
        parse_config(f);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::MissingFile);
    }
}

TEST_CASE("preset from file, file over preset, flags over file") {
    CliFlags f;
    f.config_path = write_temp("layers.ini", "[run]\npreset = fig1b-blind\ngates = 777\nseed = 3\n");
    SimulationConfig c = parse_config(f);
    CHECK(c.session.receiver == ReceiverArchitecture::ActivePEM);
    CHECK(c.session.gates == 777);
    CHECK(c.preset == "fig1b-blind");

    f.gates = 999;
    f.preset = "fig1c-blind";
    c = parse_config(f);
    CHECK(c.session.receiver == ReceiverArchitecture::ExclusiveMirror);
    CHECK(c.session.gates == 999);
    CHECK(c.session.seed == 3);
}

TEST_CASE("empty sections are allowed") {
    SimulationConfig c;
    std::istringstream in("[attack]\n[run]\ngates = 1\n");
    CHECK_NOTHROW(apply_config_text(c, in));
    CHECK(c.session.gates == 1);
}
