#include "bb84/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bb84 {

namespace pt = boost::property_tree;

int exit_code(ConfigErrorKind kind) noexcept {
    switch (kind) {
        case ConfigErrorKind::InvalidValue: return kExitConfig;
        case ConfigErrorKind::MissingFile: return kExitMissingConfig;
        case ConfigErrorKind::Syntax: return kExitConfigSyntax;
        case ConfigErrorKind::UnknownKey: return kExitUnknownKey;
    }
    return kExitConfig;
}

DetectorConfig ideal_detectors() {
    DetectorConfig d;
    d.efficiency = 1.0;
    d.dark_prob = 0.0;
    return d;
}

std::vector<std::string> preset_names() {
    return {"baseline", "fig1a-blind", "fig1b-blind", "fig1c-blind", "intercept", "rng-control", "weak-cw", "partial:<f>"};
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw ConfigError(ConfigErrorKind::InvalidValue, field, what);
}

double to_double(std::string_view text, const std::string& field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        invalid(field, "not a number: '" + std::string(text) + "'");
    return value;
}

std::uint64_t to_u64(std::string_view text, const std::string& field) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        invalid(field, "not a non-negative integer: '" + std::string(text) + "'");
    return value;
}

bool to_bool(std::string_view text, const std::string& field) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    invalid(field, "not a boolean: '" + std::string(text) + "'");
}

SourceMode to_mode(std::string_view text, const std::string& field) {
    if (text == "private") return SourceMode::Private;
    if (text == "compromised") return SourceMode::Compromised;
    invalid(field, "expected private|compromised");
}

}  // namespace

AttackStrategy parse_attack(std::string_view text) {
    AttackStrategy s;
    constexpr std::string_view partial = "blind-partial:";
    if (text == "none") {
        s.kind = AttackKind::NoAttack;
    } else if (text == "intercept") {
        s.kind = AttackKind::InterceptResend;
    } else if (text == "blind") {
        s.kind = AttackKind::BlindingFull;
    } else if (text == "rng-control") {
        s.kind = AttackKind::RngControl;
    } else if (text.starts_with(partial)) {
        s.kind = AttackKind::BlindingPartial;
        s.fraction = to_double(text.substr(partial.size()), "attack");
        if (!(s.fraction >= 0.0 && s.fraction <= 1.0)) invalid("attack", "partial fraction must be in [0,1]");
    } else {
        invalid("attack", "expected none|intercept|blind|blind-partial:<f>|rng-control, got '" + std::string(text) + "'");
    }
    return s;
}

ReceiverArchitecture parse_receiver(std::string_view text) {
    if (text == "passive") return ReceiverArchitecture::PassiveBS;
    if (text == "pem") return ReceiverArchitecture::ActivePEM;
    if (text == "mirror") return ReceiverArchitecture::ExclusiveMirror;
    invalid("receiver", "expected passive|pem|mirror, got '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "both") return OutputFormat::Both;
    invalid("format", "expected csv|json|both, got '" + std::string(text) + "'");
}

SimulationConfig preset(std::string_view name) {
    SimulationConfig c;
    c.preset = std::string(name);
    SessionConfig& s = c.session;
    s.gates = 1'000'000;

    if (name == "baseline") {
        s.detectors = ideal_detectors();
    } else if (name == "fig1a-blind") {
        s.attack.kind = AttackKind::BlindingFull;
    } else if (name == "fig1b-blind") {
        s.receiver = ReceiverArchitecture::ActivePEM;
        s.attack.kind = AttackKind::BlindingFull;
    } else if (name == "fig1c-blind") {
        s.receiver = ReceiverArchitecture::ExclusiveMirror;
        s.attack.kind = AttackKind::BlindingFull;
    } else if (name == "intercept") {
        s.detectors = ideal_detectors();
        s.attack.kind = AttackKind::InterceptResend;
    } else if (name == "rng-control") {
        s.receiver = ReceiverArchitecture::ExclusiveMirror;
        s.basis_rng_mode = SourceMode::Compromised;
        s.detectors = ideal_detectors();
        s.attack.kind = AttackKind::RngControl;
    } else if (name == "weak-cw") {
        // 20 photons of circular light per gate, 10 on each lit detector,
        // enough to hold them saturated but with no faked-state pulses.
        s.receiver = ReceiverArchitecture::ExclusiveMirror;
        s.detectors.dark_prob = kOperatingDarkProb;
        s.detectors.blind_threshold = 10.0;
        s.attack.kind = AttackKind::BlindingFull;
        s.attack.cw_power = 20.0;
        s.attack.pulse_power = 0.0;
    } else if (name.starts_with("partial:")) {
        s.receiver = ReceiverArchitecture::ExclusiveMirror;
        s.attack = parse_attack("blind-partial:" + std::string(name.substr(8)));
    } else {
        throw ConfigError(ConfigErrorKind::InvalidValue, "preset", "unknown preset '" + std::string(name) + "'");
    }
    return c;
}

namespace {

pt::ptree read_ini(std::istream& in) {
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(ConfigErrorKind::Syntax, "", std::string("malformed config: ") + e.what());
    }
    return tree;
}

void apply_key(SimulationConfig& c, const std::string& section, const std::string& key, const std::string& value) {
    const std::string field = section + "." + key;
    SessionConfig& s = c.session;
    auto unknown = [&] { throw ConfigError(ConfigErrorKind::UnknownKey, field, "unknown key"); };

    if (section == "run") {
        if (key == "gates") s.gates = to_u64(value, field);
        else if (key == "sessions") c.sessions = to_u64(value, field);
        else if (key == "seed") s.seed = to_u64(value, field);
        else if (key == "qber_sample") s.qber_sample_fraction = to_double(value, field);
        else if (key == "out") c.out_dir = value;
        else if (key == "format") c.format = parse_format(value);
        else if (key == "preset") return;
        else unknown();
    } else if (section == "receiver") {
        if (key == "architecture") s.receiver = parse_receiver(value);
        else if (key == "basis_rng") s.basis_rng_mode = to_mode(value, field);
        else unknown();
    } else if (section == "detectors") {
        DetectorConfig& d = s.detectors;
        if (key == "efficiency" || key == "epsilon") d.efficiency = to_double(value, field);
        else if (key == "dark_prob") d.dark_prob = to_double(value, field);
        else if (key == "blind_threshold") d.blind_threshold = to_double(value, field);
        else if (key == "click_threshold") d.click_threshold = to_double(value, field);
        else if (key == "superlinear_exponent") d.superlinear_exponent = to_double(value, field);
        else unknown();
    } else if (section == "channel") {
        if (key == "eta") s.channel.eta = to_double(value, field);
        else if (key == "eta_ae") s.channel.eta_ae = to_double(value, field);
        else if (key == "eta_eb") s.channel.eta_eb = to_double(value, field);
        else unknown();
    } else if (section == "attack") {
        AttackStrategy& a = s.attack;
        if (key == "strategy") {
            const AttackStrategy parsed = parse_attack(value);
            a.kind = parsed.kind;
            a.fraction = parsed.fraction;
        } else if (key == "p_cw") a.cw_power = to_double(value, field);
        else if (key == "p_pulse") a.pulse_power = to_double(value, field);
        else if (key == "prudent_noise") a.prudent_noise = to_bool(value, field);
        else if (key == "noise_rate") a.noise_rate = to_double(value, field);
        else if (key == "partial_run_length") a.partial_run_length = to_u64(value, field);
        else unknown();
    } else {
        throw ConfigError(ConfigErrorKind::UnknownKey, section, "unknown section");
    }
}

}  // namespace

void apply_config_text(SimulationConfig& config, std::istream& in) {
    const pt::ptree tree = read_ini(in);
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(ConfigErrorKind::UnknownKey, section, "key outside of any section");
        for (const auto& [key, value] : body) apply_key(config, section, key, value.data());
    }
}

std::optional<std::string> preset_in_config(std::istream& in) {
    const pt::ptree tree = read_ini(in);
    if (auto v = tree.get_optional<std::string>("run.preset")) return *v;
    return std::nullopt;
}

namespace {

std::ifstream open_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::MissingFile, "config", "cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

void apply_config_file(SimulationConfig& config, const std::filesystem::path& path) {
    std::ifstream in = open_config(path);
    apply_config_text(config, in);
}

void validate(const SimulationConfig& config) {
    validate(config.session);
}

SimulationConfig parse_config(const CliFlags& flags) {
    std::optional<std::string> preset_name = flags.preset;
    if (!preset_name && flags.config_path) {
        std::ifstream in = open_config(*flags.config_path);
        preset_name = preset_in_config(in);
    }

    SimulationConfig config;
    config.session.gates = 1'000'000;
    if (preset_name) config = preset(*preset_name);
    if (flags.config_path) apply_config_file(config, *flags.config_path);

    if (flags.gates) config.session.gates = *flags.gates;
    if (flags.sessions) config.sessions = *flags.sessions;
    if (flags.seed) config.session.seed = *flags.seed;
    if (flags.receiver) config.session.receiver = parse_receiver(*flags.receiver);
    if (flags.attack) {
        const AttackStrategy parsed = parse_attack(*flags.attack);
        config.session.attack.kind = parsed.kind;
        config.session.attack.fraction = parsed.fraction;
    }
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.format) config.format = parse_format(*flags.format);

    validate(config);
    return config;
}

}  // namespace bb84
