#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bb84/error.hpp"
#include "bb84/protocol.hpp"

namespace bb84 {

enum class OutputFormat { Csv, Json, Both };

/// A full batch: the per-session template plus batch-level settings.
struct SimulationConfig {
    SessionConfig session;
    std::uint64_t sessions = 1;
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Both;
    std::string preset = "custom";
};

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitMissingConfig = 4;
inline constexpr int kExitConfigSyntax = 5;
inline constexpr int kExitUnknownKey = 6;

int exit_code(ConfigErrorKind kind) noexcept;

/// Clicks every photon and never counts in the dark: the reference receiver.
DetectorConfig ideal_detectors();

/// Dark rate giving a 4-detector calibrated coincidence probability close
/// to 1e-4 (about 1.6 % noise clicks per gate).
inline constexpr double kOperatingDarkProb = 0.004;

std::vector<std::string> preset_names();

/// Named presets: baseline, fig1a-blind, fig1b-blind, fig1c-blind,
/// intercept, rng-control, weak-cw, partial:<f>. Throws ConfigError.
SimulationConfig preset(std::string_view name);

/// `none|intercept|blind|blind-partial:<f>|rng-control`
AttackStrategy parse_attack(std::string_view text);
/// `passive|pem|mirror`
ReceiverArchitecture parse_receiver(std::string_view text);
OutputFormat parse_format(std::string_view text);

/// Applies a key-value file with [run], [receiver], [detectors], [channel]
/// and [attack] sections. Unknown sections or keys are rejected. The
/// `preset` key of [run] is ignored here (see parse_config).
void apply_config_text(SimulationConfig& config, std::istream& in);
void apply_config_file(SimulationConfig& config, const std::filesystem::path& path);

/// Reads just the [run] preset key of a config stream, if present.
std::optional<std::string> preset_in_config(std::istream& in);

/// Command-line values; unset members leave the config untouched.
struct CliFlags {
    std::optional<std::string> preset;
    std::optional<std::uint64_t> gates;
    std::optional<std::uint64_t> sessions;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> receiver;
    std::optional<std::string> attack;
    std::optional<std::filesystem::path> config_path;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::string> format;
};

/// Preset (flag, else file) -> config file -> flags, then validation.
SimulationConfig parse_config(const CliFlags& flags);

void validate(const SimulationConfig& config);

}  // namespace bb84
