#pragma once

#include <stdexcept>
#include <string>

namespace bb84 {

enum class ConfigErrorKind { InvalidValue, UnknownKey, Syntax, MissingFile };

/// Rejected configuration. `field` names the offending key, e.g.
/// "detectors.efficiency", when one applies.
class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          kind_(kind),
          field_(std::move(field)) {}

    ConfigErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    ConfigErrorKind kind_;
    std::string field_;
};

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bb84
