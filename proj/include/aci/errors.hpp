#pragma once

#include <stdexcept>
#include <string>

namespace aci {

// Invariant violation in user-supplied data. `field()` is a dotted path such
// as "channel.noise_power" or "devices[3].bandwidth".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aci
