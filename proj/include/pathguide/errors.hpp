#pragma once

#include <stdexcept>
#include <string>

namespace pathguide {

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidPalette : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyRegion : std::domain_error {
    using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure in a scenario/config/palette file; carries the offending line.
struct ParseError : std::runtime_error {
    ParseError(const std::string& file, int line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
          line_number(line) {}

    int line_number;
};

}  // namespace pathguide
