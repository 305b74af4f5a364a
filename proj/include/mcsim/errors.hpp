#pragma once

#include <stdexcept>
#include <string>

namespace mcsim {

// Invalid or inconsistent experiment configuration. The message names the
// offending key or field so the CLI can report it verbatim.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mcsim
