#pragma once

#include <stdexcept>
#include <string>

namespace nlfb {

// Error taxonomy mirrors the CLI exit codes:
//   ConfigError       -> 2  (bad schema, bad parameters)
//   NumericError      -> 3  (iteration failed, budget exhausted, dt underflow)
//   InapplicableError -> 4  (model precondition not met for this regime)

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct InapplicableError : std::runtime_error {
    explicit InapplicableError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlfb
