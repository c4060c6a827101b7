#pragma once

#include <stdexcept>
#include <string>

namespace ledgerflow {

// Analysis-level precondition violations (bad shares, empty series, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable / unwritable streams and files.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid generator or run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ledgerflow
