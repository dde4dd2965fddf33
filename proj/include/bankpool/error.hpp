#pragma once

#include <stdexcept>
#include <string>

namespace bankpool {

// Base for every error raised by the simulator.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejected configuration value. `key()` names the offending config key.
class ConfigError : public SimError {
public:
    ConfigError(std::string key, const std::string& what)
        : SimError(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class InvalidParams : public SimError {
public:
    using SimError::SimError;
};

// Accounting identity, book, or ledger desynchronisation.
class ConsistencyError : public SimError {
public:
    using SimError::SimError;
};

}  // namespace bankpool
