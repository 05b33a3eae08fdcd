#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fecpareto {

// Invalid parameters or configuration (bad flag values, out-of-range code
// parameters, divisibility violations). Maps to CLI exit status 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation could not be completed (target FER unreachable, unbracketed
// interpolation, exhausted simulation budget). Maps to CLI exit status 3.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

// Damaged cache file. Carries the index of the offending record.
class CacheError : public std::runtime_error {
public:
    CacheError(const std::string& what, long record_index)
        : std::runtime_error(what), record(record_index) {}
    long record;
};

// Raised when an evaluation needs inner-decoder distributions that are not in
// the cache and no simulation budget was granted. Maps to CLI exit status 4.
class NeedsSimulation : public std::runtime_error {
public:
    NeedsSimulation(const std::string& what, std::vector<std::string> keys)
        : std::runtime_error(what), missing_keys(std::move(keys)) {}
    std::vector<std::string> missing_keys;
};

} // namespace fecpareto
