#ifndef SCSVM_ERRORS_HPP_
#define SCSVM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace scsvm {

/// Invalid algorithm parameters, malformed experiment specs, bad CLI flags.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input data. The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace scsvm

#endif
