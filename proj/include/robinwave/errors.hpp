#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robinwave {

/// A field or state contains non-finite values; carries the first bad node.
class EscapedStateError : public std::runtime_error {
public:
    EscapedStateError(std::size_t node, const std::string& what_arg)
        : std::runtime_error(what_arg), node_(node) {}
    std::size_t node() const { return node_; }

private:
    std::size_t node_;
};

/// A criterion was asked to run outside its regime (e.g. damped criterion
/// with b <= 0). Maps to CLI exit code 3.
class ApplicabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config file parse or validation failure. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what_arg, int line = 0)
        : std::runtime_error(what_arg), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

}  // namespace robinwave
