#pragma once

#include <stdexcept>
#include <string>

namespace nsp {

/// Invalid physical or numerical parameters (bad config, out-of-range inputs).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Irrecoverable failure of the time integration (dt underflow, shell crossing
/// that survives step rejection). Carries a short diagnostic dump.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nsp
