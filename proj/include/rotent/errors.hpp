#pragma once

#include <stdexcept>
#include <string>

namespace rotent {

/// Invalid user-supplied parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or produced an out-of-tolerance result (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No Fock state satisfies the requested (N, L, statistics, cutoff) (exit code 4).
class EmptySubspace : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace rotent
