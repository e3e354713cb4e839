#pragma once

#include <stdexcept>
#include <string>

namespace bdris {

// Invalid scenario/sweep files or bad field values. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: failed factorization, rank deficiency, a quadratic form that
// should be real coming back complex. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bdris
