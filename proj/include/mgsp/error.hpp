#pragma once

#include <stdexcept>
#include <string>

namespace mgsp {

// Bad input: shapes, indices, malformed files, invalid parameters.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed its own residual or rank checks.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw ValidationError(what);
}

} // namespace mgsp
