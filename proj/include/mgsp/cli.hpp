#pragma once

#include <iosfwd>

namespace mgsp {

/// Exit codes: 0 success, 2 validation error, 1 numeric failure (and a
/// failing property suite).
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mgsp
