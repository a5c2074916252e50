#pragma once

#include <string>

namespace fdw {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace fdw
