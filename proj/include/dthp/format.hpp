#pragma once

#include <string>

namespace dthp {

// Shortest round-trip decimal representation, independent of locale.
std::string format_double(double value);

} // namespace dthp
