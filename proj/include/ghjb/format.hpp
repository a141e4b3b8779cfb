#pragma once

#include <string>

namespace ghjb {

// Shortest decimal form that round-trips exactly.
std::string format_double(double v);

// 17 significant digits (round-trip exact, fixed width policy for CSV files).
std::string format_sig17(double v);

}  // namespace ghjb
