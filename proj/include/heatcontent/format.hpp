#pragma once

#include <string>

namespace heatcontent {

/// Shortest decimal string that round-trips to the same double.
std::string shortest(double v);

/// 12 significant digits, for human-facing output.
std::string significant12(double v);

}  // namespace heatcontent
