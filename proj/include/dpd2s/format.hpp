#pragma once

#include <string>

namespace dpd2s {

/// Shortest decimal text that parses back to exactly `x`; "NaN"/"inf" spelled
/// as "nan", "inf", "-inf".
std::string format_double(double x);

}  // namespace dpd2s
