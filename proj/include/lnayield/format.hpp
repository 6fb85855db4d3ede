#pragma once

#include <string>

namespace lnayield {

/// printf "%.{digits}g": `digits` significant digits, "nan"/"inf" spelled out.
std::string format_significant(double v, int digits);

inline constexpr int kCsvDigits = 6;
inline constexpr int kTextDigits = 4;

}  // namespace lnayield
