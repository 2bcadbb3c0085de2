#pragma once

#include <iosfwd>
#include <string>

#include "qpww/timestepper.hpp"

namespace qpww {

inline constexpr int kSeriesCsvVersion = 1;

/// Header row then one row per sample (every `stride`-th sample plus the
/// last). Values use %.17g so reruns compare byte for byte.
void write_series_csv(std::ostream& out, const TimeSeries& series, int stride = 1);

/// Shortest round-trip-exact decimal form used by every CSV writer.
std::string format_double(double x);

}  // namespace qpww
