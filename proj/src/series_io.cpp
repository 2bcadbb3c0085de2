#include "qpww/series_io.hpp"

#include <cstdio>
#include <ostream>

namespace qpww {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_series_csv(std::ostream& out, const TimeSeries& series, int stride) {
  if (stride < 1) stride = 1;
  for (std::size_t c = 0; c < series.columns.size(); ++c) out << (c ? "," : "") << series.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < series.rows.size(); ++r) {
    if (r % static_cast<std::size_t>(stride) != 0 && r + 1 != series.rows.size()) continue;
    const auto& row = series.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

}  // namespace qpww
