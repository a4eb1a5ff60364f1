#pragma once

#include <cmath>
#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sobolev/metrics.hpp"

namespace sobolev::csv {

/// Shortest decimal form that parses back to the same double. Non-finite
/// values print as "nan", "inf" or "-inf".
inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// PSNR cell: "exact" for a zero-error reconstruction, never a float infinity.
inline std::string psnr(const Psnr& p) { return p.exact ? "exact" : number(p.db); }

/// Quotes a field when it contains a separator, quote or newline.
inline std::string field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << field(cells[i]);
  }
  out << '\n';
}

inline constexpr std::string_view kMetricsHeader = "experiment_id,s,sigma,paper_psnr,standard_psnr,l2_error";
inline constexpr std::string_view kTraceHeader = "iter,objective,primal_residual";

}  // namespace sobolev::csv
