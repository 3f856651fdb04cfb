#include "mqs/io/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mqs/errors.hpp"

namespace mqs {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace(const TransientResult& result, std::ostream& out) {
  if (result.rows.empty()) throw std::invalid_argument("write_trace: result has no rows");
  out << kTraceHeader << '\n';
  for (const TraceRow& r : result.rows) {
    out << format_double(r.t) << ',' << format_double(r.b_probe) << ',' << r.iters_src << ',' << r.iters_cpl_prev
        << ',' << r.iters_cpl_cur << ',' << r.basis_cols << ',' << r.pod_k << ',' << format_double(r.pod_info)
        << '\n';
  }
}

void write_trace(const TransientResult& result, const std::filesystem::path& path) {
  if (result.rows.empty()) throw std::invalid_argument("write_trace: result has no rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write trace " + path.string());
  write_trace(result, out);
  if (!out) throw ModelError("write failed for trace " + path.string());
}

TraceDifference compare_traces(const TransientResult& run, const TransientResult& reference) {
  TraceDifference d;
  double num = 0.0, den = 0.0;
  std::size_t j = 0;
  double last_b = 0.0, last_ref = 0.0;
  for (const TraceRow& r : run.rows) {
    while (j < reference.rows.size() && reference.rows[j].t < r.t * (1.0 - 1e-9)) ++j;
    if (j == reference.rows.size()) break;
    if (std::abs(reference.rows[j].t - r.t) > 1e-9 * std::max(1.0, std::abs(r.t))) continue;
    const double diff = r.b_probe - reference.rows[j].b_probe;
    num += diff * diff;
    den += reference.rows[j].b_probe * reference.rows[j].b_probe;
    last_b = r.b_probe;
    last_ref = reference.rows[j].b_probe;
    ++d.common_rows;
  }
  if (d.common_rows == 0) throw std::invalid_argument("compare_traces: no common output times");
  d.rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  d.endpoint = last_ref != 0.0 ? std::abs(last_b - last_ref) / std::abs(last_ref) : std::abs(last_b - last_ref);
  return d;
}

}  // namespace mqs
