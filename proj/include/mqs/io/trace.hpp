#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mqs/schur/transient_result.hpp"

namespace mqs {

inline constexpr const char* kTraceHeader = "t,B_probe,iters_src,iters_cpl_prev,iters_cpl_cur,basis_cols,pod_k,pod_info";

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

/// One CSV row per output time under kTraceHeader. Throws
/// std::invalid_argument for an empty result and ModelError if the file
/// cannot be written.
void write_trace(const TransientResult& result, std::ostream& out);
void write_trace(const TransientResult& result, const std::filesystem::path& path);

struct TraceDifference {
  double rel_l2 = 0.0;    // ||b - b_ref|| / ||b_ref|| over common output times
  double endpoint = 0.0;  // |b - b_ref| / |b_ref| at the last common time
  std::size_t common_rows = 0;
};

/// Compares probe traces on the output times both share (to 1e-9 relative).
TraceDifference compare_traces(const TransientResult& run, const TransientResult& reference);

}  // namespace mqs
