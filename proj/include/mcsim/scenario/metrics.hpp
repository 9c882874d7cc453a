#pragma once

#include "mcsim/scenario/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mcsim::scenario {

/// Metrics of one run.
struct RunMetrics
{
  double duration_s = 0.0;
  double s_rlc_bps = 0.0;
  /// "mac_cc<k>_bps" for mmWave carriers (summed over cells),
  /// "mac_lte_cc<k>_bps" for LTE carriers.
  std::map<std::string, double> per_cc_mac_bps;
  int handover_count = 0;
  double fallback_time_fraction = 0.0;

  /// (metric, value, unit) rows in a stable order.
  std::vector<std::tuple<std::string, double, std::string>> rows () const;
};

std::string mac_metric_key (const std::string& rat, int ccId);

/// Recomputes run metrics from parsed traces. Row order does not matter.
RunMetrics summarize (const std::vector<MacRow>& mac, const std::vector<RlcRow>& rlc, const std::vector<DcRow>& dc,
                      double durationS);

/// File form: reads run traces from disk; a malformed line throws TraceError
/// naming the file and line. A missing dc file counts as an empty trace.
RunMetrics summarize_files (const std::string& macPath, const std::string& rlcPath, const std::string& dcPath,
                            double durationS);

/// Half-width of the 95% Student-t confidence interval of the mean;
/// std::nullopt for fewer than two samples.
std::optional<double> ci95_half_width (const std::vector<double>& samples);

struct SummaryRow
{
  std::string metric;
  double mean = 0.0;
  std::optional<double> ci95;
  std::string unit;
};

/// Mean and CI of every metric over runs, followed by any fixed descriptor rows.
std::vector<SummaryRow> aggregate (const std::vector<RunMetrics>& runs);

void write_summary_csv (std::ostream& out, const std::vector<SummaryRow>& rows);

} // namespace mcsim::scenario
