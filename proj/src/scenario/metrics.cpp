#include "mcsim/scenario/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace mcsim::scenario {

std::string
mac_metric_key (const std::string& rat, int ccId)
{
  return (rat == "LTE" ? "mac_lte_cc" : "mac_cc") + std::to_string (ccId) + "_bps";
}

std::vector<std::tuple<std::string, double, std::string>>
RunMetrics::rows () const
{
  std::vector<std::tuple<std::string, double, std::string>> out;
  out.emplace_back ("s_rlc_bps", s_rlc_bps, "bit/s");
  for (const auto& [key, value] : per_cc_mac_bps)
    {
      out.emplace_back (key, value, "bit/s");
    }
  out.emplace_back ("handover_count", static_cast<double> (handover_count), "count");
  out.emplace_back ("fallback_time_fraction", fallback_time_fraction, "ratio");
  return out;
}

RunMetrics
summarize (const std::vector<MacRow>& mac, const std::vector<RlcRow>& rlc, const std::vector<DcRow>& dc,
           double durationS)
{
  RunMetrics m;
  m.duration_s = durationS;
  std::map<std::string, std::uint64_t> acked;
  for (const auto& r : mac)
    {
      auto& slot = acked[mac_metric_key (r.rat, r.cc_id)];
      if (r.outcome == "ACK")
        {
          slot += r.tb_bytes;
        }
    }
  for (const auto& [key, bytes] : acked)
    {
      m.per_cc_mac_bps[key] = static_cast<double> (bytes) * 8.0 / durationS;
    }
  std::uint64_t delivered = 0;
  for (const auto& r : rlc)
    {
      if (r.event == "deliver")
        {
          delivered += r.bytes;
        }
    }
  m.s_rlc_bps = static_cast<double> (delivered) * 8.0 / durationS;

  std::vector<DcRow> events;
  for (const auto& r : dc)
    {
      if (r.event == "HO_DONE")
        {
          ++m.handover_count;
        }
      if (r.event == "FALLBACK" || r.event == "RECOVERY")
        {
          events.push_back (r);
        }
    }
  std::stable_sort (events.begin (), events.end (),
                    [] (const DcRow& a, const DcRow& b) { return a.time_us < b.time_us; });
  const std::int64_t endUs = to_us (durationS);
  std::int64_t inFallback = 0;
  std::int64_t since = -1; // start of the open fallback interval, -1 if none
  for (const auto& e : events)
    {
      if (e.event == "FALLBACK" && since < 0)
        {
          since = e.time_us;
        }
      else if (e.event == "RECOVERY" && since >= 0)
        {
          inFallback += e.time_us - since;
          since = -1;
        }
    }
  if (since >= 0)
    {
      inFallback += endUs - since;
    }
  m.fallback_time_fraction = endUs > 0 ? static_cast<double> (inFallback) / static_cast<double> (endUs) : 0.0;
  return m;
}

RunMetrics
summarize_files (const std::string& macPath, const std::string& rlcPath, const std::string& dcPath, double durationS)
{
  auto open = [] (const std::string& path) {
    std::ifstream in (path);
    if (!in)
      {
        throw TraceError (path, 0, "cannot open");
      }
    return in;
  };
  auto macIn = open (macPath);
  auto rlcIn = open (rlcPath);
  auto mac = read_mac_trace (macIn, macPath);
  auto rlc = read_rlc_trace (rlcIn, rlcPath);
  std::vector<DcRow> dc;
  std::ifstream dcIn (dcPath);
  if (dcIn)
    {
      dc = read_dc_trace (dcIn, dcPath);
    }
  return summarize (mac, rlc, dc, durationS);
}

std::optional<double>
ci95_half_width (const std::vector<double>& samples)
{
  const std::size_t n = samples.size ();
  if (n < 2)
    {
      return std::nullopt;
    }
  const double mean = std::accumulate (samples.begin (), samples.end (), 0.0) / static_cast<double> (n);
  double ss = 0.0;
  for (double x : samples)
    {
      ss += (x - mean) * (x - mean);
    }
  const double sd = std::sqrt (ss / static_cast<double> (n - 1));
  boost::math::students_t dist (static_cast<double> (n - 1));
  const double t = boost::math::quantile (boost::math::complement (dist, 0.025));
  return t * sd / std::sqrt (static_cast<double> (n));
}

std::vector<SummaryRow>
aggregate (const std::vector<RunMetrics>& runs)
{
  std::vector<SummaryRow> out;
  if (runs.empty ())
    {
      return out;
    }
  // Union of metric names in first-seen order; a run lacking a metric counts as 0.
  std::vector<std::pair<std::string, std::string>> names;
  for (const auto& r : runs)
    {
      for (const auto& [name, value, unit] : r.rows ())
        {
          if (std::find_if (names.begin (), names.end (), [&] (const auto& p) { return p.first == name; }) ==
              names.end ())
            {
              names.emplace_back (name, unit);
            }
        }
    }
  for (const auto& [name, unit] : names)
    {
      std::vector<double> xs;
      for (const auto& r : runs)
        {
          double v = 0.0;
          for (const auto& [n, value, u] : r.rows ())
            {
              if (n == name)
                {
                  v = value;
                }
            }
          xs.push_back (v);
        }
      SummaryRow row;
      row.metric = name;
      row.mean = std::accumulate (xs.begin (), xs.end (), 0.0) / static_cast<double> (xs.size ());
      row.ci95 = ci95_half_width (xs);
      row.unit = unit;
      out.push_back (row);
    }
  return out;
}

void
write_summary_csv (std::ostream& out, const std::vector<SummaryRow>& rows)
{
  out << "metric,mean,ci95,unit\n";
  char buf[64];
  for (const auto& r : rows)
    {
      std::snprintf (buf, sizeof buf, "%.10g", r.mean);
      out << r.metric << ',' << buf << ',';
      if (r.ci95)
        {
          std::snprintf (buf, sizeof buf, "%.10g", *r.ci95);
          out << buf;
        }
      out << ',' << r.unit << '\n';
    }
}

} // namespace mcsim::scenario
