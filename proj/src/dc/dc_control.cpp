#include "mcsim/dc/dc_control.hpp"

#include "mcsim/sim/errors.hpp"

#include <stdexcept>

namespace mcsim::dc {

MeasurementFilter::MeasurementFilter (int ueId, double alpha) : m_ueId (ueId), m_alpha (alpha)
{
  if (!(alpha > 0.0 && alpha <= 1.0))
    {
      throw ConfigError ("EMA alpha must lie in (0, 1]");
    }
}

void
MeasurementFilter::add_sample (int cellId, double sinrDb)
{
  auto it = m_filtered.find (cellId);
  if (it == m_filtered.end ())
    {
      m_filtered.emplace (cellId, sinrDb);
      return;
    }
  it->second += m_alpha * (sinrDb - it->second);
}

MeasurementReport
MeasurementFilter::report (double now) const
{
  return MeasurementReport{m_ueId, m_filtered, now};
}

int
select_secondary (const MeasurementReport& report, int current, const DcThresholds& thresholds)
{
  if (report.sinr_db.empty ())
    {
      throw std::logic_error ("select_secondary on an empty measurement report");
    }
  int best = kNoCell;
  double bestSinr = 0.0;
  for (const auto& [cell, sinr] : report.sinr_db)
    {
      if (best == kNoCell || sinr > bestSinr)
        {
          best = cell;
          bestSinr = sinr;
        }
    }
  if (bestSinr < thresholds.outage_threshold_db)
    {
      return kNoCell;
    }
  auto cur = report.sinr_db.find (current);
  if (cur == report.sinr_db.end () || cur->second < thresholds.outage_threshold_db)
    {
      return best;
    }
  return bestSinr >= cur->second + thresholds.hysteresis_db ? best : current;
}

std::string
to_string (DcMode mode)
{
  return mode == DcMode::MmwaveActive ? "MMWAVE_ACTIVE" : "LTE_FALLBACK";
}

FallbackTransition
detect_outage_and_fallback (DcState& state, const MeasurementReport& report, const DcThresholds& thresholds)
{
  bool allDown = true;
  bool anyRecovered = false;
  int best = kNoCell;
  double bestSinr = 0.0;
  for (const auto& [cell, sinr] : report.sinr_db)
    {
      allDown = allDown && sinr < thresholds.outage_threshold_db;
      anyRecovered = anyRecovered || sinr >= thresholds.outage_threshold_db + thresholds.hysteresis_db;
      if (best == kNoCell || sinr > bestSinr)
        {
          best = cell;
          bestSinr = sinr;
        }
    }
  if (state.mode == DcMode::MmwaveActive && allDown)
    {
      state.mode = DcMode::LteFallback;
      state.secondary_cell = kNoCell;
      return FallbackTransition::EnterFallback;
    }
  if (state.mode == DcMode::LteFallback && anyRecovered && !state.handover_in_progress)
    {
      state.mode = DcMode::MmwaveActive;
      state.secondary_cell = best;
      return FallbackTransition::Recover;
    }
  return FallbackTransition::None;
}

HandoverTiming
handover_timing (double triggerTime, double x2LatencyS, double rrcDelayS)
{
  HandoverTiming t;
  t.trigger_time = triggerTime;
  t.execution_time = triggerTime + 2.0 * x2LatencyS;
  t.completion_time = triggerTime + 4.0 * x2LatencyS + rrcDelayS;
  return t;
}

void
begin_handover (DcState& state, int targetCell)
{
  if (state.handover_in_progress)
    {
      throw std::logic_error ("handover already in progress for ue " + std::to_string (state.ue_id));
    }
  if (targetCell == state.secondary_cell)
    {
      throw std::logic_error ("handover target equals the current secondary cell");
    }
  state.handover_in_progress = true;
}

} // namespace mcsim::dc
