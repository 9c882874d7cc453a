#pragma once

#include <map>
#include <optional>
#include <string>

namespace mcsim::dc {

inline constexpr int kNoCell = -1;

struct DcThresholds
{
  double outage_threshold_db = -5.0;
  double hysteresis_db = 3.0;
};

struct MeasurementReport
{
  int ue_id = 0;
  std::map<int, double> sinr_db; ///< cell_id -> filtered wideband SINR
  double report_time = 0.0;
};

/// Per-UE EMA filter over the wideband SINR of every mmWave cell.
class MeasurementFilter
{
public:
  explicit MeasurementFilter (int ueId, double alpha = 0.1);

  /// Feeds one sample per cell; the first sample of a cell initializes it.
  void add_sample (int cellId, double sinrDb);

  /// Current filtered table stamped with `now`.
  MeasurementReport report (double now) const;

  double alpha () const { return m_alpha; }

private:
  int m_ueId;
  double m_alpha;
  std::map<int, double> m_filtered;
};

/// Best cell, keeping `current` unless the best beats it by at least the
/// hysteresis. kNoCell when every cell is below the outage threshold.
int select_secondary (const MeasurementReport& report, int current, const DcThresholds& thresholds);

enum class DcMode
{
  MmwaveActive,
  LteFallback
};

std::string to_string (DcMode mode);

struct DcState
{
  int ue_id = 0;
  int anchor_cell = 0;
  int secondary_cell = kNoCell;
  DcMode mode = DcMode::LteFallback;
  bool handover_in_progress = false;
};

/// Outcome of one evaluation of the fallback rule.
enum class FallbackTransition
{
  None,
  EnterFallback,
  Recover
};

/// Applies the outage rule to `state`: every cell below the outage threshold
/// enters LTE_FALLBACK; in fallback, any cell at or above
/// threshold + hysteresis recovers onto the best cell. Returns what changed.
FallbackTransition detect_outage_and_fallback (DcState& state, const MeasurementReport& report,
                                               const DcThresholds& thresholds);

/// Timing of the fast secondary-cell handover: a four-message X2 exchange
/// (request, ack, switch command, release) and one RRC reconfiguration.
struct HandoverTiming
{
  double trigger_time = 0.0;
  double execution_time = 0.0; ///< source stops forwarding, data goes over X2
  double completion_time = 0.0; ///< PDCP reroutes to the target
};

HandoverTiming handover_timing (double triggerTime, double x2LatencyS, double rrcDelayS);

/// Marks a handover in progress. Throws std::logic_error when one is already
/// running or the target equals the current secondary.
void begin_handover (DcState& state, int targetCell);

} // namespace mcsim::dc
