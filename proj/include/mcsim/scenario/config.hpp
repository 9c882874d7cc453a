#pragma once

#include "mcsim/ca/cc_manager.hpp"
#include "mcsim/channel/carrier.hpp"
#include "mcsim/channel/carrier_channel.hpp"
#include "mcsim/dc/dc_control.hpp"
#include "mcsim/mac/harq.hpp"
#include "mcsim/rlc/pdcp.hpp"
#include "mcsim/rlc/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mcsim::scenario {

struct CellConfig
{
  int cell_id = 1;
  channel::Rat rat = channel::Rat::Mmwave;
  double x_m = 0.0;
  double y_m = 0.0;
  double tx_power_dbm = 30.0; ///< total over the cell's carriers
  int antenna_elements = 64;
};

enum class Placement
{
  Fixed,
  Uniform
};

enum class MobilityModel
{
  Static,
  RandomWalk
};

struct UeConfig
{
  Placement placement = Placement::Fixed;
  double distance_m = 100.0; ///< fixed placement, from the origin
  double angle_deg = 0.0;
  std::optional<std::pair<double, double>> position_m; ///< overrides distance/angle
  double min_distance_m = 10.0;
  double d_max_m = 150.0;
  MobilityModel mobility = MobilityModel::Static;
  double speed_mps = 1.0;
  double epoch_s = 1.0;
  double bound_radius_m = 150.0;
  int antenna_elements = 16;
};

enum class TrafficKind
{
  FullBuffer,
  Cbr
};

struct TrafficConfig
{
  TrafficKind kind = TrafficKind::FullBuffer;
  double rate_bps = 100e6;
  std::uint32_t packet_bytes = 1500;
  std::uint64_t backlog_bytes = 2'000'000; ///< full buffer: data kept queued below the PDCP
};

enum class BlockageMode
{
  Random,
  Scripted
};

struct BlockageWindow
{
  double start_s = 0.0;
  double end_s = 0.0;
  int cell_id = -1; ///< -1: every mmWave cell
};

struct BlockageConfig
{
  double attenuation_db = 30.0;
  channel::BlockageDynamics dynamics;
  std::map<int, bool> per_cc; ///< mmWave cc_id -> blockage enabled
  BlockageMode mode = BlockageMode::Random;
  std::vector<BlockageWindow> windows;
};

struct ChannelConfig
{
  channel::LosMode los_mode = channel::LosMode::Nlos;
  double noise_figure_db = 5.0;
  double shadowing_sigma_los_db = 4.0;
  double shadowing_sigma_nlos_db = 6.0;
  channel::FadingParams fading;
  double fading_period_s = 0.01;
  double update_period_s = 1e-3;
  BlockageConfig blockage;
};

struct ScriptedHandover
{
  double time_s = 0.0;
  int target_cell = 0;
};

struct DcConfig
{
  bool enabled = false;
  rlc::RoutingPolicy routing_policy = rlc::RoutingPolicy::MmwaveWithFallback;
  double split_weight = 0.5;
  double x2_latency_s = 1e-3;
  double x2_datarate_bps = 10e9;
  dc::DcThresholds thresholds;
  double ema_alpha = 0.1;
  double measurement_period_s = 1e-3;
  double rrc_delay_s = 1e-3;
  bool auto_handover = true;
  std::vector<ScriptedHandover> scripted_handovers;
  double pdcp_reordering_s = 0.100;
  /// Default: lossless for AM bearers, seamless otherwise.
  std::optional<rlc::ForwardMode> forward_mode;
};

struct ReconfigEvent
{
  double time_s = 0.0;
  std::vector<int> cc_ids;
};

struct TraceConfig
{
  bool mac = true;
  bool rlc = true;
  bool dc = true;
  bool channel = true;
  bool ctrl = false;
};

struct ScenarioConfig
{
  std::string name;
  double duration_s = 1.0;
  std::uint64_t master_seed = 1;
  int n_runs = 1;
  std::vector<channel::CarrierConfig> carriers;
  ca::CcManagerPolicy cc_manager = ca::CcManagerPolicy::NoOp;
  std::vector<CellConfig> cells;
  UeConfig ue;
  TrafficConfig traffic;
  rlc::RlcMode rlc_mode = rlc::RlcMode::Sm;
  ChannelConfig channel;
  mac::HarqConfig harq;
  DcConfig dc;
  std::vector<ReconfigEvent> reconfigurations;
  TraceConfig trace;
  std::vector<std::string> warnings;

  std::vector<channel::CarrierConfig> carriers_of (channel::Rat rat) const;
  std::vector<CellConfig> cells_of (channel::Rat rat) const;
  /// B_CC1 / B_CC0 of the mmWave carriers when exactly two are configured.
  std::optional<double> r_cc () const;
  rlc::ForwardMode effective_forward_mode () const;
};

/// One named variant of a scenario file. Files without a `matrix` have a
/// single variant named after the file's `name`.
struct ScenarioVariant
{
  std::string name;
  ScenarioConfig config;
};

/// Parses and validates every variant of a scenario file. A file is either a
/// plain config or {"name", "base", "matrix": {axis: {value: patch}}}; each
/// combination of axis values applies its patches (JSON merge patch) to the
/// base in axis order and is named "value1+value2+...".
/// Throws ConfigError listing every violation.
std::vector<ScenarioVariant> parse_config_variants (const std::string& path);

/// Single-config form: the file must define exactly one variant unless
/// `variant` names one.
ScenarioConfig parse_config (const std::string& path, const std::string& variant = "");

/// Parses a config held in a JSON string (plain form, no matrix).
ScenarioConfig parse_config_text (const std::string& jsonText);

/// Set-level checks on an assembled config; returns every violation.
std::vector<std::string> validate (const ScenarioConfig& config);

} // namespace mcsim::scenario
