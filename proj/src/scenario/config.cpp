#include "mcsim/scenario/config.hpp"

#include "mcsim/sim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mcsim::scenario {

using Json = nlohmann::ordered_json;

namespace {

/// Typed access to one JSON object that records type errors and, on
/// finish(), every key that was never read.
class Section
{
public:
  Section (const Json& j, std::string path, std::vector<std::string>& errors)
    : m_json (j),
      m_path (std::move (path)),
      m_errors (errors)
  {
    if (!j.is_object ())
      {
        m_errors.push_back (m_path + ": expected an object");
      }
  }

  bool has (const std::string& key) const { return m_json.is_object () && m_json.contains (key); }

  const Json* raw (const std::string& key)
  {
    m_used.insert (key);
    if (!has (key))
      {
        return nullptr;
      }
    return &m_json.at (key);
  }

  double number (const std::string& key, double def)
  {
    const Json* v = raw (key);
    if (!v)
      {
        return def;
      }
    if (!v->is_number ())
      {
        Error (key, "expected a number");
        return def;
      }
    return v->get<double> ();
  }

  long long integer (const std::string& key, long long def)
  {
    const Json* v = raw (key);
    if (!v)
      {
        return def;
      }
    if (!v->is_number_integer ())
      {
        Error (key, "expected an integer");
        return def;
      }
    return v->get<long long> ();
  }

  bool boolean (const std::string& key, bool def)
  {
    const Json* v = raw (key);
    if (!v)
      {
        return def;
      }
    if (!v->is_boolean ())
      {
        Error (key, "expected true or false");
        return def;
      }
    return v->get<bool> ();
  }

  std::string text (const std::string& key, const std::string& def)
  {
    const Json* v = raw (key);
    if (!v)
      {
        return def;
      }
    if (!v->is_string ())
      {
        Error (key, "expected a string");
        return def;
      }
    return v->get<std::string> ();
  }

  void Error (const std::string& key, const std::string& msg) { m_errors.push_back (m_path + "." + key + ": " + msg); }

  std::string path (const std::string& key) const { return m_path + "." + key; }
  std::vector<std::string>& errors () { return m_errors; }

  void finish ()
  {
    if (!m_json.is_object ())
      {
        return;
      }
    for (const auto& [key, value] : m_json.items ())
      {
        if (!m_used.count (key))
          {
            m_errors.push_back (m_path + "." + key + ": unknown key");
          }
      }
  }

private:
  const Json& m_json;
  std::string m_path;
  std::vector<std::string>& m_errors;
  std::set<std::string> m_used;
};

template <class F>
auto
Guard (std::vector<std::string>& errors, const std::string& where, F&& f, decltype (f ()) def)
{
  try
    {
      return f ();
    }
  catch (const ConfigError& e)
    {
      errors.push_back (where + ": " + e.what ());
      return def;
    }
}

void
ParseCarriers (const Json& arr, ScenarioConfig& cfg, std::vector<std::string>& errors)
{
  if (!arr.is_array ())
    {
      errors.push_back ("carriers: expected an array");
      return;
    }
  for (std::size_t i = 0; i < arr.size (); ++i)
    {
      Section s (arr[i], "carriers[" + std::to_string (i) + "]", errors);
      channel::CarrierConfig c;
      c.rat = Guard (
        errors, s.path ("rat"), [&] { return channel::parse_rat (s.text ("rat", "MMWAVE")); }, channel::Rat::Mmwave);
      if (c.rat == channel::Rat::Lte)
        {
          c.symbols_per_subframe = 14;
          c.control_symbols = 3;
          c.symbol_duration_us = 1000.0 / 14.0;
        }
      c.cc_id = static_cast<int> (s.integer ("cc_id", static_cast<long long> (i)));
      c.center_freq_ghz = s.number ("center_freq_ghz", c.center_freq_ghz);
      c.bandwidth_mhz = s.number ("bandwidth_mhz", c.bandwidth_mhz);
      c.n_subbands = static_cast<int> (s.integer ("n_subbands", c.n_subbands));
      c.symbols_per_subframe = static_cast<int> (s.integer ("symbols_per_subframe", c.symbols_per_subframe));
      c.control_symbols = static_cast<int> (s.integer ("control_symbols", c.control_symbols));
      c.symbol_duration_us = s.number ("symbol_duration_us", c.symbol_duration_us);
      c.subframes_per_frame = static_cast<int> (s.integer ("subframes_per_frame", c.subframes_per_frame));
      c.is_primary = s.boolean ("is_primary", false);
      s.finish ();
      cfg.carriers.push_back (c);
    }
}

void
ParseCells (const Json& arr, ScenarioConfig& cfg, std::vector<std::string>& errors)
{
  if (!arr.is_array ())
    {
      errors.push_back ("cells: expected an array");
      return;
    }
  for (std::size_t i = 0; i < arr.size (); ++i)
    {
      Section s (arr[i], "cells[" + std::to_string (i) + "]", errors);
      CellConfig c;
      c.rat = Guard (
        errors, s.path ("rat"), [&] { return channel::parse_rat (s.text ("rat", "MMWAVE")); }, channel::Rat::Mmwave);
      if (c.rat == channel::Rat::Lte)
        {
          c.tx_power_dbm = 46.0;
          c.antenna_elements = 1;
        }
      c.cell_id = static_cast<int> (s.integer ("cell_id", static_cast<long long> (i)));
      if (const Json* pos = s.raw ("position_m"))
        {
          if (pos->is_array () && pos->size () == 2 && (*pos)[0].is_number () && (*pos)[1].is_number ())
            {
              c.x_m = (*pos)[0].get<double> ();
              c.y_m = (*pos)[1].get<double> ();
            }
          else
            {
              s.Error ("position_m", "expected [x, y]");
            }
        }
      c.tx_power_dbm = s.number ("tx_power_dbm", c.tx_power_dbm);
      c.antenna_elements = static_cast<int> (s.integer ("antenna_elements", c.antenna_elements));
      s.finish ();
      cfg.cells.push_back (c);
    }
}

void
ParseUe (const Json& j, UeConfig& ue, std::vector<std::string>& errors)
{
  Section s (j, "ue", errors);
  const std::string placement = s.text ("placement", "fixed");
  if (placement == "fixed")
    {
      ue.placement = Placement::Fixed;
    }
  else if (placement == "uniform")
    {
      ue.placement = Placement::Uniform;
    }
  else
    {
      s.Error ("placement", "unknown placement '" + placement + "' (expected fixed or uniform)");
    }
  ue.distance_m = s.number ("distance_m", ue.distance_m);
  ue.angle_deg = s.number ("angle_deg", ue.angle_deg);
  if (const Json* pos = s.raw ("position_m"))
    {
      if (pos->is_array () && pos->size () == 2 && (*pos)[0].is_number () && (*pos)[1].is_number ())
        {
          ue.position_m = std::make_pair ((*pos)[0].get<double> (), (*pos)[1].get<double> ());
        }
      else
        {
          s.Error ("position_m", "expected [x, y]");
        }
    }
  ue.min_distance_m = s.number ("min_distance_m", ue.min_distance_m);
  ue.d_max_m = s.number ("d_max_m", ue.d_max_m);
  const std::string mobility = s.text ("mobility", "static");
  if (mobility == "static")
    {
      ue.mobility = MobilityModel::Static;
    }
  else if (mobility == "random_walk")
    {
      ue.mobility = MobilityModel::RandomWalk;
    }
  else
    {
      s.Error ("mobility", "unknown mobility '" + mobility + "' (expected static or random_walk)");
    }
  ue.speed_mps = s.number ("speed_mps", ue.speed_mps);
  ue.epoch_s = s.number ("epoch_s", ue.epoch_s);
  ue.bound_radius_m = s.number ("bound_radius_m", std::max (ue.d_max_m, ue.distance_m));
  ue.antenna_elements = static_cast<int> (s.integer ("antenna_elements", ue.antenna_elements));
  s.finish ();
}

void
ParseTraffic (const Json& j, TrafficConfig& t, std::vector<std::string>& errors)
{
  Section s (j, "traffic", errors);
  const std::string type = s.text ("type", "full_buffer");
  if (type == "full_buffer")
    {
      t.kind = TrafficKind::FullBuffer;
    }
  else if (type == "cbr")
    {
      t.kind = TrafficKind::Cbr;
    }
  else
    {
      s.Error ("type", "unknown traffic type '" + type + "' (expected full_buffer or cbr)");
    }
  t.rate_bps = s.number ("rate_bps", t.rate_bps);
  t.packet_bytes = static_cast<std::uint32_t> (s.integer ("packet_bytes", t.packet_bytes));
  t.backlog_bytes = static_cast<std::uint64_t> (s.integer ("backlog_bytes", static_cast<long long> (t.backlog_bytes)));
  s.finish ();
}

void
ParseBlockage (const Json& j, BlockageConfig& b, std::vector<std::string>& errors)
{
  Section s (j, "channel.blockage", errors);
  b.attenuation_db = s.number ("attenuation_db", b.attenuation_db);
  b.dynamics.mean_blocked_s = s.number ("mean_blocked_s", b.dynamics.mean_blocked_s);
  b.dynamics.mean_free_s = s.number ("mean_free_s", b.dynamics.mean_free_s);
  if (const Json* map = s.raw ("per_cc"))
    {
      if (!map->is_object ())
        {
          s.Error ("per_cc", "expected an object {\"<cc_id>\": true|false}");
        }
      else
        {
          for (const auto& [key, value] : map->items ())
            {
              int cc = 0;
              std::istringstream in (key);
              if (!(in >> cc) || !in.eof () || !value.is_boolean ())
                {
                  s.Error ("per_cc." + key, "expected an integer cc_id mapped to true|false");
                  continue;
                }
              b.per_cc[cc] = value.get<bool> ();
            }
        }
    }
  const std::string mode = s.text ("mode", "random");
  if (mode == "random")
    {
      b.mode = BlockageMode::Random;
    }
  else if (mode == "scripted")
    {
      b.mode = BlockageMode::Scripted;
    }
  else
    {
      s.Error ("mode", "unknown blockage mode '" + mode + "' (expected random or scripted)");
    }
  if (const Json* arr = s.raw ("windows"))
    {
      if (!arr->is_array ())
        {
          s.Error ("windows", "expected an array");
        }
      else
        {
          for (std::size_t i = 0; i < arr->size (); ++i)
            {
              Section w ((*arr)[i], s.path ("windows[" + std::to_string (i) + "]"), errors);
              BlockageWindow bw;
              bw.start_s = w.number ("start_s", 0.0);
              bw.end_s = w.number ("end_s", 0.0);
              bw.cell_id = static_cast<int> (w.integer ("cell_id", -1));
              w.finish ();
              b.windows.push_back (bw);
            }
        }
    }
  s.finish ();
}

void
ParseChannel (const Json& j, ChannelConfig& c, std::vector<std::string>& errors)
{
  Section s (j, "channel", errors);
  const std::string los = s.text ("los", "nlos");
  if (los == "nlos")
    {
      c.los_mode = channel::LosMode::Nlos;
    }
  else if (los == "los")
    {
      c.los_mode = channel::LosMode::Los;
    }
  else if (los == "probabilistic")
    {
      c.los_mode = channel::LosMode::Probabilistic;
    }
  else
    {
      s.Error ("los", "unknown LOS mode '" + los + "' (expected nlos, los or probabilistic)");
    }
  c.noise_figure_db = s.number ("noise_figure_db", c.noise_figure_db);
  c.shadowing_sigma_los_db = s.number ("shadowing_sigma_los_db", c.shadowing_sigma_los_db);
  c.shadowing_sigma_nlos_db = s.number ("shadowing_sigma_nlos_db", c.shadowing_sigma_nlos_db);
  c.update_period_s = s.number ("update_period_s", c.update_period_s);
  if (const Json* f = s.raw ("fading"))
    {
      Section fs (*f, "channel.fading", errors);
      c.fading.enabled = fs.boolean ("enabled", c.fading.enabled);
      c.fading.sigma_db = fs.number ("sigma_db", c.fading.sigma_db);
      c.fading.coherence_bandwidth_mhz = fs.number ("coherence_bandwidth_mhz", c.fading.coherence_bandwidth_mhz);
      c.fading_period_s = fs.number ("period_s", c.fading_period_s);
      fs.finish ();
    }
  if (const Json* b = s.raw ("blockage"))
    {
      ParseBlockage (*b, c.blockage, errors);
    }
  s.finish ();
}

void
ParseDc (const Json& j, DcConfig& d, std::vector<std::string>& errors)
{
  Section s (j, "dc", errors);
  d.enabled = s.boolean ("enabled", d.enabled);
  d.routing_policy = Guard (
    errors, s.path ("routing_policy"),
    [&] { return rlc::parse_routing_policy (s.text ("routing_policy", "mmwave_with_fallback")); },
    rlc::RoutingPolicy::MmwaveWithFallback);
  d.split_weight = s.number ("split_weight", d.split_weight);
  d.x2_latency_s = s.number ("x2_latency_s", d.x2_latency_s);
  d.x2_datarate_bps = s.number ("x2_datarate_bps", d.x2_datarate_bps);
  d.thresholds.outage_threshold_db = s.number ("outage_threshold_db", d.thresholds.outage_threshold_db);
  d.thresholds.hysteresis_db = s.number ("hysteresis_db", d.thresholds.hysteresis_db);
  d.ema_alpha = s.number ("ema_alpha", d.ema_alpha);
  d.measurement_period_s = s.number ("measurement_period_s", d.measurement_period_s);
  d.rrc_delay_s = s.number ("rrc_delay_s", d.rrc_delay_s);
  d.auto_handover = s.boolean ("auto_handover", d.auto_handover);
  d.pdcp_reordering_s = s.number ("pdcp_reordering_s", d.pdcp_reordering_s);
  if (s.has ("forward_mode"))
    {
      const std::string fm = s.text ("forward_mode", "");
      if (fm == "lossless")
        {
          d.forward_mode = rlc::ForwardMode::Lossless;
        }
      else if (fm == "seamless")
        {
          d.forward_mode = rlc::ForwardMode::Seamless;
        }
      else
        {
          s.Error ("forward_mode", "unknown forward mode '" + fm + "' (expected lossless or seamless)");
        }
    }
  if (const Json* arr = s.raw ("scripted_handovers"))
    {
      if (!arr->is_array ())
        {
          s.Error ("scripted_handovers", "expected an array");
        }
      else
        {
          for (std::size_t i = 0; i < arr->size (); ++i)
            {
              Section h ((*arr)[i], s.path ("scripted_handovers[" + std::to_string (i) + "]"), errors);
              ScriptedHandover sh;
              sh.time_s = h.number ("time_s", 0.0);
              sh.target_cell = static_cast<int> (h.integer ("target_cell", 0));
              h.finish ();
              d.scripted_handovers.push_back (sh);
            }
        }
    }
  s.finish ();
}

ScenarioConfig
ParseObject (const Json& root, const std::string& defaultName)
{
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  Section s (root, "config", errors);
  cfg.name = s.text ("name", defaultName);
  cfg.duration_s = s.number ("duration_s", cfg.duration_s);
  if (s.has ("master_seed"))
    {
      const long long seed = s.integer ("master_seed", 1);
      if (seed < 0)
        {
          s.Error ("master_seed", "must be >= 0");
        }
      cfg.master_seed = static_cast<std::uint64_t> (seed);
    }
  else
    {
      cfg.warnings.push_back ("master_seed missing, defaulting to 1");
    }
  cfg.n_runs = static_cast<int> (s.integer ("n_runs", cfg.n_runs));
  cfg.rlc_mode = Guard (
    errors, "config.rlc_mode", [&] { return rlc::parse_rlc_mode (s.text ("rlc_mode", "SM")); }, rlc::RlcMode::Sm);
  cfg.cc_manager = Guard (
    errors, "config.cc_manager", [&] { return ca::parse_policy (s.text ("cc_manager", "noop")); },
    ca::CcManagerPolicy::NoOp);
  if (const Json* c = s.raw ("carriers"))
    {
      ParseCarriers (*c, cfg, errors);
    }
  if (const Json* c = s.raw ("cells"))
    {
      ParseCells (*c, cfg, errors);
    }
  if (const Json* u = s.raw ("ue"))
    {
      ParseUe (*u, cfg.ue, errors);
    }
  else
    {
      cfg.ue.bound_radius_m = std::max (cfg.ue.d_max_m, cfg.ue.distance_m);
    }
  if (const Json* t = s.raw ("traffic"))
    {
      ParseTraffic (*t, cfg.traffic, errors);
    }
  if (const Json* c = s.raw ("channel"))
    {
      ParseChannel (*c, cfg.channel, errors);
    }
  if (const Json* m = s.raw ("mac"))
    {
      Section ms (*m, "mac", errors);
      cfg.harq.processes = static_cast<int> (ms.integer ("harq_processes", cfg.harq.processes));
      cfg.harq.max_attempts = static_cast<int> (ms.integer ("harq_max_attempts", cfg.harq.max_attempts));
      cfg.harq.feedback_delay_subframes =
        static_cast<int> (ms.integer ("harq_feedback_delay_subframes", cfg.harq.feedback_delay_subframes));
      ms.finish ();
    }
  if (const Json* d = s.raw ("dc"))
    {
      ParseDc (*d, cfg.dc, errors);
    }
  if (const Json* arr = s.raw ("reconfigurations"))
    {
      if (!arr->is_array ())
        {
          s.Error ("reconfigurations", "expected an array");
        }
      else
        {
          for (std::size_t i = 0; i < arr->size (); ++i)
            {
              Section r ((*arr)[i], "reconfigurations[" + std::to_string (i) + "]", errors);
              ReconfigEvent ev;
              ev.time_s = r.number ("time_s", 0.0);
              if (const Json* ids = r.raw ("cc_ids"); ids && ids->is_array ())
                {
                  for (const auto& id : *ids)
                    {
                      if (id.is_number_integer ())
                        {
                          ev.cc_ids.push_back (id.get<int> ());
                        }
                      else
                        {
                          r.Error ("cc_ids", "expected integers");
                        }
                    }
                }
              else
                {
                  r.Error ("cc_ids", "expected an array of cc_ids");
                }
              r.finish ();
              cfg.reconfigurations.push_back (ev);
            }
        }
    }
  if (const Json* t = s.raw ("trace"))
    {
      Section ts (*t, "trace", errors);
      cfg.trace.mac = ts.boolean ("mac", cfg.trace.mac);
      cfg.trace.rlc = ts.boolean ("rlc", cfg.trace.rlc);
      cfg.trace.dc = ts.boolean ("dc", cfg.trace.dc);
      cfg.trace.channel = ts.boolean ("channel", cfg.trace.channel);
      cfg.trace.ctrl = ts.boolean ("ctrl", cfg.trace.ctrl);
      ts.finish ();
    }
  s.finish ();

  // Default topology: one mmWave cell at the origin, plus the LTE anchor
  // when dual connectivity is on.
  if (cfg.cells.empty ())
    {
      cfg.cells.push_back (CellConfig{});
      if (cfg.dc.enabled)
        {
          CellConfig lte;
          lte.cell_id = 0;
          lte.rat = channel::Rat::Lte;
          lte.tx_power_dbm = 46.0;
          lte.antenna_elements = 1;
          cfg.cells.insert (cfg.cells.begin (), lte);
        }
    }

  auto more = validate (cfg);
  errors.insert (errors.end (), more.begin (), more.end ());
  if (!errors.empty ())
    {
      throw ConfigError (errors);
    }
  return cfg;
}

Json
ReadJson (const std::string& path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw ConfigError ("cannot open config file '" + path + "'");
    }
  try
    {
      return Json::parse (in);
    }
  catch (const Json::parse_error& e)
    {
      throw ConfigError ("'" + path + "' is not valid JSON: " + e.what ());
    }
}

std::string
StemOf (const std::string& path)
{
  auto slash = path.find_last_of ('/');
  std::string base = slash == std::string::npos ? path : path.substr (slash + 1);
  auto dot = base.rfind ('.');
  return dot == std::string::npos ? base : base.substr (0, dot);
}

} // namespace

std::vector<channel::CarrierConfig>
ScenarioConfig::carriers_of (channel::Rat rat) const
{
  std::vector<channel::CarrierConfig> out;
  for (const auto& c : carriers)
    {
      if (c.rat == rat)
        {
          out.push_back (c);
        }
    }
  std::sort (out.begin (), out.end (), [] (const auto& a, const auto& b) { return a.cc_id < b.cc_id; });
  return out;
}

std::vector<CellConfig>
ScenarioConfig::cells_of (channel::Rat rat) const
{
  std::vector<CellConfig> out;
  for (const auto& c : cells)
    {
      if (c.rat == rat)
        {
          out.push_back (c);
        }
    }
  return out;
}

std::optional<double>
ScenarioConfig::r_cc () const
{
  const auto mm = carriers_of (channel::Rat::Mmwave);
  if (mm.size () != 2)
    {
      return std::nullopt;
    }
  return mm[1].bandwidth_mhz / mm[0].bandwidth_mhz;
}

rlc::ForwardMode
ScenarioConfig::effective_forward_mode () const
{
  if (dc.forward_mode)
    {
      return *dc.forward_mode;
    }
  return rlc_mode == rlc::RlcMode::Am ? rlc::ForwardMode::Lossless : rlc::ForwardMode::Seamless;
}

std::vector<std::string>
validate (const ScenarioConfig& cfg)
{
  std::vector<std::string> v;
  if (!(cfg.duration_s > 0.0))
    {
      v.push_back ("duration_s must be > 0");
    }
  if (cfg.n_runs < 1)
    {
      v.push_back ("n_runs must be >= 1");
    }
  if (cfg.carriers.empty ())
    {
      v.push_back ("at least one carrier is required");
    }
  auto carrierIssues = channel::validate_carriers (cfg.carriers);
  v.insert (v.end (), carrierIssues.begin (), carrierIssues.end ());

  for (auto rat : {channel::Rat::Mmwave, channel::Rat::Lte})
    {
      const auto cs = cfg.carriers_of (rat);
      for (const auto& c : cs)
        {
          if (std::abs (c.subframe_duration_s () - cs.front ().subframe_duration_s ()) > 1e-12)
            {
              v.push_back (channel::to_string (rat) + " carriers must share one subframe duration");
              break;
            }
        }
      if (!cs.empty () && cfg.cells_of (rat).empty ())
        {
          v.push_back (channel::to_string (rat) + " carriers configured without a " + channel::to_string (rat) +
                       " cell");
        }
      if (cs.empty () && !cfg.cells_of (rat).empty ())
        {
          v.push_back (channel::to_string (rat) + " cell configured without " + channel::to_string (rat) +
                       " carriers");
        }
      if (cfg.cc_manager == ca::CcManagerPolicy::NoOp && cs.size () > 1)
        {
          v.push_back ("cc_manager noop requires a single carrier per RAT, " + channel::to_string (rat) + " has " +
                       std::to_string (cs.size ()));
        }
    }
  const auto mmCarriers = cfg.carriers_of (channel::Rat::Mmwave);
  if (mmCarriers.empty ())
    {
      v.push_back ("at least one MMWAVE carrier is required");
    }

  std::set<int> cellIds;
  for (const auto& c : cfg.cells)
    {
      if (!cellIds.insert (c.cell_id).second)
        {
          v.push_back ("duplicate cell_id " + std::to_string (c.cell_id));
        }
      if (c.antenna_elements < 1)
        {
          v.push_back ("cell " + std::to_string (c.cell_id) + ": antenna_elements must be >= 1");
        }
    }
  const auto lteCells = cfg.cells_of (channel::Rat::Lte);
  const auto mmCells = cfg.cells_of (channel::Rat::Mmwave);
  if (cfg.dc.enabled)
    {
      if (cfg.carriers_of (channel::Rat::Lte).empty ())
        {
          v.push_back ("dc.enabled requires an LTE carrier");
        }
      if (lteCells.size () > 1)
        {
          v.push_back ("dc.enabled supports exactly one LTE anchor cell");
        }
      if (cfg.rlc_mode == rlc::RlcMode::Sm)
        {
          v.push_back ("dc.enabled requires rlc_mode UM or AM (SM has no PDCP data)");
        }
      if (cfg.effective_forward_mode () == rlc::ForwardMode::Lossless && cfg.rlc_mode != rlc::RlcMode::Am)
        {
          v.push_back ("dc.forward_mode lossless requires rlc_mode AM");
        }
      if (!(cfg.dc.split_weight >= 0.0 && cfg.dc.split_weight <= 1.0))
        {
          v.push_back ("dc.split_weight must lie in [0, 1]");
        }
      if (!(cfg.dc.x2_latency_s >= 0.0))
        {
          v.push_back ("dc.x2_latency_s must be >= 0");
        }
      if (!(cfg.dc.x2_datarate_bps > 0.0))
        {
          v.push_back ("dc.x2_datarate_bps must be > 0");
        }
      if (!(cfg.dc.ema_alpha > 0.0 && cfg.dc.ema_alpha <= 1.0))
        {
          v.push_back ("dc.ema_alpha must lie in (0, 1]");
        }
      if (!(cfg.dc.measurement_period_s > 0.0))
        {
          v.push_back ("dc.measurement_period_s must be > 0");
        }
      if (!(cfg.dc.rrc_delay_s >= 0.0))
        {
          v.push_back ("dc.rrc_delay_s must be >= 0");
        }
      if (!(cfg.dc.pdcp_reordering_s > 0.0))
        {
          v.push_back ("dc.pdcp_reordering_s must be > 0");
        }
      for (const auto& h : cfg.dc.scripted_handovers)
        {
          bool found = false;
          for (const auto& c : mmCells)
            {
              found = found || c.cell_id == h.target_cell;
            }
          if (!found)
            {
              v.push_back ("scripted handover targets unknown mmWave cell " + std::to_string (h.target_cell));
            }
          if (h.time_s < 0.0)
            {
              v.push_back ("scripted handover time must be >= 0");
            }
        }
    }
  else
    {
      if (mmCells.size () != 1)
        {
          v.push_back ("without dual connectivity exactly one MMWAVE cell is served");
        }
      if (!lteCells.empty ())
        {
          v.push_back ("LTE cells require dc.enabled");
        }
    }

  const auto& ue = cfg.ue;
  if (!(ue.min_distance_m > 0.0))
    {
      v.push_back ("ue.min_distance_m must be > 0");
    }
  if (ue.placement == Placement::Fixed && !ue.position_m && !(ue.distance_m > 0.0))
    {
      v.push_back ("ue.distance_m must be > 0");
    }
  if (ue.placement == Placement::Uniform && !(ue.d_max_m > ue.min_distance_m))
    {
      v.push_back ("ue.d_max_m must exceed ue.min_distance_m");
    }
  if (ue.mobility == MobilityModel::RandomWalk)
    {
      if (!(ue.speed_mps >= 0.0))
        {
          v.push_back ("ue.speed_mps must be >= 0");
        }
      if (!(ue.epoch_s > 0.0))
        {
          v.push_back ("ue.epoch_s must be > 0");
        }
      if (!(ue.bound_radius_m > 0.0))
        {
          v.push_back ("ue.bound_radius_m must be > 0");
        }
    }
  if (ue.antenna_elements < 1)
    {
      v.push_back ("ue.antenna_elements must be >= 1");
    }

  if (cfg.traffic.packet_bytes == 0)
    {
      v.push_back ("traffic.packet_bytes must be > 0");
    }
  if (cfg.traffic.kind == TrafficKind::Cbr && !(cfg.traffic.rate_bps > 0.0))
    {
      v.push_back ("traffic.rate_bps must be > 0");
    }

  const auto& ch = cfg.channel;
  if (!(ch.update_period_s > 0.0))
    {
      v.push_back ("channel.update_period_s must be > 0");
    }
  if (!(ch.fading_period_s > 0.0))
    {
      v.push_back ("channel.fading.period_s must be > 0");
    }
  if (!(ch.fading.sigma_db >= 0.0) || !(ch.fading.coherence_bandwidth_mhz >= 0.0))
    {
      v.push_back ("channel.fading sigma_db and coherence_bandwidth_mhz must be >= 0");
    }
  if (!(ch.blockage.attenuation_db >= 0.0))
    {
      v.push_back ("channel.blockage.attenuation_db must be >= 0");
    }
  if (!(ch.blockage.dynamics.mean_blocked_s > 0.0) || !(ch.blockage.dynamics.mean_free_s > 0.0))
    {
      v.push_back ("channel.blockage mean durations must be > 0");
    }
  for (const auto& [cc, on] : ch.blockage.per_cc)
    {
      bool found = false;
      for (const auto& c : mmCarriers)
        {
          found = found || c.cc_id == cc;
        }
      if (!found)
        {
          v.push_back ("channel.blockage.per_cc names unknown MMWAVE cc " + std::to_string (cc));
        }
    }
  for (const auto& w : ch.blockage.windows)
    {
      if (!(w.end_s > w.start_s) || w.start_s < 0.0)
        {
          v.push_back ("channel.blockage.windows need 0 <= start_s < end_s");
        }
    }

  if (cfg.harq.processes < 1 || cfg.harq.max_attempts < 1 || cfg.harq.feedback_delay_subframes < 1)
    {
      v.push_back ("mac: harq_processes, harq_max_attempts and harq_feedback_delay_subframes must be >= 1");
    }

  for (const auto& r : cfg.reconfigurations)
    {
      if (r.time_s < 0.0)
        {
          v.push_back ("reconfiguration time must be >= 0");
        }
      bool hasPrimary = false;
      for (int id : r.cc_ids)
        {
          bool found = false;
          for (const auto& c : mmCarriers)
            {
              found = found || c.cc_id == id;
              hasPrimary = hasPrimary || (c.cc_id == id && c.is_primary);
            }
          if (!found)
            {
              v.push_back ("reconfiguration names unknown MMWAVE cc " + std::to_string (id));
            }
        }
      if (!hasPrimary)
        {
          v.push_back ("reconfiguration must keep the primary carrier");
        }
    }
  return v;
}

std::vector<ScenarioVariant>
parse_config_variants (const std::string& path)
{
  const Json root = ReadJson (path);
  const std::string stem = StemOf (path);
  if (!root.is_object () || !root.contains ("matrix"))
    {
      auto cfg = ParseObject (root, stem);
      return {ScenarioVariant{cfg.name, cfg}};
    }

  std::vector<std::string> errors;
  const std::string name = root.value ("name", stem);
  for (const auto& [key, value] : root.items ())
    {
      if (key != "name" && key != "base" && key != "matrix")
        {
          errors.push_back ("config." + key + ": unknown key next to matrix (expected name, base, matrix)");
        }
    }
  const Json base = root.contains ("base") ? root.at ("base") : Json::object ();
  const Json& matrix = root.at ("matrix");
  if (!matrix.is_object () || matrix.empty ())
    {
      errors.push_back ("config.matrix: expected a non-empty object of axes");
    }
  std::vector<std::vector<std::pair<std::string, Json>>> axes;
  if (errors.empty ())
    {
      for (const auto& [axis, values] : matrix.items ())
        {
          if (!values.is_object () || values.empty ())
            {
              errors.push_back ("config.matrix." + axis + ": expected a non-empty object of named patches");
              continue;
            }
          std::vector<std::pair<std::string, Json>> opts;
          for (const auto& [vname, patch] : values.items ())
            {
              opts.emplace_back (vname, patch);
            }
          axes.push_back (std::move (opts));
        }
    }
  if (!errors.empty ())
    {
      throw ConfigError (errors);
    }

  std::vector<ScenarioVariant> out;
  std::vector<std::size_t> idx (axes.size (), 0);
  bool done = false;
  while (!done)
    {
      Json j = base;
      std::string vname;
      for (std::size_t a = 0; a < axes.size (); ++a)
        {
          j.merge_patch (axes[a][idx[a]].second);
          vname += (a ? "+" : "") + axes[a][idx[a]].first;
        }
      j["name"] = name + "/" + vname;
      try
        {
          out.push_back (ScenarioVariant{vname, ParseObject (j, name)});
        }
      catch (const ConfigError& e)
        {
          for (const auto& msg : e.violations ())
            {
              errors.push_back (vname + ": " + msg);
            }
        }
      // Odometer over the axes, last axis fastest.
      std::size_t a = axes.size ();
      while (true)
        {
          if (a == 0)
            {
              done = true;
              break;
            }
          --a;
          if (++idx[a] < axes[a].size ())
            {
              break;
            }
          idx[a] = 0;
        }
    }
  if (!errors.empty ())
    {
      throw ConfigError (errors);
    }
  return out;
}

ScenarioConfig
parse_config (const std::string& path, const std::string& variant)
{
  auto variants = parse_config_variants (path);
  if (variant.empty ())
    {
      if (variants.size () != 1)
        {
          std::string names;
          for (const auto& v : variants)
            {
              names += (names.empty () ? "" : ", ") + v.name;
            }
          throw ConfigError ("'" + path + "' defines " + std::to_string (variants.size ()) +
                             " variants; pick one of: " + names);
        }
      return variants.front ().config;
    }
  for (const auto& v : variants)
    {
      if (v.name == variant)
        {
          return v.config;
        }
    }
  throw ConfigError ("'" + path + "' has no variant named '" + variant + "'");
}

ScenarioConfig
parse_config_text (const std::string& jsonText)
{
  Json root;
  try
    {
      root = Json::parse (jsonText);
    }
  catch (const Json::parse_error& e)
    {
      throw ConfigError (std::string ("config is not valid JSON: ") + e.what ());
    }
  return ParseObject (root, "inline");
}

} // namespace mcsim::scenario
