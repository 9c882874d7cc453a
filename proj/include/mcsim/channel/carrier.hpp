#pragma once

#include <span>
#include <string>
#include <vector>

namespace mcsim::channel {

enum class Rat
{
  Lte,
  Mmwave
};

std::string to_string (Rat rat);
Rat parse_rat (const std::string& name);

/// Numerology, frequency and bandwidth of one component carrier. Every layer
/// attached to the carrier (channel, scheduler, HARQ) reads from the same record.
struct CarrierConfig
{
  int cc_id = 0;
  double center_freq_ghz = 28.0;
  double bandwidth_mhz = 1000.0;
  int n_subbands = 1;
  int symbols_per_subframe = 24;
  int control_symbols = 2;
  double symbol_duration_us = 4.16;
  int subframes_per_frame = 10;
  bool is_primary = false;
  Rat rat = Rat::Mmwave;

  double bandwidth_hz () const { return bandwidth_mhz * 1e6; }
  double symbol_duration_s () const { return symbol_duration_us * 1e-6; }
  double subframe_duration_s () const { return symbols_per_subframe * symbol_duration_s (); }
  int data_symbols () const { return symbols_per_subframe - control_symbols; }
  double low_edge_ghz () const { return center_freq_ghz - bandwidth_mhz * 5e-4; }
  double high_edge_ghz () const { return center_freq_ghz + bandwidth_mhz * 5e-4; }
};

/// Checks per-carrier ranges plus the set-level rules: unique cc_id and exactly
/// one primary per RAT, and no spectrum overlap between carriers of one RAT.
/// Returns every violation found.
std::vector<std::string> validate_carriers (std::span<const CarrierConfig> carriers);

} // namespace mcsim::channel
