#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcsim::scenario {

/// Output streams of one run; a null stream disables that trace.
struct TraceSet
{
  std::ostream* mac = nullptr;
  std::ostream* rlc = nullptr;
  std::ostream* dc = nullptr;
  std::ostream* channel = nullptr;
  std::ostream* ctrl = nullptr;
};

std::int64_t to_us (double seconds);

struct MacRow
{
  std::int64_t time_us = 0;
  int cc_id = 0;
  int ue_id = 0;
  int mcs = 0;
  std::uint64_t tb_bytes = 0;
  int harq_attempt = 1;
  std::string outcome; ///< ACK | NACK
  int cell_id = 0;
  std::string rat; ///< LTE | MMWAVE
};

struct RlcRow
{
  std::int64_t time_us = 0;
  std::string leg; ///< LTE | MMWAVE | PDCP
  int cc_id = -1;
  int bearer_id = 0;
  std::string event; ///< enq | tx | ack | fwd | deliver | loss
  std::uint64_t sn = 0;
  std::uint64_t bytes = 0;
};

struct DcRow
{
  std::int64_t time_us = 0;
  int ue_id = 0;
  std::string event; ///< MEAS | HO_TRIGGER | HO_DONE | FALLBACK | RECOVERY
  std::string detail;
};

struct ChannelRow
{
  std::int64_t time_us = 0;
  int cc_id = 0;
  int ue_id = 0;
  double pathloss_db = 0.0;
  int blocked = 0;
  double wideband_sinr_db = 0.0;
  int cell_id = 0;
};

struct CtrlRow
{
  std::int64_t time_us = 0;
  std::string message;
  std::string from;
  std::string to;
  std::string path; ///< air | x2
  int cc_id = -1;   ///< carrier for air-interface messages
};

extern const char* const kMacHeader;
extern const char* const kRlcHeader;
extern const char* const kDcHeader;
extern const char* const kChannelHeader;
extern const char* const kCtrlHeader;

void write_row (std::ostream& out, const MacRow& r);
void write_row (std::ostream& out, const RlcRow& r);
void write_row (std::ostream& out, const DcRow& r);
void write_row (std::ostream& out, const ChannelRow& r);
void write_row (std::ostream& out, const CtrlRow& r);

/// A trace line that does not parse. what() names the source and line.
class TraceError : public std::runtime_error
{
public:
  TraceError (const std::string& source, std::size_t line, const std::string& msg);
  std::size_t line () const { return m_line; }

private:
  std::size_t m_line;
};

std::vector<MacRow> read_mac_trace (std::istream& in, const std::string& source = "mac");
std::vector<RlcRow> read_rlc_trace (std::istream& in, const std::string& source = "rlc");
std::vector<DcRow> read_dc_trace (std::istream& in, const std::string& source = "dc");
std::vector<ChannelRow> read_channel_trace (std::istream& in, const std::string& source = "channel");
std::vector<CtrlRow> read_ctrl_trace (std::istream& in, const std::string& source = "ctrl");

} // namespace mcsim::scenario
