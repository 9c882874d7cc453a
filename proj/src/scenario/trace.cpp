#include "mcsim/scenario/trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace mcsim::scenario {

const char* const kMacHeader = "time_us,cc_id,ue_id,mcs,tb_bytes,harq_attempt,outcome,cell_id,rat";
const char* const kRlcHeader = "time_us,leg,cc_id,bearer_id,event,sn,bytes";
const char* const kDcHeader = "time_us,ue_id,event,detail";
const char* const kChannelHeader = "time_us,cc_id,ue_id,pathloss_db,blocked,wideband_sinr_db,cell_id";
const char* const kCtrlHeader = "time_us,message,from,to,path,cc_id";

std::int64_t
to_us (double seconds)
{
  return std::llround (seconds * 1e6);
}

namespace {

std::string
Fixed (double v, int digits)
{
  char buf[64];
  std::snprintf (buf, sizeof buf, "%.*f", digits, v);
  std::string s (buf);
  if (s == "-0.0000")
    {
      s = "0.0000";
    }
  return s;
}

std::vector<std::string>
Split (const std::string& line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true)
    {
      auto comma = line.find (',', start);
      out.push_back (line.substr (start, comma - start));
      if (comma == std::string::npos)
        {
          break;
        }
      start = comma + 1;
    }
  return out;
}

template <class T>
T
Num (const std::string& field, const std::string& source, std::size_t line, const char* what)
{
  T value{};
  const char* first = field.data ();
  const char* last = first + field.size ();
  auto [ptr, ec] = std::from_chars (first, last, value);
  if (field.empty () || ec != std::errc () || ptr != last)
    {
      throw TraceError (source, line, std::string ("bad ") + what + " '" + field + "'");
    }
  return value;
}

template <class Row, class F>
std::vector<Row>
ReadCsv (std::istream& in, const std::string& source, const char* header, std::size_t nFields, F&& parse)
{
  std::vector<Row> rows;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline (in, line))
    {
      ++lineNo;
      if (!line.empty () && line.back () == '\r')
        {
          line.pop_back ();
        }
      if (lineNo == 1)
        {
          if (line != header)
            {
              throw TraceError (source, lineNo, "unexpected header '" + line + "'");
            }
          continue;
        }
      if (line.empty ())
        {
          continue;
        }
      auto f = Split (line);
      if (f.size () != nFields)
        {
          throw TraceError (source, lineNo,
                            "expected " + std::to_string (nFields) + " fields, got " + std::to_string (f.size ()));
        }
      rows.push_back (parse (f, lineNo));
    }
  return rows;
}

} // namespace

TraceError::TraceError (const std::string& source, std::size_t line, const std::string& msg)
  : std::runtime_error (source + ":" + std::to_string (line) + ": " + msg),
    m_line (line)
{
}

void
write_row (std::ostream& out, const MacRow& r)
{
  out << r.time_us << ',' << r.cc_id << ',' << r.ue_id << ',' << r.mcs << ',' << r.tb_bytes << ',' << r.harq_attempt
      << ',' << r.outcome << ',' << r.cell_id << ',' << r.rat << '\n';
}

void
write_row (std::ostream& out, const RlcRow& r)
{
  out << r.time_us << ',' << r.leg << ',' << r.cc_id << ',' << r.bearer_id << ',' << r.event << ',' << r.sn << ','
      << r.bytes << '\n';
}

void
write_row (std::ostream& out, const DcRow& r)
{
  out << r.time_us << ',' << r.ue_id << ',' << r.event << ',' << r.detail << '\n';
}

void
write_row (std::ostream& out, const ChannelRow& r)
{
  out << r.time_us << ',' << r.cc_id << ',' << r.ue_id << ',' << Fixed (r.pathloss_db, 4) << ',' << r.blocked << ','
      << Fixed (r.wideband_sinr_db, 4) << ',' << r.cell_id << '\n';
}

void
write_row (std::ostream& out, const CtrlRow& r)
{
  out << r.time_us << ',' << r.message << ',' << r.from << ',' << r.to << ',' << r.path << ',' << r.cc_id << '\n';
}

std::vector<MacRow>
read_mac_trace (std::istream& in, const std::string& source)
{
  return ReadCsv<MacRow> (in, source, kMacHeader, 9, [&] (const auto& f, std::size_t n) {
    MacRow r;
    r.time_us = Num<std::int64_t> (f[0], source, n, "time_us");
    r.cc_id = Num<int> (f[1], source, n, "cc_id");
    r.ue_id = Num<int> (f[2], source, n, "ue_id");
    r.mcs = Num<int> (f[3], source, n, "mcs");
    r.tb_bytes = Num<std::uint64_t> (f[4], source, n, "tb_bytes");
    r.harq_attempt = Num<int> (f[5], source, n, "harq_attempt");
    r.outcome = f[6];
    if (r.outcome != "ACK" && r.outcome != "NACK")
      {
        throw TraceError (source, n, "bad outcome '" + r.outcome + "'");
      }
    r.cell_id = Num<int> (f[7], source, n, "cell_id");
    r.rat = f[8];
    if (r.rat != "LTE" && r.rat != "MMWAVE")
      {
        throw TraceError (source, n, "bad rat '" + r.rat + "'");
      }
    return r;
  });
}

std::vector<RlcRow>
read_rlc_trace (std::istream& in, const std::string& source)
{
  return ReadCsv<RlcRow> (in, source, kRlcHeader, 7, [&] (const auto& f, std::size_t n) {
    RlcRow r;
    r.time_us = Num<std::int64_t> (f[0], source, n, "time_us");
    r.leg = f[1];
    if (r.leg != "LTE" && r.leg != "MMWAVE" && r.leg != "PDCP")
      {
        throw TraceError (source, n, "bad leg '" + r.leg + "'");
      }
    r.cc_id = Num<int> (f[2], source, n, "cc_id");
    r.bearer_id = Num<int> (f[3], source, n, "bearer_id");
    r.event = f[4];
    if (r.event != "enq" && r.event != "tx" && r.event != "ack" && r.event != "fwd" && r.event != "deliver" &&
        r.event != "loss")
      {
        throw TraceError (source, n, "bad event '" + r.event + "'");
      }
    r.sn = Num<std::uint64_t> (f[5], source, n, "sn");
    r.bytes = Num<std::uint64_t> (f[6], source, n, "bytes");
    return r;
  });
}

std::vector<DcRow>
read_dc_trace (std::istream& in, const std::string& source)
{
  return ReadCsv<DcRow> (in, source, kDcHeader, 4, [&] (const auto& f, std::size_t n) {
    DcRow r;
    r.time_us = Num<std::int64_t> (f[0], source, n, "time_us");
    r.ue_id = Num<int> (f[1], source, n, "ue_id");
    r.event = f[2];
    if (r.event != "MEAS" && r.event != "HO_TRIGGER" && r.event != "HO_DONE" && r.event != "FALLBACK" &&
        r.event != "RECOVERY")
      {
        throw TraceError (source, n, "bad event '" + r.event + "'");
      }
    r.detail = f[3];
    return r;
  });
}

std::vector<ChannelRow>
read_channel_trace (std::istream& in, const std::string& source)
{
  return ReadCsv<ChannelRow> (in, source, kChannelHeader, 7, [&] (const auto& f, std::size_t n) {
    ChannelRow r;
    r.time_us = Num<std::int64_t> (f[0], source, n, "time_us");
    r.cc_id = Num<int> (f[1], source, n, "cc_id");
    r.ue_id = Num<int> (f[2], source, n, "ue_id");
    r.pathloss_db = Num<double> (f[3], source, n, "pathloss_db");
    r.blocked = Num<int> (f[4], source, n, "blocked");
    r.wideband_sinr_db = Num<double> (f[5], source, n, "wideband_sinr_db");
    r.cell_id = Num<int> (f[6], source, n, "cell_id");
    return r;
  });
}

std::vector<CtrlRow>
read_ctrl_trace (std::istream& in, const std::string& source)
{
  return ReadCsv<CtrlRow> (in, source, kCtrlHeader, 6, [&] (const auto& f, std::size_t n) {
    CtrlRow r;
    r.time_us = Num<std::int64_t> (f[0], source, n, "time_us");
    r.message = f[1];
    r.from = f[2];
    r.to = f[3];
    r.path = f[4];
    r.cc_id = Num<int> (f[5], source, n, "cc_id");
    return r;
  });
}

} // namespace mcsim::scenario
