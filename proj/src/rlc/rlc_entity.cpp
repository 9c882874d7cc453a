#include "mcsim/rlc/rlc_entity.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>

namespace mcsim::rlc {

std::string
to_string (RlcMode mode)
{
  switch (mode)
    {
    case RlcMode::Sm:
      return "SM";
    case RlcMode::Um:
      return "UM";
    case RlcMode::Am:
      return "AM";
    }
  return "?";
}

std::string
to_string (Leg leg)
{
  return leg == Leg::Lte ? "LTE" : "MMWAVE";
}

std::string
to_string (ForwardMode mode)
{
  return mode == ForwardMode::Lossless ? "LOSSLESS" : "SEAMLESS";
}

RlcMode
parse_rlc_mode (const std::string& name)
{
  if (name == "SM" || name == "sm")
    {
      return RlcMode::Sm;
    }
  if (name == "UM" || name == "um")
    {
      return RlcMode::Um;
    }
  if (name == "AM" || name == "am")
    {
      return RlcMode::Am;
    }
  throw ConfigError ("unknown rlc_mode '" + name + "' (expected SM, UM or AM)");
}

RlcEntity::RlcEntity (RlcMode mode, int ueId, int bearerId, Leg leg, std::uint64_t saturationBytes)
  : m_mode (mode),
    m_ueId (ueId),
    m_bearerId (bearerId),
    m_leg (leg),
    m_saturation (saturationBytes)
{
}

void
RlcEntity::enqueue (const PdcpPdu& pdu)
{
  if (m_mode == RlcMode::Sm)
    {
      return;
    }
  if (pdu.payload_bytes == 0)
    {
      throw ConfigError ("PDCP PDU with zero payload");
    }
  m_sdus.emplace (pdu.sn, SduState{pdu, 0, 0});
}

ca::BufferStatusReport
RlcEntity::generate_bsr () const
{
  ca::BufferStatusReport bsr;
  bsr.ue_id = m_ueId;
  bsr.bearer_id = m_bearerId;
  if (m_mode == RlcMode::Sm)
    {
      bsr.tx_queue_bytes = m_saturation;
      return bsr;
    }
  for (const auto& [sn, s] : m_sdus)
    {
      bsr.tx_queue_bytes += s.sdu.payload_bytes - s.next_offset;
    }
  for (const auto& seg : m_retx)
    {
      bsr.retx_queue_bytes += seg.length;
    }
  return bsr;
}

RlcPdu
RlcEntity::MakePdu (const SduState& s, std::uint32_t offset, std::uint32_t length)
{
  RlcPdu pdu;
  pdu.pdu_id = m_nextPduId++;
  pdu.bearer_id = m_bearerId;
  pdu.sn = s.sdu.sn;
  pdu.offset = offset;
  pdu.length = length;
  pdu.sdu_bytes = s.sdu.payload_bytes;
  pdu.sdu_enqueue_time = s.sdu.enqueue_time;
  m_inFlight.emplace (pdu.pdu_id, Segment{pdu.sn, offset, length});
  return pdu;
}

std::vector<RlcPdu>
RlcEntity::tx_opportunity (std::uint64_t grantBytes)
{
  std::vector<RlcPdu> out;
  if (m_mode == RlcMode::Sm)
    {
      if (grantBytes > kRlcHeaderBytes)
        {
          RlcPdu pdu;
          pdu.pdu_id = m_nextPduId++;
          pdu.bearer_id = m_bearerId;
          pdu.fabricated = true;
          pdu.length = static_cast<std::uint32_t> (grantBytes - kRlcHeaderBytes);
          pdu.sdu_bytes = pdu.length;
          out.push_back (pdu);
        }
      return out;
    }

  std::uint64_t left = grantBytes;
  while (left > kRlcHeaderBytes && !m_retx.empty ())
    {
      Segment& seg = m_retx.front ();
      auto it = m_sdus.find (seg.sn);
      if (it == m_sdus.end ())
        {
          m_retx.pop_front ();
          continue;
        }
      const auto len = static_cast<std::uint32_t> (std::min<std::uint64_t> (seg.length, left - kRlcHeaderBytes));
      out.push_back (MakePdu (it->second, seg.offset, len));
      left -= len + kRlcHeaderBytes;
      if (len == seg.length)
        {
          m_retx.pop_front ();
        }
      else
        {
          seg.offset += len;
          seg.length -= len;
        }
    }
  for (auto it = m_sdus.begin (); it != m_sdus.end () && left > kRlcHeaderBytes; ++it)
    {
      SduState& s = it->second;
      const std::uint32_t remaining = s.sdu.payload_bytes - s.next_offset;
      if (remaining == 0)
        {
          continue;
        }
      const auto len = static_cast<std::uint32_t> (std::min<std::uint64_t> (remaining, left - kRlcHeaderBytes));
      out.push_back (MakePdu (s, s.next_offset, len));
      s.next_offset += len;
      left -= len + kRlcHeaderBytes;
    }
  return out;
}

FeedbackEffect
RlcEntity::on_mac_outcome (std::uint64_t pduId, bool delivered)
{
  FeedbackEffect effect;
  if (m_mode == RlcMode::Sm)
    {
      return effect;
    }
  auto fl = m_inFlight.find (pduId);
  if (fl == m_inFlight.end ())
    {
      ++m_unknownFeedback;
      effect.known = false;
      return effect;
    }
  const Segment seg = fl->second;
  m_inFlight.erase (fl);
  auto it = m_sdus.find (seg.sn);
  if (it == m_sdus.end ())
    {
      // SDU already released (forwarded or lost); nothing left to account.
      ++m_unknownFeedback;
      effect.known = false;
      return effect;
    }
  SduState& s = it->second;
  if (delivered)
    {
      s.acked_bytes += seg.length;
      if (s.acked_bytes >= s.sdu.payload_bytes)
        {
          effect.completed_sn = seg.sn;
          m_sdus.erase (it);
        }
      return effect;
    }
  if (m_mode == RlcMode::Am)
    {
      m_retx.push_back (seg);
      effect.requeued_bytes = seg.length;
      return effect;
    }
  effect.lost_sn = seg.sn;
  m_sdus.erase (it);
  return effect;
}

ForwardResult
RlcEntity::handover_forward (ForwardMode mode)
{
  if (mode == ForwardMode::Lossless && m_mode != RlcMode::Am)
    {
      throw ConfigError ("lossless forwarding requires RLC AM, bearer uses " + to_string (m_mode));
    }
  ForwardResult result;
  for (const auto& [sn, s] : m_sdus)
    {
      if (mode == ForwardMode::Lossless || s.next_offset == 0)
        {
          result.forwarded.push_back (s.sdu);
        }
      else
        {
          result.lost_sns.push_back (sn);
        }
    }
  m_sdus.clear ();
  m_retx.clear ();
  m_inFlight.clear ();
  return result;
}

std::vector<PdcpPdu>
RlcEntity::drain_all ()
{
  std::vector<PdcpPdu> out;
  out.reserve (m_sdus.size ());
  for (const auto& [sn, s] : m_sdus)
    {
      out.push_back (s.sdu);
    }
  m_sdus.clear ();
  m_retx.clear ();
  m_inFlight.clear ();
  return out;
}

} // namespace mcsim::rlc
