#pragma once

#include "mcsim/ca/cc_manager.hpp"
#include "mcsim/rlc/types.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace mcsim::rlc {

/// Effect of one MAC-level outcome on the transmitting entity.
struct FeedbackEffect
{
  bool known = true;                         ///< false: pdu_id was not in flight
  std::optional<std::uint64_t> completed_sn; ///< SDU fully acknowledged and released
  std::optional<std::uint64_t> lost_sn;      ///< UM: SDU can no longer be reassembled
  std::uint32_t requeued_bytes = 0;          ///< AM: bytes moved to the retx buffer
};

struct ForwardResult
{
  std::vector<PdcpPdu> forwarded;
  std::vector<std::uint64_t> lost_sns; ///< transmitted SDUs a seamless forward gives up
};

/// Transmitting RLC entity of one bearer on one leg (eNB side).
class RlcEntity
{
public:
  static constexpr std::uint64_t kDefaultSaturationBytes = 10'000'000;

  RlcEntity (RlcMode mode, int ueId, int bearerId, Leg leg,
             std::uint64_t saturationBytes = kDefaultSaturationBytes);

  /// Queues a PDCP PDU (UM/AM). SM ignores it.
  void enqueue (const PdcpPdu& pdu);

  /// Current tx/retx/status byte totals; SM reports the saturation constant.
  ca::BufferStatusReport generate_bsr () const;

  /// Fills up to grantBytes (headers included). AM retransmissions are served
  /// first, then new data in SN order; SDUs are segmented as needed.
  std::vector<RlcPdu> tx_opportunity (std::uint64_t grantBytes);

  /// MAC outcome for a PDU: delivered (HARQ ACK) or dropped after HARQ
  /// exhaustion. AM drops go to the retransmission buffer; UM drops lose the
  /// SDU. Unknown ids are ignored and counted.
  FeedbackEffect on_mac_outcome (std::uint64_t pduId, bool delivered);

  /// Empties the entity for a handover or leg switch and returns what the
  /// forwarding mode allows to re-route. Lossless requires AM.
  ForwardResult handover_forward (ForwardMode mode);

  /// Leg switch inside the same anchor: every SDU not yet fully delivered is
  /// returned, whatever the RLC mode, and the entity is emptied.
  std::vector<PdcpPdu> drain_all ();

  RlcMode mode () const { return m_mode; }
  Leg leg () const { return m_leg; }
  int ue_id () const { return m_ueId; }
  int bearer_id () const { return m_bearerId; }
  std::size_t buffered_sdus () const { return m_sdus.size (); }
  std::uint64_t unknown_feedback () const { return m_unknownFeedback; }
  std::uint64_t in_flight_pdus () const { return m_inFlight.size (); }

private:
  struct SduState
  {
    PdcpPdu sdu;
    std::uint32_t next_offset = 0; ///< bytes handed to the MAC at least once
    std::uint32_t acked_bytes = 0;
  };
  struct Segment
  {
    std::uint64_t sn;
    std::uint32_t offset;
    std::uint32_t length;
  };

  RlcPdu MakePdu (const SduState& s, std::uint32_t offset, std::uint32_t length);

  RlcMode m_mode;
  int m_ueId;
  int m_bearerId;
  Leg m_leg;
  std::uint64_t m_saturation;
  std::map<std::uint64_t, SduState> m_sdus;
  std::deque<Segment> m_retx;
  std::map<std::uint64_t, Segment> m_inFlight;
  std::uint64_t m_nextPduId = 1;
  std::uint64_t m_unknownFeedback = 0;
};

} // namespace mcsim::rlc
