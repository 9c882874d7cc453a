#pragma once

#include "mcsim/rlc/types.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace mcsim::rlc {

/// UE-side reassembly for one RLC entity. SM payload is counted directly.
class RlcReceiver
{
public:
  /// Returns the reassembled PDCP PDU when the last missing segment arrives.
  std::optional<PdcpPdu> receive (const RlcPdu& pdu);

  /// Drops partial SDUs (the peer entity was torn down).
  void reset () { m_partial.clear (); }

  std::uint64_t fabricated_bytes () const { return m_fabricatedBytes; }

private:
  std::map<std::uint64_t, std::uint32_t> m_partial;
  std::uint64_t m_fabricatedBytes = 0;
};

} // namespace mcsim::rlc
