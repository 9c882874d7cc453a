#include "mcsim/rlc/rlc_receiver.hpp"

namespace mcsim::rlc {

std::optional<PdcpPdu>
RlcReceiver::receive (const RlcPdu& pdu)
{
  if (pdu.fabricated)
    {
      m_fabricatedBytes += pdu.length;
      return std::nullopt;
    }
  auto& got = m_partial[pdu.sn];
  got += pdu.length;
  if (got < pdu.sdu_bytes)
    {
      return std::nullopt;
    }
  m_partial.erase (pdu.sn);
  return PdcpPdu{pdu.sn, pdu.bearer_id, pdu.sdu_bytes, pdu.sdu_enqueue_time};
}

} // namespace mcsim::rlc
