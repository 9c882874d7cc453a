#pragma once

#include <cstdint>
#include <string>

namespace mcsim::rlc {

enum class RlcMode
{
  Sm, ///< saturation: always-full buffer, payload fabricated on demand
  Um,
  Am
};

enum class Leg
{
  Lte,
  Mmwave
};

enum class ForwardMode
{
  Lossless, ///< every buffered PDU, including transmitted-unacked ones
  Seamless  ///< only PDUs never handed to the MAC
};

std::string to_string (RlcMode mode);
std::string to_string (Leg leg);
std::string to_string (ForwardMode mode);
RlcMode parse_rlc_mode (const std::string& name);

/// The unit the PDCP hands to an RLC entity and the unit forwarded over X2.
struct PdcpPdu
{
  std::uint64_t sn = 0;
  int bearer_id = 0;
  std::uint32_t payload_bytes = 0;
  double enqueue_time = 0.0;
};

inline constexpr std::uint32_t kRlcHeaderBytes = 2;

/// One RLC PDU: a segment [offset, offset + length) of one SDU plus a fixed
/// header. In SM mode the payload is fabricated and `sn` is meaningless.
struct RlcPdu
{
  std::uint64_t pdu_id = 0;
  int bearer_id = 0;
  bool fabricated = false;
  std::uint64_t sn = 0;
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::uint32_t sdu_bytes = 0;
  double sdu_enqueue_time = 0.0;

  std::uint64_t size_bytes () const { return std::uint64_t{length} + kRlcHeaderBytes; }
};

} // namespace mcsim::rlc
