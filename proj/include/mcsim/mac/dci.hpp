#pragma once

#include <cstdint>

namespace mcsim::mac {

/// One downlink grant on one carrier.
struct Dci
{
  int cc_id = 0;
  int ue_id = 0;
  int bearer_id = 0;
  int n_symbols = 0;
  int mcs = 0;
  std::uint64_t tb_size_bytes = 0;
  bool is_retx = false;
  int harq_pid = -1;
};

enum class TbOutcome
{
  Ack,
  Nack
};

} // namespace mcsim::mac
