#include "mcsim/channel/carrier.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mcsim::channel {

std::string
to_string (Rat rat)
{
  return rat == Rat::Lte ? "LTE" : "MMWAVE";
}

Rat
parse_rat (const std::string& name)
{
  std::string up = name;
  std::transform (up.begin (), up.end (), up.begin (), [] (unsigned char c) { return std::toupper (c); });
  if (up == "LTE")
    {
      return Rat::Lte;
    }
  if (up == "MMWAVE" || up == "NR")
    {
      return Rat::Mmwave;
    }
  throw ConfigError ("unknown RAT '" + name + "'");
}

std::vector<std::string>
validate_carriers (std::span<const CarrierConfig> carriers)
{
  std::vector<std::string> errors;
  std::map<Rat, std::set<int>> ids;
  std::map<Rat, int> primaries;
  std::map<Rat, std::vector<const CarrierConfig*>> byRat;

  for (const auto& c : carriers)
    {
      const std::string who = to_string (c.rat) + " cc" + std::to_string (c.cc_id);
      if (!(c.bandwidth_mhz > 0.0))
        {
          errors.push_back (who + ": bandwidth_mhz must be > 0");
        }
      if (!(c.center_freq_ghz >= 0.5 && c.center_freq_ghz <= 100.0))
        {
          errors.push_back (who + ": center_freq_ghz must lie in [0.5, 100]");
        }
      if (c.n_subbands < 1)
        {
          errors.push_back (who + ": n_subbands must be >= 1");
        }
      if (c.symbols_per_subframe < 1 || c.control_symbols < 0 || c.control_symbols >= c.symbols_per_subframe)
        {
          errors.push_back (who + ": need 0 <= control_symbols < symbols_per_subframe");
        }
      if (!(c.symbol_duration_us > 0.0))
        {
          errors.push_back (who + ": symbol_duration_us must be > 0");
        }
      if (c.subframes_per_frame < 1)
        {
          errors.push_back (who + ": subframes_per_frame must be >= 1");
        }
      if (!ids[c.rat].insert (c.cc_id).second)
        {
          errors.push_back (who + ": duplicate cc_id within RAT");
        }
      if (c.is_primary)
        {
          ++primaries[c.rat];
        }
      byRat[c.rat].push_back (&c);
    }

  for (const auto& [rat, list] : byRat)
    {
      if (primaries[rat] != 1)
        {
          errors.push_back (to_string (rat) + ": exactly one primary carrier required, found " +
                            std::to_string (primaries[rat]));
        }
      for (std::size_t i = 0; i < list.size (); ++i)
        {
          for (std::size_t j = i + 1; j < list.size (); ++j)
            {
              const auto* a = list[i];
              const auto* b = list[j];
              // 1 kHz slack so carriers sharing an edge are not flagged by rounding.
              constexpr double kEdgeSlackGhz = 1e-6;
              if (a->low_edge_ghz () < b->high_edge_ghz () - kEdgeSlackGhz &&
                  b->low_edge_ghz () < a->high_edge_ghz () - kEdgeSlackGhz)
                {
                  std::ostringstream os;
                  os << to_string (rat) << ": carriers cc" << a->cc_id << " and cc" << b->cc_id
                     << " overlap in spectrum";
                  errors.push_back (os.str ());
                }
            }
        }
    }
  return errors;
}

} // namespace mcsim::channel
