#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcsim {

/// Invalid configuration or a violated precondition on a configuration-time call.
/// Carries every violation found, not only the first one.
class ConfigError : public std::invalid_argument
{
public:
  explicit ConfigError (const std::string& what);
  explicit ConfigError (std::vector<std::string> violations);

  const std::vector<std::string>& violations () const { return m_violations; }

private:
  std::vector<std::string> m_violations;
};

/// An event handler failed while the engine was running.
class SimulationError : public std::runtime_error
{
public:
  SimulationError (double eventTime, std::string tag, const std::string& cause);

  double event_time () const { return m_eventTime; }
  const std::string& tag () const { return m_tag; }

private:
  double m_eventTime;
  std::string m_tag;
};

} // namespace mcsim
