#include "mcsim/sim/engine.hpp"

#include "mcsim/sim/errors.hpp"

#include <sstream>

namespace mcsim {

ConfigError::ConfigError (const std::string& what)
  : std::invalid_argument (what),
    m_violations{what}
{
}

namespace {
std::string
JoinViolations (const std::vector<std::string>& v)
{
  std::ostringstream os;
  os << v.size () << " configuration error(s):";
  for (const auto& s : v)
    {
      os << "\n  - " << s;
    }
  return os.str ();
}
} // namespace

ConfigError::ConfigError (std::vector<std::string> violations)
  : std::invalid_argument (JoinViolations (violations)),
    m_violations (std::move (violations))
{
}

SimulationError::SimulationError (double eventTime, std::string tag, const std::string& cause)
  : std::runtime_error ("event '" + tag + "' at t=" + std::to_string (eventTime) + " s failed: " + cause),
    m_eventTime (eventTime),
    m_tag (std::move (tag))
{
}

namespace sim {

EventId
EventEngine::schedule (double delay, const char* tag, Action action)
{
  if (!(delay >= 0.0))
    {
      throw ConfigError ("negative scheduling delay " + std::to_string (delay) + " for event '" +
                         std::string (tag ? tag : "?") + "'");
    }
  return schedule_at (m_now + delay, tag, std::move (action));
}

EventId
EventEngine::schedule_at (double at, const char* tag, Action action)
{
  if (!(at >= m_now))
    {
      throw ConfigError ("event '" + std::string (tag ? tag : "?") + "' scheduled in the past");
    }
  const EventId id = m_nextSeq++;
  m_queue.push (Event{at, id, tag, std::move (action)});
  return id;
}

std::size_t
EventEngine::run_until (double tEnd)
{
  if (tEnd < m_now)
    {
      throw ConfigError ("run_until target precedes the current time");
    }
  std::size_t count = 0;
  while (!m_queue.empty () && m_queue.top ().fire_time <= tEnd)
    {
      // priority_queue::top is const; the action is moved out before pop.
      Event ev = std::move (const_cast<Event&> (m_queue.top ()));
      m_queue.pop ();
      m_now = ev.fire_time;
      try
        {
          ev.action ();
        }
      catch (const SimulationError&)
        {
          throw;
        }
      catch (const std::exception& e)
        {
          throw SimulationError (ev.fire_time, ev.tag ? ev.tag : "?", e.what ());
        }
      ++count;
      ++m_processed;
    }
  m_now = tEnd;
  return count;
}

} // namespace sim
} // namespace mcsim
