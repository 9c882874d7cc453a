#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace mcsim::sim {

using EventId = std::uint64_t;
using Action = std::function<void ()>;

/// A scheduled action. `tag` must point to storage that outlives the event
/// (string literals in practice); it only appears in diagnostics.
struct Event
{
  double fire_time;
  std::uint64_t sequence_no;
  const char* tag;
  Action action;
};

/// Single-threaded discrete-event engine. Events fire in (time, sequence)
/// order, so events scheduled for the same instant run in FIFO order.
class EventEngine
{
public:
  EventEngine () = default;
  EventEngine (const EventEngine&) = delete;
  EventEngine& operator= (const EventEngine&) = delete;

  /// Enqueue `action` at now() + delay. Throws ConfigError on negative delay.
  EventId schedule (double delay, const char* tag, Action action);

  /// Absolute-time variant; `at` must not precede now().
  EventId schedule_at (double at, const char* tag, Action action);

  /// Processes every event with fire_time <= tEnd, then sets the clock to tEnd.
  /// A throwing handler aborts the run with a SimulationError naming the
  /// event time and tag.
  std::size_t run_until (double tEnd);

  double now () const { return m_now; }
  std::size_t pending () const { return m_queue.size (); }
  std::uint64_t processed_total () const { return m_processed; }

private:
  struct Later
  {
    bool operator() (const Event& a, const Event& b) const
    {
      if (a.fire_time != b.fire_time)
        {
          return a.fire_time > b.fire_time;
        }
      return a.sequence_no > b.sequence_no;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> m_queue;
  double m_now = 0.0;
  std::uint64_t m_nextSeq = 0;
  std::uint64_t m_processed = 0;
};

} // namespace mcsim::sim
