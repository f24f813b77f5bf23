#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace provsim {

// Scaled simulation time in integer milliseconds.  Integer arithmetic keeps
// the engine bit-deterministic across platforms.
using SimTime = int64_t;

constexpr int64_t kMsPerSecond = 1000;
constexpr int64_t kMsPerHour = 3'600'000;

struct SimError : std::runtime_error {
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

enum class EventKind : int {
  EnvCreate = 0,
  JobComplete = 1,
  SchedulerTick = 2,
  LeaseTimerTick = 3,
  JobSubmit = 4,
  EnvDestroy = 5,
};

const char* event_kind_name(EventKind k);

// Dispatch order is the total order (time, priority_class, seq).  The class
// ranking makes resources freed at time t visible to the scheduler at t, and
// lets lease timers reclaim idle nodes before new arrivals are seen.
struct Event {
  SimTime time = 0;
  int priority_class = 0;
  uint64_t seq = 0;
  EventKind kind = EventKind::SchedulerTick;
  int env = -1;   // runtime environment index, -1 when not applicable
  int64_t a = 0;  // payload: job/task index, lease id, instance index
  int64_t b = 0;
};

class Engine {
 public:
  using Handler = std::function<void(Engine&, const Event&)>;

  void set_handler(EventKind kind, Handler h);

  // Assigns the insertion counter; time must not precede the clock.
  void schedule(SimTime time, EventKind kind, int env, int64_t a = 0,
                int64_t b = 0);

  // Removes and returns the minimum event; advances the clock to its time.
  std::optional<Event> pop_next();

  // Dispatches in order while the next event's time is <= until, then leaves
  // the clock at max(clock, until).
  void run(SimTime until);

  SimTime clock() const { return clock_; }
  bool empty() const { return queue_.empty(); }

  void enable_dispatch_log() { log_enabled_ = true; }
  // One entry per dispatch: "time_ms class seq kind".
  const std::vector<std::string>& dispatch_log() const { return log_; }

 private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      if (x.priority_class != y.priority_class)
        return x.priority_class > y.priority_class;
      return x.seq > y.seq;
    }
  };

  void dispatch(const Event& ev);

  SimTime clock_ = 0;
  uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Handler handlers_[6];
  bool log_enabled_ = false;
  std::vector<std::string> log_;
};

}  // namespace provsim
