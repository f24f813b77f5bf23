#include "provsim/sim_core.hpp"

#include <cstdio>
#include <utility>

namespace provsim {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::EnvCreate:
      return "env_create";
    case EventKind::JobComplete:
      return "job_complete";
    case EventKind::SchedulerTick:
      return "scheduler_tick";
    case EventKind::LeaseTimerTick:
      return "lease_timer_tick";
    case EventKind::JobSubmit:
      return "job_submit";
    case EventKind::EnvDestroy:
      return "env_destroy";
  }
  return "unknown";
}

void Engine::set_handler(EventKind kind, Handler h) {
  handlers_[static_cast<int>(kind)] = std::move(h);
}

void Engine::schedule(SimTime time, EventKind kind, int env, int64_t a,
                      int64_t b) {
  if (time < clock_) {
    throw SimError("event at " + std::to_string(time) +
                   "ms precedes the clock at " + std::to_string(clock_) +
                   "ms");
  }
  Event ev;
  ev.time = time;
  ev.priority_class = static_cast<int>(kind);
  ev.seq = next_seq_++;
  ev.kind = kind;
  ev.env = env;
  ev.a = a;
  ev.b = b;
  queue_.push(ev);
}

std::optional<Event> Engine::pop_next() {
  if (queue_.empty()) return std::nullopt;
  Event ev = queue_.top();
  queue_.pop();
  clock_ = ev.time;
  return ev;
}

void Engine::run(SimTime until) {
  while (!queue_.empty() && queue_.top().time <= until) {
    Event ev = queue_.top();
    queue_.pop();
    clock_ = ev.time;
    dispatch(ev);
  }
  if (clock_ < until) clock_ = until;
}

void Engine::dispatch(const Event& ev) {
  if (log_enabled_) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%lld %d %llu %s",
                  static_cast<long long>(ev.time), ev.priority_class,
                  static_cast<unsigned long long>(ev.seq),
                  event_kind_name(ev.kind));
    log_.emplace_back(buf);
  }
  Handler& h = handlers_[static_cast<int>(ev.kind)];
  if (h) h(*this, ev);
}

}  // namespace provsim
