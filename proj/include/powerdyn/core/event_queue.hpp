#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "powerdyn/core/errors.hpp"

namespace powerdyn {

/// Time-ordered queue of one-shot events on a fixed step grid.
///
/// Event times snap to the nearest multiple of the step; events on the same
/// step fire in insertion order.
template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    std::int64_t step;
    double time;
    Payload payload;
  };

  explicit EventQueue(double step_h) : step_h_(step_h) {}

  /// Rejects events earlier than the current step.
  void schedule(double t, Payload payload) {
    const auto step = snap(t);
    if (step < current_step_) {
      throw ConfigError("event at t=" + std::to_string(t) + " s lies in the past");
    }
    // Insert after every entry with step <= new step (stable for equal times).
    auto it = entries_.begin();
    while (it != entries_.end() && it->step <= step) ++it;
    entries_.insert(it, Entry{step, step * step_h_, std::move(payload)});
  }

  /// Removes and returns the events due at or before `step`, in firing order.
  std::vector<Entry> pop_due(std::int64_t step) {
    current_step_ = step;
    std::vector<Entry> due;
    std::size_t n = 0;
    while (n < entries_.size() && entries_[n].step <= step) ++n;
    due.assign(std::make_move_iterator(entries_.begin()),
               std::make_move_iterator(entries_.begin() + static_cast<std::ptrdiff_t>(n)));
    entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n));
    return due;
  }

  std::int64_t snap(double t) const { return std::llround(t / step_h_); }
  double step_h() const { return step_h_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  double step_h_;
  std::int64_t current_step_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace powerdyn
