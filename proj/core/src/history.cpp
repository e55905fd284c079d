#include "posikit/history.hpp"

#include "posikit/error.hpp"

namespace posikit {

History::History(const Grid& grid, Field u0, std::size_t capacity, double t0)
    : capacity_(capacity), t0_(t0), time_(t0) {
  if (capacity_ == 0) throw InvalidArgument("history capacity must be positive");
  require_same_grid(u0, grid);
  target_mass_ = mass(u0, grid);
  initial_u_ = u0;
  levels_.push_front(Level{std::move(u0), Field(grid), 0.0});
}

void History::push(Level level, double new_time) {
  levels_.push_front(std::move(level));
  while (levels_.size() > capacity_) levels_.pop_back();
  time_ = new_time;
  ++steps_;
}

void History::seed_older(Level level) {
  if (levels_.size() >= capacity_) throw InvalidArgument("history is already full");
  levels_.push_back(std::move(level));
}

}  // namespace posikit
