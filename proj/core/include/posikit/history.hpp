#pragma once

#include <cstddef>
#include <deque>

#include "posikit/field.hpp"

namespace posikit {

/// One accepted time level: solution, positivity multiplier and mass multiplier.
struct Level {
  Field u;
  Field lambda;
  double xi = 0.0;
};

/// Ring of the most recent accepted levels, newest first.
class History {
 public:
  /// Starts from u0 with lambda^0 = 0 and xi^0 = 0. `capacity` is the number
  /// of levels retained (the BDF order).
  History(const Grid& grid, Field u0, std::size_t capacity, double t0 = 0.0);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t depth() const noexcept { return levels_.size(); }

  /// Level `i` steps back (0 = newest).
  const Level& level(std::size_t i) const { return levels_.at(i); }
  const Field& u(std::size_t i = 0) const { return levels_.at(i).u; }
  const Field& lambda(std::size_t i = 0) const { return levels_.at(i).lambda; }
  double xi(std::size_t i = 0) const { return levels_.at(i).xi; }

  double time() const noexcept { return time_; }
  double initial_time() const noexcept { return t0_; }
  long steps() const noexcept { return steps_; }

  /// Mass of the initial level; the target of mass-conserving corrections.
  double target_mass() const noexcept { return target_mass_; }

  void push(Level level, double new_time);

  /// Seeds an older level behind the current ones (used to warm-start
  /// higher-order runs from exact data). Does not advance time.
  void seed_older(Level level);

  const Field& initial_u() const noexcept { return initial_u_; }

 private:
  std::size_t capacity_;
  std::deque<Level> levels_;
  Field initial_u_;
  double t0_ = 0.0;
  double time_ = 0.0;
  long steps_ = 0;
  double target_mass_ = 0.0;
};

}  // namespace posikit
