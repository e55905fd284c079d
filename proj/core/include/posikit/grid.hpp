#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posikit {

class AxisTransform;

enum class Boundary { periodic, dirichlet, neumann };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

/// One axis of a tensor grid: the interval, the number of intervals and the
/// boundary treatment. Periodic axes are half-open [lower, upper).
struct AxisSpec {
  double lower = 0.0;
  double upper = 1.0;
  int intervals = 4;
  Boundary bc = Boundary::periodic;
};

using GridId = std::uint64_t;

/// Uniform tensor grid (1D or 2D) carrying the collocation set, lumped
/// quadrature weights and the per-axis fast transforms.
///
/// Node storage is row-major with the first axis fastest: index = iy * nx + ix.
/// Dirichlet boundary nodes are stored (their value is pinned to zero) but are
/// not part of the collocation set; Neumann boundary nodes are.
class Grid {
 public:
  static std::shared_ptr<const Grid> build(std::vector<AxisSpec> axes);

  GridId id() const noexcept { return id_; }
  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }

  /// Stored nodes along an axis (N for periodic, N + 1 otherwise).
  int points(int a) const { return points_.at(static_cast<std::size_t>(a)); }
  double spacing(int a) const { return spacing_.at(static_cast<std::size_t>(a)); }
  std::size_t size() const noexcept { return weights_.size(); }

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const std::uint8_t> active() const noexcept { return active_; }
  bool is_active(std::size_t i) const { return active_[i] != 0; }
  std::size_t active_count() const noexcept { return active_count_; }

  /// Coordinate of node `index` along axis `a`.
  double coordinate(std::size_t index, int a) const;
  std::array<double, 2> point(std::size_t index) const;

  /// Lebesgue measure of the domain.
  double measure() const noexcept { return measure_; }

  const AxisTransform& transform(int a) const { return *transforms_.at(static_cast<std::size_t>(a)); }

  /// Stride between consecutive nodes along axis `a`.
  std::size_t stride(int a) const { return a == 0 ? 1 : static_cast<std::size_t>(points_[0]); }

  bool all_periodic() const;

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  ~Grid();

 private:
  Grid() = default;

  GridId id_ = 0;
  std::vector<AxisSpec> axes_;
  std::vector<int> points_;
  std::vector<double> spacing_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> active_;
  std::size_t active_count_ = 0;
  double measure_ = 0.0;
  std::vector<std::unique_ptr<AxisTransform>> transforms_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace posikit
