#pragma once

#include <span>
#include <vector>

#include "posikit/grid.hpp"

namespace posikit {

/// Fast diagonalizing transform for one grid axis.
///
/// periodic  -> real-to-halfcomplex DFT over all N nodes
/// dirichlet -> DST-I over the N - 1 interior nodes
/// neumann   -> DCT-I over all N + 1 nodes
///
/// In the transformed basis the constant-coefficient operators of the axis
/// are diagonal; `laplacian_symbol` holds the eigenvalues of the positive
/// operator -d^2/dx^2 as discretized by `apply_laplacian`, and
/// `div_grad_symbol` those of -D(D .) as used by the variable-coefficient
/// assembly (they differ only in the periodic Nyquist mode).
class AxisTransform {
 public:
  AxisTransform(const AxisSpec& spec, int points);
  ~AxisTransform();
  AxisTransform(const AxisTransform&) = delete;
  AxisTransform& operator=(const AxisTransform&) = delete;

  Boundary bc() const noexcept { return bc_; }
  /// Number of stored nodes along the axis.
  int points() const noexcept { return points_; }
  /// Offset of the first transformed node and the transform length.
  int offset() const noexcept { return offset_; }
  int length() const noexcept { return length_; }

  /// In-place forward/backward transform of a contiguous line of `length()` values.
  /// backward(forward(x)) == x (normalization folded into backward).
  void forward(std::span<double> line) const;
  void backward(std::span<double> line) const;

  std::span<const double> laplacian_symbol() const noexcept { return laplacian_symbol_; }
  std::span<const double> div_grad_symbol() const noexcept { return div_grad_symbol_; }

  /// Spectral first derivative of a periodic line given in halfcomplex form.
  void differentiate_halfcomplex(std::span<double> coeffs) const;

 private:
  Boundary bc_;
  int points_;
  int offset_ = 0;
  int length_ = 0;
  double normalization_ = 1.0;
  double wavenumber_scale_ = 1.0;
  void* plan_forward_ = nullptr;
  void* plan_backward_ = nullptr;
  std::vector<double> laplacian_symbol_;
  std::vector<double> div_grad_symbol_;
};

/// Applies `fn(line)` to every line of `data` along axis `a` (gathering
/// strided lines into contiguous scratch storage). Only the `[offset, offset+length)`
/// window of each line is passed.
template <typename Fn>
void for_each_line(const Grid& g, int a, std::span<double> data, Fn&& fn) {
  const AxisTransform& tr = g.transform(a);
  const std::size_t stride = g.stride(a);
  const int other = g.dim() == 2 ? g.points(1 - a) : 1;
  const std::size_t other_stride = g.dim() == 2 ? g.stride(1 - a) : 0;
  std::vector<double> line(static_cast<std::size_t>(tr.length()));
  for (int j = 0; j < other; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * other_stride +
                             static_cast<std::size_t>(tr.offset()) * stride;
    for (int i = 0; i < tr.length(); ++i) {
      line[static_cast<std::size_t>(i)] = data[base + static_cast<std::size_t>(i) * stride];
    }
    fn(std::span<double>(line));
    for (int i = 0; i < tr.length(); ++i) {
      data[base + static_cast<std::size_t>(i) * stride] = line[static_cast<std::size_t>(i)];
    }
  }
}

/// Tensor-product transform over every axis. Values outside each axis'
/// transform window (Dirichlet boundary nodes) are left untouched.
void transform_forward(const Grid& g, std::span<double> data);
void transform_backward(const Grid& g, std::span<double> data);

}  // namespace posikit
