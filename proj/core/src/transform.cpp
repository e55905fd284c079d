#include "posikit/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace posikit {

namespace {

// The FFTW planner is not re-entrant; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan make_plan(int n, fftw_r2r_kind kind) {
  std::vector<double> scratch(static_cast<std::size_t>(n));
  std::lock_guard<std::mutex> lock(planner_mutex());
  return fftw_plan_r2r_1d(n, scratch.data(), scratch.data(), kind,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
}

}  // namespace

AxisTransform::AxisTransform(const AxisSpec& spec, int points) : bc_(spec.bc), points_(points) {
  const int intervals = spec.intervals;
  const double h = (spec.upper - spec.lower) / intervals;
  fftw_r2r_kind forward_kind = FFTW_R2HC;
  fftw_r2r_kind backward_kind = FFTW_HC2R;

  switch (bc_) {
    case Boundary::periodic: {
      offset_ = 0;
      length_ = points;
      normalization_ = 1.0 / points;
      wavenumber_scale_ = 2.0 * std::numbers::pi / (spec.upper - spec.lower);
      laplacian_symbol_.resize(static_cast<std::size_t>(length_));
      div_grad_symbol_.resize(static_cast<std::size_t>(length_));
      for (int j = 0; j < length_; ++j) {
        const int k = j <= length_ / 2 ? j : length_ - j;
        const double kappa = wavenumber_scale_ * k;
        laplacian_symbol_[static_cast<std::size_t>(j)] = kappa * kappa;
        const bool nyquist = length_ % 2 == 0 && j == length_ / 2;
        div_grad_symbol_[static_cast<std::size_t>(j)] = nyquist ? 0.0 : kappa * kappa;
      }
      break;
    }
    case Boundary::dirichlet: {
      offset_ = 1;
      length_ = intervals - 1;
      normalization_ = 1.0 / (2.0 * intervals);
      forward_kind = backward_kind = FFTW_RODFT00;
      laplacian_symbol_.resize(static_cast<std::size_t>(length_));
      for (int j = 0; j < length_; ++j) {
        const double s = std::sin(std::numbers::pi * (j + 1) / (2.0 * intervals));
        laplacian_symbol_[static_cast<std::size_t>(j)] = 4.0 * s * s / (h * h);
      }
      div_grad_symbol_ = laplacian_symbol_;
      break;
    }
    case Boundary::neumann: {
      offset_ = 0;
      length_ = intervals + 1;
      normalization_ = 1.0 / (2.0 * intervals);
      forward_kind = backward_kind = FFTW_REDFT00;
      laplacian_symbol_.resize(static_cast<std::size_t>(length_));
      for (int j = 0; j < length_; ++j) {
        const double s = std::sin(std::numbers::pi * j / (2.0 * intervals));
        laplacian_symbol_[static_cast<std::size_t>(j)] = 4.0 * s * s / (h * h);
      }
      div_grad_symbol_ = laplacian_symbol_;
      break;
    }
  }
  plan_forward_ = make_plan(length_, forward_kind);
  plan_backward_ = make_plan(length_, backward_kind);
}

AxisTransform::~AxisTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

void AxisTransform::forward(std::span<double> line) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_forward_), line.data(), line.data());
}

void AxisTransform::backward(std::span<double> line) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_backward_), line.data(), line.data());
  for (double& v : line) v *= normalization_;
}

void AxisTransform::differentiate_halfcomplex(std::span<double> c) const {
  const int n = length_;
  c[0] = 0.0;
  for (int k = 1; 2 * k < n; ++k) {
    const double kappa = wavenumber_scale_ * k;
    const double re = c[static_cast<std::size_t>(k)];
    const double im = c[static_cast<std::size_t>(n - k)];
    c[static_cast<std::size_t>(k)] = -kappa * im;
    c[static_cast<std::size_t>(n - k)] = kappa * re;
  }
  if (n % 2 == 0) c[static_cast<std::size_t>(n / 2)] = 0.0;
}

void transform_forward(const Grid& g, std::span<double> data) {
  for (int a = 0; a < g.dim(); ++a) {
    const AxisTransform& tr = g.transform(a);
    for_each_line(g, a, data, [&](std::span<double> line) { tr.forward(line); });
  }
}

void transform_backward(const Grid& g, std::span<double> data) {
  for (int a = g.dim() - 1; a >= 0; --a) {
    const AxisTransform& tr = g.transform(a);
    for_each_line(g, a, data, [&](std::span<double> line) { tr.backward(line); });
  }
}

}  // namespace posikit
