#include "posikit/bdf.hpp"

#include <fmt/format.h>

#include "posikit/error.hpp"

namespace posikit {

BdfTableau bdf_tableau(int k) {
  switch (k) {
    case 1:
      return {1, 1.0, {1.0}, {}};
    case 2:
      return {2, 3.0 / 2.0, {2.0, -1.0 / 2.0}, {1.0}};
    case 3:
      return {3, 11.0 / 6.0, {3.0, -3.0 / 2.0, 1.0 / 3.0}, {2.0, -1.0}};
    case 4:
      return {4, 25.0 / 12.0, {4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0}, {3.0, -3.0, 1.0}};
    default:
      throw InvalidArgument(fmt::format("BDF order {} is not supported (1..4)", k));
  }
}

Field combine(std::span<const double> coeffs, std::span<const Field* const> levels) {
  if (levels.size() < coeffs.size() || levels.empty()) {
    throw InvalidArgument("not enough history levels for the combination");
  }
  Field out = *levels[0];
  out *= 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.axpy(coeffs[i], *levels[i]);
  return out;
}

double combine(std::span<const double> coeffs, std::span<const double> levels) {
  if (levels.size() < coeffs.size()) {
    throw InvalidArgument("not enough history levels for the combination");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) out += coeffs[i] * levels[i];
  return out;
}

}  // namespace posikit
