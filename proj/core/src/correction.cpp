#include "posikit/correction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "posikit/error.hpp"

namespace posikit {

namespace {

// Bisection needs ~60 halvings to resolve a double; the bracket search up to ~100 doublings.
constexpr int kBisectionBudget = 400;

// A floor mass within rounding of the target still has a root (all nodes clamped).
bool below_floor(double floor_mass, double target) {
  return floor_mass - target > 1e-13 * std::max(1.0, std::abs(target));
}

struct Iterate {
  double xi = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

void keep_best(Iterate& best, double xi, double value) {
  if (std::abs(value) < std::abs(best.value)) best = {xi, value};
}

SecantResult bisect(const std::function<double(double)>& F, double a, double b, double tol_abs,
                    int iterations, Iterate best) {
  double lo = std::min(a, b);
  double hi = std::max(a, b);
  double width = std::max(hi - lo, 1e-8);
  double f_lo = F(lo);
  double f_hi = F(hi);
  keep_best(best, lo, f_lo);
  keep_best(best, hi, f_hi);
  int evaluations = 0;
  while (f_lo > 0.0 && evaluations < kBisectionBudget) {
    hi = lo;
    f_hi = f_lo;
    lo -= width;
    width *= 2.0;
    f_lo = F(lo);
    keep_best(best, lo, f_lo);
    ++evaluations;
  }
  while (f_hi < 0.0 && evaluations < kBisectionBudget) {
    lo = hi;
    f_lo = f_hi;
    hi += width;
    width *= 2.0;
    f_hi = F(hi);
    keep_best(best, hi, f_hi);
    ++evaluations;
  }
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw SecantFailure("no sign change found for the mass residual", best.xi, best.value);
  }
  if (std::abs(f_lo) <= tol_abs) return {lo, iterations + evaluations, true};
  if (std::abs(f_hi) <= tol_abs) return {hi, iterations + evaluations, true};
  while (evaluations < kBisectionBudget) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = F(mid);
    keep_best(best, mid, f_mid);
    ++evaluations;
    if (std::abs(f_mid) <= tol_abs) return {mid, iterations + evaluations, true};
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw SecantFailure("bisection did not reach the mass tolerance", best.xi, best.value);
}

// F is piecewise linear, so once both iterates share a segment one more
// secant update lands on the root up to rounding. Taken only when the
// accepted residual is still above rounding level.
SecantResult polish(const std::function<double(double)>& F, double xi0, double f0, double xi1,
                    double f1, int iterations, double scale) {
  const double rounding = 1e-15 * std::max(1.0, std::abs(scale));
  const double denom = f1 - f0;
  if (std::abs(f1) <= rounding || denom == 0.0 || !std::isfinite(denom)) {
    return {xi1, iterations, false};
  }
  const double xi2 = xi1 - f1 * (xi1 - xi0) / denom;
  const double f2 = F(xi2);
  if (std::abs(f2) < std::abs(f1)) return {xi2, iterations + 1, false};
  return {xi1, iterations, false};
}

}  // namespace

CorrectionOutcome correct_positivity(const Field& u_tilde, const Field& lambda_extrapolation,
                                     const BdfTableau& tab, double dt, double lower_bound,
                                     const Grid& g) {
  require_same_grid(u_tilde, g);
  require_same_grid(lambda_extrapolation, g);
  CorrectionOutcome out{Field(g), Field(g), 0.0, 0, 0};
  const double shift_scale = dt / tab.alpha;
  const double rate = tab.alpha / dt;
  for (std::size_t z = 0; z < u_tilde.size(); ++z) {
    if (!g.is_active(z)) continue;
    const double d = u_tilde[z] - shift_scale * lambda_extrapolation[z];
    if (d >= lower_bound) {
      out.u_next[z] = d;
    } else {
      out.u_next[z] = lower_bound;
      out.lambda_next[z] = rate * (lower_bound - d);
      ++out.active_count;
    }
  }
  return out;
}

CorrectionOutcome correct_cutoff(const Field& u_tilde, const BdfTableau& tab, double dt,
                                 double lower_bound, const Grid& g) {
  require_same_grid(u_tilde, g);
  CorrectionOutcome out{Field(g), Field(g), 0.0, 0, 0};
  const double rate = tab.alpha / dt;
  for (std::size_t z = 0; z < u_tilde.size(); ++z) {
    if (!g.is_active(z)) continue;
    const double d = u_tilde[z];
    if (d >= lower_bound) {
      out.u_next[z] = d;
    } else {
      out.u_next[z] = lower_bound;
      out.lambda_next[z] = rate * (lower_bound - d);
      ++out.active_count;
    }
  }
  return out;
}

double MassResidual::shift(std::size_t node, double xi) const {
  return dt / alpha * (xi - (*shift_base)[node]);
}

double MassResidual::operator()(double xi) const {
  const auto w = grid->weights();
  double total = 0.0;
  for (std::size_t z = 0; z < u_tilde->size(); ++z) {
    if (w[z] <= 0.0) continue;
    const double v = (*u_tilde)[z] + shift(z, xi);
    total += w[z] * (v >= lower_bound ? v : lower_bound);
  }
  return total - target_mass;
}

double residual_F(double xi, const Field& u_tilde, const Field& shift_base, double dt,
                  const BdfTableau& tab, double target_mass, const Grid& g, double lower_bound) {
  require_same_grid(u_tilde, g);
  require_same_grid(shift_base, g);
  const MassResidual F{&u_tilde, &shift_base, &g, dt, tab.alpha, target_mass, lower_bound};
  return F(xi);
}

SecantResult solve_xi_secant(const std::function<double(double)>& F, double xi0, double xi1,
                             const SecantSettings& settings, double scale) {
  const double tol_abs = settings.tolerance * std::max(1.0, std::abs(scale));
  Iterate best;
  double f0 = F(xi0);
  keep_best(best, xi0, f0);
  if (std::abs(f0) <= tol_abs) return {xi0, 0, false};
  double f1 = F(xi1);
  keep_best(best, xi1, f1);
  if (std::abs(f1) <= tol_abs) return {xi1, 0, false};

  for (int it = 1; it <= settings.max_iterations; ++it) {
    const double denom = f1 - f0;
    if (denom == 0.0 || !std::isfinite(denom)) {
      return bisect(F, xi0, xi1, tol_abs, it - 1, best);
    }
    const double xi2 = xi1 - f1 * (xi1 - xi0) / denom;
    const double f2 = F(xi2);
    keep_best(best, xi2, f2);
    if (std::abs(f2) <= tol_abs) return polish(F, xi1, f1, xi2, f2, it, scale);
    xi0 = xi1;
    f0 = f1;
    xi1 = xi2;
    f1 = f2;
  }
  throw SecantFailure(fmt::format("secant iteration exceeded {} iterations (|F| = {:.3e})",
                                  settings.max_iterations, std::abs(best.value)),
                      best.xi, best.value);
}

double solve_xi_exact(const MassResidual& F) {
  const Grid& g = *F.grid;
  const auto w = g.weights();
  const double slope_scale = F.dt / F.alpha;
  struct Node {
    double breakpoint;
    double intercept;  // (u~ - dt/alpha * base) * w
    double weight;
  };
  std::vector<Node> nodes;
  double total_weight = 0.0;
  for (std::size_t z = 0; z < F.u_tilde->size(); ++z) {
    if (w[z] <= 0.0) continue;
    const double ut = (*F.u_tilde)[z];
    const double base = (*F.shift_base)[z];
    // u~ + dt/alpha (xi - base) >= lb  <=>  xi >= base + alpha/dt (lb - u~)
    nodes.push_back({base + (F.lower_bound - ut) / slope_scale, (ut - slope_scale * base) * w[z], w[z]});
    total_weight += w[z];
  }
  const double floor_mass = F.lower_bound * total_weight;
  if (below_floor(floor_mass, F.target_mass)) {
    throw InvalidArgument(fmt::format("target mass {} is below the floor mass {}", F.target_mass,
                                      floor_mass));
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.breakpoint < b.breakpoint; });
  if (nodes.empty()) throw InvalidArgument("empty collocation set");
  if (floor_mass >= F.target_mass) return nodes.front().breakpoint;

  double intercept_sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    intercept_sum += nodes[j].intercept;
    weight_sum += nodes[j].weight;
    // On [bp_j, bp_{j+1}]: F = intercept_sum + slope_scale*xi*weight_sum + lb*(W - weight_sum) - T.
    const double rest = F.lower_bound * (total_weight - weight_sum) - F.target_mass;
    const double root = -(intercept_sum + rest) / (slope_scale * weight_sum);
    const bool last = j + 1 == nodes.size();
    if (last || root <= nodes[j + 1].breakpoint) {
      return std::max(root, nodes[j].breakpoint);
    }
  }
  return nodes.back().breakpoint;
}

CorrectionOutcome correct_mass_conserving(const Field& u_tilde, const Field& shift_base,
                                          const BdfTableau& tab, double dt, double target_mass,
                                          double lower_bound, const Grid& g,
                                          const SecantSettings& settings) {
  require_same_grid(u_tilde, g);
  require_same_grid(shift_base, g);
  const MassResidual F{&u_tilde, &shift_base, &g, dt, tab.alpha, target_mass, lower_bound};
  double total_weight = 0.0;
  for (double w : g.weights()) total_weight += w;
  if (below_floor(lower_bound * total_weight, target_mass)) {
    throw InvalidArgument(fmt::format("target mass {} is below the floor mass {}", target_mass,
                                      lower_bound * total_weight));
  }
  const SecantResult root = solve_xi_secant(F, 0.0, -dt, settings, target_mass);

  CorrectionOutcome out{Field(g), Field(g), root.xi, root.iterations, 0};
  const double rate = tab.alpha / dt;
  for (std::size_t z = 0; z < u_tilde.size(); ++z) {
    if (!g.is_active(z)) continue;
    const double v = u_tilde[z] + F.shift(z, root.xi);
    if (v >= lower_bound) {
      out.u_next[z] = v;
    } else {
      out.u_next[z] = lower_bound;
      out.lambda_next[z] = rate * (lower_bound - v);
      ++out.active_count;
    }
  }
  return out;
}

}  // namespace posikit
