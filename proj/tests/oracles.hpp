#pragma once

// Test-only reference computations. Nothing here calls the grid solver.

#include <cmath>
#include <random>
#include <vector>

#include "pconf/funcspace.hpp"

namespace pconf::testing {

// Closed-form branch inverses of δ₁(t) = (t+1)/2 + c(1 - t²), δ₂ = t - δ₁.
struct QuadraticInverse {
  long double c;

  long double inv1(long double y) const {
    if (c == 0) return 2 * y - 1;
    // c t² - t/2 + (y - 1/2 - c) = 0, root in [-1, 1]
    const long double disc = 0.25L - 4 * c * (y - 0.5L - c);
    return (0.5L - std::sqrt(disc)) / (2 * c);
  }
  long double inv2(long double y) const {
    if (c == 0) return 2 * y + 1;
    // c t² + t/2 - (1/2 + c + y) = 0
    const long double disc = 0.25L + 4 * c * (0.5L + c + y);
    return (-0.5L + std::sqrt(disc)) / (2 * c);
  }
};

// Conjugation of quadratic(c) to the standard pair, evaluated pointwise from
// the itinerary of x under the expanding branch inverse:
//   h(x) = Σ_i χ(f^i(x)) 2^-(i+1),
// which is the series form of the fixed point of T. Truncation error 2^-depth.
inline double itinerary_conjugation(double c, double x, int depth = 60) {
  const QuadraticInverse inv{c};
  long double z = x;
  long double sum = 0;
  long double w = 0.5L;
  for (int i = 0; i < depth; ++i) {
    if (z <= 0) {
      sum -= w;
      z = inv.inv2(z);
    } else {
      sum += w;
      z = inv.inv1(z);
    }
    z = std::fmin(1.0L, std::fmax(-1.0L, z));
    w *= 0.5L;
  }
  return static_cast<double>(sum);
}

template <typename F>
double central_difference(F&& f, double t, double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2 * h);
}

// Random element of the fixed-point space on the given nodes: nondecreasing,
// fixes -1, 0, 1 (0 must be a node).
inline MonotoneFunction random_admissible(std::span<const double> nodes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> incs(nodes.size(), 0.0);
  std::size_t zero = 0;
  while (nodes[zero] != 0.0) ++zero;
  std::vector<double> values(nodes.size());
  auto fill = [&](std::size_t from, std::size_t to, double lo, double hi) {
    double total = 0.0;
    for (std::size_t i = from + 1; i <= to; ++i) total += (incs[i] = u(rng));
    double acc = lo;
    values[from] = lo;
    for (std::size_t i = from + 1; i < to; ++i) {
      acc += (hi - lo) * incs[i] / total;
      values[i] = std::min(acc, hi);
    }
    values[to] = hi;
  };
  fill(0, zero, -1.0, 0.0);
  fill(zero, nodes.size() - 1, 0.0, 1.0);
  return MonotoneFunction({nodes.begin(), nodes.end()}, std::move(values));
}

}  // namespace pconf::testing
