#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library code it is checking.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Simplex counts of the Vietoris-Rips complex by enumerating every subset
/// of the points (n <= 20) and keeping those whose pairwise distances are
/// all <= r.
inline std::vector<std::uint64_t> power_set_counts(const std::vector<std::vector<double>>& pts,
                                                   double r) {
  const std::size_t n = pts.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t t = 0; t < pts[i].size(); ++t) {
        const double d = pts[i][t] - pts[j][t];
        d2 += d * d;
      }
      adj[i][j] = std::sqrt(d2) <= r;
    }
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool clique = true;
    std::size_t size = 0;
    for (std::size_t i = 0; i < n && clique; ++i) {
      if (!(mask >> i & 1u)) continue;
      ++size;
      for (std::size_t j = i + 1; j < n; ++j)
        if ((mask >> j & 1u) && !adj[i][j]) {
          clique = false;
          break;
        }
    }
    if (clique) ++counts[size - 1];
  }
  while (!counts.empty() && counts.back() == 0) counts.pop_back();
  return counts;
}

inline std::int64_t alternating_sum(const std::vector<std::uint64_t>& counts) {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < counts.size(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(counts[k]);
  return chi;
}

/// n evenly spaced points on the unit circle, flattened row-major.
inline std::vector<double> circle(std::size_t n, double radius = 1.0) {
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    c.push_back(radius * std::cos(a));
    c.push_back(radius * std::sin(a));
  }
  return c;
}

/// n points on the unit 2-sphere from normalised Gaussians.
inline std::vector<double> sphere2(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g(rng), y = g(rng), z = g(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    c.insert(c.end(), {x / r, y / r, z / r});
  }
  return c;
}

/// Central-difference Jacobian of a vector function.
template <class F>
std::vector<std::vector<double>> finite_difference_jacobian(F&& f, std::vector<double> x,
                                                            double h) {
  const auto f0 = f(x);
  std::vector<std::vector<double>> j(f0.size(), std::vector<double>(x.size(), 0.0));
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double keep = x[c];
    x[c] = keep + h;
    const auto up = f(x);
    x[c] = keep - h;
    const auto down = f(x);
    x[c] = keep;
    for (std::size_t r = 0; r < f0.size(); ++r) j[r][c] = (up[r] - down[r]) / (2.0 * h);
  }
  return j;
}

/// Uniform point in the unit ball of R^m.
inline std::vector<double> ball_point(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(m);
  double n = 0.0;
  for (auto& v : x) {
    v = g(rng);
    n += v * v;
  }
  const double r = std::pow(u(rng), 1.0 / static_cast<double>(m)) / std::sqrt(n);
  for (auto& v : x) v *= r;
  return x;
}

}  // namespace oracle
