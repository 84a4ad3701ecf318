#pragma once

// Seeded generators shared by the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "singlab/geometry.hpp"

namespace singlab::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Vec2 vec2(double scale = 1.0) { return {scale * normal(), scale * normal()}; }

  PlaneDataset plane(std::size_t n, double scale = 1.0) {
    std::vector<Vec2> p(n);
    for (auto& v : p) v = vec2(scale);
    return PlaneDataset(std::move(p));
  }

  CircleDataset circle(std::size_t n) {
    std::vector<double> a(n);
    for (auto& x : a) x = uniform(-kPi, kPi);
    return CircleDataset::from_angles(a);
  }

  /// Collinear dataset with distinct abscissae along a random line.
  PlaneDataset collinear(std::size_t n, bool vertical = false) {
    const double angle = vertical ? kPi / 2 : uniform(0.0, kPi);
    const Vec2 dir = unit_vector(angle);
    const Vec2 base = vec2();
    std::vector<Vec2> p;
    for (std::size_t i = 0; i < n; ++i) {
      double t = uniform(-2.0, 2.0);
      p.push_back(base + t * dir);
    }
    if (vertical) {
      for (auto& q : p) q.x = base.x;
    }
    return PlaneDataset(std::move(p));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace singlab::test
