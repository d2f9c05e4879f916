#pragma once

// Random instances and small helpers shared by the unit and acceptance tests.

#include "geoloop/kernel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace geoloop::testing {

inline constexpr double kPi = std::numbers::pi;

inline ModelPoint random_point(Curvature k, std::mt19937_64& rng, double radius = 2.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (k) {
    case Curvature::Spherical: {
      std::normal_distribution<double> n;
      return ModelPoint(k, Vec3(n(rng), n(rng), n(rng)).normalized());
    }
    case Curvature::Flat: return ModelPoint(k, Vec3(radius * u(rng), radius * u(rng), 0.0));
    case Curvature::Hyperbolic: {
      std::uniform_real_distribution<double> r(0.0, radius), th(0.0, 2 * kPi);
      const double d = r(rng), a = th(rng);
      return ModelPoint(k, Vec3(std::sinh(d) * std::cos(a), std::sinh(d) * std::sin(a), std::cosh(d)));
    }
  }
  return ModelPoint::base(k);
}

inline Vec3 random_direction(const ModelPoint& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.0, 2 * kPi);
  const Vec3 e1 = tangent_unit(p, p.kappa() == Curvature::Flat ? Vec3(1, 0, 0) : Vec3(1, 0.3, 0.2));
  return rotate_tangent(p, e1, th(rng));
}

/// Random isometry, orientation reversing half of the time.
inline Isometry2 random_isometry(Curvature k, std::mt19937_64& rng, double radius = 1.5) {
  const ModelPoint o = random_point(k, rng, radius);
  Isometry2 g = Isometry2::frame(o, random_direction(o, rng));
  if (std::bernoulli_distribution(0.5)(rng)) g = g * Isometry2::base_reflection(k);
  return g;
}

}  // namespace geoloop::testing
