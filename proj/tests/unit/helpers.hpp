#pragma once

// Shared fixtures for the unit suites: common models and a deterministic
// sampler over certified-logconcave environments.

#include <cmath>
#include <random>

#include "coarse/function_model.hpp"
#include "coarse/value_model.hpp"

namespace testutil {

inline coarse::FunctionModel uniform_density() {
  return coarse::FunctionModel::uniform().as_density();
}

inline coarse::FunctionModel bimodal_density() {
  return coarse::FunctionModel::expression("12*(x-0.5)^2").as_density();
}

// random logconcave prior: Beta(a, b) with a, b in [1, 4]
inline coarse::FunctionModel random_logconcave_prior(std::mt19937& rng) {
  std::uniform_real_distribution<double> ab(1.0, 4.0);
  return coarse::FunctionModel::beta(ab(rng), ab(rng)).as_density();
}

// random logconcave positive curvature: constant, exp(c x), or a truncated
// normal bump
inline coarse::ValueModel random_logconcave_value(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0:
      return coarse::ValueModel(coarse::FunctionModel::piecewise_constant({0.0, 1.0}, {2.0}));
    case 1: {
      std::uniform_real_distribution<double> cdist(-2.0, 2.0);
      const double c = cdist(rng);
      return coarse::ValueModel(coarse::FunctionModel::callable(
          "exp", [c](double x) { return std::exp(c * x); }));
    }
    default: {
      std::uniform_real_distribution<double> mdist(0.2, 0.8), sdist(0.15, 0.5);
      return coarse::ValueModel(
          coarse::FunctionModel::truncated_normal(mdist(rng), sdist(rng)));
    }
  }
}

// the frozen bi-pooling instance: bimodal prior, W-shaped curvature whose
// middle bi-tangent pair is 0.5 +- sqrt(3/80)
inline coarse::FunctionModel wcurv_prior() { return bimodal_density(); }
inline coarse::ValueModel wcurv_value() {
  return coarse::ValueModel::from_expression("400*(x-0.5)^4-45*(x-0.5)^2+0.45");
}

}  // namespace testutil
