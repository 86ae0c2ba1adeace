// Independent ground truth: Monte-Carlo volume estimation over the enclosing
// box of B, and the optimal continuous dual certificate
// w*(x) = g(x) sum_i 1_{Omega_i}(x) / m_{Omega_i}(g) over the declared
// connected components Omega_i of the interior of K.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "volsos/scenario.hpp"

namespace volsos {

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // binomial: sqrt(rho (1-rho) / N) * lambda(box)
  long n_samples = 0;
  uint64_t seed = 0;
};

// Uniform sampling on the tight axis-aligned box enclosing B; a hit needs
// g(x) >= 0 and x in B. Deterministic in (scenario, n_samples, seed).
McEstimate mc_volume(const ScenarioSpec& s, long n_samples, uint64_t seed);

// The registry's closed-form volume, when declared.
std::optional<double> exact_volume(const ScenarioSpec& s);

struct WStarModel {
  ScenarioSpec scenario;
  // m_i = mean of g over component Omega_i, aligned with scenario.components
  std::vector<double> component_masses;
};

// Estimates each m_{Omega_i}(g) by Monte Carlo over K. Throws
// std::runtime_error when a declared component captures no samples.
WStarModel wstar_fit(const ScenarioSpec& s, long mc_samples, uint64_t seed);
// g(x)/m_i on component i, 0 outside K.
double wstar_eval(const WStarModel& m, std::span<const double> x);

// MC quadrature of w* over the enclosing box of B (integrates to lambda(K)).
McEstimate wstar_quadrature(const WStarModel& m, long n_samples, uint64_t seed);

// Counts sampled points with g >= 0 but outside B (validates K inside B).
long containment_violations(const ScenarioSpec& s, long n_samples, uint64_t seed);

}  // namespace volsos
