#include "volsos/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "volsos/rng.hpp"

namespace volsos {

namespace {

struct BoxSampler {
  std::vector<double> lo, hi;
  CounterRng rng;
  double volume = 1.0;

  BoxSampler(const ScenarioSpec& s, uint64_t seed) : rng(seed) {
    s.bounding.enclosing_box(lo, hi);
    for (size_t i = 0; i < lo.size(); ++i) volume *= hi[i] - lo[i];
  }

  // Stateless draw for sample index s: shard-safe regardless of call order.
  void sample(long s, std::vector<double>& x) const {
    for (size_t i = 0; i < lo.size(); ++i) {
      const double u = rng.uniform_at(static_cast<uint64_t>(s) * lo.size() + i);
      x[i] = lo[i] + u * (hi[i] - lo[i]);
    }
  }
};

bool in_k(const ScenarioSpec& s, std::span<const double> x) {
  return evaluate(s.g, x) >= 0.0 && s.bounding.contains(x);
}

}  // namespace

McEstimate mc_volume(const ScenarioSpec& s, long n_samples, uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("mc_volume: need at least one sample");
  const BoxSampler box(s, seed);
  std::vector<double> x(s.n);
  long hits = 0;
  for (long i = 0; i < n_samples; ++i) {
    box.sample(i, x);
    if (in_k(s, x)) ++hits;
  }
  const double rho = static_cast<double>(hits) / static_cast<double>(n_samples);
  McEstimate est;
  est.estimate = rho * box.volume;
  est.std_error = std::sqrt(rho * (1.0 - rho) / static_cast<double>(n_samples)) * box.volume;
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

std::optional<double> exact_volume(const ScenarioSpec& s) { return s.exact_volume; }

WStarModel wstar_fit(const ScenarioSpec& s, long mc_samples, uint64_t seed) {
  if (s.components.empty()) throw std::invalid_argument("scenario declares no components");
  const BoxSampler box(s, seed);
  std::vector<double> x(s.n);
  std::vector<double> sums(s.components.size(), 0.0);
  std::vector<long> counts(s.components.size(), 0);
  for (long i = 0; i < mc_samples; ++i) {
    box.sample(i, x);
    if (!in_k(s, x)) continue;
    for (size_t c = 0; c < s.components.size(); ++c) {
      if (s.components[c].matches(x)) {
        sums[c] += evaluate(s.g, x);
        counts[c] += 1;
      }
    }
  }
  WStarModel model{s, {}};
  for (size_t c = 0; c < s.components.size(); ++c) {
    if (counts[c] == 0) {
      throw std::runtime_error("component '" + s.components[c].description +
                               "' captured no Monte-Carlo samples");
    }
    model.component_masses.push_back(sums[c] / static_cast<double>(counts[c]));
  }
  return model;
}

double wstar_eval(const WStarModel& m, std::span<const double> x) {
  if (!in_k(m.scenario, x)) return 0.0;
  const double g = evaluate(m.scenario.g, x);
  double w = 0.0;
  for (size_t c = 0; c < m.scenario.components.size(); ++c) {
    if (m.scenario.components[c].matches(x)) w += g / m.component_masses[c];
  }
  return w;
}

McEstimate wstar_quadrature(const WStarModel& m, long n_samples, uint64_t seed) {
  const BoxSampler box(m.scenario, seed);
  std::vector<double> x(m.scenario.n);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    box.sample(i, x);
    const double w = wstar_eval(m, x);
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / static_cast<double>(n_samples);
  const double var = std::max(sum2 / static_cast<double>(n_samples) - mean * mean, 0.0);
  McEstimate est;
  est.estimate = mean * box.volume;
  est.std_error = std::sqrt(var / static_cast<double>(n_samples)) * box.volume;
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

long containment_violations(const ScenarioSpec& s, long n_samples, uint64_t seed) {
  const BoxSampler box(s, seed);
  std::vector<double> x(s.n);
  long bad = 0;
  for (long i = 0; i < n_samples; ++i) {
    box.sample(i, x);
    if (evaluate(s.g, x) >= 0.0 && !s.bounding.contains(x)) ++bad;
  }
  return bad;
}

}  // namespace volsos
