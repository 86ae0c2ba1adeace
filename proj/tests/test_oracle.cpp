#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "volsos/oracle.hpp"

using namespace volsos;

namespace {
constexpr double kPi = std::numbers::pi;

const ScenarioRegistry& registry() {
  static const ScenarioRegistry reg =
      ScenarioRegistry::load_directory(ScenarioRegistry::default_directory());
  return reg;
}
}  // namespace

TEST_CASE("mc_volume recovers known areas") {
  const auto est = mc_volume(registry().get("disk"), 1000000, 42);
  CHECK(std::abs(est.estimate - kPi / 4.0) <= 4.0 * est.std_error);
  CHECK(est.std_error > 0.0);

  const auto dd = mc_volume(registry().get("double-disk"), 1000000, 42);
  CHECK(std::abs(dd.estimate - kPi / 8.0) <= 4.0 * dd.std_error);

  const auto ball = mc_volume(registry().get("ball3"), 1000000, 7);
  CHECK(std::abs(ball.estimate - 9.0 * kPi / 16.0) <= 4.0 * ball.std_error);
}

TEST_CASE("single-sample estimate is a Bernoulli draw") {
  const auto& disk = registry().get("disk");
  const auto est = mc_volume(disk, 1, 3);
  const double box = disk.bounding.enclosing_box_volume();
  CHECK((est.estimate == 0.0 || est.estimate == box));
  CHECK(est.std_error == 0.0);
}

TEST_CASE("seeded reproducibility is bitwise") {
  const auto& disk = registry().get("disk");
  const auto a = mc_volume(disk, 100000, 9);
  const auto b = mc_volume(disk, 100000, 9);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  const auto c = mc_volume(disk, 100000, 10);
  CHECK(a.estimate != c.estimate);  // different seed, different draw
}

TEST_CASE("containment holds on every registry scenario") {
  for (const auto& name : registry().names()) {
    CHECK(containment_violations(registry().get(name), 200000, 123) == 0);
  }
}

TEST_CASE("exact volumes") {
  CHECK(*exact_volume(registry().get("disk")) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(*exact_volume(registry().get("lp4-disk")) == doctest::Approx(0.4471).epsilon(1e-3));
  CHECK(*exact_volume(registry().get("ball3")) ==
        doctest::Approx(9.0 * kPi / 16.0).epsilon(1e-12));
}

TEST_CASE("wstar component mass of the disk is 1/8") {
  // mean of g = 1/4 - r^2 over the radius-1/2 disk: polar integral gives 1/8
  const auto model = wstar_fit(registry().get("disk"), 2000000, 11);
  REQUIRE(model.component_masses.size() == 1);
  CHECK(model.component_masses[0] == doctest::Approx(1.0 / 8.0).epsilon(2e-3));
}

TEST_CASE("wstar evaluation support") {
  const auto model = wstar_fit(registry().get("disk"), 500000, 11);
  const std::vector<double> boundary = {1.0, 0.0};  // g vanishes
  CHECK(wstar_eval(model, boundary) == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<double> outside = {-0.5, 0.0};
  CHECK(wstar_eval(model, outside) == 0.0);
  const std::vector<double> center = {0.5, 0.0};
  CHECK(wstar_eval(model, center) == doctest::Approx(0.25 / model.component_masses[0]));
}

TEST_CASE("wstar integrates to the volume") {
  for (const char* name : {"disk", "lp4-disk", "double-disk"}) {
    const auto& s = registry().get(name);
    const auto model = wstar_fit(s, 1000000, 17);
    const auto quad = wstar_quadrature(model, 1000000, 29);
    CHECK(std::abs(quad.estimate - *s.exact_volume) <= 4.0 * quad.std_error);
  }
}

TEST_CASE("double-disk components each carry half the set") {
  const auto model = wstar_fit(registry().get("double-disk"), 1000000, 5);
  REQUIRE(model.component_masses.size() == 2);
  // the two half-disks are mirror images
  CHECK(model.component_masses[0] ==
        doctest::Approx(model.component_masses[1]).epsilon(0.05));
}

TEST_CASE("empty component is reported") {
  ScenarioSpec s = registry().get("disk");  // K lives in x1 > 0
  s.components = {{"impossible half", 0, -1}};
  CHECK_THROWS_AS(wstar_fit(s, 10000, 1), std::runtime_error);
}
