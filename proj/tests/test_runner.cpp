#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "volsos/runner.hpp"
#include "volsos/sdpa.hpp"

using namespace volsos;

namespace {
const ScenarioRegistry& registry() {
  static const ScenarioRegistry reg =
      ScenarioRegistry::load_directory(ScenarioRegistry::default_directory());
  return reg;
}
}  // namespace

TEST_CASE("registry holds every benchmark scenario") {
  const std::vector<std::string> expected = {
      "ball3",      "disk",       "disk34-lp10", "disk34-lp2", "disk34-lp4",
      "disk34-lp6", "disk34-lp8", "double-disk", "interval",   "lp4-disk"};
  CHECK(registry().names() == expected);

  const auto& disk = registry().get("disk");
  CHECK(disk.n == 2);
  CHECK(disk.g.coeff({1, 0}) == 1.0);
  CHECK(disk.g.coeff({2, 0}) == -1.0);
  CHECK(disk.g.coeff({0, 2}) == -1.0);
  CHECK(*disk.exact_volume == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));

  const auto& ball3 = registry().get("ball3");
  CHECK(ball3.n == 3);
  CHECK(ball3.g.coeff({0, 0, 0}) == 0.5625);  // (3/4)^2

  const auto& lp6 = registry().get("disk34-lp6");
  CHECK(lp6.bounding.p == 6);
  CHECK(lp6.g.coeff({0, 0}) == 0.5625);

  CHECK(registry().get("double-disk").components.size() == 2);
  CHECK(registry().get("double-disk").g.degree() == 4);
  CHECK(registry().get("interval").n == 1);
}

TEST_CASE("results CSV round-trips bit-exactly") {
  std::vector<ResultRow> rows(2);
  rows[0] = {"disk", 16, Variant::GeneralStokes, Side::Sos, 0.78700000000000214,
             std::numbers::pi / 4.0, 0.002000000000001231, 31, 1.2345678901234567,
             SolveStatus::Optimal};
  rows[1].scenario = "interval";
  rows[1].degree = 8;
  rows[1].variant = Variant::Plain;
  rows[1].bound = 0.1e-300;
  rows[1].status = SolveStatus::NearOptimal;

  std::stringstream ss;
  write_results_csv(rows, ss);
  const auto back = read_results_csv(ss);
  REQUIRE(back.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(back[i].scenario == rows[i].scenario);
    CHECK(back[i].degree == rows[i].degree);
    CHECK(back[i].variant == rows[i].variant);
    CHECK(back[i].side == rows[i].side);
    CHECK(back[i].bound == rows[i].bound);
    CHECK(back[i].exact_volume == rows[i].exact_volume);
    CHECK(back[i].relative_error == rows[i].relative_error);
    CHECK(back[i].iterations == rows[i].iterations);
    CHECK(back[i].wall_time_s == rows[i].wall_time_s);
    CHECK(back[i].status == rows[i].status);
  }
}

TEST_CASE("run_scenario on the interval") {
  const auto& s = registry().get("interval");
  const auto sos = run_scenario(s, 8, Variant::Plain);
  REQUIRE(sos.certificate.has_value());
  CHECK((sos.row.status == SolveStatus::Optimal || sos.row.status == SolveStatus::NearOptimal));
  CHECK(sos.row.bound >= 0.5 - 1e-5);  // upper bound on lambda(K) = 1/2
  REQUIRE(sos.row.relative_error.has_value());
  CHECK(*sos.row.relative_error >= -1e-5);

  RunOptions mopts;
  mopts.side = Side::Moment;
  const auto mom = run_scenario(s, 8, Variant::Plain, mopts);
  CHECK(std::abs(mom.row.bound - sos.row.bound) <= 1e-5 * (1.0 + sos.row.bound));
}

TEST_CASE("trace-penalized certificate keeps the bound but shrinks w") {
  const auto& s = registry().get("disk");
  const auto raw = run_scenario(s, 8, Variant::GeneralStokes);
  RunOptions copts;
  copts.certificate_trace_penalty = 1e-6;
  const auto clean = run_scenario(s, 8, Variant::GeneralStokes, copts);
  REQUIRE(raw.certificate.has_value());
  REQUIRE(clean.certificate.has_value());
  // the reported bound comes from the unpenalized solve either way
  CHECK(clean.row.bound == doctest::Approx(raw.row.bound).epsilon(1e-9));
  CHECK(clean.certificate->bound == doctest::Approx(raw.certificate->bound).epsilon(1e-9));
  auto coeff_norm = [](const Polynomial& w) {
    double n = 0.0;
    for (const auto& [e, c] : w.terms()) n += std::abs(c);
    return n;
  };
  // the optimum is non-unique in the Grams; the penalty picks a smaller w
  CHECK(coeff_norm(clean.certificate->w) < coeff_norm(raw.certificate->w));
}

TEST_CASE("reproduce_table validates its filters") {
  CHECK_THROWS_WITH_AS(static_cast<void>(reproduce_table(registry(), "T1", 14)),
                       "T1 is limited to degree 12 at desk scale (n = 3)",
                       std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(reproduce_table(registry(), "T9", 4)),
                  std::invalid_argument);
}

TEST_CASE("reproduce_table T1 low-degree smoke") {
  const auto rows = reproduce_table(registry(), "T1", 4);
  REQUIRE(rows.size() == 2);  // d = 4, Plain and GeneralStokes
  for (const auto& r : rows) {
    CHECK(r.scenario == "ball3");
    CHECK(r.degree == 4);
    CHECK((r.status == SolveStatus::Optimal || r.status == SolveStatus::NearOptimal));
    REQUIRE(r.relative_error.has_value());
    CHECK(*r.relative_error >= -1e-5);
  }
  CHECK(rows[1].bound <= rows[0].bound + 1e-6);  // Stokes dominance
}

TEST_CASE("grid dump shows the Gibbs overshoot on the interval") {
  const auto& s = registry().get("interval");
  const auto run = run_scenario(s, 10, Variant::Plain);
  REQUIRE(run.certificate.has_value());
  const auto wstar = wstar_fit(s, 200000, 3);
  const auto grid = dump_w_grid(s, *run.certificate, wstar, 501);
  CHECK(grid.rows.size() == 501);
  CHECK(grid_max_w(grid) > 1.0);  // overshoot bumps above the indicator

  const auto tiny = dump_w_grid(s, *run.certificate, wstar, 2);
  CHECK(tiny.rows.size() == 2);

  std::stringstream ss;
  write_grid_csv(grid, ss);
  CHECK(ss.str().starts_with("x1,w,wstar,indicator\n"));

  CHECK_THROWS_AS(dump_w_grid(registry().get("ball3"), *run.certificate, wstar, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(dump_w_grid(s, *run.certificate, wstar, 1), std::invalid_argument);
}

TEST_CASE("SDPA export golden text") {
  SdpProblem p;
  p.block_dims = {1};
  p.n_free = 1;
  p.objective = {{0, 0, 0, 1.0}};
  SdpRow r1;
  r1.terms = {{0, 0, 0, 1.0}, {kFreeBlock, 0, 0, 1.0}};
  r1.rhs = 2.0;
  SdpRow r2;
  r2.terms = {{kFreeBlock, 0, 0, 1.0}};
  r2.rhs = 1.0;
  p.rows = {r1, r2};

  std::stringstream ss;
  write_sdpa(p, ss);
  const std::string expected =
      "* volsos export; free variables split into a trailing LP block\n"
      "2\n"
      "2\n"
      "1 -2\n"
      "2 1\n"
      "0 1 1 1 -1\n"
      "1 1 1 1 1\n"
      "1 2 1 1 1\n"
      "1 2 2 2 -1\n"
      "2 2 1 1 1\n"
      "2 2 2 2 -1\n";
  CHECK(ss.str() == expected);
}
