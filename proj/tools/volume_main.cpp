#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "volsos/oracle.hpp"
#include "volsos/rng.hpp"
#include "volsos/runner.hpp"
#include "volsos/sdpa.hpp"

using namespace volsos;

namespace {

int cmd_run(const std::string& scenario, int degree, const std::string& variant,
            const std::string& side, const std::string& out_path, int grid_resolution,
            long mc_samples, uint64_t seed, const std::string& sdpa_path) {
  const auto reg = ScenarioRegistry::load_directory(ScenarioRegistry::default_directory());
  const auto& s = reg.get(scenario);
  RunOptions opts;
  opts.side = side == "moment" ? Side::Moment : Side::Sos;
  opts.mc_samples = mc_samples;
  opts.seed = seed;
  // grids are meant to show the shape of w, so take the certificate from the
  // small-norm (trace-penalized) optimizer; the bound row stays unpenalized
  if (grid_resolution > 0) opts.certificate_trace_penalty = 1e-6;

  if (!sdpa_path.empty()) {
    const Assembled a = opts.side == Side::Sos
                            ? assemble_sos(s, degree, variant_from_string(variant))
                            : assemble_moment(s, degree, variant_from_string(variant));
    write_sdpa_file(a.problem, sdpa_path);
    std::cerr << "wrote " << sdpa_path << "\n";
  }

  const RunOutput run = run_scenario(s, degree, variant_from_string(variant), opts);
  write_results_csv(std::span<const ResultRow>(&run.row, 1), std::cout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    write_results_csv(std::span<const ResultRow>(&run.row, 1), out);
  }
  if (grid_resolution > 0 && run.certificate) {
    const long n = mc_samples > 0 ? mc_samples : 1000000;
    const WStarModel wstar = wstar_fit(s, n, seed);
    const GridDump grid = dump_w_grid(s, *run.certificate, wstar, grid_resolution);
    const std::string path = s.name + "_d" + std::to_string(degree) + "_" + variant + "_grid.csv";
    std::ofstream out(path);
    write_grid_csv(grid, out);
    std::cerr << "wrote " << path << "\n";
  }
  const bool ok =
      run.row.status == SolveStatus::Optimal || run.row.status == SolveStatus::NearOptimal;
  return ok ? 0 : 1;
}

int cmd_table(const std::string& id, int max_degree, const std::string& out_path) {
  const auto reg = ScenarioRegistry::load_directory(ScenarioRegistry::default_directory());
  const auto rows = reproduce_table(reg, id, max_degree);
  write_results_csv(rows, std::cout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    write_results_csv(rows, out);
  }
  for (const auto& r : rows) {
    if (r.status != SolveStatus::Optimal && r.status != SolveStatus::NearOptimal) return 1;
  }
  return 0;
}

int cmd_check(long n_samples, uint64_t seed) {
  const auto reg = ScenarioRegistry::load_directory(ScenarioRegistry::default_directory());
  bool ok = true;
  for (const auto& name : reg.names()) {
    const auto& s = reg.get(name);
    const long bad = containment_violations(s, n_samples, seed);
    std::cout << name << ": containment violations " << bad << "/" << n_samples;
    if (bad > 0) ok = false;
    if (s.exact_volume) {
      const McEstimate est = mc_volume(s, n_samples, seed);
      const double dev = std::abs(est.estimate - *s.exact_volume);
      const double tol = 4.0 * est.std_error;
      std::cout << ", mc volume " << est.estimate << " vs exact " << *s.exact_volume
                << " (|diff| " << dev << " <= 4se " << tol << ": " << (dev <= tol ? "ok" : "FAIL")
                << ")";
      if (dev > tol) ok = false;
    }
    std::cout << "\n";
  }
  std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volume: certified upper bounds on semi-algebraic set volumes"};
  app.require_subcommand(1);

  std::string scenario, variant = "plain", side = "sos", out_path, sdpa_path, table_id;
  int degree = 4, grid_resolution = 0, max_degree = 16;
  long mc_samples = 0, check_samples = 1000000;
  uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "solve one (scenario, degree, variant) cell");
  run->add_option("--scenario", scenario, "scenario name from the registry")->required();
  run->add_option("--degree", degree, "relaxation degree d (even)")->required();
  run->add_option("--variant", variant, "plain | stokes-factored | stokes-general")
      ->check(CLI::IsMember({"plain", "stokes-factored", "stokes-general"}));
  run->add_option("--side", side, "sos (default) or moment assembly")
      ->check(CLI::IsMember({"sos", "moment"}));
  run->add_option("--out", out_path, "write the result row as CSV");
  run->add_option("--dump-grid", grid_resolution, "dump a w/w* grid at this resolution (n <= 2)");
  run->add_option("--mc-samples", mc_samples, "Monte-Carlo samples for error reference");
  run->add_option("--seed", seed, "Monte-Carlo seed");
  run->add_option("--export-sdpa", sdpa_path, "also export the SDP in sparse SDPA format");

  auto* table = app.add_subcommand("table", "reproduce a benchmark table");
  table->add_option("--id", table_id, "T1 or T3")->required();
  table->add_option("--max-degree", max_degree, "largest relaxation degree to run");
  table->add_option("--out", out_path, "write the table as CSV");

  auto* check = app.add_subcommand("check", "containment and moment-consistency checks");
  check->add_option("--mc-samples", check_samples, "samples per scenario");
  check->add_option("--seed", seed, "Monte-Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(scenario, degree, variant, side, out_path, grid_resolution, mc_samples, seed,
                     sdpa_path);
    }
    if (table->parsed()) return cmd_table(table_id, max_degree, out_path);
    if (check->parsed()) return cmd_check(check_samples, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
