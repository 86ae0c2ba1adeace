// Bench harness: run one (scenario, degree, variant) cell, reproduce the
// benchmark tables, dump dual-certificate grids, and round-trip results as
// CSV.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volsos/assembly.hpp"
#include "volsos/oracle.hpp"
#include "volsos/scenario.hpp"

namespace volsos {

struct ResultRow {
  std::string scenario;
  int degree = 0;
  Variant variant = Variant::Plain;
  Side side = Side::Sos;
  double bound = 0.0;
  std::optional<double> exact_volume;
  std::optional<double> relative_error;  // (bound - exact) / exact
  int iterations = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
};

struct RunOptions {
  Side side = Side::Sos;
  // When > 0 and the scenario has no exact volume, the relative error is
  // computed against a Monte-Carlo estimate with this many samples.
  long mc_samples = 0;
  uint64_t seed = 0;
  // When > 0 (SOS side only), the certificate polynomials are taken from a
  // second solve whose objective adds this multiple of the total Gram trace.
  // The SDP optimum is badly non-unique in the Gram matrices at high degree:
  // the interior-point analytic center picks huge canceling coefficients,
  // and the trace penalty selects the small-norm optimizer instead.  The
  // reported bound always comes from the unpenalized solve.
  double certificate_trace_penalty = 0.0;
  AssemblyOptions assembly;
  SolverOptions solver;
};

struct RunOutput {
  ResultRow row;
  std::optional<Certificate> certificate;  // absent when the solve failed
};

RunOutput run_scenario(const ScenarioSpec& s, int d, Variant v, const RunOptions& opts = {});

// table_id is "T1" (3-ball, d in {4,8,12}) or "T3" (disk in lp bounding
// balls, d in {8,16}, p in {2,4,6,8,10}); max_degree filters cells and is
// rejected with a message naming the limit when out of range.
std::vector<ResultRow> reproduce_table(const ScenarioRegistry& reg, const std::string& table_id,
                                       int max_degree, const RunOptions& opts = {});

struct GridDump {
  std::string scenario;
  int degree = 0;
  Variant variant = Variant::Plain;
  int resolution = 0;                    // points per axis over the enclosing box
  std::vector<std::vector<double>> rows;  // x_1..x_n, w(x), w*(x), 1_K(x)
};

// n <= 2 only (rejects higher dimensions); resolution >= 2.
GridDump dump_w_grid(const ScenarioSpec& s, const Certificate& cert, const WStarModel& wstar,
                     int resolution);
double grid_max_w(const GridDump& grid);
double grid_l1_distance(const GridDump& grid);  // mean |w - w*| over the grid

void write_grid_csv(const GridDump& grid, std::ostream& out);

void write_results_csv(std::span<const ResultRow> rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);

SolveStatus solve_status_from_string(const std::string& name);

}  // namespace volsos
