#include "volsos/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "volsos/sdp.hpp"

namespace volsos {

namespace {

// %.17g guarantees bit-exact double round-trips through text.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

SolveStatus solve_status_from_string(const std::string& name) {
  for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::NearOptimal, SolveStatus::Infeasible,
                        SolveStatus::Unbounded, SolveStatus::MaxIter}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown solve status: " + name);
}

RunOutput run_scenario(const ScenarioSpec& s, int d, Variant v, const RunOptions& opts) {
  RunOutput out;
  out.row.scenario = s.name;
  out.row.degree = d;
  out.row.variant = v;
  out.row.side = opts.side;
  out.row.bound = std::numeric_limits<double>::quiet_NaN();

  const Assembled asm_ =
      opts.side == Side::Sos ? assemble_sos(s, d, v, opts.assembly)
                             : assemble_moment(s, d, v, opts.assembly);
  const SdpSolution sol = solve(asm_.problem, opts.solver);
  out.row.status = sol.status;
  out.row.iterations = sol.iterations;
  out.row.wall_time_s = sol.wall_time_s;
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::NearOptimal) return out;

  out.certificate = decode(asm_.map, sol);
  out.row.bound = out.certificate->bound;
  if (opts.certificate_trace_penalty > 0.0 && opts.side == Side::Sos) {
    SdpProblem q = asm_.problem;
    for (int bl = 0; bl < static_cast<int>(q.block_dims.size()); ++bl) {
      for (int i = 0; i < q.block_dims[bl]; ++i) {
        q.objective.push_back({bl, i, i, opts.certificate_trace_penalty});
      }
    }
    const SdpSolution clean = solve(q, opts.solver);
    if (clean.status == SolveStatus::Optimal || clean.status == SolveStatus::NearOptimal) {
      const Certificate c = decode(asm_.map, clean);
      out.certificate->w = c.w;
      out.certificate->u = c.u;
      out.certificate->eta1 = c.eta1;
    }
  }
  if (s.exact_volume) {
    out.row.exact_volume = s.exact_volume;
  } else if (opts.mc_samples > 0) {
    out.row.exact_volume = mc_volume(s, opts.mc_samples, opts.seed).estimate;
  }
  if (out.row.exact_volume) {
    out.row.relative_error = (out.row.bound - *out.row.exact_volume) / *out.row.exact_volume;
  }
  return out;
}

std::vector<ResultRow> reproduce_table(const ScenarioRegistry& reg, const std::string& table_id,
                                       int max_degree, const RunOptions& opts) {
  std::vector<ResultRow> rows;
  const std::vector<Variant> variants = {Variant::Plain, Variant::GeneralStokes};
  if (table_id == "T1") {
    if (max_degree > 12) {
      throw std::invalid_argument("T1 is limited to degree 12 at desk scale (n = 3)");
    }
    for (int d : {4, 8, 12}) {
      if (d > max_degree) continue;
      for (Variant v : variants) rows.push_back(run_scenario(reg.get("ball3"), d, v, opts).row);
    }
  } else if (table_id == "T3") {
    if (max_degree > 16) {
      throw std::invalid_argument("T3 is limited to degree 16 at desk scale (n = 2)");
    }
    for (int d : {8, 16}) {
      if (d > max_degree) continue;
      for (int p : {2, 4, 6, 8, 10}) {
        const auto& s = reg.get("disk34-lp" + std::to_string(p));
        for (Variant v : variants) rows.push_back(run_scenario(s, d, v, opts).row);
      }
    }
  } else {
    throw std::invalid_argument("unknown table id: " + table_id + " (expected T1 or T3)");
  }
  return rows;
}

GridDump dump_w_grid(const ScenarioSpec& s, const Certificate& cert, const WStarModel& wstar,
                     int resolution) {
  if (s.n > 2) throw std::invalid_argument("grid dumps are limited to n <= 2");
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  GridDump grid;
  grid.scenario = s.name;
  grid.degree = cert.degree;
  grid.variant = cert.variant;
  grid.resolution = resolution;

  std::vector<double> lo, hi;
  s.bounding.enclosing_box(lo, hi);
  long total = 1;
  for (int i = 0; i < s.n; ++i) total *= resolution;
  std::vector<double> x(s.n);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = s.n - 1; i >= 0; --i) {
      const int t = static_cast<int>(rest % resolution);
      rest /= resolution;
      x[i] = lo[i] + (hi[i] - lo[i]) * t / (resolution - 1);
    }
    std::vector<double> row = x;
    row.push_back(evaluate(cert.w, x));
    row.push_back(wstar_eval(wstar, x));
    row.push_back(evaluate(s.g, x) >= 0.0 && s.bounding.contains(x) ? 1.0 : 0.0);
    grid.rows.push_back(std::move(row));
  }
  return grid;
}

double grid_max_w(const GridDump& grid) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : grid.rows) m = std::max(m, row[row.size() - 3]);
  return m;
}

double grid_l1_distance(const GridDump& grid) {
  double sum = 0.0;
  for (const auto& row : grid.rows) sum += std::abs(row[row.size() - 3] - row[row.size() - 2]);
  return sum / static_cast<double>(grid.rows.size());
}

void write_grid_csv(const GridDump& grid, std::ostream& out) {
  const int n = static_cast<int>(grid.rows.empty() ? 0 : grid.rows.front().size()) - 3;
  for (int i = 0; i < n; ++i) out << "x" << i + 1 << ",";
  out << "w,wstar,indicator\n";
  for (const auto& row : grid.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
}

void write_results_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << "scenario,degree,variant,side,bound,exact_volume,relative_error,iterations,"
         "wall_time_s,status\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.degree << ',' << to_string(r.variant) << ','
        << to_string(r.side) << ',' << fmt(r.bound) << ',' << fmt_opt(r.exact_volume) << ','
        << fmt_opt(r.relative_error) << ',' << r.iterations << ',' << fmt(r.wall_time_s) << ','
        << to_string(r.status) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 10) throw std::runtime_error("malformed results CSV line: " + line);
    ResultRow r;
    r.scenario = f[0];
    r.degree = std::stoi(f[1]);
    r.variant = variant_from_string(f[2]);
    r.side = f[3] == "sos" ? Side::Sos : Side::Moment;
    r.bound = std::strtod(f[4].c_str(), nullptr);
    if (!f[5].empty()) r.exact_volume = std::strtod(f[5].c_str(), nullptr);
    if (!f[6].empty()) r.relative_error = std::strtod(f[6].c_str(), nullptr);
    r.iterations = std::stoi(f[7]);
    r.wall_time_s = std::strtod(f[8].c_str(), nullptr);
    r.status = solve_status_from_string(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace volsos
