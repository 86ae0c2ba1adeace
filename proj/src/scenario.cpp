#include "volsos/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace volsos {

namespace {

Polynomial polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("polynomial: expected a non-empty JSON array of terms");
  }
  int nvars = -1;
  Polynomial p(1);
  for (const auto& term : j) {
    const auto& exps = term.at("exps");
    if (nvars < 0) {
      nvars = static_cast<int>(exps.size());
      p = Polynomial(nvars);
    } else if (static_cast<int>(exps.size()) != nvars) {
      throw std::invalid_argument("polynomial: inconsistent exponent vector lengths");
    }
    MultiIndex k;
    for (const auto& e : exps) {
      const int ei = e.get<int>();
      if (ei < 0) throw std::invalid_argument("polynomial: negative exponent");
      k.push_back(ei);
    }
    p.add_term(k, term.at("coeff").get<double>());
  }
  return p;
}

nlohmann::json polynomial_to_json_obj(const Polynomial& p) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [k, c] : p.terms()) {
    j.push_back({{"coeff", c}, {"exps", k}});
  }
  return j;
}

}  // namespace

Polynomial parse_polynomial_json(const std::string& json_text) {
  return polynomial_from_json(nlohmann::json::parse(json_text));
}

std::string polynomial_to_json(const Polynomial& p) { return polynomial_to_json_obj(p).dump(); }

ScenarioSpec parse_scenario_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ScenarioSpec s;
  s.name = j.at("name").get<std::string>();
  s.n = j.at("n").get<int>();
  s.g = polynomial_from_json(j.at("g"));
  if (s.g.nvars() != s.n) throw std::invalid_argument("scenario: g dimension mismatch");
  if (s.g.degree() < 1) throw std::invalid_argument("scenario: g must have degree >= 1");

  const auto& jb = j.at("bounding");
  const std::string kind = jb.at("kind").get<std::string>();
  if (kind == "lp_ball") {
    s.bounding = BoundingSet::lp_ball(s.n, jb.at("p").get<int>());
  } else if (kind == "box") {
    s.bounding = BoundingSet::box(jb.at("lo").get<std::vector<double>>(),
                                  jb.at("hi").get<std::vector<double>>());
    if (s.bounding.n != s.n) throw std::invalid_argument("scenario: box dimension mismatch");
  } else {
    throw std::invalid_argument("scenario: unknown bounding kind '" + kind + "'");
  }

  if (j.contains("exact_volume")) s.exact_volume = j.at("exact_volume").get<double>();
  if (j.contains("notes")) s.notes = j.at("notes").get<std::string>();

  if (j.contains("components")) {
    for (const auto& jc : j.at("components")) {
      ComponentPredicate c;
      if (jc.contains("description")) c.description = jc.at("description").get<std::string>();
      if (jc.contains("axis")) {
        c.axis = jc.at("axis").get<int>();
        c.sign = jc.at("sign").get<int>();
        if (c.axis < 0 || c.axis >= s.n || (c.sign != 1 && c.sign != -1)) {
          throw std::invalid_argument("scenario: bad component predicate");
        }
      }
      s.components.push_back(c);
    }
  }
  if (s.components.empty()) s.components.push_back({"whole set", -1, 0});
  return s;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_json(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ScenarioRegistry ScenarioRegistry::load_directory(const std::string& dir) {
  ScenarioRegistry reg;
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) reg.add(load_scenario_file(f));
  return reg;
}

std::string ScenarioRegistry::default_directory() {
  if (const char* env = std::getenv("VOLSOS_SCENARIOS")) return env;
#ifdef VOLSOS_SCENARIO_DIR
  return VOLSOS_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

const ScenarioSpec& ScenarioRegistry::get(const std::string& name) const {
  for (const auto& s : scenarios_) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("unknown scenario: " + name);
}

bool ScenarioRegistry::has(const std::string& name) const {
  for (const auto& s : scenarios_) {
    if (s.name == name) return true;
  }
  return false;
}

std::vector<std::string> ScenarioRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& s : scenarios_) out.push_back(s.name);
  std::sort(out.begin(), out.end());
  return out;
}

void ScenarioRegistry::add(ScenarioSpec s) {
  if (has(s.name)) throw std::invalid_argument("duplicate scenario name: " + s.name);
  scenarios_.push_back(std::move(s));
}

}  // namespace volsos
