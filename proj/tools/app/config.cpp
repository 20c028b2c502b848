#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "csvortex/error.hpp"
#include "json_io.hpp"

namespace csvortex::app {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw ConfigError("config field '" + path + "': " + msg);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& keys) {
  if (!obj.is_object()) field_error(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) field_error(path.empty() ? k : path + "." + k, "unknown key");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number()) field_error(path + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path, int dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) field_error(path + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, bool dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) field_error(path + key, "expected true or false");
  return v.get<bool>();
}

std::vector<Point> get_points(const json& obj, const std::string& key, const std::string& path) {
  std::vector<Point> pts;
  if (!obj.contains(key)) return pts;
  const json& v = obj.at(key);
  if (!v.is_array()) field_error(path + key, "expected an array of [x, y] pairs");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    const std::string at = path + key + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      field_error(at, "expected [x, y]");
    }
    const Point z(e[0].get<double>(), e[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) field_error(at, "not finite");
    pts.push_back(z);
  }
  return pts;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = {{"a", a}, {"b", b}};
  auto pts = [](const std::vector<Point>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Point& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
  };
  j["vortices"] = {{"p", pts(p)}, {"q", pts(q)}};
  j["grid"] = {{"radial_step", grid.radial_step},
               {"n_theta", grid.n_theta},
               {"r_out_y", grid.r_out_y},
               {"d", solver.weight.d}};
  j["solver"] = {{"picard_tol", solver.picard_tol},
                 {"max_picard", solver.max_picard},
                 {"alpha_tol", solver.alpha_tol},
                 {"max_alpha_iter", solver.max_alpha_iter},
                 {"alpha_fd_step", solver.alpha_fd_step},
                 {"residual_tol", solver.residual_tol},
                 {"ball_radius", solver.ball_radius},
                 {"exponent_guard", solver.exponent_guard},
                 {"nondegeneracy_min", solver.nondegeneracy_min},
                 {"check_nondegeneracy", solver.check_nondegeneracy},
                 {"newton_tol", solver.newton.tol},
                 {"newton_max_iter", solver.newton.max_iter}};
  j["eps"] = eps;
  j["out"] = out;
  j["strict"] = solver.strict;
  j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const {
  // The output prefix does not affect results.
  nlohmann::ordered_json j = to_json();
  j.erase("out");
  return fnv1a_hex(dump_json(j));
}

void RunConfig::validate() const {
  if (!is_admissible(a, b)) field_error("model", "(a, b) is not an admissible pair");
  if (eps.empty()) field_error("eps", "at least one value is required");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || eps[i] >= 1.0) field_error("eps", "values must lie in (0, 1)");
    if (i > 0 && !(eps[i] < eps[i - 1])) field_error("eps", "values must be strictly decreasing");
  }
  if (!(grid.radial_step > 0.0) || grid.radial_step > 0.2) {
    field_error("grid.radial_step", "must lie in (0, 0.2]");
  }
  if (grid.n_theta < 16) field_error("grid.n_theta", "must be at least 16");
  if (!(grid.r_out_y >= 10.0)) field_error("grid.r_out_y", "must be at least 10");
  if (!(solver.weight.d > 0.0 && solver.weight.d < 0.25)) field_error("grid.d", "must lie in (0, 1/4)");
  if (!(solver.picard_tol > 0.0)) field_error("solver.picard_tol", "must be positive");
  if (solver.max_picard < 1) field_error("solver.max_picard", "must be positive");
  if (!(solver.alpha_tol > 0.0)) field_error("solver.alpha_tol", "must be positive");
  if (solver.max_alpha_iter < 0) field_error("solver.max_alpha_iter", "must be non-negative");
  if (!(solver.alpha_fd_step > 0.0)) field_error("solver.alpha_fd_step", "must be positive");
  if (!(solver.residual_tol > 0.0)) field_error("solver.residual_tol", "must be positive");
  if (!(solver.ball_radius > 0.0)) field_error("solver.ball_radius", "must be positive");
  if (out.empty()) field_error("out", "must not be empty");
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": malformed JSON";
    throw ConfigError(os.str());
  }
  reject_unknown(j, "", {"model", "vortices", "grid", "solver", "eps", "out", "strict", "seed"});

  RunConfig c;
  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, "model", {"group", "orientation", "a", "b"});
    if (m.contains("group")) {
      if (!m.at("group").is_string()) field_error("model.group", "expected a string");
      if (m.contains("a") || m.contains("b")) field_error("model", "give either group or a, b");
      std::string tag = m.at("group").get<std::string>();
      if (m.contains("orientation")) {
        if (!m.at("orientation").is_string()) field_error("model.orientation", "expected a string");
        tag += ":" + m.at("orientation").get<std::string>();
      }
      try {
        std::tie(c.a, c.b) = cartan_pair(tag);
      } catch (const ConfigError& e) {
        field_error("model.group", e.what());
      }
    } else {
      c.a = get_int(m, "a", "model.", 1);
      c.b = get_int(m, "b", "model.", 1);
    }
  }
  if (j.contains("vortices")) {
    const json& v = j.at("vortices");
    reject_unknown(v, "vortices", {"p", "q"});
    c.p = get_points(v, "p", "vortices.");
    c.q = get_points(v, "q", "vortices.");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, "grid", {"radial_step", "n_theta", "r_out_y", "d"});
    c.grid.radial_step = get_number(g, "radial_step", "grid.", c.grid.radial_step);
    c.grid.n_theta = get_int(g, "n_theta", "grid.", c.grid.n_theta);
    c.grid.r_out_y = get_number(g, "r_out_y", "grid.", c.grid.r_out_y);
    c.solver.weight.d = get_number(g, "d", "grid.", c.solver.weight.d);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, "solver",
                   {"picard_tol", "max_picard", "alpha_tol", "max_alpha_iter", "alpha_fd_step",
                    "residual_tol", "ball_radius", "exponent_guard", "nondegeneracy_min",
                    "check_nondegeneracy", "newton_tol", "newton_max_iter"});
    SolverOptions& o = c.solver;
    o.picard_tol = get_number(s, "picard_tol", "solver.", o.picard_tol);
    o.max_picard = get_int(s, "max_picard", "solver.", o.max_picard);
    o.alpha_tol = get_number(s, "alpha_tol", "solver.", o.alpha_tol);
    o.max_alpha_iter = get_int(s, "max_alpha_iter", "solver.", o.max_alpha_iter);
    o.alpha_fd_step = get_number(s, "alpha_fd_step", "solver.", o.alpha_fd_step);
    o.residual_tol = get_number(s, "residual_tol", "solver.", o.residual_tol);
    o.ball_radius = get_number(s, "ball_radius", "solver.", o.ball_radius);
    o.exponent_guard = get_number(s, "exponent_guard", "solver.", o.exponent_guard);
    o.nondegeneracy_min = get_number(s, "nondegeneracy_min", "solver.", o.nondegeneracy_min);
    o.check_nondegeneracy = get_bool(s, "check_nondegeneracy", "solver.", o.check_nondegeneracy);
    o.newton.tol = get_number(s, "newton_tol", "solver.", o.newton.tol);
    o.newton.max_iter = get_int(s, "newton_max_iter", "solver.", o.newton.max_iter);
  }
  if (j.contains("eps")) {
    const json& e = j.at("eps");
    if (!e.is_array()) field_error("eps", "expected an array of numbers");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].is_number()) field_error("eps[" + std::to_string(i) + "]", "expected a number");
      c.eps.push_back(e[i].get<double>());
    }
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) field_error("out", "expected a string");
    c.out = j.at("out").get<std::string>();
  }
  c.solver.strict = get_bool(j, "strict", "", false);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--eps: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("--eps: cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--eps: empty list");
  return out;
}

}  // namespace csvortex::app
