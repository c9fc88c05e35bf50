#include "nskf/config.hpp"

#include <fstream>
#include <set>

namespace nskf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key: " + where + "." + key);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError("");
    }
    out = it->get<T>();
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + where + "." + key);
  }
}

}  // namespace

void SolverConfig::validate() const {
  nkf.validate();
  cp.validate();
  omp.validate();
  if (!(nkf.rank_tol > 0.0)) throw ConfigError("rank_tol must be > 0");
}

SolverConfig parse_config(const json& j) {
  SolverConfig c;
  reject_unknown(j, "config", {"nkf", "schedule", "cp", "omp", "rank_tol"});
  read(j, "rank_tol", c.nkf.rank_tol, "config");

  if (auto it = j.find("nkf"); it != j.end()) {
    const json& s = *it;
    reject_unknown(s, "nkf",
                   {"q_scale", "r_scalar", "max_iter", "stop_tol", "zero_mag_eps", "joseph_form"});
    read(s, "q_scale", c.nkf.q_scale, "nkf");
    read(s, "r_scalar", c.nkf.r_scalar, "nkf");
    read(s, "max_iter", c.nkf.max_iter, "nkf");
    read(s, "stop_tol", c.nkf.stop_tol, "nkf");
    read(s, "zero_mag_eps", c.nkf.zero_mag_eps, "nkf");
    read(s, "joseph_form", c.nkf.joseph_form, "nkf");
  }
  if (auto it = j.find("schedule"); it != j.end()) {
    const json& s = *it;
    auto& sc = c.nkf.schedule;
    reject_unknown(s, "schedule",
                   {"mode", "gamma", "omega", "r_tilde_init", "negate_eq_320", "stall_window",
                    "regrow", "steffensen_reach"});
    if (auto m = s.find("mode"); m != s.end()) {
      if (!m->is_string()) throw ConfigError("bad value for schedule.mode");
      try {
        sc.mode = schedule::mode_from_string(m->get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(std::string("schedule.mode: ") + e.what());
      }
    }
    read(s, "gamma", sc.gamma, "schedule");
    read(s, "omega", sc.omega, "schedule");
    read(s, "r_tilde_init", sc.r_tilde_init, "schedule");
    read(s, "negate_eq_320", sc.negate_eq_320, "schedule");
    read(s, "stall_window", sc.stall_window, "schedule");
    read(s, "regrow", sc.regrow, "schedule");
    read(s, "steffensen_reach", sc.steffensen_reach, "schedule");
  }
  if (auto it = j.find("cp"); it != j.end()) {
    const json& s = *it;
    reject_unknown(s, "cp",
                   {"tau", "sigma", "theta", "max_iter", "stop_tol", "power_iters", "power_tol"});
    read(s, "tau", c.cp.tau, "cp");
    read(s, "sigma", c.cp.sigma, "cp");
    read(s, "theta", c.cp.theta, "cp");
    read(s, "max_iter", c.cp.max_iter, "cp");
    read(s, "stop_tol", c.cp.stop_tol, "cp");
    read(s, "power_iters", c.cp.power_iters, "cp");
    read(s, "power_tol", c.cp.power_tol, "cp");
  }
  if (auto it = j.find("omp"); it != j.end()) {
    const json& s = *it;
    reject_unknown(s, "omp", {"max_atoms", "residual_tol"});
    read(s, "max_atoms", c.omp.max_atoms, "omp");
    read(s, "residual_tol", c.omp.residual_tol, "omp");
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const SolverConfig& c) {
  const auto& s = c.nkf.schedule;
  return {{"rank_tol", c.nkf.rank_tol},
          {"nkf",
           {{"q_scale", c.nkf.q_scale},
            {"r_scalar", c.nkf.r_scalar},
            {"max_iter", c.nkf.max_iter},
            {"stop_tol", c.nkf.stop_tol},
            {"zero_mag_eps", c.nkf.zero_mag_eps},
            {"joseph_form", c.nkf.joseph_form}}},
          {"schedule",
           {{"mode", schedule::to_string(s.mode)},
            {"gamma", s.gamma},
            {"omega", s.omega},
            {"r_tilde_init", s.r_tilde_init},
            {"negate_eq_320", s.negate_eq_320},
            {"stall_window", s.stall_window},
            {"regrow", s.regrow},
            {"steffensen_reach", s.steffensen_reach}}},
          {"cp",
           {{"tau", c.cp.tau},
            {"sigma", c.cp.sigma},
            {"theta", c.cp.theta},
            {"max_iter", c.cp.max_iter},
            {"stop_tol", c.cp.stop_tol},
            {"power_iters", c.cp.power_iters},
            {"power_tol", c.cp.power_tol}}},
          {"omp", {{"max_atoms", c.omp.max_atoms}, {"residual_tol", c.omp.residual_tol}}}};
}

}  // namespace nskf
