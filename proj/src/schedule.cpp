#include "nskf/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nskf/types.hpp"

namespace nskf::schedule {

std::string to_string(Mode mode) {
  return mode == Mode::Geometric ? "geometric" : "aitken-steffensen";
}

Mode mode_from_string(const std::string& s) {
  if (s == "geometric") return Mode::Geometric;
  if (s == "aitken-steffensen") return Mode::AitkenSteffensen;
  throw ConfigError("unknown schedule mode '" + s + "'");
}

void ScheduleConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("schedule.gamma must lie in (0, 1)");
  if (!(r_tilde_init >= 0.0 && r_tilde_init < 1.0)) {
    throw ConfigError("schedule.r_tilde_init must lie in [0, 1)");
  }
  if (!std::isfinite(omega)) throw ConfigError("schedule.omega must be finite");
  if (stall_window < 1) throw ConfigError("schedule.stall_window must be >= 1");
  if (!(regrow >= 1.0)) throw ConfigError("schedule.regrow must be >= 1");
  if (!(steffensen_reach >= 0.0)) throw ConfigError("schedule.steffensen_reach must be >= 0");
}

ScheduleState::ScheduleState(const ScheduleConfig& cfg) : config(cfg), r_tilde(cfg.r_tilde_init) {}

double geometric_target(double l_emp, double gamma) { return gamma * l_emp; }

double steffensen_extrapolate(double y_k, double y_km1, double y_km2) {
  const double den = y_k - 2.0 * y_km1 + y_km2;
  const double scale = std::max({std::abs(y_k), std::abs(y_km1), std::abs(y_km2), 1.0});
  if (!(std::abs(den) > 1e-14 * scale)) return y_k;
  return (y_k * y_km2 - y_km1 * y_km1) / den;
}

namespace {

// Level control on r~: halve it after a run of iterations without a new best
// l1, let it recover towards its initial value while progress continues.
void adapt_r_tilde(ScheduleState& s, double l_cur) {
  const auto& cfg = s.config;
  if (s.k == 1 || l_cur < s.best_l1) {
    if (s.k > 1) s.r_tilde = std::min(s.r_tilde * cfg.regrow, cfg.r_tilde_init);
    s.best_l1 = l_cur;
    s.stall = 0;
    return;
  }
  if (++s.stall >= cfg.stall_window) {
    const double r_hat = 0.5;
    s.r_tilde *= (1.0 - r_hat);
    s.stall = 0;
  }
}

void push_target(ScheduleState& s, double y) {
  s.y_hist[2] = s.y_hist[1];
  s.y_hist[1] = s.y_hist[0];
  s.y_hist[0] = y;
  s.y_count = std::min(s.y_count + 1, 3);
}

}  // namespace

std::pair<double, ScheduleState> next_target(ScheduleState s, double l_cur, double l_prev) {
  s.k += 1;
  s.norm_hist = {l_cur, l_prev};

  if (s.config.mode == Mode::Geometric) {
    const double y = geometric_target(l_cur, s.config.gamma);
    push_target(s, y);
    return {y, s};
  }

  adapt_r_tilde(s, l_cur);
  const double gamma_k = 1.0 - s.r_tilde;

  double y = 0.0;
  if (s.k == 1) {
    y = geometric_target(l_cur, gamma_k);
  } else if (s.k == 2) {
    // Relaxed extrapolation of the norm trend; r^ taken as 1 - r~.
    const double relaxed = l_cur + s.config.omega * (l_cur - l_prev);
    y = (s.config.negate_eq_320 ? -1.0 : 1.0) * gamma_k * relaxed;
  } else {
    const double raw = geometric_target(l_cur, gamma_k);
    const double prev = s.y_hist[0];
    const double extrapolated = steffensen_extrapolate(raw, prev, s.y_hist[1]);
    const double floor = raw - s.config.steffensen_reach * std::max(prev - raw, 0.0);
    y = std::isfinite(extrapolated) ? std::clamp(extrapolated, std::min(floor, raw), raw) : raw;
  }
  push_target(s, y);
  return {y, s};
}

}  // namespace nskf::schedule
