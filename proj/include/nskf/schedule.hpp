#pragma once

#include <array>
#include <string>
#include <utility>

namespace nskf::schedule {

enum class Mode { Geometric, AitkenSteffensen };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// Parameters of the synthetic l1 target sequence.
struct ScheduleConfig {
  Mode mode = Mode::AitkenSteffensen;
  /// Constant shrink factor in geometric mode, 0 < gamma < 1.
  double gamma = 0.99;
  /// Relaxation weight on the last norm decrement at the second step.
  double omega = 0.5;
  /// Initial relative gap r~; the first target is (1 - r~) * l1.
  double r_tilde_init = 0.1;
  /// Apply the leading minus sign of the relaxed second-step target.
  bool negate_eq_320 = false;
  /// Consecutive iterations without a new best l1 before r~ is halved.
  int stall_window = 5;
  /// Growth of r~ on each new best l1, capped at r_tilde_init.
  double regrow = 1.5;
  /// How far past the plain target the Steffensen value may reach, in units
  /// of the last target decrement.
  double steffensen_reach = 1.0;

  void validate() const;
};

/// Mutable history of one target sequence. Owned by a single solver run.
struct ScheduleState {
  ScheduleConfig config;
  int k = 0;  // targets issued so far
  std::array<double, 3> y_hist{};     // y(k), y(k-1), y(k-2)
  int y_count = 0;
  std::array<double, 2> norm_hist{};  // l1(k), l1(k-1)
  double r_tilde = 0.0;
  double best_l1 = 0.0;
  int stall = 0;

  explicit ScheduleState(const ScheduleConfig& cfg = {});
};

/// gamma * l_emp.
double geometric_target(double l_emp, double gamma);

/// Steffensen / Aitken delta-squared limit of three successive values,
/// (y_k y_km2 - y_km1^2) / (y_k - 2 y_km1 + y_km2). Returns y_k when the
/// denominator is negligible.
double steffensen_extrapolate(double y_k, double y_km1, double y_km2);

/// Advances the schedule by one iteration and returns the next target.
std::pair<double, ScheduleState> next_target(ScheduleState sched, double l_emp_current,
                                             double l_emp_previous);

}  // namespace nskf::schedule
