#include "pswl/wl_controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pswl/errors.hpp"

namespace pswl {

std::string_view to_string(ControllerPhase p) {
  switch (p) {
    case ControllerPhase::Idle: return "idle";
    case ControllerPhase::Chasing: return "chasing";
    case ControllerPhase::Converged: return "converged";
  }
  return "?";
}

double lifetime_error(std::span<const double> originals, std::span<const double> extendeds) {
  if (originals.empty() || extendeds.empty()) throw EmptyGroup("lifetime_error: empty disk group");
  const double lo = std::accumulate(originals.begin(), originals.end(), 0.0) / double(originals.size());
  const double ls = std::accumulate(extendeds.begin(), extendeds.end(), 0.0) / double(extendeds.size());
  return lo - ls;
}

double pid_step(PidState& s, double e_now) {
  s.integral += e_now;
  if (s.gains.ki > 0.0) {
    const double bound = s.u_max / s.gains.ki;
    s.integral = std::clamp(s.integral, -bound, bound);
  }
  // The derivative term uses the absolute change, as in the control law.
  const double u = s.gains.kp * e_now + s.gains.ki * s.integral +
                   s.gains.kd * std::fabs(e_now - s.prev_error);
  s.prev_error = e_now;
  return u;
}

void tune_gains(TunerState& t, PidState& s, double loss_now) {
  if (!t.has_prev) {
    t.prev_loss = loss_now;
    t.has_prev = true;
    return;
  }
  const double d = t.prev_loss - loss_now;
  const double sign = (d > 0.0) - (d < 0.0);
  double& g = s.gains[t.coord_cursor];
  g = std::max(0.0, g - t.alpha * sign);
  t.coord_cursor = (t.coord_cursor + 1) % 3;
  t.prev_loss = loss_now;
}

bool should_exit(double lo_mean, double ls_mean, double lambda) {
  if (!(lo_mean > 0.0)) throw DomainError("should_exit needs a positive original-group lifetime");
  return std::fabs(lo_mean - ls_mean) / lo_mean < lambda;
}

void ControllerParams::validate() const {
  if (t0 < 1) throw ConfigError("controller.t0 must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("controller.lambda must be > 0");
  if (!(lambda_restart > lambda)) throw ConfigError("controller.lambda_restart must exceed lambda");
  if (!(alpha > 0.0)) throw ConfigError("controller.alpha must be > 0");
  if (tuner_epoch < 1) throw ConfigError("controller.tuner_epoch must be >= 1");
  if (gains.kp < 0 || gains.ki < 0 || gains.kd < 0) throw ConfigError("controller gains must be >= 0");
  if (!(u_max > 0.0)) throw ConfigError("controller.u_max must be > 0");
}

WlController::WlController(const ControllerParams& p) : params_(p) {
  pid_.gains = p.gains;
  pid_.t0 = p.t0;
  pid_.u_max = p.u_max;
  tuner_.alpha = p.alpha;
}

void WlController::enter_chasing(uint64_t wl_io, uint64_t total_io) {
  phase_ = ControllerPhase::Chasing;
  pid_.reset();
  samples_in_epoch_ = 0;
  epoch_wl_io_ = wl_io;
  epoch_total_io_ = total_io;
  ++chase_entries_;
}

double WlController::on_sample(double rel_gap, bool scaling_done, uint64_t wl_io,
                               uint64_t total_io) {
  switch (phase_) {
    case ControllerPhase::Idle:
      if (scaling_done && rel_gap >= params_.lambda_restart) enter_chasing(wl_io, total_io);
      break;
    case ControllerPhase::Chasing:
      if (rel_gap < params_.lambda) {
        phase_ = ControllerPhase::Converged;
        ++convergences_;
      }
      break;
    case ControllerPhase::Converged:
      if (rel_gap > params_.lambda_restart) enter_chasing(wl_io, total_io);
      break;
  }

  if (phase_ != ControllerPhase::Chasing) {
    u_ = 0.0;
    return u_;
  }

  u_ = pid_step(pid_, rel_gap);

  if (params_.self_tuning && ++samples_in_epoch_ >= params_.tuner_epoch) {
    const uint64_t dt = total_io - epoch_total_io_;
    if (dt > 0) tune_gains(tuner_, pid_, double(wl_io - epoch_wl_io_) / double(dt));
    samples_in_epoch_ = 0;
    epoch_wl_io_ = wl_io;
    epoch_total_io_ = total_io;
  }
  return u_;
}

}  // namespace pswl
