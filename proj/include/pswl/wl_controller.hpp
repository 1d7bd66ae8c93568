#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace pswl {

struct PidGains {
  double kp = 0.5;
  double ki = 0.01;
  double kd = 0.1;

  double& operator[](std::size_t i) { return i == 0 ? kp : (i == 1 ? ki : kd); }
  double operator[](std::size_t i) const { return i == 0 ? kp : (i == 1 ? ki : kd); }
};

struct PidState {
  PidGains gains;
  double integral = 0.0;
  double prev_error = 0.0;  // error one sampling period ago (0 before the first step)
  uint64_t t0 = 4096;       // sampling period in events
  double u_max = 1.0;       // anti-windup bound: |integral| <= u_max / ki

  void reset() {
    integral = 0.0;
    prev_error = 0.0;
  }
};

struct TunerState {
  double alpha = 0.05;
  double prev_loss = 0.0;
  bool has_prev = false;
  uint32_t coord_cursor = 0;  // 0 = kp, 1 = ki, 2 = kd
};

enum class ControllerPhase : uint8_t { Idle, Chasing, Converged };
std::string_view to_string(ControllerPhase p);

// mean(originals) - mean(extendeds). Throws EmptyGroup for an empty group.
double lifetime_error(std::span<const double> originals, std::span<const double> extendeds);

// u = Kp*e + Ki*sum(e) + Kd*|e - e_prev|; updates the state.
double pid_step(PidState& s, double e_now);

// Sign-based coordinate step on one gain; first call only records the loss.
void tune_gains(TunerState& t, PidState& s, double loss_now);

// |Lo - Ls| / Lo < lambda. Throws DomainError when Lo <= 0.
bool should_exit(double lo_mean, double ls_mean, double lambda);

inline bool approve_migration(double disk_hotness_scalar, double u) {
  return disk_hotness_scalar < u;
}

struct ControllerParams {
  PidGains gains;
  uint64_t t0 = 4096;
  double lambda = 0.02;
  double lambda_restart = 0.04;
  double alpha = 0.05;
  uint32_t tuner_epoch = 16;
  double u_max = 1.0;
  bool self_tuning = true;
  void validate() const;
};

// Phase machine around the PID loop and its self-tuner. Fed once per
// sampling period with the relative lifetime gap |Lo - Ls| / Lo.
class WlController {
 public:
  explicit WlController(const ControllerParams& p);

  // Returns the hotness baseline u for the coming period (0 unless chasing).
  // wl_io / total_io are cumulative counters used for the tuner loss.
  double on_sample(double rel_gap, bool scaling_done, uint64_t wl_io, uint64_t total_io);

  ControllerPhase phase() const { return phase_; }
  double baseline() const { return u_; }
  const PidState& pid() const { return pid_; }
  const TunerState& tuner() const { return tuner_; }
  uint32_t chase_entries() const { return chase_entries_; }
  uint32_t convergences() const { return convergences_; }

 private:
  void enter_chasing(uint64_t wl_io, uint64_t total_io);

  ControllerParams params_;
  PidState pid_;
  TunerState tuner_;
  ControllerPhase phase_ = ControllerPhase::Idle;
  double u_ = 0.0;
  uint32_t samples_in_epoch_ = 0;
  uint64_t epoch_wl_io_ = 0;
  uint64_t epoch_total_io_ = 0;
  uint32_t chase_entries_ = 0;
  uint32_t convergences_ = 0;
};

}  // namespace pswl
