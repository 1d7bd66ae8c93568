#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pswl/array_state.hpp"
#include "pswl/config.hpp"
#include "pswl/workload.hpp"

namespace pswl {

struct SamplePoint {
  uint64_t event_index = 0;
  double stddev = 0.0;  // P/E std-dev across disks
  double art = 0.0;     // average response time so far, us
  uint64_t triggers = 0;
  uint64_t total_io = 0;
  double afp = 0.0;
  double e = 0.0;
  double rel_gap = 0.0;
  double u = 0.0;
  PidGains gains{0.0, 0.0, 0.0};
  ControllerPhase phase = ControllerPhase::Idle;
};

struct ExperimentReport {
  nlohmann::json config;
  uint64_t seed = 0;

  std::vector<SamplePoint> series;
  double initial_stddev = 0.0;
  double final_stddev = 0.0;
  double avg_response_time = 0.0;
  uint64_t wl_trigger_count = 0;
  uint64_t total_io = 0;
  double final_afp = 0.0;
  double final_rel_gap = 0.0;
  std::vector<double> final_pe;
  IoCounters io;
  uint64_t events = 0;
  uint64_t scaling_moves = 0;
  uint64_t scaling_parity_updates = 0;

  bool converged = false;  // reached balance at some sample
  uint64_t converged_at_event = 0;
  uint64_t total_io_at_convergence = 0;
  double afp_at_convergence = 0.0;
  double rel_gap_at_convergence = 0.0;
  uint32_t chase_entries = 0;

  bool failed = false;  // a device wore out; the report is partial
  std::string failure_reason;
};

// Simulates one configuration over the given access stream.
ExperimentReport run(const ExperimentConfig& cfg, std::span<const Access> accesses);
// Builds the workload from the configuration (synthetic or trace) and runs it.
ExperimentReport run(const ExperimentConfig& cfg);

struct ConvergenceResult {
  bool converged = false;
  uint64_t total_io = 0;
  double afp = 0.0;
};
// Runs with run_until = converged and reports I/O and array failure
// probability at the first balanced sample.
ConvergenceResult total_io_until_converged(const ExperimentConfig& cfg);

std::vector<Access> build_workload(const ExperimentConfig& cfg);

}  // namespace pswl
