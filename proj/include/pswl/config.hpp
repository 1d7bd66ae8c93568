#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pswl/array_state.hpp"
#include "pswl/policies.hpp"
#include "pswl/scaling.hpp"
#include "pswl/workload.hpp"

namespace pswl {

enum class RunUntil : uint8_t { StreamEnd, Converged };
enum class WorkloadSource : uint8_t { Synthetic, Trace };
enum class InitialWearMode : uint8_t { None, Probability, PerDisk };

struct WorkloadConfig {
  WorkloadSource source = WorkloadSource::Synthetic;
  std::string trace_path;
  uint64_t op_count = 100000;
  double write_fraction = 0.9;
  double skew = 1.0;
  double inter_arrival_us = 10.0;
};

struct InitialWearConfig {
  InitialWearMode mode = InitialWearMode::None;
  double probability = 1e-4;      // target failure probability of each original disk
  std::vector<double> per_disk;   // k_o entries (extended disks start fresh) or k_o + k_s
};

struct ExperimentConfig {
  uint64_t seed = 1;
  RunUntil run_until = RunUntil::StreamEnd;

  uint32_t k_o = 3;
  uint32_t k_s = 1;
  RaidLevel raid_level = RaidLevel::Raid0;
  ScalingScheme scheme = ScalingScheme::RR;
  double data_fill = 0.75;  // fraction of each original disk's logical space holding data

  DeviceGeometry geometry;
  FlashOptions flash;
  LatencyModel latency;
  PolicyKind policy = PolicyKind::PsWl;
  PolicyParams params;
  WorkloadConfig workload;
  InitialWearConfig initial_wear;

  // Throws ConfigError on any invalid or incompatible setting.
  void validate() const;
  // Data units stored in the array.
  uint64_t unit_count() const;
  ArraySetup array_setup() const;
  SyntheticSpec synthetic_spec() const;
};

// Strict conversion: unknown keys and wrong types are ConfigErrors.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

// Reads a TOML-style file (or a JSON file / report.json holding "config").
nlohmann::json load_config_document(const std::string& path);
ExperimentConfig load_config(const std::string& path);

std::string_view to_string(RunUntil r);
std::string_view to_string(WorkloadSource s);
std::string_view to_string(InitialWearMode m);

}  // namespace pswl
