#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pswl/config.hpp"
#include "pswl/errors.hpp"
#include "pswl/log.hpp"
#include "pswl/report_io.hpp"
#include "pswl/simkernel.hpp"
#include "pswl/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNonConvergence = 3;
constexpr int kWornOut = 4;
constexpr int kIo = 5;

void lint(const pswl::ExperimentConfig& c) {
  for (const auto& w : c.latency.lint()) pswl::log::warn(w);
}

int cmd_validate(const std::string& path) {
  const auto cfg = pswl::load_config(path);
  lint(cfg);
  std::printf("ok: %s, %s over %u+%u disks, %llu data units\n",
              std::string(pswl::to_string(cfg.policy)).c_str(),
              std::string(pswl::to_string(cfg.scheme)).c_str(), cfg.k_o, cfg.k_s,
              static_cast<unsigned long long>(cfg.unit_count()));
  return kOk;
}

int cmd_run(const std::string& path, const std::string& out, std::optional<uint64_t> seed) {
  auto cfg = pswl::load_config(path);
  if (seed) cfg.seed = *seed;
  lint(cfg);
  const auto report = pswl::run(cfg);
  pswl::write_report(report, out);
  std::printf("stddev %.6g  art %.6g us  triggers %llu  total_io %llu  afp %.6g\n",
              report.final_stddev, report.avg_response_time,
              static_cast<unsigned long long>(report.wl_trigger_count),
              static_cast<unsigned long long>(report.total_io), report.final_afp);
  if (report.failed) {
    std::fprintf(stderr, "device worn out: %s\n", report.failure_reason.c_str());
    return kWornOut;
  }
  if (cfg.run_until == pswl::RunUntil::Converged && !report.converged) {
    std::fprintf(stderr, "did not converge before the workload ended\n");
    return kNonConvergence;
  }
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& out, unsigned jobs) {
  const auto matrix = pswl::load_matrix(path);
  const auto results = pswl::run_sweep(matrix, jobs, out);
  size_t bad = 0;
  for (const auto& r : results)
    if (r.status != "ok") {
      ++bad;
      std::fprintf(stderr, "cell %s: %s\n", r.cell.name.c_str(), r.status.c_str());
    }
  std::printf("%zu cells, %zu not ok; summary in %s/summary.csv\n", results.size(), bad, out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSD array wear-leveling simulator"};
  app.require_subcommand(1);

  std::string config, out, matrix;
  std::optional<uint64_t> seed;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config, "Experiment config (TOML or JSON)")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed", seed, "Override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment matrix");
  sweep->add_option("--matrix", matrix, "Matrix config")->required();
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Parallel cells")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", config, "Experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  try {
    if (*run) return cmd_run(config, out, seed);
    if (*sweep) return cmd_sweep(matrix, out, jobs);
    return cmd_validate(config);
  } catch (const pswl::ConfigError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kValidation;
  } catch (const pswl::FormatError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kValidation;
  } catch (const pswl::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const pswl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
}
