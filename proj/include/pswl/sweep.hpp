#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pswl/config.hpp"
#include "pswl/simkernel.hpp"

namespace pswl {

struct SweepCell {
  std::string name;  // also the cell's output sub-directory
  ExperimentConfig config;
};

// A base configuration plus a [sweep] table listing value sets per axis:
// policies, schemes, scales ([k_o, k_s] pairs), skews, seeds. A scheme other
// than rr fixes the RAID level it supports.
struct SweepMatrix {
  ExperimentConfig base;
  std::vector<SweepCell> cells;
};

SweepMatrix parse_matrix(const nlohmann::json& doc);
SweepMatrix load_matrix(const std::string& path);

struct CellResult {
  SweepCell cell;
  std::string status;  // "ok", "worn_out", "non_converged" or "error: ..."
  ExperimentReport report;
};

// Runs every cell on up to `jobs` threads. When out_dir is non-empty each
// cell writes config.json, report.json and series.csv under out_dir/<name>/
// and summary.csv is written to out_dir.
std::vector<CellResult> run_sweep(const SweepMatrix& m, unsigned jobs, const std::string& out_dir);

std::string summary_csv(const std::vector<CellResult>& results);

}  // namespace pswl
