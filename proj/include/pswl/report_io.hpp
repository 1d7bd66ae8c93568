#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pswl/simkernel.hpp"

namespace pswl {

nlohmann::json report_to_json(const ExperimentReport& r);
// Header: event_index,stddev,art,triggers,total_io,afp,e,u,kp,ki,kd,phase
std::string series_csv(const ExperimentReport& r);

// Writes report.json and series.csv into dir (created if missing). Throws IoError.
void write_report(const ExperimentReport& r, const std::string& dir);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pswl
