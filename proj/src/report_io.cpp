#include "pswl/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pswl/errors.hpp"

namespace pswl {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json report_to_json(const ExperimentReport& r) {
  json j;
  j["config"] = r.config;
  j["seed"] = r.seed;
  j["final"] = {{"lifetime_stddev", r.final_stddev},
                {"initial_lifetime_stddev", r.initial_stddev},
                {"avg_response_time_us", r.avg_response_time},
                {"wl_trigger_count", r.wl_trigger_count},
                {"total_io", r.total_io},
                {"array_failure_prob", r.final_afp},
                {"relative_gap", r.final_rel_gap},
                {"pe_counts", r.final_pe},
                {"events", r.events}};
  j["io"] = {{"host_reads", r.io.host_reads},
             {"host_writes", r.io.host_writes},
             {"parity_writes", r.io.parity_writes},
             {"scaling_migration_ios", r.io.scaling_migration_ios},
             {"wl_migration_ios", r.io.wl_migration_ios},
             {"gc_relocation_ios", r.io.gc_relocation_ios}};
  j["scaling"] = {{"moves", r.scaling_moves}, {"parity_updates", r.scaling_parity_updates}};
  j["convergence"] = {{"converged", r.converged},
                      {"event", r.converged_at_event},
                      {"total_io", r.total_io_at_convergence},
                      {"array_failure_prob", r.afp_at_convergence},
                      {"relative_gap", r.rel_gap_at_convergence},
                      {"chase_entries", r.chase_entries}};
  j["failed"] = r.failed;
  if (r.failed) j["failure_reason"] = r.failure_reason;
  json series = json::array();
  for (const auto& p : r.series)
    series.push_back({{"event_index", p.event_index},
                      {"stddev", p.stddev},
                      {"art", p.art},
                      {"triggers", p.triggers},
                      {"total_io", p.total_io},
                      {"afp", p.afp},
                      {"e", p.e},
                      {"rel_gap", p.rel_gap},
                      {"u", p.u},
                      {"kp", p.gains.kp},
                      {"ki", p.gains.ki},
                      {"kd", p.gains.kd},
                      {"phase", to_string(p.phase)}});
  j["series"] = std::move(series);
  return j;
}

std::string series_csv(const ExperimentReport& r) {
  std::string out = "event_index,stddev,art,triggers,total_io,afp,e,u,kp,ki,kd,phase\n";
  for (const auto& p : r.series) {
    out += std::to_string(p.event_index) + ',' + num(p.stddev) + ',' + num(p.art) + ',' +
           std::to_string(p.triggers) + ',' + std::to_string(p.total_io) + ',' + num(p.afp) + ',' +
           num(p.e) + ',' + num(p.u) + ',' + num(p.gains.kp) + ',' + num(p.gains.ki) + ',' +
           num(p.gains.kd) + ',' + std::string(to_string(p.phase)) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_report(const ExperimentReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  write_text_file(dir + "/report.json", report_to_json(r).dump(2) + "\n");
  write_text_file(dir + "/series.csv", series_csv(r));
}

}  // namespace pswl
