#include "pswl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "pswl/errors.hpp"
#include "pswl/log.hpp"
#include "pswl/report_io.hpp"

namespace pswl {

using nlohmann::json;

namespace {

RaidLevel implied_level(ScalingScheme s, RaidLevel base) {
  switch (s) {
    case ScalingScheme::FastScale: return RaidLevel::Raid0;
    case ScalingScheme::GSR: return RaidLevel::Raid5;
    case ScalingScheme::SDM: return RaidLevel::Raid6;
    case ScalingScheme::RR: return base;
  }
  return base;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <class T>
std::vector<T> axis(const json& sw, const char* key, std::vector<T> fallback) {
  if (!sw.contains(key)) return fallback;
  const json& a = sw.at(key);
  if (!a.is_array() || a.empty()) throw ConfigError(std::string("sweep.") + key + " must be a non-empty array");
  std::vector<T> out;
  try {
    for (const auto& v : a) out.push_back(v.get<T>());
  } catch (const json::exception&) {
    throw ConfigError(std::string("sweep.") + key + " has a value of the wrong type");
  }
  return out;
}

}  // namespace

SweepMatrix parse_matrix(const json& doc) {
  if (!doc.is_object() || !doc.contains("sweep")) throw ConfigError("matrix needs a [sweep] table");
  const json& sw = doc.at("sweep");
  if (!sw.is_object()) throw ConfigError("sweep must be a table");
  static const char* known[] = {"policies", "schemes", "scales", "skews", "seeds"};
  for (auto it = sw.begin(); it != sw.end(); ++it)
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
        std::end(known))
      throw ConfigError("unknown key 'sweep." + it.key() + "'");

  json base_doc = doc;
  base_doc.erase("sweep");
  SweepMatrix m;
  m.base = config_from_json(base_doc);

  const auto policies = axis<std::string>(sw, "policies", {std::string(to_string(m.base.policy))});
  const auto schemes = axis<std::string>(sw, "schemes", {std::string(to_string(m.base.scheme))});
  const auto scales = axis<std::vector<uint32_t>>(sw, "scales", {{m.base.k_o, m.base.k_s}});
  const auto skews = axis<double>(sw, "skews", {m.base.workload.skew});
  const auto seeds = axis<uint64_t>(sw, "seeds", {m.base.seed});
  for (const auto& sc : scales)
    if (sc.size() != 2) throw ConfigError("sweep.scales entries must be [k_o, k_s]");

  for (const auto& pol : policies)
    for (const auto& sch : schemes)
      for (const auto& sc : scales)
        for (double skew : skews)
          for (uint64_t seed : seeds) {
            SweepCell cell;
            ExperimentConfig& c = cell.config;
            c = m.base;
            c.policy = parse_policy_kind(pol);
            c.scheme = parse_scaling_scheme(sch);
            c.raid_level = implied_level(c.scheme, m.base.raid_level);
            c.k_o = sc[0];
            c.k_s = sc[1];
            c.workload.skew = skew;
            c.seed = seed;
            cell.name = pol + "_" + sch + "_" + std::to_string(sc[0]) + "+" + std::to_string(sc[1]);
            if (skews.size() > 1) cell.name += "_skew" + fmt(skew);
            if (seeds.size() > 1) cell.name += "_seed" + std::to_string(seed);
            c.validate();
            m.cells.push_back(std::move(cell));
          }
  return m;
}

SweepMatrix load_matrix(const std::string& path) { return parse_matrix(load_config_document(path)); }

std::vector<CellResult> run_sweep(const SweepMatrix& m, unsigned jobs, const std::string& out_dir) {
  std::vector<CellResult> results(m.cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= m.cells.size()) return;
      CellResult& res = results[i];
      res.cell = m.cells[i];
      try {
        res.report = run(res.cell.config);
        if (res.report.failed)
          res.status = "worn_out";
        else if (res.cell.config.run_until == RunUntil::Converged && !res.report.converged)
          res.status = "non_converged";
        else
          res.status = "ok";
        if (!out_dir.empty()) {
          const std::string dir = out_dir + "/" + res.cell.name;
          write_report(res.report, dir);
          write_text_file(dir + "/config.json", config_to_json(res.cell.config).dump(2) + "\n");
        }
      } catch (const std::exception& e) {
        res.status = std::string("error: ") + e.what();
        log::error("cell " + res.cell.name + ": " + e.what());
      }
      log::info("cell " + res.cell.name + " " + res.status);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(m.cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!out_dir.empty()) write_text_file(out_dir + "/summary.csv", summary_csv(results));
  return results;
}

std::string summary_csv(const std::vector<CellResult>& results) {
  std::string out =
      "cell,policy,scheme,raid_level,k_o,k_s,skew,seed,status,final_stddev,art,triggers,total_io,"
      "afp,converged,total_io_at_convergence,afp_at_convergence\n";
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : results) {
    const auto& c = r.cell.config;
    const auto& rep = r.report;
    std::string status = r.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    out += r.cell.name + ',' + std::string(to_string(c.policy)) + ',' + std::string(to_string(c.scheme)) +
           ',' + std::string(to_string(c.raid_level)) + ',' + std::to_string(c.k_o) + ',' +
           std::to_string(c.k_s) + ',' + num(c.workload.skew) + ',' + std::to_string(c.seed) + ',' +
           status + ',' + num(rep.final_stddev) + ',' + num(rep.avg_response_time) + ',' +
           std::to_string(rep.wl_trigger_count) + ',' + std::to_string(rep.total_io) + ',' +
           num(rep.final_afp) + ',' + (rep.converged ? "1" : "0") + ',' +
           std::to_string(rep.total_io_at_convergence) + ',' + num(rep.afp_at_convergence) + '\n';
  }
  return out;
}

}  // namespace pswl
