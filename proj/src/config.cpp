#include "pswl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pswl/errors.hpp"
#include "pswl/toml_lite.hpp"

namespace pswl {

using nlohmann::json;

std::string_view to_string(RunUntil r) { return r == RunUntil::Converged ? "converged" : "stream_end"; }
std::string_view to_string(WorkloadSource s) { return s == WorkloadSource::Trace ? "trace" : "synthetic"; }
std::string_view to_string(InitialWearMode m) {
  switch (m) {
    case InitialWearMode::None: return "none";
    case InitialWearMode::Probability: return "probability";
    case InitialWearMode::PerDisk: return "per_disk";
  }
  return "?";
}

namespace {

// Typed field reader over one table.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("'" + name_ + "' must be a table");
  }
  // Call after every get(); rejects keys nobody asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key '" + qualified(it.key()) + "'");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError("");
        out = it->template get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer() || (it->is_number_integer() && it->template get<int64_t>() < 0 &&
                                          std::is_unsigned_v<T>))
          throw ConfigError("");
        out = it->template get<T>();
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError("");
        out = it->template get<T>();
      } else if constexpr (std::is_same_v<T, std::vector<double>>) {
        if (!it->is_array()) throw ConfigError("");
        out.clear();
        for (const auto& e : *it) {
          if (!e.is_number()) throw ConfigError("");
          out.push_back(e.template get<double>());
        }
      } else {
        if (!it->is_string()) throw ConfigError("");
        out = it->template get<std::string>();
      }
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + qualified(key) + "'");
    } catch (const ConfigError&) {
      throw ConfigError("bad type for '" + qualified(key) + "'");
    }
  }

  template <class E, class Parse>
  void get_enum(const char* key, E& out, Parse parse) {
    std::string s;
    bool present = j_.contains(key);
    get(key, s);
    if (!present) return;
    try {
      out = parse(s);
    } catch (const Error& e) {
      throw ConfigError("'" + qualified(key) + "': " + e.what());
    }
  }

  template <class Fn>
  void sub(const char* key, Fn&& fn) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    Section s(*it, qualified(key));
    fn(s);
    s.finish();
  }

 private:
  std::string qualified(const std::string& k) const { return name_.empty() ? k : name_ + "." + k; }
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

RunUntil parse_run_until(const std::string& s) {
  if (s == "stream_end") return RunUntil::StreamEnd;
  if (s == "converged") return RunUntil::Converged;
  throw ConfigError("expected stream_end or converged");
}
WorkloadSource parse_source(const std::string& s) {
  if (s == "synthetic") return WorkloadSource::Synthetic;
  if (s == "trace") return WorkloadSource::Trace;
  throw ConfigError("expected synthetic or trace");
}
InitialWearMode parse_wear_mode(const std::string& s) {
  if (s == "none") return InitialWearMode::None;
  if (s == "probability") return InitialWearMode::Probability;
  if (s == "per_disk") return InitialWearMode::PerDisk;
  throw ConfigError("expected none, probability or per_disk");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  root.get("seed", c.seed);
  root.get_enum("run_until", c.run_until, parse_run_until);

  root.sub("array", [&](Section& s) {
    s.get("k_o", c.k_o);
    s.get("k_s", c.k_s);
    s.get_enum("raid_level", c.raid_level, [](const std::string& v) { return parse_raid_level(v); });
    s.get_enum("scheme", c.scheme, [](const std::string& v) { return parse_scaling_scheme(v); });
    s.get("data_fill", c.data_fill);
  });
  root.sub("geometry", [&](Section& s) {
    s.get("blocks_per_disk", c.geometry.blocks_per_disk);
    s.get("pages_per_block", c.geometry.pages_per_block);
    s.get("max_pe_cycles", c.geometry.max_pe_cycles);
    s.get("page_size", c.geometry.page_size);
    s.get("overprovision", c.flash.overprovision);
    s.get("gc_threshold", c.flash.gc_threshold);
  });
  root.sub("latency", [&](Section& s) {
    s.get("read_page", c.latency.read_page);
    s.get("program_page", c.latency.program_page);
    s.get("erase_block", c.latency.erase_block);
  });
  root.sub("policy", [&](Section& s) {
    s.get_enum("kind", c.policy, [](const std::string& v) { return parse_policy_kind(v); });
    s.get("swans_threshold", c.params.swans_threshold);
    s.get("lazy_k_ban", c.params.lazy_k_ban);
    s.get("edm_threshold", c.params.edm_threshold);
    s.get("edm_batch", c.params.edm_batch);
    s.get("warm_fallback", c.params.ps_warm_fallback);
    s.get("migrations_per_period", c.params.migrations_per_period);
  });
  root.sub("reliability", [&](Section& s) {
    s.get("mu", c.params.failure.mu);
    s.get("sigma", c.params.failure.sigma);
    s.get("k", c.params.lifetime.k);
    s.get("k_p", c.params.lifetime.k_p);
  });
  root.sub("controller", [&](Section& s) {
    auto& ct = c.params.controller;
    s.get("kp", ct.gains.kp);
    s.get("ki", ct.gains.ki);
    s.get("kd", ct.gains.kd);
    s.get("t0", ct.t0);
    s.get("lambda", ct.lambda);
    s.get("lambda_restart", ct.lambda_restart);
    s.get("alpha", ct.alpha);
    s.get("tuner_epoch", ct.tuner_epoch);
    s.get("u_max", ct.u_max);
    s.get("self_tuning", ct.self_tuning);
  });
  root.sub("hotness", [&](Section& s) {
    auto& h = c.params.hotness;
    s.get("window", h.window);
    s.get("theta_hot", h.theta_hot);
    s.get("theta_cold", h.theta_cold);
    s.get("k_ban_base", h.k_ban_base);
    s.get("k_ban_max", h.k_ban_max);
  });
  root.sub("workload", [&](Section& s) {
    auto& w = c.workload;
    s.get_enum("source", w.source, parse_source);
    s.get("trace_path", w.trace_path);
    s.get("op_count", w.op_count);
    s.get("write_fraction", w.write_fraction);
    s.get("skew", w.skew);
    s.get("inter_arrival_us", w.inter_arrival_us);
  });
  root.sub("initial_wear", [&](Section& s) {
    s.get_enum("mode", c.initial_wear.mode, parse_wear_mode);
    s.get("probability", c.initial_wear.probability);
    s.get("per_disk", c.initial_wear.per_disk);
  });
  root.finish();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["run_until"] = to_string(c.run_until);
  j["array"] = {{"k_o", c.k_o},
                {"k_s", c.k_s},
                {"raid_level", to_string(c.raid_level)},
                {"scheme", to_string(c.scheme)},
                {"data_fill", c.data_fill}};
  j["geometry"] = {{"blocks_per_disk", c.geometry.blocks_per_disk},
                   {"pages_per_block", c.geometry.pages_per_block},
                   {"max_pe_cycles", c.geometry.max_pe_cycles},
                   {"page_size", c.geometry.page_size},
                   {"overprovision", c.flash.overprovision},
                   {"gc_threshold", c.flash.gc_threshold}};
  j["latency"] = {{"read_page", c.latency.read_page},
                  {"program_page", c.latency.program_page},
                  {"erase_block", c.latency.erase_block}};
  const auto& p = c.params;
  j["policy"] = {{"kind", to_string(c.policy)},
                 {"swans_threshold", p.swans_threshold},
                 {"lazy_k_ban", p.lazy_k_ban},
                 {"edm_threshold", p.edm_threshold},
                 {"edm_batch", p.edm_batch},
                 {"warm_fallback", p.ps_warm_fallback},
                 {"migrations_per_period", p.migrations_per_period}};
  j["reliability"] = {{"mu", p.failure.mu},
                      {"sigma", p.failure.sigma},
                      {"k", p.lifetime.k},
                      {"k_p", p.lifetime.k_p}};
  const auto& ct = p.controller;
  j["controller"] = {{"kp", ct.gains.kp},       {"ki", ct.gains.ki},
                     {"kd", ct.gains.kd},       {"t0", ct.t0},
                     {"lambda", ct.lambda},     {"lambda_restart", ct.lambda_restart},
                     {"alpha", ct.alpha},       {"tuner_epoch", ct.tuner_epoch},
                     {"u_max", ct.u_max},       {"self_tuning", ct.self_tuning}};
  const auto& h = p.hotness;
  j["hotness"] = {{"window", h.window},
                  {"theta_hot", h.theta_hot},
                  {"theta_cold", h.theta_cold},
                  {"k_ban_base", h.k_ban_base},
                  {"k_ban_max", h.k_ban_max}};
  const auto& w = c.workload;
  j["workload"] = {{"source", to_string(w.source)},
                   {"trace_path", w.trace_path},
                   {"op_count", w.op_count},
                   {"write_fraction", w.write_fraction},
                   {"skew", w.skew},
                   {"inter_arrival_us", w.inter_arrival_us}};
  j["initial_wear"] = {{"mode", to_string(c.initial_wear.mode)},
                       {"probability", c.initial_wear.probability},
                       {"per_disk", c.initial_wear.per_disk}};
  return j;
}

uint64_t ExperimentConfig::unit_count() const {
  const uint64_t cap = static_cast<uint64_t>(
      std::floor(double(geometry.total_pages()) * (1.0 - flash.overprovision)));
  const auto rows = static_cast<uint64_t>(std::floor(double(cap) * data_fill));
  return rows * (k_o - parity_count(raid_level));
}

void ExperimentConfig::validate() const {
  geometry.validate();
  latency.validate();
  params.validate();
  if (k_o < 1) throw ConfigError("k_o must be >= 1");
  if (k_o <= parity_count(raid_level))
    throw ConfigError("k_o must exceed the parity count of " + std::string(to_string(raid_level)));
  const bool ok = scheme == ScalingScheme::RR ||
                  (scheme == ScalingScheme::FastScale && raid_level == RaidLevel::Raid0) ||
                  (scheme == ScalingScheme::GSR && raid_level == RaidLevel::Raid5) ||
                  (scheme == ScalingScheme::SDM && raid_level == RaidLevel::Raid6);
  if (!ok)
    throw ConfigError(std::string(to_string(scheme)) + " cannot scale a " +
                      std::string(to_string(raid_level)) + " array");
  if (!(flash.overprovision >= 0 && flash.overprovision < 1))
    throw ConfigError("overprovision must be in [0,1)");
  if (!(flash.gc_threshold >= 0 && flash.gc_threshold < 1))
    throw ConfigError("gc_threshold must be in [0,1)");
  if (!(data_fill > 0 && data_fill <= 1)) throw ConfigError("data_fill must be in (0,1]");
  if (unit_count() == 0) throw ConfigError("data_fill leaves no data units");
  if (workload.source == WorkloadSource::Trace && workload.trace_path.empty())
    throw ConfigError("workload.trace_path is required for trace workloads");
  if (workload.source == WorkloadSource::Synthetic) synthetic_spec().validate();
  switch (initial_wear.mode) {
    case InitialWearMode::None: break;
    case InitialWearMode::Probability:
      if (!(initial_wear.probability > 0 && initial_wear.probability < 1))
        throw ConfigError("initial_wear.probability must be in (0,1)");
      break;
    case InitialWearMode::PerDisk: {
      const auto n = initial_wear.per_disk.size();
      if (n != k_o && n != size_t(k_o) + k_s)
        throw ConfigError("initial_wear.per_disk needs k_o or k_o + k_s entries");
      for (double v : initial_wear.per_disk)
        if (!(v >= 0 && v <= geometry.max_pe_cycles))
          throw ConfigError("initial_wear.per_disk entries must be in [0, max_pe_cycles]");
      break;
    }
  }
}

ArraySetup ExperimentConfig::array_setup() const {
  ArraySetup s;
  s.geometry = geometry;
  s.flash = flash;
  s.latency = latency;
  s.k_o = k_o;
  s.k_s = k_s;
  return s;
}

SyntheticSpec ExperimentConfig::synthetic_spec() const {
  SyntheticSpec s;
  s.op_count = workload.op_count;
  s.write_fraction = workload.write_fraction;
  s.skew = workload.skew;
  s.address_space = unit_count();
  s.seed = seed;
  s.inter_arrival_us = workload.inter_arrival_us;
  return s;
}

json load_config_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError("invalid JSON config: " + std::string(e.what()));
    }
    if (j.contains("config") && j["config"].is_object()) return j["config"];
    return j;
  }
  return parse_toml(text);
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c = config_from_json(load_config_document(path));
  c.validate();
  return c;
}

}  // namespace pswl
