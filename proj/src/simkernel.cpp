#include "pswl/simkernel.hpp"

#include "pswl/errors.hpp"
#include "pswl/flash_model.hpp"
#include "pswl/log.hpp"
#include "pswl/reliability.hpp"

namespace pswl {

namespace {

class Simulation {
 public:
  Simulation(const ExperimentConfig& cfg)
      : cfg_(cfg),
        old_(make_layout(cfg.raid_level, cfg.k_o, cfg.unit_count())),
        array_(cfg.array_setup(), old_),
        window_(cfg.params.hotness.window),
        policy_(make_policy(cfg.policy, cfg.params)) {
    report_.config = config_to_json(cfg);
    report_.seed = cfg.seed;
  }

  ExperimentReport run(std::span<const Access> accesses) {
    try {
      prepare();
      report_.initial_stddev = erase_count_stddev(array_.devices());
      sample(0, 0.0);
      if (!stop_) {
        for (const Access& acc : accesses) {
          step(acc);
          if (events_ % cfg_.params.controller.t0 == 0) sample(events_, acc.arrival_us);
          if (stop_) break;
        }
      }
    } catch (const DeviceWornOut& e) {
      report_.failed = true;
      report_.failure_reason = e.what();
      log::warn(std::string("run stopped: ") + e.what());
    }
    finish();
    return std::move(report_);
  }

 private:
  void prepare() {
    const auto& iw = cfg_.initial_wear;
    if (iw.mode == InitialWearMode::Probability) {
      const double t = initial_wear_for_probability(iw.probability, cfg_.params.failure);
      for (uint32_t d = 0; d < cfg_.k_o; ++d) array_.set_initial_wear(d, t);
    } else if (iw.mode == InitialWearMode::PerDisk) {
      for (uint32_t d = 0; d < iw.per_disk.size(); ++d) array_.set_initial_wear(d, iw.per_disk[d]);
    }
    const ScalingResult sr = plan_scaling(cfg_.scheme, old_, cfg_.k_s);
    report_.scaling_moves = sr.plan.moves.size();
    report_.scaling_parity_updates = sr.plan.parity_updates;
    array_.apply_scaling(sr.target, sr.plan, 0.0);
  }

  void step(const Access& acc) {
    const auto page = static_cast<PageId>(acc.page);
    if (acc.page >= array_.unit_count()) throw CapacityExceeded("access beyond the array's data units");
    window_.record_access(page);
    double r;
    if (acc.op == OpCode::Write) {
      r = array_.host_write(page, acc.arrival_us);
      execute(policy_->on_host_write(array_, page), acc.arrival_us);
    } else {
      r = array_.host_read(page, acc.arrival_us);
    }
    summed_response_ += r;
    ++requests_;
    ++events_;
  }

  void execute(const PolicyDecision& d, double now) {
    if (!d.is_migrate()) return;
    if (!array_.migrate(d.page, d.dst, now)) return;
    if (d.trigger_counted) ++triggers_;
    policy_->on_migrated(d);
  }

  SamplePoint point(uint64_t event) const {
    SamplePoint p;
    p.event_index = event;
    const auto pe = array_.pe_counts();
    p.stddev = erase_count_stddev(pe);
    p.art = requests_ ? summed_response_ / double(requests_) : 0.0;
    p.triggers = triggers_;
    p.total_io = array_.counters().total();
    std::vector<double> probs;
    probs.reserve(pe.size());
    for (double t : pe) probs.push_back(failure_probability_or_zero(t, cfg_.params.failure));
    p.afp = array_failure_probability(probs);
    const auto tel = policy_->telemetry();
    p.e = tel.e;
    p.rel_gap = tel.rel_gap;
    p.u = tel.u;
    p.gains = tel.gains;
    p.phase = tel.phase;
    return p;
  }

  void sample(uint64_t event, double now) {
    for (const auto& d : policy_->on_sample(array_, window_)) execute(d, now);
    const SamplePoint p = point(event);
    if (p.phase == ControllerPhase::Chasing && last_phase_ != ControllerPhase::Chasing)
      ++report_.chase_entries;
    last_phase_ = p.phase;
    report_.series.push_back(p);
    if (!report_.converged && policy_->converged()) {
      report_.converged = true;
      report_.converged_at_event = event;
      report_.total_io_at_convergence = p.total_io;
      report_.afp_at_convergence = p.afp;
      report_.rel_gap_at_convergence = p.rel_gap;
      if (cfg_.run_until == RunUntil::Converged) stop_ = true;
    }
  }

  void finish() {
    if (report_.series.empty() || report_.series.back().event_index != events_)
      report_.series.push_back(point(events_));
    else
      report_.series.back() = point(events_);
    const SamplePoint& last = report_.series.back();
    report_.final_stddev = last.stddev;
    report_.avg_response_time = last.art;
    report_.wl_trigger_count = last.triggers;
    report_.total_io = last.total_io;
    report_.final_afp = last.afp;
    report_.final_rel_gap = last.rel_gap;
    report_.final_pe = array_.pe_counts();
    report_.io = array_.counters();
    report_.events = events_;
  }

  const ExperimentConfig& cfg_;
  ArrayLayout old_;
  ArrayState array_;
  AccessWindow window_;
  std::unique_ptr<Policy> policy_;
  ExperimentReport report_;
  uint64_t events_ = 0;
  uint64_t requests_ = 0;
  uint64_t triggers_ = 0;
  double summed_response_ = 0.0;
  ControllerPhase last_phase_ = ControllerPhase::Idle;
  bool stop_ = false;
};

}  // namespace

std::vector<Access> build_workload(const ExperimentConfig& cfg) {
  if (cfg.workload.source == WorkloadSource::Trace) {
    ParsedTrace t = parse_trace(cfg.workload.trace_path, cfg.geometry.page_size, cfg.unit_count());
    if (t.report.malformed)
      log::warn("trace: skipped " + std::to_string(t.report.malformed) + " malformed lines");
    return std::move(t.accesses);
  }
  return generate_synthetic(cfg.synthetic_spec());
}

ExperimentReport run(const ExperimentConfig& cfg, std::span<const Access> accesses) {
  cfg.validate();
  return Simulation(cfg).run(accesses);
}

ExperimentReport run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto accesses = build_workload(cfg);
  return Simulation(cfg).run(accesses);
}

ConvergenceResult total_io_until_converged(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.run_until = RunUntil::Converged;
  const ExperimentReport r = run(c);
  ConvergenceResult out;
  out.converged = r.converged;
  out.total_io = r.converged ? r.total_io_at_convergence : r.total_io;
  out.afp = r.converged ? r.afp_at_convergence : r.final_afp;
  return out;
}

}  // namespace pswl
